"""Applying and reverting bug mutations.

A shipped spec is the golden spec with a catalog of mutations applied.  Two
mutations may not touch the same ordered (actor, actee) pair or the same
termination predicate: that keeps every behavioural divergence attributable
to exactly one bug id.  Application is order-independent under that rule.
"""

from __future__ import annotations

from dataclasses import replace

from .types import BugMutation, ConflictingMutations, GameSpec


def _target(m: BugMutation) -> tuple:
    if m.kind == "alterTermination":
        return ("termination", m.term.predicate, m.term.cls)
    return ("pair", m.rule.actor, m.rule.actee)


def apply_mutations(spec: GameSpec, mutations) -> GameSpec:
    """Return the shipped spec: golden rules with the catalog applied.

    The result records, per rule, which bug id produced it (added/altered
    rules), plus the golden rules that were removed and where they sat, so
    the step loop can attribute divergence and revert_mutations can rebuild
    the golden spec.
    """
    mutations = tuple(mutations)
    seen: dict = {}
    for m in mutations:
        t = _target(m)
        if t in seen:
            raise ConflictingMutations(seen[t], m.bug_id, str(t))
        seen[t] = m.bug_id

    removals = {m.rule: m.bug_id for m in mutations if m.kind == "removeRule"}
    alterations = {m.rule: (m.new_rule, m.bug_id) for m in mutations if m.kind == "alterRule"}
    additions: dict = {}
    for m in mutations:
        if m.kind == "addRule":
            additions.setdefault(m.index, []).append((m.rule, m.bug_id))

    interactions = []
    tags = []
    removed = []
    for i, rule in enumerate(spec.interactions):
        for added, bug_id in additions.get(i, ()):
            interactions.append(added)
            tags.append(bug_id)
        if rule in removals:
            removed.append((i, rule, removals[rule]))
        elif rule in alterations:
            new_rule, bug_id = alterations[rule]
            interactions.append(new_rule)
            tags.append(bug_id)
        else:
            interactions.append(rule)
            tags.append(None)
    for added, bug_id in additions.get(len(spec.interactions), ()):
        interactions.append(added)
        tags.append(bug_id)

    term_alter = {m.term: (m.new_term, m.bug_id) for m in mutations if m.kind == "alterTermination"}
    terminations = []
    term_tags = []
    for t in spec.terminations:
        if t in term_alter:
            new_t, bug_id = term_alter[t]
            terminations.append(new_t)
            term_tags.append(bug_id)
        else:
            terminations.append(t)
            term_tags.append(None)

    return replace(
        spec,
        interactions=tuple(interactions),
        terminations=tuple(terminations),
        golden=spec,
        rule_tags=tuple(tags),
        removed_rules=tuple(removed),
        term_tags=tuple(term_tags),
        mutations=mutations,
    )


def revert_mutations(shipped: GameSpec) -> GameSpec:
    """Reconstruct the golden spec from a shipped spec's own bookkeeping.

    Does not consult shipped.golden; the round-trip test checks the result
    serializes byte-identically to the original.
    """
    by_id = {m.bug_id: m for m in shipped.mutations}
    interactions = []
    for rule, tag in zip(shipped.interactions, shipped.rule_tags):
        if tag is None:
            interactions.append(rule)
            continue
        m = by_id[tag]
        if m.kind == "addRule":
            continue
        interactions.append(m.rule)   # alterRule: restore the original
    # Re-insert removed rules at their golden positions, ascending.
    for index, rule, _ in sorted(shipped.removed_rules):
        interactions.insert(index, rule)

    terminations = []
    for term, tag in zip(shipped.terminations, shipped.term_tags):
        terminations.append(by_id[tag].term if tag is not None else term)

    return replace(
        shipped,
        interactions=tuple(interactions),
        terminations=tuple(terminations),
        golden=None,
        rule_tags=(),
        removed_rules=(),
        term_tags=(),
        mutations=(),
    )
