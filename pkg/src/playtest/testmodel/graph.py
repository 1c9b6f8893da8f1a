"""Game graphs and goal-sequence generation.

A game graph is a small story automaton: nodes are progress states, edges
are labelled with the interaction that moves the player forward.  Graph
files are edge lists, one `from matcher to` per line; the start node is the
first edge's source and accepting nodes are the sinks.

Baseline sequences turn each selected start-to-accept path into one goal
per edge.  Synthetic sequences take the same paths and inject unintended-
transition features (attack probes, contact probes) drawn from the spec's
sprite classes and blocking rules, which is what points the agent at the
interactions players are not supposed to need.
"""

from __future__ import annotations

import random
from typing import NamedTuple

from .goals import Feature, GoalFormatError, GoalSequence, Matcher, TestGoal, parse_matcher


class UnreachableAccept(Exception):
    """The graph has no path from start to an accepting node."""


class GraphEdge(NamedTuple):
    src: str
    matcher: Matcher
    dst: str


class GameGraph(NamedTuple):
    edges: tuple
    start: str
    accepting: frozenset

    @property
    def nodes(self) -> frozenset:
        out = set()
        for e in self.edges:
            out.add(e.src)
            out.add(e.dst)
        return frozenset(out)


def parse_graph(text: str) -> GameGraph:
    edges = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        parts = content.split()
        if len(parts) != 3:
            raise GoalFormatError(line_no, "edge must be: from matcher to")
        src, matcher_text, dst = parts
        edges.append(GraphEdge(src, parse_matcher(matcher_text, line_no), dst))
    if not edges:
        raise UnreachableAccept("graph has no edges")
    sources = {e.src for e in edges}
    dests = {e.dst for e in edges}
    accepting = frozenset(dests - sources)
    return GameGraph(tuple(edges), edges[0].src, accepting)


def validate_graph(graph: GameGraph, spec) -> None:
    """Check every edge matcher references declared sprite classes."""
    declared = {s.name for s in spec.sprites}
    for e in graph.edges:
        for cls in (e.matcher.actor, e.matcher.actee):
            if cls not in (None, "") and cls not in declared:
                raise GoalFormatError(0, f"graph references undeclared class {cls!r}")


def _simple_paths(graph: GameGraph) -> list:
    """All simple start-to-accept paths as tuples of edge indexes."""
    by_src: dict = {}
    for i, e in enumerate(graph.edges):
        by_src.setdefault(e.src, []).append(i)
    paths = []

    def walk(node, visited, acc):
        if node in graph.accepting and acc:
            paths.append(tuple(acc))
            return
        for i in by_src.get(node, ()):
            edge = graph.edges[i]
            if edge.dst in visited:
                continue
            acc.append(i)
            walk(edge.dst, visited | {edge.dst}, acc)
            acc.pop()

    walk(graph.start, {graph.start}, [])
    paths.sort(key=lambda p: (len(p), p))
    return paths


def select_paths(graph: GameGraph, coverage: str = "edges") -> list:
    """Deterministic path set achieving the requested coverage."""
    paths = _simple_paths(graph)
    if not paths:
        raise UnreachableAccept(f"no path from {graph.start!r} to an accepting node")
    if coverage == "paths":
        return paths
    if coverage != "edges":
        raise ValueError(f"unknown coverage {coverage!r}")
    covered: set = set()
    selected = []
    # Greedy set cover over the edges that lie on at least one accepting path.
    coverable: set = set()
    for p in paths:
        coverable.update(p)
    while covered != coverable:
        best = max(paths, key=lambda p: (len(set(p) - covered), -len(p), [-i for i in p]))
        gain = set(best) - covered
        if not gain:
            break
        covered.update(gain)
        selected.append(best)
    return selected


def _slug(matcher: Matcher) -> str:
    return matcher.text().replace("/", "-").replace("*", "any").replace("@", "-at-").replace(",", "-")


def _path_sequence(graph: GameGraph, path, seq_name: str, extras=None) -> GoalSequence:
    goals = []
    for k, edge_index in enumerate(path):
        edge = graph.edges[edge_index]
        features = [Feature(edge.matcher, weight=5.0, criterion=1.0)]
        if extras is not None:
            features.extend(extras[k])
        goals.append(TestGoal(f"{seq_name}-g{k + 1}-{_slug(edge.matcher)}", tuple(features)))
    return GoalSequence(tuple(goals))


def generate_baseline_goals(graph: GameGraph, coverage: str = "edges") -> tuple:
    """One sequence per selected path, one single-feature goal per edge."""
    paths = select_paths(graph, coverage)
    return tuple(
        _path_sequence(graph, path, f"p{i + 1}") for i, path in enumerate(paths)
    )


def _probe_pools(spec) -> tuple:
    """(attack probes, contact probes) derived from the spec.

    Attack probes swing at every non-floor class.  Contact probes touch
    every non-floor class with a wildcard effect, so they are satisfied by
    the contact however it resolves, intended or not; classes the avatar
    can shove contribute object-to-object pairs as well.  Probes use a
    light criterion: touching one or two instances of a class is enough,
    the point is steering play toward the pair at all.
    """
    avatar = next(s.name for s in spec.sprites if s.kind == "avatar")
    source = spec.golden if spec.golden is not None else spec
    names = sorted(s.name for s in spec.sprites
                   if s.kind not in ("floor", "avatar"))
    attacks = [Feature(Matcher(avatar, n, "use"), 1.0, 0.05) for n in names]
    contacts = [Feature(Matcher(avatar, n, None), 1.0, 0.05) for n in names]
    pushables = sorted({r.actee for r in source.interactions
                        if r.effect == "pushActee" and r.actor == avatar})
    for p in pushables:
        contacts.extend(Feature(Matcher(p, n, None), 1.0, 0.05)
                        for n in names)
    return attacks, contacts


def generate_synthetic_goals(graph: GameGraph, spec, coverage: str = "edges",
                             rng=None) -> tuple:
    """Baseline paths with injected unintended-transition features.

    Each goal gets one attack probe and three or four contact probes,
    sampled deterministically from the seeded rng.  Two seeds may modify
    the paths differently; both cover the same edges.
    """
    if rng is None:
        rng = random.Random(0)
    paths = select_paths(graph, coverage)
    attacks, contacts = _probe_pools(spec)
    # Avatar-pushable pairs ride along on every goal: object-object
    # interactions only ever happen through a push, so leaving them to the
    # sample draw would make most goals blind to half the rule table.
    source = spec.golden if spec.golden is not None else spec
    avatar = next(s.name for s in spec.sprites if s.kind == "avatar")
    pushables = {r.actee for r in source.interactions
                 if r.effect == "pushActee" and r.actor == avatar}
    pushed = [f for f in contacts
              if f.matcher.actor == avatar and f.matcher.actee in pushables]
    sequences = []
    for i, path in enumerate(paths):
        extras = []
        for edge_index in path:
            edge_matcher = graph.edges[edge_index].matcher
            chosen = list(pushed)
            if attacks:
                chosen.append(rng.choice(attacks))
            if contacts:
                take = min(rng.randint(3, 4), len(contacts))
                chosen.extend(rng.sample(contacts, take))
            chosen = [f for f in chosen if f.matcher != edge_matcher]
            # Drop duplicate matchers while keeping order.
            unique = []
            for f in chosen:
                if all(f.matcher != g.matcher for g in unique):
                    unique.append(f)
            extras.append(unique)
        sequences.append(_path_sequence(graph, path, f"p{i + 1}", extras))
    return tuple(sequences)
