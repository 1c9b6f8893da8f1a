"""Parsers for game specs, levels, and mutation catalogs.

Game spec files are UTF-8 text with four sections, each introduced by a
header line (`sprites:`, `interactions:`, `terminations:`, `levelmapping:`)
and holding one declaration per line.  `#` starts a comment anywhere on a
line; blank lines are ignored; indentation is not significant.  The exact
grammar is documented in docs/game-format.md and exercised by the
conformance spec in tests.
"""

from __future__ import annotations

from .types import (
    _ARG_EFFECTS,
    ACTIONS,
    EFFECTS,
    MUTATION_KINDS,
    OUTCOMES,
    SPRITE_KINDS,
    TERMINATION_PREDICATES,
    BugMutation,
    ConflictingMutations,
    DuplicateClass,
    GameSpec,
    InteractionRule,
    LevelError,
    LevelMap,
    SpecSyntaxError,
    SpriteClass,
    TerminationRule,
    UndeclaredClass,
)

_SECTIONS = ("sprites", "interactions", "terminations", "levelmapping")


def _logical_lines(text: str):
    """Yield (line_number, stripped_content) skipping blanks and comments."""
    for i, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield i, content


def _parse_effect_token(token: str, line: int) -> tuple:
    """Split `effect` or `effect(arg)` into (effect, arg or None)."""
    if "(" in token:
        if not token.endswith(")"):
            raise SpecSyntaxError(line, 1, f"malformed effect {token!r}")
        name, arg = token[:-1].split("(", 1)
        arg = arg.strip() or None
    else:
        name, arg = token, None
    if name not in EFFECTS:
        raise SpecSyntaxError(line, 1, f"unknown effect {name!r}")
    if arg is not None and name not in _ARG_EFFECTS:
        raise SpecSyntaxError(line, 1, f"effect {name!r} takes no argument")
    if arg is None and name in ("transformActee", "collectItem"):
        raise SpecSyntaxError(line, 1, f"effect {name!r} requires a class argument")
    return name, arg


# ── Game specs ───────────────────────────────────────────────────────────────

def parse_game_spec(text: str, name: str = "game") -> GameSpec:
    """Parse a game spec file into a validated GameSpec."""
    sections: dict = {s: [] for s in _SECTIONS}
    current = None
    for line_no, content in _logical_lines(text):
        if content.endswith(":") and content[:-1].lower() in _SECTIONS:
            current = content[:-1].lower()
            if sections[current]:
                raise SpecSyntaxError(line_no, 1, f"duplicate section {current!r}")
            continue
        if current is None:
            raise SpecSyntaxError(line_no, 1, "declaration outside any section")
        sections[current].append((line_no, content))
    for s in _SECTIONS:
        if not sections[s] and s != "terminations":
            raise SpecSyntaxError(0, 0, f"missing section {s!r}")

    sprites = []
    seen = set()
    for line_no, content in sections["sprites"]:
        parts = content.split()
        sprite_name = parts[0]
        if sprite_name in seen:
            raise DuplicateClass(sprite_name)
        seen.add(sprite_name)
        kind = None
        props = []
        for p in parts[1:]:
            if "=" not in p:
                raise SpecSyntaxError(line_no, 1, f"expected key=value, got {p!r}")
            k, v = p.split("=", 1)
            if k == "kind":
                kind = v
            else:
                props.append((k, v))
        if kind is None:
            raise SpecSyntaxError(line_no, 1, f"sprite {sprite_name!r} missing kind=")
        if kind not in SPRITE_KINDS:
            raise SpecSyntaxError(line_no, 1, f"unknown sprite kind {kind!r}")
        sprites.append(SpriteClass(sprite_name, kind, tuple(sorted(props))))
    declared = {s.name for s in sprites}

    def check_class(cls: str, where: str):
        if cls not in declared:
            raise UndeclaredClass(cls, where)

    interactions = []
    for line_no, content in sections["interactions"]:
        parts = content.split()
        if len(parts) != 3:
            raise SpecSyntaxError(line_no, 1, "interaction must be: actor actee effect")
        actor, actee, effect_token = parts
        check_class(actor, f"interaction (line {line_no})")
        check_class(actee, f"interaction (line {line_no})")
        effect, arg = _parse_effect_token(effect_token, line_no)
        if arg is not None:
            check_class(arg, f"effect argument (line {line_no})")
        interactions.append(InteractionRule(actor, actee, effect, arg))

    terminations = []
    for line_no, content in sections["terminations"]:
        parts = content.split()
        if len(parts) != 3:
            raise SpecSyntaxError(line_no, 1, "termination must be: predicate class outcome")
        pred, cls, outcome = parts
        if pred not in TERMINATION_PREDICATES:
            raise SpecSyntaxError(line_no, 1, f"unknown predicate {pred!r}")
        if outcome not in OUTCOMES:
            raise SpecSyntaxError(line_no, 1, f"unknown outcome {outcome!r}")
        check_class(cls, f"termination (line {line_no})")
        terminations.append(TerminationRule(pred, cls, outcome))

    mapping = []
    seen_chars = set()
    for line_no, content in sections["levelmapping"]:
        parts = content.split()
        if len(parts) < 2 or len(parts[0]) != 1:
            raise SpecSyntaxError(line_no, 1, "mapping must be: <char> class [class ...]")
        char = parts[0]
        if char in seen_chars:
            raise SpecSyntaxError(line_no, 1, f"duplicate mapping for {char!r}")
        seen_chars.add(char)
        for cls in parts[1:]:
            check_class(cls, f"level mapping (line {line_no})")
        mapping.append((char, tuple(parts[1:])))

    avatar_classes = [s.name for s in sprites if s.kind == "avatar"]
    if len(avatar_classes) != 1:
        raise SpecSyntaxError(0, 0, f"expected exactly one avatar class, found {len(avatar_classes)}")

    return GameSpec(
        name=name,
        sprites=tuple(sprites),
        interactions=tuple(interactions),
        terminations=tuple(terminations),
        level_mapping=tuple(mapping),
    )


def spec_to_text(spec: GameSpec) -> str:
    """Canonical serialization; parse_game_spec(spec_to_text(s)) round-trips."""
    out = ["sprites:"]
    for s in spec.sprites:
        props = "".join(f" {k}={v}" for k, v in s.properties)
        out.append(f"  {s.name} kind={s.kind}{props}")
    out.append("interactions:")
    for r in spec.interactions:
        out.append(f"  {r.text()}")
    out.append("terminations:")
    for t in spec.terminations:
        out.append(f"  {t.text()}")
    out.append("levelmapping:")
    for char, classes in spec.level_mapping:
        out.append(f"  {char} {' '.join(classes)}")
    return "\n".join(out) + "\n"


# ── Levels ───────────────────────────────────────────────────────────────────

def parse_level(text: str, spec: GameSpec) -> LevelMap:
    """Parse an ASCII level grid against a spec's level mapping.

    Instances are numbered row-major, following mapping order within a cell.
    Floor-kind classes are background and produce no instances.  The border
    must consist of wall-kind sprites and the grid must contain exactly one
    avatar.
    """
    rows = [r for r in text.splitlines() if r.strip()]
    if not rows:
        raise LevelError("empty level")
    width = len(rows[0])
    height = len(rows)
    mapping = spec.mapping_dict()
    kinds = {s.name: s.kind for s in spec.sprites}

    sprites = []
    avatar_cells = []
    next_id = 0
    for y, row in enumerate(rows):
        if len(row) != width:
            raise LevelError(f"row has length {len(row)}, expected {width}", y + 1)
        for x, char in enumerate(row):
            if char not in mapping:
                raise LevelError(f"character {char!r} not in level mapping", y + 1)
            border = x in (0, width - 1) or y in (0, height - 1)
            cell_kinds = [kinds[c] for c in mapping[char]]
            if border and (not cell_kinds or any(k != "wall" for k in cell_kinds)):
                raise LevelError(f"border cell ({x},{y}) must hold wall-kind sprites", y + 1)
            for cls in mapping[char]:
                if kinds[cls] == "floor":
                    continue
                sprites.append((next_id, cls, (x, y)))
                if kinds[cls] == "avatar":
                    avatar_cells.append((x, y))
                next_id += 1
    if len(avatar_cells) != 1:
        raise LevelError(f"level must contain exactly one avatar, found {len(avatar_cells)}")
    return LevelMap(width, height, tuple(sprites), avatar_cells[0], tuple(rows))


# ── Mutation catalogs ────────────────────────────────────────────────────────

def _parse_rule_tokens(actor: str, actee: str, effect_token: str, line: int,
                       declared: set) -> InteractionRule:
    for cls in (actor, actee):
        if cls not in declared:
            raise UndeclaredClass(cls, f"mutation catalog (line {line})")
    effect, arg = _parse_effect_token(effect_token, line)
    if arg is not None and arg not in declared:
        raise UndeclaredClass(arg, f"mutation catalog (line {line})")
    return InteractionRule(actor, actee, effect, arg)


def parse_mutation_catalog(text: str, spec: GameSpec) -> tuple:
    """Parse a mutation catalog: one `bugId kind payload` line per mutation.

    Line formats:
        ID removeRule <actor> <actee> <effect>
        ID addRule <index> <actor> <actee> <effect>
        ID alterRule <actor> <actee> <oldEffect> <newEffect>
        ID alterTermination <predicate> <class> <oldOutcome> <newOutcome>

    removeRule/alterRule targets must exist in the spec; alterTermination
    targets must match an existing termination.  Bug ids must be unique.
    """
    declared = {s.name for s in spec.sprites}
    mutations = []
    seen_ids = set()
    for line_no, content in _logical_lines(text):
        parts = content.split()
        if len(parts) < 2:
            raise SpecSyntaxError(line_no, 1, "mutation needs: bugId kind payload")
        bug_id, kind = parts[0], parts[1]
        if bug_id in seen_ids:
            raise SpecSyntaxError(line_no, 1, f"duplicate bug id {bug_id!r}")
        seen_ids.add(bug_id)
        if kind not in MUTATION_KINDS:
            raise SpecSyntaxError(line_no, 1, f"unknown mutation kind {kind!r}")
        rest = parts[2:]
        if kind == "removeRule":
            if len(rest) != 3:
                raise SpecSyntaxError(line_no, 1, "removeRule needs: actor actee effect")
            rule = _parse_rule_tokens(*rest, line_no, declared)
            if rule not in spec.interactions:
                raise SpecSyntaxError(line_no, 1, f"rule {rule.text()!r} not in spec")
            mutations.append(BugMutation(bug_id, kind, rule=rule))
        elif kind == "addRule":
            if len(rest) != 4:
                raise SpecSyntaxError(line_no, 1, "addRule needs: index actor actee effect")
            try:
                index = int(rest[0])
            except ValueError:
                raise SpecSyntaxError(line_no, 1, f"bad index {rest[0]!r}") from None
            rule = _parse_rule_tokens(*rest[1:], line_no, declared)
            if not 0 <= index <= len(spec.interactions):
                raise SpecSyntaxError(line_no, 1, f"index {index} out of range")
            mutations.append(BugMutation(bug_id, kind, rule=rule, index=index))
        elif kind == "alterRule":
            if len(rest) != 4:
                raise SpecSyntaxError(line_no, 1, "alterRule needs: actor actee oldEffect newEffect")
            old = _parse_rule_tokens(rest[0], rest[1], rest[2], line_no, declared)
            new = _parse_rule_tokens(rest[0], rest[1], rest[3], line_no, declared)
            if old not in spec.interactions:
                raise SpecSyntaxError(line_no, 1, f"rule {old.text()!r} not in spec")
            mutations.append(BugMutation(bug_id, kind, rule=old, new_rule=new))
        else:  # alterTermination
            if len(rest) != 4:
                raise SpecSyntaxError(line_no, 1, "alterTermination needs: predicate class old new")
            pred, cls, old_out, new_out = rest
            if pred not in TERMINATION_PREDICATES or old_out not in OUTCOMES or new_out not in OUTCOMES:
                raise SpecSyntaxError(line_no, 1, "bad termination payload")
            if cls not in declared:
                raise UndeclaredClass(cls, f"mutation catalog (line {line_no})")
            old_t = TerminationRule(pred, cls, old_out)
            if old_t not in spec.terminations:
                raise SpecSyntaxError(line_no, 1, f"termination {old_t.text()!r} not in spec")
            mutations.append(BugMutation(bug_id, kind, term=old_t,
                                         new_term=TerminationRule(pred, cls, new_out)))
    return tuple(mutations)
