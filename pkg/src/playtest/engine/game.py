"""Compiled game runtime: deterministic stepping with bug witnessing.

compile_game() turns (spec, level) into a Game with precomputed rule lookup
tables so step() does no rule scanning.  For every ordered class pair the
compiler resolves, once, which shipped rule applies, which golden rule would
have applied, and which bug id explains a difference; pairs involving a
carry-conditional rule (winIfCarrying) are resolved per step against the
inventory.

Semantics, in resolution order for a move into a target cell:

* The avatar is resolved as actor against every sprite in the cell, sorted
  by instance id.  Any blockMove outcome blocks the whole move; a blocked
  move is a legal no-op that still turns the avatar and emits block events.
* pushActee moves the actee one cell onward iff no rule blocks it there;
  the pushed sprite is then resolved as actor against the sprites in its
  destination.  An infeasible push blocks the avatar.
* transformActee changes the actee's class in place.  A non-avatar actor
  (i.e. a pushed sprite) is consumed by the transformation; this is how two
  pushables can fuse into one new sprite.
* winIfCarrying matches only when its item requirement is satisfied (no
  argument means no requirement); otherwise resolution falls through to the
  next rule for the pair.
* `use` attacks the faced cell: it emits one event per sprite there and
  never changes state.  `nil` only advances the tick.
* Terminations run after effects, first match wins, only if still running.

Every event compares the shipped outcome with the golden outcome for the
same pair on the same state; a difference tags the event with the bug id
responsible (witnessing).
"""

from __future__ import annotations

import hashlib

from .types import (
    DIRS,
    LOSE,
    MOVE_ACTIONS,
    RUNNING,
    WIN,
    GameSpec,
    GameState,
    InteractionEvent,
    LevelMap,
    SteppedTerminalState,
)

ALL_ACTIONS = ("up", "down", "left", "right", "use", "nil")

# Semantic outcomes used to compare shipped vs golden behaviour for a pair.
_BLOCK = ("block",)


def _rule_outcome(rule, inventory):
    """Semantic outcome of a rule given the inventory; None = no match."""
    e = rule.effect
    if e == "winIfCarrying":
        if rule.arg is not None and rule.arg not in inventory:
            return None
        return ("win",)
    if e == "blockMove":
        return _BLOCK
    if e == "transformActee":
        return ("transform", rule.arg)
    if e == "collectItem":
        return ("collect", rule.arg)
    return (e,)


class _Pair:
    """Precompiled resolution for one ordered (actor, actee) class pair."""

    __slots__ = ("fast", "shipped", "golden")

    def __init__(self, shipped, golden):
        # shipped: [(rule, tag)], golden: [(rule, blame)] in list order.
        self.shipped = shipped
        self.golden = golden
        conditional = any(r.effect == "winIfCarrying" for r, _ in shipped + golden)
        if conditional:
            self.fast = None
        else:
            self.fast = self._resolve(())

    def _resolve(self, inventory):
        applied, tag = None, None
        out = None
        for rule, rule_tag in self.shipped:
            out = _rule_outcome(rule, inventory)
            if out is not None:
                applied, tag = rule, rule_tag
                break
        g_out, blame = None, None
        for rule, rule_blame in self.golden:
            g_out = _rule_outcome(rule, inventory)
            if g_out is not None:
                blame = rule_blame
                break
        if applied is None:
            out = None
        witness = None
        if out != g_out:
            witness = tag if tag is not None else blame
        return (applied, out, witness)

    def resolve(self, inventory):
        if self.fast is not None:
            return self.fast
        return self._resolve(inventory)


class Game:
    """A spec compiled against one level.  States are immutable snapshots."""

    def __init__(self, spec: GameSpec, level: LevelMap):
        self.spec = spec
        self.level = level
        self.width = level.width
        self.height = level.height
        self.move_cap = 10 * level.width * level.height
        self.avatar_class = next(s.name for s in spec.sprites if s.kind == "avatar")

        names = [s.name for s in spec.sprites]
        self.class_index = {n: i for i, n in enumerate(names)}

        golden = spec.golden if spec.golden is not None else spec
        self._compile_pairs(spec, golden)
        self._compile_terminations(spec, golden)
        self._split_static(spec, level)

        # Cells are packed as y * width + x.
        self._deltas = {a: DIRS[a][1] * self.width + DIRS[a][0] for a in MOVE_ACTIONS}
        digest = hashlib.blake2b(digest_size=8)
        from .parser import spec_to_text
        digest.update(spec_to_text(spec).encode())
        digest.update("\n".join(level.rows).encode())
        self.level_tag = digest.digest()

    # ── Compilation ──────────────────────────────────────────────────────

    def _compile_pairs(self, spec, golden):
        removed_by_rule = {}
        for index, rule, bug_id in spec.removed_rules:
            removed_by_rule[(index, rule)] = bug_id
        # Golden rules are blamed on the mutation that removed or altered
        # them; untouched rules carry no blame.
        altered_originals = {m.rule: m.bug_id for m in spec.mutations if m.kind == "alterRule"}
        removed_originals = {rule: bug_id for _, rule, bug_id in spec.removed_rules}

        shipped_by_pair: dict = {}
        tags = spec.rule_tags or (None,) * len(spec.interactions)
        for rule, tag in zip(spec.interactions, tags):
            shipped_by_pair.setdefault((rule.actor, rule.actee), []).append((rule, tag))
        golden_by_pair: dict = {}
        for rule in golden.interactions:
            blame = altered_originals.get(rule) or removed_originals.get(rule)
            golden_by_pair.setdefault((rule.actor, rule.actee), []).append((rule, blame))

        self._pairs = {}
        for pair in set(shipped_by_pair) | set(golden_by_pair):
            self._pairs[pair] = _Pair(shipped_by_pair.get(pair, []), golden_by_pair.get(pair, []))

    def _compile_terminations(self, spec, golden):
        tags = spec.term_tags or (None,) * len(spec.terminations)
        self._terminations = tuple(zip(spec.terminations, tags))
        self._golden_terminations = golden.terminations

    def _split_static(self, spec, level):
        """Partition level instances into static scenery and dynamic sprites.

        A class is dynamic if any shipped rule can move, destroy, transform,
        or collect it, if it can be produced by a transformation, or if it
        is the avatar.  Everything else never changes and stays out of the
        per-step state.
        """
        dynamic = {self.avatar_class}
        for rule in spec.interactions:
            if rule.effect in ("pushActee", "destroyActee", "collectItem"):
                dynamic.add(rule.actee)
            elif rule.effect == "transformActee":
                dynamic.add(rule.actee)
                dynamic.add(rule.arg)
                dynamic.add(rule.actor)   # non-avatar actors are consumed
            elif rule.effect == "destroyActor":
                dynamic.add(rule.actor)
        self.dynamic_classes = frozenset(dynamic)

        static_at: dict = {}
        init_dynamic = []
        avatar_id = None
        static_counts: dict = {}
        for sid, cls, (x, y) in level.sprites:
            idx = y * self.width + x
            if cls == self.avatar_class:
                avatar_id = sid
            elif cls in dynamic:
                init_dynamic.append((sid, cls, idx))
            else:
                static_at.setdefault(idx, []).append((sid, cls))
                static_counts[cls] = static_counts.get(cls, 0) + 1
        self._static_at = {idx: tuple(v) for idx, v in static_at.items()}
        self._static_counts = static_counts
        self._init_dynamic = tuple(init_dynamic)
        self._avatar_id = avatar_id
        ax, ay = level.avatar_cell
        self._avatar_start = ay * self.width + ax

    # ── State access ─────────────────────────────────────────────────────

    def initial_state(self) -> GameState:
        return GameState(
            tick=0,
            status=RUNNING,
            avatar=self._avatar_start,
            facing="up",
            inventory=(),
            sprites=self._init_dynamic,
        )

    def legal_actions(self, state: GameState) -> tuple:
        return ALL_ACTIONS if state.status == RUNNING else ()

    def cell_xy(self, idx: int) -> tuple:
        return (idx % self.width, idx // self.width)

    def sprites_at(self, state: GameState, idx: int) -> list:
        """All non-avatar (id, class) pairs at a packed cell, sorted by id."""
        here = [(sid, cls) for sid, cls, cell in state.sprites if cell == idx]
        static = self._static_at.get(idx)
        if static:
            here.extend(static)
            here.sort()
        return here

    def sprite_instances(self, state: GameState) -> list:
        """Full instance view (id, class, (x, y)) including statics and avatar."""
        out = []
        if state.avatar >= 0:
            out.append((self._avatar_id, self.avatar_class, self.cell_xy(state.avatar)))
        for sid, cls, cell in state.sprites:
            out.append((sid, cls, self.cell_xy(cell)))
        for idx, here in self._static_at.items():
            for sid, cls in here:
                out.append((sid, cls, self.cell_xy(idx)))
        out.sort()
        return out

    def _resolve(self, actor_cls, actee_cls, inventory):
        pair = self._pairs.get((actor_cls, actee_cls))
        if pair is None:
            return (None, None, None)
        return pair.resolve(inventory)

    # ── Stepping ─────────────────────────────────────────────────────────

    def step(self, state: GameState, action: str):
        """Advance one tick.  Returns (new_state, events)."""
        if state.status != RUNNING:
            raise SteppedTerminalState(f"cannot step a {state.status!r} state")
        tick = state.tick + 1

        if action == "nil":
            return state._replace(tick=tick), ()

        if action == "use":
            dx, dy = DIRS[state.facing]
            ax, ay = state.avatar % self.width, state.avatar // self.width
            tx, ty = ax + dx, ay + dy
            if not (0 <= tx < self.width and 0 <= ty < self.height):
                return state._replace(tick=tick), ()
            target = ty * self.width + tx
            events = tuple(
                InteractionEvent(tick, self.avatar_class, cls, "use", (tx, ty))
                for _, cls in self.sprites_at(state, target)
            )
            return state._replace(tick=tick), events

        # Movement.
        delta = self._deltas[action]
        dx, dy = DIRS[action]
        ax, ay = state.avatar % self.width, state.avatar // self.width
        tx, ty = ax + dx, ay + dy
        if not (0 <= tx < self.width and 0 <= ty < self.height):
            return state._replace(tick=tick, facing=action), ()
        target = state.avatar + delta
        target_xy = (tx, ty)
        inv = state.inventory
        av = self.avatar_class

        plans = [(sid, cls) + self._resolve(av, cls, inv)
                 for sid, cls in self.sprites_at(state, target)]
        blocked = any(out is not None and out[0] == "block" for _, _, _, out, _ in plans)

        # Push feasibility: every push plan must find its onward cell free.
        pushes = []   # (sid, cls, dest_idx, dest_xy, inner_plans)
        if not blocked:
            for sid, cls, rule, out, wit in plans:
                if out is None or out[0] != "pushActee":
                    continue
                px, py = tx + dx, ty + dy
                if not (0 <= px < self.width and 0 <= py < self.height):
                    blocked = True
                    pushes.append((sid, cls, None, None, []))
                    continue
                dest = target + delta
                inner = [(did, dcls) + self._resolve(cls, dcls, inv)
                         for did, dcls in self.sprites_at(state, dest)]
                if any(o is not None and o[0] == "block" for _, _, _, o, _ in inner):
                    blocked = True
                pushes.append((sid, cls, dest, (px, py), inner))

        events = []
        if blocked:
            # Legal no-op: turn, emit block events for the blocking pairs.
            for sid, cls, rule, out, wit in plans:
                if out is not None and out[0] == "block":
                    events.append(InteractionEvent(tick, av, cls, "blockMove", target_xy, wit))
            for sid, cls, dest, dest_xy, inner in pushes:
                events.append(InteractionEvent(tick, av, cls, "blockMove", target_xy))
                for did, dcls, prule, pout, pwit in inner:
                    if pout is not None and pout[0] == "block":
                        events.append(
                            InteractionEvent(tick, cls, dcls, "blockMove", dest_xy, pwit))
            return state._replace(tick=tick, facing=action), tuple(events)

        # The move happens.
        events.append(InteractionEvent(tick, av, "", "move", target_xy))
        dead = set()          # instance ids destroyed this step
        transforms = {}       # instance id -> new class
        moves = {}            # instance id -> new cell index
        inventory = state.inventory
        status = state.status
        avatar_alive = True

        def apply_outcome(actor_is_avatar, actor_sid, out):
            nonlocal inventory, status, avatar_alive
            kind = out[0]
            if kind == "destroyActee":
                return "kill_actee"
            if kind == "destroyActor":
                if actor_is_avatar:
                    avatar_alive = False
                else:
                    dead.add(actor_sid)
                return None
            if kind == "collect":
                inventory = tuple(sorted(inventory + (out[1],)))
                return "kill_actee"
            if kind == "transform":
                if not actor_is_avatar:
                    dead.add(actor_sid)   # fusion consumes the pushed actor
                return ("transform", out[1])
            if kind == "win":
                status = WIN
            return None

        for sid, cls, rule, out, wit in plans:
            if not avatar_alive:
                break
            if out is None:
                if wit is not None:
                    events.append(
                        InteractionEvent(tick, av, cls, "overlapAllowed", target_xy, wit))
                continue
            if sid in dead:
                continue
            if out[0] == "pushActee":
                events.append(InteractionEvent(tick, av, cls, "pushActee", target_xy, wit))
                continue
            name = rule.effect if rule is not None else "overlapAllowed"
            events.append(InteractionEvent(tick, av, cls, name, target_xy, wit))
            result = apply_outcome(True, None, out)
            if result == "kill_actee":
                dead.add(sid)
            elif result is not None:
                transforms[sid] = result[1]

        if avatar_alive:
            for sid, cls, dest, dest_xy, inner in pushes:
                if sid in dead:
                    continue
                consumed = False
                for did, dcls, prule, pout, pwit in inner:
                    if did in dead:
                        continue
                    if pout is None:
                        if pwit is not None:
                            events.append(InteractionEvent(
                                tick, cls, dcls, "overlapAllowed", dest_xy, pwit))
                        continue
                    name = prule.effect if prule is not None else "overlapAllowed"
                    events.append(InteractionEvent(tick, cls, dcls, name, dest_xy, pwit))
                    result = apply_outcome(False, sid, pout)
                    if result == "kill_actee":
                        dead.add(did)
                    elif result is not None:
                        transforms[did] = result[1]
                        if sid in dead:
                            consumed = True
                if not consumed and sid not in dead:
                    moves[sid] = dest

        if dead or transforms or moves:
            sprites = tuple(
                (sid, transforms.get(sid, cls), moves.get(sid, cell))
                for sid, cls, cell in state.sprites
                if sid not in dead
            )
        else:
            sprites = state.sprites

        new_state = GameState(
            tick=tick,
            status=status,
            avatar=target if avatar_alive else -1,
            facing=action,
            inventory=inventory,
            sprites=sprites,
        )
        if new_state.status == RUNNING:
            new_state = self._check_terminations(new_state, avatar_alive, events, tick)
        return new_state, tuple(events)

    def _count(self, state, cls, avatar_alive):
        if cls == self.avatar_class:
            return 1 if avatar_alive else 0
        n = self._static_counts.get(cls, 0)
        for _, c, _ in state.sprites:
            if c == cls:
                n += 1
        return n

    def _check_terminations(self, state, avatar_alive, events, tick):
        fired = None
        for (term, tag) in self._terminations:
            if self._count(state, term.cls, avatar_alive) == 0:
                fired = (term, tag)
                break
        golden_outcome = None
        for term in self._golden_terminations:
            if self._count(state, term.cls, avatar_alive) == 0:
                golden_outcome = term.outcome
                break
        if fired is None:
            return state
        term, tag = fired
        witness = tag if term.outcome != golden_outcome else None
        events.append(InteractionEvent(tick, term.cls, "", term.outcome, (0, 0), witness))
        return state._replace(status=WIN if term.outcome == "win" else LOSE)


def compile_game(spec: GameSpec, level: LevelMap) -> Game:
    return Game(spec, level)
