"""Budgeted tree search over (game state, test state, goal index) positions.

The tree is an explicit action tree whose nodes point at shared
transposition-table entries; reaching one position along two move orders
therefore pools statistics.  Descent re-simulates the path each iteration
(stepping the game and updating a per-iteration clone of the test state),
which keeps nodes tiny and guarantees a node's key stays valid: the same
action prefix from the root always reproduces the same position.

Tree reuse works across moves through re_root_tree: the committed action's
subtree keeps its node skeleton, the finished search's table becomes the
transfer source, and the new search starts with an empty table.  Whenever a
fresh entry's key is found in the transfer source it is seeded with the old
entry's mean as a single synthetic visit (fast expansion), and descent
continues below it instead of stopping to roll out.

Backpropagation walks the path leaf-first, folding per-edge evaluation
rewards into a discounted return, and routes every stat write through the
table so instrumented tables can observe them.
"""

from __future__ import annotations

import time
from typing import NamedTuple

from ..engine.keys import state_key
from ..engine.types import RUNNING
from .formulas import INF, boltzmann_probabilities, sample_index, uct_value
from .table import TranspositionTable


class SearchNode:
    __slots__ = ("key", "children", "untried", "counts")

    def __init__(self, key: int, actions):
        self.key = key
        self.children = {}
        self.untried = list(actions)
        self.counts = {}   # times the tree policy took each edge from here


class TransferRecord(NamedTuple):
    key: int
    visits: int        # entry stats right after seeding (always 1 visit)
    total: float
    best: float
    prev_visits: int   # source entry stats
    prev_mean: float


class SearchTree:
    """One search's working state, reusable across moves via re_root_tree."""

    def __init__(self, root, table: TranspositionTable, prev_table=None):
        self.root = root
        self.table = table
        self.prev_table = prev_table
        self.transfers = []
        self.norm_lo = INF
        self.norm_hi = -INF
        self.iterations = 0
        self.elapsed_ms = 0.0
        self.max_iter_ms = 0.0

    def note_return(self, value: float) -> None:
        if value < self.norm_lo:
            self.norm_lo = value
        if value > self.norm_hi:
            self.norm_hi = value

    @property
    def bounds(self):
        if self.norm_lo > self.norm_hi:
            return 0.0, 0.0
        return self.norm_lo, self.norm_hi


def fast_expansion_transfer(tree: SearchTree, entry) -> bool:
    """Seed a fresh entry from the previous search, if it was seen there.

    The old average becomes a single visit so new evidence outweighs stale
    evidence quickly.  Returns True when a transfer happened.
    """
    prev = tree.prev_table
    if prev is None:
        return False
    old = prev.get(entry.key)
    if old is None or old.visits == 0:
        return False
    mean = old.total / old.visits
    entry.visits = 1
    entry.total = mean
    entry.best = old.best
    entry.sumsq = mean * mean
    tree.note_return(mean)
    tree.note_return(old.best)
    tree.transfers.append(TransferRecord(
        entry.key, entry.visits, entry.total, entry.best, old.visits, mean))
    return True


def re_root_tree(tree: SearchTree, action: str) -> SearchTree:
    """Next move's tree: the committed action's subtree plus the finished
    search's statistics as transfer source."""
    child = tree.root.children.get(action)
    if child is not None:
        child.counts = {}   # each move's commitment reflects its own search
    return SearchTree(child, TranspositionTable(), prev_table=tree.table)


def _rollout(game, state, test, gi, ctx, cfg, rng) -> float:
    goals = ctx.seq.goals
    total = 0.0
    disc = 1.0
    for _ in range(cfg.rollout_depth):
        if state.status != RUNNING or gi >= len(goals):
            break
        goal = goals[gi]
        actions = game.legal_actions(state)
        if cfg.boltzmann_rollout:
            outcomes = [game.step(state, a) for a in actions]
            values = [ctx.reward_only(test, ev, goal) for _, ev in outcomes]
            pick = sample_index(boltzmann_probabilities(values, cfg.boltzmann_beta), rng)
            state, events = outcomes[pick]
            r = values[pick]
            test.apply(events, goal)
        else:
            action = actions[rng.randrange(len(actions))]
            state, events = game.step(state, action)
            r = ctx.apply_eval(test, events, goal)
        gi = ctx.advance_index(test, gi)
        total += disc * r
        disc *= cfg.gamma
    return total


def _descend_edge(game, ctx, state, test, gi, action):
    """Step one tree edge: environment, evaluation, goal advancement."""
    state, events = game.step(state, action)
    goals = ctx.seq.goals
    if gi < len(goals):
        r = ctx.apply_eval(test, events, goals[gi])
        gi = ctx.advance_index(test, gi)
    else:
        test.apply(events, None)
        r = 0.0
    return state, gi, r


def _select_child(tree, node, entry, cfg, rng):
    lo, hi = tree.bounds
    table = tree.table
    best_value = -INF
    best = []
    for action, child in node.children.items():
        value = uct_value(table.get(child.key), entry.visits, cfg, lo, hi)
        if value > best_value:
            best_value = value
            best = [(action, child)]
        elif value == best_value:
            best.append((action, child))
    return best[rng.randrange(len(best))] if len(best) > 1 else best[0]


def _iterate(game, tree, root_state, root_test, root_gi, ctx, cfg, rng) -> None:
    table = tree.table
    node = tree.root
    state = root_state
    test = root_test.clone()
    gi = root_gi

    entry, created = table.get_or_create(node.key)
    if created:
        fast_expansion_transfer(tree, entry)
    path = [entry]
    rewards = []
    rollout_return = 0.0

    while state.status == RUNNING:
        if node.untried:
            action = node.untried.pop(rng.randrange(len(node.untried)))
            node.counts[action] = node.counts.get(action, 0) + 1
            state, gi, r = _descend_edge(game, ctx, state, test, gi, action)
            child = SearchNode(state_key(state, test, gi, game),
                               game.legal_actions(state))
            node.children[action] = child
            node = child
            entry, created = table.get_or_create(child.key)
            path.append(entry)
            rewards.append(r)
            if created and fast_expansion_transfer(tree, entry):
                continue          # keep descending below a transferred entry
            # Fresh leaf, or a transposition hit whose entry this path's
            # update will join: either way estimate the position by rollout.
            rollout_return = _rollout(game, state, test, gi, ctx, cfg, rng)
            break
        if not node.children:
            break                 # no legal actions were available here
        action, child = _select_child(tree, node, entry, cfg, rng)
        node.counts[action] = node.counts.get(action, 0) + 1
        state, gi, r = _descend_edge(game, ctx, state, test, gi, action)
        entry, created = table.get_or_create(child.key)
        path.append(entry)
        rewards.append(r)
        node = child
        if created:
            # Known child node, first sighting this search: transfer and keep
            # going, or treat it as the new leaf.
            if fast_expansion_transfer(tree, entry):
                continue
            rollout_return = _rollout(game, state, test, gi, ctx, cfg, rng)
            break

    ret = rollout_return
    for entry, r in zip(reversed(path[1:]), reversed(rewards)):
        ret = r + cfg.gamma * ret
        table.update(entry, ret)
        tree.note_return(ret)
    table.update(path[0], ret)
    tree.note_return(ret)


def search(game, root_state, root_test, goal_index: int, ctx, cfg, rng,
           tree: SearchTree = None) -> SearchTree:
    """Run one budgeted search from the given position.

    Pass the re-rooted tree from the previous move to enable transfer;
    anything stale (no tree, or a root that does not match the position) is
    replaced while keeping the transfer source.
    """
    if not cfg.has_budget:
        raise ValueError("search needs an iteration or time budget")
    root_key = state_key(root_state, root_test, goal_index, game)
    if tree is None:
        tree = SearchTree(SearchNode(root_key, game.legal_actions(root_state)),
                          TranspositionTable())
    elif tree.root is None or tree.root.key != root_key:
        tree = SearchTree(SearchNode(root_key, game.legal_actions(root_state)),
                          TranspositionTable(), prev_table=tree.prev_table)

    start = time.perf_counter()
    iters = 0
    while True:
        t0 = time.perf_counter()
        _iterate(game, tree, root_state, root_test, goal_index, ctx, cfg, rng)
        dt_ms = (time.perf_counter() - t0) * 1000.0
        if dt_ms > tree.max_iter_ms:
            tree.max_iter_ms = dt_ms
        iters += 1
        if cfg.iterations > 0 and iters >= cfg.iterations:
            break
        if cfg.budget_ms > 0 and (time.perf_counter() - start) * 1000.0 >= cfg.budget_ms:
            break
    tree.iterations += iters
    tree.elapsed_ms = (time.perf_counter() - start) * 1000.0
    return tree


def best_action(tree: SearchTree, game, state, rng) -> str:
    """Committed move: the root action taken most often, mean return as
    tie-break.

    Edge counts, not child entry visits: entries are pooled across move
    orders, and an action that loops back into a frequently-shared position
    (stand still, step back) would inherit that position's whole visit
    count.
    """
    candidates = []
    table = tree.table
    counts = tree.root.counts
    for action, child in sorted(tree.root.children.items()):
        n = counts.get(action, 0)
        if n <= 0:
            continue
        e = table.get(child.key)
        mean = e.mean if e is not None and e.visits else 0.0
        candidates.append((n, mean, action))
    if not candidates:
        legal = game.legal_actions(state)
        return legal[rng.randrange(len(legal))]
    top = max(candidates)[:2]
    tied = [a for n, m, a in candidates if (n, m) == top]
    return tied[rng.randrange(len(tied))] if len(tied) > 1 else tied[0]
