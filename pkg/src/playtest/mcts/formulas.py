"""Node-selection and rollout-policy formulas.

uct_value scores a child entry from its parent's perspective.  The
exploitation term is normalized into [0, 1] against the lo/hi bounds the
caller tracks over backpropagated returns (a degenerate span reads as 0.5);
the single-player third term intentionally works on raw, unnormalized
scores, matching its D constant's scale.
"""

from __future__ import annotations

import math

INF = float("inf")


def _normalize(value: float, lo: float, hi: float) -> float:
    span = hi - lo
    if span <= 0.0:
        return 0.5
    return (value - lo) / span


def uct_value(entry, parent_visits: int, cfg, lo: float = 0.0, hi: float = 1.0) -> float:
    """Selection score of a child entry; unvisited children rank first."""
    if entry is None or entry.visits == 0:
        return INF
    n = entry.visits
    mean = entry.total / n
    exploit = _normalize(mean, lo, hi)
    if cfg.mixmax:
        best = _normalize(entry.best, lo, hi)
        q = cfg.mixmax_q
        exploit = q * best + (1.0 - q) * exploit
    parent = max(parent_visits, 1)
    value = exploit + 2.0 * cfg.cp * math.sqrt(2.0 * math.log(parent) / n)
    if cfg.sp_uct:
        if cfg.sp_variance_correct:
            spread = entry.sumsq - n * mean * mean
        else:
            spread = entry.sumsq - n * mean
        value += math.sqrt(max(spread + cfg.sp_d, 0.0) / n)
    return value


def boltzmann_probabilities(values, beta: float) -> list:
    """Softmax over `values` at inverse temperature `beta`."""
    if not values:
        raise ValueError("no values to weigh")
    m = max(values)
    exps = [math.exp(beta * (v - m)) for v in values]
    z = sum(exps)
    return [e / z for e in exps]


def sample_index(probabilities, rng) -> int:
    """Index drawn from a categorical distribution."""
    x = rng.random()
    acc = 0.0
    for i, p in enumerate(probabilities):
        acc += p
        if x < acc:
            return i
    return len(probabilities) - 1
