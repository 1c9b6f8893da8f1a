"""Statistical summaries for run reports.

Confidence intervals use the two-sided Student t at 95%; behaviour
comparisons use cross entropy between smoothed interaction distributions.
Distributions are taken over (actor, actee, effect) triples: the cell is
dropped so that two runs touching the same mechanics in different places
compare as similar.
"""

from __future__ import annotations

import math
import statistics
from collections import Counter
from collections.abc import Mapping

from scipy.stats import t as student_t


class TooFewSamples(Exception):
    """An interval needs at least two samples."""


class EmptyReference(Exception):
    """Cross entropy against an empty reference distribution."""


def ci95(values) -> tuple:
    """(lo, hi) of the 95% t-interval around the sample mean."""
    values = list(values)
    n = len(values)
    if n < 2:
        raise TooFewSamples(f"need at least 2 samples, got {n}")
    mean = statistics.fmean(values)
    s = statistics.stdev(values)
    half = float(student_t.ppf(0.975, n - 1)) * s / math.sqrt(n)
    return (mean - half, mean + half)


def summarize_lengths(trajectories) -> tuple:
    """95% interval over episode lengths; accepts trajectories or lengths."""
    lengths = [len(t.actions) if hasattr(t, "actions") else t for t in trajectories]
    return ci95(lengths)


def _as_triple_counts(dist) -> Counter:
    """Normalize input into counts over (actor, actee, effect) triples.

    Accepts a mapping (keys may carry a cell component, counted with their
    values) or an iterable of keys/events (counted with multiplicity 1)."""
    counts: Counter = Counter()
    items = dist.items() if isinstance(dist, Mapping) else ((k, 1) for k in dist)
    for key, n in items:
        actor, actee, effect = key[0], key[1], key[2]
        counts[(actor, actee, effect)] += n
    return counts


def cross_entropy(reference, candidate, eps: float = 1e-6) -> float:
    """-sum p_ref * ln p_cand over the union support, both sides smoothed.

    Additive smoothing keeps the value finite when the candidate misses
    reference triples; by Gibbs' inequality the result is minimized when
    the two distributions agree.
    """
    ref = _as_triple_counts(reference)
    if not ref:
        raise EmptyReference("reference distribution has no interactions")
    cand = _as_triple_counts(candidate)
    support = sorted(set(ref) | set(cand))
    ref_total = sum(ref.values()) + eps * len(support)
    cand_total = sum(cand.values()) + eps * len(support)
    out = 0.0
    for triple in support:
        p = (ref[triple] + eps) / ref_total
        q = (cand[triple] + eps) / cand_total
        out -= p * math.log(q)
    return out


def triple_distribution(test) -> Counter:
    """Counts over interaction triples executed in a test state."""
    return _as_triple_counts(test.executed)
