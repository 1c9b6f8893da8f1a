"""Search configuration and the named agent presets.

Every agent shares the same transposition-table UCT core and goal-directed
evaluation; presets differ by switching exactly one extra mechanism on:

* kbe: the base agent
* fe:  tree reuse between moves with fast-expansion stat transfer
* mm:  MixMax blending of best and mean outcome in the exploitation term
* br:  Boltzmann-weighted action choice in rollouts
* sp:  single-player UCT third term (and its customary larger cp)
"""

from __future__ import annotations

import dataclasses
import hashlib
from dataclasses import dataclass


@dataclass(frozen=True)
class MctsConfig:
    cp: float = 0.95
    gamma: float = 0.95
    rollout_depth: int = 6
    iterations: int = 0          # 0 means no iteration budget
    budget_ms: float = 0.0       # 0 means no time budget
    tree_reuse: bool = False
    mixmax: bool = False
    mixmax_q: float = 0.25
    boltzmann_rollout: bool = False
    boltzmann_beta: float = 0.5
    sp_uct: bool = False
    sp_d: float = 10000.0
    # The printed third-term variance expression subtracts n*mean rather
    # than n*mean^2; this flag switches to the corrected form.
    sp_variance_correct: bool = False

    def __post_init__(self):
        if self.iterations < 0 or self.budget_ms < 0:
            raise ValueError("budgets cannot be negative")
        if not 0.0 <= self.mixmax_q <= 1.0:
            raise ValueError("mixmax_q must be in [0, 1]")

    @property
    def has_budget(self) -> bool:
        return self.iterations > 0 or self.budget_ms > 0


_PRESETS = {
    "kbe": {},
    "fe": {"tree_reuse": True},
    "mm": {"mixmax": True},
    "br": {"boltzmann_rollout": True},
    "sp": {"sp_uct": True, "cp": 3.0},
}

AGENT_NAMES = tuple(_PRESETS)


def agent_preset(name: str, **overrides) -> MctsConfig:
    """Named configuration, optionally overridden (budgets, thresholds...)."""
    if name not in _PRESETS:
        raise ValueError(f"unknown agent {name!r}; expected one of {AGENT_NAMES}")
    kwargs = dict(_PRESETS[name])
    kwargs.update(overrides)
    return MctsConfig(**kwargs)


def with_budget(cfg: MctsConfig, iterations: int = 0, budget_ms: float = 0.0) -> MctsConfig:
    return dataclasses.replace(cfg, iterations=iterations, budget_ms=budget_ms)


def config_digest(cfg: MctsConfig) -> str:
    """Short stable fingerprint, recorded in trajectory files and reports."""
    text = ",".join(
        f"{f.name}={getattr(cfg, f.name)!r}" for f in dataclasses.fields(cfg)
    )
    return hashlib.blake2b(text.encode(), digest_size=6).hexdigest()
