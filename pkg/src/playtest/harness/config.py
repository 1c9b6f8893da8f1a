"""Experiment configuration (TOML, schema v1).

    # experiment.toml
    [experiment]
    games = ["A", "B", "C"]
    levels = [1, 2, 3, 4]          # optional; default: every level
    agents = ["kbe", "fe", "mm", "br", "sp"]
    goal_types = ["synthetic", "baseline"]
    iterations = [800, 6000]       # and/or budget_ms = [40.0, 300.0]
    runs = 5
    seed_base = 1000
    paper_faithful = false         # advance goals at the criteria threshold
    coverage = "edges"             # goal-generation path coverage
    max_moves = 0                  # 0: use each game's own cap

Budgets are the union of the `iterations` and `budget_ms` lists; each entry
is one column of the experiment grid.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..mcts.config import AGENT_NAMES

SCHEMA_VERSION = 1
GOAL_TYPES = ("synthetic", "baseline")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class Budget:
    iterations: int = 0
    budget_ms: float = 0.0

    @property
    def label(self) -> str:
        if self.iterations:
            return f"{self.iterations}it"
        return f"{self.budget_ms:g}ms"


@dataclass(frozen=True)
class ExperimentConfig:
    games: tuple
    agents: tuple = AGENT_NAMES
    goal_types: tuple = GOAL_TYPES
    levels: tuple = ()            # empty: all levels of each game
    budgets: tuple = (Budget(iterations=600),)
    runs: int = 5
    seed_base: int = 0
    paper_faithful: bool = False
    coverage: str = "edges"
    max_moves: int = 0

    def __post_init__(self):
        if not self.games:
            raise ConfigError("config names no games")
        for agent in self.agents:
            if agent not in AGENT_NAMES:
                raise ConfigError(f"unknown agent {agent!r}")
        for gt in self.goal_types:
            if gt not in GOAL_TYPES:
                raise ConfigError(f"unknown goal type {gt!r}")
        if not self.budgets:
            raise ConfigError("config needs iterations and/or budget_ms")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")


def _as_list(value):
    return value if isinstance(value, list) else [value]


def parse_experiment_config(text: str) -> ExperimentConfig:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"bad TOML: {e}") from None
    section = doc.get("experiment")
    if not isinstance(section, dict):
        raise ConfigError("missing [experiment] section")
    known = {"games", "levels", "agents", "goal_types", "iterations", "budget_ms",
             "runs", "seed_base", "paper_faithful", "coverage", "max_moves"}
    unknown = set(section) - known
    if unknown:
        raise ConfigError(f"unknown experiment keys: {sorted(unknown)}")

    budgets = [Budget(iterations=int(n)) for n in _as_list(section.get("iterations", []))]
    budgets += [Budget(budget_ms=float(ms)) for ms in _as_list(section.get("budget_ms", []))]
    kwargs = dict(
        games=tuple(str(g) for g in _as_list(section.get("games", []))),
        budgets=tuple(budgets),
        runs=int(section.get("runs", 5)),
        seed_base=int(section.get("seed_base", 0)),
        paper_faithful=bool(section.get("paper_faithful", False)),
        coverage=str(section.get("coverage", "edges")),
        max_moves=int(section.get("max_moves", 0)),
    )
    if "levels" in section:
        kwargs["levels"] = tuple(int(v) for v in _as_list(section["levels"]))
    if "agents" in section:
        kwargs["agents"] = tuple(str(a) for a in _as_list(section["agents"]))
    if "goal_types" in section:
        kwargs["goal_types"] = tuple(str(g) for g in _as_list(section["goal_types"]))
    return ExperimentConfig(**kwargs)


def load_experiment_config(path) -> ExperimentConfig:
    try:
        with open(path, "rb") as fh:
            text = fh.read().decode()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    return parse_experiment_config(text)
