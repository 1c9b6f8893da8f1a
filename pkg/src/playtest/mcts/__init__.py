"""Transposition-table UCT search with goal-directed evaluation."""

from .config import AGENT_NAMES, MctsConfig, agent_preset, config_digest, with_budget
from .episode import (
    EpisodeResult,
    SearchTiming,
    Trajectory,
    TrajectoryFormatError,
    parse_trajectory,
    play_episode,
    trajectory_text,
)
from .formulas import boltzmann_probabilities, sample_index, uct_value
from .search import (
    SearchNode,
    SearchTree,
    TransferRecord,
    best_action,
    fast_expansion_transfer,
    re_root_tree,
    search,
)
from .table import StatEntry, TranspositionTable

__all__ = [
    "AGENT_NAMES",
    "EpisodeResult",
    "MctsConfig",
    "SearchNode",
    "SearchTiming",
    "SearchTree",
    "StatEntry",
    "Trajectory",
    "TrajectoryFormatError",
    "TransferRecord",
    "TranspositionTable",
    "agent_preset",
    "best_action",
    "boltzmann_probabilities",
    "config_digest",
    "fast_expansion_transfer",
    "parse_trajectory",
    "play_episode",
    "re_root_tree",
    "sample_index",
    "search",
    "trajectory_text",
    "with_budget",
]
