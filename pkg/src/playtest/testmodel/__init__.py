"""Test state tracking, goal models, and goal-directed evaluation."""

from .goals import (
    Feature,
    GoalFormatError,
    GoalSequence,
    Matcher,
    SequenceExhausted,
    TestGoal,
    goal_file_text,
    paper_faithful,
    parse_goal_file,
    parse_matcher,
)
from .graph import (
    GameGraph,
    GraphEdge,
    UnreachableAccept,
    generate_baseline_goals,
    generate_synthetic_goals,
    parse_graph,
    select_paths,
    validate_graph,
)
from .rewards import (
    EvalContext,
    advance_goal,
    eval_kbe,
    fulfillment,
)
from .teststate import (
    InteractionKey,
    TestState,
    event_key,
    feature_target,
    update_test_state,
)

__all__ = [
    "EvalContext",
    "Feature",
    "GameGraph",
    "GoalFormatError",
    "GoalSequence",
    "GraphEdge",
    "InteractionKey",
    "Matcher",
    "SequenceExhausted",
    "TestGoal",
    "TestState",
    "UnreachableAccept",
    "advance_goal",
    "eval_kbe",
    "event_key",
    "feature_target",
    "fulfillment",
    "generate_baseline_goals",
    "generate_synthetic_goals",
    "goal_file_text",
    "paper_faithful",
    "parse_goal_file",
    "parse_matcher",
    "select_paths",
    "update_test_state",
    "validate_graph",
]
