"""Goal-directed game-testing agents for grid games with planted bugs.

The package splits into:

* engine: game specs, levels, mutation catalogs, deterministic stepping
  with bug witnessing;
* testmodel: test state, goals and their fulfillment, reward evaluation,
  goal generation from game graphs;
* mcts: transposition-table UCT search and the episode driver;
* oracle: trajectory replay and exhaustive bug reachability;
* metrics: confidence intervals and interaction cross entropy;
* harness: experiment runner, reports, and the `playtest` CLI.
"""

from . import engine, games, harness, mcts, metrics, oracle, testmodel

__version__ = "0.1.0"

__all__ = ["engine", "games", "harness", "mcts", "metrics", "oracle",
           "testmodel", "__version__"]
