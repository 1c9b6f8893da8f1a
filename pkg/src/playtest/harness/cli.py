"""Command line interface.

    playtest validate --game A
    playtest goals    --game A --goal-type synthetic --seed 3 --out goals.txt
    playtest run      --config exp.toml --out reports/
    playtest run      --game A --level 1 --agent kbe --iterations 600 --seed 5
    playtest replay   --file traj.txt
    playtest oracle   --game A --level 1 --depth 80
    playtest report   --from reports/runs.json --out reports/

Exit codes: 0 success, 1 diagnosed input/data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from ..engine.game import compile_game
from ..engine.types import SpecError
from ..games import UnknownGame, level_index, load_game
from ..mcts.config import AGENT_NAMES, agent_preset, config_digest
from ..mcts.episode import (
    Trajectory,
    TrajectoryFormatError,
    parse_trajectory,
    play_episode,
    trajectory_text,
)
from ..oracle import (
    BudgetExceeded,
    TrajectoryMismatch,
    bug_report_text,
    reachable_bugs,
    replay_and_detect,
)
from ..testmodel.goals import GoalFormatError, goal_file_text, paper_faithful
from ..testmodel.graph import (
    UnreachableAccept,
    generate_baseline_goals,
    generate_synthetic_goals,
)
from .config import GOAL_TYPES, ConfigError, load_experiment_config
from .report import load_report_bundle, write_report
from .runner import MissingAsset, run_experiment

USER_ERRORS = (SpecError, GoalFormatError, UnreachableAccept, ConfigError,
               MissingAsset, UnknownGame, TrajectoryFormatError,
               TrajectoryMismatch, BudgetExceeded, OSError, ValueError)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="playtest",
        description="Goal-directed game testing agents with a bug oracle.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="lint a game bundle end to end")
    p.add_argument("--game", required=True,
                   help="built-in name (A/B/C) or bundle directory")

    p = sub.add_parser("goals", help="generate goal files from a game graph")
    p.add_argument("--game", required=True)
    p.add_argument("--goal-type", choices=GOAL_TYPES, default="synthetic")
    p.add_argument("--coverage", choices=("edges", "paths"), default="edges")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paper-faithful", action="store_true")
    p.add_argument("--out", help="write goal file(s) here instead of stdout")

    p = sub.add_parser("run", help="run an experiment grid or one episode")
    p.add_argument("--config", help="experiment TOML; omit for single-episode mode")
    p.add_argument("--out", help="report directory (experiment mode)")
    p.add_argument("--seed", type=int, default=None,
                   help="experiment: overrides seed_base; episode: the seed")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--game")
    p.add_argument("--level", default="1")
    p.add_argument("--agent", choices=AGENT_NAMES, default="kbe")
    p.add_argument("--goal-type", choices=GOAL_TYPES, default="synthetic")
    p.add_argument("--iterations", type=int, default=0)
    p.add_argument("--budget-ms", type=float, default=0.0)
    p.add_argument("--paper-faithful", action="store_true")
    p.add_argument("--save-trajectory", help="episode mode: write the actions here")

    p = sub.add_parser("replay", help="replay a trajectory, report bugs")
    p.add_argument("--file", required=True)
    p.add_argument("--out", help="write the bug report here too")

    p = sub.add_parser("oracle", help="exhaustively reachable bugs per level")
    p.add_argument("--game", required=True)
    p.add_argument("--level", help="default: every level")
    p.add_argument("--depth", type=int, default=80)
    p.add_argument("--max-expansions", type=int, default=5_000_000)

    p = sub.add_parser("report", help="rebuild summary and figures from runs.json")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-figures", action="store_true")
    return parser


def _cmd_validate(args) -> int:
    bundle = load_game(args.game)
    print(f"{bundle.name}: spec OK "
          f"({len(bundle.golden.sprites)} classes, "
          f"{len(bundle.golden.interactions)} rules, "
          f"{len(bundle.golden.terminations)} terminations)")
    print(f"{bundle.name}: catalog OK ({len(bundle.catalog)} bugs)")
    for name, level in zip(bundle.level_names, bundle.levels):
        compile_game(bundle.golden, level)
        compile_game(bundle.shipped, level)
        print(f"{bundle.name}/{name}: {level.width}x{level.height} OK")
    n_base = len(generate_baseline_goals(bundle.graph))
    n_syn = len(generate_synthetic_goals(bundle.graph, bundle.golden,
                                         rng=random.Random(0)))
    print(f"{bundle.name}: graph OK ({len(bundle.graph.edges)} edges, "
          f"{n_base} baseline / {n_syn} synthetic sequences)")
    return 0


def _cmd_goals(args) -> int:
    bundle = load_game(args.game)
    if args.goal_type == "baseline":
        seqs = generate_baseline_goals(bundle.graph, args.coverage)
    else:
        seqs = generate_synthetic_goals(bundle.graph, bundle.golden,
                                        args.coverage, rng=random.Random(args.seed))
    if args.paper_faithful:
        seqs = tuple(paper_faithful(s) for s in seqs)
    texts = [goal_file_text(s) for s in seqs]
    if args.out is None:
        sys.stdout.write(f"# {len(texts)} sequence(s)\n".join([""] + texts))
        return 0
    out = Path(args.out)
    if len(texts) == 1:
        out.write_text(texts[0])
        print(out)
    else:
        for i, text in enumerate(texts, start=1):
            path = out.with_name(f"{out.stem}-{i}{out.suffix}")
            path.write_text(text)
            print(path)
    return 0


def _episode_goal_sequences(bundle, args):
    if args.goal_type == "baseline":
        seqs = generate_baseline_goals(bundle.graph)
    else:
        seed = args.seed if args.seed is not None else 0
        seqs = generate_synthetic_goals(bundle.graph, bundle.golden,
                                        rng=random.Random(seed))
    if args.paper_faithful:
        seqs = tuple(paper_faithful(s) for s in seqs)
    return seqs


def _cmd_run_episode(args) -> int:
    if not args.iterations and not args.budget_ms:
        print("episode mode needs --iterations or --budget-ms", file=sys.stderr)
        return 2
    bundle = load_game(args.game)
    li = level_index(bundle, args.level)
    game = compile_game(bundle.shipped, bundle.levels[li])
    cfg = agent_preset(args.agent, iterations=args.iterations,
                       budget_ms=args.budget_ms)
    seed = args.seed if args.seed is not None else 0
    rng = random.Random(seed)
    all_actions = []
    bugs: set = set()
    moves = 0
    for seq in _episode_goal_sequences(bundle, args):
        result = play_episode(game, seq, cfg, rng)
        report = replay_and_detect(game, result.actions, result.step_events)
        bugs.update(report.bugs)
        moves += report.moves
        all_actions.extend(result.actions)
        print(f"sequence done={result.goals_done} moves={report.moves} "
              f"status={report.final_status}")
    print(f"total moves={moves} bugs={len(bugs)}"
          + (f" [{';'.join(sorted(bugs))}]" if bugs else ""))
    if args.save_trajectory:
        traj = Trajectory(bundle.name, str(args.level), args.agent, seed,
                          config_digest(cfg), tuple(all_actions))
        Path(args.save_trajectory).write_text(trajectory_text(traj))
        print(args.save_trajectory)
    return 0


def _cmd_run(args) -> int:
    if args.config is None:
        if not args.game:
            print("run needs --config or --game", file=sys.stderr)
            return 2
        return _cmd_run_episode(args)
    config = load_experiment_config(args.config)
    if args.seed is not None:
        import dataclasses
        config = dataclasses.replace(config, seed_base=args.seed)
    if args.paper_faithful:
        import dataclasses
        config = dataclasses.replace(config, paper_faithful=True)
    bundle = run_experiment(config)
    if args.out:
        paths = write_report(bundle, args.out, figures=not args.no_figures)
        for key in ("runs_csv", "runs_json", "summary_csv", "summary_json"):
            print(paths[key])
        for fig in paths.get("figures", ()):
            print(fig)
    ok = sum(1 for r in bundle.rows if not r["error"])
    print(f"{ok}/{len(bundle.rows)} cells OK"
          + (" (partial)" if bundle.partial else ""))
    return 0


def _cmd_replay(args) -> int:
    traj = parse_trajectory(Path(args.file).read_text())
    bundle = load_game(traj.game)
    li = level_index(bundle, traj.level)
    game = compile_game(bundle.shipped, bundle.levels[li])
    report = replay_and_detect(game, traj.actions)
    text = bug_report_text(report)
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text)
    return 0


def _cmd_oracle(args) -> int:
    bundle = load_game(args.game)
    if args.level is not None:
        picked = [level_index(bundle, args.level)]
    else:
        picked = list(range(len(bundle.levels)))
    total = {m.bug_id for m in bundle.catalog}
    for li in picked:
        game = compile_game(bundle.shipped, bundle.levels[li])
        found = reachable_bugs(game, args.depth, args.max_expansions)
        name = bundle.level_names[li]
        print(f"{bundle.name}/{name} depth={args.depth}: "
              f"{len(found)}/{len(total)} bugs: {';'.join(sorted(found))}")
    return 0


def _cmd_report(args) -> int:
    bundle = load_report_bundle(args.source)
    paths = write_report(bundle, args.out, figures=not args.no_figures)
    for key in ("runs_csv", "runs_json", "summary_csv", "summary_json"):
        print(paths[key])
    for fig in paths.get("figures", ()):
        print(fig)
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "goals": _cmd_goals,
    "run": _cmd_run,
    "replay": _cmd_replay,
    "oracle": _cmd_oracle,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except USER_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
