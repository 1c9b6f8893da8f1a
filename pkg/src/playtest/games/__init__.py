"""Built-in game bundles and the on-disk bundle layout.

A bundle directory holds:

    spec.txt      the intended (golden) game rules
    level*.txt    ASCII level grids, sorted lexically
    bugs.txt      mutation catalog planting the shipped build's bugs
    graph.txt     the game graph goal generation starts from

load_game accepts a built-in name ("game_a", or just "A") or a directory
path.  The returned bundle carries both builds: `golden` as authored and
`shipped` with the catalog applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..engine.mutate import apply_mutations
from ..engine.parser import parse_game_spec, parse_level, parse_mutation_catalog
from ..testmodel.graph import parse_graph, validate_graph

BUILTIN_GAMES = ("game_a", "game_b", "game_c")


class UnknownGame(Exception):
    pass


def canonical_name(name: str) -> str:
    """'A', 'a', and 'game_a' all name the same bundle."""
    flat = name.strip().lower()
    if flat in BUILTIN_GAMES:
        return flat
    if f"game_{flat}" in BUILTIN_GAMES:
        return f"game_{flat}"
    raise UnknownGame(f"unknown game {name!r}; built-ins: {', '.join(BUILTIN_GAMES)}")


@dataclass(frozen=True)
class GameBundle:
    name: str
    golden: object       # GameSpec as authored
    shipped: object      # GameSpec with the catalog applied
    catalog: tuple       # BugMutation records
    levels: tuple        # LevelMap per level file, in file order
    level_names: tuple
    graph: object        # GameGraph


def _load_from_files(name: str, files: dict) -> GameBundle:
    golden = parse_game_spec(files["spec.txt"], name=name)
    catalog = parse_mutation_catalog(files["bugs.txt"], golden)
    shipped = apply_mutations(golden, catalog)
    level_names = tuple(sorted(k for k in files if k.startswith("level")))
    if not level_names:
        raise UnknownGame(f"bundle {name!r} has no level files")
    levels = tuple(parse_level(files[k], golden) for k in level_names)
    graph = parse_graph(files["graph.txt"])
    validate_graph(graph, golden)
    return GameBundle(name, golden, shipped, catalog, levels, level_names, graph)


def load_game_dir(path) -> GameBundle:
    path = Path(path)
    files = {p.name: p.read_text() for p in sorted(path.glob("*.txt"))}
    for required in ("spec.txt", "bugs.txt", "graph.txt"):
        if required not in files:
            raise UnknownGame(f"{path} is missing {required}")
    return _load_from_files(path.name, files)


def load_game(name: str) -> GameBundle:
    if "/" in str(name) or str(name).startswith(".") or Path(str(name)).is_dir():
        return load_game_dir(name)
    flat = canonical_name(str(name))
    root = resources.files(__package__).joinpath(f"data/{flat}")
    files = {
        entry.name: entry.read_text()
        for entry in root.iterdir()
        if entry.name.endswith(".txt")
    }
    return _load_from_files(flat, files)


def level_index(bundle: GameBundle, label) -> int:
    """Level selector: 1-based index or file name, as used on the CLI."""
    text = str(label)
    if text in bundle.level_names:
        return bundle.level_names.index(text)
    if f"level{text}.txt" in bundle.level_names:
        return bundle.level_names.index(f"level{text}.txt")
    raise UnknownGame(f"game {bundle.name!r} has no level {label!r} "
                      f"(have {', '.join(bundle.level_names)})")
