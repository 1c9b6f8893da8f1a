"""Game graphs: parsing, path selection, baseline and synthetic sequences."""

import random

import pytest

from playtest.testmodel.goals import GoalFormatError, Matcher
from playtest.testmodel.graph import (
    GameGraph,
    GraphEdge,
    UnreachableAccept,
    generate_baseline_goals,
    generate_synthetic_goals,
    parse_graph,
    select_paths,
    validate_graph,
)

QUEST = """\
# two routes to the exit
start avatar/key/collectItem hasKey
hasKey avatar/door/winIfCarrying done
start avatar/gem/collectItem rich
rich avatar/door/winIfCarrying done
"""


def test_parse_graph():
    graph = parse_graph(QUEST)
    assert graph.start == "start"
    assert graph.accepting == frozenset({"done"})
    assert len(graph.edges) == 4
    assert graph.edges[0] == GraphEdge(
        "start", Matcher("avatar", "key", "collectItem"), "hasKey")
    assert graph.nodes == frozenset({"start", "hasKey", "rich", "done"})


def test_parse_graph_errors():
    with pytest.raises(UnreachableAccept):
        parse_graph("# only comments\n")
    with pytest.raises(GoalFormatError):
        parse_graph("start avatar/key hasKey")
    with pytest.raises(GoalFormatError):
        parse_graph("start avatar/key/collectItem hasKey extra")


def test_validate_graph_checks_classes(toy_spec):
    validate_graph(parse_graph(QUEST), toy_spec)
    with pytest.raises(GoalFormatError):
        validate_graph(parse_graph("start avatar/dragon/use done"), toy_spec)


def test_dead_end_is_not_accepting():
    graph = parse_graph(QUEST + "start avatar/wall/blockMove start\n")
    assert graph.accepting == frozenset({"done"})


def test_select_paths_all_edges_covers_every_edge():
    graph = parse_graph(QUEST)
    paths = select_paths(graph, "edges")
    used = {i for p in paths for i in p}
    assert used == {0, 1, 2, 3}
    assert len(paths) == 2  # one per route; nothing redundant


def test_select_paths_all_paths():
    graph = parse_graph(QUEST)
    assert len(select_paths(graph, "paths")) == 2


def test_select_paths_is_deterministic():
    graph = parse_graph(QUEST)
    assert select_paths(graph) == select_paths(graph)


def test_select_paths_unknown_coverage():
    with pytest.raises(ValueError):
        select_paths(parse_graph(QUEST), "nodes")


def test_select_paths_no_accepting_route():
    # A cycle with no sink: every node is somebody's source.
    graph = parse_graph("a x/y/use b\nb x/y/use a\n")
    assert graph.accepting == frozenset()
    with pytest.raises(UnreachableAccept):
        select_paths(graph)


def test_simple_paths_do_not_revisit_nodes():
    looped = parse_graph(QUEST + "hasKey avatar/gem/collectItem start\n")
    for path in select_paths(looped, "paths"):
        nodes = [looped.edges[path[0]].src] + [looped.edges[i].dst for i in path]
        assert len(nodes) == len(set(nodes))


# ── Baseline sequences ───────────────────────────────────────────────────────


def test_baseline_goals_one_per_edge():
    graph = parse_graph(QUEST)
    sequences = generate_baseline_goals(graph)
    assert len(sequences) == 2
    for seq, edges in zip(sequences, select_paths(graph)):
        assert len(seq.goals) == len(edges)
        for goal, edge_index in zip(seq.goals, edges):
            (feature,) = goal.features   # unmodified: exactly the edge
            assert feature.matcher == graph.edges[edge_index].matcher
            assert feature.criterion == 1.0


def test_baseline_goal_names_are_unique():
    names = set()
    for seq in generate_baseline_goals(parse_graph(QUEST)):
        for goal in seq.goals:
            assert goal.name not in names
            names.add(goal.name)


def test_baseline_is_deterministic():
    a = generate_baseline_goals(parse_graph(QUEST))
    b = generate_baseline_goals(parse_graph(QUEST))
    assert a == b


# ── Synthetic sequences ──────────────────────────────────────────────────────


def test_synthetic_keeps_edge_features(toy_spec):
    graph = parse_graph(QUEST)
    for seq, base in zip(generate_synthetic_goals(graph, toy_spec, rng=random.Random(7)),
                         generate_baseline_goals(graph)):
        assert len(seq.goals) == len(base.goals)
        for goal, base_goal in zip(seq.goals, base.goals):
            assert goal.features[0] == base_goal.features[0]
            assert len(goal.features) > 1  # probes were injected


def test_synthetic_probes_avoid_edge_matcher(toy_spec):
    graph = parse_graph(QUEST)
    for seq in generate_synthetic_goals(graph, toy_spec, rng=random.Random(3)):
        for goal in seq.goals:
            edge = goal.features[0].matcher
            assert all(f.matcher != edge for f in goal.features[1:])
            matchers = [f.matcher for f in goal.features]
            assert len(matchers) == len(set(matchers))


def test_synthetic_deterministic_per_seed(toy_spec):
    graph = parse_graph(QUEST)
    a = generate_synthetic_goals(graph, toy_spec, rng=random.Random(11))
    b = generate_synthetic_goals(graph, toy_spec, rng=random.Random(11))
    c = generate_synthetic_goals(graph, toy_spec, rng=random.Random(12))
    assert a == b
    assert a != c  # different seed, different probe draw


def test_synthetic_covers_same_edges(toy_spec):
    graph = parse_graph(QUEST)
    base = generate_baseline_goals(graph)
    synth = generate_synthetic_goals(graph, toy_spec, rng=random.Random(5))
    base_edges = [[g.features[0].matcher for g in s.goals] for s in base]
    synth_edges = [[g.features[0].matcher for g in s.goals] for s in synth]
    assert base_edges == synth_edges


def test_synthetic_always_probes_push_pairs(toy_spec):
    # Object-object contact only happens through pushing, so every goal
    # carries the avatar-pushable contact probe.
    graph = parse_graph(QUEST)
    for seq in generate_synthetic_goals(graph, toy_spec, rng=random.Random(9)):
        for goal in seq.goals:
            probed = {f.matcher for f in goal.features[1:]}
            assert Matcher("avatar", "box", None) in probed or \
                goal.features[0].matcher == Matcher("avatar", "box", None)


def test_synthetic_probe_shape(toy_spec):
    # One attack probe plus the rider and three or four sampled contacts.
    graph = parse_graph(QUEST)
    for seq in generate_synthetic_goals(graph, toy_spec, rng=random.Random(2)):
        for goal in seq.goals:
            probes = goal.features[1:]
            attacks = [f for f in probes if f.matcher.effect == "use"]
            contacts = [f for f in probes if f.matcher.effect is None]
            assert len(attacks) <= 1
            assert 1 <= len(contacts) <= 6
            for f in probes:
                assert f.criterion <= 0.25  # probes stay light


def test_synthetic_default_rng(toy_spec):
    graph = parse_graph(QUEST)
    assert generate_synthetic_goals(graph, toy_spec) == generate_synthetic_goals(
        graph, toy_spec, rng=random.Random(0))


def test_probe_pools_use_golden_rules(toy_spec, toy_shipped_spec):
    # Shipped specs draw probes from the golden rule table, so bugged
    # catalogs cannot change which pairs get probed.
    graph = parse_graph(QUEST)
    golden = generate_synthetic_goals(graph, toy_spec, rng=random.Random(4))
    shipped = generate_synthetic_goals(graph, toy_shipped_spec, rng=random.Random(4))
    assert golden == shipped
