"""Tree sets and tree-decompositions: the edge tree set order, the
orientation-based realisation of regular tree sets, torsos, and the tree of
tree-decompositions."""

import itertools
import random

import pytest

from tangleforge.core import (
    Graph,
    Separation,
    canonical,
    mask_of,
    vertices_of,
)
from tangleforge.errors import PreconditionError
from tangleforge.profiles import (
    distinguishes,
    efficient_distinguishers,
    enumerate_k_profiles,
    profile_flags,
)
from tangleforge.treedec import (
    build_totd,
    edge_tree_set,
    induced_separations,
    torso,
    treeset_to_treedecomposition,
    verify_treedecomposition,
)
from tangleforge.verify import random_regular_tree_set


def sep(a, b):
    return Separation(mask_of(a), mask_of(b))


# ---------------------------------------------------------------------------
# edge tree sets

def test_edge_tree_set_of_path_is_a_chain():
    ets = edge_tree_set((0, 1, 2), [(0, 1), (1, 2)])
    assert ets.leq((0, 1), (1, 2))
    assert not ets.leq((1, 2), (0, 1))
    assert ets.leq((2, 1), (1, 0))


def test_edge_tree_set_of_star():
    ets = edge_tree_set((0, 1, 2, 3), [(0, 1), (0, 2), (0, 3)])
    inward = [(1, 0), (2, 0), (3, 0)]
    for e, f in itertools.combinations(inward, 2):
        assert not ets.leq(e, f) and not ets.leq(f, e)
        # but each inward edge sits below the others' reversals
        assert ets.leq(e, (f[1], f[0]))


def test_edge_tree_set_order_matches_path_membership_oracle():
    nodes = (0, 1, 2, 3, 4)
    edges = [(0, 1), (1, 2), (2, 3), (1, 4)]
    ets = edge_tree_set(nodes, edges)
    adj = {v: set() for v in nodes}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)

    def path(a, b):
        prev = {a: None}
        stack = [a]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in prev:
                    prev[y] = x
                    stack.append(y)
        out = [b]
        while out[-1] != a:
            out.append(prev[out[-1]])
        return out

    for e in ets.oriented:
        for f in ets.oriented:
            expected = e[1] in path(e[0], f[1]) and f[0] in path(e[0], f[1])
            assert ets.leq(e, f) == expected


def test_edge_tree_set_rejects_non_trees():
    with pytest.raises(PreconditionError):
        edge_tree_set((0, 1, 2), [(0, 1), (1, 2), (2, 0)])


# ---------------------------------------------------------------------------
# tree set -> tree-decomposition

def test_single_separation_on_path():
    p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    td = treeset_to_treedecomposition(p3, [sep([0, 1], [1, 2])])
    assert sorted(vertices_of(td.bags[t]) for t in td.nodes) == [(0, 1), (1, 2)]


def test_empty_tree_set_gives_single_bag(graphs):
    g = graphs["FIX_P4"]
    td = treeset_to_treedecomposition(g, [])
    assert len(td.nodes) == 1
    assert td.bags[td.nodes[0]] == g.vertices


def test_two_k4_tree_set(graphs):
    g = graphs["FIX_2K4"]
    n_set = [sep([0, 1, 2, 3], [3, 4, 5, 6, 7]), sep([0, 1, 2, 3, 4], [4, 5, 6, 7])]
    td = treeset_to_treedecomposition(g, n_set)
    bags = sorted(vertices_of(td.bags[t]) for t in td.nodes)
    assert bags == [(0, 1, 2, 3), (3, 4), (4, 5, 6, 7)]
    # the tree is a path with the {3,4} bag in the middle
    middle = next(t for t in td.nodes if td.bags[t] == mask_of([3, 4]))
    assert sum(1 for e in td.edges if middle in e) == 2


def test_small_members_rejected(graphs):
    g = graphs["FIX_P4"]
    with pytest.raises(PreconditionError):
        treeset_to_treedecomposition(g, [sep([0], [0, 1, 2, 3])])


def test_crossing_members_rejected(graphs):
    g = graphs["FIX_C4"]
    with pytest.raises(PreconditionError):
        treeset_to_treedecomposition(
            g, [sep([0, 1, 2], [2, 3, 0]), sep([1, 2, 3], [3, 0, 1])]
        )


def test_non_separation_rejected(graphs):
    with pytest.raises(PreconditionError):
        treeset_to_treedecomposition(graphs["FIX_P4"], [sep([0, 1], [2, 3])])


def test_roundtrip_on_random_regular_tree_sets(graphs):
    rng = random.Random(5)
    for trial in range(25):
        g = graphs[sorted(graphs)[trial % len(graphs)]]
        n_set = random_regular_tree_set(g, rng, max_size=rng.randint(1, 8))
        td = treeset_to_treedecomposition(g, n_set)
        assert set(induced_separations(td)) == set(n_set)
        assert verify_treedecomposition(g, td).ok


# ---------------------------------------------------------------------------
# verification

def test_verify_flags_dropped_bag_vertex(graphs):
    g = graphs["FIX_P4"]
    td = treeset_to_treedecomposition(g, [sep([0, 1], [1, 2, 3])])
    broken = type(td)(
        td.nodes,
        td.edges,
        {t: td.bags[t] & ~(1 << 3) for t in td.nodes},
    )
    rep = verify_treedecomposition(g, broken)
    assert any(axiom == "T1" for axiom, _ in rep.violations)


def test_verify_flags_edge_outside_bags(graphs):
    g = graphs["FIX_C4"]
    td = treeset_to_treedecomposition(g, [])
    broken = type(td)(td.nodes, td.edges, {td.nodes[0]: mask_of([0, 1, 2])})
    rep = verify_treedecomposition(g, broken)
    assert any(axiom == "T1" for axiom, _ in rep.violations) or any(
        axiom == "T2" for axiom, _ in rep.violations
    )


# ---------------------------------------------------------------------------
# torsos

def test_torso_of_leaf_bag_is_k4(graphs):
    g = graphs["FIX_2K4"]
    n_set = [sep([0, 1, 2, 3], [3, 4, 5, 6, 7]), sep([0, 1, 2, 3, 4], [4, 5, 6, 7])]
    td = treeset_to_treedecomposition(g, n_set)
    leaf = next(t for t in td.nodes if td.bags[t] == mask_of([0, 1, 2, 3]))
    h = torso(g, td, leaf)
    assert h.vertices == mask_of([0, 1, 2, 3])
    for u, v in itertools.combinations(range(4), 2):
        assert h.adj[u] >> v & 1


def test_torso_of_single_bag_is_graph(graphs):
    g = graphs["FIX_P4"]
    td = treeset_to_treedecomposition(g, [])
    assert torso(g, td, td.nodes[0]) == g


def test_torso_of_middle_bag_is_bridge_edge(graphs):
    g = graphs["FIX_2K4"]
    n_set = [sep([0, 1, 2, 3], [3, 4, 5, 6, 7]), sep([0, 1, 2, 3, 4], [4, 5, 6, 7])]
    td = treeset_to_treedecomposition(g, n_set)
    middle = next(t for t in td.nodes if td.bags[t] == mask_of([3, 4]))
    h = torso(g, td, middle)
    assert h.vertices == mask_of([3, 4])
    assert h.adj[3] >> 4 & 1


def test_torso_completes_adhesion_sets(graphs):
    # C4 split along the {1,3} diagonal: each bag's torso gains the 1-3
    # edge, which the cycle itself does not have
    g = graphs["FIX_C4"]
    td = treeset_to_treedecomposition(g, [sep([0, 1, 3], [1, 2, 3])])
    assert not g.adj[1] >> 3 & 1
    for t in td.nodes:
        h = torso(g, td, t)
        assert h.adj[1] >> 3 & 1 and h.adj[3] >> 1 & 1


# ---------------------------------------------------------------------------
# trees of tree-decompositions

def totd_profiles(g):
    out = []
    for p in enumerate_k_profiles(g, 2):
        flags = profile_flags(g, p)
        if flags.regular and flags.robust and flags.principal:
            out.append(p)
    return out


def test_build_totd_two_k4(graphs):
    g = graphs["FIX_2K4"]
    profs = totd_profiles(g)
    totd = build_totd(g, profs)  # certification runs inside
    assert totd.depth[totd.root] == 0
    root_bags = sorted(vertices_of(totd.td_at[0].bags[t]) for t in totd.td_at[0].nodes)
    assert root_bags == [(0, 1, 2, 3), (3, 4), (4, 5, 6, 7)]
    assert len(totd.children[0]) == 3
    for child in totd.children[0]:
        assert len(totd.td_at[child].nodes) == 1  # trivial decompositions
        assert not totd.children[child]


def test_build_totd_singleton_profile_set(graphs):
    g = graphs["FIX_2K4"]
    profs = totd_profiles(g)[:1]
    totd = build_totd(g, profs)
    assert totd.nodes == (0,)
    assert len(totd.td_at[0].nodes) == 1
    assert totd.td_at[0].bags[0] == g.vertices


def test_build_totd_rejects_disconnected(graphs):
    g = graphs["FIX_2K2"]
    profs = list(enumerate_k_profiles(g, 1))
    with pytest.raises(PreconditionError):
        build_totd(g, profs)


def test_build_totd_equivariant_under_swap(graphs):
    g = graphs["FIX_2K4"]
    profs = totd_profiles(g)
    totd = build_totd(g, profs)
    swap = {v: 7 - v for v in range(8)}
    root_bags = sorted(vertices_of(totd.td_at[0].bags[t]) for t in totd.td_at[0].nodes)
    mapped = sorted(
        tuple(sorted(swap[v] for v in bag)) for bag in root_bags
    )
    assert mapped == root_bags
    child_sets = sorted(vertices_of(totd.graph_at[c].vertices) for c in totd.children[0])
    mapped_children = sorted(tuple(sorted(swap[v] for v in vs)) for vs in child_sets)
    assert mapped_children == child_sets


def test_totd_distinguishes_every_pair(graphs):
    g = graphs["FIX_2K4"]
    profs = totd_profiles(g)
    totd = build_totd(g, profs)
    for p, q in itertools.combinations(profs, 2):
        dset = efficient_distinguishers(g, p, q)
        hit = False
        for s in dset.seps:
            for t in totd.nodes:
                vt = totd.graph_at[t].vertices
                if canonical(Separation(s.a & vt, s.b & vt)) in induced_separations(
                    totd.td_at[t]
                ):
                    hit = True
        assert hit


def test_totd_on_triangle_ring(triring, triring_profiles):
    totd = build_totd(triring, triring_profiles, check_flags=False)
    # separators have size 2, so levels run to depth 2 with the real
    # decompositions at depth 1
    assert max(totd.depth.values()) == 2
    root_td = totd.td_at[totd.root]
    assert len(root_td.nodes) == 1  # no size-1 separators: trivial root
    depth1 = [t for t in totd.nodes if totd.depth[t] == 1]
    assert len(depth1) == 1
    td1 = totd.td_at[depth1[0]]
    assert len(td1.nodes) == 5  # four triangles around a centre
