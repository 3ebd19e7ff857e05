"""Both splinter engines: the finite fix-and-restrict algorithm and the
canonical levelwise thin splinter, plus their hypothesis checkers."""

import itertools

import pytest

from tangleforge import oracles
from tangleforge.core import (
    Separation,
    canonical,
    graph_universe,
    mask_of,
)
from tangleforge.errors import HypothesisError, PreconditionError
from tangleforge.profiles import efficient_distinguishers, enumerate_k_profiles
from tangleforge.splinter import (
    FiniteSplinterFamily,
    SplinterInstance,
    crossing_number,
    crossing_profile,
    is_corner,
    splinter_finite,
    splinters_check,
    thin_splinter,
    thinly_splinters_check,
    validate_instance,
)
from tangleforge.verify import random_splinter_instances


def sep(a, b):
    return Separation(mask_of(a), mask_of(b))


# ---------------------------------------------------------------------------
# the finite splinter condition

def test_single_family_always_splinters(graphs):
    u = graph_universe(graphs["FIX_P4"])
    fam = FiniteSplinterFamily(u, (frozenset({canonical(sep([0, 1], [1, 2, 3]))}),))
    ok, witness = splinters_check(fam)
    assert ok and witness is None


def test_crossing_singletons_without_corners_fail(graphs):
    g = graphs["FIX_C4"]
    u = graph_universe(g)
    d1 = canonical(sep([0, 1, 2], [2, 3, 0]))
    d2 = canonical(sep([1, 2, 3], [3, 0, 1]))
    fam = FiniteSplinterFamily(u, (frozenset({d1}), frozenset({d2})))
    ok, witness = splinters_check(fam)
    assert not ok
    i, j, s, t = witness
    assert {s, t} == {d1, d2}


def test_grid_distinguisher_families_splinter(graphs):
    g = graphs["FIX_GRID33"]
    profs = enumerate_k_profiles(g, 3, max_sk=64)
    fams = []
    for p, q in itertools.combinations(profs, 2):
        d = efficient_distinguishers(g, p, q)
        if d.seps:
            fams.append(frozenset(d.seps))
    ok, _ = splinters_check(FiniteSplinterFamily(graph_universe(g), tuple(fams)))
    assert ok


def test_empty_family_rejected(graphs):
    u = graph_universe(graphs["FIX_P4"])
    with pytest.raises(PreconditionError):
        FiniteSplinterFamily(u, (frozenset(),))


# ---------------------------------------------------------------------------
# the finite splinter algorithm

def test_single_family_transversal(graphs):
    u = graph_universe(graphs["FIX_P4"])
    member = canonical(sep([0, 1], [1, 2, 3]))
    fam = FiniteSplinterFamily(u, (frozenset({member}),))
    assert splinter_finite(fam) == (member,)


def test_two_k4_distinguisher_transversal(graphs):
    from tangleforge.core import is_nested

    g = graphs["FIX_2K4"]
    profs = [p for p in enumerate_k_profiles(g, 2) if p.is_regular(g)]
    fams = []
    for p, q in itertools.combinations(profs, 2):
        d = efficient_distinguishers(g, p, q)
        assert d.seps
        fams.append(frozenset(d.seps))
    picks = splinter_finite(FiniteSplinterFamily(graph_universe(g), tuple(fams)))
    assert len(picks) == len(fams)
    for x, y in itertools.combinations(picks, 2):
        assert is_nested(x, y)


def test_splinter_finite_raises_on_non_splintering_input(graphs):
    g = graphs["FIX_C4"]
    u = graph_universe(g)
    d1 = canonical(sep([0, 1, 2], [2, 3, 0]))
    d2 = canonical(sep([1, 2, 3], [3, 0, 1]))
    with pytest.raises(HypothesisError):
        splinter_finite(FiniteSplinterFamily(u, (frozenset({d1}), frozenset({d2}))))


def test_random_instances_property(graphs):
    from tangleforge.splinter import _nested

    for inst in random_splinter_instances(seed=11, count=40):
        picks = splinter_finite(inst)
        u = inst.universe
        for x, y in itertools.combinations(picks, 2):
            assert _nested(u, x, y)
        assert oracles.brute_nested_transversal_exists(u, inst.families)


# ---------------------------------------------------------------------------
# abstract thin splinter instances

def chain_instance():
    """Three elements, all pairwise nested, two families at levels 1 and 2."""
    nested = lambda a, b: True
    return SplinterInstance(
        elements=("x", "y", "z"),
        families={"f1": {"x", "y"}, "f2": {"z"}},
        orders={"f1": 1, "f2": 2},
        nested=nested,
    )


def crossing_instance():
    """a and b cross; the corner c is nested with everything and sits in
    both families, giving property (3) its witness."""
    crossing = {("a", "b"), ("b", "a")}
    return SplinterInstance(
        elements=("a", "b", "c"),
        families={"f1": {"a", "c"}, "f2": {"b", "c"}},
        orders={"f1": 1, "f2": 1},
        nested=lambda x, y: (x, y) not in crossing,
    )


def cornerless_instance():
    crossing = {("a", "b"), ("b", "a")}
    return SplinterInstance(
        elements=("a", "b"),
        families={"f1": {"a"}, "f2": {"b"}},
        orders={"f1": 1, "f2": 1},
        nested=lambda x, y: (x, y) not in crossing,
    )


def test_validate_instance_relation():
    inst = chain_instance()
    assert validate_instance(inst) == []
    bad = SplinterInstance(
        elements=("a", "b"),
        families={"f": {"a"}},
        orders={"f": 0},
        nested=lambda x, y: (x, y) == ("a", "b"),
    )
    problems = validate_instance(bad)
    assert ("reflexivity", "a") in problems


def test_crossing_number_counts_level_members():
    inst = crossing_instance()
    assert crossing_number(inst, "a", 1) == 1  # b crosses a at level 1
    assert crossing_number(inst, "c", 1) == 0
    assert crossing_number(inst, "a", 2) == 0


def test_crossing_number_zero_for_fully_nested():
    inst = chain_instance()
    for e in inst.elements:
        for k in (0, 1, 2):
            assert crossing_number(inst, e, k) == 0


def test_crossing_profile_table():
    table = crossing_profile(crossing_instance())
    assert table[("a", 1)] == 1 and table[("b", 1)] == 1 and table[("c", 1)] == 0


def test_is_corner_definition():
    inst = crossing_instance()
    assert is_corner(inst, "c", "a", "b")
    # an input is always a corner of itself and anything else
    assert is_corner(cornerless_instance(), "a", "a", "b")


def test_thinly_splinters_check_reports():
    assert thinly_splinters_check(chain_instance()).ok
    assert thinly_splinters_check(crossing_instance()).ok
    rep = thinly_splinters_check(cornerless_instance())
    assert not rep.ok
    assert any(kind == "property-3" for kind, _ in rep.violations)


def test_thin_splinter_singleton():
    inst = SplinterInstance(
        elements=("a",),
        families={"f": {"a"}},
        orders={"f": 3},
        nested=lambda x, y: True,
    )
    res = thin_splinter(inst)
    assert res.nested_set == ("a",)
    assert res.levels[0].k == 3


def test_thin_splinter_prefers_low_crossing_numbers():
    inst = crossing_instance()
    res = thin_splinter(inst)
    # c has crossing number 0 in both families, a and b have 1
    assert res.nested_set == ("c",)


def test_thin_splinter_levels_monotone_and_meeting():
    inst = chain_instance()
    res = thin_splinter(inst)
    seen = set()
    for level in res.levels:
        seen |= set(level.added)
    for fam in inst.families.values():
        assert fam & seen


def test_thin_splinter_raises_on_cornerless():
    with pytest.raises(HypothesisError):
        thin_splinter(cornerless_instance())


def test_thin_splinter_equivariance_under_instance_isomorphism():
    inst = crossing_instance()
    rename = {"a": "b", "b": "a", "c": "c"}  # swapping a and b preserves ∼
    crossing = {("a", "b"), ("b", "a")}
    mapped = SplinterInstance(
        elements=("a", "b", "c"),
        families={"f1": {rename[x] for x in inst.families["f1"]},
                  "f2": {rename[x] for x in inst.families["f2"]}},
        orders=dict(inst.orders),
        nested=lambda x, y: (x, y) not in crossing,
    )
    res = thin_splinter(inst)
    res_mapped = thin_splinter(mapped)
    assert {rename[x] for x in res.nested_set} == set(res_mapped.nested_set)


def test_both_engines_on_the_same_distinguisher_data(graphs):
    """The two-K4 distinguisher families both splinter and thinly splinter;
    each engine returns a valid nested transversal of its own formulation."""
    from tangleforge.core import is_nested
    from tangleforge.separators import build_separator_instance

    g = graphs["FIX_2K4"]
    profs = [p for p in enumerate_k_profiles(g, 2) if p.is_regular(g)]
    fams = []
    for p, q in itertools.combinations(profs, 2):
        fams.append(frozenset(efficient_distinguishers(g, p, q).seps))
    picks = splinter_finite(FiniteSplinterFamily(graph_universe(g), tuple(fams)))
    for x, y in itertools.combinations(picks, 2):
        assert is_nested(x, y)

    inst = build_separator_instance(g, profs, check_flags=False).instance
    res = thin_splinter(inst)
    for fam in inst.families.values():
        assert fam & set(res.nested_set)


def test_property3_corner_has_strictly_lower_crossing_number(triring, triring_profiles):
    """On the triangle ring separator instance, crossing same-level pairs
    admit corners whose level crossing number strictly drops."""
    from tangleforge.separators import build_separator_instance

    inst = build_separator_instance(triring, triring_profiles, check_flags=False).instance
    keys = inst.family_keys()
    exercised = 0
    for ki, kj in itertools.combinations(keys, 2):
        k = inst.orders[ki]
        if inst.orders[kj] != k:
            continue
        for a in inst.families[ki]:
            for b in inst.families[kj]:
                if inst.nested(a, b):
                    continue
                cn_a = crossing_number(inst, a, k)
                cn_b = crossing_number(inst, b, k)
                corners = [
                    c
                    for fam in (inst.families[ki], inst.families[kj])
                    for c in fam
                    if is_corner(inst, c, a, b)
                ]
                assert any(
                    crossing_number(inst, c, k) < max(cn_a, cn_b) for c in corners
                )
                exercised += 1
    assert exercised > 0
