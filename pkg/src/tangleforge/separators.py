"""Separator-level machinery: the canonical nested separator set for a
family of profiles, and its conversion into a nested set of separations.

Separators (vertex sets that carry an efficient distinguisher for some
profile pair) come with their own nestedness relation: X is nested with Y
when Y does not properly separate two vertices of X. On genuine
distinguishing separators this relation is symmetric, which is what lets
the thin splinter engine run on separators where it would fail on
separations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    Graph,
    Separation,
    canonical,
    iter_bits,
    join,
    sep_sort_key,
    star,
    subsets_of_size,
    vertices_of,
)
from .errors import CertificationError, HypothesisError, PreconditionError
from .profiles import (
    Profile,
    distinguishes,
    efficient_distinguishers,
    is_principal,
    is_robust,
)
from .splinter import SplinterInstance, ThinSplinterResult, thin_splinter, thinly_splinters_check


def separator_sort_key(mask: int) -> tuple:
    return (mask.bit_count(), vertices_of(mask))


# ---------------------------------------------------------------------------
# minimal separators

def minimal_separators(g: Graph, u: int, v: int, k: int) -> tuple[int, ...]:
    """All ⊆-minimal u-v separators of size ≤ k, by exhaustive subset scan.

    Adjacent (or equal-component-trivial) endpoints admit no separator at
    all; adjacency yields the empty tuple by convention.
    """
    if u == v:
        raise PreconditionError("endpoints must differ")
    if g.adj[u] >> v & 1:
        return ()
    verts = g.vertices
    candidates = verts & ~(1 << u) & ~(1 << v)

    def separates(x):
        for comp in g.components(x):
            if comp >> u & 1:
                return not comp >> v & 1
        return False  # u inside x: cannot happen, x avoids u

    out = []
    for size in range(k + 1):
        for x in subsets_of_size(candidates, size):
            if not separates(x):
                continue
            if all(not separates(x & ~(1 << w)) for w in iter_bits(x)):
                out.append(x)
    return tuple(sorted(out, key=separator_sort_key))


# ---------------------------------------------------------------------------
# the separator nestedness relations

def separator_nested(g: Graph, x: int, y: int) -> bool:
    """x is nested with y: x ⊆ C ∪ y for some component C of G - y.

    Equivalently, y does not properly separate two vertices of x. Symmetric
    when both sets genuinely distinguish profile pairs, not in general.
    """
    if x & ~g.vertices or y & ~g.vertices:
        raise PreconditionError("separators must lie inside the graph")
    if not x & ~y:
        return True
    return any(not x & ~(comp | y) for comp in g.components(y))


def strongly_nested(g: Graph, x: int, y: int) -> bool:
    """Both directions of containment in a component together with its
    neighbourhood; x strongly nested with itself iff G - x has a tight
    component."""

    def one_way(a, b):
        return any(
            not b & ~(comp | g.neighbours(comp)) for comp in g.components(a)
        )

    return one_way(x, y) and one_way(y, x)


# ---------------------------------------------------------------------------
# distinguishing separators

@dataclass(frozen=True)
class Separator:
    """A separator together with every witnessing separation for one pair."""

    mask: int
    witnesses: tuple[Separation, ...]


def distinguishing_separators(g: Graph, p: Profile, q: Profile) -> tuple[Separator, ...]:
    """Separator-level distinguisher set: all X of size |P,Q| admitting a
    witness, each carrying all its witnesses."""
    dset = efficient_distinguishers(g, p, q)
    by_mask: dict[int, list] = {}
    for s in dset.seps:
        by_mask.setdefault(s.separator, []).append(s)
    return tuple(
        Separator(mask, tuple(sorted(by_mask[mask], key=sep_sort_key)))
        for mask in sorted(by_mask, key=separator_sort_key)
    )


def separator_crossing_number(
    g: Graph, all_separators, x: int, k: int, certify: bool = True
) -> int:
    """Number of separators of size k in the collection crossing x.

    When certifying, every crossing partner must minimally separate two
    vertices of the other separator (the crossing/minimal-separator lemma);
    a failure means the collection is not a genuine distinguisher family.
    """
    count = 0
    for y in all_separators:
        if y == x or y.bit_count() != k:
            continue
        if separator_nested(g, x, y):
            continue
        count += 1
        if certify:
            pairs = itertools.combinations(vertices_of(x), 2)
            if not any(y in minimal_separators(g, v, w, y.bit_count()) for v, w in pairs):
                raise CertificationError(
                    f"separator {vertices_of(y)} crosses {vertices_of(x)} but minimally "
                    "separates no pair of its vertices"
                )
    return count


# ---------------------------------------------------------------------------
# canonical nested separator sets

@dataclass(frozen=True)
class SeparatorFamilies:
    """The splinter instance data derived from a profile family."""

    graph: Graph
    profiles: tuple[Profile, ...]
    families: dict            # (i, j) -> frozenset of separator masks
    orders: dict              # (i, j) -> |P_i, P_j|
    witnesses: dict           # (pair, mask) -> tuple of witnessing separations
    instance: SplinterInstance


def build_separator_instance(
    g: Graph, profiles, check_flags: bool = True
) -> SeparatorFamilies:
    profiles = tuple(profiles)
    if check_flags:
        for p in profiles:
            if not p.is_regular(g):
                raise PreconditionError("profiles must be regular")
            if not is_robust(g, p):
                raise PreconditionError("profiles must be robust")
    families = {}
    orders = {}
    witnesses = {}
    for i, j in itertools.combinations(range(len(profiles)), 2):
        seps = distinguishing_separators(g, profiles[i], profiles[j])
        if not seps:
            raise PreconditionError(f"profiles {i} and {j} are indistinguishable")
        key = (i, j)
        families[key] = frozenset(s.mask for s in seps)
        orders[key] = seps[0].mask.bit_count()
        for s in seps:
            witnesses[(key, s.mask)] = s.witnesses
    elements = tuple(
        sorted(frozenset().union(*families.values()) if families else (), key=separator_sort_key)
    )

    def nested(a, b):
        return separator_nested(g, a, b)

    def corner_oracle(a, b, target_key):
        """Materialise corners from witnesses and return a separator of the
        target family that arises as the separator of a corner separation."""
        wit_a = [w for (_, m), ws in witnesses.items() if m == a for w in ws]
        wit_b = [w for (_, m), ws in witnesses.items() if m == b for w in ws]
        p, q = profiles[target_key[0]], profiles[target_key[1]]
        want_order = orders[target_key]
        for wa in wit_a:
            for wb in wit_b:
                for c in (join(x, y) for x in (wa, star(wa)) for y in (wb, star(wb))):
                    if c.order == want_order and distinguishes(p, q, c):
                        if c.separator in families[target_key]:
                            return c.separator
        return None

    instance = SplinterInstance(
        elements=elements,
        families=families,
        orders=orders,
        nested=nested,
        corner_oracle=corner_oracle,
    )
    return SeparatorFamilies(g, profiles, families, orders, witnesses, instance)


@dataclass(frozen=True)
class NestedSeparators:
    separators: tuple[int, ...]
    result: ThinSplinterResult
    data: SeparatorFamilies


def canonical_nested_separators(
    g: Graph, profiles, check_flags: bool = True
) -> NestedSeparators:
    """Canonical nested set of separators efficiently distinguishing every
    pair of the given (distinguishable, robust, regular) profiles."""
    profiles = tuple(profiles)
    if len(profiles) <= 1:
        return NestedSeparators(
            (), ThinSplinterResult((), ()), build_separator_instance(g, profiles, False)
        )
    data = build_separator_instance(g, profiles, check_flags)
    report = thinly_splinters_check(data.instance)
    if not report.ok:
        raise HypothesisError(
            "separator instance does not thinly splinter",
            witness=tuple(report.violations[:3]),
        )
    result = thin_splinter(data.instance, precheck=False)
    return NestedSeparators(
        tuple(sorted(result.nested_set, key=separator_sort_key)), result, data
    )


# ---------------------------------------------------------------------------
# separators -> separations

def separators_to_separations(
    g: Graph, nested_separators, profiles, certify: bool = True
) -> tuple[Separation, ...]:
    """Convert a nested separator set into a nested set of separations that
    still distinguishes every profile pair efficiently.

    Separators are processed in ascending size (ties by vertex order). For
    each separator the tight components of its complement receive one
    emission each; non-tight components are grouped with the tight
    component their already-emitted separations point to, which is exactly
    the bookkeeping that keeps the accumulated set nested. Disconnected
    graphs need no special handling: cross-component profile pairs place
    the empty separator in the set, and its emissions are precisely the
    component separations.
    """
    profiles = tuple(profiles)
    for idx, p in enumerate(profiles):
        if not is_principal(g, p):
            raise PreconditionError(
                f"profile {idx} is not principal; non-principal profiles do not "
                "in general admit a nested distinguishing set of separations"
            )
    verts = g.vertices
    emitted: list[Separation] = []

    for x in sorted(nested_separators, key=separator_sort_key):
        comps = g.components(x)
        tight = [c for c in comps if g.neighbours(c) == x]
        loose = [c for c in comps if g.neighbours(c) != x]
        grouped: dict[int, int] = {c: 0 for c in tight}
        for s in emitted:
            if x & ~s.a and x & ~s.b:
                raise CertificationError("separator not covered by an emitted side")
            if not x & ~s.a and not x & ~s.b:
                raise CertificationError("separator inside both sides of an emission")
            away = s if not x & ~s.a else star(s)  # orient with x on the a-side
            b = away.b
            tight_hits = [c for c in tight if c & b]
            if len(tight_hits) > 1:
                raise CertificationError("emission side meets two tight components")
            if tight_hits:
                for d in loose:
                    if d & b:
                        grouped[tight_hits[0]] |= d
        if certify:
            for c, d in itertools.combinations(tight, 2):
                if grouped[c] & grouped[d]:
                    raise CertificationError("grouped component sets overlap")
        for c in tight:
            block = c | grouped[c]
            new = canonical(Separation(block | x, verts & ~block))
            if new not in emitted:
                emitted.append(new)

    out = tuple(sorted(emitted, key=sep_sort_key))
    if certify:
        from .core import is_nested, is_separation

        for s in out:
            if not is_separation(g, s):
                raise CertificationError(f"emitted pair is not a separation: {s}")
        for s, t in itertools.combinations(out, 2):
            if not is_nested(s, t):
                raise CertificationError(f"output not nested: {s} vs {t}")
        for p, q in itertools.combinations(profiles, 2):
            dset = efficient_distinguishers(g, p, q)
            if dset.order is None:
                continue
            if not any(
                s.order == dset.order and distinguishes(p, q, s) for s in out
            ):
                raise CertificationError(
                    "a profile pair is not efficiently distinguished by the output"
                )
    return out
