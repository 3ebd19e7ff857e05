"""k-profiles of small graphs: enumeration, flags, distinguisher sets and
the two corner-finding procedures used by the splinter engines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import (
    Graph,
    Separation,
    all_separations,
    canonical,
    enumerate_separations,
    iter_bits,
    join,
    leq,
    meet,
    sep_sort_key,
    separation_to_json,
    star,
    subsets_of_size,
)
from .errors import CapExceededError, HypothesisError, PreconditionError

DEFAULT_MAX_SK = 40


@dataclass(frozen=True)
class Profile:
    """A consistent orientation of S_k satisfying the profile property."""

    k: int
    chosen: tuple[Separation, ...]
    _members: frozenset = field(compare=False, repr=False, hash=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "chosen", tuple(sorted(self.chosen, key=sep_sort_key)))
        object.__setattr__(self, "_members", frozenset(self.chosen))

    def __contains__(self, x: Separation) -> bool:
        return x in self._members

    def orients(self, s: Separation) -> Optional[Separation]:
        """The orientation this profile gives to the underlying separation of s."""
        if s in self._members:
            return s
        if star(s) in self._members:
            return star(s)
        return None

    def is_regular(self, g: Graph) -> bool:
        return not any(x.a == g.vertices for x in self.chosen)

    def to_json(self) -> dict:
        return {"k": self.k, "oriented": [separation_to_json(x) for x in self.chosen]}


def is_consistent(chosen) -> bool:
    """No two members x, y with distinct underlying separations and x* ≤ y."""
    elems = list(chosen)
    for x in elems:
        sx = star(x)
        for y in elems:
            if y == x or y == sx:
                continue
            if leq(sx, y):
                return False
    return True


def satisfies_profile_property(chosen) -> bool:
    """Property (P): for no members x, y is (x* ∧ y*) again a member."""
    members = set(chosen)
    elems = list(chosen)
    for x in elems:
        for y in elems:
            if meet(star(x), star(y)) in members:
                return False
    return True


def is_profile(g: Graph, k: int, chosen, s_k=None) -> bool:
    """Definitional check: `chosen` is an orientation of S_k(g), consistent,
    with property (P)."""
    if s_k is None:
        s_k = enumerate_separations(g, k, max_n=g.n, max_k=k)
    if len(chosen) != len(s_k):
        return False
    if {canonical(x) for x in chosen} != set(s_k):
        return False
    return is_consistent(chosen) and satisfies_profile_property(chosen)


def enumerate_k_profiles(
    g: Graph, k: int, max_sk: int = DEFAULT_MAX_SK, max_n: int = 16, max_k: int = 6
) -> tuple[Profile, ...]:
    """All k-profiles of g, in deterministic order.

    Branch-and-bound over the unoriented separations sorted by order:
    orientations are assigned one at a time, subtrees die on pairwise
    consistency violations and on partial profile-property violations.
    Each surviving leaf is re-checked against the full definition, so the
    pruning cannot affect correctness, only speed.
    """
    s_k = enumerate_separations(g, k, max_n=max_n, max_k=max_k)
    m = len(s_k)
    if m > max_sk:
        raise CapExceededError(f"|S_k| = {m} exceeds the profile search cap {max_sk}")
    order = sorted(s_k, key=lambda s: (s.order, sep_sort_key(s)))
    masks = [(s.a, s.b) for s in order]

    def orient(i, o):
        a, b = masks[i]
        return Separation(a, b) if o == 0 else Separation(b, a)

    # cons_bad[2i+oi]: bit mask over (j, oj) slots conflicting with (i, oi);
    # x* <= y and y* <= x coincide (the involution reverses the order), so a
    # single subset test decides the pair
    cons_bad = [0] * (2 * m)
    for i in range(m):
        ai, bi = masks[i]
        for oi in (0, 1):
            xa, xb = (ai, bi) if oi == 0 else (bi, ai)
            bad = 0
            for j in range(m):
                if j == i:
                    continue
                aj, bj = masks[j]
                for oj in (0, 1):
                    ya, yb = (aj, bj) if oj == 0 else (bj, aj)
                    if not (xb & ~ya) and not (yb & ~xa):
                        bad |= 1 << (2 * j + oj)
            cons_bad[2 * i + oi] = bad

    oriented_index = {}
    for t in range(m):
        a, b = masks[t]
        oriented_index[(a, b)] = (t, 0)
        oriented_index[(b, a)] = (t, 1)
    # meet_hits[(i, oi, j, oj)] = (t, ot) when meet(x*, y*) is an orientation
    # of a separation in S_k; choosing all three that way violates (P)
    meet_hits = {}
    for i in range(m):
        ai, bi = masks[i]
        for oi in (0, 1):
            xa, xb = (ai, bi) if oi == 0 else (bi, ai)
            for j in range(i, m):
                aj, bj = masks[j]
                for oj in (0, 1):
                    ya, yb = (aj, bj) if oj == 0 else (bj, aj)
                    hit = oriented_index.get((xb & yb, xa | ya))
                    if hit is not None:
                        meet_hits[(i, oi, j, oj)] = hit

    results = []
    chosen = [0] * m

    def full_property_p(assignment):
        sides = [
            masks[i] if assignment[i] == 0 else (masks[i][1], masks[i][0])
            for i in range(m)
        ]
        taken = set(sides)
        for xa, xb in sides:
            for ya, yb in sides:
                if (xb & yb, xa | ya) in taken:
                    return False
        return True

    def rec(d, badmask):
        if d == m:
            if full_property_p(chosen):
                results.append(tuple(orient(i, chosen[i]) for i in range(m)))
            return
        for o in (0, 1):
            if badmask >> (2 * d + o) & 1:
                continue
            ok = True
            for j in range(d + 1):
                hit = meet_hits.get((j, chosen[j] if j < d else o, d, o))
                if hit is not None:
                    t, ot = hit
                    if (t < d and chosen[t] == ot) or (t == d and o == ot):
                        ok = False
                        break
            if ok:
                chosen[d] = o
                rec(d + 1, badmask | cons_bad[2 * d + o])
    rec(0, 0)

    profiles = [
        Profile(k, ch) for ch in results if is_profile(g, k, ch, s_k=s_k)
    ]
    profiles.sort(key=lambda p: tuple(map(sep_sort_key, p.chosen)))
    return tuple(profiles)


# ---------------------------------------------------------------------------
# flags

@dataclass(frozen=True)
class ProfileFlags:
    regular: bool
    robust: bool
    principal: bool


def is_robust(g: Graph, p: Profile, universe=None) -> bool:
    """Robustness quantified over the whole universe of g (every separation
    of any order; exact for finite graphs)."""
    if universe is None:
        universe = all_separations(g)
    pairs = [(t.a, t.b) for t in universe]
    for s in p.chosen:
        sa, sb = s.a, s.b
        so = s.order
        for ta, tb in pairs:
            # orders of s ∨ t and s ∨ t* without building objects
            if ((sa | ta) & sb & tb).bit_count() < so and (
                (sa | tb) & sb & ta
            ).bit_count() < so:
                j1 = Separation(sa | ta, sb & tb)
                j2 = Separation(sa | tb, sb & ta)
                if p.orients(j1) != j1 and p.orients(j2) != j2:
                    return False
    return True


def is_principal(g: Graph, p: Profile) -> bool:
    """P contains (V∖C, C∪X) for some component C of G-X, for every X with
    |X| < k. Subsets X = V(G) admit no such separation and are skipped."""
    verts = g.vertices
    for size in range(min(p.k, g.num_vertices)):
        for x in subsets_of_size(verts, size):
            hit = False
            for comp in g.components(x):
                cand = Separation(verts & ~comp, comp | x)
                if cand in p:
                    hit = True
                    break
            if not hit:
                return False
    return True


def profile_flags(g: Graph, p: Profile, universe=None) -> ProfileFlags:
    return ProfileFlags(
        regular=p.is_regular(g),
        robust=is_robust(g, p, universe=universe),
        principal=is_principal(g, p),
    )


# ---------------------------------------------------------------------------
# irregular profiles

def is_cutvertex(g: Graph, v: int) -> bool:
    own = next(c for c in g.components() if c >> v & 1)
    return len(g.induced(own).components(1 << v)) > 1


@dataclass(frozen=True)
class IrregularShape:
    kind: str  # "whole-graph" | "vertex"
    vertex: Optional[int] = None


def classify_irregular(g: Graph, p: Profile) -> IrregularShape:
    """Match an irregular profile against the two shapes it can have:
    {(V, ∅)} on a connected graph, or the orientation of S_k towards a
    non-cutvertex x (all (A,B) with x ∈ B except ({x},V))."""
    if p.is_regular(g):
        raise PreconditionError("profile is regular")
    verts = g.vertices
    if g.is_connected() and set(p.chosen) == {Separation(verts, 0)}:
        return IrregularShape("whole-graph")
    for x in iter_bits(verts):
        if is_cutvertex(g, x):
            continue
        expected = {
            o
            for s in p.chosen
            for o in (s, star(s))
            if o.b >> x & 1 and o != Separation(1 << x, verts)
        }
        if set(p.chosen) == expected:
            return IrregularShape("vertex", x)
    raise HypothesisError(
        "irregular profile matches neither shape of the irregular-profile lemma",
        witness=p,
    )


# ---------------------------------------------------------------------------
# distinguishers

@dataclass(frozen=True)
class DistinguisherSet:
    """All separations of minimum order oriented oppositely by two profiles."""

    first: Profile
    second: Profile
    order: Optional[int]
    seps: tuple[Separation, ...]  # canonical unoriented, sorted

    def __bool__(self) -> bool:
        return bool(self.seps)


def distinguishes(p: Profile, q: Profile, s: Separation) -> bool:
    op, oq = p.orients(s), q.orients(s)
    return op is not None and oq is not None and op == star(oq)


def efficient_distinguishers(g: Graph, p: Profile, q: Profile) -> DistinguisherSet:
    if p == q:
        raise PreconditionError("profiles must differ")
    k = min(p.k, q.k)
    s_k = enumerate_separations(g, k, max_n=g.n, max_k=max(k, 1))
    dist = [s for s in s_k if distinguishes(p, q, s)]
    if not dist:
        return DistinguisherSet(p, q, None, ())
    best = min(s.order for s in dist)
    seps = tuple(sorted((s for s in dist if s.order == best), key=sep_sort_key))
    return DistinguisherSet(p, q, best, seps)


def _in_aset(g: Graph, dset: DistinguisherSet, s: Separation) -> bool:
    """Membership of (the underlying separation of) s in the distinguisher
    set: same order and oriented oppositely by the pair."""
    return s.order == dset.order and distinguishes(dset.first, dset.second, s)


def corner_unequal_orders(
    g: Graph,
    ab: Separation,
    dset_p: DistinguisherSet,
    cd: Separation,
    dset_q: DistinguisherSet,
) -> Separation:
    """Given crossing efficient distinguishers ab (for the lower-order pair)
    and cd (for the higher), return a corner of the two that efficiently
    distinguishes the higher pair. Both profile pairs must be robust."""
    if not _in_aset(g, dset_p, ab) or not _in_aset(g, dset_q, cd):
        raise PreconditionError("inputs must belong to the stated distinguisher sets")
    if ab.order >= cd.order:
        raise PreconditionError("orders must satisfy |(A,B)| < |(C,D)|")
    from .core import crosses

    if not crosses(ab, cd):
        raise PreconditionError("inputs must cross")
    hits = [
        c
        for c in (join(x, y) for x in (ab, star(ab)) for y in (cd, star(cd)))
        if _in_aset(g, dset_q, c)
    ]
    if not hits:
        raise HypothesisError(
            "no corner lies in the higher-order distinguisher set; "
            "inputs cannot satisfy the stated preconditions",
            witness=(ab, cd),
        )
    return min((canonical(c) for c in hits), key=sep_sort_key)


@dataclass(frozen=True)
class OppositeCornerResult:
    """Outcome of the equal-order corner search.

    kind == "split": `corner` is in the first pair's set and `opposite` in
    the second's (one opposite-corner pair, one element each).
    kind == "both": two opposite-corner pairs exist, `pair_first` fully
    inside the first set and `pair_second` fully inside the second.
    """

    kind: str
    corner: Separation
    corner_in: str
    opposite: Separation
    opposite_in: str
    pair_first: Optional[tuple[Separation, Separation]] = None
    pair_second: Optional[tuple[Separation, Separation]] = None


def corner_equal_orders(
    g: Graph,
    ab: Separation,
    dset_p: DistinguisherSet,
    cd: Separation,
    dset_q: DistinguisherSet,
) -> OppositeCornerResult:
    """Equal-order case: locate opposite corner pairs inside the two
    distinguisher sets, matching one of the two possible outcomes."""
    if not _in_aset(g, dset_p, ab) or not _in_aset(g, dset_q, cd):
        raise PreconditionError("inputs must belong to the stated distinguisher sets")
    if ab.order != cd.order:
        raise PreconditionError("orders must be equal")

    opposite_pairs = (
        (join(ab, cd), join(star(ab), star(cd))),
        (join(ab, star(cd)), join(star(ab), cd)),
    )

    def side(c):
        in_p = _in_aset(g, dset_p, c)
        in_q = _in_aset(g, dset_q, c)
        return in_p, in_q

    # outcome 1: one opposite pair with one element per set
    for c1, c2 in opposite_pairs:
        p1, q1 = side(c1)
        p2, q2 = side(c2)
        if p1 and q2:
            return OppositeCornerResult("split", canonical(c1), "first", canonical(c2), "second")
        if q1 and p2:
            return OppositeCornerResult("split", canonical(c2), "first", canonical(c1), "second")
    # outcome 2: one pair fully in each set
    pair_p = next(
        ((c1, c2) for c1, c2 in opposite_pairs if side(c1)[0] and side(c2)[0]), None
    )
    pair_q = next(
        ((c1, c2) for c1, c2 in opposite_pairs if side(c1)[1] and side(c2)[1]), None
    )
    if pair_p and pair_q:
        return OppositeCornerResult(
            "both",
            canonical(pair_p[0]),
            "first",
            canonical(pair_q[0]),
            "second",
            pair_first=tuple(map(canonical, pair_p)),
            pair_second=tuple(map(canonical, pair_q)),
        )
    raise HypothesisError(
        "neither opposite-corner outcome realised; inputs cannot satisfy "
        "the stated preconditions",
        witness=(ab, cd),
    )
