"""Finite inverse systems of separation universes: validation, limits,
projections, and the profinite splinter procedure run end-to-end.

A system assigns a finite universe U_p to every point of a directed poset
and a bonding homomorphism f_qp : U_q -> U_p to every comparable pair q > p.
A limit is a compatible choice of one element per point. Families enter the
splinter procedure in closed form: one subset O_p per point with
f_qp(O_q) ⊆ O_p; the family itself is the set of limits through these.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .core import Graph, Separation, UniverseView, graph_universe
from .errors import CapExceededError, CertificationError, HypothesisError, PreconditionError
from .splinter import FiniteSplinterFamily, splinters_check, _nested


@dataclass(frozen=True)
class DirectedPoset:
    """Finite poset in which every two points have a common upper bound.

    `relation` holds all pairs (p, q) with p ≤ q including the diagonal;
    the constructor completes it transitively and validates.
    """

    points: tuple
    relation: frozenset

    @staticmethod
    def from_pairs(points, strict_pairs) -> "DirectedPoset":
        points = tuple(points)
        rel = {(p, p) for p in points}
        rel.update(tuple(x) for x in strict_pairs)
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
        return DirectedPoset(points, frozenset(rel))

    def __post_init__(self):
        pts = set(self.points)
        for p, q in self.relation:
            if p not in pts or q not in pts:
                raise PreconditionError(f"relation pair ({p!r},{q!r}) off the point set")
        for p, q in self.relation:
            if (q, p) in self.relation and p != q:
                raise PreconditionError(f"antisymmetry violated at {p!r},{q!r}")

    def leq(self, p, q) -> bool:
        return (p, q) in self.relation

    def strictly_below(self, q):
        return tuple(p for p in self.points if p != q and self.leq(p, q))

    def directedness_violations(self) -> list:
        out = []
        for p, q in itertools.combinations(self.points, 2):
            if not any(self.leq(p, r) and self.leq(q, r) for r in self.points):
                out.append((p, q))
        return out


@dataclass(frozen=True)
class InverseSystem:
    """poset + universes + bonding maps (finite maps as dicts, keyed (q, p)
    for q > p)."""

    poset: DirectedPoset
    universe_at: dict
    maps: dict

    def bond(self, q, p) -> dict:
        if q == p:
            return {x: x for x in self.universe_at[p].elements}
        return self.maps[(q, p)]


@dataclass
class SystemReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_inverse_system(sys: InverseSystem) -> SystemReport:
    """List every directedness, homomorphism and compatibility violation."""
    rep = SystemReport()
    for pair in sys.poset.directedness_violations():
        rep.violations.append(("directedness", pair))
    for p in sys.poset.points:
        if p not in sys.universe_at:
            rep.violations.append(("universe-missing", p))
    for q in sys.poset.points:
        for p in sys.poset.strictly_below(q):
            if (q, p) not in sys.maps:
                rep.violations.append(("map-missing", (q, p)))
                continue
            f = sys.maps[(q, p)]
            uq, up = sys.universe_at[q], sys.universe_at[p]
            elems_p = set(up.elements)
            if set(f) != set(uq.elements):
                rep.violations.append(("map-domain", (q, p)))
                continue
            for x in uq.elements:
                if f[x] not in elems_p:
                    rep.violations.append(("map-range", (q, p, x)))
            for x in uq.elements:
                if f.get(uq.star(x)) != up.star(f[x]):
                    rep.violations.append(("hom-star", (q, p, x)))
            for x in uq.elements:
                for y in uq.elements:
                    if f.get(uq.join(x, y)) != up.join(f[x], f[y]):
                        rep.violations.append(("hom-join", (q, p, x, y)))
                    if f.get(uq.meet(x, y)) != up.meet(f[x], f[y]):
                        rep.violations.append(("hom-meet", (q, p, x, y)))
    for r in sys.poset.points:
        for q in sys.poset.strictly_below(r):
            for p in sys.poset.strictly_below(q):
                frq = sys.maps.get((r, q))
                fqp = sys.maps.get((q, p))
                frp = sys.maps.get((r, p))
                if frq is None or fqp is None or frp is None:
                    continue
                for x in sys.universe_at[r].elements:
                    if frp[x] != fqp[frq[x]]:
                        rep.violations.append(("compatibility", (r, q, p, x)))
    return rep


def project(sys: InverseSystem, x, p):
    """Projection of a limit (dict point -> element) or of a set of limits."""
    if isinstance(x, dict):
        return x[p]
    return frozenset(limit[p] for limit in x)


def inverse_limits(
    sys: InverseSystem, restrict: Optional[dict] = None, cap: int = 1_000_000
) -> tuple:
    """All limits, by exhaustive backtracking along a fixed point order.

    restrict optionally narrows the candidate set at each point. Limits are
    returned as dicts point -> element, deterministically ordered.
    """
    points = list(sys.poset.points)
    domains = []
    size = 1
    for p in points:
        dom = list(sys.universe_at[p].elements)
        if restrict is not None and p in restrict:
            allowed = set(restrict[p])
            dom = [x for x in dom if x in allowed]
        domains.append(dom)
        size *= max(len(dom), 1)
        if size > cap:
            raise CapExceededError(f"limit search space exceeds cap {cap}")
    out = []
    choice: dict = {}

    def rec(i):
        if i == len(points):
            out.append(dict(choice))
            return
        p = points[i]
        for x in domains[i]:
            ok = True
            for j in range(i):
                q = points[j]
                if sys.poset.leq(p, q) and p != q and sys.maps[(q, p)][choice[q]] != x:
                    ok = False
                    break
                if sys.poset.leq(q, p) and p != q and sys.maps[(p, q)][x] != choice[q]:
                    ok = False
                    break
            if ok:
                choice[p] = x
                rec(i + 1)
                del choice[p]

    rec(0)
    return tuple(out)


# ---------------------------------------------------------------------------
# the profinite splinter procedure

@dataclass(frozen=True)
class ProfiniteSplinterResult:
    nested_choice: dict          # point -> frozenset (the chosen N_p family)
    limits: tuple                # all limits through the choice: the set N
    candidate_counts: dict       # point -> |N_p| candidates enumerated


def _nested_subsets_meeting(u: UniverseView, family_projs, cap: int):
    """All nested subsets of the union of the projected families that meet
    every projection. Enumerated over the union only: any nested transversal
    lives inside it, and images of such sets stay inside it downstream."""
    union = sorted(
        {x for proj in family_projs for x in proj},
        key={e: i for i, e in enumerate(u.elements)}.__getitem__,
    )
    if len(union) > cap:
        raise CapExceededError(
            f"union of projected families has {len(union)} elements (cap {cap})"
        )
    out = []
    for r in range(len(union) + 1):
        for combo in itertools.combinations(union, r):
            sset = frozenset(combo)
            if not all(sset & proj for proj in family_projs):
                continue
            if all(
                _nested(u, x, y) for x, y in itertools.combinations(combo, 2)
            ):
                out.append(sset)
    return tuple(out)


def profinite_splinter(
    sys: InverseSystem,
    families: list,
    union_cap: int = 12,
    limit_cap: int = 1_000_000,
) -> ProfiniteSplinterResult:
    """Run the profinite splinter procedure on a validated system.

    families: one dict per family, point -> subset of U_p (closed form).
    Per point, the projections must splinter; the per-point nested
    transversal candidates form an inverse system of non-empty finite sets,
    a canonical (lexicographically least) limit of which is taken. The
    returned limit set is certified nested at every projection and is
    checked to meet every family.
    """
    rep = validate_inverse_system(sys)
    if not rep.ok:
        raise PreconditionError(f"invalid inverse system: {rep.violations[:3]}")
    points = list(sys.poset.points)
    for fam in families:
        for q in points:
            for p in sys.poset.strictly_below(q):
                img = {sys.maps[(q, p)][x] for x in fam[q]}
                if not img <= set(fam[p]):
                    raise PreconditionError(
                        f"family not in closed form: image at {(q, p)} leaves O_p"
                    )

    candidates = {}
    for p in points:
        u = sys.universe_at[p]
        projs = [frozenset(fam[p]) for fam in families]
        ok, witness = splinters_check(FiniteSplinterFamily(u, tuple(projs))) if projs else (True, None)
        if not ok:
            raise HypothesisError(
                f"projected families do not splinter at point {p!r}", witness=witness
            )
        candidates[p] = _nested_subsets_meeting(u, projs, union_cap)
        if not candidates[p]:
            raise CertificationError(
                f"no nested transversal exists at point {p!r}; finite splinter "
                "theorem violated (bug)"
            )

    # the candidate sets with image maps form an inverse system of finite sets
    for q in points:
        for p in sys.poset.strictly_below(q):
            f = sys.maps[(q, p)]
            cand_p = set(candidates[p])
            for nq in candidates[q]:
                if frozenset(f[x] for x in nq) not in cand_p:
                    raise CertificationError(
                        f"image of a nested transversal at {q!r} is not one at {p!r}"
                    )

    # enumerate limits of the candidate system, pick the lexicographically least
    elem_rank = {
        p: {e: i for i, e in enumerate(sys.universe_at[p].elements)} for p in points
    }

    def encode(choice):
        return tuple(
            tuple(sorted(elem_rank[p][x] for x in choice[p])) for p in points
        )

    total = 1
    for p in points:
        total *= len(candidates[p])
        if total > limit_cap:
            raise CapExceededError("candidate limit search exceeds cap")
    best = None
    stack: dict = {}

    def rec(i):
        nonlocal best
        if i == len(points):
            enc = encode(stack)
            if best is None or enc < best[0]:
                best = (enc, dict(stack))
            return
        p = points[i]
        for np_ in candidates[p]:
            ok = True
            for j in range(i):
                q = points[j]
                if p != q and sys.poset.leq(p, q):
                    if frozenset(sys.maps[(q, p)][x] for x in stack[q]) != np_:
                        ok = False
                        break
                if p != q and sys.poset.leq(q, p):
                    if frozenset(sys.maps[(p, q)][x] for x in np_) != stack[q]:
                        ok = False
                        break
            if ok:
                stack[p] = np_
                rec(i + 1)
                del stack[p]

    rec(0)
    if best is None:
        raise CertificationError("candidate system has no limit (bug)")
    choice = best[1]

    limits = inverse_limits(sys, restrict=choice, cap=limit_cap)
    if not limits:
        raise CertificationError("chosen nested sets admit no limit (bug)")

    # certify: projections nested, every family met
    for p in points:
        u = sys.universe_at[p]
        proj = {lim[p] for lim in limits}
        for x, y in itertools.combinations(proj, 2):
            if not _nested(u, x, y):
                raise CertificationError(f"projection at {p!r} not nested")
    for i, fam in enumerate(families):
        meet_restrict = {p: frozenset(choice[p]) & frozenset(fam[p]) for p in points}
        if any(not s for s in meet_restrict.values()) or not inverse_limits(
            sys, restrict=meet_restrict, cap=limit_cap
        ):
            raise CertificationError(f"output misses family {i} (bug)")

    return ProfiniteSplinterResult(
        nested_choice={p: frozenset(choice[p]) for p in points},
        limits=limits,
        candidate_counts={p: len(candidates[p]) for p in points},
    )


# ---------------------------------------------------------------------------
# ready-made systems

def product_chain_universe(a: int, b: int) -> UniverseView:
    """Universe on the grid C_a x C_b: componentwise order, join = max,
    meet = min, star = coordinate reflection. Small but has genuinely
    crossing pairs once a or b exceeds 2."""
    elements = tuple((i, j) for i in range(a) for j in range(b))

    def ord_(e):
        return min(e[0], a - 1 - e[0]) + min(e[1], b - 1 - e[1])

    return UniverseView(
        elements=elements,
        leq=lambda x, y: x[0] <= y[0] and x[1] <= y[1],
        star=lambda x: (a - 1 - x[0], b - 1 - x[1]),
        join=lambda x, y: (max(x[0], y[0]), max(x[1], y[1])),
        meet=lambda x, y: (min(x[0], y[0]), min(x[1], y[1])),
        order_of=ord_,
        closed=True,
        submodular_claimed=False,
        name=f"chain-product({a},{b})",
    )


def graph_restriction_system(g: Graph, vertex_sets) -> InverseSystem:
    """Inverse system of the universes of the induced subgraphs G[Z] over a
    collection of vertex sets ordered by inclusion, with the restriction
    maps (A, B) -> (A ∩ Y, B ∩ Y)."""
    masks = sorted({m & g.vertices for m in vertex_sets})
    points = tuple(masks)
    strict = [
        (q, p) for q in points for p in points if p != q and not (p & ~q)
    ]
    poset = DirectedPoset.from_pairs(points, [(p, q) for q, p in strict])
    universes = {z: graph_universe(g.induced(z)) for z in points}
    maps = {}
    for q in points:
        for p in points:
            if p != q and not (p & ~q):
                maps[(q, p)] = {
                    s: Separation(s.a & p, s.b & p) for s in universes[q].elements
                }
    return InverseSystem(poset, universes, maps)


# ---------------------------------------------------------------------------
# JSON forms (tiny abstract universes, fully tabulated)

def universe_to_json(u: UniverseView) -> dict:
    names = {x: i for i, x in enumerate(u.elements)}
    return {
        "elements": list(range(len(u.elements))),
        "star": [names[u.star(x)] for x in u.elements],
        "order": [u.order_of(x) for x in u.elements],
        "leq": [
            [names[x], names[y]]
            for x in u.elements
            for y in u.elements
            if u.leq(x, y)
        ],
        "join": [
            [names[x], names[y], names[u.join(x, y)]]
            for x in u.elements
            for y in u.elements
        ],
        "meet": [
            [names[x], names[y], names[u.meet(x, y)]]
            for x in u.elements
            for y in u.elements
        ],
    }


def universe_from_json(obj: dict) -> UniverseView:
    elements = tuple(obj["elements"])
    star_tab = dict(zip(elements, obj["star"]))
    order_tab = dict(zip(elements, obj["order"]))
    leq_set = {tuple(x) for x in obj["leq"]}
    join_tab = {(x, y): z for x, y, z in obj["join"]}
    meet_tab = {(x, y): z for x, y, z in obj["meet"]}
    return UniverseView(
        elements=elements,
        leq=lambda x, y: (x, y) in leq_set,
        star=lambda x: star_tab[x],
        join=lambda x, y: join_tab[(x, y)],
        meet=lambda x, y: meet_tab[(x, y)],
        order_of=lambda x: order_tab[x],
        closed=True,
        submodular_claimed=False,
        name="json-universe",
    )


def system_from_json(obj: dict) -> tuple[InverseSystem, list]:
    """Load {"points": [...], "poset": [[lo, hi], ...], "universes": {...},
    "maps": {"q->p": [[x, fx], ...]}, "families": [{point: [elems]}]}."""
    points = tuple(obj["points"])
    poset = DirectedPoset.from_pairs(points, [tuple(e) for e in obj["poset"]])
    universes = {p: universe_from_json(obj["universes"][str(p)]) for p in points}
    maps = {}
    for key, pairs in obj["maps"].items():
        q, p = key.split("->")
        maps[(_coerce(q, points), _coerce(p, points))] = {x: fx for x, fx in pairs}
    families = [
        {_coerce(pt, points): frozenset(vals) for pt, vals in fam.items()}
        for fam in obj.get("families", [])
    ]
    return InverseSystem(poset, universes, maps), families


def _coerce(token, points):
    for p in points:
        if str(p) == token:
            return p
    raise PreconditionError(f"unknown point {token!r} in system JSON")
