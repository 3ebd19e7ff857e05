"""Independent brute-force oracles.

Everything here recomputes results straight from the definitions, sharing
no search or pruning code with the production implementations. The verify
harness and the test suite compare engine outputs against these.
"""

from __future__ import annotations

from .core import (
    Graph,
    Separation,
    canonical,
    leq,
    meet,
    sep_sort_key,
    star,
    vertices_of,
)


def brute_separations(g: Graph, k: int) -> tuple[Separation, ...]:
    """All unoriented separations of order < k by scanning every (A, B)
    pair of subsets of the vertex set."""
    verts = g.vertices
    subsets = []
    # enumerate submasks of verts
    sub = verts
    while True:
        subsets.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & verts
    out = set()
    for a in subsets:
        for b in subsets:
            if a | b != verts:
                continue
            if (a & b).bit_count() >= k:
                continue
            strict_a = a & ~b
            if any(g.adj[v] & b & ~a for v in vertices_of(strict_a)):
                continue
            out.add(canonical(Separation(a, b)))
    return tuple(sorted(out, key=sep_sort_key))


def _full_profile_predicate(oriented) -> bool:
    members = set(oriented)
    for x in oriented:
        sx = star(x)
        for y in oriented:
            if y != x and y != sx and leq(sx, y):
                return False
    for x in oriented:
        for y in oriented:
            if meet(star(x), star(y)) in members:
                return False
    return True


def brute_profiles(g: Graph, k: int, scan_cap: int = 26) -> tuple[tuple[Separation, ...], ...]:
    """All k-profiles by unpruned orientation scan.

    Up to 16 separations every one of the 2^m orientation vectors is
    materialised and checked against the full predicate. Beyond that (up to
    scan_cap) a plain lexicographic orientation tree is walked instead,
    abandoning a branch only when two already-assigned orientations already
    violate consistency; no ordering heuristics, no profile-property
    lookahead, and the full predicate is still evaluated on every leaf.
    """
    seps = brute_separations(g, k)
    m = len(seps)
    if m > scan_cap:
        raise ValueError(f"oracle scan cap exceeded: {m} separations")
    results = []
    if m <= 16:
        for bits in range(1 << m):
            oriented = tuple(
                seps[i] if not bits >> i & 1 else star(seps[i]) for i in range(m)
            )
            if _full_profile_predicate(oriented):
                results.append(tuple(sorted(oriented, key=sep_sort_key)))
    else:
        chosen = []

        def rec(i):
            if i == m:
                oriented = tuple(chosen)
                if _full_profile_predicate(oriented):
                    results.append(tuple(sorted(oriented, key=sep_sort_key)))
                return
            for o in (seps[i], star(seps[i])):
                bad = False
                for x in chosen:
                    if (x != o and x != star(o)) and (
                        leq(star(x), o) or leq(star(o), x)
                    ):
                        bad = True
                        break
                if not bad:
                    chosen.append(o)
                    rec(i + 1)
                    chosen.pop()

        rec(0)
    return tuple(sorted(results))


def brute_distinguishers(g: Graph, p_members, q_members) -> tuple[Separation, ...]:
    """Minimum-order separations oriented oppositely by two orientation
    sets, scanned over every separation of the graph."""
    p_set, q_set = set(p_members), set(q_members)
    k = min(
        max((s.order for s in p_set), default=0),
        max((s.order for s in q_set), default=0),
    ) + 1
    hits = []
    for s in brute_separations(g, k):
        for o in (s, star(s)):
            if o in p_set and star(o) in q_set:
                hits.append(s)
                break
    if not hits:
        return ()
    best = min(s.order for s in hits)
    return tuple(sorted((s for s in hits if s.order == best), key=sep_sort_key))


def brute_nested_transversal_exists(universe, families) -> bool:
    """Exhaustive search for a pairwise nested transversal of the families."""
    u = universe

    def nested(a, b):
        return (
            u.leq(a, b)
            or u.leq(a, u.star(b))
            or u.leq(u.star(a), b)
            or u.leq(u.star(a), u.star(b))
        )

    fams = [sorted(f, key=repr) for f in families]

    def rec(i, picked):
        if i == len(fams):
            return True
        for cand in fams[i]:
            if all(nested(cand, x) for x in picked):
                if rec(i + 1, picked + [cand]):
                    return True
        return False

    return rec(0, [])


def find_automorphisms(g: Graph) -> tuple[dict, ...]:
    """All automorphisms of g by backtracking over degree-compatible
    assignments."""
    verts = vertices_of(g.vertices)
    deg = {v: g.adj[v].bit_count() for v in verts}
    out = []
    assignment: dict = {}
    used = set()

    def rec(i):
        if i == len(verts):
            out.append(dict(assignment))
            return
        v = verts[i]
        for w in verts:
            if w in used or deg[w] != deg[v]:
                continue
            ok = True
            for u2 in verts[:i]:
                if bool(g.adj[v] >> u2 & 1) != bool(g.adj[w] >> assignment[u2] & 1):
                    ok = False
                    break
            if ok:
                assignment[v] = w
                used.add(w)
                rec(i + 1)
                used.discard(w)
                del assignment[v]

    rec(0)
    return tuple(out)


def brute_minimum_distinguishing_order(g: Graph, p_members, q_members):
    hits = brute_distinguishers(g, p_members, q_members)
    return hits[0].order if hits else None
