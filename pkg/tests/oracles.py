"""Brute-force oracles.  Nothing here calls the Smith form or path-count code."""

import itertools
from fractions import Fraction
from math import gcd

from leavitt_k.quiver import Quiver


def repeated_vertex_closure(q: Quiver) -> set:
    """Vertices that end some path with a repeated vertex, walks up to length |E0|."""
    succ = {v: sorted({t for s, t in q.edges if s == v}) for v in q.vertices}
    hit = set()

    def walk(path):
        if len(set(path)) < len(path):
            hit.add(path[-1])
        if len(path) <= len(q.vertices):
            for t in succ[path[-1]]:
                walk(path + (t,))

    for v in q.vertices:
        walk((v,))
    return hit


def edge_paths(q: Quiver, n: int):
    """All arrow paths of length n, as tuples of arrow indices."""
    if n == 0:
        return [((), v) for v in q.vertices]
    out = []
    by_source = {}
    for k, (s, _) in enumerate(q.edges):
        by_source.setdefault(s, []).append(k)

    def grow(path, end):
        if len(path) == n:
            out.append((path, end))
            return
        for k in by_source.get(end, []):
            grow(path + (k,), q.edges[k][1])

    for k, (_, t) in enumerate(q.edges):
        grow((k,), t)
    return out


def path_count_brute(q: Quiver, n: int) -> dict:
    counts = {v: 0 for v in q.vertices}
    for _, end in edge_paths(q, n):
        counts[end] += 1
    return counts


def L0_pairs_brute(q: Quiver, n: int) -> int:
    """Count monomials g h* with |g|=|h|=m, r(g)=r(h), and m == n or range a sink."""
    sinks = set(q.sinks)
    total = 0
    for m in range(n + 1):
        paths = edge_paths(q, m)
        for (g, rg), (h, rh) in itertools.product(paths, repeat=2):
            if rg == rh and (m == n or rg in sinks):
                total += 1
    return total


def rational_rank(rows) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        p = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[rank], m[p] = m[p], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c] / m[rank][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def _det(rows) -> int:
    n = len(rows)
    if n == 0:
        return 1
    return sum((-1) ** j * rows[0][j] * _det([r[:j] + r[j + 1:] for r in rows[1:]])
               for j in range(n) if rows[0][j])


def minor_gcd(rows, k: int) -> int:
    """gcd of all k x k minors (the k-th determinantal divisor)."""
    if k == 0:
        return 1
    g = 0
    nr, nc = len(rows), len(rows[0]) if rows else 0
    for ri in itertools.combinations(range(nr), k):
        for ci in itertools.combinations(range(nc), k):
            g = gcd(g, _det([[rows[i][j] for j in ci] for i in ri]))
    return g


def finite_group_elements(orders):
    return list(itertools.product(*[range(m) for m in orders]))


def induced_map_brute(rows, b: int, c: int, orders):
    """coker/ker element counts of ``G^c -> G^b`` for ``G = ⊕ Z/orders``.

    Returns two functions ``k -> #{x : kx = 0}`` on cokernel and kernel.
    """
    g = len(orders)

    def apply(x):
        # x is a c-tuple of G-elements; output a b-tuple
        return tuple(
            tuple(sum(rows[i][j] * x[j][t] for j in range(c)) % orders[t] for t in range(g))
            for i in range(b))

    G = finite_group_elements(orders)
    domain = list(itertools.product(G, repeat=c))
    image = {apply(x) for x in domain}
    zero_b = tuple(tuple(0 for _ in orders) for _ in range(b))
    kernel = [x for x in domain if apply(x) == zero_b]
    target = list(itertools.product(G, repeat=b))

    def mul(k, y):
        return tuple(tuple(k * e % orders[t] for t, e in enumerate(el)) for el in y)

    def coker_killed(k):
        return sum(1 for y in target if mul(k, y) in image) // len(image)

    def ker_killed(k):
        zero_c = tuple(tuple(0 for _ in orders) for _ in range(c))
        return sum(1 for x in kernel if mul(k, x) == zero_c)

    return coker_killed, ker_killed
