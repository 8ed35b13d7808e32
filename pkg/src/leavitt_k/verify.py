"""Independent cross-checks for the quiver, linear-algebra and K-theory code.

Every check returns a :class:`CheckOutcome`; a failure carries a JSON
witness (quiver text, the matrices involved, both computed sides) that the
``check`` command can replay.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .groups import FgAbGroup, direct_sum
from .ktheory import KTable, coker_ker, k_groups
from .linalg import (IntMatrix, adjacency, det, edge_matrix, invariant_factors, is_smith_form,
                     one_minus_Nt, pullback, pushforward, smith_normal_form)
from .quiver import Quiver, path_counts, reduction_chain, tilde_quiver

DEFAULT_MODULI = (2, 3, 4, 12)
NAIVE_SNF_CAP = 8


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    witness: dict | None = None
    detail: str = ""

    def __bool__(self):
        return self.passed


def _witness(name: str, q: Quiver | None, **sides) -> dict:
    w = {"check": name, "quiver": q.to_text() if q is not None else None}
    for k, v in sides.items():
        w[k] = v.to_json() if hasattr(v, "to_json") else v
    return w


# --- naive Smith form, an oracle for linalg.smith_normal_form -------------

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def naive_smith_factors(a: IntMatrix) -> tuple[int, ...]:
    """Smith diagonal by plain extended-gcd elimination, first nonzero pivot."""
    if max(a.shape) > NAIVE_SNF_CAP:
        raise ValueError(f"naive Smith form is capped at {NAIVE_SNF_CAP}x{NAIVE_SNF_CAP}")
    m = a.to_rows()
    rows, cols = a.shape
    for t in range(min(rows, cols)):
        pos = next(((i, j) for i in range(t, rows) for j in range(t, cols) if m[i][j]), None)
        if pos is None:
            break
        i, j = pos
        m[t], m[i] = m[i], m[t]
        for r in m:
            r[t], r[j] = r[j], r[t]
        while True:
            for i in range(t + 1, rows):
                if m[i][t] and m[i][t] % m[t][t] == 0:
                    c = m[i][t] // m[t][t]
                    m[i] = [w - c * u for u, w in zip(m[t], m[i])]
                elif m[i][t]:
                    g, x, y = _xgcd(m[t][t], m[i][t])
                    p, q = m[t][t] // g, m[i][t] // g
                    rt, ri = m[t], m[i]
                    m[t] = [x * u + y * w for u, w in zip(rt, ri)]
                    m[i] = [-q * u + p * w for u, w in zip(rt, ri)]
            for j in range(t + 1, cols):
                if m[t][j] and m[t][j] % m[t][t] == 0:
                    c = m[t][j] // m[t][t]
                    for r in m:
                        r[j] -= c * r[t]
                elif m[t][j]:
                    g, x, y = _xgcd(m[t][t], m[t][j])
                    p, q = m[t][t] // g, m[t][j] // g
                    for r in m:
                        u, w = r[t], r[j]
                        r[t], r[j] = x * u + y * w, -q * u + p * w
            if any(m[i][t] for i in range(t + 1, rows)):
                continue
            bad = next((i for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if m[i][j] % m[t][t]), None)
            if bad is None:
                break
            m[t] = [u + w for u, w in zip(m[t], m[bad])]
        m[t][t] = abs(m[t][t])
    return tuple(m[i][i] for i in range(min(rows, cols)))


def fraction_det(a: IntMatrix) -> int:
    """Determinant by Gaussian elimination over the rationals."""
    if a.rows != a.cols:
        raise ValueError("determinant needs a square matrix")
    m = [[Fraction(x) for x in r] for r in a.to_rows()]
    n, result = a.rows, Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k]), None)
        if p is None:
            return 0
        if p != k:
            m[k], m[p] = m[p], m[k]
            result = -result
        result *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return int(result)


def certify_snf(a: IntMatrix) -> CheckOutcome:
    name = "certify_snf"
    sf = smith_normal_form(a)
    problems = []
    if sf.u @ a @ sf.v != sf.d:
        problems.append("U*A*V != D")
    if not is_smith_form(sf.d) or tuple(sf.d.diagonal()) != sf.factors:
        problems.append("D is not in Smith form")
    if abs(fraction_det(sf.u)) != 1 or abs(fraction_det(sf.v)) != 1:
        problems.append("transform not unimodular")
    naive = naive_smith_factors(a) if max(a.shape) <= NAIVE_SNF_CAP else sf.factors
    if naive != sf.factors:
        problems.append("factor lists disagree")
    if a.rows == a.cols and a.rows:
        d = fraction_det(a)
        if d:
            prod = 1
            for f in sf.factors:
                prod *= f
            if prod != abs(d):
                problems.append("product of factors != |det|")
    if not problems:
        return CheckOutcome(name, True)
    return CheckOutcome(name, False, _witness(
        name, None, matrix=a, primary=[str(f) for f in sf.factors],
        oracle=[str(f) for f in naive], u=sf.u, d=sf.d, v=sf.v), "; ".join(problems))


# --- matrices of a quiver ------------------------------------------------

def check_myn(q: Quiver, moduli: Iterable[int] = DEFAULT_MODULI) -> CheckOutcome:
    """coker/ker of ``1 - N'`` and ``1 - M`` agree over Z and every Z/m."""
    name = "check_myn"
    moduli = tuple(moduli)
    n = adjacency(q)
    mm = edge_matrix(q)
    problems = []
    if pushforward(q, "s") @ pullback(q, "r") != n:
        problems.append("N' != s_* r^*")
    if pullback(q, "r") @ pushforward(q, "s") != mm:
        problems.append("M != r^* s_*")
    c0 = IntMatrix.identity(n.rows) - n
    c1 = IntMatrix.identity(mm.rows) - mm
    f0, f1 = invariant_factors(c0), invariant_factors(c1)
    sides0, sides1 = {}, {}
    for coeff in [FgAbGroup(1)] + [FgAbGroup.cyclic(m) for m in moduli]:
        key = str(coeff)
        s0 = coker_ker(c0, coeff, f0)
        s1 = coker_ker(c1, coeff, f1)
        sides0[key] = [str(x) for x in s0]
        sides1[key] = [str(x) for x in s1]
        if s0 != s1:
            problems.append(f"coefficients {key}: {s0[0]}, {s0[1]} vs {s1[0]}, {s1[1]}")
    if not problems:
        return CheckOutcome(name, True)
    return CheckOutcome(name, False, _witness(
        name, q, moduli=list(moduli), one_minus_N=c0, one_minus_M=c1,
        vertex_side=sides0, edge_side=sides1), "; ".join(problems))


def table_degrees(table: KTable) -> range:
    lo, hi = min(table.entries), max(table.entries)
    # degree n also reads entry n-1, so start where that is defined
    start = lo if table.default_below else lo + 1
    return range(start, hi + 1)


def check_reduction_invariance(q: Quiver, table: KTable,
                               degrees: Iterable[int] | None = None) -> CheckOutcome:
    """Every stage of the reduction chain has the same K-data as ``q``."""
    name = "check_reduction_invariance"
    degrees = tuple(table_degrees(table) if degrees is None else degrees)
    chain = reduction_chain(q)
    problems = []
    reports = [k_groups(f, table, degrees) for f in chain.stages]
    target = [d.data() for d in reports[-1].degrees]
    for i, rep in enumerate(reports):
        if [d.data() for d in rep.degrees] != target:
            problems.append(f"stage {i} differs from the full quiver")
    # F = tilde(E) plus the ell sinks outside it
    tilde = tilde_quiver(q)
    tilde_rep = k_groups(tilde, table, degrees) if tilde.vertices else None
    for d_f in reports[0].degrees:
        g, _ = table.lookup(d_f.degree)
        extra = g ** chain.ell
        if tilde_rep is None:
            coker_t, ker_t = g ** 0, g ** 0
        else:
            coker_t, ker_t = tilde_rep[d_f.degree].coker, tilde_rep[d_f.degree].ker
        if direct_sum(coker_t, extra) != d_f.coker or ker_t != d_f.ker:
            problems.append(f"degree {d_f.degree}: F-stage is not tilde(E) + K(R)^{chain.ell}")
    if not problems:
        return CheckOutcome(name, True)
    return CheckOutcome(name, False, _witness(
        name, q, table=table.name, degrees=list(degrees),
        stages=[s.to_text() for s in chain.stages],
        matrices=[one_minus_Nt(s) for s in chain.stages],
        reports=[r.to_json() for r in reports]), "; ".join(problems))


# --- degree-zero dimension tower -----------------------------------------

def dim_L0(q: Quiver, n: int, counts=None) -> int:
    """Rank of the span of ``g h*`` over equal-length paths, level ``n``."""
    pc = counts or path_counts(q, n)
    sinks = q.sinks
    return (sum(pc(m, i) ** 2 for m in range(n) for i in sinks)
            + sum(pc(n, i) ** 2 for i in q.vertices))


def enumerate_paths_by_range(q: Quiver, n_max: int) -> dict[tuple[int, str], int]:
    """Count arrow paths by walking vertex sequences (multiplicities multiply)."""
    mult = q.multiplicities()
    succ: dict[str, list[tuple[str, int]]] = {v: [] for v in q.vertices}
    for (s, t), m in mult.items():
        succ[s].append((t, m))
    counts = {(n, v): 0 for n in range(n_max + 1) for v in q.vertices}

    def walk(v: str, length: int, ways: int):
        counts[(length, v)] += ways
        if length < n_max:
            for t, m in succ[v]:
                walk(t, length + 1, ways * m)

    for v in q.vertices:
        walk(v, 0, 1)
    return counts


def enumerate_L0_basis(q: Quiver, n: int, by_range=None) -> int:
    """Size of the monomial basis {g h* : |g|=|h|=m, r(g)=r(h)} of level n.

    Monomials of length m < n survive only when their common range is a sink;
    the others expand into length m+1 monomials.
    """
    by_range = by_range or enumerate_paths_by_range(q, n)
    sinks = set(q.sinks)
    total = 0
    for (m, v), c in by_range.items():
        if m == n or (m < n and v in sinks):
            total += c * c
    return total


def check_dimension_tower(q: Quiver, n_max: int) -> CheckOutcome:
    name = "check_dimension_tower"
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    pc = path_counts(q, n_max)
    brute = enumerate_paths_by_range(q, n_max)
    problems = []
    if any(pc(n, v) != brute[(n, v)] for n in range(n_max + 1) for v in q.vertices):
        problems.append("path counts disagree with enumeration")
    mult = q.multiplicities()
    non_sinks = set(q.non_sinks)
    for n in range(n_max):
        for j in q.vertices:
            fed = sum(m * pc(n, i) for (i, t), m in mult.items() if t == j and i in non_sinks)
            if fed != pc(n + 1, j):
                problems.append(f"block sizes into ({n + 1},{j}) do not add up")
    dims = [dim_L0(q, n, pc) for n in range(n_max + 1)]
    oracle = [enumerate_L0_basis(q, n, {k: v for k, v in brute.items() if k[0] <= n})
              for n in range(n_max + 1)]
    if dims != oracle:
        problems.append("dimension formula disagrees with basis enumeration")
    if any(b < a for a, b in zip(dims, dims[1:])):
        problems.append("dimension tower is not monotone")
    if not problems:
        return CheckOutcome(name, True, detail=" ".join(map(str, dims)))
    return CheckOutcome(name, False, _witness(
        name, q, n_max=n_max, formula=[str(d) for d in dims], enumeration=[str(d) for d in oracle]),
        "; ".join(problems))


# --- comparison map --------------------------------------------------------

ISO, ZERO, NOT_ISO, UNKNOWN = "iso", "zero-map", "not-iso", "unknown"
CITE_SUS = "Thm. thm:sus"
CITE_STABLE_GAMMA = "Thm. thm:stable"
CITE_SINK_REMARK = "Remark after Thm. thm:sus"
NA_DET = "n/a (sinks present / not square)"


@dataclass(frozen=True)
class GammaPrediction:
    det_value: int | str
    rule: str
    summary: str
    hypothesis_trail: tuple[str, ...] = field(default=())

    def verdict(self, n: int) -> str:
        if self.rule == "stable":
            return ISO
        if self.rule == "sus":
            return ISO if n >= 0 else ZERO
        if self.rule == "sinks":
            return NOT_ISO if n != 0 else UNKNOWN
        return UNKNOWN

    def to_json(self) -> dict:
        return {"det": str(self.det_value), "verdict": self.summary,
                "hypothesis_trail": list(self.hypothesis_trail)}


def predict_gamma(q: Quiver, table: KTable) -> GammaPrediction:
    a = one_minus_Nt(q)
    d: int | str = det(a) if a.rows == a.cols else NA_DET
    if table.has("stable-cstar"):
        return GammaPrediction(d, "stable", "iso for all n", (CITE_STABLE_GAMMA,))
    if table.flags.get("field") == "complex":
        if q.sinks:
            return GammaPrediction(d, "sinks", "not iso for n!=0", (CITE_SINK_REMARK,))
        if d != 0:
            return GammaPrediction(d, "sus", "iso for n>=0, zero-map for n<=-1", (CITE_SUS,))
        return GammaPrediction(d, "none", "unknown (det(1-N^t) = 0)")
    return GammaPrediction(d, "none", "unknown")


# --- quiver generators -----------------------------------------------------

def random_quiver(rng: random.Random, max_vertices: int = 6, max_mult: int = 3,
                  density: float = 0.3) -> Quiver:
    nv = rng.randint(1, max_vertices)
    names = [f"v{i}" for i in range(nv)]
    edges = []
    for s in names:
        for t in names:
            if rng.random() < density:
                edges += [(s, t)] * rng.randint(1, max_mult)
    return Quiver(tuple(names), tuple(edges))


def exhaustive_quivers(max_vertices: int = 3, max_mult: int = 2) -> Iterator[Quiver]:
    """All quivers up to isomorphism with the given bounds (including the empty one)."""
    yield Quiver(())
    for nv in range(1, max_vertices + 1):
        names = [f"v{i}" for i in range(nv)]
        pairs = [(i, j) for i in range(nv) for j in range(nv)]
        perms = list(itertools.permutations(range(nv)))
        seen = set()
        for mults in itertools.product(range(max_mult + 1), repeat=len(pairs)):
            grid = dict(zip(pairs, mults))
            canon = min(tuple(grid[(p[i], p[j])] for i, j in pairs) for p in perms)
            if canon in seen:
                continue
            seen.add(canon)
            edges = [(names[i], names[j]) for (i, j), m in grid.items() for _ in range(m)]
            yield Quiver(tuple(names), tuple(edges))


def run_checks(q: Quiver, table: KTable, n_max: int = 6) -> list[CheckOutcome]:
    """The per-quiver battery used by ``leavitt-k check``."""
    out = [check_myn(q), check_reduction_invariance(q, table), check_dimension_tower(q, n_max)]
    a = one_minus_Nt(q)
    if max(a.shape) <= NAIVE_SNF_CAP:
        out.append(certify_snf(a))
    return out


def replay(witness: dict, table: KTable | None = None) -> CheckOutcome:
    """Re-run the check recorded in a witness bundle."""
    from .quiver import parse_quiver

    name = witness["check"]
    q = parse_quiver(witness["quiver"]) if witness.get("quiver") else None
    if name == "check_myn":
        return check_myn(q, witness.get("moduli", DEFAULT_MODULI))
    if name == "check_dimension_tower":
        return check_dimension_tower(q, witness["n_max"])
    if name == "check_reduction_invariance":
        if table is None:
            raise ValueError("replaying a reduction check needs the ktable")
        return check_reduction_invariance(q, table, witness["degrees"])
    if name == "certify_snf":
        m = witness["matrix"]
        return certify_snf(IntMatrix.from_rows([[int(x) for x in r] for r in m["entries"]], m["cols"]))
    raise ValueError(f"unknown check {name!r}")
