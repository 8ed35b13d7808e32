"""Dense integer matrices and the Smith normal form.

Entries are Python ints, so nothing overflows.  Matrices may have zero rows
or zero columns; a quiver whose vertices are all sinks gives a ``d x 0``
matrix and that shape flows through every routine here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .quiver import Quiver


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(f"expected {self.rows * self.cols} entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        a, b = self.to_rows(), other.to_rows()
        out = [[sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
               for i in range(self.rows)]
        return IntMatrix.from_rows(out, other.cols)

    def _zip(self, other: "IntMatrix", op) -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return IntMatrix(self.rows, self.cols, tuple(op(x, y) for x, y in zip(self.entries, other.entries)))

    def __add__(self, other):
        return self._zip(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._zip(other, lambda x, y: x - y)

    def __neg__(self):
        return IntMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def mod(self, m: int) -> "IntMatrix":
        """Entries reduced to ``[0, m)``."""
        if m < 1:
            raise ValueError("modulus must be positive")
        return IntMatrix(self.rows, self.cols, tuple(x % m for x in self.entries))

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[str(x) for x in r] for r in self.to_rows()]}

    def __str__(self):
        if not self.rows or not self.cols:
            return f"[{self.rows}x{self.cols} empty]"
        width = max(len(str(x)) for x in self.entries)
        return "\n".join("[" + " ".join(str(x).rjust(width) for x in r) + "]" for r in self.to_rows())


@dataclass(frozen=True)
class SmithForm:
    """``u @ a @ v == d`` with unimodular ``u`` and ``v``."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix
    factors: tuple[int, ...]

    @property
    def nonzero(self) -> tuple[int, ...]:
        return tuple(f for f in self.factors if f)


# --- matrices of a quiver -------------------------------------------------

def adjacency(q: Quiver) -> IntMatrix:
    """``n[i][j]`` = number of arrows i -> j, vertices in sinks-first order."""
    pos = q.index()
    n = len(q.vertices)
    rows = [[0] * n for _ in range(n)]
    for s, t in q.edges:
        rows[pos[s]][pos[t]] += 1
    return IntMatrix.from_rows(rows, n)


def edge_matrix(q: Quiver) -> IntMatrix:
    """``m[a][b] = 1`` iff arrow a ends where arrow b starts."""
    edges = q.ordered_edges()
    return IntMatrix.from_rows([[int(ra == sb) for sb, _ in edges] for _, ra in edges], len(edges))


def pullback(q: Quiver, end: str) -> IntMatrix:
    """``f^*: Z^{E0} -> Z^{E1}`` for ``f`` the source (``end='s'``) or range map."""
    pos = q.index()
    k = 0 if end == "s" else 1
    edges = q.ordered_edges()
    return IntMatrix.from_rows([[int(pos[e[k]] == j) for j in range(len(pos))] for e in edges],
                               len(pos))


def pushforward(q: Quiver, end: str) -> IntMatrix:
    """``f_*: Z^{E1} -> Z^{E0}``; the transpose of :func:`pullback`."""
    return pullback(q, end).T


def one_minus_Nt(q: Quiver) -> IntMatrix:
    """The ``e0 x (e0 - #sinks)`` matrix ``[0; 1] - N^t``.

    Rows follow the sinks-first order of all vertices, columns the non-sinks.
    """
    n = adjacency(q)
    e0 = len(q.vertices)
    k = len(q.sinks)
    rows = [[int(i == j + k) - n[j + k, i] for j in range(e0 - k)] for i in range(e0)]
    return IntMatrix.from_rows(rows, e0 - k)


# --- Smith normal form ----------------------------------------------------

def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for r in m:
        r[i], r[j] = r[j], r[i]


def _snf(a: IntMatrix, certify: bool):
    rows, cols = a.rows, a.cols
    m = a.to_rows()
    u = IntMatrix.identity(rows).to_rows() if certify else None
    v = IntMatrix.identity(cols).to_rows() if certify else None

    def add_row(dst, src, c):  # row dst += c * row src
        m[dst] = [x + c * y for x, y in zip(m[dst], m[src])]
        if certify:
            u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for r in m:
            r[dst] += c * r[src]
        if certify:
            for r in v:
                r[dst] += c * r[src]

    for t in range(min(rows, cols)):
        while True:
            # smallest nonzero |entry| in the trailing block
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = m[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                _swap_rows(m, i, t)
                if certify:
                    _swap_rows(u, i, t)
            if j != t:
                _swap_cols(m, j, t)
                if certify:
                    _swap_cols(v, j, t)
            p = m[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if m[i][t]:
                    add_row(i, t, -(m[i][t] // p))
                    dirty |= m[i][t] != 0
            for j in range(t + 1, cols):
                if m[t][j]:
                    add_col(j, t, -(m[t][j] // p))
                    dirty |= m[t][j] != 0
            if dirty:
                continue
            # pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if m[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            if certify:
                u[t] = [-x for x in u[t]]
    factors = tuple(m[i][i] for i in range(min(rows, cols)))
    if not certify:
        return factors
    return SmithForm(IntMatrix.from_rows(u, rows), IntMatrix.from_rows(m, cols),
                     IntMatrix.from_rows(v, cols), factors)


def smith_normal_form(a: IntMatrix) -> SmithForm:
    """Smith form with certificate; factors are nonnegative, zeros trail."""
    return _snf(a, certify=True)


def invariant_factors(a: IntMatrix) -> tuple[int, ...]:
    """Diagonal of the Smith form, without building the transforms."""
    return _snf(a, certify=False)


def det(a: IntMatrix) -> int:
    """Exact determinant (fraction-free Bareiss elimination)."""
    if a.rows != a.cols:
        raise ValueError(f"determinant of a non-square {a.rows}x{a.cols} matrix")
    n = a.rows
    m = a.to_rows()
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def rank(a: IntMatrix) -> int:
    return sum(1 for f in invariant_factors(a) if f)


def is_smith_form(d: IntMatrix) -> bool:
    if not d.is_diagonal():
        return False
    diag = d.diagonal()
    if any(x < 0 for x in diag):
        return False
    return all(y % x == 0 if x else y == 0 for x, y in zip(diag, diag[1:]))


def block_diag(*mats: IntMatrix) -> IntMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out[r0 + i][c0 + j] = m[i, j]
        r0 += m.rows
        c0 += m.cols
    return IntMatrix.from_rows(out, cols)


def parse_matrix(text: str) -> IntMatrix:
    """Whitespace-separated integer rows; ``shape: r c`` declares empty shapes."""
    rows: list[list[int]] = []
    shape = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("shape:"):
            r, c = (int(x) for x in line[6:].split())
            shape = (r, c)
            continue
        rows.append([int(x) for x in line.split()])
    if shape is not None:
        if not rows:
            return IntMatrix.zeros(*shape)
        m = IntMatrix.from_rows(rows)
        if m.shape != shape:
            raise ValueError(f"declared shape {shape} but read {m.shape}")
        return m
    return IntMatrix.from_rows(rows)



