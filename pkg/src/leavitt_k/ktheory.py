"""K-groups of Leavitt path algebras from the cofiber of ``1 - N^t``.

For a quiver ``E`` and coefficient ring ``R`` the long exact sequence

    K_n(R)^{non-sinks} --(1 - N^t)--> K_n(R)^{E0} --> K_n(L_R(E)) --> K_{n-1}(R)^{non-sinks}

pins ``K_n(L_R(E))`` between a cokernel piece and a kernel piece.  This
module computes both pieces from the Smith form of ``1 - N^t`` and resolves
the extension only where it is forced to split.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Iterable

from .groups import (POW, QUOT, TORS, TRIVIAL, FgAbGroup, Group, SymbolicGroup,
                     direct_sum, parse_group)
from .linalg import IntMatrix, invariant_factors, one_minus_Nt
from .quiver import Quiver

MODES = ("K", "KH", "Ktop")
KNOWN_FLAGS = ("pid", "regular-supercoherent", "stable-cstar", "field")

# theorem labels cited in reports
CITE_RF_COH = "Thm. rf-coh"
CITE_SPLIT_MONO = "Thm. row-finitecase"
CITE_KH = "Thm. thm:kh"
CITE_KTOP = "Thm. thm:ktop"
CITE_PID = "Cor. rf-coh (PID)"
CITE_STABLE = "Cor. cor:stablereg"
CITE_NK = "Remark rem:coker"

SPLIT_FREE = "split (ker free)"
SPLIT_PID = "split (PID)"
UNRESOLVED = "unresolved-extension"

NK_NOTE = ("coefficients not declared regular-supercoherent: K_n(L) is the cofiber "
           "group plus twisted NK terms, which are not computed")


class KTableError(ValueError):
    pass


# --- cokernel and kernel ---------------------------------------------------

def _cyclic_pieces(factors: tuple[int, ...], b: int, c: int, m: int):
    """coker/ker orders of ``diag(factors)`` acting ``(Z/m)^c -> (Z/m)^b``."""
    s = len(factors)
    coker = [gcd(d, m) for d in factors] + [m] * (b - s)
    ker = [gcd(d, m) for d in factors] + [m] * (c - s)
    return coker, ker


def coker_ker(a: IntMatrix, g: Group, factors: tuple[int, ...] | None = None
              ) -> tuple[Group, Group]:
    """Cokernel and kernel of the map ``g^c -> g^b`` induced by the ``b x c`` matrix ``a``.

    ``factors`` may pass in a precomputed Smith diagonal of ``a``.
    """
    b, c = a.shape
    if factors is None:
        factors = invariant_factors(a)
    nonzero = [d for d in factors if d]
    s1 = len(nonzero)

    fg = g.fg if isinstance(g, SymbolicGroup) else g
    coker_rank = fg.rank * (b - s1)
    ker_rank = fg.rank * (c - s1)
    coker_orders = [d for d in nonzero if d > 1] * fg.rank
    ker_orders: list[int] = []
    for m in fg.torsion:
        co, ke = _cyclic_pieces(factors, b, c, m)
        coker_orders += co
        ker_orders += ke
    coker: Group = FgAbGroup.from_orders(coker_rank, coker_orders)
    ker: Group = FgAbGroup.from_orders(ker_rank, ker_orders)

    if isinstance(g, SymbolicGroup):
        ct, kt = [], []
        for name, op, k in g.terms:
            if op != POW:
                raise ValueError("coker_ker needs formal coefficients of the form name^k")
            for _ in range(k):
                ct.append((name, POW, b - s1))
                ct += [(name, QUOT, d) for d in nonzero if d > 1]
                kt.append((name, POW, c - s1))
                kt += [(name, TORS, d) for d in nonzero if d > 1]
        coker = SymbolicGroup(tuple(ct), coker).simplify()
        ker = SymbolicGroup(tuple(kt), ker).simplify()
    return coker, ker


# --- coefficient tables ----------------------------------------------------

@dataclass(frozen=True)
class KTable:
    """Coefficient data: degree -> K_n(R).

    ``default_below``/``default_above`` say what unspecified degrees below the
    lowest / above the highest declared degree are: ``"0"``, ``"repeat-2"``
    (copy the declared entry of the same parity) or ``None`` (undefined).
    """

    mode: str
    entries: dict[int, Group]
    flags: dict[str, str] = field(default_factory=dict)
    default_below: str | None = None
    default_above: str | None = None
    name: str = ""

    def __post_init__(self):
        if self.mode not in MODES:
            raise KTableError(f"mode must be one of {MODES}, got {self.mode!r}")
        for rule in (self.default_below, self.default_above):
            if rule not in (None, "0", "repeat-2"):
                raise KTableError(f"unknown default rule {rule!r}")
        if not self.entries:
            raise KTableError("table declares no degrees")
        if self.mode == "Ktop":
            self._check_periodic()

    def _check_periodic(self):
        if self.default_below != "repeat-2" or self.default_above != "repeat-2":
            raise KTableError("Ktop tables must extend 2-periodically in both directions "
                              "(default-: repeat-2, default+: repeat-2)")
        for n, g in self.entries.items():
            if n + 2 in self.entries and self.entries[n + 2] != g:
                raise KTableError(f"Ktop table is not 2-periodic: degree {n} vs {n + 2}")

    def has(self, flag: str) -> bool:
        return flag in self.flags

    @property
    def regular(self) -> bool:
        return self.has("regular-supercoherent")

    def lookup(self, n: int) -> tuple[Group, bool]:
        """Entry for degree ``n`` and whether it came from a default rule."""
        if n in self.entries:
            return self.entries[n], False
        lo, hi = min(self.entries), max(self.entries)
        rule = self.default_below if n < lo else self.default_above if n > hi else None
        if rule == "0":
            return TRIVIAL, True
        if rule == "repeat-2":
            same = [k for k in self.entries if (k - n) % 2 == 0]
            if same:
                return self.entries[min(same, key=lambda k: (abs(k - n), k))], True
        raise KTableError(f"table has no entry or default for degree {n}")


def parse_ktable(text: str, name: str = "") -> KTable:
    mode = None
    flags: dict[str, str] = {}
    entries: dict[int, Group] = {}
    below = above = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise KTableError(f"line {lineno}: expected 'key: value'")
        key, value = (p.strip() for p in line.split(":", 1))
        try:
            if key == "mode":
                mode = value
            elif key == "flags":
                for f in filter(None, (x.strip() for x in value.split(","))):
                    k, _, v = f.partition("=")
                    if k not in KNOWN_FLAGS:
                        raise KTableError(f"unknown flag {k!r}")
                    flags[k] = v
            elif key == "default-":
                below = value
            elif key == "default+":
                above = value
            else:
                n = int(key)
                if n in entries:
                    raise KTableError(f"degree {n} declared twice")
                entries[n] = parse_group(value)
        except KTableError as exc:
            raise KTableError(f"line {lineno}: {exc}") from None
        except ValueError as exc:
            raise KTableError(f"line {lineno}: {exc}") from None
    if mode is None:
        raise KTableError("missing 'mode:' line")
    return KTable(mode, entries, flags, below, above, name)


def load_ktable(ref: str) -> KTable:
    """Read a table from a path, or ``builtin:NAME`` for a shipped table."""
    if ref.startswith("builtin:"):
        name = ref[len("builtin:"):]
        res = resources.files("leavitt_k") / "data" / f"{name}.ktable"
        if not res.is_file():
            raise FileNotFoundError(f"no builtin table {name!r}; have {builtin_tables()}")
        return parse_ktable(res.read_text(encoding="utf-8"), name)
    path = Path(ref)
    return parse_ktable(path.read_text(encoding="utf-8"), path.stem)


def builtin_tables() -> list[str]:
    root = resources.files("leavitt_k") / "data"
    return sorted(p.name[:-len(".ktable")] for p in root.iterdir() if p.name.endswith(".ktable"))


def finite_field_table(q: int, top: int = 7) -> KTable:
    """Quillen's K-groups of the field with ``q`` elements up to degree ``top``."""
    entries: dict[int, Group] = {0: FgAbGroup(1)}
    for n in range(1, top + 1):
        entries[n] = FgAbGroup.cyclic(q ** ((n + 1) // 2) - 1) if n % 2 else TRIVIAL
    return KTable("K", entries, {"field": f"F{q}", "pid": "", "regular-supercoherent": ""},
                  "0", None, f"f{q}")


# --- reports ---------------------------------------------------------------

@dataclass(frozen=True)
class DegreeReport:
    degree: int
    coker: Group
    ker: Group
    total: Group | None
    split_status: str
    citations: tuple[str, ...]
    default_derived: bool = False
    ker_default_derived: bool = False

    def to_json(self) -> dict:
        out = {"degree": self.degree, "coker": self.coker.to_json(), "ker": self.ker.to_json(),
               "split_status": self.split_status, "citations": list(self.citations),
               "default_derived": self.default_derived,
               "ker_default_derived": self.ker_default_derived}
        if self.total is not None:
            out["total"] = self.total.to_json()
        return out

    def data(self) -> tuple:
        """Group data without citations, for comparing reports across modes."""
        return self.degree, self.coker, self.ker, self.total, self.split_status


@dataclass(frozen=True)
class KReport:
    mode: str
    degrees: tuple[DegreeReport, ...]
    flags: dict[str, str]
    nk_obstruction_note: str | None = None

    def __getitem__(self, n: int) -> DegreeReport:
        for d in self.degrees:
            if d.degree == n:
                return d
        raise KeyError(n)

    def to_json(self) -> dict:
        return {"mode": self.mode, "flags": dict(sorted(self.flags.items())),
                "nk_obstruction_note": self.nk_obstruction_note,
                "degrees": [d.to_json() for d in self.degrees]}


def _citations(table: KTable) -> list[str]:
    if table.mode == "KH":
        return [CITE_KH]
    if table.mode == "Ktop":
        return [CITE_KTOP]
    if table.has("stable-cstar"):
        return [CITE_STABLE]
    if table.regular:
        return [CITE_RF_COH]
    return [CITE_SPLIT_MONO, CITE_NK]


def k_groups(q: Quiver, table: KTable, degrees: Iterable[int]) -> KReport:
    a = one_minus_Nt(q)
    factors = invariant_factors(a)
    base = _citations(table)
    out = []
    for n in degrees:
        g_n, dflt_n = table.lookup(n)
        g_prev, dflt_prev = table.lookup(n - 1)
        coker, _ = coker_ker(a, g_n, factors)
        _, ker = coker_ker(a, g_prev, factors)
        cites = list(base)
        if ker.is_free:
            status, total = SPLIT_FREE, direct_sum(coker, ker)
        elif table.has("pid") and table.mode == "K" and n in (0, 1):
            status, total = SPLIT_PID, direct_sum(coker, ker)
            cites.append(CITE_PID)
        else:
            status, total = UNRESOLVED, None
        out.append(DegreeReport(n, coker, ker, total, status, tuple(cites), dflt_n, dflt_prev))
    note = None
    if table.mode == "K" and not (table.regular or table.has("stable-cstar")):
        note = NK_NOTE
    return KReport(table.mode, tuple(out), dict(table.flags), note)


def k0_k1_pid(q: Quiver, units: Group) -> KReport:
    """K_0 and K_1 over a principal ideal domain with unit group ``units``."""
    a = one_minus_Nt(q)
    factors = invariant_factors(a)
    k0, _ = coker_ker(a, FgAbGroup(1), factors)
    c1, _ = coker_ker(a, units, factors)
    _, k1 = coker_ker(a, FgAbGroup(1), factors)
    cites = (CITE_RF_COH, CITE_PID)
    return KReport("K", (
        DegreeReport(0, k0, TRIVIAL, k0, SPLIT_PID, cites),
        DegreeReport(1, c1, k1, direct_sum(c1, k1), SPLIT_PID, cites),
    ), {"pid": "", "regular-supercoherent": ""})
