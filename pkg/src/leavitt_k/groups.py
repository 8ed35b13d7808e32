"""Finitely generated abelian groups and formal (non-f.g.) groups.

Canonical text form: ``Z^2 + Z/3 + Z/9``, invariant factors ascending,
``0`` for the trivial group.  A formal group such as the units of an
infinite field renders as ``k*``, ``k*^2``, ``k*/(k*)^3`` (quotient by
cubes) or ``k*[3]`` (3-torsion), mixed freely with an f.g. part.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Union


def invariant_form(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors of a direct sum of cyclic groups of the given orders.

    Orders equal to 1 are dropped; 0 is not allowed (free part is separate).
    """
    fs = [abs(int(x)) for x in orders]
    if any(f == 0 for f in fs):
        raise ValueError("order 0 is the free part; pass it as rank")
    fs = [f for f in fs if f != 1]
    fs.sort()
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            g = gcd(fs[i], fs[j])
            fs[i], fs[j] = g, fs[i] * fs[j] // g
    return tuple(f for f in fs if f != 1)


@dataclass(frozen=True)
class FgAbGroup:
    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        t = tuple(self.torsion)
        if any(d < 2 for d in t) or any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"torsion {t} is not an invariant-factor chain")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_orders(cls, rank: int = 0, orders: Iterable[int] = ()) -> "FgAbGroup":
        return cls(rank, invariant_form(orders))

    @classmethod
    def cyclic(cls, n: int) -> "FgAbGroup":
        """``Z/n``; ``n == 0`` gives ``Z``."""
        return cls(1) if n == 0 else cls.from_orders(0, [n])

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def order(self) -> int | None:
        return None if self.rank else prod(self.torsion)

    def __add__(self, other):
        if isinstance(other, SymbolicGroup):
            return other + self
        return FgAbGroup.from_orders(self.rank + other.rank, self.torsion + other.torsion)

    def __pow__(self, m: int) -> "FgAbGroup":
        return FgAbGroup.from_orders(self.rank * m, self.torsion * m)

    def count_killed_by(self, k: int) -> int | None:
        """``#{x : kx = 0}``; ``None`` when infinite."""
        if self.rank and k == 0:
            return None
        return prod(gcd(k, d) for d in self.torsion) if k else self.order

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": [str(d) for d in self.torsion], "text": str(self)}


TRIVIAL = FgAbGroup()
Z = FgAbGroup(1)

# op codes for formal terms
POW, QUOT, TORS = "pow", "quot", "tors"


@dataclass(frozen=True)
class SymbolicGroup:
    """A formal sum of an f.g. part and unevaluated terms over named groups.

    ``terms`` holds ``(name, op, k)``: ``pow`` is ``name^k``, ``quot`` is
    ``name / k*name``, ``tors`` is the ``k``-torsion subgroup of ``name``.
    """

    terms: tuple[tuple[str, str, int], ...]
    fg: FgAbGroup = TRIVIAL

    def __post_init__(self):
        powers: dict[str, int] = {}
        rest = []
        for name, op, k in self.terms:
            if op == POW:
                powers[name] = powers.get(name, 0) + k
            elif op in (QUOT, TORS):
                if k < 1:
                    raise ValueError("formal quotient/torsion needs k >= 1")
                if k > 1:
                    rest.append((name, op, k))
            else:
                raise ValueError(f"unknown formal op {op!r}")
        canon = [(n, POW, k) for n, k in sorted(powers.items()) if k]
        canon += sorted(rest)
        object.__setattr__(self, "terms", tuple(canon))

    @classmethod
    def named(cls, name: str) -> "SymbolicGroup":
        return cls(((name, POW, 1),))

    @property
    def name(self) -> str:
        return ",".join(sorted({n for n, _, _ in self.terms}))

    @property
    def formal_ops(self) -> tuple[tuple[str, str, int], ...]:
        return self.terms

    @property
    def is_trivial(self) -> bool:
        return not self.terms and self.fg.is_trivial

    @property
    def is_free(self) -> bool:
        # a formal group is never known to be free
        return not self.terms and self.fg.is_free

    def simplify(self) -> "Group":
        return self.fg if not self.terms else self

    def __add__(self, other):
        if isinstance(other, FgAbGroup):
            return SymbolicGroup(self.terms, self.fg + other).simplify()
        return SymbolicGroup(self.terms + other.terms, self.fg + other.fg).simplify()

    def __radd__(self, other):
        return self + other

    def __pow__(self, m: int) -> "Group":
        return SymbolicGroup(tuple((n, op, k) for n, op, k in self.terms for _ in range(m)),
                             self.fg ** m).simplify()

    def __str__(self):
        parts = [] if self.fg.is_trivial else [str(self.fg)]
        for name, op, k in self.terms:
            if op == POW:
                parts.append(name if k == 1 else f"{name}^{k}")
            elif op == QUOT:
                parts.append(f"{name}/({name})^{k}")
            else:
                parts.append(f"{name}[{k}]")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"symbolic": True, "fg": self.fg.to_json(),
                "terms": [[n, op, str(k)] for n, op, k in self.terms], "text": str(self)}


Group = Union[FgAbGroup, SymbolicGroup]

_NAME = r"[A-Za-z][A-Za-z0-9_]*\*?"
_TERM = re.compile(
    rf"""^(?:
        (?P<zero>0)
      | Z(?:\^(?P<zr>\d+))?
      | Z/(?P<zd>\d+)
      | (?:sym:)?(?P<quot>{_NAME})/\((?P=quot)\)\^(?P<qk>\d+)
      | (?:sym:)?(?P<tors>{_NAME})\[(?P<tk>\d+)\]
      | (?:sym:)?(?P<pow>{_NAME})(?:\^(?P<pk>\d+))?
    )$""",
    re.VERBOSE,
)


def parse_group(text: str) -> Group:
    """Inverse of ``str`` on groups; also accepts ``sym:k*`` for a formal name."""
    rank, orders, terms = 0, [], []
    text = text.strip()
    if not text:
        raise ValueError("empty group expression")
    for raw in text.split("+"):
        tok = raw.strip()
        m = _TERM.match(tok)
        if not m or (m.group("pow") == "Z"):
            raise ValueError(f"cannot parse group term {tok!r}")
        if m.group("zero"):
            continue
        if m.group("zd") is not None:
            d = int(m.group("zd"))
            if d == 0:
                rank += 1
            else:
                orders.append(d)
        elif m.group("quot"):
            terms.append((m.group("quot"), QUOT, int(m.group("qk"))))
        elif m.group("tors"):
            terms.append((m.group("tors"), TORS, int(m.group("tk"))))
        elif m.group("pow"):
            terms.append((m.group("pow"), POW, int(m.group("pk") or 1)))
        else:
            rank += int(m.group("zr") or 1)
    fg = FgAbGroup.from_orders(rank, orders)
    return SymbolicGroup(tuple(terms), fg).simplify() if terms else fg


def direct_sum(*groups: Group) -> Group:
    out: Group = TRIVIAL
    for g in groups:
        out = out + g
    return out
