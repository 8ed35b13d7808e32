"""Small named quivers shared by the tests."""

from leavitt_k.quiver import Quiver, parse_quiver


def loops(n: int) -> Quiver:
    return Quiver(("v",), (("v", "v"),) * n)


def line_quiver(d: int) -> Quiver:
    names = tuple(f"v{i}" for i in range(1, d + 1))
    return Quiver(names, tuple(zip(names, names[1:])))


def edgeless(d: int) -> Quiver:
    return Quiver(tuple(f"v{i}" for i in range(d)), ())


A_TO_B = parse_quiver("vertices: a b\nedges:\na b 1\n")
