import json
import random

import pytest
from hypothesis import given, settings

from leavitt_k import verify
from leavitt_k.ktheory import load_ktable, parse_ktable
from leavitt_k.linalg import IntMatrix, invariant_factors
from leavitt_k.quiver import Quiver, parse_quiver
from leavitt_k.verify import (certify_snf, check_dimension_tower, check_myn,
                              check_reduction_invariance, dim_L0, exhaustive_quivers,
                              naive_smith_factors, predict_gamma, random_quiver, replay,
                              run_checks)
from oracles import L0_pairs_brute, minor_gcd
from quivers import A_TO_B, edgeless, line_quiver, loops
from test_linalg import matrices
from test_quiver import quivers

INTEGERS = load_ktable("builtin:integers")
COMPLEX = load_ktable("builtin:complex")
COMPACTS = load_ktable("builtin:compacts")


# --- SNF oracle -----------------------------------------------------------

def test_naive_snf_examples():
    assert naive_smith_factors(IntMatrix.from_rows([[2, 4], [6, 8]])) == (2, 4)
    assert naive_smith_factors(IntMatrix.from_rows([[0, 3], [2, 0]])) == (1, 6)
    assert naive_smith_factors(IntMatrix.zeros(2, 0)) == ()


def test_naive_snf_cap():
    with pytest.raises(ValueError):
        naive_smith_factors(IntMatrix.zeros(9, 1))


@settings(max_examples=150, deadline=None)
@given(matrices(max_rows=4, max_cols=4, bound=6))
def test_naive_snf_matches_minors(a):
    fs = naive_smith_factors(a)
    prod = 1
    for k, f in enumerate([f for f in fs if f], start=1):
        prod *= f
        assert prod == minor_gcd(a.to_rows(), k)


@pytest.mark.parametrize("shape", [(0, 0), (0, 2), (3, 0)])
def test_certify_empty(shape):
    assert certify_snf(IntMatrix.zeros(*shape))


def test_certify_failure_has_witness(monkeypatch):
    a = IntMatrix.from_rows([[2, 4], [6, 8]])
    monkeypatch.setattr(verify, "naive_smith_factors", lambda m: (1, 8))
    out = certify_snf(a)
    assert not out and "disagree" in out.detail
    assert out.witness["primary"] == ["2", "4"] and out.witness["oracle"] == ["1", "8"]
    monkeypatch.undo()
    assert replay(out.witness)


# --- MyN ---------------------------------------------------------------------

@pytest.mark.parametrize("q", [loops(1), loops(3), A_TO_B, edgeless(3), line_quiver(4), Quiver(())])
def test_myn_examples(q):
    assert check_myn(q)


@settings(max_examples=100, deadline=None)
@given(quivers(max_vertices=5, max_mult=3))
def test_myn_property(q):
    assert check_myn(q)


def test_myn_detects_broken_edge_matrix(monkeypatch):
    monkeypatch.setattr(verify, "edge_matrix", lambda q: IntMatrix.zeros(len(q.edges), len(q.edges)))
    out = check_myn(loops(3))
    assert not out
    assert out.witness["quiver"] == loops(3).to_text()
    assert "vertex_side" in out.witness and "edge_side" in out.witness


# --- reduction ---------------------------------------------------------------

TAIL = parse_quiver("vertices: d c a b s\nedges:\na a 2\na b 1\nc a 1\nd c 1\nd s 1\n")


@pytest.mark.parametrize("table", [INTEGERS, load_ktable("builtin:f5"), load_ktable("builtin:field")])
@pytest.mark.parametrize("q", [TAIL, A_TO_B, line_quiver(5), loops(4), edgeless(2)])
def test_reduction_examples(q, table):
    assert check_reduction_invariance(q, table)


def test_reduction_detects_wrong_table_value(monkeypatch):
    calls = {"n": 0}
    real = verify.k_groups

    def flaky(q, table, degrees):
        calls["n"] += 1
        rep = real(q, table, degrees)
        if calls["n"] == 1:  # perturb stage 0 only
            return real(edgeless(len(q.vertices) + 1), table, degrees)
        return rep

    monkeypatch.setattr(verify, "k_groups", flaky)
    out = check_reduction_invariance(TAIL, INTEGERS)
    assert not out and "stage 0" in out.detail


# --- dimension tower -------------------------------------------------------

def test_dims_two_loops():
    assert [dim_L0(loops(2), n) for n in range(6)] == [4 ** n for n in range(6)]


def test_dims_a_to_b():
    assert [dim_L0(A_TO_B, n) for n in range(4)] == [2, 2, 2, 2]


def test_dims_edgeless():
    assert all(dim_L0(edgeless(4), n) == 4 for n in range(5))


@settings(max_examples=80, deadline=None)
@given(quivers(max_vertices=4, max_mult=2))
def test_dims_match_pair_enumeration(q):
    for n in range(4):
        assert dim_L0(q, n) == L0_pairs_brute(q, n)
    assert check_dimension_tower(q, 4)


def test_tower_rejects_level_zero():
    with pytest.raises(ValueError):
        check_dimension_tower(loops(1), 0)


# --- gamma -------------------------------------------------------------------

def test_gamma_two_loops_complex():
    p = predict_gamma(loops(2), COMPLEX)
    assert p.det_value == -1
    assert p.summary == "iso for n>=0, zero-map for n<=-1"
    assert p.hypothesis_trail == ("Thm. thm:sus",)
    assert [p.verdict(n) for n in (-2, -1, 0, 3)] == ["zero-map", "zero-map", "iso", "iso"]


def test_gamma_sinks_complex():
    p = predict_gamma(A_TO_B, COMPLEX)
    assert p.summary == "not iso for n!=0"
    assert p.det_value == "n/a (sinks present / not square)"
    assert p.verdict(0) == "unknown" and p.verdict(1) == "not-iso"


def test_gamma_singular_complex_unknown():
    p = predict_gamma(loops(1), COMPLEX)
    assert p.det_value == 0 and p.summary.startswith("unknown") and not p.hypothesis_trail


def test_gamma_other_field_unknown():
    assert predict_gamma(A_TO_B, load_ktable("builtin:f5")).summary == "unknown"
    assert predict_gamma(loops(2), load_ktable("builtin:field")).summary == "unknown"


@settings(max_examples=50, deadline=None)
@given(quivers(max_vertices=4, max_mult=2))
def test_gamma_stable_and_iso_needs_citation(q):
    p = predict_gamma(q, COMPACTS)
    assert p.summary == "iso for all n" and p.hypothesis_trail == ("Thm. thm:stable",)
    for t in (COMPLEX, INTEGERS, COMPACTS):
        p = predict_gamma(q, t)
        if any(p.verdict(n) == "iso" for n in range(-3, 4)):
            assert p.hypothesis_trail


# --- generators and replay -------------------------------------------------

def test_exhaustive_count_and_uniqueness():
    qs = list(exhaustive_quivers(3, 2))
    # 1 (empty) + 3 + 27 (two vertices up to swap) + 3429 (three vertices up to S3)
    assert len(qs) == 3460
    assert len({(q.vertices, tuple(sorted(q.edges))) for q in qs}) == len(qs)


def test_exhaustive_small_bounds_brute():
    import itertools
    # two vertices, multiplicity <= 1: 16 labelled quivers, 10 up to swap
    qs = [q for q in exhaustive_quivers(2, 1) if len(q.vertices) == 2]
    labelled = set()
    for grid in itertools.product((0, 1), repeat=4):
        a = tuple(grid)
        b = (a[3], a[2], a[1], a[0])
        labelled.add(min(a, b))
    assert len(qs) == len(labelled) == 10


def test_random_quiver_is_seeded():
    a = [random_quiver(random.Random(3)).to_text() for _ in range(2)]
    assert a[0] == a[1]


def test_run_checks_pass_on_random(rng):
    for _ in range(40):
        assert all(run_checks(random_quiver(rng), INTEGERS))


def test_witness_is_json_and_replays(monkeypatch):
    monkeypatch.setattr(verify, "edge_matrix", lambda q: IntMatrix.zeros(len(q.edges), len(q.edges)))
    out = check_myn(loops(3))
    text = json.dumps(out.witness, sort_keys=True)
    again = replay(json.loads(text))
    assert not again and json.dumps(again.witness, sort_keys=True) == text


def test_replay_reduction_needs_table():
    w = {"check": "check_reduction_invariance", "quiver": TAIL.to_text(), "degrees": [0, 1]}
    with pytest.raises(ValueError):
        replay(w)
    assert replay(w, INTEGERS)


def test_replay_unknown():
    with pytest.raises(ValueError):
        replay({"check": "nope", "quiver": None})


def test_table_degrees_start():
    t = parse_ktable("mode: K\n0: Z\n1: 0\n2: Z/2\n")
    assert list(verify.table_degrees(t)) == [1, 2]
    assert list(verify.table_degrees(INTEGERS)) == [0, 1, 2, 3]


def test_invariant_factors_agree_on_quiver_matrices(rng):
    from leavitt_k.linalg import one_minus_Nt
    for _ in range(50):
        a = one_minus_Nt(random_quiver(rng, 6))
        assert naive_smith_factors(a) == invariant_factors(a)
