import itertools

import pytest

from strata.errors import HypothesisViolation, InvalidSegment
from strata.exact_poly import divides, mono_mul
from strata.groebner import MonomialIdeal
from strata.segments import (
    LexSegmentSpec,
    RevLexSegmentSpec,
    lex_dimension_formula,
    lex_family,
    lex_segment_ideal,
    revlex_dimension_formula,
    revlex_params,
    revlex_segment_ideal,
    torno_prediction,
)
from strata.stratum import analyze
from strata.term_orders import GENERAL, HOMOGENEOUS, TailSpec, TermOrder, compositions


def ideal_of(n, *monos):
    return MonomialIdeal([tuple(m) for m in monos], n + 1)


def e(n, i, k=1):
    v = [0] * (n + 1)
    v[i] = k
    return tuple(v)


@pytest.mark.parametrize("n, a1", [(2, 1), (3, 2), (4, 3)])
def test_lex_segment_points(n, a1):
    spec = LexSegmentSpec(n, (0,) * (n - 1) + (a1,))
    want = ideal_of(n, *[e(n, i) for i in range(n - 1)], e(n, n - 1, a1))
    assert lex_segment_ideal(spec) == want


@pytest.mark.parametrize("n, q, aq", [(3, 2, 2), (4, 3, 1), (4, 4, 3)])
def test_lex_segment_hypersurface(n, q, aq):
    spec = LexSegmentSpec(n, (aq,) + (0,) * (q - 1))
    assert lex_segment_ideal(spec) == ideal_of(n, e(n, n - q, aq))


def test_lex_segment_11():
    assert lex_segment_ideal(LexSegmentSpec(3, (1, 1))) == ideal_of(3, (0, 2, 0, 0), (0, 1, 1, 0))


def test_lex_segment_invalid():
    with pytest.raises(InvalidSegment):
        LexSegmentSpec(2, (0, 0))
    with pytest.raises(InvalidSegment):
        LexSegmentSpec(2, (1, 1, 1))
    with pytest.raises(InvalidSegment):
        LexSegmentSpec(2, (1, -1))


def _product(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    return MonomialIdeal([mono_mul(x, y) for x in a.gens for y in b.gens], a.nvars)


@pytest.mark.parametrize("spec", lex_family(4, 4, 3, 6), ids=lambda s: f"n{s.n}-{'.'.join(map(str, s.a))}")
def test_lex_segment_structure(spec):
    J = lex_segment_ideal(spec)
    n, q = spec.n, spec.q
    assert len(J.gens) == q - spec.s
    assert all(not divides(g, h) for g in J.gens for h in J.gens if g != h)
    inner = spec.a[1:]
    if any(inner):
        rest = lex_segment_ideal(LexSegmentSpec(n, inner))
        sum_ideal = MonomialIdeal([e(n, n - q)] + list(rest.gens), n + 1)
        assert J == _product(ideal_of(n, e(n, n - q, spec.a[0])), sum_ideal)


@pytest.mark.parametrize("n, a1", [(n, a) for n in (2, 3, 4) for a in range(1, 5)])
def test_lex_formula_points(n, a1):
    assert lex_dimension_formula(LexSegmentSpec(n, (0,) * (n - 1) + (a1,))) == 2 * n - 2 + a1


@pytest.mark.parametrize("n, q, aq", [(n, q, a) for n in (2, 3, 4) for q in range(1, n + 1) for a in (1, 2, 3)])
def test_lex_formula_hypersurface(n, q, aq):
    from math import comb
    spec = LexSegmentSpec(n, (aq,) + (0,) * (q - 1))
    assert lex_dimension_formula(spec) == comb(aq + q, q) - 1


def test_lex_formula_11_overcounts():
    assert lex_dimension_formula(LexSegmentSpec(3, (1, 1))) == 5
    r = analyze(lex_segment_ideal(LexSegmentSpec(3, (1, 1))), TailSpec(HOMOGENEOUS),
                TermOrder.lex(["x0", "x1", "x2", "x3"]))
    assert (r.dim, r.smooth) == (4, True)


@pytest.mark.parametrize("mu, rt", [(1, (1, 2)), (2, (1, 1)), (3, (2, 3)), (4, (2, 2)), (5, (2, 1)), (6, (3, 4))])
def test_revlex_params(mu, rt):
    assert revlex_params(mu) == rt


@pytest.mark.parametrize("mu", range(1, 60))
def test_revlex_params_admissible(mu):
    r, t = revlex_params(mu)
    assert 1 <= t <= r + 1 and mu == (r + 2) * (r + 1) // 2 - t


def test_revlex_params_invalid():
    with pytest.raises(InvalidSegment):
        revlex_params(0)
    with pytest.raises(InvalidSegment):
        RevLexSegmentSpec(3, 1)


@pytest.mark.parametrize("mu, gens", [
    (1, [(1, 0, 0), (0, 1, 0)]),
    (4, [(2, 0, 0), (1, 1, 0), (0, 3, 0)]),
    (2, [(1, 0, 0), (0, 2, 0)]),
])
def test_revlex_segment_ideal(mu, gens):
    J = revlex_segment_ideal(RevLexSegmentSpec(mu, 2))
    assert J == MonomialIdeal(gens)


@pytest.mark.parametrize("mu", range(1, 15))
def test_revlex_segment_property(mu):
    # in each degree the ideal holds the revlex-largest monomials of k[x, y]
    r, _ = revlex_params(mu)
    if r > 4:
        pytest.skip("brute force only up to r = 4")
    J = revlex_segment_ideal(RevLexSegmentSpec(mu, 2))
    o = TermOrder.revlex(["x", "y", "z1"])
    top = max(sum(g) for g in J.gens)
    for d in range(top, top + 4):
        mons = sorted((m + (0,) for m in compositions(2, d)), key=o.key, reverse=True)
        flags = [J.contains(m) for m in mons]
        assert flags == sorted(flags, reverse=True)
    # colength mu in k[x, y]
    box = [(i, j, 0) for i in range(top + 1) for j in range(top + 2)]
    assert sum(1 for m in box if not J.contains(m)) == mu


@pytest.mark.parametrize("n, mu, want", [(2, 3, 6), (2, 5, 10), (3, 4, 16), (4, 4, 26)])
def test_revlex_formula(n, mu, want):
    assert revlex_dimension_formula(n, mu) == want


def test_torno_prediction_example():
    o = TermOrder.lex(["x0", "x1", "x2", "x3"])
    J0 = MonomialIdeal([(0, 0, 1, 0)])
    assert torno_prediction(1, (0, 1, 0, 0), (0, 1, 0, 0), J0, o, HOMOGENEOUS) == 4


def test_torno_prediction_principal():
    o = TermOrder.revlex(["x", "y", "z"])
    zero = MonomialIdeal([], 3)
    m = (2, 1, 0)
    for mode in (HOMOGENEOUS, GENERAL):
        got = torno_prediction(0, m, (0, 0, 0), zero, o, mode)
        r = analyze(MonomialIdeal([m]), TailSpec(mode), o)
        assert got == r.dim


def test_torno_prediction_refuses_ex57():
    o = TermOrder.lex(["x1", "y", "x2", "x3"])
    J0 = MonomialIdeal([(2, 0, 0, 0), (1, 0, 2, 0), (1, 0, 0, 2), (0, 0, 1, 1)])
    with pytest.raises(HypothesisViolation):
        torno_prediction(0, (0, 0, 0, 0), (0, 2, 0, 0), J0, o, HOMOGENEOUS)
    J = MonomialIdeal([(0, 2, 0, 0)] + list(J0.gens))
    r = analyze(J, TailSpec(HOMOGENEOUS), o)
    assert (r.ed, r.dim, r.smooth) == (12, 12, True)


def test_torno_prediction_refuses_overlap():
    o = TermOrder.revlex(["x", "y", "z"])
    with pytest.raises(HypothesisViolation):
        torno_prediction(0, (1, 0, 0), (0, 1, 0), MonomialIdeal([(1, 0, 1)]), o, HOMOGENEOUS)


@pytest.mark.parametrize("spec", [s for s in lex_family(4, 3, 2, 4) if s.q >= 2],
                         ids=lambda s: f"n{s.n}-{'.'.join(map(str, s.a))}")
def test_torno_prediction_matches_on_lex_segments(spec):
    # J(a_q..a_1) = m((n0) + J0) with m = x_{n-q}^{a_q}, n0 = x_{n-q}
    n, q = spec.n, spec.q
    names = spec.variables
    inner = spec.a[1:]
    if not any(inner):
        pytest.skip("inner ideal is zero")
    o = TermOrder.lex(names)
    J0 = lex_segment_ideal(LexSegmentSpec(n, inner))
    n0 = e(n, n - q)
    m = e(n, n - q, spec.a[0])
    # the stratum of J0 excluding n0 is that of J0 alone: x_{n-q} never enters its tails
    N0 = analyze(J0, TailSpec(HOMOGENEOUS), o).dim
    pred = torno_prediction(N0, m, n0, J0, o, HOMOGENEOUS)
    assert analyze(lex_segment_ideal(spec), TailSpec(HOMOGENEOUS), o).dim == pred
