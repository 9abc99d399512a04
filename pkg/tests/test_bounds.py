import itertools
import math
from decimal import Decimal
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from nccumulants.bounds import (
    IndexDistribution,
    b_growth,
    b_series,
    b_series_by_zeta,
    btilde_ratio,
    definetti_fixtures,
    definetti_tv,
    elementary_bound,
    exceeds_khinchin_radius,
    falling,
    growth_constants,
    khinchin_constant,
    negativity_bound,
    negativity_check,
    psiN_distributions,
    quartic_divides_resultant,
    quartic_factor,
    sequence_by_enumeration,
    sequence_by_series,
    sequence_report,
    total_variation,
)
from nccumulants.errors import DomainError, SizeLimitError
from nccumulants.incidence import MultiplicativeFunction, abs_mobius, convolve_nc, zeta, zeta_without_singletons
from nccumulants.partitions import Partition, quotient
from nccumulants.series import Polynomial

P = Partition.parse


def schroeder_by_recurrence(n):
    """Large Schröder numbers by r_0 = 1, r_k = r_(k-1) + sum r_i r_(k-1-i); a_k = r_(k-1)."""
    r = [1]
    for k in range(1, n):
        r.append(r[k - 1] + sum(r[i] * r[k - 1 - i] for i in range(k)))
    return r[:n]


def lattice_sequence(kind, n, N=1):
    """The four sequences as lattice convolutions, bypassing both module routes."""
    a = list(convolve_nc(zeta(n), abs_mobius(n), n).characteristic)
    at = list(convolve_nc(zeta_without_singletons(n), abs_mobius(n), n).characteristic)
    if kind == "a":
        return a
    if kind == "atilde":
        return at
    if kind == "b":
        f = MultiplicativeFunction(tuple([0] + [N * v for v in a[1:]]))
    else:
        f = MultiplicativeFunction(tuple(N * v for v in at))
    return list(convolve_nc(f, zeta(n), n).characteristic)


# sequences ---------------------------------------------------------------------


def test_sequence_examples():
    assert sequence_by_enumeration("a", 5) == [1, 2, 6, 22, 90]
    assert sequence_by_enumeration("atilde", 4) == [0, 1, 1, 3]
    assert sequence_by_enumeration("btilde", 4, 1) == [0, 1, 1, 5]
    assert sequence_by_series("b", 4, 1)[1:] == [2, 6, 30]


def test_schroeder_against_recurrence():
    assert sequence_by_series("a", 30) == schroeder_by_recurrence(30)
    assert sequence_by_enumeration("a", 10) == schroeder_by_recurrence(10)


@pytest.mark.parametrize("kind,N", [("a", 1), ("atilde", 1), ("b", 1), ("b", 2), ("b", 3), ("b", 5), ("btilde", 1), ("btilde", 2), ("btilde", 3)])
def test_series_against_lattice_convolution(kind, N):
    assert sequence_by_series(kind, 9, N) == lattice_sequence(kind, 9, N)


@pytest.mark.parametrize("kind,N,n", [("atilde", 1, 10), ("b", 2, 8), ("btilde", 3, 8)])
def test_enumeration_against_series(kind, N, n):
    report = sequence_report(kind, n, N)
    assert report.agree
    assert all(row["match"] == "true" for row in report.rows())


def test_b4_polynomial_in_N():
    for N in (1, 2, 3, 5):
        assert sequence_by_series("b", 4, N)[3] == 22 * N + 8 * N * N
        assert sequence_by_enumeration("b", 4, N)[3] == 22 * N + 8 * N * N


@pytest.mark.parametrize("N", [1, 2, 3, 5])
def test_b_closed_form_against_zeta_route(N):
    assert b_series(N, 10) == b_series_by_zeta(N, 10)


def test_atilde_against_sympy_implicit_series():
    # fixed-point iteration of y = z^2 / ((1 - y)(1 - y - z)) in sympy
    z = sympy.Symbol("z")
    y = sympy.Integer(0)
    for _ in range(10):
        y = sympy.expand(sympy.series(z**2 / ((1 - y) * (1 - y - z)), z, 0, 11).removeO())
    expected = [Fraction(str(y.coeff(z, k))) for k in range(1, 11)]
    assert sequence_by_series("atilde", 10) == expected
    assert expected[:10] == [0, 1, 1, 3, 6, 17, 43, 123, 343, 1004]


def test_sequence_errors():
    with pytest.raises(SizeLimitError):
        sequence_by_enumeration("a", 11)
    with pytest.raises(SizeLimitError):
        sequence_by_series("a", 65)
    with pytest.raises(DomainError):
        sequence_by_series("c", 3)
    with pytest.raises(DomainError):
        sequence_by_series("b", 3, 0)


def test_sequence_report_rows():
    rows = sequence_report("a", 12, enumerate_up_to=4).rows()
    assert rows[0] == {"kind": "a", "n": 1, "N": 1, "enumeration": "1", "series": "1", "match": "true"}
    assert rows[11]["enumeration"] == "" and rows[11]["match"] == ""


# quartic factor and constants --------------------------------------------------------


def test_quartic_examples():
    assert quartic_factor(1) == Polynomial((-5, 6, 57, 22, 3))
    assert quartic_factor(2) == Polynomial((-5, 4, 80, 68, 28))
    for N in range(1, 50):
        assert quartic_factor(N).lead > 0


@pytest.mark.parametrize("N", range(1, 11))
def test_quartic_divides_resultant(N):
    divides, cofactor = quartic_divides_resultant(N)
    assert divides and cofactor.degree >= 0


def test_growth_constants_at_one():
    g = growth_constants(1)
    assert abs(g.z0 - 0.238999) < 1e-6
    assert abs(g.z0 - 0.23899925647896) < 1e-12 and g.z0_hi - g.z0_lo <= Fraction(1, 10**12)
    assert abs(g.pisier - 9.85859) < 1e-4
    assert g.b_growth_exact == 7 and g.khinchin is None
    assert g.to_json()["b_growth_exact"] == "7"


def test_z0_against_sympy():
    for N in (1, 2, 3, 7):
        z = sympy.Symbol("z")
        q = quartic_factor(N)
        expr = sum(int(c) * z**k for k, c in enumerate(q.coeffs))
        smallest = min(r for r in sympy.Poly(expr, z).real_roots() if r > 0)
        g = growth_constants(N)
        assert g.z0_lo <= Fraction(str(sympy.N(smallest, 30))) + Fraction(1, 10**25)
        assert Fraction(str(sympy.N(smallest, 30))) - Fraction(1, 10**25) <= g.z0_hi
    assert abs(growth_constants(2).z0 - 0.2089) < 1e-4


def test_z0_radical_form():
    # Ferrari-type closed form of the smallest positive zero at N = 1
    gamma = 9 * (207 - 48 * math.sqrt(3)) ** (1 / 3) + 9 * (207 + 48 * math.sqrt(3)) ** (1 / 3)
    s = math.sqrt(7 + gamma)
    radical = (-11 + s + math.sqrt(14 - gamma + 992 / s)) / 6
    g = growth_constants(1)
    assert float(g.z0_lo) - 1e-12 <= radical <= float(g.z0_hi) + 1e-12


def test_b_growth_matches_radicand_root():
    for N in range(1, 30):
        value, exact = b_growth(N)
        root = (-6 + math.sqrt(36 + 4 * (8 * N - 1))) / (2 * (8 * N - 1))  # positive root of (8N-1) z^2 + 6z - 1
        assert value == pytest.approx(1 / root, rel=1e-12)
        # equivalent rationalized form
        assert value == pytest.approx((8 * N - 1) / (2 * math.sqrt(2 * (N + 1)) - 3), rel=1e-12)
        assert (exact is not None) == (math.isqrt(8 * (N + 1)) ** 2 == 8 * (N + 1))


def test_khinchin_constant():
    with pytest.raises(DomainError):
        khinchin_constant(1)
    assert khinchin_constant(4) == Decimal(8)
    assert float(khinchin_constant(2)) == pytest.approx(2 * math.sqrt(2) / (1 - 1 / math.sqrt(2)))


def test_negativity_examples():
    assert negativity_bound(4) == Fraction(1, 8)
    assert abs(float(negativity_bound(2)) - 0.1036) < 1e-4
    for N in (2, 3, 100):
        report = negativity_check(N, grid=50)
        assert report.passed, report.failures
        assert set(report.rows[0]) == {"N", "z0_lo", "z0_hi", "khinchin", "certified"}
    with pytest.raises(DomainError):
        negativity_check(1)


@given(st.integers(2, 10**6))
def test_negativity_bound_is_a_tight_upper_bound(N):
    u = negativity_bound(N)
    exact = (math.sqrt(N) - 1) / (2 * N)
    assert float(u) == pytest.approx(exact, abs=1e-12)
    assert exceeds_khinchin_radius(u, N)


def test_exceeds_khinchin_radius_exact():
    assert exceeds_khinchin_radius(Fraction(1, 8), 4)
    assert not exceeds_khinchin_radius(Fraction(1, 8) - Fraction(1, 10**20), 4)
    assert not exceeds_khinchin_radius(Fraction(0), 4)


@pytest.mark.parametrize("N", [1, 2, 4])
def test_btilde_ratio_approaches_inverse_z0(N):
    ratio = btilde_ratio(N, 24)
    target = 1 / growth_constants(N).z0
    assert abs(ratio - target) / target < 0.1


# elementary product bound ---------------------------------------------------------------


def test_elementary_bound_examples():
    assert elementary_bound(1, 1, 2) == (Fraction(1, 2), Fraction(1, 2), True)
    assert elementary_bound(2, 2, 5) == (Fraction(7, 10), Fraction(1), True)
    for N in range(1, 8):
        for p in range(1, N + 1):
            lhs, rhs, holds = elementary_bound(N, p, N)
            assert lhs == 1 and rhs >= 1 and holds
    with pytest.raises(DomainError):
        elementary_bound(0, 1, 2)
    with pytest.raises(DomainError):
        elementary_bound(1, 3, 2)


@given(st.integers(1, 40).flatmap(lambda N: st.tuples(st.integers(1, N), st.integers(1, N), st.just(N))))
def test_elementary_bound_holds(args):
    assert elementary_bound(*args).holds


# index distributions and total variation -----------------------------------------------


def direct_weights(p, N, rho_t):
    """Both distributions by per-map rules, without kernels."""
    d1, d2 = {}, {}
    for h in itertools.product(range(1, N + 1), repeat=p):
        if len(set(h)) == p:
            d1[h] = Fraction(1, falling(N, p))
        w = Fraction(1)
        for block in rho_t.blocks:
            labels = [h[i - 1] for i in block]
            if len(set(labels)) < len(labels):
                w = Fraction(0)
                break
            w /= falling(N, len(block))
        if w:
            d2[h] = w
    return d1, d2


def test_psiN_examples():
    d1, d2 = psiN_distributions(P("1|2"), P("1,2"), 3)
    assert dict(d1.items()) == dict(d2.items())
    assert len(dict(d1.items())) == 6 and set(dict(d1.items()).values()) == {Fraction(1, 6)}
    d1, d2 = psiN_distributions(P("1|2"), P("1|2"), 5)
    assert len(dict(d2.items())) == 25 and set(dict(d2.items()).values()) == {Fraction(1, 25)}
    assert len(dict(d1.items())) == 20


def test_psiN_preconditions():
    with pytest.raises(DomainError):
        psiN_distributions(P("1,2"), P("1|2"), 3)
    with pytest.raises(DomainError):
        psiN_distributions(P("1|2|3|4"), P("1,3|2,4"), 5)
    with pytest.raises(DomainError):
        psiN_distributions(P("1|2|3"), P("1,2,3"), 2)


def test_tv_examples():
    assert definetti_tv(P("1|2"), P("1|2"), 4) == (Fraction(1, 2), Fraction(4), True)
    assert definetti_tv(P("1|2"), P("1,2"), 4).tv == 0
    for N in range(2, 12):
        assert definetti_tv(P("1|2"), P("1|2"), N).tv == Fraction(2, N)


def test_weight_sums_are_exactly_one():
    for pi, rho in definetti_fixtures(4):
        for N in (pi.size, pi.size + 3):
            d1, d2 = psiN_distributions(pi, rho, N)
            assert d1.total() == 1 and d2.total() == 1


@pytest.mark.parametrize("max_N", [5])
def test_tv_against_materialized_weights(max_N):
    for pi, rho in definetti_fixtures(4):
        rho_t = quotient(rho, pi)
        p = pi.size
        for N in range(p, max_N + 1):
            d1, d2 = psiN_distributions(pi, rho, N)
            e1, e2 = direct_weights(p, N, rho_t)
            assert dict(d1.items()) == e1 and dict(d2.items()) == e2
            support = set(e1) | set(e2)
            brute = sum((abs(e1.get(h, 0) - e2.get(h, 0)) for h in support), Fraction(0))
            assert total_variation(d1, d2) == brute


def test_tv_closed_form():
    # d2 dominates d1 on injective maps, so tv = 2 (1 - (N)_p / prod (N)_(p_k))
    for pi, rho in definetti_fixtures(5):
        rho_t = quotient(rho, pi)
        p = pi.size
        for N in (p, p + 1, 10, 30):
            if N < p:
                continue
            expected = 2 * (1 - Fraction(falling(N, p), math.prod(falling(N, len(b)) for b in rho_t.blocks)))
            assert definetti_tv(pi, rho, N).tv == expected


def test_tv_decreases_or_vanishes():
    for pi, rho in definetti_fixtures(5):
        small = definetti_tv(pi, rho, 10).tv
        large = definetti_tv(pi, rho, 100).tv
        if quotient(rho, pi).size == 1:
            assert small == large == 0
        else:
            assert 0 < large < small


def test_index_distribution_weight_validation():
    d = IndexDistribution(3, Partition.top(2))
    assert d.weight((1, 2)) == Fraction(1, 6)
    assert d.weight((2, 2)) == 0
    with pytest.raises(DomainError):
        d.weight((1, 4))
    with pytest.raises(SizeLimitError):
        list(IndexDistribution(100, Partition.top(4)).items(limit=1000))
