"""Weierstrass division and preparation in the triangular quotient."""

from __future__ import annotations

from random import Random

import pytest

from skewseries import (
    CoeffSeries,
    NotDivisible,
    NotPreparable,
    SkewSeries,
    build_skew,
    change_precision,
    divide,
    divide_oracle,
    prepare,
)
from skewseries.precision import CHARP, INTEGRAL, PrecisionContext
from skewseries.weierstrass import _divide_core

from util import rand_reduced_order, rand_series, rand_unit


CONFIGS = (
    (2, 4, INTEGRAL, 3),
    (3, 4, INTEGRAL, 4),
    (3, 3, CHARP, 4),
    (5, 3, INTEGRAL, 6),
)


def skews():
    return [build_skew(PrecisionContext(p, K, mode), eps) for p, K, mode, eps in CONFIGS]


def test_divide_y2_by_y_minus_p():
    sd = build_skew(PrecisionContext(3, 4, INTEGRAL), 4)
    q, rem = divide(sd.y(2), sd.y() - 3)
    assert q == sd.y() + 3
    assert rem == sd.embed(9)


def test_division_identity_and_remainder_degree():
    rng = Random(501)
    for sd in skews():
        K = sd.ctx.K
        for _ in range(20):
            s = rng.randrange(1, K)
            f = rand_reduced_order(sd, rng, s)
            g = rand_series(sd, rng)
            q, rem = divide(g, f)
            assert g == q * f + rem
            assert all(rem.row(j).is_zero() for j in range(s, K))


def test_divide_by_unit():
    rng = Random(502)
    sd = build_skew(PrecisionContext(3, 4, INTEGRAL), 4)
    for _ in range(10):
        u = rand_unit(sd, rng)
        g = rand_series(sd, rng)
        q, rem = divide(g, u)
        assert rem.is_zero()
        assert q * u == g


def test_not_divisible_when_no_unit_row():
    sd = build_skew(PrecisionContext(3, 4, INTEGRAL), 4)
    f = sd.embed(3) + sd.embed(3) * sd.y()   # every row in m
    with pytest.raises(NotDivisible):
        divide(sd.y(2), f)
    with pytest.raises(NotPreparable):
        prepare(f)


def test_prepare_identity_properties():
    rng = Random(503)
    for sd in skews():
        K = sd.ctx.K
        for _ in range(20):
            s = rng.randrange(0, K)
            f = rand_reduced_order(sd, rng, s)
            eps, F = prepare(f)
            assert eps.is_unit()
            assert eps * F.as_series() == f
            assert F.degree == s
            for c in F.lower:
                o = c.m_order()
                assert not isinstance(o, int) or o >= 1


def test_prepare_unit_case():
    rng = Random(504)
    sd = build_skew(PrecisionContext(2, 4, INTEGRAL), 3)
    u = rand_unit(sd, rng)
    eps, F = prepare(u)
    assert F.degree == 0
    assert F.as_series() == sd.one()
    assert eps == u


def test_prepare_idempotent_on_distinguished():
    rng = Random(505)
    for sd in skews():
        K = sd.ctx.K
        for _ in range(10):
            s = rng.randrange(1, K)
            f = rand_reduced_order(sd, rng, s)
            _, F = prepare(f)
            eps2, F2 = prepare(F.as_series())
            assert eps2 == sd.one()
            assert F2.as_series() == F.as_series()


def test_prepare_known_example():
    # f = (1+Y)(Y-p) at p=3, eps=4, K=6.  The distinguished factor is
    # digit-exact: Y - 3 (lower coefficient 726 = -3 mod 3^6).  The unit
    # matches 1+Y up to the gauge of the preparation congruence: any two
    # units solving eps*F = f mod G_K differ by a multiple of F.
    sd = build_skew(PrecisionContext(3, 6, INTEGRAL), 4)
    f = (sd.one() + sd.y()) * (sd.y() - 3)
    eps, F = prepare(f)
    assert F.degree == 1
    assert F.lower[0] == CoeffSeries(sd.ctx, (726,))
    assert eps * F.as_series() == f
    gauge = eps - (sd.one() + sd.y())
    assert (gauge * F.as_series()).is_zero()
    # deterministic output: the algorithm always picks the same gauge
    eps2, F2 = prepare(f)
    assert eps2 == eps and F2.as_series() == F.as_series()


def test_prepare_native_elevation_recovers_exact_unit():
    # Constructing the same product natively at working precision
    # s*K + 1 = 7 and truncating the preparation back to K = 6 yields
    # the exact unit 1 + Y on every stored digit (gauge-free regime).
    sd = build_skew(PrecisionContext(3, 6, INTEGRAL), 4)
    sd7 = sd.at_precision(7)
    f7 = (sd7.one() + sd7.y()) * (sd7.y() - 3)
    eps7, F7 = prepare(f7)
    assert change_precision(eps7, sd) == sd.one() + sd.y()
    assert change_precision(F7.as_series(), sd) == sd.y() - 3


def test_oracle_agreement_random():
    rng = Random(506)
    for p, K in ((2, 3), (2, 4), (3, 3)):
        sd = build_skew(PrecisionContext(p, K, INTEGRAL), 1 + p)
        for _ in range(25):
            s = rng.randrange(1, K)
            f = rand_reduced_order(sd, rng, s)
            g = rand_series(sd, rng)
            assert divide(g, f) == divide_oracle(g, f)


def test_quotient_uniqueness_at_working_precision():
    # For q, f built natively at K' = s*K + 1, dividing the product back
    # by f recovers q and a zero remainder on every digit visible at K.
    rng = Random(507)
    for p, K in ((2, 3), (3, 3), (2, 4)):
        sd = build_skew(PrecisionContext(p, K, INTEGRAL), 1 + p)
        for _ in range(15):
            s = rng.randrange(1, min(3, K))
            sd2 = sd.at_precision(s * K + 1)
            qh = rand_series(sd2, rng)
            fh = rand_reduced_order(sd2, rng, s)
            Q, R = _divide_core(sd2, qh * fh, fh, s)
            assert change_precision(Q, sd) == change_precision(qh, sd)
            assert change_precision(R, sd).is_zero()


def test_base_precision_division_is_congruence_solving():
    # At base precision the dividend only determines the quotient up to
    # the gauge of the congruence; what IS pinned down exactly is the
    # division identity itself.  q*f at K generally does not divide back
    # to q digit-for-digit (its lift solves a different congruence).
    sd = build_skew(PrecisionContext(2, 4, INTEGRAL), 1)
    q = SkewSeries.from_rows(sd, [[10, 2, 3, 0], [1, 0, 1, 0], [1, 0, 0, 0], [1, 0, 0, 0]])
    f = sd.y() - 2
    q2, rem2 = divide(q * f, f)
    assert q * f == q2 * f + rem2     # the identity holds exactly
    assert q2 != q                    # but the gauge representative moved
