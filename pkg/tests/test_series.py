"""Skew series arithmetic in the canonical triangular representation."""

from __future__ import annotations

from random import Random

import pytest

from skewseries import (
    AtLeast,
    CoeffSeries,
    ContextMismatch,
    NotAUnit,
    SkewSeries,
    build_skew,
    change_precision,
)
from skewseries.precision import CHARP, INTEGRAL, PrecisionContext

from util import rand_coeff, rand_series, rand_unit


CONFIGS = (
    (2, 5, INTEGRAL, 3),
    (3, 4, INTEGRAL, 4),
    (3, 4, CHARP, 7),
    (5, 3, INTEGRAL, 6),
)


def skews():
    return [build_skew(PrecisionContext(p, K, mode), eps) for p, K, mode, eps in CONFIGS]


def test_y_times_scalar_rule():
    rng = Random(401)
    for sd in skews():
        y = sd.y()
        for _ in range(50):
            r = rand_coeff(sd.ctx, rng)
            expect = SkewSeries.from_rows(sd, [sd.apply_delta(r), sd.apply_sigma(r)])
            assert y * sd.embed(r) == expect


def test_scalar_times_y_is_plain():
    sd = build_skew(PrecisionContext(3, 4, INTEGRAL), 4)
    r = CoeffSeries(sd.ctx, (5, 2, 0, 1))
    assert sd.embed(r) * sd.y() == SkewSeries.from_rows(sd, [0, r])


def test_ring_laws():
    rng = Random(402)
    for sd in skews():
        for _ in range(25):
            f, g, h = (rand_series(sd, rng) for _ in range(3))
            assert (f * g) * h == f * (g * h)
            assert f * (g + h) == f * g + f * h
            assert (f + g) * h == f * h + g * h
            assert f + g - g == f
            assert f * sd.one() == f == sd.one() * f


def test_int_and_coeff_coercion():
    sd = build_skew(PrecisionContext(3, 4, INTEGRAL), 4)
    y = sd.y()
    assert y - 3 == SkewSeries.from_rows(sd, [-3, 1])
    assert 1 + y == SkewSeries.from_rows(sd, [1, 1])
    x = CoeffSeries.x(sd.ctx)
    assert y + x == SkewSeries.from_rows(sd, [x, 1])
    assert (y - 3) * (y + 3) == y * y - 9


def test_context_mismatch_rejected():
    sd1 = build_skew(PrecisionContext(3, 4, INTEGRAL), 4)
    sd2 = build_skew(PrecisionContext(3, 4, INTEGRAL), 1)
    with pytest.raises(ContextMismatch):
        sd1.y() + sd2.y()
    sd3 = build_skew(PrecisionContext(2, 4, INTEGRAL), 3)
    with pytest.raises(ContextMismatch):
        sd1.y() * sd3.y()


def test_filtration_order_multiplicative():
    rng = Random(403)
    for sd in skews():
        K = sd.ctx.K
        for _ in range(50):
            f = rand_series(sd, rng)
            g = rand_series(sd, rng)
            of, og, ofg = f.g_order(), g.g_order(), (f * g).g_order()
            bf = of.bound if isinstance(of, AtLeast) else of
            bg = og.bound if isinstance(og, AtLeast) else og
            bfg = ofg.bound if isinstance(ofg, AtLeast) else ofg
            assert bfg >= min(bf + bg, K)


def test_g_order_examples():
    sd = build_skew(PrecisionContext(3, 4, INTEGRAL), 4)
    assert sd.y(2).g_order() == 2
    assert sd.embed(9).g_order() == 2          # p^2 has m-order 2 in row 0
    assert (sd.embed(3) * sd.y()).g_order() == 2  # p Y: row 1, order 1
    o = sd.zero().g_order()
    assert isinstance(o, AtLeast) and o.bound == 4


def test_geometric_series_inverse():
    sd = build_skew(PrecisionContext(2, 4, INTEGRAL), 3)
    inv = (sd.one() - sd.y()).inverse()
    assert inv == SkewSeries.from_rows(sd, [1, 1, 1, 1])


def test_two_sided_inverse():
    rng = Random(404)
    for sd in skews():
        for _ in range(30):
            u = rand_unit(sd, rng)
            inv = u.inverse()
            assert u * inv == sd.one()
            assert inv * u == sd.one()
            assert inv.inverse() == u


def test_not_a_unit_iff_row0_constant_divisible():
    rng = Random(405)
    for sd in skews():
        p = sd.ctx.p
        for _ in range(50):
            f = rand_series(sd, rng)
            if f.row(0).coeffs[0] % p == 0:
                assert not f.is_unit()
                with pytest.raises(NotAUnit):
                    f.inverse()
            else:
                assert f.is_unit()
                f.inverse()


def test_z_form_round_trip():
    rng = Random(406)
    for sd in skews():
        K = sd.ctx.K
        for _ in range(25):
            f = rand_series(sd, rng)
            zc = f.to_z_form(K - 1)
            assert SkewSeries.from_z_form(sd, zc) == f


def test_right_coefficients_round_trip():
    rng = Random(407)
    for sd in skews():
        for _ in range(25):
            f = rand_series(sd, rng)
            rc = f.right_coefficients()
            assert SkewSeries.from_right_coefficients(sd, rc) == f


def test_change_precision_round_trip():
    rng = Random(408)
    sd = build_skew(PrecisionContext(3, 4, INTEGRAL), 4)
    up = sd.at_precision(7)
    for _ in range(25):
        f = rand_series(sd, rng)
        lifted = change_precision(f, up)
        assert change_precision(lifted, sd) == f
        for j in range(4):
            # the lift keeps every stored digit and adds nothing beyond
            assert lifted.row(j).coeffs[: 4 - j] == f.row(j).coeffs[: 4 - j]
            assert not any(lifted.row(j).coeffs[4 - j:])


def test_reduce_to_residue_series():
    sd = build_skew(PrecisionContext(3, 3, INTEGRAL), 4)
    f = SkewSeries.from_rows(sd, [CoeffSeries(sd.ctx, (4, 3, 2)), 5, 1])
    r = f.reduce()
    r2 = (f + sd.embed(3)).reduce()   # adding p does not change the reduction
    assert r == r2


def test_y_degree_and_rows():
    sd = build_skew(PrecisionContext(3, 4, INTEGRAL), 4)
    f = sd.y(2) + sd.embed(7)
    assert f.y_degree() == 2
    assert f.row(0) == CoeffSeries(sd.ctx, (7,))
    assert f.row(2) == CoeffSeries.one(sd.ctx)
    assert sd.zero().y_degree() == -1
