"""Shared random generators for the test suite."""

from __future__ import annotations

from random import Random

from skewseries import CoeffSeries, SkewData, SkewSeries
from skewseries.precision import PrecisionContext


def rand_coeff(ctx: PrecisionContext, rng: Random, in_m: bool = False) -> CoeffSeries:
    vals = [rng.randrange(ctx.p ** (ctx.K - a)) for a in range(ctx.K)]
    if in_m:
        vals[0] -= vals[0] % ctx.p
    return CoeffSeries(ctx, vals)


def rand_series(sd: SkewData, rng: Random) -> SkewSeries:
    K = sd.ctx.K
    rows = [[rng.randrange(m) for m in sd.ctx.slot_moduli(K - j)] for j in range(K)]
    return SkewSeries.from_rows(sd, rows)


def rand_unit(sd: SkewData, rng: Random) -> SkewSeries:
    f = rand_series(sd, rng)
    rows = [f.row(j) for j in range(sd.ctx.K)]
    r0 = list(rows[0].coeffs)
    if r0[0] % sd.ctx.p == 0:
        r0[0] += 1 + rng.randrange(sd.ctx.p - 1)
    rows[0] = CoeffSeries(sd.ctx, r0)
    return SkewSeries.from_rows(sd, rows)


def rand_reduced_order(sd: SkewData, rng: Random, s: int) -> SkewSeries:
    """Random series whose reduced order is exactly s: rows below s lie in
    the maximal ideal, row s is a unit of the coefficient ring."""
    K = sd.ctx.K
    assert 0 <= s < K
    rows = []
    for j in range(K):
        vals = [rng.randrange(m) for m in sd.ctx.slot_moduli(K - j)]
        if j < s:
            vals[0] -= vals[0] % sd.ctx.p
        if j == s and vals[0] % sd.ctx.p == 0:
            vals[0] += 1 + rng.randrange(sd.ctx.p - 1)
        rows.append(vals)
    return SkewSeries.from_rows(sd, rows)
