"""Cyclotomic elements, normality witnesses, ideal descent, rank growth.

The coefficient ring carries the tower of elements omega_n = (1+X)**p**n
- 1 and their ratios xi_n; both are computed by binomial/sum formulas
only, never by power-series division (dividing by a non-unit is
ill-conditioned at triangular precision).  On top of these sit three
experiment drivers: an explicit witness that omega_n generates the same
left and right ideal, a two-sided-ideal descent producing a scalar
element, and the coinvariant rank-growth law lambda_n = d*p**n + c.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

from .coeff import CoeffSeries
from .errors import (
    DegenerateAction,
    InvalidAction,
    PrecisionInsufficient,
    VanishedAtPrecision,
)
from .linalg import smith_valuations
from .precision import AtLeast, PadicInt, PrecisionContext, _is_prime
from .series import SkewSeries
from .skew import SkewData


# -- cyclotomic tower ----------------------------------------------------


def omega(ctx: PrecisionContext, n: int) -> CoeffSeries:
    """omega_n = (1+X)**(p**n) - 1; omega_-1 = 1, omega_0 = X."""
    if n < -1:
        raise ValueError("omega is defined for n >= -1")
    if n == -1:
        return CoeffSeries.one(ctx)
    g = CoeffSeries.from_ints(ctx, (1, 1))
    return g ** (ctx.p**n) - 1


def xi(ctx: PrecisionContext, n: int) -> CoeffSeries:
    """xi_0 = X; xi_n = sum_{i<p} (1+X)**(i * p**(n-1)) for n >= 1."""
    if n < 0:
        raise ValueError("xi is defined for n >= 0")
    if n == 0:
        return CoeffSeries.x(ctx)
    t = CoeffSeries.from_ints(ctx, (1, 1)) ** (ctx.p ** (n - 1))
    acc = CoeffSeries.one(ctx)
    term = CoeffSeries.one(ctx)
    for _ in range(ctx.p - 1):
        term = term * t
        acc = acc + term
    return acc


@dataclass(frozen=True)
class TowerEntry:
    n: int
    product_ok: bool
    xi_constant_ok: bool
    omega_constant_zero: bool
    vacuous: bool

    @property
    def ok(self) -> bool:
        return self.product_ok and self.xi_constant_ok and self.omega_constant_zero


@dataclass
class TowerReport:
    p: int
    K: int
    n_max: int
    entries: list[TowerEntry]
    warnings: list[str]

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "K": self.K,
            "n_max": self.n_max,
            "passed": self.passed,
            "entries": [
                {
                    "n": e.n,
                    "product_ok": e.product_ok,
                    "xi_constant_ok": e.xi_constant_ok,
                    "omega_constant_zero": e.omega_constant_zero,
                    "vacuous": e.vacuous,
                }
                for e in self.entries
            ],
            "warnings": list(self.warnings),
        }


def omega_tower_check(ctx: PrecisionContext, n_max: int) -> TowerReport:
    """Verify xi_n * omega_(n-1) = omega_n, xi_n(0) = p, omega_n(0) = 0."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    entries = []
    warnings: list[str] = []
    vacuous_from: int | None = None
    for n in range(1, n_max + 1):
        om, om_prev, x = omega(ctx, n), omega(ctx, n - 1), xi(ctx, n)
        vac = om.is_zero()
        entries.append(
            TowerEntry(
                n=n,
                product_ok=(x * om_prev == om),
                xi_constant_ok=(x.coeffs[0] == _canon_scalar(ctx, ctx.p)),
                omega_constant_zero=(om.coeffs[0] == 0),
                vacuous=vac,
            )
        )
        if vac and vacuous_from is None:
            vacuous_from = n
    if vacuous_from is not None:
        warnings.append(
            f"vacuous-tail: omega_n vanishes mod m**{ctx.K} from n = "
            f"{vacuous_from}; increase K for a nonvacuous check"
        )
    return TowerReport(ctx.p, ctx.K, n_max, entries, warnings)


def _canon_scalar(ctx: PrecisionContext, v: int) -> int:
    return v % ctx.slot_moduli(ctx.K)[0]


# -- normal elements -----------------------------------------------------


def normal_witness(sd: SkewData, n: int) -> tuple[CoeffSeries, SkewSeries]:
    """Unit u with sigma(omega_n) = omega_n * u, and w = u*Y + (u-1).

    The witness identity Y * omega_n = omega_n * w (mod G_K) exhibits
    Y*omega_n inside omega_n*A, the computational content of omega_n
    being a normal element.  u is the finite sum of C(e, i) *
    omega_n**(i-1) over i >= 1, with e the raw twist exponent: the tail
    terms lie in m**((i-1)(n+1)) and drop out beyond the precision.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    ctx = sd.ctx
    e = sd.epsilon_raw % ctx.p**ctx.K
    if e % ctx.p != 1 % ctx.p:
        raise InvalidAction("twist exponent must be 1 mod p")
    om = omega(ctx, n)
    u = CoeffSeries.zero(ctx)
    pw = CoeffSeries.one(ctx)
    i = 1
    while (i - 1) * (n + 1) < ctx.K:
        c = comb(e, i)
        if c:
            u = u + c * pw
        i += 1
        if (i - 1) * (n + 1) < ctx.K:
            pw = pw * om
    w = SkewSeries.from_rows(sd, [u - 1, u])
    return u, w


# -- two-sided ideal descent ---------------------------------------------


def descend_ideal(
    sd: SkewData,
    zcoeffs: Sequence[CoeffSeries],
    trace: list[int] | None = None,
) -> tuple[CoeffSeries, int]:
    """Descend a Z-polynomial to a scalar inside the same two-sided ideal.

    In the Z = Y + 1 coordinate scalars commute past Z by Z*r =
    sigma(r)*Z, so with gamma = 1 + X the combination sigma**s(gamma)*b
    - b*gamma kills the top coefficient of b = sum c_i Z**i and
    multiplies the rest by sigma**s(gamma) - sigma**i(gamma).  Iterating
    strictly drops the degree until a single term r*Z**i remains; since
    Z is a unit, r itself lies in every two-sided ideal containing b.
    When given, `trace` collects the visible Z-degree at each iteration.
    """
    ctx = sd.ctx
    gamma = CoeffSeries.from_ints(ctx, (1, 1))
    if sd.apply_sigma(gamma) == gamma:
        raise DegenerateAction(
            "sigma fixes 1+X at this precision; the descent step vanishes "
            "identically (twist exponent is 1 at precision)"
        )
    coeffs = list(zcoeffs)
    if all(c.is_zero() for c in coeffs):
        raise VanishedAtPrecision("input polynomial is zero at this precision")
    steps = 0
    while True:
        nz = [i for i, c in enumerate(coeffs) if not c.is_zero()]
        if not nz:
            raise VanishedAtPrecision(
                "descent killed every visible coefficient; "
                "K is too small to certify a nonzero scalar"
            )
        if trace is not None:
            trace.append(nz[-1])
        if len(nz) == 1:
            return coeffs[nz[0]], steps
        s = nz[-1]
        sig_gamma = [gamma]
        for _ in range(s):
            sig_gamma.append(sd.apply_sigma(sig_gamma[-1]))
        coeffs = [coeffs[i] * (sig_gamma[s] - sig_gamma[i]) for i in range(s)]
        steps += 1


# -- coinvariant rank growth ---------------------------------------------


def _check_poly(p: int, poly: Sequence[int]) -> tuple[int, ...]:
    F = tuple(int(c) for c in poly)
    if len(F) < 2 or F[-1] != 1:
        raise ValueError("torsion polynomial must be monic of degree >= 1")
    if any(c % p for c in F[:-1]):
        raise ValueError("lower coefficients must be divisible by p")
    return F


@dataclass(frozen=True)
class ModuleSpec:
    """Synthetic module: free rank d plus torsion sides of the normal form."""

    p: int
    d: int
    torsion_polys: tuple[tuple[int, ...], ...] = ()
    p_power_ranks: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.d < 0:
            raise ValueError("free rank must be >= 0")
        object.__setattr__(
            self,
            "torsion_polys",
            tuple(_check_poly(self.p, F) for F in self.torsion_polys),
        )
        object.__setattr__(
            self, "p_power_ranks", tuple(int(n) for n in self.p_power_ranks)
        )
        if any(n < 1 for n in self.p_power_ranks):
            raise ValueError("p-power exponents must be >= 1")


@dataclass(frozen=True)
class SNFResult:
    elementary_divisor_valuations: tuple[int | AtLeast, ...]
    rank_at_precision: int
    precision_flag: bool


def snf_rank(matrix: Sequence[Sequence[PadicInt]], guard: int = 2) -> SNFResult:
    """Elementary divisor valuations of a p-adic matrix at its precision.

    Valuations that reach the precision M are reported AtLeast(M) and
    counted as kernel directions; finite valuations inside the guard
    band (> M - guard) set precision_flag.
    """
    if guard < 1:
        raise ValueError("guard must be >= 1")
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        return SNFResult((), 0, False)
    p = rows[0][0].p
    M = rows[0][0].prec
    for r in rows:
        for x in r:
            if x.p != p or x.prec != M:
                raise ValueError("matrix entries must share prime and precision")
    vals = smith_valuations([[x.residue for x in r] for r in rows], p, M)
    divisors = tuple(AtLeast(M) if v >= M else v for v in vals)
    rank = sum(1 for v in vals if v >= M)
    flag = any(v < M and v > M - guard for v in vals)
    return SNFResult(divisors, rank, flag)


def _poly_xmul(v: list[int], F: tuple[int, ...], mod: int) -> list[int]:
    D = len(F) - 1
    out = [0] + v[: D - 1] if D > 1 else [0]
    top = v[D - 1]
    if top:
        out = [(x - top * c) % mod for x, c in zip(out, F[:D])]
    return [x % mod for x in out]


def _poly_mul_mod(
    a: list[int], b: list[int], F: tuple[int, ...], mod: int
) -> list[int]:
    D = len(F) - 1
    out = [0] * D
    xa = list(a)
    for c in b:
        if c:
            for i in range(D):
                out[i] = (out[i] + c * xa[i]) % mod
        xa = _poly_xmul(xa, F, mod)
    return out


def _omega_mod(p: int, F: tuple[int, ...], n: int, M: int) -> list[int]:
    """omega_n reduced in (Z/p**M)[X]/F."""
    D = len(F) - 1
    mod = p**M
    base = [1, 1][:D] + [0] * max(0, D - 2)
    if D == 1:
        base = [(1 - F[0]) % mod]  # X = -a0 in the quotient
    res = [1] + [0] * (D - 1)
    e = p**n
    while e:
        if e & 1:
            res = _poly_mul_mod(res, base, F, mod)
        e >>= 1
        if e:
            base = _poly_mul_mod(base, base, F, mod)
    res[0] = (res[0] - 1) % mod
    return res


def _coinvariant(
    p: int, F: tuple[int, ...], n: int, M: int, guard: int
) -> tuple[int, bool]:
    D = len(F) - 1
    om = _omega_mod(p, F, n, M)
    mod = p**M
    cols = []
    v = om
    for _ in range(D):
        cols.append(v)
        v = _poly_xmul(v, F, mod)
    matrix = [[cols[a][i] for a in range(D)] for i in range(D)]
    vals = smith_valuations(matrix, p, M)
    rank = sum(1 for x in vals if x >= M)
    flag = any(x < M and x > M - guard for x in vals)
    return rank, flag


def coinvariant_rank(
    p: int, poly: Sequence[int], n: int, M: int, guard: int = 2, strict: bool = True
) -> int:
    """Z_p-rank of (Z_p[[X]]/F) / omega_n * (Z_p[[X]]/F) at precision M.

    The corank of the multiplication-by-omega_n matrix on the basis
    1, X, ..., X**(deg F - 1).  With `strict` a guard-band pivot raises
    PrecisionInsufficient instead of silently flagging.
    """
    F = _check_poly(p, poly)
    rank, flag = _coinvariant(p, F, n, M, guard)
    if strict and flag:
        raise PrecisionInsufficient(
            f"a pivot valuation falls within {guard} digits of the working "
            f"precision {M}; raise M to separate kernel from artifact"
        )
    return rank


@dataclass
class GrowthResult:
    d: int
    c: int
    stable_from: int
    stabilized: bool
    table: tuple[tuple[int, int, bool], ...]  # (n, lambda_n, precision_flag)

    def to_dict(self) -> dict:
        out = {
            "d": self.d,
            "c": self.c,
            "stable_from": self.stable_from,
            "stabilized": self.stabilized,
        }
        if not self.stabilized:
            out["note"] = "NotStabilized: no constant tail of length >= 2 by n_max"
        return out


def rank_growth(
    spec: ModuleSpec, n_max: int, M: int, guard: int = 2, strict: bool = True
) -> GrowthResult:
    """lambda_n = d*p**n + sum_i rank of the F_i-coinvariants, n <= n_max.

    The p-power torsion summands contribute nothing to the free rank.
    Reports the least n0 from which c_n = lambda_n - d*p**n is constant;
    `stabilized` demands that constancy is witnessed by at least two
    points (NotStabilized is reported in the result, never raised).
    With `strict` a guard-band pivot raises PrecisionInsufficient as in
    coinvariant_rank; otherwise it is recorded per row.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    p = spec.p
    table = []
    cs = []
    for n in range(n_max + 1):
        lam = spec.d * p**n
        flag = False
        for F in spec.torsion_polys:
            if strict:
                lam += coinvariant_rank(p, F, n, M, guard)
            else:
                r, fl = _coinvariant(p, F, n, M, guard)
                lam += r
                flag = flag or fl
        table.append((n, lam, flag))
        cs.append(lam - spec.d * p**n)
    stable_from = n_max
    for n0 in range(n_max + 1):
        if all(c == cs[n_max] for c in cs[n0:]):
            stable_from = n0
            break
    return GrowthResult(
        d=spec.d,
        c=cs[n_max],
        stable_from=stable_from,
        stabilized=stable_from < n_max,
        table=tuple(table),
    )
