"""Weierstrass division and preparation for skew power series.

For f of reduced order s (least index whose Y-coefficient is a unit of
R), every g splits as g = q*f + rem with deg_Y rem < s.  The quotient is
found by the contraction q ~ shift_down(g + q*h) where h = Y**s - G*f
has all coefficients in m; each iterate gains one level of m-depth, so K
iterations settle everything visible.

Precision is the delicate part.  Right-multiplication by f is not
injective on representatives: e.g. (p**2 + Y**2)*(Y**2 - p) vanishes mod
G_3, so the pair (q, rem) solving g = q*f + rem mod G_K is pinned down
only up to such annihilator elements, and two correct routes may
legitimately disagree in visible digits.  A row-by-row depth induction
shows that any two solutions computed at a working precision K' agree
after truncation to K once K' >= s*K + 1.  `divide` and `divide_oracle`
therefore both lift the stored digits to that precision, solve there,
and truncate: each returns the image of the exact division of the
canonical integer lifts, independent of algorithmic gauge, which is
what makes the two routes comparable digit for digit.

Note the lift of the stored digits is one particular representative of
the input's coset; inputs whose intended coefficients wrap around the
slot moduli (negative numbers, say) have lifts that differ from them by
elements of G_K, and the quotient responds visibly to that difference.
Callers who want the division of a specific exact element construct it
natively at ambient precision s*K + 1 and truncate the result to K --
by the same uniqueness bound this equals the exact answer's truncation.

`prepare` is the plain iteration at the ambient precision: the identity
eps*F = f holds by construction (ring identities in the exact quotient
A/G_K) and the remainder's high rows vanish by a telescoping of the
iteration, at any working precision.  Digit-canonical factors, when
wanted, come from the same construct-natively-elevated pattern.
"""
from __future__ import annotations

from dataclasses import dataclass

from .coeff import CoeffSeries, vcanon
from .errors import (
    InternalPrecisionLoss,
    NotDivisible,
    NotPreparable,
    SystemSingularAtPrecision,
)
from .linalg import solve_mod_prime_power
from .precision import AtLeast, INTEGRAL
from .series import SkewSeries, _y_step, change_precision
from .skew import SkewData


@dataclass(frozen=True)
class DistinguishedPoly:
    """Monic Y-polynomial Y**s + a_{s-1}Y**(s-1) + ... + a_0, all a_i in m."""

    sd: SkewData
    degree: int
    lower: tuple[CoeffSeries, ...]

    def __post_init__(self) -> None:
        if self.degree < 0 or len(self.lower) != self.degree:
            raise ValueError("need exactly `degree` lower coefficients")
        for a in self.lower:
            self.sd.ctx.check_same(a.ctx)
            o = a.m_order()
            if not isinstance(o, AtLeast) and o < 1:
                raise ValueError("lower coefficients must lie in the maximal ideal")

    def as_series(self) -> SkewSeries:
        rows: list[CoeffSeries | int] = list(self.lower)
        if self.degree < self.sd.ctx.K:
            rows.append(1)
        # a monic top at degree >= K lies in G_K and is invisible
        return SkewSeries.from_rows(self.sd, rows)

    def __repr__(self) -> str:
        return f"DistinguishedPoly(degree={self.degree}, lower={list(self.lower)!r})"


def _shift_down(sd: SkewData, f: SkewSeries, s: int) -> SkewSeries:
    """Drop rows < s and shift the rest down: division by Y**s on the right.

    Pure relabelling: stored digits are already canonical at the finer
    row precisions, so nothing is recomputed and nothing is lost.
    """
    if s == 0:
        return f
    return SkewSeries.from_rows(sd, [list(r) for r in f.rows[s:]])


def _divide_core(
    sd: SkewData, g: SkewSeries, f: SkewSeries, s: int
) -> tuple[SkewSeries, SkewSeries]:
    """Division at the current working precision; s >= 1 assumed."""
    K = sd.ctx.K
    g0 = _shift_down(sd, f, s)
    G = g0.inverse()
    h = sd.y(s) - G * f
    for j in range(K):
        if h.rows[j][0] % sd.ctx.p != 0:
            raise InternalPrecisionLoss(
                "correction series escaped the maximal ideal; "
                "the reduced order of the divisor is inconsistent"
            )
    q = _shift_down(sd, g, s)
    total = q
    for _ in range(1, K):
        q = _shift_down(sd, q * h, s)
        if q.is_zero():
            break
        total = total + q
    quot = total * G
    rem = g - quot * f
    for j in range(s, K):
        if any(rem.rows[j]):
            raise InternalPrecisionLoss(
                "remainder extends to degree >= reduced order; "
                "working precision too small for this divisor"
            )
    return quot, SkewSeries.from_rows(sd, [list(r) for r in rem.rows[:s]])


def _gauge_free_precision(s: int, K: int) -> int:
    # at working precision s*K + 1 the division pair is unique mod G_K
    return s * K + 1 if s >= 1 else K


def divide(g: SkewSeries, f: SkewSeries) -> tuple[SkewSeries, SkewSeries]:
    """g = q*f + rem with deg_Y rem < reduced order of f, mod G_K.

    Returns the image of the exact division of the canonical lifts of g
    and f, so the output is independent of the route used to compute it.
    """
    sd = f.sd
    sd.check_same(g.sd)
    s = f.reduced_order()
    if isinstance(s, AtLeast):
        raise NotDivisible(
            "divisor has no visible unit coefficient (reduced order >= K); "
            "it generates no distinguished polynomial at this precision"
        )
    if s == 0:
        return g * f.inverse(), sd.zero()
    big = sd.at_precision(_gauge_free_precision(s, sd.ctx.K))
    q, rem = _divide_core(big, change_precision(g, big), change_precision(f, big), s)
    return change_precision(q, sd), change_precision(rem, sd)


def prepare(f: SkewSeries) -> tuple[SkewSeries, DistinguishedPoly]:
    """Factor f = eps * F with eps a unit and F distinguished of degree s.

    Divides Y**s by f: Y**s = v*f + rem, then F := Y**s - rem and
    eps := v**-1, all at the ambient precision.  The factorization
    identity eps*F = f mod G_K, the degree s, and the m-membership of
    F's lower coefficients hold unconditionally; the individual digits
    of eps carry the algorithm's gauge.  For digit-canonical factors
    construct f natively at ambient precision s*K + 1, prepare there,
    and truncate.
    """
    sd = f.sd
    s = f.reduced_order()
    if isinstance(s, AtLeast):
        raise NotPreparable(
            "no unit coefficient visible at this precision; "
            "increase K or divide out the content first"
        )
    if s == 0:
        return f, DistinguishedPoly(sd, 0, ())
    v, rem = _divide_core(sd, sd.y(s), f, s)
    if not v.is_unit():
        raise InternalPrecisionLoss("quotient of Y**s by f is not a unit")
    eps = v.inverse()
    lower = []
    for j in range(s):
        a = -rem.row(j)
        o = a.m_order()
        if not isinstance(o, AtLeast) and o < 1:
            raise InternalPrecisionLoss(
                "lower coefficient of the distinguished factor escapes the "
                "maximal ideal; K is too small for this input"
            )
        lower.append(a)
    return eps, DistinguishedPoly(sd, s, tuple(lower))


def divide_oracle(g: SkewSeries, f: SkewSeries) -> tuple[SkewSeries, SkewSeries]:
    """Independent route to `divide` via one modular linear solve.

    Right-multiplication by f is linear on stored coordinates, so the
    rows >= s of g = q*f + rem are a linear system in the digits of q.
    In integral mode the slot congruence mod p**(K'-n-b) is scaled by
    p**(n+b) into a uniform modulus p**K'; in char-p mode everything
    already lives mod p.  Solved with valuation-pivoting elimination,
    then rem is read off row by row.  Meant for small K (matrix side
    grows like K'**2 with K' = s*K + 1).
    """
    sd = f.sd
    sd.check_same(g.sd)
    s = f.reduced_order()
    if isinstance(s, AtLeast):
        raise SystemSingularAtPrecision(
            "no visible reduced order: the multiplication map has no "
            "unit pivot at this precision"
        )
    p = sd.ctx.p
    big = sd.at_precision(_gauge_free_precision(s, sd.ctx.K))
    Kb = big.ctx.K
    gb, fb = change_precision(g, big), change_precision(f, big)

    yjf = [list(fb.rows)]  # representatives of Y**j * f, row-major digit table
    for _ in range(1, Kb):
        yjf.append(_y_step(big, yjf[-1]))

    qslots = [(j, a) for j in range(Kb) for a in range(Kb - j)]
    col_index = {slot: i for i, slot in enumerate(qslots)}

    def coefficient(j: int, a: int, n: int, b: int) -> int:
        # digit (n, b) of X**a * (Y**j * f); the X-shift moves digits up
        if b < a or n >= len(yjf[j]):
            return 0
        row = yjf[j][n]
        return row[b - a] if b - a < len(row) else 0

    integral = sd.ctx.mode == INTEGRAL
    N = Kb if integral else 1
    mod = p**N
    rows_mat: list[list[int]] = []
    rhs: list[int] = []
    eqslots = [(n, b) for n in range(s, Kb) for b in range(Kb - n)]
    for n, b in eqslots:
        scale = p ** (n + b) if integral else 1
        rows_mat.append(
            [coefficient(j, a, n, b) * scale % mod for (j, a) in qslots]
        )
        rhs.append(gb.rows[n][b] * scale % mod)
    x = solve_mod_prime_power(rows_mat, rhs, p, N)

    qrows = []
    for j in range(Kb):
        qrows.append(
            vcanon(big.ctx, [x[col_index[(j, a)]] for a in range(Kb - j)], Kb - j)
        )
    qb = SkewSeries.from_rows(big, qrows)
    remrows = []
    for n in range(s):
        digits = []
        for b in range(Kb - n):
            acc = gb.rows[n][b] - sum(
                coefficient(j, a, n, b) * x[col_index[(j, a)]]
                for (j, a) in qslots
                if x[col_index[(j, a)]]
            )
            digits.append(acc)
        remrows.append(vcanon(big.ctx, digits, Kb - n))
    remb = SkewSeries.from_rows(big, remrows)
    return change_precision(qb, sd), change_precision(remb, sd)
