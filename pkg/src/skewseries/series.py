"""Skew power series at triangular precision.

An element of the skew power series ring A = R[[Y; sigma, delta]] is
written with coefficients on the left, f = sum_j a_j Y**j, subject to
the commutation rule

    Y r = sigma(r) Y + delta(r).

Elements are known modulo the two-sided filtration ideal G_K whose
Y**j-row is m**(K-j); concretely row j is a coefficient vector at
m-precision K - j, so the X**a Y**j slot carries K - j - a scalar
digits.  All operations happen on canonical representatives of A/G_K
(G_K is an ideal, so operating and re-canonicalizing is exact), which
makes row-tuple equality *the* congruence mod G_K: ``__eq__`` is the
dedicated mod-G_K comparator and never compares invisible tails.

Multiplication follows the commutation rule directly: f*g accumulates
r_i * (Y**i g) while Y**i g is advanced one Y-step at a time.  Because
canonical representatives have fewer than K rows, the infinite inner
sums of the distributed product truncate on their own.
"""
from __future__ import annotations

from math import comb
from typing import Iterable, Sequence

from .coeff import (
    CoeffSeries,
    Vec,
    vadd,
    vcanon,
    vinv,
    vis_unit,
    vmul,
    vone,
    vorder,
    vsub,
    vzero,
)
from .errors import NotAUnit, NotPolynomial
from .precision import AtLeast
from .skew import SkewData

Rows = tuple[Vec, ...]


def _canon_rows(sd: SkewData, rows: Sequence[Sequence[int]]) -> Rows:
    # Rows at index >= K lie in G_K (their slot moduli collapse), so any
    # surplus input rows are invisible and dropped.
    ctx = sd.ctx
    K = ctx.K
    out = []
    for j in range(K):
        row = rows[j] if j < len(rows) else ()
        out.append(vcanon(ctx, tuple(row), K - j))
    return tuple(out)


def _y_step(sd: SkewData, rows: Rows) -> Rows:
    """Rows of Y * f: row j becomes sigma(f_(j-1)) + delta(f_j)."""
    ctx = sd.ctx
    K = ctx.K
    sig = [sd.sig_vec(r, K - j) if any(r) else r for j, r in enumerate(rows)]
    out = []
    for j in range(K):
        acc = [0] * K
        if j >= 1 and any(sig[j - 1]):
            acc = list(sig[j - 1])
        if any(rows[j]):
            d = sig[j]
            r = rows[j]
            acc = [x + y - z for x, y, z in zip(acc, d, r)]
        out.append(vcanon(ctx, acc, K - j))
    return tuple(out)


def _left_coeff_mul(sd: SkewData, c: Vec, rows: Rows) -> Rows:
    ctx = sd.ctx
    K = ctx.K
    return tuple(vmul(ctx, c, rows[j], K - j) for j in range(K))


def _mul_rows(sd: SkewData, fr: Rows, gr: Rows) -> Rows:
    ctx = sd.ctx
    K = ctx.K
    top = -1
    for j in range(K - 1, -1, -1):
        if any(fr[j]):
            top = j
            break
    if top < 0:
        return tuple(vzero(ctx) for _ in range(K))
    acc = [[0] * K for _ in range(K)]
    cur = gr
    for i in range(top + 1):
        fi = fr[i]
        if any(fi):
            for j in range(K):
                cj = cur[j]
                if any(cj):
                    prod = vmul(ctx, fi, cj, K - j)
                    row = acc[j]
                    for a in range(K):
                        row[a] += prod[a]
        if i < top:
            cur = _y_step(sd, cur)
    return tuple(vcanon(ctx, acc[j], K - j) for j in range(K))


class ResidueSeries:
    """The reduction in k[[Y]] = (R/m)[[Y]] mod Y**K (sigma acts trivially)."""

    __slots__ = ("p", "digits")

    def __init__(self, p: int, digits: Sequence[int]):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "digits", tuple(d % p for d in digits))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("ResidueSeries is immutable")

    def __add__(self, other: "ResidueSeries") -> "ResidueSeries":
        return ResidueSeries(self.p, [x + y for x, y in zip(self.digits, other.digits)])

    def __mul__(self, other: "ResidueSeries") -> "ResidueSeries":
        K = len(self.digits)
        out = [0] * K
        for i, x in enumerate(self.digits):
            if x:
                for j in range(K - i):
                    out[i + j] += x * other.digits[j]
        return ResidueSeries(self.p, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ResidueSeries)
            and self.p == other.p
            and self.digits == other.digits
        )

    def __hash__(self) -> int:
        return hash((self.p, self.digits))

    def __repr__(self) -> str:
        return f"ResidueSeries(p={self.p}, {list(self.digits)})"

    def order(self) -> int | AtLeast:
        for j, d in enumerate(self.digits):
            if d:
                return j
        return AtLeast(len(self.digits))


class SkewSeries:
    """An element of A/G_K in canonical row form."""

    __slots__ = ("sd", "rows")

    def __init__(self, sd: SkewData, rows: Sequence[Sequence[int]]):
        object.__setattr__(self, "sd", sd)
        object.__setattr__(self, "rows", _canon_rows(sd, rows))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("SkewSeries is immutable")

    # -- constructors --------------------------------------------------
    @classmethod
    def from_rows(
        cls, sd: SkewData, rows: Iterable[CoeffSeries | Sequence[int] | int]
    ) -> "SkewSeries":
        data = []
        for r in rows:
            if isinstance(r, CoeffSeries):
                sd.ctx.check_same(r.ctx)
                data.append(r.coeffs)
            elif isinstance(r, int):
                data.append((r,))
            else:
                data.append(tuple(r))
        return cls(sd, data)

    # -- views ---------------------------------------------------------
    def row(self, j: int) -> CoeffSeries:
        """Row j as a coefficient series (its digits above m**(K-j) are 0)."""
        if not 0 <= j < self.sd.ctx.K:
            raise IndexError(j)
        return CoeffSeries(self.sd.ctx, self.rows[j])

    def coefficients(self) -> tuple[CoeffSeries, ...]:
        return tuple(CoeffSeries(self.sd.ctx, r) for r in self.rows)

    def __repr__(self) -> str:
        terms = []
        for j, r in enumerate(self.rows):
            if any(r):
                terms.append(f"({list(r)})*Y^{j}")
        body = " + ".join(terms) if terms else "0"
        return f"SkewSeries({body} | p={self.sd.ctx.p}, K={self.sd.ctx.K})"

    # -- equality is congruence mod G_K --------------------------------
    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SkewSeries)
            and self.sd == other.sd
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.sd, self.rows))

    def is_zero(self) -> bool:
        """True when every row vanishes, i.e. the element lies in G_K.

        This certifies "zero at this precision" only; a structurally
        nonzero element of G_K is indistinguishable from zero here.
        """
        return all(not any(r) for r in self.rows)

    # -- additive structure --------------------------------------------
    def _same(self, other) -> "SkewSeries":
        if isinstance(other, int):
            return SkewSeries.from_rows(self.sd, [other])
        if isinstance(other, CoeffSeries):
            self.sd.ctx.check_same(other.ctx)
            return SkewSeries.from_rows(self.sd, [other])
        if not isinstance(other, SkewSeries):
            raise TypeError(f"expected SkewSeries, got {type(other).__name__}")
        self.sd.check_same(other.sd)
        return other

    def __add__(self, other: "SkewSeries | CoeffSeries | int") -> "SkewSeries":
        other = self._same(other)
        K = self.sd.ctx.K
        return SkewSeries(
            self.sd,
            [
                vadd(self.sd.ctx, a, b, K - j)
                for j, (a, b) in enumerate(zip(self.rows, other.rows))
            ],
        )

    __radd__ = __add__

    def __sub__(self, other: "SkewSeries | CoeffSeries | int") -> "SkewSeries":
        other = self._same(other)
        K = self.sd.ctx.K
        return SkewSeries(
            self.sd,
            [
                vsub(self.sd.ctx, a, b, K - j)
                for j, (a, b) in enumerate(zip(self.rows, other.rows))
            ],
        )

    def __rsub__(self, other: "SkewSeries | CoeffSeries | int") -> "SkewSeries":
        return self._same(other).__sub__(self)

    def __neg__(self) -> "SkewSeries":
        K = self.sd.ctx.K
        return SkewSeries(
            self.sd, [vsub(self.sd.ctx, vzero(self.sd.ctx), r, K - j) for j, r in enumerate(self.rows)]
        )

    # -- multiplication -------------------------------------------------
    def __mul__(self, other) -> "SkewSeries":
        if isinstance(other, SkewSeries):
            self._same(other)
            return SkewSeries(self.sd, _mul_rows(self.sd, self.rows, other.rows))
        if isinstance(other, CoeffSeries):
            self.sd.ctx.check_same(other.ctx)
            return SkewSeries(
                self.sd, _mul_rows(self.sd, self.rows, self.sd.embed(other).rows)
            )
        if isinstance(other, int):
            return SkewSeries(
                self.sd, _mul_rows(self.sd, self.rows, self.sd.embed(other).rows)
            )
        return NotImplemented

    def __rmul__(self, other) -> "SkewSeries":
        # left action of the coefficient ring (rowwise product)
        if isinstance(other, CoeffSeries):
            self.sd.ctx.check_same(other.ctx)
            return SkewSeries(self.sd, _left_coeff_mul(self.sd, other.coeffs, self.rows))
        if isinstance(other, int):
            c = vcanon(self.sd.ctx, (other,), self.sd.ctx.K)
            return SkewSeries(self.sd, _left_coeff_mul(self.sd, c, self.rows))
        return NotImplemented

    # -- structure ------------------------------------------------------
    def reduce(self) -> ResidueSeries:
        """Image in k[[Y]]/(Y**K): constant scalar digit of every row."""
        return ResidueSeries(self.sd.ctx.p, [r[0] for r in self.rows])

    def reduced_order(self) -> int | AtLeast:
        """Least j whose row is a unit of R; AtLeast(K) if none is visible."""
        p = self.sd.ctx.p
        for j, r in enumerate(self.rows):
            if r[0] % p != 0:
                return j
        return AtLeast(self.sd.ctx.K)

    def g_order(self) -> int | AtLeast:
        """Filtration order: largest k with f in G_k, capped at K."""
        ctx = self.sd.ctx
        K = ctx.K
        best = K
        for j, r in enumerate(self.rows):
            o = vorder(ctx, r, K - j) + j
            if o < best:
                best = o
        return AtLeast(K) if best >= K else best

    def is_unit(self) -> bool:
        return vis_unit(self.sd.ctx, self.rows[0])

    def inverse(self) -> "SkewSeries":
        """Two-sided inverse mod G_K via the geometric series.

        With c = (row 0)**-1, h = 1 - c*f lies in G_1, so the partial
        sum (1 + h + ... + h**(K-1)) * c inverts f exactly mod G_K.
        """
        sd = self.sd
        ctx = sd.ctx
        K = ctx.K
        if not self.is_unit():
            raise NotAUnit("row 0 is not a unit of the coefficient ring")
        c = vinv(ctx, self.rows[0], K)
        h = _left_coeff_mul(sd, c, self.rows)
        one = sd.one().rows
        h = tuple(vsub(ctx, a, b, K - j) for j, (a, b) in enumerate(zip(one, h)))
        acc = one
        for _ in range(K - 1):
            acc = _mul_rows(sd, h, acc)
            acc = tuple(vadd(ctx, a, b, K - j) for j, (a, b) in enumerate(zip(acc, one)))
        inv_rows = _mul_rows(sd, acc, sd.embed(CoeffSeries(ctx, c)).rows)
        return SkewSeries(sd, inv_rows)

    # -- polynomial degree ---------------------------------------------
    def y_degree(self) -> int:
        """Largest j with a visible row, -1 for zero at precision."""
        for j in range(self.sd.ctx.K - 1, -1, -1):
            if any(self.rows[j]):
                return j
        return -1

    # -- basis changes ---------------------------------------------------
    def to_z_form(self, max_deg: int) -> list[CoeffSeries]:
        """Coefficients in the Z = Y + 1 basis, where Z r = sigma(r) Z.

        Scalars are sigma-fixed, so the change of basis is the integer
        Pascal transform c_i = sum_j (-1)**(j-i) C(j, i) a_j.
        """
        if self.y_degree() > max_deg:
            raise NotPolynomial(
                f"visible Y-degree {self.y_degree()} exceeds max_deg = {max_deg}"
            )
        ctx = self.sd.ctx
        K = ctx.K
        deg = min(max_deg, K - 1)
        out = []
        for i in range(deg + 1):
            acc = [0] * K
            for j in range(i, deg + 1):
                coef = comb(j, i) if (j - i) % 2 == 0 else -comb(j, i)
                rj = self.rows[j]
                for a in range(K):
                    if rj[a]:
                        acc[a] += coef * rj[a]
            out.append(CoeffSeries(ctx, acc))
        return out

    @classmethod
    def from_z_form(cls, sd: SkewData, zcoeffs: Sequence[CoeffSeries]) -> "SkewSeries":
        """Inverse Pascal transform: a_j = sum_i C(i, j) c_i."""
        ctx = sd.ctx
        K = ctx.K
        rows = []
        for j in range(K):
            acc = [0] * K
            for i in range(j, len(zcoeffs)):
                coef = comb(i, j)
                ci = zcoeffs[i].coeffs
                for a in range(K):
                    if ci[a]:
                        acc[a] += coef * ci[a]
            rows.append(acc)
        return cls(sd, rows)

    # -- right-coefficient form ------------------------------------------
    def right_coefficients(self) -> list[CoeffSeries]:
        """Coefficients b_j with f = sum_j Y**j b_j.

        Moving a_j across Y**j uses the inverse-twist commutation rule
        r Y = Y sigma^-1(r) - delta(sigma^-1(r)); the delta part gains
        one m-power per row it drops, so canonical precision survives.
        """
        sd = self.sd
        ctx = sd.ctx
        K = ctx.K
        out = [[0] * K for _ in range(K)]
        for j, aj in enumerate(self.rows):
            if not any(aj):
                continue
            table = sd._twist_rows(aj, j, inverse=True)
            for i, e in enumerate(table[j]):
                row = out[i]
                for a in range(K):
                    if e[a]:
                        row[a] += e[a]
        return [CoeffSeries(ctx, vcanon(ctx, r, K - i)) for i, r in enumerate(out)]

    @classmethod
    def from_right_coefficients(
        cls, sd: SkewData, bcoeffs: Sequence[CoeffSeries]
    ) -> "SkewSeries":
        """Reassemble sum_j Y**j b_j into left-coefficient rows."""
        ctx = sd.ctx
        K = ctx.K
        out = [[0] * K for _ in range(K)]
        for j, bj in enumerate(bcoeffs):
            if bj.is_zero():
                continue
            table = sd._twist_rows(bj.coeffs, j)
            for i, e in enumerate(table[j]):
                row = out[i]
                for a in range(K):
                    if e[a]:
                        row[a] += e[a]
        return cls(sd, out)


def change_precision(f: SkewSeries, sd: SkewData) -> SkewSeries:
    """Reinterpret f's canonical digits over another precision window.

    Raising K is an exact lift of the representative; lowering K is
    truncation mod the larger G_K.
    """
    if sd.ctx.p != f.sd.ctx.p or sd.ctx.mode != f.sd.ctx.mode:
        raise ValueError("change_precision only adjusts K")
    return SkewSeries(sd, [list(r) for r in f.rows[: sd.ctx.K]])
