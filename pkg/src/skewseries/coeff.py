"""Coefficient series: the ring R/m**K in canonical triangular form.

R is Z_p[[X]] (integral mode) or F_p[[X]] (char-p mode) and m is its
maximal ideal.  An element known modulo m**q is stored as a tuple of K
canonical digits, where the coefficient of X**a is a residue mod
p**(q-a) in integral mode (mod p while a < q in char-p mode) and zero
once its slot modulus collapses to 1.  All operations act on canonical
representatives and re-canonicalize, so tuple equality is exactly
equality mod m**q.

The module-level ``v*`` helpers are the arithmetic kernels shared with
the skew series layer (whose row j lives at m-precision K - j); the
:class:`CoeffSeries` class is the public full-precision (q = K) wrapper.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .errors import NotAUnit, SubstitutionDiverges
from .precision import CHARP, AtLeast, PadicInt, PrecisionContext

Vec = tuple[int, ...]


# ---------------------------------------------------------------------------
# kernels on canonical digit tuples
# ---------------------------------------------------------------------------

def vcanon(ctx: PrecisionContext, vals: Sequence[int], q: int) -> Vec:
    mods = ctx.slot_moduli(q)
    K = ctx.K
    out = [0] * K
    for a in range(min(K, len(vals))):
        m = mods[a]
        if m > 1:
            out[a] = vals[a] % m
    return tuple(out)


def vzero(ctx: PrecisionContext) -> Vec:
    return (0,) * ctx.K


def vone(ctx: PrecisionContext) -> Vec:
    return (1,) + (0,) * (ctx.K - 1)


def vx(ctx: PrecisionContext) -> Vec:
    if ctx.K == 1:
        return (0,)
    return (0, 1) + (0,) * (ctx.K - 2)


def vadd(ctx: PrecisionContext, u: Vec, v: Vec, q: int) -> Vec:
    return vcanon(ctx, [x + y for x, y in zip(u, v)], q)


def vsub(ctx: PrecisionContext, u: Vec, v: Vec, q: int) -> Vec:
    return vcanon(ctx, [x - y for x, y in zip(u, v)], q)


def vneg(ctx: PrecisionContext, u: Vec, q: int) -> Vec:
    return vcanon(ctx, [-x for x in u], q)


def vmul(ctx: PrecisionContext, u: Vec, v: Vec, q: int) -> Vec:
    # Slots at index >= q have modulus 1, so the Cauchy sum is cut there.
    lim = min(ctx.K, q)
    acc = [0] * lim
    for a in range(lim):
        ua = u[a]
        if ua:
            for b in range(lim - a):
                vb = v[b]
                if vb:
                    acc[a + b] += ua * vb
    return vcanon(ctx, acc, q)


def vscale(ctx: PrecisionContext, u: Vec, c: int, q: int) -> Vec:
    if c == 0:
        return vzero(ctx)
    return vcanon(ctx, [c * x for x in u], q)


def vorder(ctx: PrecisionContext, u: Vec, q: int) -> int:
    """m-adic order of u, capped at q (== q means not visible)."""
    best = q
    p = ctx.p
    charp = ctx.mode == CHARP
    for a, x in enumerate(u):
        if a >= best:
            break
        if x == 0:
            continue
        if charp:
            return a
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        if v + a < best:
            best = v + a
    return best


def vis_unit(ctx: PrecisionContext, u: Vec) -> bool:
    return u[0] % ctx.p != 0


def vinv(ctx: PrecisionContext, u: Vec, q: int) -> Vec:
    """Inverse mod m**q via the geometric series in h = 1 - u0^-1 u."""
    if not vis_unit(ctx, u):
        raise NotAUnit("constant term is not a unit")
    mods = ctx.slot_moduli(q)
    c = pow(u[0], -1, mods[0])
    h = vcanon(ctx, [(1 if a == 0 else 0) - c * x for a, x in enumerate(u)], q)
    acc = vone(ctx)
    one = vone(ctx)
    for _ in range(q - 1):
        acc = vmul(ctx, h, acc, q)
        acc = vadd(ctx, acc, one, q)
    return vscale(ctx, acc, c, q)


def vcompose(ctx: PrecisionContext, u: Vec, t: Vec, q: int) -> Vec:
    """u(t) for t in m, by Horner evaluation; exact mod m**q."""
    if t[0] % ctx.p != 0:
        raise SubstitutionDiverges("substituted series must lie in m")
    res = vzero(ctx)
    for a in range(ctx.K - 1, -1, -1):
        res = vmul(ctx, res, t, q)
        if u[a]:
            res = vadd(ctx, res, vcanon(ctx, [u[a]], q), q)
    return res


def vpow(ctx: PrecisionContext, u: Vec, e: int, q: int) -> Vec:
    if e < 0:
        raise ValueError("negative exponent")
    res = vone(ctx)
    base = u
    while e:
        if e & 1:
            res = vmul(ctx, res, base, q)
        e >>= 1
        if e:
            base = vmul(ctx, base, base, q)
    return res


# ---------------------------------------------------------------------------
# public wrapper at full precision
# ---------------------------------------------------------------------------

class CoeffSeries:
    """An element of R/m**K in canonical form.

    Tuple equality of ``coeffs`` is equality mod m**K; the coefficient
    of X**a is visible to scalar precision K - a (1 in char-p mode).
    """

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: PrecisionContext, coeffs: Sequence[int]):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", vcanon(ctx, tuple(coeffs), ctx.K))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("CoeffSeries is immutable")

    # -- constructors --------------------------------------------------
    @classmethod
    def from_ints(cls, ctx: PrecisionContext, vals: Iterable[int]) -> "CoeffSeries":
        return cls(ctx, list(vals))

    @classmethod
    def from_padic(cls, ctx: PrecisionContext, vals: Sequence[PadicInt]) -> "CoeffSeries":
        out = []
        for a, v in enumerate(vals):
            if v.p != ctx.p:
                raise ValueError(f"scalar prime {v.p} does not match context")
            need = 1 if ctx.mode == CHARP else max(ctx.K - a, 0)
            if v.prec < need:
                raise ValueError(
                    f"coefficient of X^{a} needs precision {need}, got {v.prec}"
                )
            out.append(v.residue)
        return cls(ctx, out)

    @classmethod
    def zero(cls, ctx: PrecisionContext) -> "CoeffSeries":
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx: PrecisionContext) -> "CoeffSeries":
        return cls(ctx, (1,))

    @classmethod
    def x(cls, ctx: PrecisionContext) -> "CoeffSeries":
        return cls(ctx, (0, 1))

    # -- views ---------------------------------------------------------
    def padic_coeff(self, a: int) -> PadicInt:
        """The X**a coefficient as a tracked-precision scalar."""
        if not 0 <= a < self.ctx.K:
            raise IndexError(a)
        prec = 1 if self.ctx.mode == CHARP else self.ctx.K - a
        return PadicInt(self.ctx.p, self.coeffs[a], prec)

    # -- arithmetic ----------------------------------------------------
    def _other(self, other) -> Vec:
        if isinstance(other, CoeffSeries):
            self.ctx.check_same(other.ctx)
            return other.coeffs
        if isinstance(other, int):
            return vcanon(self.ctx, (other,), self.ctx.K)
        return NotImplemented

    def __add__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return NotImplemented
        return CoeffSeries(self.ctx, vadd(self.ctx, self.coeffs, v, self.ctx.K))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return NotImplemented
        return CoeffSeries(self.ctx, vsub(self.ctx, self.coeffs, v, self.ctx.K))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CoeffSeries(self.ctx, vneg(self.ctx, self.coeffs, self.ctx.K))

    def __mul__(self, other):
        from .series import SkewSeries  # noqa: cyclic at import time only

        if isinstance(other, SkewSeries):
            # R acts on the left of skew series.
            return other.__rmul__(self)
        v = self._other(other)
        if v is NotImplemented:
            return NotImplemented
        return CoeffSeries(self.ctx, vmul(self.ctx, self.coeffs, v, self.ctx.K))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "CoeffSeries":
        return CoeffSeries(self.ctx, vpow(self.ctx, self.coeffs, e, self.ctx.K))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoeffSeries)
            and self.ctx == other.ctx
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.ctx, self.coeffs))

    def __repr__(self) -> str:
        return f"CoeffSeries(p={self.ctx.p}, K={self.ctx.K}, {list(self.coeffs)})"

    # -- structure -----------------------------------------------------
    def m_order(self) -> int | AtLeast:
        o = vorder(self.ctx, self.coeffs, self.ctx.K)
        return AtLeast(self.ctx.K) if o >= self.ctx.K else o

    def is_unit(self) -> bool:
        return vis_unit(self.ctx, self.coeffs)

    def is_zero(self) -> bool:
        """True when the element vanishes mod m**K (zero at precision)."""
        return not any(self.coeffs)

    def inverse(self) -> "CoeffSeries":
        return CoeffSeries(self.ctx, vinv(self.ctx, self.coeffs, self.ctx.K))

    def compose(self, t: "CoeffSeries") -> "CoeffSeries":
        self.ctx.check_same(t.ctx)
        return CoeffSeries(self.ctx, vcompose(self.ctx, self.coeffs, t.coeffs, self.ctx.K))

    def reduce_mod_p(self) -> "CoeffSeries":
        """Image in F_p[[X]]/(X**K) (the char-p context at the same K)."""
        rctx = PrecisionContext(self.ctx.p, self.ctx.K, CHARP)
        return CoeffSeries(rctx, self.coeffs)
