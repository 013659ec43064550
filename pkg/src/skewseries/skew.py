"""Twisted structure on the coefficient ring.

For a unit eps of Z_p with eps = 1 mod p, the coefficient ring carries
the automorphism

    sigma(r)(X) = r((1 + X)**eps - 1)

and the derivation delta = sigma - id.  The congruence eps = 1 mod p
forces delta(m) into m**2, which is what makes the skew series layer's
triangular precision bookkeeping work.

``SkewData`` holds the exponent and the precomputed powers of sigma(X)
and sigma^-1(X); applying sigma is a Z_p-linear combination of those
powers, one column per canonical X-digit.  Twist tables -- the rows
(Y**n r)_i of the skew commutation rule, see :mod:`skewseries.series` --
are memoized per coefficient value.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from random import Random
from typing import Sequence

from .coeff import (
    CoeffSeries,
    Vec,
    vadd,
    vcanon,
    vcompose,
    vis_unit,
    vmul,
    vone,
    vorder,
    vpow,
    vsub,
    vx,
    vzero,
)
from .errors import ContextMismatch, InvalidAction
from .precision import AtLeast, PadicInt, PrecisionContext

DEFAULT_GUARD = 5


class SkewData:
    """Precomputed data for one twist exponent at one precision."""

    __slots__ = (
        "ctx",
        "guard",
        "_eps_raw",
        "_sig_pows",
        "_isig_pows",
        "_twist",
        "_lock",
        "_derived",
    )

    def __init__(self, ctx: PrecisionContext, epsilon_residue: int, guard: int = DEFAULT_GUARD):
        if epsilon_residue < 0:
            raise InvalidAction("epsilon must be a nonnegative residue")
        if epsilon_residue % ctx.p != 1 % ctx.p:
            raise InvalidAction(
                f"epsilon = {epsilon_residue} is not congruent to 1 mod p = {ctx.p}"
            )
        self.ctx = ctx
        self.guard = guard
        self._eps_raw = epsilon_residue
        K = ctx.K
        e = epsilon_residue % ctx.p**K
        e_inv = pow(epsilon_residue, -1, ctx.p**K)
        gamma = vadd(ctx, vone(ctx), vx(ctx), K)
        sig = vsub(ctx, vpow(ctx, gamma, e, K), vone(ctx), K)
        isig = vsub(ctx, vpow(ctx, gamma, e_inv, K), vone(ctx), K)
        # sigma fixes scalars and maps (X) to (X): powers of sigma(X)
        # have zero digits below their X-order.
        pows = [vone(ctx)]
        ipows = [vone(ctx)]
        for _ in range(K - 1):
            pows.append(vmul(ctx, pows[-1], sig, K))
            ipows.append(vmul(ctx, ipows[-1], isig, K))
        self._sig_pows = tuple(pows)
        self._isig_pows = tuple(ipows)
        self._twist: dict[tuple[Vec, bool], list[list[Vec]]] = {}
        self._lock = threading.Lock()
        self._derived: dict[int, "SkewData"] = {}
        if vorder(ctx, sig, K) != 1:
            raise InvalidAction("sigma(X) must have m-order exactly 1")
        if vorder(ctx, vsub(ctx, sig, vx(ctx), K), K) < min(2, K):
            raise InvalidAction("delta(X) must lie in m^2")
        if vcompose(ctx, isig, sig, K) != vx(ctx):
            raise InvalidAction("sigma and sigma^-1 do not invert each other")

    # -- identity ------------------------------------------------------
    @property
    def epsilon(self) -> PadicInt:
        return PadicInt(self.ctx.p, self._eps_raw, self.ctx.K + self.guard)

    @property
    def epsilon_raw(self) -> int:
        return self._eps_raw

    @property
    def sigma_of_X(self) -> CoeffSeries:
        return CoeffSeries(self.ctx, self._sig_pows[1] if self.ctx.K > 1 else vzero(self.ctx))

    @property
    def sigma_inv_of_X(self) -> CoeffSeries:
        return CoeffSeries(self.ctx, self._isig_pows[1] if self.ctx.K > 1 else vzero(self.ctx))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SkewData)
            and self.ctx == other.ctx
            and self._eps_raw % self.ctx.p ** (self.ctx.K + self.guard)
            == other._eps_raw % self.ctx.p ** (self.ctx.K + self.guard)
        )

    def __hash__(self) -> int:
        return hash((self.ctx, self._eps_raw % self.ctx.p ** (self.ctx.K + self.guard)))

    def __repr__(self) -> str:
        return f"SkewData(p={self.ctx.p}, K={self.ctx.K}, mode={self.ctx.mode}, eps={self._eps_raw})"

    def check_same(self, other: "SkewData") -> None:
        if self != other:
            raise ContextMismatch(f"twist data differ: {self!r} vs {other!r}")

    def at_precision(self, K: int) -> "SkewData":
        """The same twist over the context with filtration level K.

        Reuses the raw exponent, so elevated working precisions stay
        consistent with this one on every visible digit.
        """
        if K == self.ctx.K:
            return self
        cached = self._derived.get(K)
        if cached is None:
            cached = SkewData(self.ctx.with_K(K), self._eps_raw, self.guard)
            self._derived[K] = cached
        return cached

    # -- applying the twist --------------------------------------------
    def _apply(self, pows: Sequence[Vec], u: Vec, q: int) -> Vec:
        K = self.ctx.K
        acc = [0] * K
        for a in range(K):
            c = u[a]
            if c:
                pa = pows[a]
                for b in range(a, K):
                    x = pa[b]
                    if x:
                        acc[b] += c * x
        return vcanon(self.ctx, acc, q)

    def sig_vec(self, u: Vec, q: int) -> Vec:
        return self._apply(self._sig_pows, u, q)

    def isig_vec(self, u: Vec, q: int) -> Vec:
        return self._apply(self._isig_pows, u, q)

    def apply_sigma(self, r: CoeffSeries) -> CoeffSeries:
        self.ctx.check_same(r.ctx)
        return CoeffSeries(self.ctx, self.sig_vec(r.coeffs, self.ctx.K))

    def apply_sigma_inv(self, r: CoeffSeries) -> CoeffSeries:
        self.ctx.check_same(r.ctx)
        return CoeffSeries(self.ctx, self.isig_vec(r.coeffs, self.ctx.K))

    def apply_delta(self, r: CoeffSeries) -> CoeffSeries:
        self.ctx.check_same(r.ctx)
        return CoeffSeries(
            self.ctx, vsub(self.ctx, self.sig_vec(r.coeffs, self.ctx.K), r.coeffs, self.ctx.K)
        )

    # -- twist tables --------------------------------------------------
    def _twist_rows(self, u: Vec, n: int, inverse: bool = False, use_cache: bool = True) -> list[list[Vec]]:
        """Rows 0..n of the commutation table of u.

        Row m lists (Y**m u)_0 .. (Y**m u)_m with the recursion
        (Y**(m+1) u)_j = sigma((Y**m u)_(j-1)) + delta((Y**m u)_j);
        with ``inverse`` the pair (sigma^-1, sigma^-1 - id) is used,
        which is the commutation rule of the right-coefficient form.
        """
        K = self.ctx.K
        app = self.isig_vec if inverse else self.sig_vec

        def extend(rows: list[list[Vec]]) -> None:
            while len(rows) <= n:
                prev = rows[-1]
                m = len(rows) - 1
                sig_prev = [app(e, K) for e in prev]
                nxt = []
                for j in range(m + 2):
                    parts = [0] * K
                    if j >= 1:
                        parts = list(sig_prev[j - 1])
                    if j <= m:
                        d = vsub(self.ctx, sig_prev[j], prev[j], K)
                        parts = [x + y for x, y in zip(parts, d)]
                    nxt.append(vcanon(self.ctx, parts, K))
                rows.append(nxt)

        if not use_cache:
            rows = [[u]]
            extend(rows)
            return rows
        key = (u, inverse)
        with self._lock:
            rows = self._twist.setdefault(key, [[u]])
            extend(rows)
            return [row[:] for row in rows[: n + 1]]

    def twist_table(self, r: CoeffSeries, n: int, use_cache: bool = True) -> list[list[CoeffSeries]]:
        """Rows 0..n of (Y**m r)_i as full-precision coefficient series."""
        self.ctx.check_same(r.ctx)
        if n < 0:
            raise ValueError("n must be >= 0")
        rows = self._twist_rows(r.coeffs, n, use_cache=use_cache)
        return [[CoeffSeries(self.ctx, e) for e in row] for row in rows]

    # -- series constructors (lazy import to avoid a cycle) ------------
    def zero(self):
        from .series import SkewSeries

        return SkewSeries(self, ())

    def one(self):
        from .series import SkewSeries

        return SkewSeries(self, (vone(self.ctx),))

    def y(self, power: int = 1):
        from .series import SkewSeries

        if power < 0:
            raise ValueError("power must be >= 0")
        rows = [vzero(self.ctx)] * power + [vone(self.ctx)]
        return SkewSeries(self, rows)

    def embed(self, r: CoeffSeries | int):
        from .series import SkewSeries

        if isinstance(r, int):
            r = CoeffSeries(self.ctx, (r,))
        self.ctx.check_same(r.ctx)
        return SkewSeries(self, (r.coeffs,))


def build_skew(ctx: PrecisionContext, epsilon_residue: int, guard: int = DEFAULT_GUARD) -> SkewData:
    """Construct the twist data, validating eps = 1 mod p."""
    return SkewData(ctx, epsilon_residue, guard)


# ---------------------------------------------------------------------------
# axiom validation
# ---------------------------------------------------------------------------

@dataclass
class AxiomCheck:
    name: str
    passes: int = 0
    failures: int = 0
    counterexample: str | None = None

    def record(self, ok: bool, witness: str) -> None:
        if ok:
            self.passes += 1
        else:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = witness


@dataclass
class AxiomReport:
    samples: int
    seed: int
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.failures == 0 for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "passes": c.passes,
                    "failures": c.failures,
                    "counterexample": c.counterexample,
                }
                for c in self.checks
            ],
        }


def _random_vec(ctx: PrecisionContext, rng: Random, in_m: bool = False) -> Vec:
    mods = ctx.slot_moduli(ctx.K)
    vals = [rng.randrange(m) if m > 1 else 0 for m in mods]
    if in_m:
        vals[0] -= vals[0] % ctx.p
    return vcanon(ctx, vals, ctx.K)


def validate_axioms(sd: SkewData, samples: int = 100, seed: int = 0) -> AxiomReport:
    """Randomized check that (sigma, delta) is a twisted derivation pair.

    Failures are collected into the report, not raised.
    """
    ctx = sd.ctx
    K = ctx.K
    rng = Random(seed)
    report = AxiomReport(samples=samples, seed=seed)
    ring = AxiomCheck("sigma_is_ring_map")
    leib = AxiomCheck("delta_twisted_leibniz")
    dm = AxiomCheck("delta_lands_in_m")
    dm2 = AxiomCheck("delta_deepens_m")
    ordp = AxiomCheck("sigma_preserves_m_order")
    inv = AxiomCheck("sigma_inverse_roundtrip")
    report.checks = [ring, leib, dm, dm2, ordp, inv]
    for _ in range(samples):
        r = _random_vec(ctx, rng)
        s = _random_vec(ctx, rng)
        rm = _random_vec(ctx, rng, in_m=True)
        sig_r = sd.sig_vec(r, K)
        sig_s = sd.sig_vec(s, K)
        rs = vmul(ctx, r, s, K)
        lhs = sd.sig_vec(rs, K)
        rhs = vmul(ctx, sig_r, sig_s, K)
        add_ok = sd.sig_vec(vadd(ctx, r, s, K), K) == vadd(ctx, sig_r, sig_s, K)
        ring.record(lhs == rhs and add_ok, f"r={list(r)}, s={list(s)}")
        d_r = vsub(ctx, sig_r, r, K)
        d_s = vsub(ctx, sig_s, s, K)
        d_rs = vsub(ctx, lhs, rs, K)
        want = vadd(ctx, vmul(ctx, d_r, s, K), vmul(ctx, sig_r, d_s, K), K)
        leib.record(d_rs == want, f"r={list(r)}, s={list(s)}")
        dm.record(vorder(ctx, d_r, K) >= min(1, K), f"r={list(r)}")
        d_rm = vsub(ctx, sd.sig_vec(rm, K), rm, K)
        dm2.record(vorder(ctx, d_rm, K) >= min(2, K), f"r={list(rm)}")
        o = vorder(ctx, r, K)
        ordp.record(vorder(ctx, sig_r, K) == o, f"r={list(r)}")
        back = sd.isig_vec(sig_r, K) == r and sd.sig_vec(sd.isig_vec(r, K), K) == r
        inv.record(back, f"r={list(r)}")
    return report
