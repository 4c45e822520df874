"""U_p iteration, the modular equation for phi, Newton power sums, and the
phi-lattice closure checks."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .basis import NotPolynomialError, PhiPolynomial, express_in_phi
from .eta import phi
from .primes import PrimeContext
from .series import QSeries, val_p

# reference values for the modular-equation coefficients b_j, used as an
# independent cross-check of the exact derivation
BJ_TABLE = {
    2: (12, 1024),
    3: (30, 2916, 59049),
    5: (63, 6500, 196875, 2343750, 9765625),
    7: (82, 8624, 289835, 4571504, 37882978, 161414428, 282475249),
}


@dataclass(frozen=True)
class ModularEquation:
    ctx: PrimeContext
    b: tuple  # b_1 .. b_p, integers


@dataclass(frozen=True)
class RpReport:
    poly: PhiPolynomial
    member: bool
    t: object  # largest t with poly in p^t * lattice; math.inf for zero
    per_degree: dict  # degree -> valuation of that coefficient


def up_iterate(f: QSeries, ctx: PrimeContext, beta: int) -> QSeries:
    """Apply the coefficient-decimation operator beta times."""
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    for _ in range(beta):
        f = f.u_op(ctx.p)
    return f


def derive_bj(ctx: PrimeContext, n: int = 128) -> ModularEquation:
    """Recover the integers b_j from U_p phi = p * sum b_j phi^j, exactly."""
    p = ctx.p
    ph = phi(ctx, n)
    u = ph.u_op(p)
    constant, poly = express_in_phi(ctx, u, p, phi_series=ph)
    if constant != 0:
        raise ArithmeticError("U_p phi unexpectedly has a constant term")
    b = []
    for j in range(1, p + 1):
        c = poly[j] / p
        if c.denominator != 1:
            raise ArithmeticError(f"b_{j} is not an integer; precision too low?")
        b.append(int(c))
    return ModularEquation(ctx, tuple(b))


def g_poly(eq: ModularEquation, j: int) -> PhiPolynomial:
    """The coefficient polynomial attached to index j in the algebraic relation
    satisfied by p^{lam/2} phi(tau/p)."""
    ctx = eq.ctx
    p = ctx.p
    if not 1 <= j <= p:
        raise ValueError(f"j must lie in [1, {p}]")
    sign = 1 if (j + 1) % 2 == 0 else -1
    scale = sign * p ** (ctx.lam // 2 + 2)
    return PhiPolynomial(
        {ell - j + 1: scale * eq.b[ell - 1] for ell in range(j, p + 1)}, ctx
    )


def power_sum(eq: ModularEquation, n: int) -> PhiPolynomial:
    """n-th power sum of the roots of the modular equation, via Newton's
    identities with the explicit n*g_n correction term."""
    if n < 1:
        raise ValueError("n must be positive")
    p = eq.ctx.p
    g = {j: g_poly(eq, j) for j in range(1, p + 1)}
    sums = [None]  # 1-indexed
    for k in range(1, n + 1):
        acc = PhiPolynomial({}, eq.ctx)
        for j in range(1, min(k - 1, p) + 1):
            term = g[j] * sums[k - j]
            acc = acc + term if (j + 1) % 2 == 0 else acc - term
        if k <= p:
            term = g[k] * k
            acc = acc + term if (k + 1) % 2 == 0 else acc - term
        sums.append(acc)
    return sums[n]


def rp_report(ctx: PrimeContext, poly: PhiPolynomial) -> RpReport:
    """Per-degree divisibility bookkeeping against the lattice exponents gamma."""
    if poly.constant != 0:
        raise ValueError("lattice membership is defined for constant-free polynomials")
    per_degree = {}
    t = math.inf
    for k, c in sorted(poly.coeffs.items()):
        v = val_p(c, ctx.p)
        per_degree[k] = v
        t = min(t, v - ctx.gamma(k))
    return RpReport(poly, t >= 0, t, per_degree)


@dataclass(frozen=True)
class PowerSumRow:
    n: int
    observed_t: object
    required: int
    ok: bool


@dataclass(frozen=True)
class PowerSumReport:
    ctx: PrimeContext
    rows: tuple
    ok: bool


def power_sum_target(ctx: PrimeContext, n: int) -> int:
    """Lower bound on the extra power of p carried by the n-th power sum."""
    return {2: 4 * n + 12, 3: 2 * n + 7, 5: 2 * n + 2, 7: n + 2}[ctx.p]


def verify_power_sum_divisibility(ctx: PrimeContext, n_max: int) -> PowerSumReport:
    eq = derive_bj(ctx)
    rows = []
    for n in range(1, n_max + 1):
        rep = rp_report(ctx, power_sum(eq, n))
        required = power_sum_target(ctx, n)
        rows.append(PowerSumRow(n, rep.t, required, rep.t >= required))
    return PowerSumReport(ctx, tuple(rows), all(r.ok for r in rows))


def verify_hpoly_relation(ctx: PrimeContext, n: int = 128) -> QSeries:
    """Left-hand side of the algebraic relation satisfied by
    h = p^{lam/2} phi(tau/p); zero-to-precision iff the relation holds."""
    p = ctx.p
    ph = phi(ctx, n)
    eq = derive_bj(ctx, max(n, 128))
    # phi(tau/p) is the same coefficient run read in w = q^{1/p}
    h = QSeries(list(ph.coeffs), ph.val, ph.prec, ram=p) * p ** (ctx.lam // 2)
    lhs = h**p
    for j in range(1, p + 1):
        gw = g_poly(eq, j).evaluate(ph).ramify(p)
        term = gw * h ** (p - j)
        lhs = lhs + term if j % 2 == 0 else lhs - term
    return lhs


@dataclass(frozen=True)
class ClosureTrial:
    index: int
    poly: PhiPolynomial
    observed_t: object
    ok: bool
    error: str | None = None


@dataclass(frozen=True)
class ClosureReport:
    ctx: PrimeContext
    trials: tuple
    ok: bool


def verify_up_closure(
    ctx: PrimeContext,
    trials: int = 100,
    deg_max: int = 4,
    n: int | None = None,
    seed: int = 0,
) -> ClosureReport:
    """Seeded random lattice elements must gain at least p^delta under U_p."""
    if trials < 1:
        raise ValueError("trials must be positive")
    p = ctx.p
    if n is None:
        n = max(256, p * (p * deg_max + 16))
    ph = phi(ctx, n)
    results = []
    for i in range(trials):
        rng = random.Random(seed * 1000003 + i)  # split per trial for determinism
        while True:
            d = [rng.randint(-9, 9) for _ in range(deg_max)]
            if any(d):
                break
        poly = PhiPolynomial(
            {k: d[k - 1] * p ** ctx.gamma(k) for k in range(1, deg_max + 1)}, ctx
        )
        u = poly.evaluate(ph).u_op(p)
        try:
            constant, out = express_in_phi(ctx, u, p * deg_max, phi_series=ph)
            if constant != 0:
                results.append(ClosureTrial(i, poly, None, False, "nonzero constant"))
                continue
            rep = rp_report(ctx, out)
            results.append(ClosureTrial(i, poly, rep.t, rep.t >= ctx.delta))
        except NotPolynomialError as exc:
            results.append(ClosureTrial(i, poly, None, False, str(exc)))
    return ClosureReport(ctx, tuple(results), all(t.ok for t in results))
