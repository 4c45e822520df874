"""Eta products, the level-p Hauptmoduln, and numeric cusp checks.

The fractional q^{1/24} prefactor of eta always cancels in the quotients used
here (the net q-exponent is the integer -1), so eta enters the exact path only
through its stripped Euler product.  The one non-exact path is the numeric
evaluation on the upper half-plane used for the cusp-relation check.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .primes import PrimeContext
from .series import QSeries


@dataclass(frozen=True)
class EtaQuotientSpec:
    """Product of rescaled eta factors eta(t*tau)^r with its net q-exponent."""

    factors: tuple[tuple[int, int], ...]

    @property
    def q_exponent(self) -> Fraction:
        return sum((Fraction(t * r, 24) for t, r in self.factors), Fraction(0))

    @classmethod
    def hauptmodul(cls, ctx: PrimeContext) -> "EtaQuotientSpec":
        return cls(((1, ctx.lam), (ctx.p, -ctx.lam)))


def euler_product(n: int) -> QSeries:
    """prod_{k>=1} (1 - q^k) to precision n, via the pentagonal-number support."""
    if n < 0:
        raise ValueError("precision must be nonnegative")
    coeffs = [0] * (n + 1)
    coeffs[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > n:
            break
        sign = -1 if k % 2 else 1
        coeffs[g1] = sign
        if g2 <= n:
            coeffs[g2] = sign
        k += 1
    return QSeries(coeffs, 0, n)


@lru_cache(maxsize=32)
def _psi_cached(p: int, exploratory: bool, n: int) -> QSeries:
    ctx = PrimeContext(p, exploratory)
    t = n + 2
    e = euler_product(t)
    ep = euler_product(t // ctx.p + 1).dilate(ctx.p)
    unit = (e * ep.invert()) ** ctx.lam
    out = unit.shift(-1).truncate(n)
    if not out.is_integral():
        raise ArithmeticError("hauptmodul expansion produced a non-integer coefficient")
    return out


def psi(ctx: PrimeContext, n: int) -> QSeries:
    """The Hauptmodul q^{-1} + O(1): (eta(tau)/eta(p tau))^lam."""
    if n < 0:
        raise ValueError("precision must be nonnegative")
    return _psi_cached(ctx.p, ctx.exploratory, n)


@lru_cache(maxsize=32)
def _phi_cached(p: int, exploratory: bool, n: int) -> QSeries:
    ctx = PrimeContext(p, exploratory)
    out = psi(ctx, n + 2).invert().truncate(n)
    if not out.is_integral():
        raise ArithmeticError("hauptmodul inverse produced a non-integer coefficient")
    return out


def phi(ctx: PrimeContext, n: int) -> QSeries:
    """The reciprocal Hauptmodul q + O(q^2)."""
    if n < 1:
        raise ValueError("precision must be at least 1")
    return _phi_cached(ctx.p, ctx.exploratory, n)


# ---------------------------------------------------------------------------
# numeric path (double precision; only used for cusp checks)


def eta_eval(tau: complex, tol: float = 1e-20) -> complex:
    """Numeric eta(tau) = e^{2 pi i tau / 24} prod (1 - e^{2 pi i n tau})."""
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("eta_eval requires Im(tau) > 0")
    q = cmath.exp(2j * cmath.pi * tau)
    prod = 1 + 0j
    qn = 1 + 0j
    for _ in range(200000):
        qn *= q
        if abs(qn) < tol:
            break
        prod *= 1 - qn
    return cmath.exp(2j * cmath.pi * tau / 24) * prod


def psi_eval(ctx: PrimeContext, tau: complex) -> complex:
    return (eta_eval(tau) / eta_eval(ctx.p * tau)) ** ctx.lam


def phi_eval(ctx: PrimeContext, tau: complex) -> complex:
    return 1 / psi_eval(ctx, tau)


def check_cusp_relation(ctx: PrimeContext, tau: complex) -> float:
    """|psi(-1/(p tau)) - p^{lam/2} phi(tau)| at the given point."""
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("check_cusp_relation requires Im(tau) > 0")
    lhs = psi_eval(ctx, -1 / (ctx.p * tau))
    rhs = ctx.p ** (ctx.lam / 2) * phi_eval(ctx, tau)
    return abs(lhs - rhs)


def check_cusp_relation_inverse(ctx: PrimeContext, tau: complex) -> float:
    """|phi(-1/(p tau)) - p^{-lam/2} psi(tau)| at the given point."""
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("check_cusp_relation_inverse requires Im(tau) > 0")
    lhs = phi_eval(ctx, -1 / (ctx.p * tau))
    rhs = ctx.p ** (-ctx.lam / 2) * psi_eval(ctx, tau)
    return abs(lhs - rhs)
