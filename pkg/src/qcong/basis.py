"""The canonical pole-order basis and polynomial extraction in psi / phi.

Basis elements q^{-m} + O(1) are built by greedy elimination of the principal
part of psi^m: psi^k has exact valuation -k, so the reduction is triangular
and never needs a linear solve.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .eta import phi, psi
from .primes import PrimeContext
from .series import PrecisionError, QSeries

_ZERO = Fraction(0)


class NotPolynomialError(ValueError):
    """A series failed to reduce to a polynomial of the requested shape."""

    def __init__(self, message: str, failing_exponent: int):
        super().__init__(message)
        self.failing_exponent = failing_exponent


class PhiPolynomial:
    """A polynomial in the reciprocal Hauptmodul with exact coefficients."""

    __slots__ = ("coeffs", "ctx")

    def __init__(self, coeffs=None, ctx: PrimeContext | None = None):
        self.ctx = ctx
        self.coeffs = {}
        if coeffs:
            for k, c in dict(coeffs).items():
                c = Fraction(c)
                if c:
                    if k < 0:
                        raise ValueError("negative degrees are not allowed")
                    self.coeffs[int(k)] = c

    @property
    def constant(self) -> Fraction:
        return self.coeffs.get(0, _ZERO)

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=0)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs.get(k, _ZERO)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, PhiPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        terms = " + ".join(
            f"{c}*x^{k}" for k, c in sorted(self.coeffs.items())
        )
        return f"PhiPolynomial({terms or '0'})"

    def _ctx_or(self, other):
        return self.ctx if self.ctx is not None else getattr(other, "ctx", None)

    def __add__(self, other):
        if not isinstance(other, PhiPolynomial):
            return NotImplemented
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, _ZERO) + c
        return PhiPolynomial(out, self._ctx_or(other))

    def __sub__(self, other):
        if not isinstance(other, PhiPolynomial):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return PhiPolynomial({k: -c for k, c in self.coeffs.items()}, self.ctx)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PhiPolynomial(
                {k: c * other for k, c in self.coeffs.items()}, self.ctx
            )
        if not isinstance(other, PhiPolynomial):
            return NotImplemented
        out: dict[int, Fraction] = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                out[k] = out.get(k, _ZERO) + c1 * c2
        return PhiPolynomial(out, self._ctx_or(other))

    def __rmul__(self, other):
        return self.__mul__(other)

    def evaluate(self, series: QSeries) -> QSeries:
        """Horner evaluation on a q-series."""
        if not self.coeffs:
            return QSeries.zero(series.prec, series.ram)
        acc = QSeries.zero(series.prec - series.val, series.ram)
        for k in range(self.degree, -1, -1):
            acc = acc * series + self.coeffs.get(k, _ZERO)
        return acc


@dataclass(frozen=True)
class BasisElement:
    """q^{-m} + O(1), together with its integer polynomial in psi."""

    ctx: PrimeContext
    m: int
    series: QSeries
    psi_poly: dict = field(default_factory=dict)  # degree -> int, monic, no constant

    def coefficient(self, n: int) -> Fraction:
        return self.series.coeff(n)


@lru_cache(maxsize=8)
def _basis_family_cached(p: int, exploratory: bool, m_max: int, n: int):
    ctx = PrimeContext(p, exploratory)
    elements = [BasisElement(ctx, 0, QSeries.one(n), {})]
    if m_max == 0:
        return tuple(elements)
    ps = psi(ctx, n + m_max - 1)
    powers = [QSeries.one(ps.prec - ps.val), ps]
    for _ in range(2, m_max + 1):
        powers.append(powers[-1] * ps)
    for m in range(1, m_max + 1):
        r = powers[m]
        poly = {m: 1}
        for k in range(m - 1, 0, -1):
            c = r.coeff(-k)
            if c:
                if c.denominator != 1:
                    raise ArithmeticError("basis reduction hit a non-integer coefficient")
                poly[k] = -int(c)  # element = psi^m + sum_k poly[k] * psi^k
                r = r - c * powers[k]
        if r.coeff(-m) != 1 or any(r.coeff(-k) != 0 for k in range(1, m)):
            raise ArithmeticError("basis reduction failed to normalize the principal part")
        if not r.is_integral():
            raise ArithmeticError("basis element has a non-integer coefficient")
        elements.append(BasisElement(ctx, m, r, poly))
    return tuple(elements)


def basis_family(ctx: PrimeContext, m_max: int, n: int):
    """Basis elements for pole orders 0..m_max, sharing one psi expansion."""
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    return _basis_family_cached(ctx.p, ctx.exploratory, m_max, n)


def basis_element(ctx: PrimeContext, m: int, n: int) -> BasisElement:
    """The unique basis element with pole order m, to precision n."""
    return basis_family(ctx, m, n)[m]


def express_in_phi(
    ctx: PrimeContext,
    s: QSeries,
    maxdeg: int,
    *,
    phi_series: QSeries | None = None,
    guard: int = 8,
):
    """Write s as constant + polynomial in phi of degree <= maxdeg.

    Succeeds only if the residual is zero to the precision of s; the first
    surviving exponent is reported otherwise.
    """
    if s.ram != 1:
        raise ValueError("express_in_phi requires an unramified series")
    if not s.is_zero() and s.val < 0:
        raise ValueError("express_in_phi requires valuation >= 0")
    if maxdeg < 1:
        raise ValueError("maxdeg must be positive")
    if s.prec < maxdeg + guard:
        raise PrecisionError(
            f"precision {s.prec} too low for degree {maxdeg} (guard {guard})"
        )
    if phi_series is None:
        phi_series = phi(ctx, s.prec)
    if phi_series.prec < s.prec:
        raise PrecisionError("phi expansion is shorter than the target series")
    constant = s.coeff(0)
    residual = s - constant
    coeffs: dict[int, Fraction] = {}
    power = QSeries.one(s.prec)
    for k in range(1, maxdeg + 1):
        power = (power * phi_series).truncate(s.prec)
        c = residual.coeff(k)
        if c:
            coeffs[k] = c
            residual = residual - c * power
    if not residual.is_zero():
        bad = residual.val
        raise NotPolynomialError(
            f"not a phi-polynomial of degree <= {maxdeg}: residual at q^{bad}", bad
        )
    return constant, PhiPolynomial(coeffs, ctx)


def express_in_psi(
    ctx: PrimeContext,
    s: QSeries,
    maxdeg: int,
    *,
    psi_series: QSeries | None = None,
    guard: int = 8,
):
    """Write s as constant + polynomial in psi (no constant term in the poly)."""
    if s.ram != 1:
        raise ValueError("express_in_psi requires an unramified series")
    if not s.is_zero() and s.val < -maxdeg:
        raise ValueError(f"valuation {s.val} below -maxdeg {-maxdeg}")
    if psi_series is None:
        psi_series = psi(ctx, s.prec + max(maxdeg, 1))
    powers = [QSeries.one(psi_series.prec - psi_series.val)]
    if maxdeg >= 1:
        powers.append(psi_series)
    for _ in range(2, maxdeg + 1):
        powers.append(powers[-1] * psi_series)
    residual = s
    coeffs: dict[int, Fraction] = {}
    for k in range(maxdeg, 0, -1):
        c = residual.coeff(-k)
        if c:
            coeffs[k] = c
            residual = residual - c * powers[k]
    constant = residual.coeff(0) if residual.known(0) else _ZERO
    residual = residual - constant
    if not residual.is_zero():
        bad = residual.val
        raise NotPolynomialError(
            f"not a psi-polynomial plus constant: residual at q^{bad}", bad
        )
    return constant, coeffs
