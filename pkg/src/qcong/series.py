"""Exact truncated Laurent/Puiseux series over the rationals.

A series is stored as a dense coefficient run from its valuation ``val`` to
its precision bound ``prec`` (both inclusive, in ``w``-units where
``w^ram = q``).  All arithmetic is exact; precision is propagated
pessimistically so that an operation never emits a coefficient its inputs do
not determine.

Multiplication clears denominators and runs an integer convolution.  Large
convolutions use Kronecker substitution (pack the coefficients into one big
integer, multiply, unpack), with gmpy2 doing the big multiply when available.
"""
from __future__ import annotations

import math
from fractions import Fraction

try:
    import gmpy2
except ImportError:  # pragma: no cover - gmpy2 is an accelerator only
    gmpy2 = None

_ZERO = Fraction(0)
_ONE = Fraction(1)


class NotInvertibleError(ArithmeticError):
    """Raised when a series with zero leading coefficient is inverted."""


class PrecisionError(ValueError):
    """Raised when a coefficient beyond the known precision is requested."""


def _val_p_int(n: int, p: int):
    if n == 0:
        return math.inf
    if gmpy2 is not None:
        return int(gmpy2.remove(gmpy2.mpz(n), p)[1])
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def val_p(x, p: int):
    """p-adic valuation of a rational; +inf for zero."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    return _val_p_int(x.numerator, p) - _val_p_int(x.denominator, p)


# ---------------------------------------------------------------------------
# integer convolution kernel


def _school_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _kronecker_mul(a, b):
    ma = max(abs(c) for c in a)
    mb = max(abs(c) for c in b)
    m = len(a) + len(b) - 1
    if ma == 0 or mb == 0:
        return [0] * m
    # every product coefficient fits in a signed limb of B bits
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
    nbytes = (bits + 7) // 8
    half = 1 << (nbytes * 8 - 1)
    off_limb = b"\x00" * (nbytes - 1) + b"\x80"

    def pack(coeffs):
        buf = b"".join((c + half).to_bytes(nbytes, "little") for c in coeffs)
        return int.from_bytes(buf, "little") - int.from_bytes(
            off_limb * len(coeffs), "little"
        )

    va = pack(a)
    vb = pack(b)
    if gmpy2 is not None:
        prod = int(gmpy2.mpz(va) * gmpy2.mpz(vb))
    else:
        prod = va * vb
    shifted = prod + int.from_bytes(off_limb * m, "little")
    raw = shifted.to_bytes(m * nbytes, "little")
    return [
        int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") - half
        for i in range(m)
    ]


_SCHOOL_CUTOFF = 4096


def mul_int_lists(a, b):
    """Full convolution of two integer coefficient lists."""
    if not a or not b:
        return []
    if len(a) * len(b) <= _SCHOOL_CUTOFF:
        return _school_mul(a, b)
    return _kronecker_mul(a, b)


def mul_frac_lists(a, b):
    """Full convolution of two Fraction coefficient lists."""
    if not a or not b:
        return []
    da = math.lcm(*(c.denominator for c in a))
    db = math.lcm(*(c.denominator for c in b))
    na = [c.numerator * (da // c.denominator) for c in a]
    nb = [c.numerator * (db // c.denominator) for c in b]
    prod = mul_int_lists(na, nb)
    d = da * db
    if d == 1:
        return [Fraction(c) for c in prod]
    return [Fraction(c, d) for c in prod]


def _mul_trunc(a, b, length):
    prod = mul_frac_lists(a[:length], b[:length])
    prod = prod[:length]
    if len(prod) < length:
        prod += [_ZERO] * (length - len(prod))
    return prod


# ---------------------------------------------------------------------------


class QSeries:
    """Immutable truncated Laurent series with explicit precision."""

    __slots__ = ("ram", "val", "prec", "coeffs")

    def __init__(self, coeffs, val: int = 0, prec: int | None = None, ram: int = 1):
        if ram < 1:
            raise ValueError("ramification index must be positive")
        coeffs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        if prec is None:
            prec = val + len(coeffs) - 1
        if prec < val - 1:
            raise ValueError("prec must be >= val - 1")
        n = prec - val + 1
        coeffs = coeffs[:n] + [_ZERO] * (n - len(coeffs))
        lead = 0
        while lead < len(coeffs) and coeffs[lead] == 0:
            lead += 1
        if lead == len(coeffs):
            coeffs = []
            val = prec + 1
        elif lead:
            coeffs = coeffs[lead:]
            val += lead
        object.__setattr__(self, "ram", ram)
        object.__setattr__(self, "val", val)
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, prec: int, ram: int = 1) -> "QSeries":
        return cls([], val=prec + 1, prec=prec, ram=ram)

    @classmethod
    def one(cls, prec: int, ram: int = 1) -> "QSeries":
        return cls([_ONE], val=0, prec=prec, ram=ram)

    @classmethod
    def monomial(cls, coeff, exp: int, prec: int, ram: int = 1) -> "QSeries":
        return cls([coeff], val=exp, prec=prec, ram=ram)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, n: int) -> Fraction:
        """Coefficient at w-exponent n; raises beyond the precision bound."""
        if n > self.prec:
            raise PrecisionError(f"coefficient at exponent {n} is beyond prec {self.prec}")
        if n < self.val:
            return _ZERO
        return self.coeffs[n - self.val]

    def known(self, n: int) -> bool:
        return n <= self.prec

    def terms(self):
        """Iterate (exponent, coefficient) over nonzero stored coefficients."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.val + i, c

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self.ram == other.ram
            and self.val == other.val
            and self.prec == other.prec
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ram, self.val, self.prec, self.coeffs))

    def __repr__(self):
        return f"QSeries(ram={self.ram}, val={self.val}, prec={self.prec}, {self.pretty()})"

    def pretty(self, max_terms: int = 8) -> str:
        var = "q" if self.ram == 1 else "w"
        parts = []
        for exp, c in self.terms():
            if len(parts) >= max_terms:
                parts.append("...")
                break
            if exp == 0:
                term = str(c)
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                sgn = "-" if c < 0 else ""
                e = f"{var}" if exp == 1 else f"{var}^{exp}"
                term = f"{sgn}{mag}{e}"
                if not parts:
                    term = term
            parts.append(term)
        if not parts:
            parts = ["0"]
        out = parts[0]
        for t in parts[1:]:
            if t.startswith("-"):
                out += " - " + t[1:]
            else:
                out += " + " + t
        return f"{out} + O({var}^{self.prec + 1})"

    # -- ramification ------------------------------------------------------

    def _respread(self, t: int, new_ram: int) -> "QSeries":
        if t == 1:
            if new_ram == self.ram:
                return self
            return QSeries(list(self.coeffs), self.val, self.prec, new_ram)
        n = len(self.coeffs)
        out = [_ZERO] * (n * t) if n else []
        for i, c in enumerate(self.coeffs):
            out[i * t] = c
        return QSeries(out, self.val * t, (self.prec + 1) * t - 1, new_ram)

    def ramify(self, e: int) -> "QSeries":
        """Re-express with ramification e*ram; the abstract series is unchanged."""
        if e < 1:
            raise ValueError("ramification factor must be positive")
        return self._respread(e, self.ram * e)

    def dilate(self, t: int) -> "QSeries":
        """Substitute q -> q^t (exponents scaled by t, same ramification)."""
        if t < 1:
            raise ValueError("dilation factor must be positive")
        return self._respread(t, self.ram)

    def _aligned(self, other: "QSeries"):
        if self.ram == other.ram:
            return self, other
        r = math.lcm(self.ram, other.ram)
        return self._respread(r // self.ram, r), other._respread(r // other.ram, r)

    # -- arithmetic --------------------------------------------------------

    def _scalar(self, c) -> "QSeries":
        # scalar treated as a constant series at the same precision
        return QSeries([Fraction(c)], 0, max(self.prec, 0), self.ram)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self
            other = self._scalar(other)
        elif not isinstance(other, QSeries):
            return NotImplemented
        a, b = self._aligned(other)
        prec = min(a.prec, b.prec)
        if a.is_zero() and b.is_zero():
            return QSeries.zero(prec, a.ram)
        val = min(a.val, b.val, prec + 1)
        out = [_ZERO] * (prec - val + 1)
        for s in (a, b):
            for i, c in enumerate(s.coeffs):
                e = s.val + i
                if e > prec:
                    break
                out[e - val] += c
        return QSeries(out, val, prec, a.ram)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.val, self.prec, self.ram)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__add__(-Fraction(other))
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return QSeries.zero(self.prec, self.ram)
            return QSeries([c * x for x in self.coeffs], self.val, self.prec, self.ram)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self._aligned(other)
        prec = min(a.prec + b.val, b.prec + a.val)
        val = a.val + b.val
        if a.is_zero() or b.is_zero():
            return QSeries.zero(prec, a.ram)
        length = prec - val + 1
        out = _mul_trunc(list(a.coeffs), list(b.coeffs), length)
        return QSeries(out, val, prec, a.ram)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                raise ZeroDivisionError("division of a series by zero")
            return self.__mul__(1 / c)
        if isinstance(other, QSeries):
            return self.__mul__(other.invert())
        return NotImplemented

    def invert(self) -> "QSeries":
        """Multiplicative inverse to the determined precision (Newton iteration)."""
        if self.is_zero():
            raise NotInvertibleError("cannot invert a zero-to-precision series")
        u = list(self.coeffs)
        total = len(u)
        x = [1 / u[0]]
        t = 1
        while t < total:
            t2 = min(2 * t, total)
            err = _mul_trunc(u, x, t2)
            err[0] -= 1
            corr = _mul_trunc(x, err, t2)
            x = [(x[i] if i < len(x) else _ZERO) - corr[i] for i in range(t2)]
            t = t2
        return QSeries(x, -self.val, self.prec - 2 * self.val, self.ram)

    def __pow__(self, k: int) -> "QSeries":
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return QSeries.one(max(self.prec - self.val, 0), self.ram)
        if k < 0:
            return self.invert() ** (-k)
        result = None
        base = self
        kk = k
        while kk:
            if kk & 1:
                result = base if result is None else result * base
            kk >>= 1
            if kk:
                base = base * base
        return result

    def shift(self, k: int) -> "QSeries":
        """Multiply by w^k."""
        return QSeries(list(self.coeffs), self.val + k, self.prec + k, self.ram)

    def truncate(self, prec: int) -> "QSeries":
        """Drop coefficients above the given precision bound."""
        if prec >= self.prec:
            return self
        return QSeries(list(self.coeffs), self.val, prec, self.ram)

    def u_op(self, p: int) -> "QSeries":
        """Keep coefficients at exponents divisible by p, dividing the exponent."""
        if self.ram != 1:
            raise ValueError("u_op is only supported on unramified series")
        if p < 2:
            raise ValueError("u_op requires p >= 2")
        prec = self.prec // p
        lo = -((-self.val) // p)
        if lo > prec:
            return QSeries.zero(prec)
        out = [_ZERO] * (prec - lo + 1)
        start = lo * p
        for e in range(start, self.prec + 1, p):
            out[e // p - lo] = self.coeff(e)
        return QSeries(out, lo, prec)


def u_op(a: QSeries, p: int) -> QSeries:
    return a.u_op(p)


def agree(a: QSeries, b: QSeries) -> bool:
    """Whether two series agree on their common determined exponent range."""
    a, b = a._aligned(b)
    prec = min(a.prec, b.prec)
    lo = min(a.val, b.val, prec + 1)
    return all(a.coeff(n) == b.coeff(n) for n in range(lo, prec + 1))
