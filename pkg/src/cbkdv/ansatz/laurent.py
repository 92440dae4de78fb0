"""Sparse Laurent polynomials in E = exp(C1*xi) and rational functions over
powers of (E + 1/E)."""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping


class LaurentPoly:
    """Sparse polynomial sum_k c_k E**k with integer k and complex c_k.

    Exact zero coefficients are never stored. Instances are treated as
    immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, complex] | None = None):
        clean = {}
        if terms:
            for k, c in terms.items():
                if int(k) != k:
                    raise TypeError(f"exponent must be an integer, got {k!r}")
                c = complex(c)
                if c != 0:
                    clean[int(k)] = c
        self._terms = dict(sorted(clean.items()))

    @classmethod
    def _wrap(cls, terms: dict) -> "LaurentPoly":
        # trusted fast path: integer keys, numeric values
        obj = cls.__new__(cls)
        obj._terms = {k: terms[k] for k in sorted(terms) if terms[k] != 0}
        return obj

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, k: int, c=1.0) -> "LaurentPoly":
        return cls({k: c})

    @property
    def terms(self) -> dict[int, complex]:
        return dict(self._terms)

    def coeff(self, k: int) -> complex:
        return self._terms.get(k, 0j)

    def exponents(self) -> list[int]:
        return list(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0j) + c
        return LaurentPoly._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._wrap({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return LaurentPoly._wrap({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict[int, complex] = {}
        for i, a in self._terms.items():
            for j, b in other._terms.items():
                out[i + j] = out.get(i + j, 0j) + a * b
        return LaurentPoly._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = LaurentPoly.constant(1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, m: int) -> "LaurentPoly":
        """Multiply by E**m."""
        return LaurentPoly._wrap({k + m: c for k, c in self._terms.items()})

    def derivative(self, rate) -> "LaurentPoly":
        """d/dxi where E = exp(rate*xi): E**k -> k*rate*E**k."""
        return LaurentPoly._wrap({k: k * rate * c for k, c in self._terms.items()})

    def __call__(self, E):
        return sum(c * E**k for k, c in self._terms.items())

    def max_abs(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def allclose(self, other: "LaurentPoly", rtol=1e-12, atol=0.0) -> bool:
        keys = set(self._terms) | set(other._terms)
        scale = max(self.max_abs(), other.max_abs())
        return all(
            abs(self.coeff(k) - other.coeff(k)) <= atol + rtol * scale for k in keys
        )

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "LaurentPoly(0)"
        body = " + ".join(f"({c:.6g})*E^{k}" for k, c in self._terms.items())
        return f"LaurentPoly({body})"


def _coerce(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, float, complex)):
        return LaurentPoly.constant(x)
    return NotImplemented


E_PLUS_INV = LaurentPoly({1: 1.0, -1: 1.0})
E_MINUS_INV = LaurentPoly({1: 1.0, -1: -1.0})


@lru_cache(maxsize=None)
def _e_plus_inv_power(n: int) -> LaurentPoly:
    return E_PLUS_INV**n


class RationalHyperbolic:
    """numerator / (E + 1/E)**power, with the power kept explicit."""

    __slots__ = ("numerator", "power")

    def __init__(self, numerator: LaurentPoly, power: int = 0):
        if power < 0:
            raise ValueError("denominator power must be non-negative")
        self.numerator = numerator
        self.power = power

    @property
    def denominator(self) -> LaurentPoly:
        return _e_plus_inv_power(self.power)

    @classmethod
    def constant(cls, c) -> "RationalHyperbolic":
        return cls(LaurentPoly.constant(c), 0)

    @classmethod
    def tanh(cls) -> "RationalHyperbolic":
        return cls(E_MINUS_INV, 1)

    @classmethod
    def sech(cls) -> "RationalHyperbolic":
        return cls(LaurentPoly.constant(2.0), 1)

    @classmethod
    def sinh(cls) -> "RationalHyperbolic":
        return cls(E_MINUS_INV * 0.5, 0)

    def raised_to(self, power: int) -> "RationalHyperbolic":
        """Same value with the denominator power raised to ``power``."""
        if power < self.power:
            raise ValueError("cannot lower the denominator power")
        if power == self.power:
            return self
        return RationalHyperbolic(self.numerator * _e_plus_inv_power(power - self.power), power)

    def __add__(self, other):
        other = _coerce_rh(other)
        p = max(self.power, other.power)
        return RationalHyperbolic(
            self.raised_to(p).numerator + other.raised_to(p).numerator, p
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalHyperbolic(-self.numerator, self.power)

    def __sub__(self, other):
        return self + (-_coerce_rh(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return RationalHyperbolic(self.numerator * other, self.power)
        other = _coerce_rh(other)
        return RationalHyperbolic(self.numerator * other.numerator, self.power + other.power)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return RationalHyperbolic(self.numerator**n, self.power * n)

    def derivative(self, rate) -> "RationalHyperbolic":
        # (N/D^m)' = (N'*D - m*N*D') / D^(m+1),  D' = rate*(E - 1/E)
        n = self.numerator
        if self.power == 0:
            return RationalHyperbolic(n.derivative(rate), 0)
        top = n.derivative(rate) * E_PLUS_INV - n * (E_MINUS_INV * (self.power * rate))
        return RationalHyperbolic(top, self.power + 1)

    def __call__(self, E):
        return self.numerator(E) / (E + 1 / E) ** self.power

    def equals(self, other, rtol=1e-12) -> bool:
        """Cross-multiplied comparison."""
        other = _coerce_rh(other)
        lhs = self.numerator * other.denominator
        rhs = other.numerator * self.denominator
        return lhs.allclose(rhs, rtol=rtol)

    def __repr__(self):
        return f"RationalHyperbolic({self.numerator!r} / (E+1/E)^{self.power})"


def _coerce_rh(x) -> RationalHyperbolic:
    if isinstance(x, RationalHyperbolic):
        return x
    if isinstance(x, LaurentPoly):
        return RationalHyperbolic(x, 0)
    if isinstance(x, (int, float, complex)):
        return RationalHyperbolic.constant(x)
    raise TypeError(f"cannot combine RationalHyperbolic with {type(x).__name__}")
