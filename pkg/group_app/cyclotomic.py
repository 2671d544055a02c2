"""
Exact arithmetic in cyclotomic fields Q(zeta_N).

A CycloNumber stores rational coordinates in the power basis
1, x, ..., x^(phi(N)-1) of Q[x]/Phi_N(x), with x standing for
zeta_N = exp(2*pi*i/N). Mixed conductors promote to their lcm.
"""

import cmath
import math
from fractions import Fraction
from functools import lru_cache

from sympy import Poly, QQ, Symbol, cyclotomic_poly, invert, totient

from .exceptions import DivisionByZero, SchemaError

_x = Symbol('x')


@lru_cache(maxsize=None)
def cyclotomic_coefficients(n):
    """Coefficients of Phi_n, lowest degree first (monic)."""
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(n, _x), _x).all_coeffs()))


@lru_cache(maxsize=None)
def euler_phi(n):
    return int(totient(n))


def _reduce(coeffs, n):
    """Reduce a coefficient list (lowest degree first) modulo Phi_n."""
    phi_coeffs = cyclotomic_coefficients(n)
    degree = len(phi_coeffs) - 1
    coeffs = list(coeffs)
    for top in range(len(coeffs) - 1, degree - 1, -1):
        lead = coeffs[top]
        if lead:
            shift = top - degree
            for i in range(degree):
                if phi_coeffs[i]:
                    coeffs[shift + i] -= lead * phi_coeffs[i]
        coeffs[top] = 0
    coeffs = coeffs[:degree] + [Fraction(0)] * (degree - len(coeffs))
    return tuple(Fraction(c) for c in coeffs)


class CycloNumber:
    """An element of Q(zeta_N). Immutable; equality is exact across conductors."""

    __slots__ = ('conductor', 'coeffs')

    def __init__(self, conductor, coeffs):
        self.conductor = int(conductor)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != euler_phi(self.conductor):
            coeffs = _reduce(coeffs, self.conductor)
        self.coeffs = coeffs

    # Constructors

    @classmethod
    def rational(cls, value, conductor=1):
        coeffs = [Fraction(0)] * euler_phi(conductor)
        coeffs[0] = Fraction(value)
        return cls(conductor, coeffs)

    @classmethod
    def zeta(cls, conductor, k=1):
        k %= conductor
        coeffs = [Fraction(0)] * (k + 1)
        coeffs[k] = Fraction(1)
        return cls(conductor, _reduce(coeffs, conductor))

    @classmethod
    def from_exponent_counts(cls, conductor, counts):
        """sum_k counts[k] * zeta_N^k."""
        coeffs = [Fraction(c) for c in counts] + [Fraction(0)] * max(0, conductor - len(counts))
        return cls(conductor, _reduce(coeffs, conductor))

    @staticmethod
    def coerce(value):
        if isinstance(value, CycloNumber):
            return value
        if isinstance(value, (int, Fraction)):
            return CycloNumber.rational(value)
        return NotImplemented

    # Conductor handling

    def promote(self, conductor):
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"Conductor {conductor} is not a multiple of {self.conductor}")
        step = conductor // self.conductor
        coeffs = [Fraction(0)] * ((len(self.coeffs) - 1) * step + 1)
        for i, c in enumerate(self.coeffs):
            coeffs[i * step] = c
        return CycloNumber(conductor, _reduce(coeffs, conductor))

    def _common(self, other):
        other = CycloNumber.coerce(other)
        if other is NotImplemented:
            return None, None
        n = math.lcm(self.conductor, other.conductor)
        return self.promote(n), other.promote(n)

    # Field operations

    def __add__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return CycloNumber(a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.conductor, [-c for c in self.coeffs])

    def __sub__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return CycloNumber(a.conductor, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber(self.conductor, [c * other for c in self.coeffs])
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        product = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        product[i + j] += x * y
        return CycloNumber(a.conductor, _reduce(product, a.conductor))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero()
        if self.is_rational():
            return CycloNumber.rational(1 / self.coeffs[0], self.conductor)
        n = self.conductor
        poly = Poly([QQ(c.numerator, c.denominator) for c in reversed(self.coeffs)], _x, domain=QQ)
        modulus = Poly(cyclotomic_poly(n, _x), _x, domain=QQ)
        result = invert(poly, modulus)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(result.all_coeffs())]
        return CycloNumber(n, _reduce(coeffs, n))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero()
            return CycloNumber(self.conductor, [c / other for c in self.coeffs])
        other = CycloNumber.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycloNumber.coerce(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloNumber.rational(1, self.conductor)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, a):
        """The automorphism zeta_N -> zeta_N^a (a coprime to N)."""
        n = self.conductor
        coeffs = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            coeffs[(i * a) % n] += c
        return CycloNumber(n, _reduce(coeffs, n))

    def conjugate(self):
        return self.galois(-1)

    # Predicates

    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def is_one(self):
        return self.is_rational() and self.coeffs[0] == 1

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coeffs)

    def rational_value(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return a.coeffs == b.coeffs

    __hash__ = None

    def __bool__(self):
        return not self.is_zero()

    # Output

    def to_complex(self):
        return sum(complex(c) * cmath.exp(2j * cmath.pi * i / self.conductor)
                   for i, c in enumerate(self.coeffs))

    def sort_key(self, conductor=None):
        value = self.promote(conductor) if conductor else self
        return tuple(value.coeffs)

    def to_dict(self):
        return {'N': self.conductor, 'c': [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @classmethod
    def from_dict(cls, data):
        try:
            n = int(data['N'])
            coeffs = [Fraction(c) for c in data['c']]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise SchemaError(f"Invalid cyclotomic number: {e}")
        if n < 1 or len(coeffs) != euler_phi(n):
            raise SchemaError("Cyclotomic number needs phi(N) coefficients", N=n)
        return cls(n, coeffs)

    def __repr__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z{self.conductor}^{i}")
        return " + ".join(terms)
