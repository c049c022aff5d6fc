"""Gaussian rationals: complex numbers with Fraction real and imaginary parts.

Arithmetic between two QQi values (or a QQi and an int/Fraction) stays exact;
mixing with a float or complex degrades to an ordinary Python complex.  This
lets the same matrix code run either fully exactly or in floating point,
depending on what the caller feeds in.
"""

from __future__ import annotations

from fractions import Fraction

_EXACT = (int, Fraction)


class QQi:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- conversions ------------------------------------------------------

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        return f"QQi({self.re!r}, {self.im!r})"

    def conjugate(self):
        return QQi(self.re, -self.im)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, QQi):
            return QQi(self.re + other.re, self.im + other.im)
        if isinstance(other, _EXACT):
            return QQi(self.re + other, self.im)
        if isinstance(other, (float, complex)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __sub__(self, other):
        o = -other if isinstance(other, QQi) else None
        if o is not None:
            return self + o
        if isinstance(other, _EXACT):
            return QQi(self.re - other, self.im)
        if isinstance(other, (float, complex)):
            return complex(self) - other
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QQi):
            return QQi(self.re * other.re - self.im * other.im,
                       self.re * other.im + self.im * other.re)
        if isinstance(other, _EXACT):
            return QQi(self.re * other, self.im * other)
        if isinstance(other, (float, complex)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _EXACT):
            other = QQi(other)
        if isinstance(other, QQi):
            d = other.re * other.re + other.im * other.im
            if d == 0:
                raise ZeroDivisionError("division by exact zero")
            return self * QQi(other.re / d, -other.im / d)
        if isinstance(other, (float, complex)):
            return complex(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _EXACT):
            return QQi(other) / self
        if isinstance(other, (float, complex)):
            return other / complex(self)
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QQi(1) / self ** (-k)
        out = QQi(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QQi):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _EXACT):
            return self.im == 0 and self.re == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))


def as_exact(x) -> QQi:
    """Coerce an int/Fraction/QQi to QQi; refuse floats."""
    if isinstance(x, QQi):
        return x
    if isinstance(x, _EXACT):
        return QQi(x)
    raise TypeError(f"cannot treat {x!r} as an exact scalar")


def is_exact(x) -> bool:
    return isinstance(x, (QQi, int, Fraction))
