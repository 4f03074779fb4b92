"""Exact coefficient arithmetic.

Skew-hermitian operators expand over the normalized monomial basis with
*real* rational coordinates, but raw monomial coefficients live in Q(i)
(the parity operator is i^d m_1..m_{2d}, and monomial products produce
powers of i).  ``QQi`` is that Gaussian-rational type.  The rational
backend is gmpy2.mpq when available, stdlib Fraction otherwise; both
reduce automatically and hash/compare identically for our uses.
"""

from __future__ import annotations

from fractions import Fraction

try:  # pragma: no cover - exercised implicitly by whichever env runs
    from gmpy2 import mpq as _mpq

    def QQ(num=0, den=1):
        return _mpq(num, den)

except ImportError:  # pragma: no cover
    def QQ(num=0, den=1):
        return Fraction(num, den)

QQ_ZERO = QQ(0)
QQ_ONE = QQ(1)


def qq_from_fraction(fr):
    return QQ(fr.numerator, fr.denominator)


def as_fraction(q) -> Fraction:
    """Plain stdlib Fraction view of a backend rational (for JSON etc.)."""
    return Fraction(int(q.numerator), int(q.denominator))


class QQi:
    """Gaussian rational a + b*i with exact arithmetic.

    Immutable; `re` and `im` are backend rationals.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is type(QQ_ZERO) else QQ(re))
        object.__setattr__(self, "im", im if type(im) is type(QQ_ZERO) else QQ(im))

    def __setattr__(self, *a):
        raise AttributeError("QQi is immutable")

    # -- constructors ------------------------------------------------
    @classmethod
    def i_power(cls, k: int) -> "QQi":
        k &= 3
        if k == 0:
            return QQI_ONE
        if k == 1:
            return QQI_I
        if k == 2:
            return QQi(-1, 0)
        return QQi(0, -1)

    # -- predicates --------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def is_imag(self) -> bool:
        return not self.re

    # -- arithmetic --------------------------------------------------
    def __add__(self, other: "QQi") -> "QQi":
        return QQi(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "QQi") -> "QQi":
        return QQi(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "QQi":
        return QQi(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, QQi):
            return QQi(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        return QQi(self.re * other, self.im * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QQi):
            n2 = other.re * other.re + other.im * other.im
            return QQi(
                (self.re * other.re + self.im * other.im) / n2,
                (self.im * other.re - self.re * other.im) / n2,
            )
        return QQi(self.re / other, self.im / other)

    def conj(self) -> "QQi":
        return QQi(self.re, -self.im)

    def times_i(self) -> "QQi":
        return QQi(-self.im, self.re)

    # -- conversions -------------------------------------------------
    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __eq__(self, other) -> bool:
        if isinstance(other, QQi):
            return self.re == other.re and self.im == other.im
        return self.im == 0 and self.re == other

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im:
            return f"QQi({self.re})"
        return f"QQi({self.re}, {self.im})"


QQI_ZERO = QQi(0, 0)
QQI_ONE = QQi(1, 0)
QQI_I = QQi(0, 1)
