"""Exact rational scalar used for witness accumulation.

``gmpy2.mpq`` when importable (GMP-backed, several times faster than
:class:`fractions.Fraction` on the large denominators that build up during a
reduction), otherwise ``Fraction``. Public results are always ``Fraction``.
"""

from fractions import Fraction

try:
    from gmpy2 import mpq as Q
    BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Q = Fraction
    BACKEND = "fractions"


def to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    return Fraction(int(v.numerator), int(v.denominator))
