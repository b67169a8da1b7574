"""Gamma function for complex arguments.

Lanczos approximation (g = 7, 9 coefficients) with the reflection formula for
Re z < 1/2.  Relative accuracy is better than 1e-12 on the strip
|Re z| <= 20, |Im z| <= 20 as long as the argument stays at least 1e-6 away
from the poles 0, -1, -2, ...  Arguments within ``POLE_TOLERANCE`` of a pole
raise :class:`~funkinv.errors.PoleError` instead of returning a huge value.

The reciprocal ``rgamma`` is entire: it returns exactly 0 at the poles and
never raises.
"""

from __future__ import annotations

import cmath
import math

from .errors import PoleError

__all__ = ["gamma", "rgamma", "sinpi", "POLE_TOLERANCE"]

POLE_TOLERANCE = 1e-12

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def sinpi(z: complex) -> complex:
    """sin(pi*z) with the argument reduced modulo 1 before multiplying by pi.

    The reduction keeps full relative accuracy near the integers, which the
    naive ``sin(pi*z)`` loses once |z| is moderately large.
    """
    z = complex(z)
    k = round(z.real)
    w = complex(z.real - k, z.imag)
    s = cmath.sin(cmath.pi * w)
    return -s if k % 2 else s


def nearest_pole(z: complex) -> int | None:
    """Index m >= 0 of the gamma pole at -m closest to z within tolerance, else None."""
    z = complex(z)
    k = round(z.real)
    if k > 0:
        return None
    if abs(complex(z.real - k, z.imag)) <= POLE_TOLERANCE:
        return -k
    return None


def _lanczos_positive(z: complex) -> complex:
    # Valid for Re z >= 0.5.
    z -= 1.0
    acc = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * acc


def gamma(z: complex) -> complex:
    """Gamma(z) for complex z; raises PoleError within POLE_TOLERANCE of 0, -1, -2, ..."""
    z = complex(z)
    m = nearest_pole(z)
    if m is not None:
        raise PoleError(f"gamma argument {z} within {POLE_TOLERANCE} of pole at {-m}", pole=-m)
    if z.real < 0.5:
        return cmath.pi / (sinpi(z) * _lanczos_positive(1.0 - z))
    return _lanczos_positive(z)


def rgamma(z: complex) -> complex:
    """1/Gamma(z), entire in z; returns exactly 0 at the poles of Gamma."""
    z = complex(z)
    if z.real < 0.5:
        return sinpi(z) * _lanczos_positive(1.0 - z) / cmath.pi
    return 1.0 / _lanczos_positive(z)
