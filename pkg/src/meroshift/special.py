"""Complex gamma, log-gamma and polygamma functions on numpy arrays.

Gamma uses the Lanczos approximation (g=7, 9 terms) on Re z >= 1/2 and the
reflection formula elsewhere.  Polygamma functions use upward recurrence to
Re z >= 15 followed by the asymptotic Bernoulli series.
"""

from __future__ import annotations

import math

import numpy as np

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
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

# B_2, B_4, ..., B_20
_BERNOULLI_EVEN = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
)

_ASYMPTOTIC_RE = 15.0


def log_sin(w):
    """Principal-ish ``log(sin(w))`` that stays finite for large ``|Im w|``.

    Only the real part (``log|sin w|``) and ``exp`` of the result are
    meaningful; the imaginary part may differ from the principal logarithm
    by a multiple of 2*pi.
    """
    w = np.asarray(w, dtype=complex)
    upper = w.imag >= 0
    # sin w = e^{-iw}/(-2i) * (1 - e^{2iw})   for Im w >= 0
    # sin w = e^{iw}/(2i)  * (1 - e^{-2iw})   for Im w <  0
    with np.errstate(all="ignore"):
        up = -1j * w - np.log(-2j) + np.log1p(-np.exp(2j * w))
        lo = 1j * w - np.log(2j) + np.log1p(-np.exp(-2j * w))
    return np.where(upper, up, lo)


def log_cos(w):
    """``log(cos(w))`` with the same conventions as :func:`log_sin`."""
    w = np.asarray(w, dtype=complex)
    upper = w.imag >= 0
    with np.errstate(all="ignore"):
        up = -1j * w - math.log(2.0) + np.log1p(np.exp(2j * w))
        lo = 1j * w - math.log(2.0) + np.log1p(np.exp(-2j * w))
    return np.where(upper, up, lo)


def _loggamma_right(z):
    # Lanczos sum, valid for Re z >= 1/2
    z = z - 1.0
    x = np.full(z.shape, _LANCZOS_COEFFS[0], dtype=complex)
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        x = x + c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def loggamma(z):
    """A logarithm of Gamma(z); equal to log Gamma up to 2*pi*i*k.

    Returns ``(value, pole)`` where ``pole`` marks points within ``1e-12``
    of a non-positive integer, for which ``value`` is meaningless.
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    pole = np.zeros(z.shape, dtype=bool)
    right = z.real >= 0.5
    with np.errstate(all="ignore"):
        if right.any():
            out[right] = _loggamma_right(z[right])
        left = ~right
        if left.any():
            zl = z[left]
            nearest = np.round(zl.real)
            pole[left] = (np.abs(zl - nearest) < 1e-12) & (nearest <= 0)
            out[left] = _LOG_PI - log_sin(np.pi * zl) - _loggamma_right(1.0 - zl)
    return out, pole


def gamma(z):
    """Gamma(z) with principal analytic continuation.

    Returns ``(value, pole)``; overflowing values come back as ``inf``.
    """
    lg, pole = loggamma(z)
    with np.errstate(all="ignore"):
        val = np.exp(lg)
    # exact factorials at small positive integers keep Gamma(5) == 24 exact
    z = np.asarray(z, dtype=complex)
    ints = (z.imag == 0) & (z.real == np.round(z.real)) & (z.real >= 1) & (z.real <= 20)
    if np.any(ints):
        idx = np.where(ints, z.real, 1).astype(int) - 1
        val = np.where(ints, _FACTORIALS[idx], val)
    return val, pole


_FACTORIALS = np.array([float(math.factorial(k)) for k in range(20)])


def polygamma(n: int, z):
    """The polygamma function psi^(n)(z); ``n = 0`` is digamma.

    Returns ``(value, pole)``.
    """
    if n < 0:
        raise ValueError("polygamma order must be non-negative")
    z = np.array(z, dtype=complex, copy=True)
    acc = np.zeros(z.shape, dtype=complex)
    pole = np.zeros(z.shape, dtype=bool)
    rec_sign = 1.0 if n % 2 == 0 else -1.0  # (-1)^n
    nfact = float(math.factorial(n))
    with np.errstate(all="ignore"):
        # psi^(n)(z) = psi^(n)(z+1) - (-1)^n n! / z^(n+1)
        target = _ASYMPTOTIC_RE + n
        while True:
            todo = z.real < target
            if not todo.any():
                break
            zt = z[todo]
            pole[todo] |= np.abs(zt) < 1e-12
            acc[todo] += rec_sign * nfact / zt ** (n + 1)
            z[todo] = zt + 1.0
        inv = 1.0 / z
        if n == 0:
            series = np.log(z) - 0.5 * inv
            inv2 = inv * inv
            powk = inv2.copy()
            for k, b in enumerate(_BERNOULLI_EVEN, start=1):
                series = series - b / (2 * k) * powk
                powk = powk * inv2
            value = series - acc
        else:
            series = math.factorial(n - 1) * inv**n + 0.5 * nfact * inv ** (n + 1)
            for k, b in enumerate(_BERNOULLI_EVEN, start=1):
                coef = b * math.factorial(2 * k + n - 1) / math.factorial(2 * k)
                series = series + coef * inv ** (2 * k + n)
            value = -rec_sign * series - acc
    return value, pole


def digamma(z):
    return polygamma(0, z)
