"""Complex log-Gamma and polygamma evaluations on the line 1/2 + iy.

The spectral model needs a continuous branch of arg Gamma(1/2 + iy) and
the first three polygamma functions at complex arguments.  scipy covers
loggamma and digamma; trigamma and tetragamma are summed directly from
their Hurwitz series with an asymptotic tail, which vectorizes and is
accurate to ~1e-13 on the strip Re z = 1/2.
"""

from __future__ import annotations

import numpy as np
from scipy.special import loggamma, psi

_SERIES_TERMS = 16

# asymptotic tails: trigamma(x) ~ 1/x + 1/(2x^2) + sum B_2j / x^(2j+1) ...
_TRIGAMMA_TAIL = ((3, 1.0 / 6.0), (5, -1.0 / 30.0), (7, 1.0 / 42.0), (9, -1.0 / 30.0))
_TETRAGAMMA_TAIL = ((4, -0.5), (6, 1.0 / 6.0), (8, -1.0 / 6.0), (10, 3.0 / 10.0))


def arg_gamma(z):
    """Continuous branch of arg Gamma(z) on Re z > 0 (arg Gamma(1/2) = 0)."""
    return np.imag(loggamma(z))


def digamma(z):
    """Digamma at complex z."""
    return psi(np.asarray(z, dtype=complex))


def trigamma(z):
    """Trigamma at complex z with Re z > 0: sum over (z+k)^-2."""
    z = np.asarray(z, dtype=complex)
    k = np.arange(_SERIES_TERMS)
    head = np.sum((z[..., None] + k) ** -2.0, axis=-1)
    x = z + _SERIES_TERMS
    tail = 1.0 / x + 0.5 / x**2
    for p, c in _TRIGAMMA_TAIL:
        tail += c / x**p
    return head + tail


def tetragamma(z):
    """Third-order polygamma (derivative of trigamma) at complex z, Re z > 0."""
    z = np.asarray(z, dtype=complex)
    k = np.arange(_SERIES_TERMS)
    head = -2.0 * np.sum((z[..., None] + k) ** -3.0, axis=-1)
    x = z + _SERIES_TERMS
    tail = -1.0 / x**2 - 1.0 / x**3
    for p, c in _TETRAGAMMA_TAIL:
        tail += c / x**p
    return head + tail


def arg_gamma_half_line(y):
    """arg Gamma(1/2 + iy), vectorized over real y."""
    return arg_gamma(0.5 + 1j * np.asarray(y, dtype=float))
