"""Shared constants and independent closed-form oracles for the tests.

The impedance oracles use the classical sine/cosine-integral expressions
for half-wave dipoles, an independent route from the quadrature kernel
used by the library.
"""

from __future__ import annotations

import numpy as np
import scipy.constants as const
from scipy.special import sici

import parasim

ETA0 = const.mu_0 * const.c
F_C = 7e9
LAMBDA = const.c / F_C


def si(x: float) -> float:
    return sici(x)[0]


def ci(x: float) -> float:
    return sici(x)[1]


def oracle_self_impedance_thin_halfwave(lam: float) -> complex:
    """Closed-form thin half-wave self impedance via Si/Ci functions."""
    length = lam / 2
    k = 2 * np.pi / lam
    kl = k * length
    gamma = np.euler_gamma
    r = ETA0 / (2 * np.pi) * (
        gamma + np.log(kl) - ci(kl)
        + 0.5 * np.sin(kl) * (si(2 * kl) - 2 * si(kl))
        + 0.5 * np.cos(kl) * (gamma + np.log(kl / 2) + ci(2 * kl) - 2 * ci(kl)))
    x = ETA0 / (4 * np.pi) * (
        2 * si(kl) + np.cos(kl) * (2 * si(kl) - si(2 * kl))
        - np.sin(kl) * (2 * ci(kl) - ci(2 * kl)))
    return r + 1j * x


def oracle_mutual_impedance_halfwave(d: float, lam: float) -> complex:
    """Closed-form side-by-side half-wave mutual impedance via Si/Ci."""
    length = lam / 2
    k = 2 * np.pi / lam
    u0 = k * d
    diag = np.sqrt(d * d + length * length)
    u1 = k * (diag + length)
    u2 = k * (diag - length)
    r = ETA0 / (4 * np.pi) * (2 * ci(u0) - ci(u1) - ci(u2))
    x = -ETA0 / (4 * np.pi) * (2 * si(u0) - si(u1) - si(u2))
    return r + 1j * x


def single_active_geometry(n_parasitic: int, dx_over_lambda: float = 0.4
                           ) -> parasim.ArrayGeometry:
    spec = parasim.DipoleSpec.half_wave(F_C)
    return parasim.ArrayGeometry(
        n_active=1, n_parasitic_per_active=n_parasitic,
        dx=dx_over_lambda * LAMBDA, dy=0.5 * LAMBDA, dipole=spec)
