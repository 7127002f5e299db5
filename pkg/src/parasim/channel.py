"""Steering vectors, multipath channel realizations, and the link budget."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .em_model import ArrayGeometry, DipoleSpec


@dataclass(frozen=True)
class PathSet:
    """Complex gains and departure angles of a geometric multipath channel."""

    alphas: np.ndarray
    thetas: np.ndarray

    def __post_init__(self):
        if len(self.alphas) != len(self.thetas) or len(self.alphas) < 1:
            raise ValueError("need at least one path with matching gain/angle")
        if not np.all(np.isfinite(self.alphas)):
            raise ValueError("path gains must be finite")

    @property
    def n_paths(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class ChannelRealization:
    """Small-scale channel seen by the active and parasitic ports."""

    h_a: np.ndarray
    h_p: np.ndarray

    @property
    def h(self) -> np.ndarray:
        return np.concatenate([self.h_a, self.h_p])


@dataclass(frozen=True)
class LinkBudget:
    """Large-scale link parameters entering the SNR scale factor.

    The radiation resistance is kept as an independent constant rather
    than being derived from the dipole model; it multiplies the receive
    power transfer in the link constant.
    """

    range_m: float = 250.0
    bandwidth_hz: float = 20e6
    antenna_temperature_k: float = 300.0
    radiation_resistance_ohm: float = 95.5
    boltzmann_j_per_k: float = 1.38e-23

    def __post_init__(self):
        for name in ("range_m", "bandwidth_hz", "antenna_temperature_k",
                     "radiation_resistance_ohm", "boltzmann_j_per_k"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


def steering_x(theta: float, geom: ArrayGeometry) -> np.ndarray:
    """Steering vector of one parasitic row along x.

    Entry k has phase ``2*pi*m_k*(dx/lambda)*sin(theta)`` where ``m_k``
    is the signed position index of the element (zero excluded, asymmetric
    floor/ceil split around the active element).
    """
    if geom.n_parasitic_per_active < 1:
        raise ValueError("steering_x needs at least one parasitic element")
    m = geom.signed_offsets()
    lam = geom.dipole.wavelength
    return np.exp(1j * 2 * np.pi * m * geom.dx * np.sin(theta) / lam)


def steering_y(theta: float, geom: ArrayGeometry) -> np.ndarray:
    """Steering vector of the active column along y.

    Entry k (k = 0 .. n_active-1) has phase ``-2*pi*k*(dy/lambda)*cos(theta)``;
    the first entry is exactly 1.
    """
    k = np.arange(geom.n_active)
    lam = geom.dipole.wavelength
    return np.exp(-1j * 2 * np.pi * k * geom.dy * np.cos(theta) / lam)


def multipath_channel(paths: PathSet, geom: ArrayGeometry) -> ChannelRealization:
    """Channel realization h = [h_a; h_p] for the hybrid planar array.

    h_a sums ``alpha_l * a_y(theta_l)`` over paths and h_p sums
    ``alpha_l * kron(a_y, a_x)(theta_l)``, both normalized by 1/sqrt(L).
    The Kronecker ordering groups parasitics per active row, matching the
    canonical port ordering.
    """
    n_a = geom.n_active
    n_pt = geom.n_parasitic_total
    h_a = np.zeros(n_a, dtype=complex)
    h_p = np.zeros(n_pt, dtype=complex)
    for alpha, theta in zip(paths.alphas, paths.thetas):
        a_y = steering_y(theta, geom)
        h_a += alpha * a_y
        if n_pt:
            h_p += alpha * np.kron(a_y, steering_x(theta, geom))
    scale = 1.0 / np.sqrt(paths.n_paths)
    return ChannelRealization(h_a=h_a * scale, h_p=h_p * scale)


def sample_paths(n_paths: int, key: int | tuple) -> PathSet:
    """Draw a path set with theta ~ U[-pi, pi] and alpha ~ CN(0, 1).

    ``key`` seeds a ``numpy.random.SeedSequence``; pass a tuple such as
    ``(seed, trial_index)`` to split reproducible, order-independent
    streams across Monte Carlo trials.  The generator is PCG64 as
    constructed by ``numpy.random.default_rng``.
    """
    if n_paths < 1:
        raise ValueError("need at least one path")
    rng = np.random.default_rng(np.random.SeedSequence(key))
    thetas = rng.uniform(-np.pi, np.pi, size=n_paths)
    alphas = (rng.standard_normal(n_paths)
              + 1j * rng.standard_normal(n_paths)) / np.sqrt(2)
    return PathSet(alphas=alphas, thetas=thetas)


def link_constant(budget: LinkBudget, spec: DipoleSpec) -> float:
    """SNR per squared current-channel product, (lam/4 pi r)^2 R_r / (4 kB T BW)."""
    lam = spec.wavelength
    spreading = (lam / (4 * np.pi * budget.range_m)) ** 2
    noise = 4 * budget.boltzmann_j_per_k * budget.antenna_temperature_k \
        * budget.bandwidth_hz
    return spreading * budget.radiation_resistance_ohm / noise
