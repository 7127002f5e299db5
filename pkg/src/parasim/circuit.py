"""Multi-port circuit evaluation for a loaded hybrid array.

Every quantity here is a deterministic function of the impedance blocks,
the load configuration, and (where relevant) a channel realization: the
induced parasitic currents, the far-field beam pattern of a single-active
row, the effective channel and impedance seen by the active ports, the
radiated power, and the receive SNR.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .channel import ChannelRealization, steering_x
from .em_model import ArrayGeometry, PartitionedImpedance
from .errors import GeometryError, ResonanceError

# Reactance used to model an open-circuited (disconnected) parasitic port.
# A large finite value keeps every formula a plain linear solve.
OPEN_CIRCUIT_REACTANCE = 1e9

# condition-number ceiling for (Z_P + Z_R); beyond this double precision
# loses too many digits and the lossless-load model is suspect anyway
RESONANCE_COND_LIMIT = 1e12

DEFAULT_FIXED_RESISTANCE = 0.05


@dataclass(frozen=True)
class LoadConfig:
    """Per-parasitic-element loads: common fixed resistance, tunable reactance.

    ``reactances[i, j]`` is the load reactance of parasitic slot i in the
    row of active antenna j, ohms.
    """

    fixed_resistance: float
    reactances: np.ndarray

    def __post_init__(self):
        if self.fixed_resistance < 0:
            raise ValueError("load resistance cannot be negative")
        if not np.all(np.isfinite(self.reactances)):
            raise ValueError(
                "reactances must be finite; model an open circuit with the "
                "OPEN_CIRCUIT_REACTANCE sentinel")

    @property
    def n_parasitic_per_active(self) -> int:
        return self.reactances.shape[0]

    @property
    def n_active(self) -> int:
        return self.reactances.shape[1]

    def diagonal(self) -> np.ndarray:
        """Complex load diagonal in canonical port order (rows grouped per active)."""
        x = np.ravel(self.reactances, order="F")
        return self.fixed_resistance + 1j * x

    @classmethod
    def open_circuit(cls, n_parasitic_per_active: int, n_active: int,
                     fixed_resistance: float = DEFAULT_FIXED_RESISTANCE
                     ) -> "LoadConfig":
        x = np.full((n_parasitic_per_active, n_active), OPEN_CIRCUIT_REACTANCE)
        return cls(fixed_resistance=fixed_resistance, reactances=x)


@dataclass(frozen=True)
class EffectiveSystem:
    """Channel and impedance seen by the active ports once loads are absorbed."""

    h_eff: np.ndarray
    z_eff: np.ndarray


@dataclass(frozen=True)
class BeamformingSolution:
    """Active currents plus the loads that produced them, with achieved metrics."""

    i_a: np.ndarray
    loads: LoadConfig
    snr: float
    radiated_power: float


def _loaded_network(z: PartitionedImpedance, loads: LoadConfig):
    """LU factorization of (Z_P + Z_R) with a conditioning guard."""
    zp_zr = z.z_p + np.diag(loads.diagonal())
    cond = np.linalg.cond(zp_zr)
    if not np.isfinite(cond) or cond > RESONANCE_COND_LIMIT:
        raise ResonanceError(cond)
    return lu_factor(zp_zr)


def parasitic_currents(z: PartitionedImpedance, loads: LoadConfig,
                       i_a: np.ndarray) -> np.ndarray:
    """Currents induced on the parasitic ports, i_p = -(Z_P + Z_R)^-1 Z_m i_a."""
    if z.n_parasitic_total == 0:
        return np.zeros(0, dtype=complex)
    lu = _loaded_network(z, loads)
    return -lu_solve(lu, z.z_m @ np.asarray(i_a, dtype=complex))


def beam_pattern(theta, z: PartitionedImpedance, loads: LoadConfig,
                 geom: ArrayGeometry):
    """Far-field beam pattern of a single-active row.

    ``G(theta) = |1 - a^T (Z_P + Z_R)^-1 z_m|^2`` with a(theta) the row
    steering vector.  ``theta`` may be a scalar or an array; the network
    factorization is computed once and reused across the sweep.
    """
    if z.n_active != 1:
        raise GeometryError("beam_pattern is defined for a single active antenna")
    lu = _loaded_network(z, loads)
    y = lu_solve(lu, z.z_m[:, 0])
    thetas = np.atleast_1d(np.asarray(theta, dtype=float))
    a = np.stack([steering_x(t, geom) for t in thetas])
    g = np.abs(1.0 - a @ y) ** 2
    return g[0] if np.isscalar(theta) or np.ndim(theta) == 0 else g


def effective_channel(z: PartitionedImpedance, loads: LoadConfig,
                      ch: ChannelRealization) -> np.ndarray:
    """Channel seen by the active currents, h_eff = h_a - Z_m^T (Z_P+Z_R)^-1 h_p."""
    if z.n_parasitic_total == 0:
        return ch.h_a.copy()
    lu = _loaded_network(z, loads)
    return ch.h_a - z.z_m.T @ lu_solve(lu, ch.h_p)


def effective_impedance(z: PartitionedImpedance,
                        loads: LoadConfig) -> np.ndarray:
    """Matrix whose quadratic form in the active currents is the radiated power.

    Four-term expression in the coupling blocks: with B = (Z_P+Z_R)^-1 Z_m,

        Z_eff = Re{Z_A} + B* Re{Z_P} B - Re{Z_m^T} B - B* Re{Z_m}.

    Hermitian by construction; reduces to Re{Z_A} without parasitics.
    """
    if z.n_parasitic_total == 0:
        return z.z_a.real.copy()
    lu = _loaded_network(z, loads)
    b = lu_solve(lu, z.z_m)
    bh = b.conj().T
    return (z.z_a.real + bh @ z.z_p.real @ b
            - z.z_m.T.real @ b - bh @ z.z_m.real)


def effective_system(z: PartitionedImpedance, loads: LoadConfig,
                     ch: ChannelRealization) -> EffectiveSystem:
    return EffectiveSystem(h_eff=effective_channel(z, loads, ch),
                           z_eff=effective_impedance(z, loads))


def radiated_power(z: PartitionedImpedance, loads: LoadConfig,
                   i_a: np.ndarray) -> float:
    """Total radiated power of the full array, block quadratic form in Re{Z_TX}."""
    i_a = np.asarray(i_a, dtype=complex)
    i_p = parasitic_currents(z, loads, i_a)
    i_tx = np.concatenate([i_a, i_p])
    return float(np.real(i_tx.conj() @ z.full().real @ i_tx))


def snr(z: PartitionedImpedance, loads: LoadConfig, i_a: np.ndarray,
        ch: ChannelRealization, link: float) -> float:
    """Receive SNR, link * |i_a^T h_eff|^2."""
    h_eff = effective_channel(z, loads, ch)
    return float(link * np.abs(np.asarray(i_a, dtype=complex) @ h_eff) ** 2)


def currents_from_voltages(z: PartitionedImpedance, loads: LoadConfig,
                           v_a: np.ndarray) -> np.ndarray:
    """Active currents driven by ideal voltage sources at the active ports.

    Solves i_a = (Z_A - Z_m^T (Z_P+Z_R)^-1 Z_m)^-1 v_a, the input impedance
    of the actives with the loaded parasitic network absorbed.
    """
    v_a = np.asarray(v_a, dtype=complex)
    if z.n_parasitic_total == 0:
        return np.linalg.solve(z.z_a, v_a)
    lu = _loaded_network(z, loads)
    z_in = z.z_a - z.z_m.T @ lu_solve(lu, z.z_m)
    cond = np.linalg.cond(z_in)
    if not np.isfinite(cond) or cond > RESONANCE_COND_LIMIT:
        raise ResonanceError(cond)
    return np.linalg.solve(z_in, v_a)
