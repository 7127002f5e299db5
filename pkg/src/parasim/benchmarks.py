"""Architecture models compared in the spectral/energy-efficiency sweeps.

Four transmitters share one channel realization and one radiated-power
budget per trial:

* HRP-UPA: the hybrid reconfigurable parasitic planar array, configured
  with the closed-form load reactances and optimal active currents.
* FD-ULA: fully digital linear array, the actives of the same geometry
  with all parasitics removed.
* FD-UPA: fully digital planar array, every element driven; an upper
  bound on the achievable SNR.
* HPS-UPA: sub-connected phase-shifter array, one RF chain per row with
  conjugate-phase shifters on the row's elements.

Each evaluator returns the achieved SNR (computed from the actually
transmitted currents), the spectral efficiency, the consumed power, and
the energy efficiency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .circuit import (DEFAULT_FIXED_RESISTANCE, EffectiveSystem,
                      effective_system)
from .em_model import ArrayGeometry, PartitionedImpedance
from .solver import closed_form_reactance_hybrid, optimal_active_current


@dataclass(frozen=True)
class PowerModel:
    """Component power draws and losses, watts and dB."""

    p_rfc: float = 0.240
    p_ps: float = 0.030
    p_var: float = 0.0
    insertion_loss_db: float = 2.3

    def __post_init__(self):
        if min(self.p_rfc, self.p_ps, self.p_var, self.insertion_loss_db) < 0:
            raise ValueError("power-model entries cannot be negative")

    @property
    def epsilon(self) -> float:
        """Multiplier on the radiated power from phase-shifter insertion loss."""
        return 10.0 ** (self.insertion_loss_db / 10.0)


@dataclass(frozen=True)
class ArchitectureResult:
    snr: float
    se: float
    p_total: float
    ee: float


def metrics(snr: float, p_total: float) -> tuple[float, float]:
    """Spectral efficiency log2(1+SNR) and energy efficiency SE/P_total."""
    if snr < 0:
        raise ValueError("SNR cannot be negative")
    if not p_total > 0:
        raise ValueError("total power must be positive")
    se = float(np.log2(1.0 + snr))
    return se, se / p_total


def total_power(architecture: str, p_max: float, n_active: int,
                n_parasitic_per_active: int, power_model: PowerModel) -> float:
    """Consumed power of one architecture at radiated budget ``p_max``.

    The random-search baseline drives the same hardware as the hybrid
    parasitic array and shares its accounting.
    """
    n_a, n_p = n_active, n_parasitic_per_active
    pm = power_model
    if architecture in ("hrp-upa", "random-baseline"):
        return p_max + n_a * pm.p_rfc + n_a * n_p * pm.p_var
    if architecture == "fd-ula":
        return p_max + n_a * pm.p_rfc
    if architecture == "fd-upa":
        return p_max + n_a * (n_p + 1) * pm.p_rfc
    if architecture == "hps-upa":
        return pm.epsilon * p_max + n_a * pm.p_rfc + n_a * (n_p + 1) * pm.p_ps
    raise ValueError(f"unknown architecture {architecture!r}")


def _result(snr: float, p_total: float) -> ArchitectureResult:
    se, ee = metrics(snr, p_total)
    return ArchitectureResult(snr=snr, se=se, p_total=p_total, ee=ee)


def _achieved_snr(eff: EffectiveSystem, p_max: float, link: float) -> float:
    i_a = optimal_active_current(eff, p_max)
    return float(link * np.abs(i_a @ eff.h_eff) ** 2)


def eval_hrp_upa(z: PartitionedImpedance, geom: ArrayGeometry,
                 ch: ChannelRealization, link: float, p_max: float,
                 power_model: PowerModel,
                 fixed_resistance: float = DEFAULT_FIXED_RESISTANCE
                 ) -> ArchitectureResult:
    """Hybrid parasitic array: closed-form loads, then optimal currents."""
    n_a = z.n_active
    if z.n_parasitic_total == 0:
        return eval_fd_ula(z.z_a, ch, link, p_max, power_model)
    loads = closed_form_reactance_hybrid(ch, z, geom, fixed_resistance)
    eff = effective_system(z, loads, ch)
    snr = _achieved_snr(eff, p_max, link)
    p_total = total_power("hrp-upa", p_max, n_a, z.n_parasitic_per_active,
                          power_model)
    return _result(snr, p_total)


def eval_fd_ula(z_a: np.ndarray, ch: ChannelRealization, link: float,
                p_max: float, power_model: PowerModel) -> ArchitectureResult:
    """Fully digital linear array over the actives-only impedance."""
    n_a = z_a.shape[0]
    eff = EffectiveSystem(h_eff=ch.h_a, z_eff=np.asarray(z_a).real)
    snr = _achieved_snr(eff, p_max, link)
    return _result(snr, total_power("fd-ula", p_max, n_a, 0, power_model))


def eval_fd_upa(z: PartitionedImpedance, ch: ChannelRealization, link: float,
                p_max: float, power_model: PowerModel) -> ArchitectureResult:
    """Fully digital planar array driving every element."""
    n_a = z.n_active
    n_p = z.n_parasitic_per_active
    eff = EffectiveSystem(h_eff=ch.h, z_eff=z.full().real)
    snr = _achieved_snr(eff, p_max, link)
    return _result(snr, total_power("fd-upa", p_max, n_a, n_p, power_model))


def hps_precoder(ch: ChannelRealization, n_active: int,
                 n_parasitic_per_active: int) -> np.ndarray:
    """Row-sparse phase-shifter precoder with conjugate channel phases.

    Row j covers active j plus the parasitic slots of row j; each nonzero
    entry is ``exp(-j angle(h_k))`` for the covered element k.
    """
    n_a, n_p = n_active, n_parasitic_per_active
    f = np.zeros((n_a, n_a * (n_p + 1)), dtype=complex)
    h = ch.h
    for j in range(n_a):
        f[j, j] = np.exp(-1j * np.angle(h[j]))
        for i in range(n_p):
            col = n_a + j * n_p + i
            f[j, col] = np.exp(-1j * np.angle(h[col]))
    return f


def eval_hps_upa(z: PartitionedImpedance, ch: ChannelRealization, link: float,
                 p_max: float, power_model: PowerModel) -> ArchitectureResult:
    """Sub-connected phase-shifter array, one RF chain per row."""
    n_a = z.n_active
    n_p = z.n_parasitic_per_active
    f = hps_precoder(ch, n_a, n_p)
    h_eff = f @ ch.h
    z_eff = f.conj() @ z.full().real @ f.T
    snr = _achieved_snr(EffectiveSystem(h_eff=h_eff, z_eff=z_eff), p_max, link)
    return _result(snr, total_power("hps-upa", p_max, n_a, n_p, power_model))
