"""Closed-form and numerical beamforming solvers for the parasitic array.

The closed forms follow the Lorentzian-weight route: the diagonal part of
the parasitic network and the load combine into a per-element weight
whose magnitude and phase are coupled on a circle; a shift of origin
exposes a free unit-modulus phase, alignment of which maximizes the
diagonal-approximation beam pattern.  The phase then maps back to a load
reactance through a one-to-one tangent relation.

Numerical references live here as well: a multistart coordinate-wise
golden-section oracle for the single-active problem and a random-search
baseline for the hybrid pipeline.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, steering_x
from .circuit import (DEFAULT_FIXED_RESISTANCE, OPEN_CIRCUIT_REACTANCE,
                      BeamformingSolution, EffectiveSystem, LoadConfig,
                      effective_system, radiated_power)
from .em_model import ArrayGeometry, PartitionedImpedance
from .errors import GeometryError, ResonanceError, SolverError

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LorentzianWeight:
    """Feasible parasitic beamforming weight in polar form.

    The weight value is ``zeta * cos(varphi) * exp(j varphi)``; its locus
    over varphi in [-pi/2, pi/2] is the circle of radius 1/2 centered at
    (1/2, 0) after normalization by zeta.  ``phase_phi`` is the unfolded
    unit-modulus phase, exactly twice varphi.
    """

    zeta: float
    phase_varphi: float

    def __post_init__(self):
        if not self.zeta > 0:
            raise ValueError("zeta must be positive")
        if abs(self.phase_varphi) > np.pi / 2 + 1e-12:
            raise ValueError("varphi must lie in [-pi/2, pi/2]")

    @property
    def phase_phi(self) -> float:
        return 2.0 * self.phase_varphi

    @property
    def value(self) -> complex:
        return self.zeta * np.cos(self.phase_varphi) \
            * np.exp(1j * self.phase_varphi)


@dataclass(frozen=True)
class ApproxObjective:
    """Diagonal/hollow split of the parasitic block with the weight matrix.

    ``d_p + e_p`` reassembles Z_P exactly and ``w_matrix`` is the inverse
    of ``d_p + Z_R``.
    """

    d_p: np.ndarray
    e_p: np.ndarray
    w_matrix: np.ndarray

    @classmethod
    def from_loads(cls, z: PartitionedImpedance,
                   loads: LoadConfig) -> "ApproxObjective":
        d = np.diag(np.diag(z.z_p))
        w = np.diag(1.0 / (np.diag(z.z_p) + loads.diagonal()))
        return cls(d_p=d, e_p=z.z_p - d, w_matrix=w)

    @property
    def weights(self) -> np.ndarray:
        return np.diag(self.w_matrix)


def _common_parasitic_constants(z: PartitionedImpedance,
                                fixed_resistance: float) -> tuple[float, float]:
    """Common (zeta, self-reactance) under the identical-element assumption."""
    diag = np.diag(z.z_p)
    r_p = float(np.mean(diag.real))
    x_p = float(np.mean(diag.imag))
    return 1.0 / (r_p + fixed_resistance), x_p


def reactance_to_weight(loads: LoadConfig,
                        z: PartitionedImpedance) -> list[LorentzianWeight]:
    """Lorentzian weight of every parasitic port in canonical order."""
    diag_zp = np.diag(z.z_p)
    out = []
    for zpk, load in zip(diag_zp, loads.diagonal()):
        denom = zpk + load
        zeta_k = 1.0 / (zpk.real + load.real)
        varphi = np.arctan(-denom.imag / denom.real)
        out.append(LorentzianWeight(zeta=zeta_k, phase_varphi=varphi))
    return out


def weight_to_reactance(weight: LorentzianWeight, z: PartitionedImpedance,
                        port: int = 0) -> float:
    """Load reactance realizing the given weight at a parasitic port.

    ``x = -Im{Z_P} - tan(varphi)/zeta``; a weight phase at the +-pi/2
    boundary has no finite realization and maps to the open-circuit
    sentinel with a warning.
    """
    x_p = float(z.z_p[port, port].imag)
    if abs(abs(weight.phase_varphi) - np.pi / 2) < 1e-12:
        warnings.warn("weight phase at +-pi/2 maps to an open circuit",
                      RuntimeWarning, stacklevel=2)
        return OPEN_CIRCUIT_REACTANCE
    return -x_p - np.tan(weight.phase_varphi) / weight.zeta


def approx_beam_pattern(theta: float, w: np.ndarray, z: PartitionedImpedance,
                        geom: ArrayGeometry) -> float:
    """Diagonal-approximation beam pattern, |1 - a^T (w o z_m)|^2."""
    if z.n_active != 1:
        raise GeometryError("approximate pattern is defined for one active antenna")
    a = steering_x(theta, geom)
    return float(np.abs(1.0 - a @ (np.asarray(w) * z.z_m[:, 0])) ** 2)


def _aligned_phase_terms(target_terms: np.ndarray, chi1: complex
                         ) -> tuple[np.ndarray, np.ndarray]:
    """Phases aligning each rotating term with chi1, wrapped to (-pi, pi].

    ``target_terms[i]`` is the complex coefficient multiplying the free
    phase of element i (steering entry times coupling, possibly channel
    weighted).  Entries with zero coefficient are flagged and get phase 0.
    """
    dead = np.abs(target_terms) == 0.0
    if np.any(dead):
        warnings.warn("element with zero coupling: phase undefined, set to 0",
                      RuntimeWarning, stacklevel=3)
    raw = np.angle(chi1) - np.angle(target_terms) + np.pi
    phi = np.angle(np.exp(1j * raw))
    phi[dead] = 0.0
    return phi, dead


def closed_form_phase(theta1: float, z: PartitionedImpedance,
                      geom: ArrayGeometry,
                      fixed_resistance: float = DEFAULT_FIXED_RESISTANCE
                      ) -> np.ndarray:
    """Optimal unit-modulus phases for the single-active diagonal objective.

    Each phase is the argument of the load-independent term minus the
    argument of that element's steering/coupling product, offset by an
    odd multiple of pi; the representative in (-pi, pi] is returned.
    """
    if z.n_active != 1:
        raise GeometryError("closed_form_phase is defined for one active antenna")
    zeta, _ = _common_parasitic_constants(z, fixed_resistance)
    a = steering_x(theta1, geom)
    z_m = z.z_m[:, 0]
    chi1 = 1.0 - zeta / 2.0 * (a @ z_m)
    phi, _ = _aligned_phase_terms(a * z_m, chi1)
    return phi


def _cot_form_reactances(u: np.ndarray, zeta: float, x_p: float) -> np.ndarray:
    """Reactances -x_p - cot(u/2)/zeta with open-circuit handling at u = 0 mod 2pi."""
    s = np.sin(u / 2.0)
    singular = np.abs(s) < 1e-12
    if np.any(singular):
        warnings.warn("cotangent argument at a multiple of pi: element mapped "
                      "to the open-circuit sentinel", RuntimeWarning,
                      stacklevel=3)
    x = np.empty_like(u)
    ok = ~singular
    x[ok] = -x_p - (np.cos(u[ok] / 2.0) / s[ok]) / zeta
    x[singular] = OPEN_CIRCUIT_REACTANCE
    return x


def closed_form_reactance_los(theta1: float, z: PartitionedImpedance,
                              geom: ArrayGeometry,
                              fixed_resistance: float = DEFAULT_FIXED_RESISTANCE
                              ) -> LoadConfig:
    """Closed-form load reactances steering a single-active row to theta1.

    The common ``-Im{Z_P}`` term cancels the parasitic self reactance for
    every element; the element-dependent part is a cotangent of half the
    phase mismatch between the coupling product and the load-independent
    term.  Exact for one parasitic element, near-optimal for two.
    """
    if z.n_active != 1:
        raise GeometryError("LOS closed form is defined for one active antenna")
    zeta, x_p = _common_parasitic_constants(z, fixed_resistance)
    a = steering_x(theta1, geom)
    z_m = z.z_m[:, 0]
    chi1 = 1.0 - zeta / 2.0 * (a @ z_m)
    u = np.angle(a * z_m) - np.angle(chi1)
    x = _cot_form_reactances(u, zeta, x_p)
    return LoadConfig(fixed_resistance=fixed_resistance,
                      reactances=x.reshape(-1, 1))


def closed_form_reactance_hybrid(ch: ChannelRealization,
                                 z: PartitionedImpedance,
                                 geom: ArrayGeometry,
                                 fixed_resistance: float = DEFAULT_FIXED_RESISTANCE
                                 ) -> LoadConfig:
    """Per-row closed-form load reactances for the hybrid array.

    The reactance optimization decouples into one sub-problem per active
    row; each row reuses the single-active solution with its steering
    vector replaced by the row's parasitic channel normalized by the
    row's active channel entry.  Rows with a vanishing active channel are
    open-circuited and flagged, since their sub-objective is scale-free.
    """
    n_a, n_p = z.n_active, z.n_parasitic_per_active
    zeta, x_p = _common_parasitic_constants(z, fixed_resistance)
    x = np.empty((n_p, n_a))
    for j in range(n_a):
        h_aj = ch.h_a[j]
        if abs(h_aj) < 1e-12:
            warnings.warn(f"active row {j} has a vanishing channel entry; "
                          "its parasitics are open-circuited", RuntimeWarning,
                          stacklevel=2)
            x[:, j] = OPEN_CIRCUIT_REACTANCE
            continue
        h_pj = ch.h_p[j * n_p:(j + 1) * n_p]
        z_mj = z.row_coupling(j)
        chi1 = 1.0 - zeta / (2.0 * h_aj) * (h_pj @ z_mj)
        u = np.angle(h_pj * z_mj / h_aj) - np.angle(chi1)
        x[:, j] = _cot_form_reactances(u, zeta, x_p)
    return LoadConfig(fixed_resistance=fixed_resistance, reactances=x)


def optimal_active_current(eff: EffectiveSystem, p_max: float) -> np.ndarray:
    """Power-constrained active currents maximizing |i^T h_eff|^2.

    ``i = sqrt(P) Z_eff^-1 conj(h_eff) / ||Z_eff^-1/2 conj(h_eff)||``
    evaluated through the eigendecomposition of the Hermitian part of
    Z_eff, which makes the power constraint tight to round-off.
    """
    z_h = (eff.z_eff + eff.z_eff.conj().T) / 2.0
    w, v = np.linalg.eigh(z_h)
    w_max = float(np.max(np.abs(w))) if w.size else 0.0
    if w.size == 0 or w.min() <= 1e-9 * w_max:
        raise SolverError(
            f"effective impedance is not positive definite "
            f"(min eigenvalue {w.min() if w.size else float('nan'):.3e})")
    y = v.conj().T @ eff.h_eff.conj()
    quad = float(np.real(y.conj() @ (y / w)))
    if quad <= 0:
        raise SolverError("effective channel is orthogonal to every mode")
    return np.sqrt(p_max) * (v @ (y / w)) / np.sqrt(quad)


@dataclass(frozen=True)
class OracleConfig:
    """Settings for the multistart golden-section reference optimizer."""

    multistarts: int = 64
    lower: float = -1000.0
    upper: float = 1000.0
    tol_ohm: float = 1e-3
    max_sweeps: int = 60
    seed: int = 0
    include_closed_form_start: bool = True


def _gain_batch(a: np.ndarray, z_p: np.ndarray, z_m: np.ndarray,
                fixed_resistance: float, x: np.ndarray) -> np.ndarray:
    """Beam pattern for a batch of reactance vectors x of shape (m, n_p)."""
    m, n = x.shape
    mats = np.broadcast_to(z_p, (m, n, n)).copy()
    idx = np.arange(n)
    mats[:, idx, idx] += fixed_resistance + 1j * x
    rhs = np.broadcast_to(z_m[:, None], (m, n, 1))
    y = np.linalg.solve(mats, rhs)[..., 0]
    return np.abs(1.0 - y @ a) ** 2


def numerical_oracle_los(theta1: float, z: PartitionedImpedance,
                         geom: ArrayGeometry,
                         config: OracleConfig | None = None,
                         fixed_resistance: float = DEFAULT_FIXED_RESISTANCE
                         ) -> LoadConfig:
    """Best-effort reference optimizer for the single-active beam pattern.

    Runs coordinate-wise golden-section refinement of the true pattern
    from ``multistarts`` random starting points (plus, by default, the
    closed-form solution clipped into the search box), all advanced in
    lock-step as a vectorized batch.  Deterministic for a fixed seed.
    """
    cfg = config or OracleConfig()
    if z.n_active != 1:
        raise GeometryError("oracle is defined for one active antenna")
    n_p = z.n_parasitic_per_active
    if not 1 <= n_p <= 6:
        raise GeometryError("oracle supports 1 to 6 parasitic elements")
    if cfg.multistarts < 1:
        raise ValueError("need at least one start")

    a = steering_x(theta1, geom)
    z_m = z.z_m[:, 0]
    lo, hi = cfg.lower, cfg.upper
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 0)))
    x = rng.uniform(lo, hi, size=(cfg.multistarts, n_p))
    if cfg.include_closed_form_start:
        x_cf = closed_form_reactance_los(
            theta1, z, geom, fixed_resistance).reactances[:, 0]
        x = np.vstack([x, np.clip(x_cf, lo, hi)])
    f = _gain_batch(a, z.z_p, z_m, fixed_resistance, x)

    n_iter = int(np.ceil(np.log(cfg.tol_ohm / (hi - lo)) / np.log(_INVPHI)))
    for _ in range(cfg.max_sweeps):
        moved = 0.0
        for i in range(n_p):
            lo_v = np.full(len(x), lo)
            hi_v = np.full(len(x), hi)
            c = hi_v - (hi_v - lo_v) * _INVPHI
            d = lo_v + (hi_v - lo_v) * _INVPHI
            xc = x.copy()
            xd = x.copy()
            for _ in range(n_iter):
                xc[:, i] = c
                xd[:, i] = d
                fc = _gain_batch(a, z.z_p, z_m, fixed_resistance, xc)
                fd = _gain_batch(a, z.z_p, z_m, fixed_resistance, xd)
                keep_left = fc > fd
                hi_v = np.where(keep_left, d, hi_v)
                lo_v = np.where(keep_left, lo_v, c)
                c = hi_v - (hi_v - lo_v) * _INVPHI
                d = lo_v + (hi_v - lo_v) * _INVPHI
            x_mid = (lo_v + hi_v) / 2.0
            x_new = x.copy()
            x_new[:, i] = x_mid
            f_new = _gain_batch(a, z.z_p, z_m, fixed_resistance, x_new)
            better = f_new >= f
            moved = max(moved, float(np.max(np.where(
                better, np.abs(x_mid - x[:, i]), 0.0), initial=0.0)))
            x[better, i] = x_mid[better]
            f = np.where(better, f_new, f)
        if moved < cfg.tol_ohm:
            break
    best = int(np.argmax(f))
    return LoadConfig(fixed_resistance=fixed_resistance,
                      reactances=x[best].reshape(-1, 1))


def beam_pattern_reference(theta: float, z: PartitionedImpedance,
                           geom: ArrayGeometry,
                           config: OracleConfig | None = None,
                           fixed_resistance: float = DEFAULT_FIXED_RESISTANCE
                           ) -> tuple[float, float]:
    """True beam pattern at closed-form loads and at the oracle optimum."""
    from .circuit import beam_pattern
    loads_cf = closed_form_reactance_los(theta, z, geom, fixed_resistance)
    loads_or = numerical_oracle_los(theta, z, geom, config, fixed_resistance)
    return (float(beam_pattern(theta, z, loads_cf, geom)),
            float(beam_pattern(theta, z, loads_or, geom)))


def random_search_baseline(ch: ChannelRealization, z: PartitionedImpedance,
                           geom: ArrayGeometry, budget: int,
                           seed: int | tuple, p_max: float, link: float,
                           fixed_resistance: float = DEFAULT_FIXED_RESISTANCE,
                           lower: float = -1000.0, upper: float = 1000.0
                           ) -> BeamformingSolution:
    """Best of ``budget`` random load draws, each with optimal active currents.

    Stands in for iterative pattern-alignment baselines: loads are drawn
    uniformly over the search box and scored by the achieved SNR under
    the radiated power constraint.  Deterministic for a fixed seed; pass
    a tuple key to split streams across Monte Carlo trials.
    """
    if budget < 1:
        raise ValueError("budget must be at least one draw")
    n_a, n_p = z.n_active, z.n_parasitic_per_active
    key = seed if isinstance(seed, tuple) else (seed, 0)
    rng = np.random.default_rng(np.random.SeedSequence(key))
    best: BeamformingSolution | None = None
    for _ in range(budget):
        x = rng.uniform(lower, upper, size=(n_p, n_a))
        loads = LoadConfig(fixed_resistance=fixed_resistance, reactances=x)
        try:
            eff = effective_system(z, loads, ch)
            i_a = optimal_active_current(eff, p_max)
        except (SolverError, ResonanceError):
            continue
        value = float(link * np.abs(i_a @ eff.h_eff) ** 2)
        if best is None or value > best.snr:
            best = BeamformingSolution(
                i_a=i_a, loads=loads, snr=value,
                radiated_power=radiated_power(z, loads, i_a))
    if best is None:
        raise SolverError("every random draw failed the definiteness check")
    return best
