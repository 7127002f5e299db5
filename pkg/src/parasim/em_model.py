"""Impedance models for linear and planar arrays of parallel dipoles.

Self and mutual impedances are computed with the induced-EMF method for
center-fed thin dipoles carrying a sinusoidal current.  The near-field
kernel is integrated by adaptive quadrature, which keeps the model free
of special-function dependencies and leaves the classical Ci/Si closed
forms available as an independent cross-check in the test suite.

Conventions:
    * dipoles are z-oriented and side-by-side (parallel, same height),
    * active elements sit on the y axis at pitch ``dy``,
    * each active element carries a row of parasitic elements along x at
      pitch ``dx``, with ``floor(n_p/2)`` elements on the negative-x side
      and ``ceil(n_p/2)`` on the positive-x side,
    * port ordering is [actives by y index; parasitics grouped per row,
      x-ascending within each row].
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import IO, Iterable, TextIO

import numpy as np
import scipy.constants as const
from scipy.integrate import quad

from .errors import ConversionError, FormatError, GeometryError, ModelError

# free-space wave impedance, ohms
ETA0 = const.mu_0 * const.c

# quadrature tolerance for the induced-EMF integrals, ohms
QUAD_ABS_TOL = 1e-10

# symmetry / passivity tolerances for imported matrices
SYMMETRY_RTOL = 1e-6
PASSIVITY_RTOL = 1e-8


@dataclass(frozen=True)
class DipoleSpec:
    """Geometry of a single center-fed dipole.

    Parameters
    ----------
    length : float
        Physical dipole length in meters.
    radius : float
        Wire radius in meters.  Must stay well below ``length`` for the
        thin-wire sinusoidal current model to hold; ``radius < length/10``
        is enforced.
    carrier_frequency : float
        Operating frequency in Hz; the wavelength is derived from it.
    """

    length: float
    radius: float
    carrier_frequency: float

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError("dipole length must be positive")
        if not self.radius > 0:
            raise ValueError("dipole radius must be positive")
        if not self.radius < self.length / 10:
            raise ValueError("thin-wire model requires radius < length/10")
        if not self.carrier_frequency > 0:
            raise ValueError("carrier frequency must be positive")

    @property
    def wavelength(self) -> float:
        return const.c / self.carrier_frequency

    @classmethod
    def half_wave(cls, carrier_frequency: float,
                  radius_over_wavelength: float = 1 / 500) -> "DipoleSpec":
        """Half-wave dipole at the given frequency."""
        lam = const.c / carrier_frequency
        return cls(length=lam / 2, radius=lam * radius_over_wavelength,
                   carrier_frequency=carrier_frequency)


@dataclass(frozen=True)
class ArrayGeometry:
    """Hybrid planar array layout.

    ``n_active`` dipoles sit on the y axis at pitch ``dy``.  Each carries
    ``n_parasitic_per_active`` parasitic dipoles along x at pitch ``dx``,
    split floor/ceil between the negative and positive side of the active
    element.  All lengths in meters.
    """

    n_active: int
    n_parasitic_per_active: int
    dx: float
    dy: float
    dipole: DipoleSpec

    def __post_init__(self):
        if self.n_active < 1:
            raise ValueError("need at least one active antenna")
        if self.n_parasitic_per_active < 0:
            raise ValueError("parasitic count cannot be negative")
        if self.n_parasitic_per_active > 0 and not self.dx > 0:
            raise ValueError("dx must be positive when parasitics are present")
        if self.n_active > 1 and not self.dy > 0:
            raise ValueError("dy must be positive for multiple active antennas")

    @property
    def n_parasitic_total(self) -> int:
        return self.n_active * self.n_parasitic_per_active

    @property
    def n_ports(self) -> int:
        return self.n_active + self.n_parasitic_total

    def signed_offsets(self) -> np.ndarray:
        """Signed x position indices of one parasitic row (zero excluded)."""
        n_p = self.n_parasitic_per_active
        return np.array([m for m in range(-(n_p // 2), n_p - n_p // 2 + 1)
                         if m != 0], dtype=int)

    def element_positions(self) -> np.ndarray:
        """(x, y) element centers in canonical port order, meters."""
        pos = [(0.0, j * self.dy) for j in range(self.n_active)]
        offsets = self.signed_offsets()
        for j in range(self.n_active):
            pos.extend((m * self.dx, j * self.dy) for m in offsets)
        return np.array(pos, dtype=float).reshape(self.n_ports, 2)


@dataclass(frozen=True)
class PartitionedImpedance:
    """Hybrid-array impedance matrix split into its named blocks.

    ``z_a`` couples the active ports, ``z_p`` the parasitic ports, and
    ``z_m`` holds the mutual terms between parasitic and active ports
    (shape ``(n_parasitic_total, n_active)``).  All entries in ohms.
    """

    z_a: np.ndarray
    z_m: np.ndarray
    z_p: np.ndarray

    def __post_init__(self):
        n_a = self.z_a.shape[0]
        n_pt = self.z_p.shape[0]
        if self.z_a.shape != (n_a, n_a):
            raise ValueError("z_a must be square")
        if self.z_p.shape != (n_pt, n_pt):
            raise ValueError("z_p must be square")
        if self.z_m.shape != (n_pt, n_a):
            raise ValueError("z_m must be (n_parasitic_total, n_active)")
        if n_a > 0 and n_pt % max(n_a, 1) != 0:
            raise ValueError("parasitic count must divide evenly over rows")

    @property
    def n_active(self) -> int:
        return self.z_a.shape[0]

    @property
    def n_parasitic_total(self) -> int:
        return self.z_p.shape[0]

    @property
    def n_parasitic_per_active(self) -> int:
        return self.n_parasitic_total // self.n_active

    def full(self) -> np.ndarray:
        """Assembled full matrix [[Z_A, Z_m^T], [Z_m, Z_P]]."""
        top = np.hstack([self.z_a, self.z_m.T])
        bot = np.hstack([self.z_m, self.z_p])
        return np.vstack([top, bot])

    def row_coupling(self, j: int) -> np.ndarray:
        """Mutual impedance vector between active j and its own parasitic row."""
        n_p = self.n_parasitic_per_active
        return self.z_m[j * n_p:(j + 1) * n_p, j]


@lru_cache(maxsize=131072)
def _field_integral(rho: float, length: float, wavelength: float,
                    part: str) -> float:
    """One component of the induced-EMF field integral.

    Integrates the requested part ("re" or "im") of the axial near field
    of a sinusoidal-current dipole against the current distribution of an
    identical parallel dipole displaced side-by-side by ``rho``.
    """
    h = length / 2
    k = 2 * np.pi / wavelength
    cos_kh = np.cos(k * h)

    def integrand(z: float) -> complex:
        r1 = np.sqrt(rho * rho + (z - h) ** 2)
        r2 = np.sqrt(rho * rho + (z + h) ** 2)
        r0 = np.sqrt(rho * rho + z * z)
        field = (np.exp(-1j * k * r1) / r1 + np.exp(-1j * k * r2) / r2
                 - 2 * cos_kh * np.exp(-1j * k * r0) / r0)
        return field * np.sin(k * (h - abs(z)))

    pick = (lambda z: integrand(z).real) if part == "re" \
        else (lambda z: integrand(z).imag)
    # integrand is even in z; integrate the half range and double
    value, _ = quad(pick, 0.0, h, epsabs=QUAD_ABS_TOL, limit=400)
    if not np.isfinite(value):
        raise ModelError(f"induced-EMF integral diverged (rho={rho!r})")
    return 2.0 * value


def _feed_scale(length: float, wavelength: float) -> float:
    sin_kh = np.sin(np.pi * length / wavelength)
    if abs(sin_kh) < 1e-12:
        raise ModelError("feed current vanishes for a full-wave dipole")
    return ETA0 / (4 * np.pi) / sin_kh**2


def _cached_kernel(rho: float, length: float, wavelength: float) -> complex:
    """Full induced-EMF impedance at lateral distance ``rho``, ohms."""
    scale = _feed_scale(length, wavelength)
    i_re = _field_integral(rho, length, wavelength, "re")
    i_im = _field_integral(rho, length, wavelength, "im")
    # impedance carries a factor j: Re Z = -scale*Im I, Im Z = scale*Re I
    return complex(-scale * i_im, scale * i_re)


def dipole_self_impedance(spec: DipoleSpec) -> complex:
    """Self impedance of a center-fed dipole, ohms.

    The finite wire radius enters through the standard equivalent-radius
    reactance correction: the resistive part uses the filamentary kernel
    (it is radius-insensitive and stays consistent with the mutual terms
    in the small-separation limit), while the reactive part evaluates the
    kernel at a lateral distance equal to the wire radius, lowering the
    reactance relative to the filamentary limit.
    """
    scale = _feed_scale(spec.length, spec.wavelength)
    r = -scale * _field_integral(0.0, spec.length, spec.wavelength, "im")
    x = scale * _field_integral(spec.radius, spec.length, spec.wavelength, "re")
    if r <= 0:
        raise ModelError(f"non-physical self resistance {r:.3e} ohm")
    return complex(r, x)


def dipole_mutual_impedance(spec: DipoleSpec, separation: float) -> complex:
    """Mutual impedance of two identical side-by-side dipoles, ohms.

    Uses the filamentary (zero-radius) kernel; radius corrections to the
    mutual terms are negligible at separations of practical interest.
    """
    if not separation > 0:
        raise GeometryError(
            "separation must be positive; use dipole_self_impedance for "
            "the self term")
    return _cached_kernel(float(separation), spec.length, spec.wavelength)


def impedance_from_positions(positions: np.ndarray,
                             spec: DipoleSpec) -> np.ndarray:
    """Full impedance matrix for parallel dipoles at the given (x, y) centers."""
    pos = np.asarray(positions, dtype=float)
    n = pos.shape[0]
    z = np.empty((n, n), dtype=complex)
    z_self = dipole_self_impedance(spec)
    for i in range(n):
        z[i, i] = z_self
        for j in range(i + 1, n):
            d = float(np.hypot(pos[i, 0] - pos[j, 0], pos[i, 1] - pos[j, 1]))
            if d == 0.0:
                raise GeometryError(
                    f"elements {i} and {j} occupy the same position")
            # merge distances equal to within a picometer so the kernel
            # cache is hit for symmetric layouts
            z[i, j] = z[j, i] = _cached_kernel(
                round(d, 12), spec.length, spec.wavelength)
    return z


def assemble_impedance(geom: ArrayGeometry) -> PartitionedImpedance:
    """Impedance matrix of the hybrid array in canonical port order."""
    z = impedance_from_positions(geom.element_positions(), geom.dipole)
    n_a = geom.n_active
    return PartitionedImpedance(z_a=z[:n_a, :n_a], z_m=z[n_a:, :n_a],
                                z_p=z[n_a:, n_a:])


def scattering_to_impedance(s: np.ndarray, z0: float) -> np.ndarray:
    """Convert a scattering matrix to an impedance matrix, Z = z0 (I-S)^-1 (I+S)."""
    s = np.asarray(s, dtype=complex)
    n = s.shape[0]
    eye = np.eye(n)
    try:
        z = z0 * np.linalg.solve(eye - s, eye + s)
    except np.linalg.LinAlgError as exc:
        raise ConversionError("(I - S) is singular") from exc
    return z


def impedance_to_scattering(z: np.ndarray, z0: float) -> np.ndarray:
    """Inverse of :func:`scattering_to_impedance`, S = (Z - z0 I)(Z + z0 I)^-1."""
    z = np.asarray(z, dtype=complex)
    n = z.shape[0]
    eye = np.eye(n)
    try:
        s = np.linalg.solve((z + z0 * eye).T, (z - z0 * eye).T).T
    except np.linalg.LinAlgError as exc:
        raise ConversionError("(Z + z0 I) is singular") from exc
    return s


_HEADER_RE = re.compile(
    r"^# zmatrix v1 n_active=(\d+) n_parasitic=(\d+) z0=([-+0-9.eE]+)\s*$")


def _format_entry(v: complex) -> str:
    return f"{v.real:.17g}{v.imag:+.17g}j"


def export_impedance(z: PartitionedImpedance, file: str | TextIO,
                     z0: float = 50.0) -> None:
    """Write a partitioned impedance matrix in the zmatrix v1 text format.

    One header line carrying the block sizes and reference impedance,
    then one line per full-matrix row with entries ``re+imj`` separated
    by single spaces.  Values round-trip bit-exactly.
    """
    full = z.full()
    lines = [f"# zmatrix v1 n_active={z.n_active} "
             f"n_parasitic={z.n_parasitic_per_active} z0={z0:.17g}"]
    lines.extend(" ".join(_format_entry(v) for v in row) for row in full)
    text = "\n".join(lines) + "\n"
    if isinstance(file, str):
        with open(file, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        file.write(text)


def _read_lines(file: str | IO) -> Iterable[str]:
    if isinstance(file, str):
        with open(file, "r", encoding="utf-8") as fh:
            return fh.read().splitlines()
    return file.read().splitlines()


def import_impedance(file: str | TextIO) -> PartitionedImpedance:
    """Read a zmatrix v1 file and validate it as a passive reciprocal network.

    Raises
    ------
    FormatError
        On a malformed header, inconsistent dimensions, asymmetry beyond
        1e-6 relative, or a real part that is not positive semidefinite.
    """
    lines = [ln for ln in _read_lines(file) if ln.strip()]
    if not lines:
        raise FormatError("empty impedance file")
    m = _HEADER_RE.match(lines[0])
    if m is None:
        raise FormatError(f"bad header line: {lines[0]!r}")
    n_a, n_p = int(m.group(1)), int(m.group(2))
    float(m.group(3))  # z0 is recorded but not needed to rebuild Z
    n = n_a + n_a * n_p
    rows = lines[1:]
    if len(rows) != n:
        raise FormatError(
            f"expected {n} matrix rows for n_active={n_a}, "
            f"n_parasitic={n_p}; found {len(rows)}")
    z = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        entries = row.split()
        if len(entries) != n:
            raise FormatError(f"row {i} has {len(entries)} entries, expected {n}")
        try:
            z[i] = [complex(e) for e in entries]
        except ValueError as exc:
            raise FormatError(f"row {i}: unparseable entry ({exc})") from exc

    scale = max(np.abs(z).max(), 1.0)
    asym = np.abs(z - z.T).max()
    if asym > SYMMETRY_RTOL * scale:
        raise FormatError(
            f"matrix is not reciprocal: max asymmetry {asym:.3e} ohm")
    re_sym = (z.real + z.real.T) / 2
    eigs = np.linalg.eigvalsh(re_sym)
    bound = -PASSIVITY_RTOL * np.linalg.norm(re_sym, 2)
    if eigs.min() < bound:
        raise FormatError(
            f"matrix is not passive: min Re-part eigenvalue {eigs.min():.3e}")
    return PartitionedImpedance(z_a=z[:n_a, :n_a], z_m=z[n_a:, :n_a],
                                z_p=z[n_a:, n_a:])
