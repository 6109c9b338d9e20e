"""Defect fine structure and strain-mediated spin-coupling calculators.

Covers the group-IV-defect calculations behind the phonon-spin interface:

* transformation of strain tensors from cubic crystal axes into the
  defect frame (z along [111], x along [-1-12], y along [-110]),
* longitudinal/transverse strain couplings (alpha, beta, gamma),
* the 4x4 fine-structure Hamiltonian in {ey_up, ey_dn, ex_up, ex_dn},
  its closed-form eigensystem, and the strain Hamiltonians in the
  eigenbasis,
* effective phonon-spin couplings for the quasi-static-field, microwave
  and optical-Raman control schemes, and
* conversion of sampled strain-field maps into coupling maps.

Unit conventions: strains dimensionless, susceptibilities in Hz/strain,
fine-structure energies in GHz, control-scheme frequencies in MHz.
Note: quasi-static coupling estimates for these defects are often quoted
at the ~5 MHz/T scale, while the closed formula with the default
constants gives ~12 MHz/T; treat such figures as order-of-magnitude.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .hilbert import CompositeSpace, destroy, embed, kron, number_op, projector
from .lindblad import IntegratorConfig, TimeDependentHamiltonian, evolve
from .units import TWO_PI

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)
SQRT6 = np.sqrt(6.0)

# defect frame axes expressed in cubic coordinates [100],[010],[001]
DEFECT_X = np.array([-1.0, -1.0, 2.0]) / SQRT6
DEFECT_Y = np.array([-1.0, 1.0, 0.0]) / SQRT2
DEFECT_Z = np.array([1.0, 1.0, 1.0]) / SQRT3


@dataclass(frozen=True)
class DefectStrainComponents:
    """Strain combinations in the defect frame.

    The four transverse entries feed beta and gamma; the two extra
    longitudinal ones exist only for alpha.
    """

    eps_xx_minus_yy: float
    eps_zx: float
    eps_xy: float
    eps_yz: float
    eps_xx_plus_yy: float = 0.0
    eps_zz: float = 0.0


@dataclass(frozen=True)
class SusceptibilityConstants:
    """Strain susceptibilities in Hz per unit strain (defaults 1 PHz)."""

    t_parallel: float = 1.0e15
    t_perp: float = 1.0e15
    d: float = 1.0e15
    f: float = 1.0e15

    def __post_init__(self):
        if min(self.t_parallel, self.t_perp, self.d, self.f) <= 0:
            raise ValueError("susceptibility constants must be positive")


def cubic_to_defect(eps: np.ndarray, tol: float = 1e-12) -> DefectStrainComponents:
    """Transform a symmetric strain tensor from cubic axes to the defect frame.

    The four transverse combinations are evaluated in their general
    (non-symmetrized) form; for symmetric input both orderings coincide.
    """
    e = np.asarray(eps, dtype=float)
    if e.shape != (3, 3):
        raise ValueError(f"strain tensor must be 3x3, got {e.shape}")
    scale = max(1.0, float(np.max(np.abs(e))))
    if np.max(np.abs(e - e.T)) > tol * scale:
        raise ValueError("strain tensor must be symmetric")

    exx_minus_yy = (
        -e[0, 0] - e[1, 1] + 2 * e[2, 2]
        + 2 * (e[0, 1] + e[1, 0])
        - (e[0, 2] + e[2, 0])
        - (e[1, 2] + e[2, 1])
    ) / 3.0
    ezx = -(
        e[0, 0] + e[1, 1] - 2 * e[2, 2]
        - 2 * e[0, 2] - 2 * e[1, 2]
        + e[0, 1] + e[1, 0] + e[2, 0] + e[2, 1]
    ) / (3.0 * SQRT2)
    exy = (
        e[0, 0] - e[0, 1] + e[1, 0] - e[1, 1] - 2 * e[2, 0] + 2 * e[2, 1]
    ) / (2.0 * SQRT3)
    eyz = (
        -e[0, 0] - e[0, 1] - e[0, 2] + e[1, 0] + e[1, 1] + e[1, 2]
    ) / SQRT6

    ezz = float(DEFECT_Z @ e @ DEFECT_Z)
    exx_plus_yy = float(np.trace(e)) - ezz
    return DefectStrainComponents(
        eps_xx_minus_yy=float(exx_minus_yy),
        eps_zx=float(ezx),
        eps_xy=float(exy),
        eps_yz=float(eyz),
        eps_xx_plus_yy=exx_plus_yy,
        eps_zz=ezz,
    )


def strain_components(
    defect: DefectStrainComponents,
    constants: SusceptibilityConstants = SusceptibilityConstants(),
) -> tuple[float, float, float]:
    """Longitudinal and transverse couplings (alpha, beta, gamma) in Hz.

    alpha uniformly shifts the fine-structure levels and is unused by
    the coupling schemes downstream.
    """
    alpha = (constants.t_perp * defect.eps_xx_plus_yy
             + constants.t_parallel * defect.eps_zz)
    beta = constants.d * defect.eps_xx_minus_yy + constants.f * defect.eps_zx
    gamma = -2.0 * constants.d * defect.eps_xy + constants.f * defect.eps_yz
    return float(alpha), float(beta), float(gamma)


# --- fine structure ---------------------------------------------------------

@dataclass
class FineStructureConfig:
    """Spin-orbit qubit levels in a longitudinal field.

    lambda_so in GHz, fields in Tesla, gyromagnetic ratio in GHz/T.
    """

    lambda_so: float = 23.0
    B_z: float = 0.0
    B_x: float = 0.0
    gamma_S: float = 28.0

    def __post_init__(self):
        if self.lambda_so <= 0:
            raise ValueError("spin-orbit splitting must be positive")

    @property
    def zeeman_z(self) -> float:
        return self.B_z * self.gamma_S

    @property
    def zeeman_x(self) -> float:
        return self.B_x * self.gamma_S


def fine_structure_hamiltonian(cfg: FineStructureConfig) -> np.ndarray:
    """4x4 Hamiltonian in {ey_up, ey_dn, ex_up, ex_dn}, in GHz."""
    bz = cfg.zeeman_z
    lam = cfg.lambda_so
    return np.array(
        [
            [bz, 0, -1j * lam, 0],
            [0, -bz, 0, 1j * lam],
            [1j * lam, 0, bz, 0],
            [0, -1j * lam, 0, -bz],
        ],
        dtype=complex,
    )


def magnetic_x_hamiltonian(cfg: FineStructureConfig) -> np.ndarray:
    """Transverse-field perturbation B_x gamma_S, spin flip within each orbital.

    In the {ey_up, ey_dn, ex_up, ex_dn} ordering of the fine-structure
    Hamiltonian this is gamma_S B_x (identity_orbital x sigma_x_spin);
    it couples the eigenstate pairs (psi1, psi3) and (psi2, psi4) with
    real matrix element B_x gamma_S, which is what the perturbative
    mixing coefficients require.
    """
    bx = cfg.zeeman_x
    h = np.zeros((4, 4), dtype=complex)
    h[0, 1] = h[1, 0] = bx
    h[2, 3] = h[3, 2] = bx
    return h


def closed_form_eigensystem(cfg: FineStructureConfig) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form eigenfrequencies nu_1..nu_4 (GHz) and eigenvector columns."""
    bz, lam = cfg.zeeman_z, cfg.lambda_so
    nu = np.array([-bz - lam, -bz + lam, bz + lam, bz - lam])
    psi = np.zeros((4, 4), dtype=complex)
    psi[:, 0] = np.array([0, -1j, 0, 1]) / SQRT2   # psi1
    psi[:, 1] = np.array([0, 1j, 0, 1]) / SQRT2    # psi2
    psi[:, 2] = np.array([-1j, 0, 1, 0]) / SQRT2   # psi3
    psi[:, 3] = np.array([1j, 0, 1, 0]) / SQRT2    # psi4
    return nu, psi


def strain_hamiltonians(beta: float, gamma: float) -> tuple[np.ndarray, np.ndarray]:
    """Transverse-strain Hamiltonians in the eigenbasis {psi1..psi4}.

    Units follow beta/gamma.  Both couple only within the (1,2) and
    (3,4) orbital doublets: transverse strain alone cannot flip the
    spin qubit (psi1 <-> psi4).
    """
    h_beta = np.zeros((4, 4), dtype=complex)
    h_beta[0, 1] = h_beta[1, 0] = beta
    h_beta[2, 3] = h_beta[3, 2] = beta
    h_gamma = np.zeros((4, 4), dtype=complex)
    h_gamma[0, 1] = 1j * gamma
    h_gamma[1, 0] = -1j * gamma
    h_gamma[2, 3] = 1j * gamma
    h_gamma[3, 2] = -1j * gamma
    return h_beta, h_gamma


@dataclass(frozen=True)
class StaticFieldCoupling:
    """Spin-qubit strain coupling from transverse-field dressing."""

    perturbative: complex
    exact: complex


def static_field_coupling(
    cfg: FineStructureConfig, beta: float, gamma: float
) -> StaticFieldCoupling:
    """Matrix element <psi4'| H_strain |psi1'> between field-dressed states.

    ``perturbative`` is the first-order formula
        (beta - i gamma) (Bx gS / (nu1 - nu3) + Bx gS / (nu4 - nu2));
    ``exact`` diagonalizes the 4x4 fine-structure + transverse-field
    Hamiltonian and evaluates the strain element between the dressed
    qubit states.  Units follow beta/gamma.
    """
    bx = cfg.zeeman_x
    if abs(bx) > 0.2 * 2.0 * cfg.lambda_so:
        warnings.warn("transverse Zeeman energy is not small against 2*lambda; "
                      "first-order mixing is unreliable", stacklevel=2)
    nu, _ = closed_form_eigensystem(cfg)
    bracket = bx / (nu[0] - nu[2]) + bx / (nu[3] - nu[1])
    perturbative = (beta - 1j * gamma) * bracket

    # exact dressing: eigenbasis Hamiltonian diag(nu) + transverse field
    h_bx_eig = np.zeros((4, 4), dtype=complex)
    h_bx_eig[0, 2] = h_bx_eig[2, 0] = bx
    h_bx_eig[1, 3] = h_bx_eig[3, 1] = bx
    h_full = np.diag(nu).astype(complex) + h_bx_eig
    _, vecs = np.linalg.eigh(h_full)
    # dressed states adiabatically connected to psi1 / psi4
    i1 = int(np.argmax(np.abs(vecs[0, :])))
    i4 = int(np.argmax(np.abs(vecs[3, :])))
    h_beta, h_gamma = strain_hamiltonians(beta, gamma)
    exact = complex(vecs[:, i4].conj() @ (h_beta + h_gamma) @ vecs[:, i1])
    return StaticFieldCoupling(perturbative=perturbative, exact=exact)


# --- driven coupling schemes -------------------------------------------------

@dataclass
class MWDriveConfig:
    """Microwave-driven orbital scheme (frequencies in MHz).

    The drive frequency is locked to omega_d = omega_p - omega_B.
    """

    Delta: float = 1900.0
    omega_B: float = 50.0
    omega_p: float = 2000.0
    omega_d: Optional[float] = None
    Omega: float = 1.0
    theta: float = 0.0
    g_orb: float = 10.0

    def __post_init__(self):
        resonant = self.omega_p - self.omega_B
        if self.omega_d is None:
            self.omega_d = resonant
        elif abs(self.omega_d - resonant) > 1e-9 * max(1.0, abs(resonant)):
            raise ValueError(
                f"drive must satisfy omega_d = omega_p - omega_B = {resonant}"
            )

    @property
    def detuning(self) -> float:
        """delta = omega_p - Delta (MHz)."""
        return self.omega_p - self.Delta


def mw_effective_coupling(cfg: MWDriveConfig) -> complex:
    """Adiabatically eliminated phonon-spin coupling g_orb Omega e^{i theta}/delta."""
    delta = cfg.detuning
    if abs(cfg.Omega) >= abs(delta):
        raise ValueError(
            f"adiabatic condition violated: |Omega|={abs(cfg.Omega)} "
            f">= |delta|={abs(delta)}"
        )
    return cfg.g_orb * cfg.Omega * np.exp(1j * cfg.theta) / delta


@dataclass
class RamanConfig:
    """Two-laser Raman scheme (frequencies in MHz).

    The beat note satisfies omega_p = omega_B + omega_A - omega_C.
    """

    Omega_A: float = 10.0
    Omega_C: float = 10.0
    theta_A: float = 0.0
    theta_C: float = 0.0
    omega_A: Optional[float] = None
    omega_C: float = 4.0e8
    omega_E: float = 4.1e8
    omega_p: float = 2000.0
    omega_B: float = 50.0
    Delta: float = 1900.0
    g_orb: float = 10.0

    def __post_init__(self):
        resonant = self.omega_p - self.omega_B + self.omega_C
        if self.omega_A is None:
            self.omega_A = resonant
        elif abs(self.omega_A - resonant) > 1e-9 * max(1.0, abs(resonant)):
            raise ValueError(
                "Raman resonance violated: need omega_p = omega_B + omega_A - omega_C"
            )
        ratio = self.perturbative_ratio
        if ratio > 0.1:
            warnings.warn(
                f"Raman perturbative ratio {ratio:.3f} above 0.1; the "
                "effective coupling formula degrades", stacklevel=2,
            )

    @property
    def denominators(self) -> tuple[float, float]:
        return (self.omega_p - self.Delta,
                self.omega_C - self.omega_E + self.omega_p)

    @property
    def perturbative_ratio(self) -> float:
        d1, d2 = self.denominators
        if d1 == 0.0 or d2 == 0.0:
            return np.inf
        return abs(self.Omega_A * self.Omega_C / (d1 * d2))


def raman_effective_coupling(cfg: RamanConfig) -> complex:
    """Raman-mediated phonon-spin coupling (same unit as g_orb)."""
    d1, d2 = cfg.denominators
    if d1 == 0.0 or d2 == 0.0:
        raise ZeroDivisionError("Raman denominators must be nonzero")
    return (
        cfg.Omega_A * np.exp(1j * cfg.theta_A)
        * cfg.Omega_C * np.exp(-1j * cfg.theta_C)
        * cfg.g_orb / (d1 * d2)
    )


def validate_effective_model(
    cfg: MWDriveConfig,
    n_max: int = 2,
    n_periods: float = 1.0,
    rtol: float = 1e-7,
    atol: float = 1e-9,
) -> float:
    """Max population discrepancy: driven 4-level model vs effective exchange.

    Integrates the microwave-driven orbital model (4 defect levels x
    phonon) in the frame where the drive and strain terms are static and
    the eliminated level carries the detuning, then compares the
    spin-flip population against the two-level exchange model with
    g_eff.  Both integrations use the same master-equation engine.
    """
    delta = TWO_PI * cfg.detuning         # rad/us
    omega = TWO_PI * cfg.Omega
    g_orb = TWO_PI * cfg.g_orb
    g_eff = abs(mw_effective_coupling(cfg)) * TWO_PI

    # full model: levels {psi1..psi4} x phonon
    space = CompositeSpace([4, n_max])
    def lvl(i, j):
        m = np.zeros((4, 4), dtype=complex)
        m[i, j] = 1.0
        return embed(m, space, 0)

    b = embed(destroy(n_max), space, 1)
    h_full = (
        -delta * lvl(1, 1)
        + omega * np.exp(1j * cfg.theta) * lvl(3, 1)
        + omega * np.exp(-1j * cfg.theta) * lvl(1, 3)
        + g_orb * (b.conj().T @ lvl(0, 1) + b @ lvl(1, 0))
    )
    rho0 = kron(projector(4, 3), projector(n_max, 0))
    target = kron(projector(4, 0), projector(n_max, 1))
    t_end = n_periods * np.pi / g_eff
    cfg_int = IntegratorConfig(rel_tol=rtol, abs_tol=atol)
    traj_full = evolve(
        TimeDependentHamiltonian(h_full), [], rho0, (0.0, t_end),
        config=cfg_int, observables={"p": target},
    )

    # effective model: spin qubit x phonon exchange at g_eff
    space2 = CompositeSpace([2, n_max])
    sm = embed(np.array([[0, 1], [0, 0]], dtype=complex), space2, 0)
    b2 = embed(destroy(n_max), space2, 1)
    h_eff = g_eff * (sm @ b2.conj().T + sm.conj().T @ b2)
    rho0_eff = kron(projector(2, 1), projector(n_max, 0))
    target_eff = kron(projector(2, 0), projector(n_max, 1))
    traj_eff = evolve(
        TimeDependentHamiltonian(h_eff), [], rho0_eff, (0.0, t_end),
        config=cfg_int, observables={"p": target_eff},
    )

    grid = np.linspace(0.0, t_end, 600)
    p_full = np.interp(grid, traj_full.times, traj_full.observables["p"])
    p_eff = np.interp(grid, traj_eff.times, traj_eff.observables["p"])
    return float(np.max(np.abs(p_full - p_eff)))


# --- strain-field maps --------------------------------------------------------

STRAIN_MAP_HEADER = ["x", "y", "z", "e11", "e22", "e33", "e12", "e13", "e23"]
COUPLING_MAP_HEADER = ["x", "y", "z", "g_orb_MHz"]


def load_strain_samples(path) -> list[tuple[np.ndarray, np.ndarray]]:
    """Read (position_nm, symmetric strain tensor) rows from a CSV file.

    Requires the exact header x,y,z,e11,e22,e33,e12,e13,e23; malformed
    rows raise with their index.
    """
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError("strain map file is empty")
    header = [h.strip() for h in lines[0].split(",")]
    if header != STRAIN_MAP_HEADER:
        raise ValueError(
            f"bad strain map header {header}; expected {STRAIN_MAP_HEADER}"
        )
    for idx, line in enumerate(lines[1:], start=1):
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 9:
            raise ValueError(f"malformed strain map row {idx}: {line!r}")
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise ValueError(f"malformed strain map row {idx}: {line!r}") from None
        pos = np.array(vals[:3])
        e11, e22, e33, e12, e13, e23 = vals[3:]
        tensor = np.array(
            [[e11, e12, e13], [e12, e22, e23], [e13, e23, e33]]
        )
        samples.append((pos, tensor))
    return samples


def coupling_map(
    samples: Sequence[tuple[np.ndarray, np.ndarray]],
    constants: SusceptibilityConstants = SusceptibilityConstants(),
    normalization: float = 1.0,
) -> tuple[list[tuple[np.ndarray, float]], float]:
    """Per-sample orbital coupling g_orb = d (eps_xx - eps_yy) in Hz.

    ``normalization`` rescales raw field-solver strains to the
    zero-point amplitude.  Returns the per-point list and max |g_orb|.
    """
    out = []
    peak = 0.0
    for idx, (pos, tensor) in enumerate(samples):
        try:
            defect = cubic_to_defect(tensor)
        except ValueError as exc:
            raise ValueError(f"bad strain sample at row {idx}: {exc}") from None
        g_orb = constants.d * defect.eps_xx_minus_yy * normalization
        peak = max(peak, abs(g_orb))
        out.append((np.asarray(pos, dtype=float), float(g_orb)))
    return out, peak


def write_coupling_map(path, entries: Sequence[tuple[np.ndarray, float]]) -> None:
    """Write (x, y, z, g_orb_MHz) rows; couplings converted from Hz."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(COUPLING_MAP_HEADER) + "\n")
        for pos, g_orb in entries:
            fields = [f"{v:.12g}" for v in (*pos, g_orb / 1e6)]
            fh.write(",".join(fields) + "\n")
