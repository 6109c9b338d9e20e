"""Dense complex linear algebra and composite-system bookkeeping.

States and operators are plain complex numpy arrays.  The helpers here
fix the conventions used by every protocol module:

* qubit level 0 is the ground state, level 1 the excited state,
* Fock index equals phonon number,
* composite ordering follows the order of ``CompositeSpace.dims``
  ([source qubit, phonon, spin(s)] in the transfer protocols).

All functions are pure; nothing here mutates its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

HERMITICITY_TOL = 1e-9
PSD_TOL = 1e-9


@dataclass(frozen=True)
class CompositeSpace:
    """Ordered subsystem dimensions of a tensor-product space."""

    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        object.__setattr__(self, "dims", tuple(int(d) for d in dims))
        if any(d < 2 for d in self.dims):
            raise ValueError(f"subsystem dims must all be >= 2, got {self.dims}")

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def __len__(self) -> int:
        return len(self.dims)


# --- elementary operators -------------------------------------------------

def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def lowering(dim: int = 2) -> np.ndarray:
    """Qubit lowering operator |0><1| (dim=2) or truncated boson operator."""
    if dim == 2:
        out = np.zeros((2, 2), dtype=complex)
        out[0, 1] = 1.0
        return out
    return destroy(dim)


def destroy(n_max: int) -> np.ndarray:
    """Truncated bosonic annihilation operator on Fock levels 0..n_max-1."""
    out = np.zeros((n_max, n_max), dtype=complex)
    for n in range(1, n_max):
        out[n - 1, n] = np.sqrt(n)
    return out


def number_op(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def sigma_x() -> np.ndarray:
    return np.array([[0, 1], [1, 0]], dtype=complex)


def sigma_y() -> np.ndarray:
    return np.array([[0, -1j], [1j, 0]], dtype=complex)


def sigma_z() -> np.ndarray:
    """Convention: |0> (ground) has sigma_z = +1."""
    return np.array([[1, 0], [0, -1]], dtype=complex)


def basis_ket(dim: int, index: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dim {dim}")
    ket = np.zeros(dim, dtype=complex)
    ket[index] = 1.0
    return ket


def dm(ket: np.ndarray) -> np.ndarray:
    """Density matrix |psi><psi| of a ket."""
    ket = np.asarray(ket, dtype=complex)
    return np.outer(ket, ket.conj())


def projector(dim: int, index: int) -> np.ndarray:
    return dm(basis_ket(dim, index))


# --- validation -----------------------------------------------------------

def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    return bool(np.max(np.abs(m - m.conj().T)) <= tol * scale)


def validate_density_matrix(rho: np.ndarray, tol: float = 1e-9) -> None:
    """Raise if rho is not Hermitian / unit trace / PSD within tol."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if not is_hermitian(rho, tol):
        raise ValueError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > tol or abs(np.trace(rho).imag) > tol:
        raise ValueError(f"density matrix trace {np.trace(rho)} != 1")
    evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if evals.min() < -tol:
        raise ValueError(f"density matrix has negative eigenvalue {evals.min()}")


# --- operations -----------------------------------------------------------

def kron(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of two or more operators (left-to-right order)."""
    if not ops:
        raise ValueError("kron needs at least one operator")
    return reduce(np.kron, (np.asarray(o, dtype=complex) for o in ops))


def embed(op: np.ndarray, space: CompositeSpace, site: int) -> np.ndarray:
    """Lift a single-subsystem operator to the full space, identity elsewhere."""
    op = np.asarray(op, dtype=complex)
    if not 0 <= site < len(space):
        raise ValueError(f"site {site} out of range for {space.dims}")
    if op.shape != (space.dims[site], space.dims[site]):
        raise ValueError(
            f"operator dim {op.shape} does not match subsystem dim "
            f"{space.dims[site]} at site {site}"
        )
    factors = [identity(d) for d in space.dims]
    factors[site] = op
    return kron(*factors)


def partial_trace(rho: np.ndarray, space: CompositeSpace, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix over the kept subsystems, order preserved."""
    rho = np.asarray(rho, dtype=complex)
    dims = space.dims
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ValueError(f"invalid keep set {keep} for {n} subsystems")
    if rho.shape != (space.dim, space.dim):
        raise ValueError(f"rho shape {rho.shape} does not match space dim {space.dim}")
    traced = [i for i in range(n) if i not in keep]
    reshaped = rho.reshape(dims + dims)
    # trace out highest axes first so earlier indices stay valid
    for i in sorted(traced, reverse=True):
        reshaped = np.trace(reshaped, axis1=i, axis2=i + (reshaped.ndim // 2))
    d_keep = int(np.prod([dims[k] for k in keep]))
    return reshaped.reshape(d_keep, d_keep)


def hermitian_sqrt(m: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues in [-tol, 0) are clamped to zero (integrator noise);
    anything below -tol raises.
    """
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol):
        raise ValueError("hermitian_sqrt requires a Hermitian matrix")
    evals, vecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    if evals.min() < -tol:
        raise ValueError(f"not PSD: eigenvalue {evals.min()} < -{tol}")
    evals = np.clip(evals, 0.0, None)
    return (vecs * np.sqrt(evals)) @ vecs.conj().T


def fidelity(rho_i: np.ndarray, rho_f: np.ndarray) -> float:
    """Uhlmann state fidelity F = |Tr sqrt(sqrt(rho_i) rho_f sqrt(rho_i))|.

    Non-squared convention: F(|0><0|, I/2) = 1/sqrt(2).
    """
    rho_i = np.asarray(rho_i, dtype=complex)
    rho_f = np.asarray(rho_f, dtype=complex)
    if rho_i.shape != rho_f.shape:
        raise ValueError(f"dimension mismatch {rho_i.shape} vs {rho_f.shape}")
    sqrt_i = hermitian_sqrt(rho_i)
    mid = sqrt_i @ rho_f @ sqrt_i
    evals = np.linalg.eigvalsh(0.5 * (mid + mid.conj().T))
    evals = np.clip(evals, 0.0, None)
    return float(min(1.0, np.sum(np.sqrt(evals))))


def eigensystem_hermitian(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise ValueError("eigensystem_hermitian requires a Hermitian matrix")
    evals, vecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    return evals, vecs


def expectation(rho: np.ndarray, op: np.ndarray) -> complex:
    """Tr(rho @ op); real within tolerance for Hermitian op."""
    rho = np.asarray(rho)
    op = np.asarray(op)
    if rho.shape != op.shape:
        raise ValueError(f"dimension mismatch {rho.shape} vs {op.shape}")
    return complex(np.einsum("ij,ji->", rho, op))


def phase_aligned_qubit_fidelity(rho_out: np.ndarray, reference: np.ndarray) -> float:
    """Uhlmann fidelity after the fidelity-maximizing local z rotation.

    State transfers in this package realize SWAPs only up to a
    deterministic local phase; the compensation angle follows
    analytically from the off-diagonal elements.  For inputs without
    coherence the rotation is a no-op.
    """
    r01, o01 = reference[0, 1], rho_out[0, 1]
    if abs(r01) > 1e-12 and abs(o01) > 1e-12:
        theta = np.angle(r01) - np.angle(o01)
        u = np.diag([1.0, np.exp(1j * theta)])
        rho_out = u @ rho_out @ u.conj().T
    # clip solver fuzz so the fidelity eigensolve stays PSD
    rho_out = 0.5 * (rho_out + rho_out.conj().T)
    return fidelity(reference, rho_out)
