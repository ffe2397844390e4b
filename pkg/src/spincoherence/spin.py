"""Angular momentum operators, rotations and spin coherent states.

All matrices are dense and expressed in the Dicke basis |J m>, ordered by
descending m (index 0 is m = J).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._errors import DomainError, ValidationError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-10
NORM_TOL = 1e-12


@dataclass(frozen=True)
class SpinLabel:
    """Total spin J, stored as the integer 2J."""

    two_j: int

    def __post_init__(self):
        if isinstance(self.two_j, bool) or int(self.two_j) != self.two_j or self.two_j < 0:
            raise ValidationError(f"two_j must be a nonnegative integer, got {self.two_j!r}")
        object.__setattr__(self, "two_j", int(self.two_j))

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1

    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers J, J-1, ..., -J."""
        return self.j - np.arange(self.dim)


def as_label(label) -> SpinLabel:
    if isinstance(label, SpinLabel):
        return label
    return SpinLabel(label)


def require_spin(label: SpinLabel) -> None:
    """Reject J = 0, where the 1/J normalizations are undefined."""
    if label.two_j == 0:
        raise DomainError("J = 0 has no coherence scale (normalization 1/J undefined)")


@lru_cache(maxsize=None)
def _ops(two_j: int):
    label = SpinLabel(two_j)
    m = label.m_values()
    j = label.j
    # <m+1| J+ |m> on the superdiagonal, since row index grows as m decreases
    jplus = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), 1).astype(complex)
    j1 = (jplus + jplus.T) / 2
    j2 = (jplus - jplus.T) / 2j
    j3 = np.diag(m).astype(complex)
    ops = (j1, j2, j3)
    for op in ops:
        op.setflags(write=False)
    return ops


def angular_momentum_ops(label) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (J1, J2, J3) for spin ``label`` in the Dicke basis.

    The returned arrays are read-only and shared between calls.
    """
    return _ops(as_label(label).two_j)


def _unit_axis(axis) -> np.ndarray:
    n = np.asarray(axis, dtype=float).reshape(-1)
    if n.shape != (3,):
        raise ValidationError(f"rotation axis must be a real 3-vector, got shape {n.shape}")
    if abs(np.linalg.norm(n) - 1) > NORM_TOL:
        raise ValidationError(f"rotation axis must have unit norm, got |n| = {np.linalg.norm(n)!r}")
    return n


def exp_i_hermitian(h: np.ndarray, theta: float) -> np.ndarray:
    """exp(i theta h) for Hermitian h via its spectral decomposition."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * theta * w)) @ v.conj().T


def rotation_unitary(label, theta: float, axis) -> np.ndarray:
    """R(theta, n) = exp(i theta J.n).

    Conjugating with this operator, ``R @ Ji @ R.conj().T``, rotates the
    generators by ``theta`` about ``n``. Because of the sign in the
    exponent, ``R @ v`` for a state ``v`` pointing along ``m`` yields a state
    pointing along the image of ``m`` under a rotation by ``-theta``.
    """
    n = _unit_axis(axis)
    ops = angular_momentum_ops(label)
    h = n[0] * ops[0] + n[1] * ops[1] + n[2] * ops[2]
    return exp_i_hermitian(h, theta)


def rotation_matrix(theta: float, axis) -> np.ndarray:
    """Real orthogonal r with R J_i R^dagger = sum_j r_ij J_j for R = exp(i theta J.n)."""
    n = _unit_axis(axis)
    k = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
    return np.eye(3) + np.sin(theta) * k + (1 - np.cos(theta)) * (k @ k)


# rotations taking J3 eigenvectors to J1 / J2 eigenvectors with the same m
_AXIS_ROTATIONS = {
    1: (-np.pi / 2, (0.0, 1.0, 0.0)),
    2: (np.pi / 2, (1.0, 0.0, 0.0)),
}


@lru_cache(maxsize=None)
def _eigenbasis(two_j: int, axis_index: int) -> np.ndarray:
    label = SpinLabel(two_j)
    if axis_index == 3:
        basis = np.eye(label.dim, dtype=complex)
    else:
        theta, axis = _AXIS_ROTATIONS[axis_index]
        basis = rotation_unitary(label, theta, axis)
    basis.setflags(write=False)
    return basis


def eigenbasis(label, axis_index: int) -> np.ndarray:
    """Eigenvectors of J_i as the columns of a unitary matrix.

    Column k satisfies J_i v_k = (J - k) v_k. The basis is obtained by
    rotating the Dicke basis, so phases are fixed and reproducible.
    """
    if axis_index not in (1, 2, 3):
        raise ValidationError(f"axis_index must be 1, 2 or 3, got {axis_index!r}")
    return _eigenbasis(as_label(label).two_j, axis_index)


def bloch_vector(theta: float, phi: float) -> np.ndarray:
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


def spin_coherent_state(label, theta: float, phi: float) -> np.ndarray:
    """Maximal eigenvector of J.n for n = (sin t cos p, sin t sin p, cos t)."""
    label = as_label(label)
    if not -1e-12 <= theta <= np.pi + 1e-12:
        raise ValidationError(f"theta must lie in [0, pi], got {theta!r}")
    top = np.zeros(label.dim, dtype=complex)
    top[0] = 1.0
    if theta == 0:
        return top
    # R(theta, a) carries +z to n when a = (sin phi, -cos phi, 0)
    r = rotation_unitary(label, theta, (np.sin(phi), -np.cos(phi), 0.0))
    return r @ top


# -- state validation -------------------------------------------------------

def check_density_matrix(rho, dim: int | None = None) -> np.ndarray:
    """Validate and return ``rho`` as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValidationError(f"density matrix must be square, got shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise ValidationError(f"dimension mismatch: expected {dim}, got {rho.shape[0]}")
    if np.max(np.abs(rho - rho.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise ValidationError("hermiticity violated")
    if abs(np.trace(rho) - 1) > TRACE_TOL:
        raise ValidationError(f"trace must be 1, got {np.trace(rho).real!r}")
    if np.linalg.eigvalsh(rho)[0] < -POSITIVITY_TOL:
        raise ValidationError("density matrix has negative eigenvalues")
    return rho


def check_state_vector(psi, dim: int | None = None) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValidationError(f"state vector must be one-dimensional, got shape {psi.shape}")
    if dim is not None and psi.shape[0] != dim:
        raise ValidationError(f"dimension mismatch: expected {dim}, got {psi.shape[0]}")
    if abs(np.linalg.norm(psi) - 1) > NORM_TOL:
        raise ValidationError(f"state vector is not normalized (norm {np.linalg.norm(psi)!r})")
    return psi


def purity(rho) -> float:
    rho = np.asarray(rho)
    return float(np.vdot(rho, rho).real)


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


def random_density_matrix(dim: int, rng=None, rank: int | None = None) -> np.ndarray:
    """Ginibre ensemble state G G^dagger / Tr(G G^dagger)."""
    rng = np.random.default_rng(rng)
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def random_pure_state(dim: int, rng=None) -> np.ndarray:
    rng = np.random.default_rng(rng)
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


def random_unit_vector(rng=None, size: int = 3) -> np.ndarray:
    rng = np.random.default_rng(rng)
    v = rng.standard_normal(size)
    return v / np.linalg.norm(v)
