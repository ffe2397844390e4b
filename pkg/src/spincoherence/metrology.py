"""Rotation sensing with pure spin states.

Only pure states are accepted. For a rotation exp(i theta J.n) with known
axis the quantum Fisher information is Q(n) = 4 Var(J.n) = 4 n^T Cov n, so
its sphere average is (4/3) Tr Cov = (4J/3) A^2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from ._errors import ValidationError
from .coherence import scs_pure
from .quasiprob import SphereGrid, grid_with_min_nodes
from .spin import angular_momentum_ops, as_label, check_state_vector, require_spin

SINGULAR_TOL = 1e-12


def _pure_vector(psi, label) -> np.ndarray:
    """Accept a state vector, or a density matrix that is a pure projector."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim == 2:
        if abs(np.vdot(psi, psi).real - 1) > 1e-10:
            raise ValidationError("mixed states are not supported for rotation sensing")
        w, v = np.linalg.eigh(psi)
        psi = v[:, -1]
    return check_state_vector(psi, as_label(label).dim)


def covariance_matrix(psi, label) -> np.ndarray:
    """Cov_ij = <{J_i, J_j}>/2 - <J_i><J_j>."""
    label = as_label(label)
    psi = _pure_vector(psi, label)
    vecs = [op @ psi for op in angular_momentum_ops(label)]
    means = np.array([np.vdot(psi, v).real for v in vecs])
    second = np.array([[np.vdot(a, b).real for b in vecs] for a in vecs])
    # Re<J_i J_j> is the symmetrized moment
    return second - np.outer(means, means)


def qfi_theta(psi, label, axis) -> float:
    """4 Var(J.n) for a known unit rotation axis n."""
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1) > 1e-12:
        raise ValidationError("axis must be a unit 3-vector")
    return float(4 * n @ covariance_matrix(psi, label) @ n)


def _axes(grid: SphereGrid) -> np.ndarray:
    t, p = grid.theta, grid.phi
    return np.stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)], axis=1)


def qfi_on_grid(psi, label, grid: SphereGrid) -> np.ndarray:
    cov = covariance_matrix(psi, label)
    n = _axes(grid)
    return 4 * np.einsum("ni,ij,nj->n", n, cov, n)


def axis_averaged_qfi(psi, label, grid: SphereGrid | None = None) -> float:
    """(1/4pi) int Q(n) dn by sphere quadrature."""
    grid = grid_with_min_nodes(2000) if grid is None else grid
    return float(grid.integrate(qfi_on_grid(psi, label, grid)) / (4 * np.pi))


class AveragedBound(NamedTuple):
    value: float
    divergent_axis: np.ndarray | None


def axis_averaged_crb(psi, label, grid: SphereGrid | None = None) -> AveragedBound:
    """Sphere average of 1/Q(n).

    If Cov has a zero eigenvalue the integrand is non-integrable around the
    matching axis; the result is then ``inf`` and that axis is reported.
    """
    label = as_label(label)
    cov = covariance_matrix(psi, label)
    w, v = np.linalg.eigh(cov)
    if w[0] <= SINGULAR_TOL * max(1.0, label.j):
        return AveragedBound(float("inf"), v[:, 0])
    grid = grid_with_min_nodes(2000) if grid is None else grid
    q = qfi_on_grid(psi, label, grid)
    return AveragedBound(float(grid.integrate(1 / q) / (4 * np.pi)), None)


class MultiparameterBound(NamedTuple):
    inverse_trace: float  # 1 / Tr Cov = 1 / (J A^2)
    trace_of_inverse: float  # Tr Cov^{-1}; inf when Cov is singular
    singular: bool


def multiparameter_bound(psi, label) -> MultiparameterBound:
    label = as_label(label)
    cov = covariance_matrix(psi, label)
    tr = float(np.trace(cov))
    w = np.linalg.eigvalsh(cov)
    singular = bool(w[0] <= SINGULAR_TOL * max(1.0, label.j))
    inv_tr = float("inf") if singular else float(np.sum(1 / w))
    return MultiparameterBound(1 / tr if tr > 0 else float("inf"), inv_tr, singular)


@dataclass
class SensingReport:
    covariance: np.ndarray
    trace_cov: float
    scs: float
    qfi_theta_of_axis: Callable[[np.ndarray], float]
    axis_averaged_qfi: float
    axis_averaged_crb: float
    divergent_axis: np.ndarray | None
    multiparameter: MultiparameterBound

    def as_dict(self) -> dict:
        return {
            "covariance": self.covariance.tolist(),
            "trace_cov": self.trace_cov,
            "scs": self.scs,
            "axis_averaged_qfi": self.axis_averaged_qfi,
            "axis_averaged_crb": self.axis_averaged_crb,
            "divergent_axis": None if self.divergent_axis is None else self.divergent_axis.tolist(),
            "inverse_trace_bound": self.multiparameter.inverse_trace,
            "trace_inverse_cov": self.multiparameter.trace_of_inverse,
            "covariance_singular": self.multiparameter.singular,
        }


def sensing_report(psi, label, grid: SphereGrid | None = None) -> SensingReport:
    label = as_label(label)
    require_spin(label)
    psi = _pure_vector(psi, label)
    grid = grid_with_min_nodes(2000) if grid is None else grid
    cov = covariance_matrix(psi, label)
    crb = axis_averaged_crb(psi, label, grid)
    return SensingReport(
        covariance=cov,
        trace_cov=float(np.trace(cov)),
        scs=scs_pure(psi, label),
        qfi_theta_of_axis=lambda n: qfi_theta(psi, label, n),
        axis_averaged_qfi=axis_averaged_qfi(psi, label, grid),
        axis_averaged_crb=crb.value,
        divergent_axis=crb.divergent_axis,
        multiparameter=multiparameter_bound(psi, label),
    )
