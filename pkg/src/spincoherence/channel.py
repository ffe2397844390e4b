"""Spherical tensor operators and the isotropic depolarization channel.

The generator is

    d rho / dt = (1/J) sum_i (J_i rho J_i - {J_i^2, rho}/2)
               = -(1/2J) sum_i [J_i, [J_i, rho]].

Every T_Kq is an eigen-operator of it with eigenvalue -K(K+1)/(2J), so the
multipoles decay as rho_Kq(t) = rho_Kq(0) exp(-K(K+1) t / 2J) and the
purity as sum_K |rho_K|^2 exp(-K(K+1) t / J).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from ._errors import ValidationError
from .cg import clebsch_gordan
from .coherence import scs_commutator
from .spin import (
    angular_momentum_ops,
    as_label,
    check_density_matrix,
    require_spin,
)


class FlaggedValue(NamedTuple):
    """A value that may have been fixed by convention at a 0/0 point."""

    value: float
    degenerate: bool


def multipole_index(k: int, q: int) -> int:
    """Flat position of (K, q) in a multipole table."""
    return k * k + k + q


def _check_kq(label, k: int, q: int) -> None:
    if not 0 <= k <= label.two_j or abs(q) > k:
        raise ValidationError(f"(K, q) = ({k}, {q}) out of range for 2J = {label.two_j}")


@lru_cache(maxsize=None)
def _tensor_table(two_j: int) -> np.ndarray:
    """All T_Kq stacked as (d^2, d, d), rows ordered by ``multipole_index``."""
    d = two_j + 1
    two_m = two_j - 2 * np.arange(d)  # Dicke ordering, 2m descending
    table = np.zeros((d * d, d, d), dtype=complex)
    for k in range(two_j + 1):
        norm = math.sqrt((2 * k + 1) / d)
        for q in range(0, k + 1):
            op = table[multipole_index(k, q)]
            for col, tm in enumerate(two_m):
                tmp = tm + 2 * q
                if abs(tmp) > two_j:
                    continue
                row = (two_j - tmp) // 2
                op[row, col] = norm * clebsch_gordan(two_j, tm, 2 * k, 2 * q, two_j, tmp)
            if q:
                table[multipole_index(k, -q)] = (-1) ** q * op.conj().T
    table.setflags(write=False)
    return table


def tensor_operator(label, k: int, q: int) -> np.ndarray:
    """T_Kq = sqrt((2K+1)/(2J+1)) sum_{m,m'} C^{Jm'}_{Jm,Kq} |Jm'><Jm|.

    Negative q are filled from T_{K,-q} = (-1)^q T_Kq^dagger.
    """
    label = as_label(label)
    _check_kq(label, k, q)
    return _tensor_table(label.two_j)[multipole_index(k, q)]


def tensor_table(label) -> np.ndarray:
    return _tensor_table(as_label(label).two_j)


@dataclass(frozen=True)
class MultipoleTable:
    """Coefficients rho_Kq of rho = sum_Kq rho_Kq T_Kq."""

    two_j: int
    coeffs: np.ndarray

    def __post_init__(self):
        d = self.two_j + 1
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (d * d,):
            raise ValidationError(f"expected {d * d} multipole coefficients, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)

    def __getitem__(self, kq: tuple[int, int]) -> complex:
        k, q = kq
        _check_kq(as_label(self.two_j), k, q)
        return self.coeffs[multipole_index(k, q)]

    def rank_weights(self) -> np.ndarray:
        """sum_q |rho_Kq|^2 for K = 0..2J."""
        w = np.abs(self.coeffs) ** 2
        return np.array([w[k * k: (k + 1) ** 2].sum() for k in range(self.two_j + 1)])

    def ranks(self) -> np.ndarray:
        """K for every flat coefficient."""
        return np.concatenate([np.full(2 * k + 1, k) for k in range(self.two_j + 1)])


def decompose(rho, label) -> MultipoleTable:
    """rho_Kq = Tr(rho T_Kq^dagger)."""
    label = as_label(label)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (label.dim, label.dim):
        raise ValidationError(f"dimension mismatch: expected {label.dim}x{label.dim}, got {rho.shape}")
    table = tensor_table(label)
    coeffs = table.reshape(len(table), -1).conj() @ rho.reshape(-1)
    return MultipoleTable(label.two_j, coeffs)


def reconstruct(table: MultipoleTable, label=None) -> np.ndarray:
    label = as_label(table.two_j if label is None else label)
    if label.two_j != table.two_j:
        raise ValidationError(f"table has 2J = {table.two_j}, label has 2J = {label.two_j}")
    ops = tensor_table(label)
    return np.tensordot(table.coeffs, ops, axes=1)


def decay_rates(label) -> np.ndarray:
    """K(K+1)/(2J) for K = 0..2J: multipole decay rates of the channel."""
    label = as_label(label)
    require_spin(label)
    k = np.arange(label.two_j + 1)
    return k * (k + 1) / (2 * label.j)


def lindblad_rhs(rho, label) -> np.ndarray:
    """-(1/2J) sum_i [J_i, [J_i, rho]]; accepts any square operator."""
    label = as_label(label)
    require_spin(label)
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros_like(rho)
    for op in angular_momentum_ops(label):
        c = op @ rho - rho @ op
        out += op @ c - c @ op
    return -out / (2 * label.j)


def _check_time(t: float) -> float:
    if not np.isfinite(t) or t < 0:
        raise ValidationError(f"channel time must be nonnegative, got {t!r}")
    return float(t)


def evolve(rho, label, t: float) -> np.ndarray:
    """Exact channel evolution through multipole decay."""
    label = as_label(label)
    t = _check_time(t)
    rho = check_density_matrix(rho, label.dim)
    table = decompose(rho, label)
    decay = np.exp(-decay_rates(label)[table.ranks()] * t)
    out = reconstruct(MultipoleTable(label.two_j, table.coeffs * decay), label)
    return (out + out.conj().T) / 2


def _check_times(times) -> np.ndarray:
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.size == 0:
        raise ValidationError("time grid is empty")
    if np.any(~np.isfinite(times)) or np.any(times < 0):
        raise ValidationError("times must be finite and nonnegative")
    if np.any(np.diff(times) < 0):
        raise ValidationError("times must be sorted ascending")
    return times


class PuritySeries:
    """P(t) = sum_K w_K exp(-f_K t) with w_K = sum_q |rho_Kq|^2 and f_K = K(K+1)/J.

    Calling the object evaluates the sum for any real t, including the
    analytic continuation to t < 0 (useful for central differences at t = 0).
    """

    def __init__(self, rho, label):
        label = as_label(label)
        rho = check_density_matrix(rho, label.dim)
        self.weights = decompose(rho, label).rank_weights()
        self.rates = 2 * decay_rates(label)

    def __call__(self, t) -> np.ndarray:
        return self.derivative(0, t)

    def derivative(self, order: int, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)[..., None]
        terms = self.weights * (-self.rates) ** order * np.exp(-self.rates * t)
        return terms.sum(axis=-1)

    def excess(self, t) -> np.ndarray:
        """P(t) - 1/(2J+1), summed without the K = 0 term."""
        t = np.asarray(t, dtype=float)[..., None]
        return (self.weights[1:] * np.exp(-self.rates[1:] * t)).sum(axis=-1)

    def log_second_derivative(self, t) -> np.ndarray:
        """d^2 ln P / dt^2 from the pairwise sum of (f_K - f_L)^2 terms."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        e = self.weights * np.exp(-self.rates * t[:, None])
        diff2 = (self.rates[:, None] - self.rates[None, :]) ** 2
        num = 0.5 * np.einsum("tk,tl,kl->t", e, e, diff2)
        return num / e.sum(axis=1) ** 2


def purity_trajectory(rho, label, times) -> np.ndarray:
    """Purity along the channel at each time in ``times``."""
    times = _check_times(times)
    return PuritySeries(rho, label).derivative(0, times)


_DEGENERATE_EXCESS = 1e-14


def scs_from_purity(rho, label, t: float = 0.0) -> FlaggedValue:
    """-1/2 d ln P / dt evaluated analytically at time ``t``.

    At the maximally mixed state both the derivative and the excess purity
    vanish; the value 0 is returned with ``degenerate=True``.
    """
    t = _check_time(t)
    p = PuritySeries(rho, label)
    if p.excess(t) < _DEGENERATE_EXCESS:
        return FlaggedValue(0.0, True)
    value = -0.5 * p.derivative(1, t) / p.derivative(0, t)
    return FlaggedValue(float(value), False)


@dataclass
class MonotonicityReport:
    times: np.ndarray
    signed_purity_derivatives: np.ndarray  # row n holds (-1)^n d^n P / dt^n
    purity_scs_derivative: np.ndarray  # d(P A^2)/dt
    scs: np.ndarray  # A^2(t)
    log_purity_curvature: np.ndarray  # d^2 ln P / dt^2
    tol: float = 1e-12

    @property
    def completely_monotone(self) -> bool:
        return bool(np.all(self.signed_purity_derivatives >= -self.tol))

    @property
    def purity_scs_nonincreasing(self) -> bool:
        return bool(np.all(self.purity_scs_derivative <= self.tol))

    @property
    def scs_nonincreasing(self) -> bool:
        return bool(np.all(np.diff(self.scs) <= self.tol))

    @property
    def log_convex(self) -> bool:
        return bool(np.all(self.log_purity_curvature >= -self.tol))

    @property
    def ok(self) -> bool:
        return (self.completely_monotone and self.purity_scs_nonincreasing
                and self.scs_nonincreasing and self.log_convex)


def monotonicity_report(rho, label, max_order: int, times) -> MonotonicityReport:
    """Sign diagnostics for the purity trajectory and A^2(t) on a time grid."""
    if not 0 <= max_order <= 6:
        raise ValidationError(f"max_order must be between 0 and 6, got {max_order}")
    times = _check_times(times)
    p = PuritySeries(rho, label)
    signed = np.array([(-1) ** n * p.derivative(n, times) for n in range(max_order + 1)])
    purity = p.derivative(0, times)
    # P A^2 = -P'/2, so d(P A^2)/dt = -P''/2
    d_pa = -0.5 * p.derivative(2, times)
    scs = -0.5 * p.derivative(1, times) / purity
    return MonotonicityReport(times, signed, d_pa, scs, p.log_second_derivative(times))


def scs_trajectory(rho, label, times) -> np.ndarray:
    """A^2 of the evolved state, computed from the commutator form."""
    label = as_label(label)
    times = _check_times(times)
    return np.array([scs_commutator(evolve(rho, label, t), label) for t in times])
