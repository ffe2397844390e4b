"""s-ordered quasiprobability distributions on the sphere.

    W^(s)(Omega) = sqrt(4 pi / (2J+1)) sum_Kq (C^{JJ}_{JJ,K0})^(-s) rho_Kq Y_Kq(Omega)

Order convention: s = -1 is the Husimi function <Omega|rho|Omega>,
s = 0 the Wigner function and s = +1 the P function that gives the diagonal
representation rho = (2J+1)/4pi int W^(1) |Omega><Omega| dOmega. Some of
the literature uses the opposite sign for s.

Fields live on product grids (Gauss-Legendre in cos(theta) times a uniform
grid in phi), which integrate products of harmonics of combined degree up to
2 n_theta - 1 exactly.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ._errors import DomainError, ValidationError
from .cg import log_cg_top
from .channel import FlaggedValue, decompose, evolve, lindblad_rhs, multipole_index
from .spin import as_label, check_density_matrix, require_spin

AMPLIFICATION_LIMIT = 1e12
IMAG_TOL = 1e-10


# -- grids ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Product quadrature grid; nodes are flattened with theta as the slow index."""

    n_theta: int
    n_phi: int
    cos_theta: np.ndarray = field(repr=False)
    theta_weights: np.ndarray = field(repr=False)

    @classmethod
    def gauss_legendre(cls, n_theta: int, n_phi: int) -> "SphereGrid":
        if n_theta < 1 or n_phi < 1:
            raise ValidationError(f"grid dimensions must be positive, got {n_theta}x{n_phi}")
        x, w = np.polynomial.legendre.leggauss(n_theta)
        # ascending theta
        return cls(n_theta, n_phi, x[::-1].copy(), w[::-1].copy())

    @property
    def theta_1d(self) -> np.ndarray:
        return np.arccos(self.cos_theta)

    @property
    def phi_1d(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_phi) / self.n_phi

    @property
    def theta(self) -> np.ndarray:
        return np.repeat(self.theta_1d, self.n_phi)

    @property
    def phi(self) -> np.ndarray:
        return np.tile(self.phi_1d, self.n_theta)

    @property
    def weights(self) -> np.ndarray:
        return np.repeat(self.theta_weights, self.n_phi) * (2 * np.pi / self.n_phi)

    @property
    def size(self) -> int:
        return self.n_theta * self.n_phi

    def integrate(self, values) -> float | complex:
        return np.dot(self.weights, np.asarray(values).reshape(-1))

    def same_as(self, other: "SphereGrid") -> bool:
        return self is other or (
            self.n_theta == other.n_theta and self.n_phi == other.n_phi
            and np.array_equal(self.cos_theta, other.cos_theta)
        )


def default_grid(label) -> SphereGrid:
    """n_theta = 2J + 2, n_phi = 4J + 3: exact for products of two fields."""
    label = as_label(label)
    return SphereGrid.gauss_legendre(label.two_j + 2, 2 * label.two_j + 3)


def grid_with_min_nodes(min_nodes: int) -> SphereGrid:
    """Smallest roughly square grid (n_phi = 2 n_theta - 1) with at least ``min_nodes`` nodes."""
    n = 1
    while n * (2 * n - 1) < min_nodes:
        n += 1
    return SphereGrid.gauss_legendre(n, 2 * n - 1)


# -- spherical harmonics ----------------------------------------------------

def legendre_table(lmax: int, x) -> np.ndarray:
    """Orthonormal associated Legendre functions for q >= 0.

    Returns ``out[multipole_index(l, q)]`` = Pbar_l^q(x) with the
    Condon-Shortley phase, normalized so that Y_lq = Pbar_l^q(cos t) e^{i q p}
    is orthonormal on the sphere. Entries with q < 0 are left at zero.
    Computed with the standard three-term recurrence in l, stable to high
    degree.
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.clip(1 - x * x, 0.0, None))
    out = np.zeros(((lmax + 1) ** 2,) + x.shape)
    pmm = np.full(x.shape, 1 / math.sqrt(4 * math.pi))
    for q in range(lmax + 1):
        if q > 0:
            pmm = -math.sqrt((2 * q + 1) / (2 * q)) * s * pmm
        out[multipole_index(q, q)] = pmm
        if q == lmax:
            break
        prev2 = pmm
        prev1 = math.sqrt(2 * q + 3) * x * pmm
        out[multipole_index(q + 1, q)] = prev1
        a_prev = math.sqrt(2 * q + 3)
        for l in range(q + 2, lmax + 1):
            a = math.sqrt((4 * l * l - 1) / (l * l - q * q))
            cur = a * (x * prev1 - prev2 / a_prev)
            out[multipole_index(l, q)] = cur
            prev2, prev1, a_prev = prev1, cur, a
    return out


def spherical_harmonic(k: int, q: int, theta, phi):
    """Orthonormal Y_Kq with Condon-Shortley phase; Y*_Kq = (-1)^q Y_K,-q."""
    if k < 0 or abs(q) > k:
        raise ValidationError(f"spherical harmonic needs |q| <= K, got K={k}, q={q}")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    p = legendre_table(k, np.cos(theta))[multipole_index(k, abs(q))]
    y = p * np.exp(1j * abs(q) * phi)
    if q < 0:
        y = (-1) ** q * np.conj(y)
    return y[()] if y.ndim == 0 else y


@lru_cache(maxsize=32)
def _legendre_on_grid(lmax: int, n_theta: int) -> np.ndarray:
    x, _ = np.polynomial.legendre.leggauss(n_theta)
    table = legendre_table(lmax, x[::-1])
    table.setflags(write=False)
    return table


def _legendre_for(grid: SphereGrid, lmax: int) -> np.ndarray:
    return _legendre_on_grid(lmax, grid.n_theta)


def harmonic_expansion_on_grid(coeffs, lmax: int, grid: SphereGrid) -> np.ndarray:
    """sum_Kq coeffs[multipole_index(K, q)] Y_Kq evaluated at every grid node."""
    coeffs = np.asarray(coeffs, dtype=complex)
    leg = _legendre_for(grid, lmax)  # (n_coeff, n_theta)
    phi = grid.phi_1d
    out = np.zeros((grid.n_theta, grid.n_phi), dtype=complex)
    for q in range(-lmax, lmax + 1):
        ks = np.arange(abs(q), lmax + 1)
        idx = ks * ks + ks + q
        pos = ks * ks + ks + abs(q)
        # Y_K,-|q| = (-1)^q Pbar e^{-i|q|phi}; the Legendre factor is shared
        sign = (-1) ** q if q < 0 else 1
        radial = sign * (coeffs[idx] @ leg[pos])
        out += np.outer(radial, np.exp(1j * q * phi))
    return out.reshape(-1)


# -- quasiprobability fields --------------------------------------------------

@dataclass(frozen=True, eq=False)
class SphereField:
    grid: SphereGrid
    values: np.ndarray
    order_s: float
    amplified: bool = False  # some (C^{JJ}_{JJ,K0})^{-s} factor exceeded AMPLIFICATION_LIMIT
    nonstandard_order: bool = False  # |s| > 1

    def normalization(self, label) -> float:
        """(2J+1)/4pi times the integral of the field."""
        label = as_label(label)
        return float(np.real(label.dim / (4 * np.pi) * self.grid.integrate(self.values)))

    def to_csv(self) -> str:
        """Rows ``theta,phi,weight,value`` with 17 significant digits."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["theta", "phi", "weight", "value"])
        vals = np.real(self.values)
        for t, p, w, v in zip(self.grid.theta, self.grid.phi, self.grid.weights, vals):
            writer.writerow([f"{t:.17g}", f"{p:.17g}", f"{w:.17g}", f"{v:.17g}"])
        return buf.getvalue()


def order_factors(label, s: float) -> np.ndarray:
    """(C^{JJ}_{JJ,K0})^{-s} for K = 0..2J."""
    label = as_label(label)
    logs = np.array([log_cg_top(label.two_j, k) for k in range(label.two_j + 1)])
    return np.exp(-s * logs)


def operator_field(op, label, s: float, grid: SphereGrid, hermitian: bool | None = None) -> SphereField:
    """W^(s) of an arbitrary operator (complex in general)."""
    label = as_label(label)
    op = np.asarray(op, dtype=complex)
    table = decompose(op, label)
    factors = order_factors(label, s)
    coeffs = table.coeffs * factors[table.ranks()]
    values = math.sqrt(4 * math.pi / label.dim) * harmonic_expansion_on_grid(coeffs, label.two_j, grid)
    if hermitian is None:
        hermitian = np.allclose(op, op.conj().T, atol=1e-12, rtol=0)
    if hermitian:
        scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
        if np.max(np.abs(values.imag), initial=0.0) > IMAG_TOL * scale:
            raise ValidationError("quasiprobability of a Hermitian operator has an imaginary part")
        values = values.real.copy()
    return SphereField(
        grid=grid,
        values=values,
        order_s=float(s),
        amplified=bool(np.max(factors) > AMPLIFICATION_LIMIT),
        nonstandard_order=abs(s) > 1,
    )


def wigner_s(rho, label, s: float, grid: SphereGrid | None = None) -> SphereField:
    """s-ordered quasiprobability of a density matrix (real valued)."""
    label = as_label(label)
    rho = check_density_matrix(rho, label.dim)
    grid = default_grid(label) if grid is None else grid
    return operator_field(rho, label, s, grid, hermitian=True)


def husimi(rho, label, grid: SphereGrid | None = None) -> SphereField:
    return wigner_s(rho, label, -1.0, grid)


def overlap(field_a: SphereField, field_b: SphereField, label, order_tol: float = 1e-12):
    """(2J+1)/4pi int W_A^(-s) W_B^(s) dOmega, which equals Tr(AB)."""
    label = as_label(label)
    if not field_a.grid.same_as(field_b.grid):
        raise ValidationError("fields live on different grids")
    if abs(field_a.order_s + field_b.order_s) > order_tol:
        raise ValidationError(
            f"overlap needs opposite orders, got {field_a.order_s} and {field_b.order_s}")
    val = label.dim / (4 * np.pi) * field_a.grid.integrate(field_a.values * field_b.values)
    return float(val.real) if np.isrealobj(field_a.values) and np.isrealobj(field_b.values) else val


# -- Clebsch-Gordan asymptotics ---------------------------------------------

def cg_asymptotics(label, k: int) -> tuple[float, float, float]:
    """(exact, first-order, second-order) values of ln C^{JJ}_{JJ,K0}.

    first order: -K(K+1)/4J; second order: -K(K+1)(2J-1)/8J^2.
    """
    label = as_label(label)
    require_spin(label)
    exact = log_cg_top(label.two_j, k)
    j = label.j
    first = -k * (k + 1) / (4 * j)
    second = -k * (k + 1) * (2 * j - 1) / (8 * j * j)
    return exact, first, second


def order_shift(label, t: float, shift: str | float = "leading") -> float:
    """Decrease of s that mimics channel time ``t`` at large J.

    "leading" matches exp(-K(K+1)t/2J) against C^{2t} to first order in
    1/J and gives 2t; "improved" also matches the K(K+1)/J^2 term and gives
    2tJ/(J - 1/2). A float is used as the shift itself.
    """
    label = as_label(label)
    if shift == "leading":
        return 2 * t
    if shift == "improved":
        if label.two_j <= 1:
            raise DomainError("improved shift needs J > 1/2")
        return 2 * t * label.j / (label.j - 0.5)
    if isinstance(shift, str):
        raise ValidationError(f"unknown shift {shift!r}")
    return float(shift)


def s_shift_check(rho, label, s: float, t: float, grid: SphereGrid | None = None,
                  shift: str | float = "leading", relative: bool = False) -> float:
    """max |W^(s)_{rho(t)} - W^(s - shift)_{rho(0)}| over the grid.

    With ``relative=True`` the deviation is divided by max |W^(s)_{rho(t)} -
    W^(s)_{rho(0)}|, i.e. measured against the change the channel produces.
    """
    label = as_label(label)
    grid = default_grid(label) if grid is None else grid
    evolved = wigner_s(evolve(rho, label, t), label, s, grid).values
    approx = wigner_s(rho, label, s - order_shift(label, t, shift), grid).values
    dev = float(np.max(np.abs(evolved - approx)))
    if not relative:
        return dev
    change = float(np.max(np.abs(evolved - wigner_s(rho, label, s, grid).values)))
    if change == 0:
        raise DomainError("state is unchanged by the channel; relative deviation undefined")
    return dev / change


_DEGENERATE_EXCESS = 1e-14


def scs_quasiprob(rho, label, s: float = 0.0, grid: SphereGrid | None = None) -> FlaggedValue:
    """-int W^(-s)_rho W^(s)_{d rho/dt} / int W^(-s)_rho W^(s)_rho.

    Both integrals are evaluated by quadrature; d rho/dt comes from
    ``lindblad_rhs``. The maximally mixed state returns 0 flagged degenerate.
    """
    label = as_label(label)
    require_spin(label)
    rho = check_density_matrix(rho, label.dim)
    grid = default_grid(label) if grid is None else grid
    weights = decompose(rho, label).rank_weights()
    if weights[1:].sum() < _DEGENERATE_EXCESS:
        return FlaggedValue(0.0, True)
    w_minus = wigner_s(rho, label, -s, grid).values
    w_plus = wigner_s(rho, label, s, grid).values
    w_rate = operator_field(lindblad_rhs(rho, label), label, s, grid, hermitian=True).values
    den = grid.integrate(w_minus * w_plus)
    if abs(den) < 1e-300:
        raise DomainError("vanishing purity integral")
    return FlaggedValue(float(-grid.integrate(w_minus * w_rate) / den), False)


def diagonal_representation(p_field: SphereField, label) -> np.ndarray:
    """(2J+1)/4pi int W^(1)(Omega) |Omega><Omega| dOmega by quadrature."""
    from .spin import spin_coherent_state

    label = as_label(label)
    grid = p_field.grid
    states = np.array([spin_coherent_state(label, t, p) for t, p in zip(grid.theta, grid.phi)])
    w = grid.weights * np.real(p_field.values)
    rho = np.einsum("n,na,nb->ab", w, states, states.conj())
    return label.dim / (4 * np.pi) * rho
