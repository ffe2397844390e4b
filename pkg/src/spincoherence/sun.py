"""SU(n) on the symmetric irrep (N, 0, ..., 0): N bosons in n modes.

Generators come from the Jordan map J_i = sum_kl a_k^dagger (lambda_i / 2)_kl a_l
with lambda_i the generalized Gell-Mann matrices, ordered as

* symmetric pairs   (a_i^dag a_j + a_j^dag a_i) / 2,      i < j
* antisymmetric     (a_i^dag a_j - a_j^dag a_i) / 2i,     i < j
* Cartan            (sum_{l<k} n_l - (k-1) n_k) / sqrt(2k(k-1)),  k = 2..n

(0-based modes, k counted from 1). For n = 2 these are exactly the spin-J
matrices J_1, J_2, J_3 in the Dicke basis with N = 2J.

The coherence scale is A_n^2 = C_n(N)/J_n - sum_i Tr(J_i rho J_i rho)/(J_n P)
with Casimir C_n(N) = N(N+n)(n-1)/2n and normalization J_n = N(n-1)/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from ._errors import DegenerateStateError, ValidationError
from .spin import check_density_matrix, exp_i_hermitian, purity, random_density_matrix

PURITY_FLOOR = 1e-14


@dataclass(frozen=True)
class IrrepLabel:
    """Symmetric irrep of SU(n) with N excitations."""

    n: int
    N: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValidationError(f"n must be an integer >= 2, got {self.n!r}")
        if int(self.N) != self.N or self.N < 1:
            raise ValidationError(f"N must be an integer >= 1, got {self.N!r}")

    @property
    def dim(self) -> int:
        return math.comb(self.N + self.n - 1, self.n - 1)

    @property
    def num_generators(self) -> int:
        return self.n * self.n - 1


def _compositions(total: int, parts: int):
    """Occupations summing to ``total`` in lexicographically decreasing order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _fock_basis(n: int, N: int) -> tuple[tuple[int, ...], ...]:
    return tuple(_compositions(N, n))


def fock_basis(label: IrrepLabel) -> list[tuple[int, ...]]:
    """Occupation vectors, |N, 0, ..., 0> first."""
    return list(_fock_basis(label.n, label.N))


def _hopping(n: int, N: int, i: int, j: int) -> np.ndarray:
    """Matrix of a_i^dagger a_j on the irrep (Fock states normalized by 1/sqrt(m!))."""
    basis = _fock_basis(n, N)
    index = {m: k for k, m in enumerate(basis)}
    out = np.zeros((len(basis), len(basis)))
    for col, m in enumerate(basis):
        if m[j] == 0:
            continue
        if i == j:
            out[col, col] = m[j]
            continue
        target = list(m)
        target[j] -= 1
        target[i] += 1
        out[index[tuple(target)], col] = math.sqrt(m[j] * (m[i] + 1))
    return out


@lru_cache(maxsize=None)
def _generators(n: int, N: int) -> tuple[np.ndarray, ...]:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    hop = {(i, j): _hopping(n, N, i, j) for i in range(n) for j in range(n)}
    gens = []
    for i, j in pairs:
        gens.append((hop[i, j] + hop[j, i]).astype(complex) / 2)
    for i, j in pairs:
        gens.append((hop[i, j] - hop[j, i]) / 2j)
    for k in range(2, n + 1):
        diag = sum(hop[l, l] for l in range(k - 1)) - (k - 1) * hop[k - 1, k - 1]
        gens.append(diag.astype(complex) / math.sqrt(2 * k * (k - 1)))
    for g in gens:
        g.setflags(write=False)
    return tuple(gens)


def sun_generators(label: IrrepLabel) -> tuple[np.ndarray, ...]:
    """The n^2 - 1 Hermitian generators on the irrep (read-only)."""
    return _generators(label.n, label.N)


def casimir_value(label: IrrepLabel) -> float:
    n, N = label.n, label.N
    return N * (N + n) * (n - 1) / (2 * n)


def normalization(label: IrrepLabel) -> float:
    """J_n = N(n-1)/2, chosen so coherent states sit at A_n^2 = 1."""
    return label.N * (label.n - 1) / 2


def casimir_residual(label: IrrepLabel) -> float:
    """max |sum_i J_i^2 - C_n(N) I| over matrix entries."""
    total = sum(g @ g for g in sun_generators(label))
    return float(np.max(np.abs(total - casimir_value(label) * np.eye(label.dim))))


def sun_casimir(label: IrrepLabel) -> float:
    """C_n(N) = N(N+n)(n-1)/2n."""
    return casimir_value(label)


# -- coherence scale ---------------------------------------------------------

def _prepare(rho, label: IrrepLabel):
    rho = check_density_matrix(rho, label.dim)
    p = purity(rho)
    if p < PURITY_FLOOR:
        raise DegenerateStateError(f"purity {p!r} below floor {PURITY_FLOOR}")
    return rho, p


def scs_sun(rho, label: IrrepLabel) -> float:
    """A_n^2 = C_n(N)/J_n - sum_i Tr(J_i rho J_i rho) / (J_n P)."""
    rho, p = _prepare(rho, label)
    overlap = sum(float(np.vdot(rho, g @ rho @ g).real) for g in sun_generators(label))
    jn = normalization(label)
    return casimir_value(label) / jn - overlap / (jn * p)


def scs_sun_commutator(rho, label: IrrepLabel) -> float:
    """(1/2 J_n P) sum_i ||[rho, J_i]||_F^2."""
    rho, p = _prepare(rho, label)
    total = 0.0
    for g in sun_generators(label):
        c = rho @ g - g @ rho
        total += float(np.vdot(c, c).real)
    return total / (2 * normalization(label) * p)


def generator_expectations(psi, label: IrrepLabel) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.array([np.vdot(psi, g @ psi).real for g in sun_generators(label)])


def one_body_density(psi, label: IrrepLabel) -> np.ndarray:
    """<a_i^dagger a_j> / N; rank one exactly for SU(n) coherent states."""
    psi = np.asarray(psi, dtype=complex)
    n, N = label.n, label.N
    out = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            out[i, j] = np.vdot(psi, _hopping(n, N, i, j) @ psi)
    return out / N


# -- coherent states and Haar sampling ---------------------------------------

def reference_state(label: IrrepLabel) -> np.ndarray:
    psi = np.zeros(label.dim, dtype=complex)
    psi[0] = 1.0
    return psi


def sun_coherent_state(label: IrrepLabel, hermitian_direction, theta: float) -> np.ndarray:
    """exp(i theta J.n)|N, 0, ..., 0> for a unit (n^2 - 1)-vector n."""
    direction = np.asarray(hermitian_direction, dtype=float)
    if direction.shape != (label.num_generators,):
        raise ValidationError(f"direction must have {label.num_generators} components, got shape {direction.shape}")
    if abs(np.linalg.norm(direction) - 1) > 1e-12:
        raise ValidationError("direction must be a unit vector")
    h = np.tensordot(direction, np.array(sun_generators(label)), axes=1)
    return exp_i_hermitian(h, theta) @ reference_state(label)


def haar_su(n: int, rng=None) -> np.ndarray:
    """Haar-random element of SU(n) (QR of a complex Ginibre matrix)."""
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return q / np.linalg.det(q) ** (1 / n)


def su_coefficients(u: np.ndarray) -> np.ndarray:
    """c with u = exp(i c.lambda/2) up to a central phase.

    The logarithm's trace is projected out, which changes u only by an n-th
    root of unity; that phase is global on every irrep.
    """
    n = u.shape[0]
    h = -1j * scipy.linalg.logm(u)
    h = (h + h.conj().T) / 2
    h -= np.trace(h) / n * np.eye(n)
    fund = sun_generators(IrrepLabel(n, 1))
    return np.array([2 * np.trace(h @ g).real for g in fund])


def irrep_unitary(u: np.ndarray, label: IrrepLabel) -> np.ndarray:
    """Image of a fundamental SU(n) matrix on the symmetric irrep, up to a global phase."""
    if u.shape != (label.n, label.n):
        raise ValidationError(f"expected a {label.n}x{label.n} matrix, got {u.shape}")
    c = su_coefficients(u)
    h = np.tensordot(c, np.array(sun_generators(label)), axes=1)
    return exp_i_hermitian(h, 1.0)


def random_coherent_state(label: IrrepLabel, rng=None) -> np.ndarray:
    rng = np.random.default_rng(rng)
    return irrep_unitary(haar_su(label.n, rng), label) @ reference_state(label)


def sun_classical_sample(label: IrrepLabel, num_components: int, rng=None) -> np.ndarray:
    """Dirichlet-weighted mixture of Haar-random SU(n) coherent states."""
    if num_components < 1:
        raise ValidationError(f"num_components must be >= 1, got {num_components}")
    rng = np.random.default_rng(rng)
    weights = rng.dirichlet(np.ones(num_components))
    rho = np.zeros((label.dim, label.dim), dtype=complex)
    for w in weights:
        psi = random_coherent_state(label, rng)
        rho += w * np.outer(psi, psi.conj())
    return (rho + rho.conj().T) / 2


def sun_classical_bound_check(label: IrrepLabel, num_components: int, rng_seed,
                              num_samples: int = 1) -> float:
    """Largest A_n^2 over ``num_samples`` random classical mixtures; stays <= 1."""
    rng = np.random.default_rng(rng_seed)
    return max(scs_sun(sun_classical_sample(label, num_components, rng), label)
               for _ in range(num_samples))


def scs_sun_invariance_check(rho, label: IrrepLabel, num_unitaries: int, seed) -> float:
    """max |A_n^2(U rho U^dagger) - A_n^2(rho)| over Haar-random U."""
    rng = np.random.default_rng(seed)
    rho = check_density_matrix(rho, label.dim)
    base = scs_sun(rho, label)
    worst = 0.0
    for _ in range(num_unitaries):
        u = irrep_unitary(haar_su(label.n, rng), label)
        rotated = u @ rho @ u.conj().T
        worst = max(worst, abs(scs_sun((rotated + rotated.conj().T) / 2, label) - base))
    return worst


# -- SU(n)-invariant depolarization -----------------------------------------

def sun_depol_rhs(rho, label: IrrepLabel) -> np.ndarray:
    """-(1/2) sum_i [J_i, [J_i, rho]]."""
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros_like(rho)
    for g in sun_generators(label):
        c = g @ rho - rho @ g
        out += g @ c - c @ g
    return -out / 2


def _superoperator(label: IrrepLabel) -> np.ndarray:
    """sum_i G_i^2 with G_i = J_i (x) I - I (x) J_i^T (row-major vec)."""
    eye = np.eye(label.dim)
    total = np.zeros((label.dim**2, label.dim**2), dtype=complex)
    for g in sun_generators(label):
        big = np.kron(g, eye) - np.kron(eye, g.T)
        total += big @ big
    return total


def sun_evolve(rho, label: IrrepLabel, t: float) -> np.ndarray:
    """Exact channel evolution by spectral decomposition of the generator."""
    if not np.isfinite(t) or t < 0:
        raise ValidationError(f"channel time must be nonnegative, got {t!r}")
    rho = check_density_matrix(rho, label.dim)
    w, v = np.linalg.eigh(_superoperator(label))
    vec = v @ (np.exp(-0.5 * w * t) * (v.conj().T @ rho.reshape(-1)))
    out = vec.reshape(label.dim, label.dim)
    return (out + out.conj().T) / 2


@dataclass(frozen=True)
class EquivalenceReport:
    n: int
    sandwich_residual: float  # max |sum J rho J - (I/2 - rho/2n)|
    flow_residual: float  # max |rho(t) - ((1-p) rho + p I/n)|, p = 1 - exp(-n t/2)
    casimir_residual: float  # |C_n(1) + 1/2n - n/2|
    rate: float  # dp/dt at t = 0
    tol: float = 1e-10

    @property
    def passed(self) -> bool:
        return max(self.sandwich_residual, self.flow_residual, self.casimir_residual) <= self.tol

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "sandwich_residual": self.sandwich_residual,
            "flow_residual": self.flow_residual,
            "casimir_residual": self.casimir_residual,
            "rate": self.rate,
            "passed": self.passed,
        }


def depolarizing_parameter(n: int, t: float) -> float:
    """p(t) = 1 - exp(-n t / 2), so dp/dt = n/2 at t = 0."""
    return -math.expm1(-n * t / 2)


def fundamental_equivalence_check(n: int, rng_seed=0, times=(0.1, 0.5, 2.0),
                                  num_states: int = 5) -> EquivalenceReport:
    """Compare the invariant channel with (1 - p) rho + p I/n on N = 1."""
    label = IrrepLabel(n, 1)
    rng = np.random.default_rng(rng_seed)
    eye = np.eye(n)
    sandwich = flow = 0.0
    for _ in range(num_states):
        rho = random_density_matrix(n, rng)
        s = sum(g @ rho @ g for g in sun_generators(label))
        sandwich = max(sandwich, float(np.max(np.abs(s - (eye / 2 - rho / (2 * n))))))
        for t in times:
            p = depolarizing_parameter(n, t)
            target = (1 - p) * rho + p * eye / n
            flow = max(flow, float(np.max(np.abs(sun_evolve(rho, label, t) - target))))
    cas = abs(casimir_value(label) + 1 / (2 * n) - n / 2)
    return EquivalenceReport(n, sandwich, flow, cas, n / 2)
