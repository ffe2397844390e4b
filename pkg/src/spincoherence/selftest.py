"""Fast internal consistency checks behind ``spincoherence selftest``."""
from __future__ import annotations

import numpy as np

from .channel import evolve, lindblad_rhs, scs_from_purity
from .coherence import scs_commutator, scs_offdiagonal, scs_simple
from .metrology import covariance_matrix
from .quasiprob import husimi, overlap, scs_quasiprob, wigner_s
from .spin import SpinLabel, projector, random_density_matrix, random_pure_state, spin_coherent_state
from .sun import IrrepLabel, casimir_residual, fundamental_equivalence_check


def _check(name: str, residual: float, tol: float):
    return name, bool(residual <= tol), f"residual {residual:.3e} (tol {tol:g})"


def run_selftest(seed: int = 2024) -> list[tuple[str, bool, str]]:
    rng = np.random.default_rng(seed)
    out = []
    label = SpinLabel(3)
    rho = random_density_matrix(label.dim, rng)

    forms = [scs_offdiagonal(rho, label), scs_commutator(rho, label), scs_simple(rho, label)]
    out.append(_check("definitions agree", max(forms) - min(forms), 1e-10))

    coh = projector(spin_coherent_state(label, 0.7, 1.9))
    out.append(_check("coherent state at threshold", abs(scs_commutator(coh, label) - 1), 1e-10))

    # one classical RK4 step against the analytic flow
    h = 1e-3
    k1 = lindblad_rhs(rho, label)
    k2 = lindblad_rhs(rho + h / 2 * k1, label)
    k3 = lindblad_rhs(rho + h / 2 * k2, label)
    k4 = lindblad_rhs(rho + h * k3, label)
    rk = rho + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    out.append(_check("channel matches RK4 step", float(np.max(np.abs(rk - evolve(rho, label, h)))), 1e-12))

    out.append(_check("A^2 from purity decay",
                      abs(scs_from_purity(rho, label).value - forms[1]), 1e-10))

    q = husimi(rho, label)
    out.append(_check("Husimi normalization", abs(q.normalization(label) - 1), 1e-9))
    sigma = random_density_matrix(label.dim, rng)
    ov = overlap(wigner_s(rho, label, 0.5), wigner_s(sigma, label, -0.5), label)
    out.append(_check("overlap relation", abs(ov - np.vdot(rho, sigma).real), 1e-8))
    out.append(_check("A^2 from quasiprobabilities",
                      abs(scs_quasiprob(rho, label, 0.0).value - forms[1]), 1e-7))

    psi = random_pure_state(label.dim, rng)
    out.append(_check("Tr Cov = J A^2",
                      abs(np.trace(covariance_matrix(psi, label)) - label.j * scs_commutator(projector(psi), label)),
                      1e-10))

    out.append(_check("SU(3) Casimir", casimir_residual(IrrepLabel(3, 2)), 1e-10))
    rep = fundamental_equivalence_check(3)
    out.append(_check("SU(3) fundamental channel",
                      max(rep.sandwich_residual, rep.flow_residual, rep.casimir_residual), 1e-10))
    return out
