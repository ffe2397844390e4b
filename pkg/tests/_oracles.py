"""Independent reference implementations used only by the tests."""
import numpy as np


def rk4(rhs, y0, t_end, steps):
    y = np.array(y0, dtype=complex)
    h = t_end / steps
    for _ in range(steps):
        k1 = rhs(y)
        k2 = rhs(y + h / 2 * k1)
        k3 = rhs(y + h / 2 * k2)
        k4 = rhs(y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def lindblad_dissipator(rho, ops, rate):
    """rate * sum_i (L rho L^dagger - {L^dagger L, rho}/2) for Hermitian L."""
    out = np.zeros_like(rho)
    for op in ops:
        out += op @ rho @ op - 0.5 * (op @ op @ rho + rho @ op @ op)
    return rate * out
