"""Second-order correlation function of a driven two-level atom.

After a photon detection the atom is projected to the ground state, so
g2(tau) equals the re-excitation probability rho_ee(tau) normalized by its
steady-state value (quantum regression).  The closed-form damped-Rabi
expression and a direct optical-Bloch-equation integration are both
provided; they agree to integrator precision on resonance.
"""

from __future__ import annotations

import numpy as np

from ..integrator import integrate

__all__ = [
    "two_level_g2_analytic",
    "two_level_obe_g2",
    "two_level_steady_excited",
]


def two_level_g2_analytic(omega0_rabi: float, delta: float, gamma: float,
                          tau_grid) -> np.ndarray:
    """g2(tau) = 1 - exp(-3*G*tau/4) [cos(Or*tau) + (3G/4Or) sin(Or*tau)].

    Or^2 = Omega0^2 + Delta^2 - (G/4)^2.  For Or^2 < 0 the analytically
    continued (overdamped) form with hyperbolic functions is used, and the
    Or = 0 limit is handled explicitly.  g2(0) = 0 for any parameters.
    """
    tau = np.asarray(tau_grid, dtype=float)
    g = gamma
    or_sq = omega0_rabi**2 + delta**2 - (g / 4.0) ** 2
    envelope = np.exp(-3.0 * g * tau / 4.0)
    if or_sq > 0:
        omega_r = np.sqrt(or_sq)
        osc = np.cos(omega_r * tau) + (3 * g / (4 * omega_r)) * np.sin(omega_r * tau)
    elif or_sq < 0:
        kappa = np.sqrt(-or_sq)
        osc = np.cosh(kappa * tau) + (3 * g / (4 * kappa)) * np.sinh(kappa * tau)
    else:
        osc = 1.0 + 3 * g * tau / 4.0
    return 1.0 - envelope * osc


def two_level_steady_excited(omega0_rabi: float, delta: float, gamma: float) -> float:
    """Steady-state excited population (Omega^2/4)/(Delta^2 + Omega^2/2 + Gamma^2/4)."""
    return (omega0_rabi**2 / 4.0) / (delta**2 + omega0_rabi**2 / 2.0 + gamma**2 / 4.0)


def _obe_rhs(omega: float, delta: float, gamma: float):
    # y = (rho_ee, u, v) with (u, v) the coherence quadratures; rho_gg
    # eliminated by the trace
    def rhs(_t, y):
        p_ee, u, v = y
        return np.array([
            -gamma * p_ee + omega * v,
            -gamma / 2.0 * u - delta * v,
            delta * u - gamma / 2.0 * v - omega / 2.0 * (2 * p_ee - 1.0),
        ])
    return rhs


def two_level_obe_g2(omega0_rabi: float, delta: float, gamma: float,
                     tau_grid) -> np.ndarray:
    """g2(tau) from direct integration of the two-level Bloch equations.

    Starts from the post-detection state (all population in the ground
    level, no coherence) and divides by the steady-state excited population.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    steady = two_level_steady_excited(omega0_rabi, delta, gamma)
    if steady <= 0:
        raise ValueError("no steady-state excitation: drive is off")
    tau = np.asarray(tau_grid, dtype=float)
    if np.any(tau < 0):
        raise ValueError("delays must be nonnegative")
    prepend = len(tau) == 0 or tau[0] != 0.0
    grid = np.concatenate([[0.0], tau]) if prepend else tau
    traj = integrate(_obe_rhs(omega0_rabi, delta, gamma), np.zeros(3), grid)
    if prepend:
        traj = traj[1:]
    return traj[:, 0] / steady
