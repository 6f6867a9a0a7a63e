"""Shared ODE integration helpers.

Every time evolution in the package runs through the same adaptive
embedded Runge-Kutta 4(5) integrator (rtol 1e-9, atol 1e-12).  A fixed-step
RK4 is kept for bit-reproducible regression snapshots.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

RTOL = 1e-9
ATOL = 1e-12


class IntegrationError(RuntimeError):
    """Raised when the adaptive integrator fails to complete a trajectory."""


def integrate(f, y0, t_grid, rtol: float = RTOL, atol: float = ATOL) -> np.ndarray:
    """Integrate dy/dt = f(t, y) and sample the solution on ``t_grid``.

    Returns an array of shape (len(t_grid), len(y0)).  ``t_grid`` must be
    nondecreasing and start at the initial time.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) == 0:
        raise ValueError("t_grid must be a nonempty 1-D array")
    if np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be nondecreasing")
    y0 = np.asarray(y0)
    if len(t_grid) == 1:
        return y0[None, :].copy()
    sol = solve_ivp(
        f, (t_grid[0], t_grid[-1]), y0, method="RK45",
        t_eval=t_grid, rtol=rtol, atol=atol,
    )
    if not sol.success:
        raise IntegrationError(f"RK45 failed: {sol.message}")
    return sol.y.T


def rk4_fixed(f, y0, t_grid, substeps: int = 1) -> np.ndarray:
    """Classical fixed-step RK4 on the given grid (reproducibility fallback)."""
    t_grid = np.asarray(t_grid, dtype=float)
    y = np.asarray(y0).astype(complex if np.iscomplexobj(y0) else float)
    out = np.empty((len(t_grid), len(y)), dtype=y.dtype)
    out[0] = y
    for i in range(len(t_grid) - 1):
        t0, t1 = t_grid[i], t_grid[i + 1]
        h = (t1 - t0) / substeps
        for k in range(substeps):
            t = t0 + k * h
            k1 = f(t, y)
            k2 = f(t + h / 2, y + h / 2 * k1)
            k3 = f(t + h / 2, y + h / 2 * k2)
            k4 = f(t + h, y + h * k3)
            y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i + 1] = y
    return out
