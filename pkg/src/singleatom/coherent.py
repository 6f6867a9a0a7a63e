"""Coherent dark-state physics: CPT, STIRAP, tripod readout, Larmor precession.

Pure-state dynamics only.  Loss from the optically excited intermediate
level is modeled by a non-Hermitian -i*Gamma/2 term, so the norm leak of
the trajectory equals the accumulated scattering probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, MU_B
from .integrator import integrate

__all__ = [
    "PureState",
    "Pulse",
    "PulseSchedule",
    "StirapResult",
    "lambda_dark_state",
    "ground_start",
    "stirap_evolve",
    "tripod_dark_states",
    "stirap_readout_probability",
    "larmor_frequency",
    "larmor_evolve",
    "larmor_survival",
]

LAMBDA_BASIS = ("a", "b", "c")
TRIPOD_BASIS = ("b-", "b+", "c", "a")
ZEEMAN_BASIS = ("m=-1", "m=+1")


@dataclass(frozen=True)
class PureState:
    """Complex amplitudes over a labeled basis, normalized unless leaky."""

    amplitudes: np.ndarray
    basis_labels: tuple[str, ...]

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        if amps.ndim != 1 or len(amps) != len(self.basis_labels):
            raise ValueError("one amplitude per basis label required")

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def amplitude(self, label: str) -> complex:
        return complex(self.amplitudes[self.basis_labels.index(label)])

    def population(self, label: str) -> float:
        return abs(self.amplitude(label)) ** 2

    def overlap(self, other: "PureState") -> complex:
        if self.basis_labels != other.basis_labels:
            raise ValueError("states live on different bases")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class Pulse:
    """One smooth pulse envelope; ``shape`` is 'sin2' or 'gauss'."""

    peak: float
    t_start: float
    duration: float
    phase: float = 0.0
    shape: str = "sin2"

    def __post_init__(self):
        if self.peak < 0 or self.duration <= 0:
            raise ValueError("peak must be nonnegative and duration positive")
        if self.shape not in ("sin2", "gauss"):
            raise ValueError("shape must be 'sin2' or 'gauss'")

    def envelope(self, t: float) -> float:
        x = (t - self.t_start) / self.duration
        if self.shape == "sin2":
            if not 0.0 <= x <= 1.0:
                return 0.0
            return self.peak * math.sin(math.pi * x) ** 2
        # truncated Gaussian centered on the pulse window
        sigma = self.duration / 6.0
        center = self.t_start + self.duration / 2.0
        if not 0.0 <= x <= 1.0:
            return 0.0
        return self.peak * math.exp(-0.5 * ((t - center) / sigma) ** 2)


@dataclass(frozen=True)
class PulseSchedule:
    """Pump (couples a-b) and Stokes (couples a-c) pulse pair."""

    pump: Pulse
    stokes: Pulse

    @classmethod
    def sin2_pair(cls, peak: float, duration: float, delay: float | None = None,
                  order: str = "counterintuitive",
                  phases: tuple[float, float] = (0.0, 0.0)) -> "PulseSchedule":
        """Two identical sin^2 pulses separated by ``delay``.

        The default delay is half the pulse width (FWHM), i.e. a quarter of
        the full duration, which keeps a long adiabatic overlap.
        Counter-intuitive order puts the Stokes pulse first; intuitive order
        puts the pump first."""
        if delay is None:
            delay = duration / 4.0
        if order == "counterintuitive":
            stokes_start, pump_start = 0.0, delay
        elif order == "intuitive":
            pump_start, stokes_start = 0.0, delay
        else:
            raise ValueError("order must be 'counterintuitive' or 'intuitive'")
        return cls(
            pump=Pulse(peak=peak, t_start=pump_start, duration=duration, phase=phases[0]),
            stokes=Pulse(peak=peak, t_start=stokes_start, duration=duration, phase=phases[1]),
        )

    @property
    def t_end(self) -> float:
        return max(self.pump.t_start + self.pump.duration,
                   self.stokes.t_start + self.stokes.duration)


@dataclass(frozen=True)
class StirapResult:
    final_state: PureState
    efficiency: float              # population of |c> at the end
    max_intermediate: float        # max over time of the |a> population
    norm_leak: float               # 1 - final norm^2
    scattered: float               # integral of Gamma * |c_a|^2 dt


def lambda_dark_state(phi1: float, phi2: float) -> PureState:
    """Non-absorbing ground-state superposition (|b> - e^{i(phi1-phi2)} |c>)/sqrt(2)."""
    phase = phi1 - phi2
    amps = np.array([0.0, 1.0, -np.exp(1j * phase)], dtype=complex) / math.sqrt(2.0)
    return PureState(amplitudes=amps, basis_labels=LAMBDA_BASIS)


def ground_start() -> PureState:
    """All population in |b>, the usual transfer starting point."""
    return PureState(amplitudes=np.array([0.0, 1.0, 0.0], dtype=complex),
                     basis_labels=LAMBDA_BASIS)


def stirap_evolve(schedule: PulseSchedule, initial: PureState,
                  detunings: tuple[float, float, float] = (0.0, 0.0, 0.0),
                  loss_gamma: float = 0.0, n_steps: int = 4000) -> StirapResult:
    """Integrate the three-level Schroedinger equation under the pulse pair.

    ``detunings`` are the rotating-frame diagonal terms of (a, b, c);
    ``loss_gamma`` adds -i*Gamma/2 on the intermediate level a, so norm is
    non-increasing and the leak equals the scattered population.
    """
    if initial.basis_labels != LAMBDA_BASIS:
        raise ValueError("initial state must live on the (a, b, c) basis")
    if loss_gamma < 0:
        raise ValueError("loss_gamma must be nonnegative")
    d_a, d_b, d_c = detunings
    pump, stokes = schedule.pump, schedule.stokes
    # drive element <a|H|b> = -(Omega/2) e^{+i phi}; with this sign the
    # stationary dark state is (|b> - e^{i(phi1-phi2)} |c>)/sqrt(2)
    e_p = np.exp(1j * pump.phase)
    e_s = np.exp(1j * stokes.phase)

    def rhs(t, y):
        c_a, c_b, c_c, _ = y
        om_p = pump.envelope(t)
        om_s = stokes.envelope(t)
        dc_a = (-1j * d_a - loss_gamma / 2.0) * c_a \
            + 1j * om_p / 2.0 * e_p * c_b + 1j * om_s / 2.0 * e_s * c_c
        dc_b = -1j * d_b * c_b + 1j * om_p / 2.0 * np.conj(e_p) * c_a
        dc_c = -1j * d_c * c_c + 1j * om_s / 2.0 * np.conj(e_s) * c_a
        scattered = loss_gamma * (c_a.real**2 + c_a.imag**2)
        return np.array([dc_a, dc_b, dc_c, scattered], dtype=complex)

    t_grid = np.linspace(0.0, schedule.t_end, n_steps)
    y0 = np.concatenate([initial.amplitudes, [0.0]]).astype(complex)
    traj = integrate(rhs, y0, t_grid)
    amps = traj[-1, :3]
    final = PureState(amplitudes=amps, basis_labels=LAMBDA_BASIS)
    max_a = float(np.max(np.abs(traj[:, 0]) ** 2))
    return StirapResult(
        final_state=final,
        efficiency=float(abs(amps[2]) ** 2),
        max_intermediate=max_a,
        norm_leak=1.0 - final.norm_sq,
        scattered=float(traj[-1, 3].real),
    )


def tripod_dark_states(theta: float, big_phi: float, phi1: float,
                       phi2: float) -> tuple[PureState, PureState]:
    """The two degenerate dark states of the resonant tripod system.

    Mixing angles: tan(theta) = pump/Stokes, tan(Phi) = sigma-/sigma+ pump
    components; phi1 and phi2 are the relative phases of the sigma+ pump
    and Stokes fields against the sigma- pump.
    """
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(big_phi), math.sin(big_phi)
    d1 = np.array([
        ct * sp,
        ct * cp * np.exp(1j * phi1),
        -st * np.exp(1j * phi2),
        0.0,
    ], dtype=complex)
    d2 = np.array([cp, -sp * np.exp(1j * phi1), 0.0, 0.0], dtype=complex)
    return (
        PureState(amplitudes=d1, basis_labels=TRIPOD_BASIS),
        PureState(amplitudes=d2, basis_labels=TRIPOD_BASIS),
    )


def stirap_readout_probability(prep_phase: float, alpha_pol: float) -> float:
    """Probability that the prepared Zeeman superposition stays dark.

    The prepared state (|m=-1> - e^{i chi} |m=+1>)/sqrt(2) is compared with
    the dark state of a pump field polarized at angle alpha, giving
    sin^2(alpha - chi/2).
    """
    return math.sin(alpha_pol - prep_phase / 2.0) ** 2


def larmor_frequency(b_z: float, g_f: float = -0.5) -> float:
    """Larmor angular frequency |mu_B g_F B_z| / hbar (rad/s)."""
    return abs(MU_B * g_f * b_z) / HBAR


def larmor_evolve(b_z: float, g_f: float, t: float,
                  initial_phase: float = 0.0) -> PureState:
    """Zeeman superposition after precessing for time t in a field B_z.

    The relative phase between m = -1 and m = +1 advances at twice the
    Larmor frequency.
    """
    omega_l = larmor_frequency(b_z, g_f)
    phase = initial_phase + 2.0 * omega_l * t
    amps = np.array([1.0, -np.exp(1j * phase)], dtype=complex) / math.sqrt(2.0)
    return PureState(amplitudes=amps, basis_labels=ZEEMAN_BASIS)


def larmor_survival(b_z: float, g_f: float, t: float) -> float:
    """Overlap probability with the initial superposition, cos^2(w_L t)."""
    return math.cos(larmor_frequency(b_z, g_f) * t) ** 2
