"""Two-qubit entanglement algebra: Bell states, correlations, CHSH, fidelity.

Conventions: computational basis ordered (uu, ud, du, dd); an equatorial
analyzer angle phi measures along the Bloch direction (cos phi, sin phi, 0).
For the singlet the trace formula gives E(a, b) = -a.b, i.e.
-cos(phi_A - phi_B) for equatorial settings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TwoQubitState",
    "MeasurementSetting",
    "bell_state",
    "singlet_joint_probability",
    "singlet_conditional_probability",
    "correlation",
    "chsh",
    "clauser_horne",
    "fidelity",
    "noisy_channel",
    "fidelity_lower_bound",
    "rotation_pair_for_bound",
    "visibility_to_fidelity",
    "atom_photon_state",
    "AtomPhotonState",
    "correlation_curve",
    "teleport_decompose",
    "swap_decompose",
    "pair_rate_estimate",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)

# kets over (up, down)
_UP = np.array([1.0, 0.0], dtype=complex)
_DOWN = np.array([0.0, 1.0], dtype=complex)

_BELL_VECTORS = {
    "psi+": (np.kron(_UP, _DOWN) + np.kron(_DOWN, _UP)) / math.sqrt(2),
    "psi-": (np.kron(_UP, _DOWN) - np.kron(_DOWN, _UP)) / math.sqrt(2),
    "phi+": (np.kron(_UP, _UP) + np.kron(_DOWN, _DOWN)) / math.sqrt(2),
    "phi-": (np.kron(_UP, _UP) - np.kron(_DOWN, _DOWN)) / math.sqrt(2),
}


@dataclass(frozen=True)
class TwoQubitState:
    """4x4 density matrix over (uu, ud, du, dd) with physicality checks."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        object.__setattr__(self, "rho", rho)
        if rho.shape != (4, 4):
            raise ValueError("rho must be 4x4")
        if np.abs(rho - rho.conj().T).max() > 1e-10:
            raise ValueError("rho must be Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-8:
            raise ValueError("rho must have unit trace")
        if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -1e-8:
            raise ValueError("rho must be positive semidefinite")

    @classmethod
    def from_vector(cls, psi: np.ndarray) -> "TwoQubitState":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(rho=np.outer(psi, psi.conj()))


@dataclass(frozen=True)
class MeasurementSetting:
    """Analyzer direction: either an equatorial angle or a full Bloch vector."""

    phi: float | None = None
    direction: tuple[float, float, float] | None = None

    def __post_init__(self):
        if (self.phi is None) == (self.direction is None):
            raise ValueError("give exactly one of phi or direction")
        if self.direction is not None:
            vec = np.asarray(self.direction, dtype=float)
            if abs(np.linalg.norm(vec) - 1.0) > 1e-9:
                raise ValueError("direction must be a unit vector")

    @property
    def bloch_vector(self) -> np.ndarray:
        if self.phi is not None:
            return np.array([math.cos(self.phi), math.sin(self.phi), 0.0])
        return np.asarray(self.direction, dtype=float)

    @property
    def operator(self) -> np.ndarray:
        n = self.bloch_vector
        return n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z


def bell_state(which: str) -> TwoQubitState:
    """Pure density matrix of one of the four Bell states.

    Accepts 'psi+', 'psi-', 'phi+', 'phi-' (case-insensitive).
    """
    key = which.lower().replace("ψ", "psi").replace("φ", "phi")
    if key not in _BELL_VECTORS:
        raise ValueError(f"unknown Bell state {which!r}")
    return TwoQubitState.from_vector(_BELL_VECTORS[key])


def singlet_joint_probability(phi_a: float, phi_b: float) -> float:
    """Joint click probability on the singlet: sin^2((phi_A-phi_B)/2) / 2."""
    return 0.5 * math.sin((phi_a - phi_b) / 2.0) ** 2


def singlet_conditional_probability(phi_a: float, phi_b: float) -> float:
    """P(A at phi_A | B found at phi_B) = sin^2((phi_A-phi_B)/2)."""
    return math.sin((phi_a - phi_b) / 2.0) ** 2


def correlation(state: TwoQubitState, a: MeasurementSetting,
                b: MeasurementSetting) -> float:
    """Spin correlation E = tr(rho sigma.a x sigma.b), in [-1, 1]."""
    op = np.kron(a.operator, b.operator)
    return float(np.trace(state.rho @ op).real)


def chsh(state: TwoQubitState, a: MeasurementSetting, a2: MeasurementSetting,
         b: MeasurementSetting, b2: MeasurementSetting) -> float:
    """CHSH combination S = |E(a,b)-E(a,b')| + |E(a',b)+E(a',b')| (LHV bound 2)."""
    return abs(correlation(state, a, b) - correlation(state, a, b2)) + abs(
        correlation(state, a2, b) + correlation(state, a2, b2)
    )


def clauser_horne(n_ab: float, n_ab2: float, n_a2b: float, n_a2b2: float,
                  n_a2: float, n_b: float) -> float:
    """Clauser-Horne count-rate ratio; local-realistic bound is 1.

    (N(a,b) - N(a,b') + N(a',b) + N(a',b')) / (N_A(a') + N_B(b)).
    """
    denom = n_a2 + n_b
    if denom <= 0:
        raise ValueError("singles denominator must be positive")
    numer = n_ab - n_ab2 + n_a2b + n_a2b2
    if numer == 0:
        return 0.0
    return numer / denom


def fidelity(state: TwoQubitState, target: TwoQubitState) -> float:
    """Overlap <Psi|rho|Psi> with a pure target state."""
    eigvals, eigvecs = np.linalg.eigh(target.rho)
    if abs(eigvals.max() - 1.0) > 1e-8:
        raise ValueError("target must be a pure state")
    psi = eigvecs[:, np.argmax(eigvals)]
    return float(np.real(psi.conj() @ state.rho @ psi))


def noisy_channel(target: TwoQubitState, p: float) -> TwoQubitState:
    """White-noise admixture p*|Psi><Psi| + (1-p)/4 * identity."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rho = p * target.rho + (1.0 - p) / 4.0 * np.eye(4, dtype=complex)
    return TwoQubitState(rho=rho)


def fidelity_lower_bound(diag_z, diag_rotated) -> float:
    """Lower bound on the psi+ fidelity from two sets of diagonal elements.

    Both arguments are populations ordered (uu, ud, du, dd); the second set
    is measured after rotating each spin by a polar angle of pi/2 (opposite
    senses on the two qubits, which leaves psi+ invariant).

    F >= 1/2 (r_ud + r_du - 2 sqrt(r_uu r_dd) + s_ud + s_du - s_uu - s_dd).
    """
    r = np.asarray(diag_z, dtype=float)
    s = np.asarray(diag_rotated, dtype=float)
    if r.shape != (4,) or s.shape != (4,):
        raise ValueError("diagonals must have four entries")
    return 0.5 * (
        r[1] + r[2] - 2.0 * math.sqrt(max(r[0] * r[3], 0.0))
        + s[1] + s[2] - s[0] - s[3]
    )


def rotation_pair_for_bound() -> np.ndarray:
    """The two-qubit rotation whose diagonals feed ``fidelity_lower_bound``.

    Qubit A rotates by +pi/2 and qubit B by -pi/2 about the y axis; psi+ is
    an eigenstate of this product, so for the ideal state the bound is tight.
    """
    ry = lambda angle: np.array(
        [[math.cos(angle / 2), -math.sin(angle / 2)],
         [math.sin(angle / 2), math.cos(angle / 2)]], dtype=complex)
    return np.kron(ry(math.pi / 2), ry(-math.pi / 2))


def visibility_to_fidelity(v_x: float, v_q: float) -> float:
    """Entanglement fidelity (3*V+1)/4 from the mean of two complementary
    correlation visibilities."""
    v_mean = 0.5 * (v_x + v_q)
    return (3.0 * v_mean + 1.0) / 4.0


@dataclass(frozen=True)
class AtomPhotonState:
    """Collected atom-photon state: qutrit (m = -1, 0, +1) x photon (s+, s-)."""

    rho: np.ndarray           # 6x6
    fidelity: float           # overlap with the ideal psi+ in the qubit block
    sigma_weight: float       # collected sigma+/- intensity weight
    pi_weight: float          # collected (mode-suppressed) pi weight


# Fraction of the pi-dipole intensity that survives projection onto the
# collection mode's transverse polarization, azimuthally averaged.
PI_MODE_SUPPRESSION = 0.5


def atom_photon_state(theta_max: float,
                      pi_suppression: float = PI_MODE_SUPPRESSION) -> AtomPhotonState:
    """Atom-photon state collected through an aperture of half-angle theta_max.

    The sigma+/sigma- decay channels contribute the maximally entangled
    component with the dipole weight (1+cos^2)/2; light from the pi channel
    (sin^2 weight, reduced by the mode-projection factor) is an incoherent
    admixture that leaves the atom in m = 0.  Returns the normalized state
    and its fidelity with respect to the ideal entangled pair.
    """
    if not 0.0 < theta_max <= math.pi / 2.0:
        raise ValueError("theta_max must lie in (0, pi/2]")
    c = math.cos(theta_max)
    # cone integrals of the dipole intensity patterns (up to common factors)
    sigma_weight = 0.5 * ((1.0 - c) + (1.0 - c**3) / 3.0)
    pi_weight = pi_suppression * 0.5 * ((1.0 - c) - (1.0 - c**3) / 3.0)
    total = sigma_weight + pi_weight

    # basis: (m=-1, m=0, m=+1) x (sigma+, sigma-)
    psi = np.zeros(6, dtype=complex)
    psi[0] = 1.0 / math.sqrt(2.0)   # |m=-1, sigma+>
    psi[5] = 1.0 / math.sqrt(2.0)   # |m=+1, sigma->
    rho = sigma_weight / total * np.outer(psi, psi.conj())
    # pi photon: atom in m=0, photon polarization unpolarized in the qubit space
    rho[2, 2] += pi_weight / total / 2.0
    rho[3, 3] += pi_weight / total / 2.0
    fid = float(np.real(psi.conj() @ rho @ psi))
    return AtomPhotonState(rho=rho, fidelity=fid,
                           sigma_weight=sigma_weight, pi_weight=pi_weight)


def correlation_curve(basis: str, beta_grid, visibility: float = 1.0) -> np.ndarray:
    """Conditional atom-survival probability versus photon waveplate angle.

    P = (1 + V cos(2*beta - offset))/2 with offset 0 in the x basis and
    pi/2 in the y basis, so the two curves are shifted by beta = pi/4.
    """
    if basis not in ("x", "y"):
        raise ValueError("basis must be 'x' or 'y'")
    if not 0.0 <= visibility <= 1.0:
        raise ValueError("visibility must lie in [0, 1]")
    offset = 0.0 if basis == "x" else math.pi / 2.0
    beta = np.asarray(beta_grid, dtype=float)
    return 0.5 * (1.0 + visibility * np.cos(2.0 * beta - offset))


_CORRECTIONS = {
    "psi-": IDENTITY2,
    "psi+": SIGMA_Z,
    "phi-": SIGMA_X,
    "phi+": SIGMA_Z @ SIGMA_X,
}


def teleport_decompose(alpha: complex, beta: complex):
    """Bell decomposition of |psi>_A (x) |psi->_BC.

    Returns a list of (bell_label, conditional_amplitudes, correction)
    tuples: projecting particles A and B on the labeled Bell state leaves C
    in the normalized conditional state, and applying the correction
    restores the input up to a global phase.  All four branches carry
    probability 1/4.
    """
    norm = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
    if norm == 0:
        raise ValueError("input state must be nonzero")
    a, b = alpha / norm, beta / norm
    branches = {
        "psi-": np.array([-a, -b], dtype=complex),
        "psi+": np.array([-a, b], dtype=complex),
        "phi-": np.array([b, a], dtype=complex),
        "phi+": np.array([-b, a], dtype=complex),
    }
    return [(label, amps, _CORRECTIONS[label]) for label, amps in branches.items()]


def swap_decompose() -> dict[tuple[str, str], float]:
    """Coefficients of |psi->_AB |psi->_CD in the (AD) x (BC) Bell basis.

    Only matched pairs appear, each with magnitude 1/2:
    + psi+psi+ - psi-psi- - phi+phi+ + phi-phi-.
    """
    # build the 4-particle state on legs ordered (A, B, C, D)
    psi_m = _BELL_VECTORS["psi-"]
    state = np.kron(psi_m, psi_m).reshape(2, 2, 2, 2)  # indices A, B, C, D
    coeffs: dict[tuple[str, str], float] = {}
    for name_ad, vec_ad in _BELL_VECTORS.items():
        for name_bc, vec_bc in _BELL_VECTORS.items():
            basis = np.einsum(
                "ad,bc->abcd",
                vec_ad.reshape(2, 2),
                vec_bc.reshape(2, 2),
            )
            coeff = complex(np.tensordot(basis.conj(), state, axes=4))
            if abs(coeff) > 1e-12:
                coeffs[(name_ad, name_bc)] = float(coeff.real)
    return coeffs


def pair_rate_estimate(eta: float, t_fiber: float, cycle_s: float,
                       duty_factor: float = 1.0) -> float:
    """Entangled atom-atom pairs per minute from two heralded sources.

    Success probability per attempt is eta^2 * T^2 / 4 (one of four photon
    Bell states detected); ``duty_factor`` lumps all duty-cycle losses into
    one multiplier.
    """
    if eta < 0 or t_fiber < 0 or not 0.0 <= duty_factor <= 1.0:
        raise ValueError("eta, t_fiber must be nonnegative and duty_factor in [0, 1]")
    if cycle_s <= 0:
        raise ValueError("cycle time must be positive")
    per_cycle = 0.25 * eta**2 * t_fiber**2
    return per_cycle * duty_factor * 60.0 / cycle_s
