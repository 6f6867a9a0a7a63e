"""Measurement-reduction algorithms: HBT normalization and spectral fits.

Covers the normalization of coincidence histograms to g2 estimates, the
accidental-coincidence floor from detector dark counts, profile
convolution, the single-parameter Doppler-width fit of a fluorescence
spectrum against a measured reference, and the exponential-envelope fit of
the long-time correlation decay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit, minimize_scalar

from .constants import KB

__all__ = [
    "CoincidenceHistogram",
    "SpectrumProfile",
    "normalize_g2",
    "dark_count_floor",
    "convolve_profiles",
    "gaussian_profile",
    "lorentzian_profile",
    "fit_doppler_sigma",
    "kinetic_energy_from_sigma",
    "fit_envelope",
    "dominant_oscillation_frequency",
]


@dataclass(frozen=True)
class CoincidenceHistogram:
    """Pair-arrival histogram: bin width (s), counts, detector rates, live time."""

    bin_width: float
    counts: np.ndarray
    rate_1: float
    rate_2: float
    t_integration: float

    def __post_init__(self):
        counts = np.asarray(self.counts)
        object.__setattr__(self, "counts", counts)
        if self.bin_width <= 0:
            raise ValueError("bin width must be positive")
        if np.any(counts < 0):
            raise ValueError("counts must be nonnegative")


@dataclass(frozen=True)
class SpectrumProfile:
    """Sampled spectral profile on a strictly increasing frequency grid (Hz)."""

    frequency: np.ndarray
    amplitude: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.frequency, dtype=float)
        a = np.asarray(self.amplitude, dtype=float)
        object.__setattr__(self, "frequency", f)
        object.__setattr__(self, "amplitude", a)
        if f.ndim != 1 or f.shape != a.shape:
            raise ValueError("frequency and amplitude must be 1-D and equal length")
        if np.any(np.diff(f) <= 0):
            raise ValueError("frequency grid must be strictly increasing")
        if np.any(a < 0):
            raise ValueError("amplitudes must be nonnegative")

    @property
    def spacing(self) -> float:
        df = np.diff(self.frequency)
        if not np.allclose(df, df[0], rtol=1e-6):
            raise ValueError("profile grid must be uniform")
        return float(df[0])

    def peak_normalized(self) -> "SpectrumProfile":
        peak = self.amplitude.max()
        if peak <= 0:
            raise ValueError("profile has no positive peak")
        return SpectrumProfile(self.frequency, self.amplitude / peak)

    def fwhm(self) -> float:
        """Full width at half maximum by linear interpolation."""
        a = self.amplitude
        half = a.max() / 2.0
        above = np.nonzero(a >= half)[0]
        if len(above) < 2:
            raise ValueError("profile too narrow for the grid")
        lo, hi = above[0], above[-1]
        f = self.frequency

        def cross(i, j):
            if a[j] == a[i]:
                return f[i]
            return f[i] + (half - a[i]) * (f[j] - f[i]) / (a[j] - a[i])

        left = cross(lo - 1, lo) if lo > 0 else f[0]
        right = cross(hi + 1, hi) if hi < len(a) - 1 else f[-1]
        return right - left


def normalize_g2(hist: CoincidenceHistogram) -> np.ndarray:
    """g2 per bin: counts / (r1 * r2 * bin_width * T_integration)."""
    if min(hist.rate_1, hist.rate_2, hist.t_integration) <= 0:
        raise ValueError("rates and integration time must be positive")
    norm = hist.rate_1 * hist.rate_2 * hist.bin_width * hist.t_integration
    return hist.counts / norm


def dark_count_floor(dark_rate: float, signal_rates: tuple[float, float]) -> float:
    """Accidental-coincidence level (g2 units) caused by detector dark counts.

    With signal rates r1, r2 and dark rate d on each detector, coincidences
    involving at least one dark count add
    (r1*d + r2*d + d^2) / ((r1+d)(r2+d)) to the normalized histogram.
    """
    if dark_rate < 0:
        raise ValueError("dark rate must be nonnegative")
    r1, r2 = signal_rates
    if r1 < 0 or r2 < 0:
        raise ValueError("signal rates must be nonnegative")
    total1, total2 = r1 + dark_rate, r2 + dark_rate
    if total1 == 0 or total2 == 0:
        return 0.0
    return (r1 * dark_rate + r2 * dark_rate + dark_rate**2) / (total1 * total2)


def gaussian_profile(frequency, sigma: float, center: float = 0.0) -> SpectrumProfile:
    """Unit-peak Gaussian on the given grid; sigma = 0 gives a grid delta."""
    f = np.asarray(frequency, dtype=float)
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        amp = np.zeros_like(f)
        amp[np.argmin(np.abs(f - center))] = 1.0
    else:
        amp = np.exp(-0.5 * ((f - center) / sigma) ** 2)
    return SpectrumProfile(frequency=f, amplitude=amp)


def lorentzian_profile(frequency, fwhm: float, center: float = 0.0) -> SpectrumProfile:
    """Unit-peak Lorentzian on the given grid."""
    if fwhm <= 0:
        raise ValueError("fwhm must be positive")
    f = np.asarray(frequency, dtype=float)
    hw = fwhm / 2.0
    amp = hw**2 / ((f - center) ** 2 + hw**2)
    return SpectrumProfile(frequency=f, amplitude=amp)


def convolve_profiles(a: SpectrumProfile, b: SpectrumProfile) -> SpectrumProfile:
    """Discrete linear convolution on a common uniform grid, unit-peak output."""
    da, db = a.spacing, b.spacing
    if not math.isclose(da, db, rel_tol=1e-6):
        raise ValueError("profiles must share the grid spacing")
    amp = np.convolve(a.amplitude, b.amplitude) * da
    f0 = a.frequency[0] + b.frequency[0]
    freq = f0 + da * np.arange(len(amp))
    out = SpectrumProfile(frequency=freq, amplitude=amp)
    return out.peak_normalized()


def _model_on_grid(reference: SpectrumProfile, sigma: float,
                   target_freq: np.ndarray) -> np.ndarray:
    kernel_half = 6.0 * max(sigma, reference.spacing)
    n_half = int(math.ceil(kernel_half / reference.spacing))
    kfreq = reference.spacing * np.arange(-n_half, n_half + 1)
    kernel = gaussian_profile(kfreq, sigma)
    blurred = convolve_profiles(reference, kernel)
    return np.interp(target_freq, blurred.frequency, blurred.amplitude)


def fit_doppler_sigma(reference: SpectrumProfile,
                      fluorescence: SpectrumProfile) -> tuple[float, float]:
    """Least-squares Doppler width of a fluorescence spectrum.

    The reference profile (laser line including the instrument function) is
    convolved with a Gaussian of standard deviation sigma_nu, the single
    free parameter; returns (sigma_nu, standard error) in Hz.  Raises
    ``RuntimeError`` with the residual norm when the minimization fails.
    """
    ref = reference.peak_normalized()
    target = fluorescence.peak_normalized()

    def cost(sigma):
        model = _model_on_grid(ref, sigma, target.frequency)
        return float(np.sum((model - target.amplitude) ** 2))

    span = target.frequency[-1] - target.frequency[0]
    result = minimize_scalar(cost, bounds=(0.0, span / 2.0), method="bounded",
                             options={"xatol": ref.spacing * 1e-4})
    if not result.success:
        raise RuntimeError(
            f"Doppler fit failed to converge; residual norm {result.fun:.3g}"
        )
    sigma_hat = float(result.x)

    # curvature-based standard error with the residual variance
    h = max(sigma_hat * 1e-3, ref.spacing * 1e-3)
    second = (cost(sigma_hat + h) - 2.0 * cost(sigma_hat) + cost(sigma_hat - h)) / h**2
    n_pts = len(target.frequency)
    resid_var = cost(sigma_hat) / max(n_pts - 1, 1)
    stderr = math.sqrt(2.0 * resid_var / second) if second > 0 else float("inf")
    return sigma_hat, stderr


def kinetic_energy_from_sigma(sigma_nu: float, wavelength: float,
                              mass: float) -> float:
    """Mean kinetic energy (in kelvin, E/kB) from the fitted Doppler width.

    The fitted sigma_nu is the 1-D width along the observation axis; an
    isotropic velocity distribution is assumed, so <v^2> = 3 (lambda
    sigma_nu)^2 and E = m <v^2> / 2.
    """
    if sigma_nu < 0 or wavelength <= 0 or mass <= 0:
        raise ValueError("invalid spectroscopy parameters")
    v_axis = wavelength * sigma_nu
    return 0.5 * mass * 3.0 * v_axis**2 / KB


def fit_envelope(tau, values) -> tuple[float, float]:
    """Fit 1 + A*exp(-tau/tau0) to correlation data; returns (A, tau0)."""
    tau = np.asarray(tau, dtype=float)
    values = np.asarray(values, dtype=float)

    def model(t, amp, tau0):
        return 1.0 + amp * np.exp(-t / tau0)

    amp0 = max(values[0] - 1.0, 1e-3)
    tau0_guess = max((tau[-1] - tau[0]) / 5.0, np.finfo(float).tiny)
    popt, _ = curve_fit(model, tau, values, p0=(amp0, tau0_guess),
                        bounds=([0.0, 0.0], [np.inf, np.inf]), maxfev=10000)
    return float(popt[0]), float(popt[1])


def dominant_oscillation_frequency(tau, values) -> float:
    """Dominant oscillation frequency (rad/s) of a correlation trace.

    Detrends to the asymptote, applies a Hann window and picks the zero-padded
    FFT peak with parabolic interpolation.
    """
    tau = np.asarray(tau, dtype=float)
    values = np.asarray(values, dtype=float)
    dt = tau[1] - tau[0]
    if not np.allclose(np.diff(tau), dt, rtol=1e-6):
        raise ValueError("tau grid must be uniform")
    signal = (values - values.mean()) * np.hanning(len(values))
    spectrum = np.abs(np.fft.rfft(signal, n=8 * len(signal)))
    spectrum[0] = 0.0
    peak = int(np.argmax(spectrum))
    if 0 < peak < len(spectrum) - 1:
        y0, y1, y2 = spectrum[peak - 1:peak + 2]
        denom = y0 - 2.0 * y1 + y2
        shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
    else:
        shift = 0.0
    freq = (peak + shift) / (8 * len(signal) * dt)
    return 2.0 * math.pi * freq
