"""Processing blocks: spectral analysis, FIR filtering, integration, derivation.

These are the software counterparts of the instrument functions an
acquisition program provides: one-sided spectra with amplitude-preserving
scaling, linear-phase windowed-sinc filters, drift-aware integration of
kinematic signals, numerical differentiation, and log-decrement damping
estimation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    CutoffAboveNyquist,
    EmptySpectrum,
    InsufficientPeaks,
    InvalidParams,
    SignalShorterThanFilter,
    TooShort,
)
from .fourier import fft
from .signals import MIXED_UNITS_FLAG, Signal, Unit, format_float


class Window(str, enum.Enum):
    RECTANGULAR = "rectangular"
    HANN = "hann"


class Scaling(str, enum.Enum):
    AMPLITUDE = "amplitude"
    POWER = "power"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided spectrum of a real signal.

    With amplitude scaling a sinusoid of amplitude A centered on a bin reads
    A at that bin; with power scaling the bins of a rectangular-window
    spectrum sum to the mean square of the signal.
    """

    bin_width_hz: float
    magnitudes: np.ndarray
    phases_rad: np.ndarray
    window: Window
    scaling: Scaling
    source_unit: Unit

    def __post_init__(self) -> None:
        mags = np.array(self.magnitudes, dtype=float, copy=True)
        phases = np.array(self.phases_rad, dtype=float, copy=True)
        mags.flags.writeable = False
        phases.flags.writeable = False
        object.__setattr__(self, "magnitudes", mags)
        object.__setattr__(self, "phases_rad", phases)
        object.__setattr__(self, "window", Window(self.window))
        object.__setattr__(self, "scaling", Scaling(self.scaling))
        object.__setattr__(self, "source_unit", Unit(self.source_unit))

    @property
    def n_bins(self) -> int:
        return self.magnitudes.size

    def frequencies(self) -> np.ndarray:
        return self.bin_width_hz * np.arange(self.n_bins)


def _window_samples(window: Window, n: int) -> np.ndarray:
    if window == Window.RECTANGULAR:
        return np.ones(n)
    # Periodic Hann: exact amplitude correction factor of 2 at bin centers.
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def fft_spectrum(
    x: Signal,
    window: Window | str = Window.HANN,
    scaling: Scaling | str = Scaling.AMPLITUDE,
) -> Spectrum:
    """One-sided spectrum of a signal; any length N >= 2 is accepted.

    Amplitude scaling multiplies by 2/N (1/N at DC and Nyquist) and by the
    window's amplitude correction factor, so bin-centered tones keep their
    time-domain amplitude.
    """
    window = Window(window)
    scaling = Scaling(scaling)
    n = x.n
    if n < 2:
        raise TooShort(f"spectrum needs at least 2 samples (got {n})")
    w = _window_samples(window, n)
    acf = n / float(np.sum(w))
    coeffs = fft(x.samples * w)
    k = n // 2 + 1
    fold = np.full(k, 2.0)
    fold[0] = 1.0
    if n % 2 == 0:
        fold[-1] = 1.0
    base = np.abs(coeffs[:k]) * (acf / n)
    mags = base * fold if scaling == Scaling.AMPLITUDE else base * base * fold
    return Spectrum(
        bin_width_hz=x.sample_rate_hz / n,
        magnitudes=mags,
        phases_rad=np.angle(coeffs[:k]),
        window=window,
        scaling=scaling,
        source_unit=x.unit,
    )


def dominant_frequency(s: Spectrum, exclude_dc: bool = True) -> tuple[float, float]:
    """Frequency and magnitude of the strongest bin.

    Ties resolve toward the lowest frequency; the DC bin is skipped unless
    ``exclude_dc`` is false.
    """
    start = 1 if exclude_dc else 0
    if s.n_bins <= start:
        raise EmptySpectrum("no bins to search")
    idx = start + int(np.argmax(s.magnitudes[start:]))
    return idx * s.bin_width_hz, float(s.magnitudes[idx])


def write_spectrum_csv(s: Spectrum, path: str | Path) -> None:
    """Write a spectrum as CSV with '# key=value' headers (deterministic)."""
    lines = [
        f"# bin_width_hz={format_float(s.bin_width_hz)}",
        f"# window={s.window.value}",
        f"# scaling={s.scaling.value}",
        "frequency_hz,magnitude,phase_rad",
    ]
    freqs = s.frequencies()
    lines.extend(
        f"{format_float(freqs[i])},{format_float(s.magnitudes[i])},"
        f"{format_float(s.phases_rad[i])}"
        for i in range(s.n_bins)
    )
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# FIR filtering
# ---------------------------------------------------------------------------


class FilterKind(str, enum.Enum):
    LOWPASS = "lowpass"
    HIGHPASS = "highpass"
    BANDPASS = "bandpass"


@dataclass(frozen=True)
class FilterSpec:
    """Linear-phase FIR filter description (windowed sinc, Hann window)."""

    kind: FilterKind
    cutoff_hz: tuple[float, ...]
    taps: int = 101

    def __post_init__(self) -> None:
        kind = FilterKind(self.kind)
        cutoffs = tuple(
            float(c) for c in np.atleast_1d(np.asarray(self.cutoff_hz, dtype=float))
        )
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "cutoff_hz", cutoffs)
        if self.taps < 11 or self.taps % 2 == 0:
            raise InvalidParams(f"taps must be an odd integer >= 11 (got {self.taps})")
        expected = 2 if kind == FilterKind.BANDPASS else 1
        if len(cutoffs) != expected:
            raise InvalidParams(
                f"{kind.value} filter needs {expected} cutoff(s), got {len(cutoffs)}"
            )
        if any(c <= 0.0 or not math.isfinite(c) for c in cutoffs):
            raise InvalidParams(f"cutoffs must be finite and > 0 (got {cutoffs})")
        if expected == 2 and not cutoffs[0] < cutoffs[1]:
            raise InvalidParams(f"band edges must be ordered (got {cutoffs})")


def _lowpass_kernel(cutoff_hz: float, sample_rate_hz: float, taps: int) -> np.ndarray:
    mid = taps // 2
    fc = cutoff_hz / sample_rate_hz
    h = 2.0 * fc * np.sinc(2.0 * fc * (np.arange(taps) - mid))
    h *= np.hanning(taps)
    return h / np.sum(h)  # exact unit gain at DC


def design_fir(spec: FilterSpec, sample_rate_hz: float) -> np.ndarray:
    """FIR coefficients of ``spec`` for the given sample rate."""
    nyquist = sample_rate_hz / 2.0
    if any(c >= nyquist for c in spec.cutoff_hz):
        raise CutoffAboveNyquist(
            f"cutoff(s) {spec.cutoff_hz} Hz must stay below the Nyquist "
            f"frequency ({nyquist} Hz)"
        )
    if spec.kind == FilterKind.LOWPASS:
        return _lowpass_kernel(spec.cutoff_hz[0], sample_rate_hz, spec.taps)
    if spec.kind == FilterKind.HIGHPASS:
        h = -_lowpass_kernel(spec.cutoff_hz[0], sample_rate_hz, spec.taps)
        h[spec.taps // 2] += 1.0  # spectral inversion of the lowpass
        return h
    low = _lowpass_kernel(spec.cutoff_hz[0], sample_rate_hz, spec.taps)
    high = _lowpass_kernel(spec.cutoff_hz[1], sample_rate_hz, spec.taps)
    return high - low


def filter_signal(x: Signal, spec: FilterSpec) -> Signal:
    """Apply a linear-phase FIR filter, compensating its group delay.

    The output has the same length and time base as the input; the first and
    last (taps-1)/2 samples are edge-affected, which the label records.
    """
    if x.n < spec.taps:
        raise SignalShorterThanFilter(
            f"signal of {x.n} samples is shorter than {spec.taps} taps"
        )
    h = design_fir(spec, x.sample_rate_hz)
    mid = spec.taps // 2
    full = np.convolve(x.samples, h)
    y = full[mid : mid + x.n]
    label = f"{x.label} [edge_samples={mid}]".strip()
    return Signal(y, x.sample_rate_hz, x.unit, x.start_time_s, label)


# ---------------------------------------------------------------------------
# Integration / differentiation of kinematic signals
# ---------------------------------------------------------------------------

_INTEGRATE_UNIT = {
    Unit.METER_PER_S2: Unit.METER_PER_S,
    Unit.METER_PER_S: Unit.METER,
    Unit.DIMENSIONLESS: Unit.DIMENSIONLESS,
}

_DIFFERENTIATE_UNIT = {
    Unit.METER: Unit.METER_PER_S,
    Unit.METER_PER_S: Unit.METER_PER_S2,
    Unit.DIMENSIONLESS: Unit.DIMENSIONLESS,
}


def _advance_unit(mapping: dict, unit: Unit, label: str) -> tuple[Unit, str]:
    if unit in mapping:
        return mapping[unit], label
    return Unit.DIMENSIONLESS, f"{label} {MIXED_UNITS_FLAG}".strip()


def _drift_filter_spec(n: int, sample_rate_hz: float, highpass_hz: float) -> FilterSpec:
    # Kernel length grows with rate/corner, capped by the signal length.
    taps = int(round(4.0 * sample_rate_hz / highpass_hz)) + 1
    taps = min(taps, n if n % 2 == 1 else n - 1)
    if taps % 2 == 0:
        taps += 1
    taps = max(taps, 11)
    return FilterSpec(FilterKind.HIGHPASS, (highpass_hz,), taps)


def integrate(
    x: Signal, remove_mean: bool = True, highpass_hz: float | None = None
) -> Signal:
    """Cumulative time integration; units advance m/s^2 -> m/s -> m.

    The cumulative rule is the exact discrete inverse of the central
    difference: each output step spans two samples with midpoint weight
    (seeded by one trapezoidal step), so differentiating the result recovers
    the interior input to rounding accuracy. ``remove_mean`` subtracts the
    input mean before and the output mean after integration, suppressing the
    ramp that any bias would otherwise build; ``highpass_hz`` additionally
    applies a drift-suppression high-pass before integrating.
    """
    n = x.n
    if n < 2:
        raise TooShort(f"integration needs at least 2 samples (got {n})")
    y = x.samples - np.mean(x.samples) if remove_mean else x.samples
    label = x.label
    if highpass_hz is not None:
        spec = _drift_filter_spec(n, x.sample_rate_hz, float(highpass_hz))
        filtered = filter_signal(
            Signal(y, x.sample_rate_hz, x.unit, x.start_time_s, label), spec
        )
        y = filtered.samples
        label = filtered.label
    h = 1.0 / x.sample_rate_hz
    out = np.empty(n)
    out[0] = 0.0
    out[1] = 0.5 * h * (y[0] + y[1])
    if n > 2:
        out[2::2] = 2.0 * h * np.cumsum(y[1:-1:2])
        if n > 3:
            out[3::2] = out[1] + 2.0 * h * np.cumsum(y[2:-1:2])
    if remove_mean:
        out -= np.mean(out)
    unit, label = _advance_unit(_INTEGRATE_UNIT, x.unit, label)
    return Signal(out, x.sample_rate_hz, unit, x.start_time_s, label)


def differentiate(x: Signal) -> Signal:
    """Numerical time derivative; units retreat m -> m/s -> m/s^2.

    Central differences in the interior, second-order one-sided differences
    at the two endpoints (exact for polynomials up to degree 2).
    """
    if x.n < 3:
        raise TooShort(f"differentiation needs at least 3 samples (got {x.n})")
    dx = np.gradient(x.samples, 1.0 / x.sample_rate_hz, edge_order=2)
    unit, label = _advance_unit(_DIFFERENTIATE_UNIT, x.unit, x.label)
    return Signal(dx, x.sample_rate_hz, unit, x.start_time_s, label)


def estimate_damping(x: Signal) -> float:
    """Damping ratio from the logarithmic decrement of successive peaks.

    The decrement is the mean log ratio of successive positive local maxima;
    the ratio follows as delta / sqrt(4 pi^2 + delta^2).
    """
    s = x.samples
    interior = s[1:-1]
    is_peak = (interior > s[:-2]) & (interior > s[2:]) & (interior > 0.0)
    peaks = interior[is_peak]
    if peaks.size < 3:
        raise InsufficientPeaks(
            f"need at least 3 positive peaks (found {peaks.size})"
        )
    delta = float(np.mean(np.log(peaks[:-1] / peaks[1:])))
    return delta / math.sqrt(4.0 * math.pi**2 + delta**2)
