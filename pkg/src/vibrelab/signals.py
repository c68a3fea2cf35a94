"""Sampled-signal container, elementary waveform arithmetic, and CSV I/O.

A :class:`Signal` is an immutable, uniformly sampled real-valued time series
tagged with a physical unit. Sample ``n`` sits at ``start_time_s + n / rate``.
All operations are pure functions returning new signals.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    InvalidSignal,
    LengthMismatch,
    MalformedDocument,
    NegativeInput,
    NonFiniteScalar,
    RateMismatch,
    UnitMismatch,
)

#: Relative tolerance used when comparing sample rates of two signals.
RATE_REL_TOL = 1e-9

#: Marker appended to a label when a unit-producing rule had to give up
#: and fall back to dimensionless.
MIXED_UNITS_FLAG = "[mixed-units]"


def format_float(x: float) -> str:
    """Fixed scientific formatting (9 significant digits) for all artifacts."""
    return f"{float(x):.8e}"


class Unit(str, enum.Enum):
    """Physical unit tag carried by every signal."""

    METER = "meter"
    METER_PER_S = "meter_per_s"
    METER_PER_S2 = "meter_per_s2"
    VOLT = "volt"
    NEWTON = "newton"
    DIMENSIONLESS = "dimensionless"
    ADC_CODE = "adc_code"


@dataclass(frozen=True, eq=False)
class Signal:
    """Uniformly sampled finite real-valued time series.

    Attributes:
        samples: 1-D float64 array, read-only after construction.
        sample_rate_hz: sampling rate, strictly positive.
        unit: physical unit tag.
        start_time_s: time of the first sample.
        label: free-text channel label.
    """

    samples: np.ndarray
    sample_rate_hz: float
    unit: Unit = Unit.DIMENSIONLESS
    start_time_s: float = 0.0
    label: str = ""

    def __post_init__(self) -> None:
        arr = np.array(self.samples, dtype=float, copy=True).reshape(-1)
        if arr.size < 1:
            raise InvalidSignal("signal needs at least one sample")
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise InvalidSignal(f"non-finite sample at index {bad[0]}")
        rate = float(self.sample_rate_hz)
        if not np.isfinite(rate) or rate <= 0.0:
            raise InvalidSignal(f"sample_rate_hz must be > 0 (got {rate})")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "sample_rate_hz", rate)
        object.__setattr__(self, "unit", Unit(self.unit))
        object.__setattr__(self, "start_time_s", float(self.start_time_s))
        object.__setattr__(self, "label", str(self.label))

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.n / self.sample_rate_hz

    def times(self) -> np.ndarray:
        """Time axis: start_time_s + n / rate."""
        return self.start_time_s + np.arange(self.n) / self.sample_rate_hz

    def __repr__(self) -> str:  # samples elided: they can be huge
        return (
            f"Signal(n={self.n}, rate={self.sample_rate_hz} Hz, "
            f"unit={self.unit.value!r}, label={self.label!r})"
        )


@dataclass(frozen=True)
class SignalStats:
    """Characteristic values of a signal.

    ``peak`` is the maximum absolute value; ``peak_to_peak`` is max - min;
    ``rms`` is sqrt(mean of squares); ``mean`` is the arithmetic mean.
    """

    peak: float
    peak_to_peak: float
    rms: float
    mean: float


def _check_pair(a: Signal, b: Signal, *, same_unit: bool) -> None:
    if a.n != b.n:
        raise LengthMismatch(f"lengths differ: {a.n} vs {b.n}")
    if abs(a.sample_rate_hz - b.sample_rate_hz) > RATE_REL_TOL * max(
        a.sample_rate_hz, b.sample_rate_hz
    ):
        raise RateMismatch(
            f"sample rates differ: {a.sample_rate_hz} vs {b.sample_rate_hz} Hz"
        )
    if same_unit and a.unit != b.unit:
        raise UnitMismatch(f"units differ: {a.unit.value} vs {b.unit.value}")


def _join_labels(a: str, b: str, op: str) -> str:
    if not a:
        return b
    if not b or a == b:
        return a
    return f"{a}{op}{b}"


def add(a: Signal, b: Signal) -> Signal:
    """Elementwise sum of two signals with identical length, rate, and unit."""
    _check_pair(a, b, same_unit=True)
    return Signal(
        a.samples + b.samples,
        a.sample_rate_hz,
        a.unit,
        a.start_time_s,
        _join_labels(a.label, b.label, "+"),
    )


def multiply(a: Signal, b: Signal) -> Signal:
    """Elementwise product.

    The result unit is the operand unit when the other side is dimensionless;
    any other combination falls back to dimensionless and the label is flagged.
    """
    _check_pair(a, b, same_unit=False)
    label = _join_labels(a.label, b.label, "*")
    if a.unit == Unit.DIMENSIONLESS:
        unit = b.unit
    elif b.unit == Unit.DIMENSIONLESS:
        unit = a.unit
    else:
        unit = Unit.DIMENSIONLESS
        label = f"{label} {MIXED_UNITS_FLAG}".strip()
    return Signal(a.samples * b.samples, a.sample_rate_hz, unit, a.start_time_s, label)


def sqrt_signal(a: Signal) -> Signal:
    """Elementwise square root of a non-negative signal; result is dimensionless."""
    neg = np.flatnonzero(a.samples < 0.0)
    if neg.size:
        raise NegativeInput(f"negative sample at index {neg[0]}")
    label = a.label
    if a.unit != Unit.DIMENSIONLESS:
        label = f"sqrt({label}) {MIXED_UNITS_FLAG}".strip()
    return Signal(
        np.sqrt(a.samples), a.sample_rate_hz, Unit.DIMENSIONLESS, a.start_time_s, label
    )


def scale(a: Signal, k: float) -> Signal:
    """Multiply every sample by the finite scalar ``k``; unit is preserved."""
    k = float(k)
    if not np.isfinite(k):
        raise NonFiniteScalar(f"scale factor must be finite (got {k})")
    return Signal(k * a.samples, a.sample_rate_hz, a.unit, a.start_time_s, a.label)


def stats(a: Signal) -> SignalStats:
    """Peak, peak-to-peak, RMS, and mean of a signal."""
    x = a.samples
    return SignalStats(
        peak=float(np.max(np.abs(x))),
        peak_to_peak=float(np.max(x) - np.min(x)),
        rms=float(np.sqrt(np.mean(x * x))),
        mean=float(np.mean(x)),
    )


# ---------------------------------------------------------------------------
# CSV format: '# key=value' header lines, then one sample per line.
# Decimal point is '.', line endings are LF, no locale formatting.
# ---------------------------------------------------------------------------


def write_signal_csv(signal: Signal, path: str | Path) -> None:
    """Write a signal in the canonical CSV format (deterministic bytes)."""
    label = signal.label.replace("\n", " ").replace("\r", " ")
    lines = [
        f"# sample_rate_hz={format_float(signal.sample_rate_hz)}",
        f"# unit={signal.unit.value}",
        f"# label={label}",
        f"# start_time_s={format_float(signal.start_time_s)}",
    ]
    lines.extend(format_float(v) for v in signal.samples)
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_signal_csv(path: str | Path) -> Signal:
    """Read a signal written by :func:`write_signal_csv`."""
    headers: dict[str, str] = {}
    samples: list[float] = []
    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                key, sep, value = body.partition("=")
                if not sep:
                    raise MalformedDocument(f"{path}:{lineno}: header without '='")
                headers[key.strip()] = value.strip()
                continue
            try:
                samples.append(float(line))
            except ValueError:
                raise MalformedDocument(
                    f"{path}:{lineno}: not a number: {line!r}"
                ) from None
    for required in ("sample_rate_hz", "unit"):
        if required not in headers:
            raise MalformedDocument(f"{path}: missing '# {required}=' header")
    if not samples:
        raise MalformedDocument(f"{path}: no samples")
    try:
        unit = Unit(headers["unit"])
    except ValueError:
        raise MalformedDocument(f"{path}: unknown unit {headers['unit']!r}") from None
    try:
        rate = float(headers["sample_rate_hz"])
        start = float(headers.get("start_time_s", "0"))
    except ValueError:
        raise MalformedDocument(f"{path}: malformed numeric header") from None
    return Signal(samples, rate, unit, start, headers.get("label", ""))
