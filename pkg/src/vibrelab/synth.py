"""Analytic synthesis of cantilever vibration waveforms.

A vibration is modelled as a finite sum of sinusoidal modes. Each mode has
amplitude D (meters), frequency f, phase, and an optional viscous damping
ratio; with zero damping the three kinematic quantities are exactly

    displacement  d(t) = D sin(w t + phi)
    velocity      v(t) = D w cos(w t + phi)
    acceleration  a(t) = -D w^2 sin(w t + phi)

with w = 2 pi f. For damped modes the product-rule derivatives of the
exponentially decaying sinusoid are used, so velocity and acceleration stay
exact analytic derivatives of the displacement.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    InvalidModel,
    MalformedDocument,
    NonPositiveDuration,
    NyquistViolation,
)
from .signals import Signal, Unit


@dataclass(frozen=True)
class ModalComponent:
    """One sinusoidal mode of a vibration."""

    amplitude_m: float
    frequency_hz: float
    phase_rad: float = 0.0
    damping_ratio: float = 0.0

    def __post_init__(self) -> None:
        if not (self.amplitude_m > 0.0 and math.isfinite(self.amplitude_m)):
            raise InvalidModel(f"amplitude must be > 0 (got {self.amplitude_m})")
        if not (self.frequency_hz > 0.0 and math.isfinite(self.frequency_hz)):
            raise InvalidModel(f"frequency_hz must be > 0 (got {self.frequency_hz})")
        if not math.isfinite(self.phase_rad):
            raise InvalidModel("phase_rad must be finite")
        if not (0.0 <= self.damping_ratio < 1.0):
            raise InvalidModel(
                f"damping_ratio must be in [0, 1) (got {self.damping_ratio})"
            )


@dataclass(frozen=True)
class VibrationModel:
    """A finite sum of modal components."""

    modes: tuple[ModalComponent, ...]
    label: str = ""

    def __post_init__(self) -> None:
        modes = tuple(self.modes)
        if not modes:
            raise InvalidModel("model needs at least one mode")
        object.__setattr__(self, "modes", modes)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "modes": [
                {
                    "amplitude_D": m.amplitude_m,
                    "frequency_hz": m.frequency_hz,
                    "phase_rad": m.phase_rad,
                    "damping_ratio": m.damping_ratio,
                }
                for m in self.modes
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "VibrationModel":
        try:
            modes = tuple(
                ModalComponent(
                    amplitude_m=float(m["amplitude_D"]),
                    frequency_hz=float(m["frequency_hz"]),
                    phase_rad=float(m.get("phase_rad", 0.0)),
                    damping_ratio=float(m.get("damping_ratio", 0.0)),
                )
                for m in doc["modes"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidModel(f"malformed vibration model: {exc}") from exc
        return cls(modes=modes, label=str(doc.get("label", "")))


def load_model(path: str | Path) -> VibrationModel:
    """Load a vibration model from its JSON document."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return VibrationModel.from_dict(doc)


def save_model(model: VibrationModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model.to_dict(), indent=2, sort_keys=True) + "\n")


def _time_grid(model: VibrationModel, rate_hz: float, duration_s: float) -> np.ndarray:
    if not (duration_s > 0.0 and math.isfinite(duration_s)):
        raise NonPositiveDuration(f"duration must be > 0 s (got {duration_s})")
    f_max = max(m.frequency_hz for m in model.modes)
    if rate_hz <= 2.0 * f_max:
        raise NyquistViolation(
            f"rate {rate_hz} Hz must exceed twice the highest mode "
            f"frequency ({f_max} Hz)"
        )
    n = int(round(duration_s * rate_hz))
    if n < 1:
        raise NonPositiveDuration(
            f"duration {duration_s} s covers no samples at {rate_hz} Hz"
        )
    return np.arange(n) / rate_hz


def _synthesize(
    model: VibrationModel, rate_hz: float, duration_s: float, quantity: str
) -> np.ndarray:
    t = _time_grid(model, rate_hz, duration_s)
    total = np.zeros_like(t)
    for m in model.modes:
        w = 2.0 * math.pi * m.frequency_hz
        zw = m.damping_ratio * w
        wd = w * math.sqrt(1.0 - m.damping_ratio**2)
        ph = wd * t + m.phase_rad
        if quantity == "displacement":
            y = m.amplitude_m * np.sin(ph)
        elif quantity == "velocity":
            y = m.amplitude_m * (wd * np.cos(ph) - zw * np.sin(ph))
        else:  # acceleration
            y = m.amplitude_m * (
                (zw * zw - wd * wd) * np.sin(ph) - 2.0 * zw * wd * np.cos(ph)
            )
        if zw != 0.0:
            y *= np.exp(-zw * t)
        total += y
    return total


def synth_displacement(
    model: VibrationModel, rate_hz: float, duration_s: float
) -> Signal:
    """Sampled displacement of the model, in meters."""
    samples = _synthesize(model, rate_hz, duration_s, "displacement")
    return Signal(samples, rate_hz, Unit.METER, 0.0, f"{model.label}:displacement")


def synth_velocity(model: VibrationModel, rate_hz: float, duration_s: float) -> Signal:
    """Sampled velocity (exact analytic time derivative), in m/s."""
    samples = _synthesize(model, rate_hz, duration_s, "velocity")
    return Signal(samples, rate_hz, Unit.METER_PER_S, 0.0, f"{model.label}:velocity")


def synth_acceleration(
    model: VibrationModel, rate_hz: float, duration_s: float
) -> Signal:
    """Sampled acceleration (exact analytic second derivative), in m/s^2."""
    samples = _synthesize(model, rate_hz, duration_s, "acceleration")
    return Signal(
        samples, rate_hz, Unit.METER_PER_S2, 0.0, f"{model.label}:acceleration"
    )
