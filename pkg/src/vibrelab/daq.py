"""Measurement-chain simulation: seismic mass, piezo transduction, noise, ADC.

The chain mirrors a single-computer acquisition setup: the proof mass turns
acceleration into force (F = m a), the piezo element outputs a voltage
proportional to acceleration, the cable adds Gaussian noise, and the digitizer
quantizes the voltage to signed integer codes. Everything is deterministic
given the seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    ChannelOutOfRange,
    InvalidModel,
    InvalidParams,
    MalformedDocument,
    NonPositiveMass,
    UnitMismatch,
)
from .signals import Signal, Unit, read_signal_csv, scale, write_signal_csv
from .synth import VibrationModel, synth_acceleration

#: Identifier of the noise generator recorded with every acquisition.
NOISE_ALGORITHM = "numpy-pcg64-gaussian"


@dataclass(frozen=True)
class SensorModel:
    """Piezoelectric accelerometer parameters."""

    sensitivity_v_per_ms2: float
    seismic_mass_kg: float
    noise_rms_v: float = 0.0
    axes: int = 1

    def __post_init__(self) -> None:
        if not (self.sensitivity_v_per_ms2 > 0.0):
            raise InvalidModel(
                f"sensitivity must be > 0 (got {self.sensitivity_v_per_ms2})"
            )
        if not (self.seismic_mass_kg > 0.0):
            raise InvalidModel(f"seismic mass must be > 0 (got {self.seismic_mass_kg})")
        if not (self.noise_rms_v >= 0.0):
            raise InvalidModel(f"noise rms must be >= 0 (got {self.noise_rms_v})")
        if self.axes not in (1, 3):
            raise InvalidModel(f"axes must be 1 or 3 (got {self.axes})")

    def to_dict(self) -> dict:
        return {
            "sensitivity_v_per_ms2": self.sensitivity_v_per_ms2,
            "seismic_mass_kg": self.seismic_mass_kg,
            "noise_rms_v": self.noise_rms_v,
            "axes": self.axes,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SensorModel":
        try:
            return cls(
                sensitivity_v_per_ms2=float(doc["sensitivity_v_per_ms2"]),
                seismic_mass_kg=float(doc["seismic_mass_kg"]),
                noise_rms_v=float(doc.get("noise_rms_v", 0.0)),
                axes=int(doc.get("axes", 1)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidModel(f"malformed sensor model: {exc}") from exc


@dataclass(frozen=True)
class AdcModel:
    """Digitizer parameters: bit depth, bipolar full-scale range, sample rate."""

    bits: int
    full_scale_v: float
    sample_rate_hz: float

    def __post_init__(self) -> None:
        if not (8 <= self.bits <= 24):
            raise InvalidModel(f"bits in [8,24] (got {self.bits})")
        if not (self.full_scale_v > 0.0):
            raise InvalidModel(f"full_scale_v must be > 0 (got {self.full_scale_v})")
        if not (self.sample_rate_hz > 0.0):
            raise InvalidModel(
                f"sample_rate_hz must be > 0 (got {self.sample_rate_hz})"
            )

    @property
    def lsb_v(self) -> float:
        """Quantization step: 2 FS / 2^bits for a +/-FS converter."""
        return 2.0 * self.full_scale_v / (1 << self.bits)

    @property
    def code_min(self) -> int:
        return -(1 << (self.bits - 1))

    @property
    def code_max(self) -> int:
        return (1 << (self.bits - 1)) - 1

    def to_dict(self) -> dict:
        return {
            "bits": self.bits,
            "full_scale_v": self.full_scale_v,
            "sample_rate_hz": self.sample_rate_hz,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "AdcModel":
        try:
            return cls(
                bits=int(doc["bits"]),
                full_scale_v=float(doc["full_scale_v"]),
                sample_rate_hz=float(doc["sample_rate_hz"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidModel(f"malformed adc model: {exc}") from exc


def load_sensor(path: str | Path) -> SensorModel:
    return SensorModel.from_dict(_load_json(path))


def load_adc(path: str | Path) -> AdcModel:
    return AdcModel.from_dict(_load_json(path))


def _load_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


@dataclass(frozen=True, eq=False)
class AcquisitionRecord:
    """Digitized output of one acquisition: integer codes per channel."""

    channels: tuple[np.ndarray, ...]
    adc: AdcModel
    sensor: SensorModel | None
    seed: int
    label: str = ""
    noise_algorithm: str = NOISE_ALGORITHM

    def __post_init__(self) -> None:
        frozen = []
        for ch in self.channels:
            arr = np.array(ch, dtype=np.int64, copy=True)
            if arr.min(initial=0) < self.adc.code_min or arr.max(
                initial=0
            ) > self.adc.code_max:
                raise InvalidModel(
                    f"codes outside [{self.adc.code_min}, {self.adc.code_max}]"
                )
            arr.flags.writeable = False
            frozen.append(arr)
        object.__setattr__(self, "channels", tuple(frozen))


def seismic_force(accel: Signal, mass_kg: float) -> Signal:
    """Inertial force of the proof mass: F = m a, elementwise."""
    if accel.unit != Unit.METER_PER_S2:
        raise UnitMismatch(f"expected meter_per_s2 input (got {accel.unit.value})")
    if not (mass_kg > 0.0 and math.isfinite(mass_kg)):
        raise NonPositiveMass(f"mass must be > 0 kg (got {mass_kg})")
    return Signal(
        mass_kg * accel.samples,
        accel.sample_rate_hz,
        Unit.NEWTON,
        accel.start_time_s,
        accel.label,
    )


def transduce(accel: Signal, sensor: SensorModel, axis: int = 1) -> Signal:
    """Accelerometer output voltage, proportional to the applied acceleration."""
    if accel.unit != Unit.METER_PER_S2:
        raise UnitMismatch(f"expected meter_per_s2 input (got {accel.unit.value})")
    label = f"{accel.label}:axis{axis}" if accel.label else f"axis{axis}"
    return Signal(
        sensor.sensitivity_v_per_ms2 * accel.samples,
        accel.sample_rate_hz,
        Unit.VOLT,
        accel.start_time_s,
        label,
    )


def add_noise(x: Signal, noise_rms_v: float, seed: int) -> Signal:
    """Add zero-mean Gaussian noise of the given RMS from a seeded generator.

    A zero RMS returns the input unchanged; identical (seed, length) pairs
    produce bit-identical noise.
    """
    if noise_rms_v < 0.0:
        raise InvalidParams(f"noise rms must be >= 0 (got {noise_rms_v})")
    if noise_rms_v == 0.0:
        return x
    rng = np.random.default_rng(seed)
    noisy = x.samples + noise_rms_v * rng.standard_normal(x.n)
    return Signal(noisy, x.sample_rate_hz, x.unit, x.start_time_s, x.label)


def quantize(v: Signal, adc: AdcModel) -> AcquisitionRecord:
    """Mid-tread quantization of a voltage signal to a single-channel record.

    Codes are round-half-away-from-zero of v / lsb, saturated at the code
    range; the number of clipped samples is reported in the record label.
    """
    if v.unit != Unit.VOLT:
        raise UnitMismatch(f"expected volt input (got {v.unit.value})")
    q = v.samples / adc.lsb_v
    rounded = np.sign(q) * np.floor(np.abs(q) + 0.5)
    clipped = np.clip(rounded, adc.code_min, adc.code_max)
    n_clipped = int(np.count_nonzero(clipped != rounded))
    label = f"{v.label} clipped={n_clipped}".strip()
    return AcquisitionRecord(
        channels=(clipped.astype(np.int64),),
        adc=adc,
        sensor=None,
        seed=0,
        label=label,
        noise_algorithm="",
    )


def reconstruct(rec: AcquisitionRecord, channel: int = 0) -> Signal:
    """Digital-to-analog reconstruction of one channel: code * lsb volts."""
    if not 0 <= channel < len(rec.channels):
        raise ChannelOutOfRange(
            f"channel {channel} not in record with {len(rec.channels)} channel(s)"
        )
    return Signal(
        rec.channels[channel] * rec.adc.lsb_v,
        rec.adc.sample_rate_hz,
        Unit.VOLT,
        0.0,
        f"{rec.label}:ch{channel}",
    )


def _axis_seed(seed: int, axis: int) -> int:
    # Axis 1 keeps the base seed; further axes get independent derived streams.
    if axis == 1:
        return int(seed)
    ss = np.random.SeedSequence((int(seed), int(axis)))
    return int(ss.generate_state(1, np.uint64)[0])


def acquire(
    model: VibrationModel,
    sensor: SensorModel,
    adc: AdcModel,
    duration_s: float,
    seed: int,
    axis_gains: tuple[float, ...] | None = None,
) -> AcquisitionRecord:
    """Simulate the full chain: synthesis -> transduction -> noise -> ADC.

    For a triaxial sensor the per-axis gains default to (1, 0, 0): the bending
    axis carries the vibration, the cross axes only noise.
    """
    if axis_gains is None:
        axis_gains = (1.0,) if sensor.axes == 1 else (1.0, 0.0, 0.0)
    if len(axis_gains) != sensor.axes:
        raise InvalidParams(
            f"expected {sensor.axes} axis gain(s), got {len(axis_gains)}"
        )
    accel = synth_acceleration(model, adc.sample_rate_hz, duration_s)
    channels = []
    clip_counts = []
    for axis in range(1, sensor.axes + 1):
        volts = transduce(scale(accel, axis_gains[axis - 1]), sensor, axis=axis)
        noisy = add_noise(volts, sensor.noise_rms_v, _axis_seed(seed, axis))
        single = quantize(noisy, adc)
        channels.append(single.channels[0])
        clip_counts.append(single.label.rsplit("clipped=", 1)[1])
    label = f"{model.label} clipped={','.join(clip_counts)}".strip()
    return AcquisitionRecord(
        channels=tuple(channels),
        adc=adc,
        sensor=sensor,
        seed=int(seed),
        label=label,
    )


# ---------------------------------------------------------------------------
# Record directory format: channel_<k>.csv per channel plus record.json.
# ---------------------------------------------------------------------------


def save_record(rec: AcquisitionRecord, out_dir: str | Path) -> Path:
    """Write a record as a directory of channel CSVs plus record.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for i, codes in enumerate(rec.channels, start=1):
        name = f"channel_{i}.csv"
        sig = Signal(
            codes.astype(float),
            rec.adc.sample_rate_hz,
            Unit.ADC_CODE,
            0.0,
            f"{rec.label}:ch{i - 1}",
        )
        write_signal_csv(sig, out / name)
        names.append(name)
    meta = {
        "adc": rec.adc.to_dict(),
        "sensor": rec.sensor.to_dict() if rec.sensor else None,
        "seed": rec.seed,
        "label": rec.label,
        "noise_algorithm": rec.noise_algorithm,
        "channels": names,
    }
    with open(out / "record.json", "w", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out


def load_record(record_dir: str | Path) -> AcquisitionRecord:
    """Read a record directory written by :func:`save_record`."""
    root = Path(record_dir)
    meta = _load_json(root / "record.json")
    try:
        adc = AdcModel.from_dict(meta["adc"])
        sensor = SensorModel.from_dict(meta["sensor"]) if meta.get("sensor") else None
        channels = tuple(
            read_signal_csv(root / name).samples.astype(np.int64)
            for name in meta["channels"]
        )
        return AcquisitionRecord(
            channels=channels,
            adc=adc,
            sensor=sensor,
            seed=int(meta["seed"]),
            label=str(meta.get("label", "")),
            noise_algorithm=str(meta.get("noise_algorithm", "")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"{root}/record.json: {exc}") from exc
