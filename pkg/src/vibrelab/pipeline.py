"""Declarative processing pipelines and their front-panel reports.

A pipeline document names a source (a signal file or a simulated
acquisition), an ordered chain of processing blocks threading one signal,
and taps: labelled probes on intermediate signals. Running a pipeline
produces a report directory: per-tap CSV signals and SVG charts, per-fft
spectrum artifacts, a deterministic ``report.json``, and an execution log
(the only artifact carrying timings).
"""

from __future__ import annotations

import json
import tempfile
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .daq import AdcModel, SensorModel, acquire, reconstruct
from .dsp import (
    FilterKind,
    FilterSpec,
    Scaling,
    Spectrum,
    Window,
    differentiate,
    dominant_frequency,
    estimate_damping,
    fft_spectrum,
    filter_signal,
    integrate,
    write_spectrum_csv,
)
from .errors import (
    InvalidModel,
    InvalidParams,
    MalformedDocument,
    SourceNotFound,
    UnitMismatch,
    UnknownBlock,
    VibrelabError,
)
from .signals import Signal, Unit, read_signal_csv, stats, write_signal_csv
from .svgplot import line_chart, stem_chart
from .synth import VibrationModel

BLOCK_OPS = (
    "reconstruct_volts",
    "to_acceleration",
    "detrend",
    "filter",
    "integrate",
    "differentiate",
    "stats",
    "fft",
    "dominant_frequency",
    "estimate_damping",
)


@dataclass(frozen=True)
class Block:
    """One processing step: operation name plus its JSON-shaped parameters."""

    op: str
    params: dict


@dataclass(frozen=True)
class FileSource:
    path: str


@dataclass(frozen=True)
class SynthSource:
    model: VibrationModel
    sensor: SensorModel
    adc: AdcModel
    duration_s: float
    seed: int


@dataclass(frozen=True)
class Tap:
    """Labelled probe on the signal after block ``after_block`` (0 = source)."""

    after_block: int
    label: str


@dataclass(frozen=True)
class PipelineSpec:
    name: str
    source: FileSource | SynthSource
    blocks: tuple[Block, ...]
    taps: tuple[Tap, ...]


@dataclass
class FrontPanelReport:
    """Execution results: per-tap stats, artifacts, and the timing log."""

    name: str
    taps: list[dict]
    blocks: list[dict]
    spectra: list[dict]
    artifacts: list[str]
    log_lines: list[str]
    out_dir: Path
    tap_signals: list[Signal]

    def to_dict(self) -> dict:
        # Timings stay out of this dict so report.json is run-invariant.
        return {
            "name": self.name,
            "taps": self.taps,
            "blocks": self.blocks,
            "spectra": self.spectra,
            "artifacts": self.artifacts,
        }


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_BLOCK_PARAM_KEYS = {
    "reconstruct_volts": {"bits", "full_scale_v"},
    "to_acceleration": {"sensitivity_v_per_ms2"},
    "detrend": set(),
    "filter": {"kind", "cutoff_hz", "taps"},
    "integrate": {"remove_mean", "highpass_hz"},
    "differentiate": set(),
    "stats": set(),
    "fft": {"window", "scaling"},
    "dominant_frequency": {"exclude_dc"},
    "estimate_damping": set(),
}


def _filter_spec_from_params(params: dict) -> FilterSpec:
    cutoff = params["cutoff_hz"]
    cutoffs = tuple(float(c) for c in cutoff) if isinstance(cutoff, list) else (
        float(cutoff),
    )
    return FilterSpec(
        FilterKind(params["kind"]), cutoffs, int(params.get("taps", 101))
    )


def _validate_block(raw: dict, index: int) -> Block:
    where = f"blocks[{index}]"
    if not isinstance(raw, dict) or "op" not in raw:
        raise InvalidParams(f"{where}: block must be an object with an 'op' field")
    op = raw["op"]
    if op not in BLOCK_OPS:
        raise UnknownBlock(f"{where}: {op!r}")
    params = {k: v for k, v in raw.items() if k != "op"}
    unknown = set(params) - _BLOCK_PARAM_KEYS[op]
    if unknown:
        raise InvalidParams(f"{where} [{op}]: unknown parameter(s) {sorted(unknown)}")
    try:
        if op == "reconstruct_volts":
            AdcModel(int(params["bits"]), float(params["full_scale_v"]), 1.0)
        elif op == "to_acceleration":
            if not float(params["sensitivity_v_per_ms2"]) > 0.0:
                raise InvalidParams("sensitivity must be > 0")
        elif op == "filter":
            _filter_spec_from_params(params)
        elif op == "integrate":
            if "remove_mean" in params and not isinstance(params["remove_mean"], bool):
                raise InvalidParams("remove_mean must be a boolean")
            if params.get("highpass_hz") is not None:
                if not float(params["highpass_hz"]) > 0.0:
                    raise InvalidParams("highpass_hz must be > 0")
        elif op == "fft":
            Window(params.get("window", "hann"))
            Scaling(params.get("scaling", "amplitude"))
        elif op == "dominant_frequency":
            if "exclude_dc" in params and not isinstance(params["exclude_dc"], bool):
                raise InvalidParams("exclude_dc must be a boolean")
    except (KeyError, TypeError, ValueError, InvalidModel, InvalidParams) as exc:
        raise InvalidParams(f"{where} [{op}]: {exc}") from None
    return Block(op=op, params=params)


def _parse_source(raw: dict) -> FileSource | SynthSource:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise InvalidParams("source: must be an object with a 'kind' field")
    kind = raw["kind"]
    if kind == "file":
        if "path" not in raw:
            raise InvalidParams("source: file source needs a 'path'")
        return FileSource(path=str(raw["path"]))
    if kind == "synth":
        try:
            return SynthSource(
                model=VibrationModel.from_dict(raw["model"]),
                sensor=SensorModel.from_dict(raw["sensor"]),
                adc=AdcModel.from_dict(raw["adc"]),
                duration_s=float(raw["duration_s"]),
                seed=int(raw["seed"]),
            )
        except (KeyError, TypeError, ValueError, InvalidModel) as exc:
            raise InvalidParams(f"source: {exc}") from None
    raise InvalidParams(f"source: unknown kind {kind!r}")


def parse_pipeline(text: str) -> PipelineSpec:
    """Parse and validate a pipeline JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(
            f"line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("top-level value must be an object")
    source = _parse_source(doc.get("source", {}))
    raw_blocks = doc.get("blocks", [])
    if not isinstance(raw_blocks, list):
        raise InvalidParams("blocks: must be an array")
    blocks = tuple(_validate_block(raw, i) for i, raw in enumerate(raw_blocks))
    seen_fft = False
    for i, block in enumerate(blocks):
        if block.op == "fft":
            seen_fft = True
        elif block.op == "dominant_frequency" and not seen_fft:
            raise InvalidParams(
                f"blocks[{i}] [dominant_frequency]: needs a preceding fft block"
            )
    taps: list[Tap] = []
    for i, raw in enumerate(doc.get("taps", [])):
        where = f"taps[{i}]"
        if not isinstance(raw, dict) or "after_block" not in raw or "label" not in raw:
            raise InvalidParams(f"{where}: needs 'after_block' and 'label'")
        after = int(raw["after_block"])
        if not 0 <= after <= len(blocks):
            raise InvalidParams(
                f"{where}: after_block {after} out of range 0..{len(blocks)}"
            )
        label = str(raw["label"])
        if not label:
            raise InvalidParams(f"{where}: label must be non-empty")
        if any(t.label == label for t in taps):
            raise InvalidParams(f"{where}: duplicate tap label {label!r}")
        taps.append(Tap(after_block=after, label=label))
    if isinstance(source, SynthSource):
        rate = source.adc.sample_rate_hz
        for i, block in enumerate(blocks):
            if block.op == "filter":
                spec = _filter_spec_from_params(block.params)
                if any(c >= rate / 2.0 for c in spec.cutoff_hz):
                    raise InvalidParams(
                        f"blocks[{i}] [filter]: cutoff(s) {spec.cutoff_hz} Hz reach "
                        f"the Nyquist frequency of the {rate} Hz source"
                    )
    return PipelineSpec(
        name=str(doc.get("name", "")),
        source=source,
        blocks=blocks,
        taps=tuple(taps),
    )


def load_pipeline(path: str | Path) -> PipelineSpec:
    """Load a pipeline document; file-source paths resolve against its folder."""
    path = Path(path)
    spec = parse_pipeline(path.read_text())
    if isinstance(spec.source, FileSource):
        src = Path(spec.source.path)
        if not src.is_absolute():
            spec = PipelineSpec(
                name=spec.name,
                source=FileSource(path=str(path.parent / src)),
                blocks=spec.blocks,
                taps=spec.taps,
            )
    return spec


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------


def _resolve_source(source: FileSource | SynthSource) -> Signal:
    if isinstance(source, FileSource):
        path = Path(source.path)
        if not path.is_file():
            raise SourceNotFound(f"source file not found: {path}")
        return read_signal_csv(path)
    record = acquire(
        source.model, source.sensor, source.adc, source.duration_s, source.seed
    )
    return reconstruct(record, 0)


def _codes_to_volts(sig: Signal, bits: int, full_scale_v: float) -> Signal:
    if sig.unit != Unit.ADC_CODE:
        raise UnitMismatch(f"expected adc_code input (got {sig.unit.value})")
    lsb = 2.0 * full_scale_v / (1 << bits)
    return Signal(
        sig.samples * lsb, sig.sample_rate_hz, Unit.VOLT, sig.start_time_s, sig.label
    )


def _volts_to_acceleration(sig: Signal, sensitivity_v_per_ms2: float) -> Signal:
    if sig.unit != Unit.VOLT:
        raise UnitMismatch(f"expected volt input (got {sig.unit.value})")
    return Signal(
        sig.samples / sensitivity_v_per_ms2,
        sig.sample_rate_hz,
        Unit.METER_PER_S2,
        sig.start_time_s,
        sig.label,
    )


def _detrend(sig: Signal) -> Signal:
    return Signal(
        sig.samples - np.mean(sig.samples),
        sig.sample_rate_hz,
        sig.unit,
        sig.start_time_s,
        sig.label,
    )


def _apply_block(
    sig: Signal, block: Block, spectra: list[tuple[int, Spectrum]], index: int
) -> tuple[Signal, dict | None]:
    """Apply one block; measurement blocks pass the signal through."""
    op, p = block.op, block.params
    if op == "reconstruct_volts":
        return _codes_to_volts(sig, int(p["bits"]), float(p["full_scale_v"])), None
    if op == "to_acceleration":
        return _volts_to_acceleration(sig, float(p["sensitivity_v_per_ms2"])), None
    if op == "detrend":
        return _detrend(sig), None
    if op == "filter":
        return filter_signal(sig, _filter_spec_from_params(p)), None
    if op == "integrate":
        highpass = p.get("highpass_hz")
        return (
            integrate(
                sig,
                remove_mean=bool(p.get("remove_mean", True)),
                highpass_hz=None if highpass is None else float(highpass),
            ),
            None,
        )
    if op == "differentiate":
        return differentiate(sig), None
    if op == "stats":
        st = stats(sig)
        return sig, {
            "peak": st.peak,
            "peak_to_peak": st.peak_to_peak,
            "rms": st.rms,
            "mean": st.mean,
        }
    if op == "fft":
        spectrum = fft_spectrum(
            sig, p.get("window", "hann"), p.get("scaling", "amplitude")
        )
        spectra.append((index, spectrum))
        return sig, {"bin_width_hz": spectrum.bin_width_hz, "n_bins": spectrum.n_bins}
    if op == "dominant_frequency":
        freq, mag = dominant_frequency(
            spectra[-1][1], exclude_dc=bool(p.get("exclude_dc", True))
        )
        return sig, {"frequency_hz": freq, "magnitude": mag}
    if op == "estimate_damping":
        return sig, {"damping_ratio": estimate_damping(sig)}
    raise UnknownBlock(op)  # unreachable after parse validation


def _safe_name(label: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in label)


def run_pipeline(spec: PipelineSpec, out_dir: str | Path) -> FrontPanelReport:
    """Execute a pipeline and write its report directory.

    Blocks run in declaration order, threading one signal; a failing block
    raises its own error annotated with the block position. Identical specs
    (and seeds) produce byte-identical artifacts except ``execution_log.txt``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    started = datetime.now(timezone.utc).isoformat()
    log_lines = [f"pipeline: {spec.name}", f"started: {started}"]

    t0 = time.perf_counter()
    sig = _resolve_source(spec.source)
    log_lines.append(f"source resolved in {(time.perf_counter() - t0) * 1e3:.3f} ms")

    stage_signals = [sig]
    block_results: list[dict] = []
    spectra: list[tuple[int, Spectrum]] = []
    for i, block in enumerate(spec.blocks, start=1):
        t0 = time.perf_counter()
        try:
            sig, result = _apply_block(sig, block, spectra, i)
        except VibrelabError as exc:
            raise type(exc)(f"block {i} [{block.op}]: {exc}") from exc
        log_lines.append(
            f"block {i} [{block.op}] {(time.perf_counter() - t0) * 1e3:.3f} ms"
        )
        if result is not None:
            block_results.append({"block": i, "op": block.op, **result})
        stage_signals.append(sig)

    artifacts: list[str] = []
    fft_blocks = [b for b in spec.blocks if b.op == "fft"]
    tap_entries: list[dict] = []
    for j, tap in enumerate(spec.taps):
        tsig = stage_signals[tap.after_block]
        st = stats(tsig)
        csv_name = f"tap{j:02d}_{_safe_name(tap.label)}.csv"
        svg_name = f"tap{j:02d}_{_safe_name(tap.label)}.svg"
        write_signal_csv(tsig, out / csv_name)
        line_chart(
            tsig.times(),
            tsig.samples,
            out / svg_name,
            title=tap.label,
            x_label="time [s]",
            y_label=tsig.unit.value,
        )
        artifacts.extend([csv_name, svg_name])
        entry = {
            "label": tap.label,
            "after_block": tap.after_block,
            "unit": tsig.unit.value,
            "n": tsig.n,
            "peak": st.peak,
            "peak_to_peak": st.peak_to_peak,
            "rms": st.rms,
            "mean": st.mean,
            "csv": csv_name,
            "svg": svg_name,
        }
        if fft_blocks:
            params = fft_blocks[0].params
            spectrum = fft_spectrum(
                tsig, params.get("window", "hann"), params.get("scaling", "amplitude")
            )
            freq, mag = dominant_frequency(spectrum)
            entry["dominant_frequency_hz"] = freq
            entry["dominant_magnitude"] = mag
        tap_entries.append(entry)

    spectrum_entries: list[dict] = []
    for index, spectrum in spectra:
        csv_name = f"spectrum_block{index:02d}.csv"
        svg_name = f"spectrum_block{index:02d}.svg"
        write_spectrum_csv(spectrum, out / csv_name)
        stem_chart(
            spectrum.frequencies(),
            spectrum.magnitudes,
            out / svg_name,
            title=f"{spec.name} spectrum (block {index})",
            x_label="frequency [Hz]",
            y_label=f"{spectrum.scaling.value} [{spectrum.source_unit.value}]",
        )
        artifacts.extend([csv_name, svg_name])
        freq, mag = dominant_frequency(spectrum)
        spectrum_entries.append(
            {
                "block": index,
                "bin_width_hz": spectrum.bin_width_hz,
                "window": spectrum.window.value,
                "scaling": spectrum.scaling.value,
                "dominant_frequency_hz": freq,
                "dominant_magnitude": mag,
                "csv": csv_name,
                "svg": svg_name,
            }
        )

    artifacts.append("execution_log.txt")
    report = FrontPanelReport(
        name=spec.name,
        taps=tap_entries,
        blocks=block_results,
        spectra=spectrum_entries,
        artifacts=sorted(artifacts),
        log_lines=log_lines,
        out_dir=out,
        tap_signals=[stage_signals[t.after_block] for t in spec.taps],
    )
    with open(out / "report.json", "w", newline="\n") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(out / "execution_log.txt", "w", newline="\n") as fh:
        fh.write("\n".join(log_lines) + "\n")
    return report


def compose_equivalence(spec: PipelineSpec, out_dir: str | Path | None = None) -> bool:
    """Check that the runner matches a manual chain of the module operations.

    Re-executes the pipeline by calling the underlying operations directly and
    compares every tapped signal against the runner's output within 4 ulp.
    """
    if out_dir is None:
        with tempfile.TemporaryDirectory() as tmp:
            return compose_equivalence(spec, tmp)
    report = run_pipeline(spec, out_dir)

    sig = _resolve_source(spec.source)
    stages = [sig]
    spectra: list[tuple[int, Spectrum]] = []
    for i, block in enumerate(spec.blocks, start=1):
        sig, _ = _apply_block(sig, block, spectra, i)
        stages.append(sig)

    for tap, produced in zip(spec.taps, report.tap_signals):
        expected = stages[tap.after_block]
        if produced.unit != expected.unit or produced.n != expected.n:
            return False
        if not _within_ulp(produced.samples, expected.samples, 4):
            return False
    return True


def _within_ulp(a: np.ndarray, b: np.ndarray, ulps: int) -> bool:
    tol = ulps * np.spacing(np.maximum(np.abs(a), np.abs(b)))
    return bool(np.all(np.abs(a - b) <= tol))
