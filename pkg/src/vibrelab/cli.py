"""Command-line interface: synthesize, acquire, analyze, run pipelines.

Exit codes: 0 success, 1 domain/validation failure, 2 usage error. Every
failure prints one ``error[Code]: text`` line to stderr, so scripts can grep
the stable code. ``VIBRELAB_OUT`` provides a default output directory;
explicit flags override it.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .daq import acquire, load_adc, load_sensor, save_record
from .dsp import dominant_frequency, fft_spectrum, write_spectrum_csv
from .errors import VibrelabError
from .pipeline import load_pipeline, run_pipeline
from .signals import format_float, read_signal_csv, stats, write_signal_csv
from .svgplot import stem_chart
from .synth import load_model, synth_acceleration, synth_displacement, synth_velocity

ENV_OUT = "VIBRELAB_OUT"

_QUANTITIES = {
    "disp": synth_displacement,
    "vel": synth_velocity,
    "acc": synth_acceleration,
}


def _default_out_dir() -> Path | None:
    value = os.environ.get(ENV_OUT)
    return Path(value) if value else None


def _prepare_dir(path: Path) -> Path:
    """Create the directory and verify it is writable before any computation."""
    path.mkdir(parents=True, exist_ok=True)
    probe = path / ".write_probe"
    probe.write_text("")
    probe.unlink()
    return path


def _usage_error(message: str) -> int:
    print(f"error[UsageError]: {message}", file=sys.stderr)
    return 2


def cmd_synth(args: argparse.Namespace) -> int:
    if args.out:
        out = Path(args.out)
    elif (base := _default_out_dir()) is not None:
        out = base / f"synth_{args.quantity}.csv"
    else:
        return _usage_error("--out is required (or set VIBRELAB_OUT)")
    _prepare_dir(out.parent if out.parent != Path("") else Path("."))
    model = load_model(args.model)
    signal = _QUANTITIES[args.quantity](model, args.rate, args.duration)
    write_signal_csv(signal, out)
    if args.verbose:
        st = stats(signal)
        print(f"peak={format_float(st.peak)} rms={format_float(st.rms)}")
    print(f"wrote {out}")
    return 0


def cmd_acquire(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir) if args.out_dir else _default_out_dir()
    if out_dir is None:
        return _usage_error("--out-dir is required (or set VIBRELAB_OUT)")
    _prepare_dir(out_dir)
    model = load_model(args.model)
    sensor = load_sensor(args.sensor)
    adc = load_adc(args.adc)
    record = acquire(model, sensor, adc, args.duration, args.seed)
    save_record(record, out_dir)
    print(f"wrote {out_dir} ({len(record.channels)} channel(s), seed {record.seed})")
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir is not None:
        _prepare_dir(out_dir)
    signal = read_signal_csv(args.signal)
    do_stats = args.stats or not args.fft
    if do_stats:
        st = stats(signal)
        print(f"peak={format_float(st.peak)}")
        print(f"peak_to_peak={format_float(st.peak_to_peak)}")
        print(f"rms={format_float(st.rms)}")
        print(f"mean={format_float(st.mean)}")
    if args.fft:
        spectrum = fft_spectrum(signal, window=args.window)
        freq, mag = dominant_frequency(spectrum)
        print(f"dominant_frequency_hz={format_float(freq)}")
        print(f"dominant frequency: {freq:.3f} Hz (magnitude {format_float(mag)})")
        if out_dir is not None:
            csv_path = out_dir / "spectrum.csv"
            svg_path = out_dir / "spectrum.svg"
            write_spectrum_csv(spectrum, csv_path)
            stem_chart(
                spectrum.frequencies(),
                spectrum.magnitudes,
                svg_path,
                title=signal.label or "spectrum",
                x_label="frequency [Hz]",
                y_label=f"{spectrum.scaling.value} [{spectrum.source_unit.value}]",
            )
            print(f"wrote {csv_path}")
            print(f"wrote {svg_path}")
    return 0


def cmd_pipeline(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir) if args.out_dir else _default_out_dir()
    if out_dir is None:
        return _usage_error("--out-dir is required (or set VIBRELAB_OUT)")
    _prepare_dir(out_dir)
    spec = load_pipeline(args.pipeline)
    report = run_pipeline(spec, out_dir)
    for tap in report.taps:
        print(
            f"tap {tap['label']}: peak={format_float(tap['peak'])} "
            f"rms={format_float(tap['rms'])} [{tap['unit']}]"
        )
    for entry in report.spectra:
        print(
            f"spectrum (block {entry['block']}): dominant "
            f"{entry['dominant_frequency_hz']:.3f} Hz"
        )
    if args.verbose >= 2:
        for line in report.log_lines:
            print(line)
    print(f"report: {out_dir / 'report.json'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vibrelab",
        description="Vibration synthesis, DAQ simulation, and analysis toolkit.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="increase verbosity"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a kinematic signal CSV")
    p.add_argument("model", help="vibration model JSON file")
    p.add_argument("--rate", type=float, required=True, help="sample rate [Hz]")
    p.add_argument("--duration", type=float, required=True, help="duration [s]")
    p.add_argument(
        "--quantity",
        choices=sorted(_QUANTITIES),
        default="acc",
        help="which kinematic quantity to synthesize",
    )
    p.add_argument("--out", help="output CSV path")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("acquire", help="simulate an acquisition into a record dir")
    p.add_argument("model", help="vibration model JSON file")
    p.add_argument("sensor", help="sensor model JSON file")
    p.add_argument("adc", help="ADC model JSON file")
    p.add_argument("--duration", type=float, required=True, help="duration [s]")
    p.add_argument("--seed", type=int, default=0, help="noise seed")
    p.add_argument("--out-dir", dest="out_dir", help="record output directory")
    p.set_defaults(func=cmd_acquire)

    p = sub.add_parser("analyze", help="report stats and spectrum of a signal CSV")
    p.add_argument("signal", help="signal CSV file")
    p.add_argument("--stats", action="store_true", help="print characteristic values")
    p.add_argument("--fft", action="store_true", help="print dominant frequency")
    p.add_argument(
        "--window", choices=("hann", "rectangular"), default="hann"
    )
    p.add_argument("--out-dir", dest="out_dir", help="where to write spectrum files")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("pipeline", help="run a pipeline JSON document")
    p.add_argument("pipeline", help="pipeline JSON file")
    p.add_argument("--out-dir", dest="out_dir", help="report output directory")
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except VibrelabError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error[FileNotFound]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error[OutputNotWritable]: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())
