import json

import numpy as np
import pytest

from vibrelab import (
    Signal,
    Unit,
    compose_equivalence,
    load_pipeline,
    parse_pipeline,
    run_pipeline,
    stats,
    write_signal_csv,
)
from vibrelab.errors import (
    CutoffAboveNyquist,
    InvalidParams,
    MalformedDocument,
    SourceNotFound,
    UnknownBlock,
)

from conftest import make_tone


def synth_source_doc(
    duration_s=2.0, seed=42, noise_rms_v=0.0, rate_hz=1000.0, bits=24
):
    return {
        "kind": "synth",
        "model": {
            "label": "t",
            "modes": [{"amplitude_D": 0.001, "frequency_hz": 10.0}],
        },
        "sensor": {
            "sensitivity_v_per_ms2": 1.0,
            "seismic_mass_kg": 0.01,
            "noise_rms_v": noise_rms_v,
            "axes": 1,
        },
        "adc": {"bits": bits, "full_scale_v": 10.0, "sample_rate_hz": rate_hz},
        "duration_s": duration_s,
        "seed": seed,
    }


def doc_text(blocks, taps=None, source=None, name="case"):
    return json.dumps(
        {
            "name": name,
            "source": source or synth_source_doc(),
            "blocks": blocks,
            "taps": taps or [],
        }
    )


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def test_empty_block_list_is_valid_identity_pipeline():
    spec = parse_pipeline(doc_text([]))
    assert spec.blocks == ()


def test_unknown_block_name_is_reported():
    with pytest.raises(UnknownBlock, match="integrale"):
        parse_pipeline(doc_text([{"op": "integrale"}]))


def test_fig4_fixture_parses_to_four_blocks(configs_dir):
    spec = load_pipeline(configs_dir / "fig4_velocity.json")
    assert len(spec.blocks) == 4
    assert [b.op for b in spec.blocks] == [
        "to_acceleration",
        "detrend",
        "integrate",
        "stats",
    ]
    assert [t.label for t in spec.taps] == ["acceleration", "velocity"]


def test_malformed_json_reports_location():
    with pytest.raises(MalformedDocument, match="line"):
        parse_pipeline('{"name": "x", }')


def test_unknown_block_param_rejected_with_location():
    with pytest.raises(InvalidParams, match=r"blocks\[0\]"):
        parse_pipeline(doc_text([{"op": "integrate", "remove_men": True}]))


def test_bad_filter_params_rejected_at_parse():
    with pytest.raises(InvalidParams):
        parse_pipeline(
            doc_text([{"op": "filter", "kind": "lowpass", "cutoff_hz": 50, "taps": 10}])
        )


def test_filter_cutoff_checked_against_synth_source_rate():
    with pytest.raises(InvalidParams, match="Nyquist"):
        parse_pipeline(
            doc_text([{"op": "filter", "kind": "lowpass", "cutoff_hz": 600.0}])
        )


def test_dominant_frequency_requires_preceding_fft():
    with pytest.raises(InvalidParams, match="fft"):
        parse_pipeline(doc_text([{"op": "dominant_frequency"}]))


def test_duplicate_tap_labels_rejected():
    with pytest.raises(InvalidParams, match="duplicate"):
        parse_pipeline(
            doc_text(
                [{"op": "detrend"}],
                taps=[
                    {"after_block": 0, "label": "x"},
                    {"after_block": 1, "label": "x"},
                ],
            )
        )


def test_tap_index_out_of_range():
    with pytest.raises(InvalidParams, match="after_block"):
        parse_pipeline(doc_text([], taps=[{"after_block": 1, "label": "x"}]))


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------


def test_identity_pipeline_reports_source_stats(tmp_path):
    sig = make_tone(10.0, 1000.0, 1000, amplitude=2.0, unit=Unit.VOLT, label="file")
    csv = tmp_path / "input.csv"
    write_signal_csv(sig, csv)
    spec = parse_pipeline(
        doc_text(
            [],
            taps=[{"after_block": 0, "label": "raw"}],
            source={"kind": "file", "path": str(csv)},
        )
    )
    report = run_pipeline(spec, tmp_path / "out")
    st = stats(sig)
    # The CSV carries 9 significant digits; compare at that resolution.
    assert report.taps[0]["peak"] == pytest.approx(st.peak, rel=1e-8)
    assert report.taps[0]["rms"] == pytest.approx(st.rms, rel=1e-8)


def test_fig4_velocity_tap_peak(configs_dir, tmp_path):
    spec = load_pipeline(configs_dir / "fig4_velocity.json")
    report = run_pipeline(spec, tmp_path / "out")
    velocity = next(t for t in report.taps if t["label"] == "velocity")
    assert velocity["peak"] == pytest.approx(0.0628319, rel=0.02)
    assert velocity["unit"] == "meter_per_s"


def test_fig5_displacement_tap_peak(configs_dir, tmp_path):
    spec = load_pipeline(configs_dir / "fig5_displacement.json")
    report = run_pipeline(spec, tmp_path / "out")
    disp = next(t for t in report.taps if t["label"] == "displacement")
    assert disp["peak"] == pytest.approx(1.0e-3, rel=0.02)
    assert disp["unit"] == "meter"


def test_fig2_dominant_frequency(configs_dir, tmp_path):
    spec = load_pipeline(configs_dir / "fig2_accel.json")
    report = run_pipeline(spec, tmp_path / "out")
    dom = next(b for b in report.blocks if b["op"] == "dominant_frequency")
    assert dom["frequency_hz"] == pytest.approx(10.0, abs=0.5)
    accel = next(t for t in report.taps if t["label"] == "acceleration")
    assert accel["dominant_frequency_hz"] == pytest.approx(10.0, abs=0.5)
    assert accel["dominant_magnitude"] == pytest.approx(3.9478, rel=0.01)


def test_missing_source_file(tmp_path):
    spec = parse_pipeline(
        doc_text([], source={"kind": "file", "path": str(tmp_path / "nope.csv")})
    )
    with pytest.raises(SourceNotFound):
        run_pipeline(spec, tmp_path / "out")


def test_block_errors_carry_block_position(tmp_path):
    sig = make_tone(10.0, 100.0, 300, unit=Unit.VOLT)
    csv = tmp_path / "input.csv"
    write_signal_csv(sig, csv)
    spec = parse_pipeline(
        doc_text(
            [
                {"op": "detrend"},
                {"op": "filter", "kind": "lowpass", "cutoff_hz": 80.0},
            ],
            source={"kind": "file", "path": str(csv)},
        )
    )
    with pytest.raises(CutoffAboveNyquist, match=r"block 2 \[filter\]"):
        run_pipeline(spec, tmp_path / "out")


def test_every_tap_materializes_one_csv(configs_dir, tmp_path):
    spec = load_pipeline(configs_dir / "fig4_velocity.json")
    report = run_pipeline(spec, tmp_path / "out")
    csvs = [t["csv"] for t in report.taps]
    assert len(csvs) == len(set(csvs)) == len(spec.taps)
    for name in csvs:
        assert (tmp_path / "out" / name).is_file()


def test_report_is_deterministic_across_reruns(configs_dir, tmp_path):
    spec = load_pipeline(configs_dir / "fig4_velocity.json")
    run_pipeline(spec, tmp_path / "a")
    run_pipeline(spec, tmp_path / "b")
    for name in ("report.json", "tap00_acceleration.csv", "tap01_velocity.csv",
                 "tap00_acceleration.svg", "tap01_velocity.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (
            tmp_path / "b" / name
        ).read_bytes()


def test_block_order_matters(tmp_path):
    filt = {"op": "filter", "kind": "lowpass", "cutoff_hz": 100.0, "taps": 51}
    integ = {"op": "integrate"}
    taps = [{"after_block": 2, "label": "out"}]
    a = run_pipeline(
        parse_pipeline(doc_text([filt, integ], taps=taps, name="fi")),
        tmp_path / "fi",
    )
    b = run_pipeline(
        parse_pipeline(doc_text([integ, filt], taps=taps, name="if")),
        tmp_path / "if",
    )
    assert not np.array_equal(a.tap_signals[0].samples, b.tap_signals[0].samples)


# ---------------------------------------------------------------------------
# compose_equivalence
# ---------------------------------------------------------------------------


def test_fig4_composition_matches_manual_chain(configs_dir, tmp_path):
    spec = load_pipeline(configs_dir / "fig4_velocity.json")
    assert compose_equivalence(spec, tmp_path / "out") is True


def test_single_stats_block_composition(tmp_path):
    spec = parse_pipeline(
        doc_text([{"op": "stats"}], taps=[{"after_block": 1, "label": "s"}])
    )
    assert compose_equivalence(spec, tmp_path / "out") is True


def _random_pipeline_doc(rng: np.random.Generator) -> str:
    rate = float(rng.choice([400.0, 800.0]))
    blocks = [{"op": "to_acceleration", "sensitivity_v_per_ms2": 1.0}]
    pool = ["detrend", "filter", "integrate", "differentiate", "stats", "fft"]
    for _ in range(int(rng.integers(1, 5))):
        op = str(rng.choice(pool))
        if op == "filter":
            blocks.append(
                {
                    "op": "filter",
                    "kind": str(rng.choice(["lowpass", "highpass"])),
                    "cutoff_hz": float(rng.uniform(0.1, 0.4) * rate),
                    "taps": int(rng.choice([21, 51])),
                }
            )
        elif op == "integrate":
            blocks.append(
                {"op": "integrate", "remove_mean": bool(rng.integers(0, 2))}
            )
        elif op == "fft":
            blocks.append(
                {
                    "op": "fft",
                    "window": str(rng.choice(["hann", "rectangular"])),
                    "scaling": str(rng.choice(["amplitude", "power"])),
                }
            )
        else:
            blocks.append({"op": op})
    n_taps = int(rng.integers(1, 3))
    positions = rng.choice(len(blocks) + 1, size=n_taps, replace=False)
    taps = [
        {"after_block": int(p), "label": f"tap{k}"}
        for k, p in enumerate(sorted(positions))
    ]
    source = synth_source_doc(
        duration_s=0.75,
        seed=int(rng.integers(0, 2**31)),
        noise_rms_v=float(rng.choice([0.0, 0.01])),
        rate_hz=rate,
        bits=int(rng.choice([12, 16, 24])),
    )
    return doc_text(blocks, taps=taps, source=source, name="sweep")


def test_composition_equivalence_sweep(tmp_path):
    rng = np.random.default_rng(2024)
    for case in range(50):
        spec = parse_pipeline(_random_pipeline_doc(rng))
        assert compose_equivalence(spec, tmp_path / f"case{case}") is True
