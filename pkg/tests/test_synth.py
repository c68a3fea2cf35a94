import math

import numpy as np
import pytest

from vibrelab import (
    ModalComponent,
    Unit,
    VibrationModel,
    add,
    load_model,
    save_model,
    stats,
    synth_acceleration,
    synth_displacement,
    synth_velocity,
)
from vibrelab.errors import InvalidModel, NonPositiveDuration, NyquistViolation

from oracles import max_ulp_diff, rel_rms_error

RATE = 1000.0
MODE = ModalComponent(amplitude_m=1e-3, frequency_hz=10.0)
MODEL = VibrationModel(modes=(MODE,), label="single")
OMEGA = 2.0 * math.pi * 10.0


# ---------------------------------------------------------------------------
# Model validation and serialization
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [
        {"amplitude_m": 0.0, "frequency_hz": 10.0},
        {"amplitude_m": -1.0, "frequency_hz": 10.0},
        {"amplitude_m": 1.0, "frequency_hz": 0.0},
        {"amplitude_m": 1.0, "frequency_hz": 10.0, "damping_ratio": 1.0},
        {"amplitude_m": 1.0, "frequency_hz": 10.0, "damping_ratio": -0.1},
    ],
)
def test_mode_validation(kwargs):
    with pytest.raises(InvalidModel):
        ModalComponent(**kwargs)


def test_model_needs_modes():
    with pytest.raises(InvalidModel):
        VibrationModel(modes=())


def test_model_json_round_trip(tmp_path):
    model = VibrationModel(
        modes=(
            ModalComponent(1e-3, 10.0, 0.1, 0.02),
            ModalComponent(2e-4, 35.0),
        ),
        label="two-mode",
    )
    path = tmp_path / "model.json"
    save_model(model, path)
    assert load_model(path) == model


def test_model_dict_uses_documented_keys():
    doc = MODEL.to_dict()
    assert set(doc) == {"label", "modes"}
    assert set(doc["modes"][0]) == {
        "amplitude_D",
        "frequency_hz",
        "phase_rad",
        "damping_ratio",
    }


# ---------------------------------------------------------------------------
# Displacement
# ---------------------------------------------------------------------------


def test_displacement_closed_form_sample():
    d = synth_displacement(MODEL, RATE, 0.1)
    # t = 0.025 s is a quarter period: sin(pi/2) = 1
    assert d.samples[25] == pytest.approx(1e-3, abs=1e-12)
    assert d.unit is Unit.METER


def test_displacement_starts_at_zero():
    d = synth_displacement(MODEL, RATE, 0.5)
    assert d.samples[0] == 0.0


def test_nyquist_guard():
    model = VibrationModel(modes=(ModalComponent(1e-3, 600.0),))
    with pytest.raises(NyquistViolation):
        synth_displacement(model, 1000.0, 1.0)


def test_non_positive_duration():
    for bad in (0.0, -1.0):
        with pytest.raises(NonPositiveDuration):
            synth_displacement(MODEL, RATE, bad)


# ---------------------------------------------------------------------------
# Velocity
# ---------------------------------------------------------------------------


def test_velocity_initial_value_is_amplitude_times_omega():
    v = synth_velocity(MODEL, RATE, 0.5)
    assert v.samples[0] == pytest.approx(1e-3 * OMEGA, rel=1e-15)
    assert v.unit is Unit.METER_PER_S


def test_velocity_peak():
    v = synth_velocity(MODEL, RATE, 2.0)
    assert stats(v).peak == pytest.approx(1e-3 * OMEGA, abs=1e-9)


def test_two_mode_velocity_is_sum_of_single_modes():
    m1 = VibrationModel(modes=(ModalComponent(1e-3, 10.0),))
    m2 = VibrationModel(modes=(ModalComponent(5e-4, 23.0, 0.3),))
    both = VibrationModel(modes=m1.modes + m2.modes)
    combined = synth_velocity(both, RATE, 1.0)
    summed = add(synth_velocity(m1, RATE, 1.0), synth_velocity(m2, RATE, 1.0))
    assert np.max(np.abs(combined.samples - summed.samples)) <= 1e-12
    assert max_ulp_diff(combined.samples, summed.samples) <= 4.0


# ---------------------------------------------------------------------------
# Acceleration
# ---------------------------------------------------------------------------


def test_acceleration_peak():
    a = synth_acceleration(MODEL, RATE, 2.0)
    assert stats(a).peak == pytest.approx(1e-3 * OMEGA**2, abs=1e-6)
    assert a.unit is Unit.METER_PER_S2


def test_acceleration_starts_at_zero():
    a = synth_acceleration(MODEL, RATE, 0.5)
    assert a.samples[0] == pytest.approx(0.0, abs=1e-15)


def test_peak_ratio_is_omega_squared():
    a = synth_acceleration(MODEL, RATE, 2.0)
    d = synth_displacement(MODEL, RATE, 2.0)
    ratio = stats(a).peak / stats(d).peak
    assert ratio == pytest.approx(OMEGA**2, rel=1e-3)


def test_acceleration_sign_is_true_second_derivative():
    # At the first displacement maximum the acceleration points back down.
    a = synth_acceleration(MODEL, RATE, 0.1)
    d = synth_displacement(MODEL, RATE, 0.1)
    top = int(np.argmax(d.samples))
    assert a.samples[top] < 0.0


# ---------------------------------------------------------------------------
# Cross-quantity properties
# ---------------------------------------------------------------------------


def test_central_difference_of_displacement_matches_velocity():
    d = synth_displacement(MODEL, RATE, 2.0)
    v = synth_velocity(MODEL, RATE, 2.0)
    h = 1.0 / RATE
    approx = (d.samples[2:] - d.samples[:-2]) / (2.0 * h)
    bound = (OMEGA * h) ** 2 / 6.0 + 1e-9
    assert rel_rms_error(approx, v.samples[1:-1]) <= bound


def test_peak_amplitude_chain_over_ten_periods():
    d = synth_displacement(MODEL, RATE, 1.0)  # 10 periods
    v = synth_velocity(MODEL, RATE, 1.0)
    a = synth_acceleration(MODEL, RATE, 1.0)
    assert stats(v).peak == pytest.approx(OMEGA * stats(d).peak, rel=1e-3)
    assert stats(a).peak == pytest.approx(OMEGA * stats(v).peak, rel=1e-3)


def test_damped_velocity_matches_finite_difference_of_displacement():
    model = VibrationModel(modes=(ModalComponent(1e-3, 10.0, 0.2, 0.05),))
    rate = 20_000.0
    h = 1.0 / rate
    bound = 2.0 * (OMEGA * h) ** 2 / 6.0 + 1e-9  # central-difference truncation
    d = synth_displacement(model, rate, 0.5)
    v = synth_velocity(model, rate, 0.5)
    approx = (d.samples[2:] - d.samples[:-2]) / (2.0 * h)
    assert rel_rms_error(approx, v.samples[1:-1]) <= bound


def test_damped_acceleration_matches_finite_difference_of_velocity():
    model = VibrationModel(modes=(ModalComponent(1e-3, 10.0, 0.2, 0.05),))
    rate = 20_000.0
    h = 1.0 / rate
    bound = 2.0 * (OMEGA * h) ** 2 / 6.0 + 1e-9
    v = synth_velocity(model, rate, 0.5)
    a = synth_acceleration(model, rate, 0.5)
    approx = (v.samples[2:] - v.samples[:-2]) / (2.0 * h)
    assert rel_rms_error(approx, a.samples[1:-1]) <= bound


def test_damped_envelope_decays():
    model = VibrationModel(modes=(ModalComponent(1e-3, 10.0, 0.0, 0.05),))
    d = synth_displacement(model, RATE, 3.0)
    first = np.max(np.abs(d.samples[:1000]))
    last = np.max(np.abs(d.samples[-1000:]))
    assert last < first * 0.1
