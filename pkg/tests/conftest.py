from pathlib import Path

import numpy as np
import pytest

from vibrelab import Signal, Unit

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def configs_dir() -> Path:
    return CONFIGS


def make_tone(
    freq_hz: float,
    rate_hz: float,
    n: int,
    amplitude: float = 1.0,
    phase_rad: float = 0.0,
    unit: Unit = Unit.DIMENSIONLESS,
    label: str = "tone",
) -> Signal:
    t = np.arange(n) / rate_hz
    return Signal(
        amplitude * np.sin(2.0 * np.pi * freq_hz * t + phase_rad),
        rate_hz,
        unit,
        0.0,
        label,
    )
