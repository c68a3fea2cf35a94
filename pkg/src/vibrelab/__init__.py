"""vibrelab: cantilever vibration synthesis, DAQ simulation, and analysis.

The toolkit mirrors a software-defined measurement chain: analytic modal
synthesis provides ground-truth kinematics, the DAQ layer simulates the
accelerometer/ADC front end, the DSP layer recovers velocity, displacement,
and spectra from acquired acceleration, and declarative pipelines tie the
blocks into reproducible virtual instruments.
"""

from .daq import (
    AcquisitionRecord,
    AdcModel,
    SensorModel,
    acquire,
    add_noise,
    load_adc,
    load_record,
    load_sensor,
    quantize,
    reconstruct,
    save_record,
    seismic_force,
    transduce,
)
from .dsp import (
    FilterKind,
    FilterSpec,
    Scaling,
    Spectrum,
    Window,
    design_fir,
    differentiate,
    dominant_frequency,
    estimate_damping,
    fft_spectrum,
    filter_signal,
    integrate,
    write_spectrum_csv,
)
from .errors import VibrelabError
from .fourier import fft, ifft
from .pipeline import (
    Block,
    FileSource,
    FrontPanelReport,
    PipelineSpec,
    SynthSource,
    Tap,
    compose_equivalence,
    load_pipeline,
    parse_pipeline,
    run_pipeline,
)
from .signals import (
    Signal,
    SignalStats,
    Unit,
    add,
    format_float,
    multiply,
    read_signal_csv,
    scale,
    sqrt_signal,
    stats,
    write_signal_csv,
)
from .synth import (
    ModalComponent,
    VibrationModel,
    load_model,
    save_model,
    synth_acceleration,
    synth_displacement,
    synth_velocity,
)

__version__ = "0.1.0"

__all__ = [
    "AcquisitionRecord",
    "AdcModel",
    "Block",
    "FileSource",
    "FilterKind",
    "FilterSpec",
    "FrontPanelReport",
    "ModalComponent",
    "PipelineSpec",
    "Scaling",
    "SensorModel",
    "Signal",
    "SignalStats",
    "Spectrum",
    "SynthSource",
    "Tap",
    "Unit",
    "VibrationModel",
    "VibrelabError",
    "Window",
    "acquire",
    "add",
    "add_noise",
    "compose_equivalence",
    "design_fir",
    "differentiate",
    "dominant_frequency",
    "estimate_damping",
    "fft",
    "fft_spectrum",
    "filter_signal",
    "format_float",
    "ifft",
    "integrate",
    "load_adc",
    "load_model",
    "load_pipeline",
    "load_record",
    "load_sensor",
    "multiply",
    "parse_pipeline",
    "quantize",
    "read_signal_csv",
    "reconstruct",
    "run_pipeline",
    "save_model",
    "save_record",
    "scale",
    "seismic_force",
    "sqrt_signal",
    "stats",
    "synth_acceleration",
    "synth_displacement",
    "synth_velocity",
    "transduce",
    "write_signal_csv",
    "write_spectrum_csv",
    "__version__",
]
