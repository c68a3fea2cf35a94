"""Domain error hierarchy.

Every error carries a stable machine-readable ``code`` (the class name) so
command-line output and logs stay greppable.
"""


class VibrelabError(Exception):
    """Base class for all vibrelab domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidSignal(VibrelabError):
    """Signal construction violated an invariant (rate, length, finiteness)."""


class InvalidModel(VibrelabError):
    """Model parameters (modal, sensor, or ADC) are out of range."""


class LengthMismatch(VibrelabError):
    """Binary operation on signals with different sample counts."""


class RateMismatch(VibrelabError):
    """Binary operation on signals with different sample rates."""


class UnitMismatch(VibrelabError):
    """Operation received a signal with the wrong physical unit."""


class NegativeInput(VibrelabError):
    """Square root of a signal containing negative samples."""


class NonFiniteScalar(VibrelabError):
    """Scalar argument is NaN or infinite."""


class NyquistViolation(VibrelabError):
    """Requested sample rate cannot represent the highest frequency."""


class NonPositiveDuration(VibrelabError):
    """Synthesis duration must cover at least one sample."""


class NonPositiveMass(VibrelabError):
    """Seismic mass must be strictly positive."""


class ChannelOutOfRange(VibrelabError):
    """Requested channel index does not exist in the record."""


class TooShort(VibrelabError):
    """Signal has too few samples for the requested operation."""


class CutoffAboveNyquist(VibrelabError):
    """Filter cutoff at or above half the sample rate."""


class SignalShorterThanFilter(VibrelabError):
    """Signal has fewer samples than the filter has taps."""


class InsufficientPeaks(VibrelabError):
    """Damping estimation needs at least three positive peaks."""


class EmptySpectrum(VibrelabError):
    """Spectrum has no bins to search."""


class MalformedDocument(VibrelabError):
    """A JSON or CSV document could not be parsed; message carries the location."""


class UnknownBlock(VibrelabError):
    """Pipeline document names an operation that does not exist."""


class InvalidParams(VibrelabError):
    """Operation parameters fail validation; message carries the location."""


class SourceNotFound(VibrelabError):
    """Pipeline source file does not exist."""
