"""uniqset - exact recovery and uniqueness-set checks for finite complex sequences."""

from uniqset.errors import UniqsetError
from uniqset.recovery import Certificate, RecoveryResult, recover_bruteforce, recover_sparse
from uniqset.rounding import ClassSpec, EncodingSpec, RoundingSpec
from uniqset.signal import Signal
from uniqset.spectral import Domain, ModulationSpec, SpectrumObservation, dft_exact, observe
from uniqset.uniqueness import Status, UniquenessVerdict, verify_uniqueness

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "ClassSpec",
    "Domain",
    "EncodingSpec",
    "ModulationSpec",
    "RecoveryResult",
    "RoundingSpec",
    "Signal",
    "SpectrumObservation",
    "Status",
    "UniqsetError",
    "UniquenessVerdict",
    "dft_exact",
    "observe",
    "recover_bruteforce",
    "recover_sparse",
    "verify_uniqueness",
]
