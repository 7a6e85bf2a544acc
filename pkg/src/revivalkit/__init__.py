"""Barrier-top spectral model, localized wave packets, and revival dynamics."""

__version__ = "0.1.0"

from .dynamics import PhaseData
from .model import SpectralModel, SpectrumWindow
from .packet import PacketSpec, build_coefficients, select_centers
from .potential import Potential, canonical_double_well

__all__ = [
    "PhaseData",
    "SpectralModel",
    "SpectrumWindow",
    "PacketSpec",
    "build_coefficients",
    "select_centers",
    "Potential",
    "canonical_double_well",
    "__version__",
]
