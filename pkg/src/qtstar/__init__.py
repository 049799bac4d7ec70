"""Galilean-fluctuation decoherence: channels, Gaussian packets and the Stern-Gerlach example."""

from .core import (
    HBAR_SI,
    PLANCK_H,
    DomainError,
    GalileanConfig,
    SternGerlachScenario,
    derive_quantities,
    max_decoherence_time,
    sg_derived_numbers,
)
from .kernel import DensityKernel, Grid1D, Rep, WaveFunction, kernel_from_wavefunction
from .channel import (
    apply_boost_channel,
    apply_galilean_decoherence,
    apply_translation_channel,
    boost_params,
    monte_carlo_channel,
    translation_params,
)
from .coherent import CoherentLabel, coherent_wavefunction, measurement_mixture
from .packet import CollisionSetup, collide, pointer_expansion, split_step_propagate

__version__ = "0.1.0"
