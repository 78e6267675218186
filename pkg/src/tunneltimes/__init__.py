"""Distributions of quantum tunneling times read off a model clock.

The package computes, for two one-dimensional scattering problems, the
real-valued probability distribution of the time a Salecker-Wigner-Peres
clock accumulates while the particle traverses the classically
forbidden region:

* a Gaussian wave packet transmitted through a rectangular barrier;
* the decay of a bound (or confined-sine) state after the confining
  potential is suddenly cut down to a finite shell.

Everything is expressed in Rydberg atomic units (hbar = 2m = 1, so the
energy of a wave number k is k^2); `units` converts times to
attoseconds.  The physics lives in `barrier` and `ionization`; the
change of variables from wave numbers to times, the sampler and the
summary statistics live in `distribution`; `scenarios` wires the two
sides together and `cli` exposes figure-reproduction presets.
"""

__version__ = "0.1.0"

from .numerics import Interval, NonConvergenceError
from .units import (ATTOSECONDS_PER_AU, C_RYDBERG, from_attoseconds,
                    to_attoseconds)
from .barrier import (BarrierSpec, GaussianPacketSpec, clock_time,
                      default_barrier_support, spectral_amplitude,
                      transmission_amplitude, transmitted_density)
from .ionization import (BoundState, BranchJumpError, ConfinedSineState,
                         InitialStateSpec, NoBoundStateError, WellSpec,
                         default_ionization_support, eigenstate_coefficients,
                         find_resonances, ionization_clock_time,
                         ionization_density, overlap_S,
                         penetration_probability, resolve_initial_state,
                         solve_ground_state)
from .distribution import (ClockCurve, HistogramSpec, LightCone,
                           SpectralDensity, SummaryStats, TimeDistribution,
                           cdf_of_times, cdf_of_times_batch,
                           clock_curve_extrema, density_of_times,
                           sample_times, summarize)
from .scenarios import ScenarioBundle, barrier_scenario, ionization_scenario

__all__ = [
    "__version__",
    "Interval", "NonConvergenceError",
    "ATTOSECONDS_PER_AU", "C_RYDBERG", "from_attoseconds", "to_attoseconds",
    "BarrierSpec", "GaussianPacketSpec", "clock_time",
    "default_barrier_support", "spectral_amplitude",
    "transmission_amplitude", "transmitted_density",
    "BoundState", "BranchJumpError", "ConfinedSineState", "InitialStateSpec",
    "NoBoundStateError", "WellSpec", "default_ionization_support",
    "eigenstate_coefficients", "find_resonances", "ionization_clock_time",
    "ionization_density", "overlap_S", "penetration_probability",
    "resolve_initial_state", "solve_ground_state",
    "ClockCurve", "HistogramSpec", "LightCone", "SpectralDensity",
    "SummaryStats", "TimeDistribution", "cdf_of_times", "cdf_of_times_batch",
    "clock_curve_extrema", "density_of_times", "sample_times", "summarize",
    "ScenarioBundle", "barrier_scenario", "ionization_scenario",
]
