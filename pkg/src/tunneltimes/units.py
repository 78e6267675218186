"""Constants and conversions for Rydberg atomic units (hbar = 2*mu = 1).

In these units energy is E = k**2 for wave number k, lengths are Bohr
radii, and one unit of time equals hbar divided by the Rydberg energy,
about 48.378 attoseconds.  The speed of light is 2/alpha, about 274.072.
"""

from __future__ import annotations

# CODATA 2018
FINE_STRUCTURE = 7.2973525693e-3
HBAR_JS = 1.054571817e-34
RYDBERG_J = 2.1798723611035e-18

#: Speed of light in Rydberg atomic units.
C_RYDBERG = 2.0 / FINE_STRUCTURE

#: Attoseconds per unit of time in Rydberg atomic units (hbar / Ry).
ATTOSECONDS_PER_AU = HBAR_JS / RYDBERG_J * 1e18

__all__ = [
    "FINE_STRUCTURE",
    "C_RYDBERG",
    "ATTOSECONDS_PER_AU",
    "to_attoseconds",
    "from_attoseconds",
]


def to_attoseconds(tau_au):
    """Convert a time (scalar or array) from Rydberg a.u. to attoseconds."""
    return tau_au * ATTOSECONDS_PER_AU


def from_attoseconds(tau_as):
    """Convert a time (scalar or array) from attoseconds to Rydberg a.u."""
    return tau_as / ATTOSECONDS_PER_AU
