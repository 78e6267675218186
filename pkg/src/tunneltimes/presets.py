"""Built-in figure-reproduction presets.

Each preset is a complete config document in the same plain-text schema
the CLI accepts from files, so `tunneltimes presets --show NAME` prints
something that can be saved, edited and fed back through `run`.  The
parameter sets follow the published figure captions for this family of
problems; close-view presets rerun the same physics with a different
histogram window.
"""
from __future__ import annotations

from dataclasses import dataclass

__all__ = ["Preset", "PRESETS", "preset_names", "preset_text"]


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    text: str


_BARRIER_SAMPLING = """
[sampling]
n_samples = 1000000
seed = 12345
bin_width = 0.0031

[output]
outputs = density_k clock_curve time_histogram time_cdf stats
"""


def _barrier(width: float) -> str:
    return f"""\
[model]
kind = barrier

[barrier]
v0 = 7
width = {width}

[packet]
k0 = 1.5
sigma = 5
{_BARRIER_SAMPLING}"""


def _ionization(b: float, extra_sampling: str = "") -> str:
    return f"""\
[model]
kind = ionization

[well]
v0 = 7
a = 1
b = {b}

[initial]
kind = ground_state

[sampling]
n_samples = 1000000
seed = 12345
{extra_sampling}
[output]
outputs = density_k clock_curve time_histogram time_cdf stats
"""


_SINE = """\
[model]
kind = ionization

[well]
v0 = 11
a = 1
b = 2

[initial]
kind = confined_sine
k0 = 3.141592653589793

[sampling]
n_samples = 1000000
seed = 12345
bin_width = 0.0031

[output]
outputs = density_k clock_curve time_histogram time_cdf stats
"""


_ALL = (
    Preset("fig1-top",
           "transmitted density and clock curve, barrier width 2",
           _barrier(2.0)),
    Preset("fig1-bottom",
           "transmitted density and clock curve, barrier width 16",
           _barrier(16.0)),
    Preset("fig2-top",
           "tunneling-time histogram for barrier width 2",
           _barrier(2.0)),
    Preset("fig2-bottom",
           "tunneling-time histogram for barrier width 16",
           _barrier(16.0)),
    Preset("fig3",
           "decay spectral density and clock curve, shell width 2",
           _ionization(3.0, "bin_width = 0.0031\n")),
    Preset("fig4",
           "decay spectral density and clock curve, shell width 4",
           _ionization(5.0, "bin_width = 40\n")),
    Preset("fig5-top",
           "decay-time histogram, shell width 2, narrow bins",
           _ionization(3.0, "bin_width = 0.0031\n")),
    Preset("fig5-bottom",
           "decay-time histogram, shell width 4, 40 a.u. bins",
           _ionization(5.0, "bin_width = 40\n")),
    Preset("fig6",
           "close views of the fig5-top histogram (same run)",
           _ionization(3.0, "bin_width = 0.0031\n")),
    Preset("fig7-top",
           "decay times, shell width 4, small-time window",
           _ionization(5.0,
                       "bin_width = 0.0031\nhist_lo = 0\nhist_hi = 0.5\n")),
    Preset("fig7-bottom",
           "decay times, shell width 4, 2 a.u. bins",
           _ionization(5.0, "bin_width = 2\n")),
    Preset("fig8",
           "confined-sine release: density, clock curve and times",
           _SINE),
)

PRESETS = {p.name: p for p in _ALL}


def preset_names() -> list[str]:
    return [p.name for p in _ALL]


def preset_text(name: str) -> str:
    if name not in PRESETS:
        known = ", ".join(preset_names())
        raise KeyError(f"unknown preset {name!r}; known presets: {known}")
    return PRESETS[name].text
