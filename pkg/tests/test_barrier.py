"""Rectangular-barrier scattering checks.

The transmission amplitude is validated against an independent 2x2
transfer-matrix oracle (interface matrices and a propagation step,
solved with plain complex linear algebra) before anything that builds
on it is trusted.
"""

import cmath
import math
import warnings

import numpy as np
import pytest

from tunneltimes.barrier import (
    BarrierSpec,
    GaussianPacketSpec,
    clock_time,
    default_barrier_support,
    spectral_amplitude,
    transmission_amplitude,
    transmitted_density,
)
from tunneltimes.numerics import Interval, integrate


# --- independent transfer-matrix oracle ------------------------------------

def _basis_matrix(kappa: complex, x: float) -> np.ndarray:
    """Wronskian-style matrix of the basis (e^{kx}, e^{-kx}) at x."""
    up = cmath.exp(kappa * x)
    dn = cmath.exp(-kappa * x)
    return np.array([[up, dn], [kappa * up, -kappa * dn]], dtype=complex)


def _oracle_transmission(k: float, V0: float, L: float) -> complex:
    """Transmission amplitude from a numeric transfer-matrix chain.

    Coefficients (forward, backward) in each region are propagated by
    matching the wavefunction and its derivative at both barrier edges:
    M maps the left-region pair onto the right-region pair, and with
    incoming (1, r) and outgoing (t, 0) one gets t = det(M) / M[1,1].
    """
    ik = 1j * k
    q = cmath.sqrt(V0 - k * k)
    w_out_l = _basis_matrix(ik, -L)
    w_out_r = _basis_matrix(ik, L)
    w_in_l = _basis_matrix(q, -L)
    w_in_r = _basis_matrix(q, L)
    m = np.linalg.inv(w_out_r) @ w_in_r @ np.linalg.inv(w_in_l) @ w_out_l
    # det(M) = 1 exactly (each Wronskian determinant is -2*kappa,
    # independent of x, and the chain cancels them pairwise), so t is
    # 1/M22; forming the determinant numerically would cancel
    # catastrophically for opaque barriers
    return complex(1.0 / m[1, 1])


def _oracle_reflection(k: float, V0: float, L: float) -> complex:
    ik = 1j * k
    q = cmath.sqrt(V0 - k * k)
    m = (
        np.linalg.inv(_basis_matrix(ik, L))
        @ _basis_matrix(q, L)
        @ np.linalg.inv(_basis_matrix(q, -L))
        @ _basis_matrix(ik, -L)
    )
    return complex(-m[1, 0] / m[1, 1])


def test_oracle_is_unitary():
    # the oracle itself must conserve probability before it judges anything
    rng = np.random.default_rng(7)
    for _ in range(50):
        v0 = rng.uniform(0.5, 10.0)
        length = rng.uniform(0.1, 2.0)
        k = rng.uniform(0.1, 1.5) * math.sqrt(v0)
        t = _oracle_transmission(k, v0, length)
        r = _oracle_reflection(k, v0, length)
        assert abs(abs(t) ** 2 + abs(r) ** 2 - 1.0) < 1e-12


def test_transmission_matches_transfer_matrix_oracle():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        v0 = rng.uniform(0.3, 10.0)
        length = rng.uniform(0.1, 2.5)
        k = rng.uniform(0.05, 1.5) * math.sqrt(v0)
        t_impl = transmission_amplitude(k, BarrierSpec(v0, length))
        t_orc = _oracle_transmission(k, v0, length)
        worst = max(worst, abs(abs(t_impl) ** 2 - abs(t_orc) ** 2))
        if abs(t_orc) > 1e-8:
            assert abs(t_impl - t_orc) / abs(t_orc) < 1e-8
    assert worst < 1e-10


def test_transmission_oracle_opaque_case():
    # V0=7, width 16: |T|^2 around 1e-30, still reproduced in relative terms
    t_impl = transmission_amplitude(1.5, BarrierSpec.from_width(7.0, 16.0))
    t_orc = _oracle_transmission(1.5, 7.0, 8.0)
    assert abs(abs(t_impl) ** 2 - abs(t_orc) ** 2) / abs(t_orc) ** 2 < 1e-10


def test_transmission_modulus_bounded():
    rng = np.random.default_rng(11)
    for v0, length in ((7.0, 1.0), (2.5, 0.4), (11.0, 3.0)):
        k = rng.uniform(1e-3, 2.0 * math.sqrt(v0), size=1000)
        t = transmission_amplitude(k, BarrierSpec(v0, length))
        assert np.all(np.abs(t) ** 2 <= 1.0 + 1e-12)


def test_transmission_continuous_at_barrier_top():
    barrier = BarrierSpec(7.0, 1.0)
    k_top = math.sqrt(barrier.V0)
    # q = 1e-6 on either side of the top
    k_lo = math.sqrt(barrier.V0 - 1e-12)
    k_hi = math.sqrt(barrier.V0 + 1e-12)
    limit = 2j * k_top * cmath.exp(-2j * k_top * barrier.L) / (
        2j * k_top + 2.0 * barrier.L * k_top**2
    )
    assert abs(transmission_amplitude(k_lo, barrier) - limit) < 1e-8
    assert abs(transmission_amplitude(k_hi, barrier) - limit) < 1e-8
    assert abs(transmission_amplitude(k_top, barrier) - limit) < 1e-8


def test_transmission_vanishes_at_zero_energy():
    barrier = BarrierSpec(7.0, 1.0)
    assert abs(transmission_amplitude(1e-8, barrier)) < 1e-6
    with pytest.raises(ValueError):
        transmission_amplitude(0.0, barrier)
    with pytest.raises(ValueError):
        transmission_amplitude(-1.0, barrier)


def test_barrier_spec_validation():
    with pytest.raises(ValueError):
        BarrierSpec(-1.0, 1.0)
    with pytest.raises(ValueError):
        BarrierSpec(7.0, 0.0)
    b = BarrierSpec.from_width(7.0, 2.0)
    assert b.L == 1.0
    assert b.width == 2.0


# --- spectral amplitude ----------------------------------------------------

def test_spectral_amplitude_modulus():
    packet = GaussianPacketSpec(k0=1.5, sigma=5.0)
    k = np.linspace(0.0, 3.0, 601)
    got = np.abs(spectral_amplitude(k, packet)) ** 2
    want = math.sqrt(2.0 / math.pi) * packet.sigma * np.exp(
        -2.0 * packet.sigma**2 * (k - packet.k0) ** 2
    )
    assert np.max(np.abs(got - want) / want) < 1e-12


def test_spectral_amplitude_peak_and_phase():
    packet = GaussianPacketSpec(k0=1.5, sigma=5.0)
    a0 = spectral_amplitude(packet.k0, packet)
    assert abs(abs(a0) - (2.0 / math.pi) ** 0.25 * math.sqrt(packet.sigma)) < 1e-14
    assert a0.imag == 0.0
    # away from the peak the phase is -(k - k0) * x0
    k = 1.52
    expected = -(k - packet.k0) * packet.x0
    assert abs(cmath.phase(spectral_amplitude(k, packet)) - expected) < 1e-12


def test_packet_unit_norm():
    packet = GaussianPacketSpec(k0=1.5, sigma=5.0)
    support = default_barrier_support(packet)

    def mod2(k):
        return abs(spectral_amplitude(k, packet)) ** 2

    norm = integrate(mod2, support, rel_tol=1e-12)
    assert abs(norm - 1.0) < 1e-9


def test_packet_validation_and_start_warning():
    with pytest.raises(ValueError):
        GaussianPacketSpec(k0=0.0, sigma=5.0)
    with pytest.raises(ValueError):
        GaussianPacketSpec(k0=1.5, sigma=-1.0)
    packet = GaussianPacketSpec(k0=1.5, sigma=5.0)
    assert packet.x0 == -40.0
    with pytest.warns(UserWarning):
        GaussianPacketSpec(k0=1.5, sigma=5.0, x0=-30.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        GaussianPacketSpec(k0=1.5, sigma=5.0, x0=-45.0)


# --- clock time ------------------------------------------------------------

def test_clock_time_matches_phase_derivative_oracle():
    # the clock reading equals minus the sensitivity of arg T to a small
    # uniform shift of the barrier height, Richardson-refined here
    def oracle(k, v0, length, eta=1e-6):
        def phase(v):
            return cmath.phase(transmission_amplitude(k, BarrierSpec(v, length)))

        d1 = (phase(v0 + eta) - phase(v0 - eta)) / (2.0 * eta)
        d2 = (phase(v0 + 0.5 * eta) - phase(v0 - 0.5 * eta)) / eta
        return -(4.0 * d2 - d1) / 3.0

    barrier = BarrierSpec(7.0, 1.0)
    for k in (0.8, 1.5, 2.2, 3.0, 4.5):
        got = clock_time(k, barrier)
        want = oracle(k, barrier.V0, barrier.L)
        assert abs(got - want) / max(abs(want), 1e-12) < 1e-6


def test_clock_time_opaque_saturation():
    # fixed k below the barrier top: the reading converges to k/(q V0)
    k = 1.5
    v0 = 7.0
    q = math.sqrt(v0 - k * k)
    saturated = k / (q * v0)

    def gap(width):
        return abs(clock_time(k, BarrierSpec.from_width(v0, width)) - saturated)

    # strictly decreasing while the gap is still resolvable ...
    assert gap(2.0) > gap(4.0) > gap(6.0)
    # ... and pinned at rounding level from width 10 on
    assert gap(10.0) >= gap(20.0) >= gap(40.0)
    assert gap(10.0) < 1e-12
    t50 = clock_time(k, BarrierSpec.from_width(v0, 50.0))
    assert abs(t50 - saturated) / saturated < 1e-6


def test_clock_time_continuous_at_barrier_top():
    barrier = BarrierSpec(7.0, 1.0)
    below = clock_time(math.sqrt(barrier.V0 * (1.0 - 1e-8)), barrier)
    above = clock_time(math.sqrt(barrier.V0 * (1.0 + 1e-8)), barrier)
    assert abs(below - above) / abs(below) < 1e-4


def test_clock_time_width_zero_limit():
    assert abs(clock_time(1.5, BarrierSpec(7.0, 1e-12))) < 1e-9


def test_clock_time_array_matches_scalar():
    barrier = BarrierSpec(7.0, 1.0)
    k = np.array([0.9, 1.5, 2.64575, 3.2])
    vec = clock_time(k, barrier)
    for i, kk in enumerate(k):
        assert vec[i] == clock_time(float(kk), barrier)


# --- transmitted density ---------------------------------------------------

def test_transmitted_density_normalized_nonnegative():
    packet = GaussianPacketSpec(k0=1.5, sigma=5.0)
    rho = transmitted_density(packet, BarrierSpec.from_width(7.0, 2.0))
    assert np.all(rho.density >= 0.0)
    assert abs(np.trapezoid(rho.density, rho.grid) - 1.0) < 1e-12
    assert rho.norm_residual < 1e-8


def test_transmitted_density_mode_above_k0():
    # the barrier filters low k harder, so the transmitted packet speeds up
    packet = GaussianPacketSpec(k0=1.5, sigma=5.0)
    rho = transmitted_density(packet, BarrierSpec.from_width(7.0, 2.0))
    mode = rho.grid[np.argmax(rho.density)]
    assert mode > packet.k0
    # unimodal: a single rise-fall sign pattern in the first difference
    sign = np.sign(np.diff(rho.density))
    changes = np.count_nonzero(np.diff(sign[sign != 0.0]) != 0.0)
    assert changes == 1


def test_transmitted_density_free_limit_mode_at_k0():
    packet = GaussianPacketSpec(k0=1.5, sigma=5.0)
    rho = transmitted_density(packet, BarrierSpec.from_width(1e-12, 2.0))
    step = (rho.support.hi - rho.support.lo) / (rho.grid.size - 1)
    mode = rho.grid[np.argmax(rho.density)]
    assert abs(mode - packet.k0) <= step


def test_transmitted_density_above_top_weight_grows_with_width():
    packet = GaussianPacketSpec(k0=1.5, sigma=5.0)
    support = Interval(1e-6, 4.0)
    k_top = math.sqrt(7.0)

    def weight_above(width):
        rho = transmitted_density(
            packet, BarrierSpec.from_width(7.0, width), support=support, n_grid=8192
        )
        mask = rho.grid >= k_top
        return np.trapezoid(rho.density[mask], rho.grid[mask])

    assert weight_above(16.0) > weight_above(2.0)


def test_transmitted_density_vanishing_norm_error():
    packet = GaussianPacketSpec(k0=1.5, sigma=5.0)
    with pytest.raises(ValueError):
        transmitted_density(
            packet, BarrierSpec.from_width(7.0, 2.0), support=Interval(30.0, 40.0)
        )
