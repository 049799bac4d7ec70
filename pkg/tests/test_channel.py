import math

import numpy as np
import pytest

from qtstar.channel import (
    FAPP_ZERO,
    ChannelParams,
    apply_boost_channel,
    apply_galilean_decoherence,
    apply_translation_channel,
    boost_params,
    damping_profile,
    monte_carlo_channel,
    translation_params,
)
from qtstar.coherent import CoherentLabel, cat_state, dyad_gaussian, dyad_kernel, random_superposition
from qtstar.core import PLANCK_H, DomainError, GalileanConfig, derive_quantities, max_decoherence_time
from qtstar.kernel import Grid1D, Rep, kernel_from_wavefunction, purity, relative_distance, sup_abs, trace

from conftest import rel


def random_kernel(rng, grid):
    return kernel_from_wavefunction(random_superposition(rng, grid, 1.0))


def test_params_validation():
    with pytest.raises(DomainError):
        ChannelParams(0.0, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        ChannelParams(1.0, -1.0, 1.0, 1.0)
    assert ChannelParams(1.0, 0.0, 1.0, 1.0).width == math.inf


def test_multipliers_match_closed_form(desk, grid, rng):
    k = random_kernel(rng, grid)
    ps = translation_params(desk, 1.0, 0.8)
    pb = boost_params(desk, 1.0, 0.8)
    kv = k.in_rep(Rep.VELOCITY)
    v = kv.grid.points
    want_s = kv.data * np.exp(-0.8 * (v[:, None] - v[None, :]) ** 2 / 2.0)
    got_s = apply_translation_channel(kv, ps).data
    assert np.linalg.norm(got_s - want_s) <= 1e-12 * np.linalg.norm(want_s)
    x = grid.points
    want_b = k.data * np.exp(-0.25 * 0.8 * (x[:, None] - x[None, :]) ** 2 / 2.0)
    got_b = apply_boost_channel(k, pb).data
    assert np.linalg.norm(got_b - want_b) <= 1e-12 * np.linalg.norm(want_b)


@pytest.mark.parametrize("which", ["translation", "boost", "both"])
def test_grid_channels_match_gaussian_oracle(desk, grid, which):
    a = CoherentLabel(-2.0, 0.5, 1.0, 1.0)
    b = CoherentLabel(1.5, -0.25, 1.0, 1.0)
    W = dyad_kernel(a, b, grid)
    dt = 1.0
    if which == "translation":
        got = apply_translation_channel(W, translation_params(desk, 1.0, dt))
        oracle = dyad_gaussian(a, b, GalileanConfig(1.0, 1.0, 1e-300), dt)
    elif which == "boost":
        got = apply_boost_channel(W, boost_params(desk, 1.0, dt))
        oracle = dyad_gaussian(a, b, GalileanConfig(1.0, 1e-300, 0.25), dt)
    else:
        got = apply_galilean_decoherence(W, desk, dt)
        oracle = dyad_gaussian(a, b, desk, dt)
    want = oracle.on_grid(grid.points)
    assert np.linalg.norm(got.data - want) <= 1e-9 * np.linalg.norm(want)


def test_diagonal_and_marginal_unchanged(desk, grid, rng):
    k = random_kernel(rng, grid)
    out = apply_boost_channel(k, boost_params(desk, 1.0, 2.0))
    assert np.array_equal(np.diag(out.data), np.diag(k.data))
    kv = k.in_rep(Rep.VELOCITY)
    outv = apply_translation_channel(kv, translation_params(desk, 1.0, 2.0))
    assert np.array_equal(np.diag(outv.data), np.diag(kv.data))


def test_zero_duration_is_identity(desk, grid, rng):
    k = random_kernel(rng, grid)
    assert apply_galilean_decoherence(k, desk, 0.0) is k


def test_semigroup(desk, grid, rng):
    k = random_kernel(rng, grid)
    twice = apply_galilean_decoherence(apply_galilean_decoherence(k, desk, 0.4), desk, 0.4)
    once = apply_galilean_decoherence(k, desk, 0.8)
    assert relative_distance(twice, once) <= 1e-9


def test_order_swap(desk, grid, rng):
    for _ in range(20):
        k = random_kernel(rng, grid)
        sb = apply_galilean_decoherence(k, desk, 1.0, "SB")
        bs = apply_galilean_decoherence(k, desk, 1.0, "BS")
        assert relative_distance(sb, bs) <= 1e-8
    with pytest.raises(ValueError):
        apply_galilean_decoherence(k, desk, 1.0, "XY")


def test_trace_purity_sup(desk, grid, rng):
    k = random_kernel(rng, grid)
    out = apply_galilean_decoherence(k, desk, 1.0)
    assert abs(trace(out) - trace(k)) <= 1e-10
    assert purity(out) <= purity(k) + 1e-12
    assert sup_abs(out) <= sup_abs(k) * (1 + 1e-12)


def test_mass_mismatch_rejected(desk, grid, rng):
    k = random_kernel(rng, grid)
    with pytest.raises(DomainError):
        apply_boost_channel(k, boost_params(desk, 2.0, 1.0))


def test_cat_suppression(desk, grid):
    # boost width delta_eta = 1/sqrt(beta dt); pick dt so that |A - B| = 20 delta_eta
    k = kernel_from_wavefunction(cat_state(grid, 1.0, -5.0, 5.0))
    ia, ib = grid.index_of(-5.0), grid.index_of(5.0)
    dt_narrow = (20.0 / 10.0) ** 2 / 0.25
    p = boost_params(desk, 1.0, dt_narrow)
    assert p.width == pytest.approx(0.5)
    out = apply_boost_channel(k, p)
    assert abs(out.data[ia, ib]) <= FAPP_ZERO * sup_abs(k)
    assert abs(out.data[ia, ib]) / abs(k.data[ia, ib]) == pytest.approx(math.exp(-200.0), rel=1e-9)
    dt_wide = (1.0 / 100.0) ** 2 / 0.25
    p = boost_params(desk, 1.0, dt_wide)
    assert p.width == pytest.approx(100.0)
    out = apply_boost_channel(k, p)
    assert abs(out.data[ia, ib]) >= 0.99 * abs(k.data[ia, ib])


def test_damping_profile_identities():
    p = ChannelParams(0.25, 3.0, 2.0, 1.0)
    assert damping_profile(p, 0.0) == 1.0
    sep = np.array([0.1, 1.0, 4.0])
    assert np.allclose(damping_profile(p, sep), np.exp(-sep ** 2 / (2 * p.width ** 2)), rtol=1e-14)
    with pytest.raises(DomainError):
        damping_profile(p, -1.0)


def test_damping_profile_sg_pointer_and_atom():
    cfg = GalileanConfig(hbar=PLANCK_H)
    m1, m2 = 1.79e-25, 1.79e-17
    tau = max_decoherence_time(cfg, m2)
    p = boost_params(cfg, m2, tau)
    assert p.width == pytest.approx(7.2353e-8, rel=1e-4)
    assert p.width / 6.28e-6 == pytest.approx(0.0115176, rel=2e-3)
    assert damping_profile(p, 6.28e-6) < 1e-300 or damping_profile(p, 6.28e-6) == 0.0
    pa = boost_params(cfg, m1, 100 * tau)
    d1 = derive_quantities(cfg, m2).sigma_x * math.sqrt(m2 / m1)
    assert pa.width == pytest.approx(0.72353, rel=1e-4)
    assert pa.width / d1 == pytest.approx(2000.0, rel=1e-3)
    assert damping_profile(pa, d1) == pytest.approx(math.exp(-1 / (2 * 2000.0 ** 2)), rel=1e-6)


@pytest.mark.parametrize("which", ["translation", "boost"])
def test_monte_carlo_oracle(desk, which):
    grid = Grid1D.centered(256, 16.0)
    k = kernel_from_wavefunction(cat_state(grid, 1.0, -3.0, 3.0, va=0.5, vb=-0.5))
    p = (translation_params if which == "translation" else boost_params)(desk, 1.0, 0.5)
    mc = monte_carlo_channel(k, p, which, samples=100_000, seed=7)
    natural = k.in_rep(mc.kernel.rep)
    exact = (apply_translation_channel if which == "translation" else apply_boost_channel)(natural, p)
    diff = np.abs(mc.kernel.data - exact.data)
    assert np.linalg.norm(diff) <= 1e-2 * np.linalg.norm(exact.data)
    se = mc.standard_error
    # zero standard error only on the diagonal, where every sample acts trivially
    assert np.all(diff[se == 0] == 0)
    assert np.all(diff[se > 0] <= 3.0 * se[se > 0])


def test_monte_carlo_is_deterministic(desk):
    grid = Grid1D.centered(64, 8.0)
    k = kernel_from_wavefunction(cat_state(grid, 1.0, -2.0, 2.0))
    p = boost_params(desk, 1.0, 0.5)
    a = monte_carlo_channel(k, p, "boost", samples=5000, seed=3)
    b = monte_carlo_channel(k, p, "boost", samples=5000, seed=3, chunk=777)
    assert np.allclose(a.kernel.data, b.kernel.data, rtol=0, atol=1e-14)
    with pytest.raises(ValueError):
        monte_carlo_channel(k, p, "rotation")
