import math

import numpy as np
import pytest

from qtstar.coherent import CoherentLabel, coherent_values, dyad_kernel
from qtstar.gaussian import GaussianKernel
from qtstar.kernel import Grid1D


def dyad(x_mu=1.0, v_mu=0.3, x_nu=-2.0, v_nu=-0.4, sigma=1.0, mass=1.0, hbar=1.0):
    return GaussianKernel.coherent_dyad(x_mu, v_mu, x_nu, v_nu, sigma, mass, hbar)


def test_coherent_dyad_matches_outer_product():
    g = Grid1D.centered(128, 12.0)
    a = CoherentLabel(1.0, 0.3, 1.0, 1.0)
    b = CoherentLabel(-2.0, -0.4, 1.0, 1.0)
    assert np.max(np.abs(dyad().on_grid(g.points) - dyad_kernel(a, b, g).data)) < 1e-14


def test_translation_average_matches_gauss_hermite():
    K = dyad()
    A = 0.7
    nodes, weights = np.polynomial.hermite_e.hermegauss(80)
    a = nodes * math.sqrt(A)
    x = np.array([0.3, -1.2, 2.5])
    y = np.array([-0.4, 0.9, 1.7])
    ref = np.array([np.sum(weights * K(xi - a, yi - a)) / math.sqrt(2 * math.pi) for xi, yi in zip(x, y)])
    assert np.max(np.abs(K.translated(A)(x, y) - ref)) < 1e-13


def test_boost_is_multiplier():
    K = dyad()
    x, y = np.meshgrid(np.linspace(-3, 3, 7), np.linspace(-2, 4, 5))
    want = K(x, y) * np.exp(-(2.0 ** 2) * 0.3 * (x - y) ** 2 / 2.0)
    assert np.allclose(K.boosted(0.3, 2.0, 1.0)(x, y), want, rtol=1e-13, atol=0)


def test_trace_and_integral_by_quadrature():
    g = Grid1D.centered(512, 20.0)
    K = dyad().channels(0.5, 0.2, 1.0, 1.0)
    vals = K.on_grid(g.points)
    assert K.trace() == pytest.approx(complex(g.step * np.trace(vals)), abs=1e-13)
    assert K.integral() == pytest.approx(complex(g.step ** 2 * vals.sum()), abs=1e-12)


def test_trace_preserved_by_channels():
    K = dyad(1.0, 0.3, 1.0, 0.3)
    assert K.trace() == pytest.approx(1.0, abs=1e-14)
    assert K.channels(2.0, 3.0, 1.0, 1.0).trace() == pytest.approx(1.0, abs=1e-14)


def test_sup_abs_against_dense_sampling():
    K = dyad().channels(0.5, 0.2, 1.0, 1.0)
    x = np.linspace(-8, 8, 1601)
    assert np.abs(K.on_grid(x)).max() == pytest.approx(K.sup_abs(), rel=1e-5)
    assert np.abs(K.on_grid(x)).max() <= K.sup_abs() * (1 + 1e-14)


def test_sandwich_by_grid_quadrature():
    g = Grid1D.centered(512, 20.0)
    K = dyad().channels(0.5, 0.2, 1.0, 1.0)
    l = CoherentLabel(0.5, -0.2, 1.0, 1.0)
    r = CoherentLabel(-1.0, 0.1, 1.0, 1.0)
    ref = g.step ** 2 * coherent_values(l, g.points).conj() @ K.on_grid(g.points) @ coherent_values(r, g.points)
    got = K.sandwich(l.x0, l.v0, r.x0, r.v0, 1.0, 1.0, 1.0)
    assert got == pytest.approx(complex(ref), abs=1e-13)
