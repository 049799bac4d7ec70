"""Closed-form Gaussian kernels in the position representation.

A kernel of the form

    K(x, y) = exp(-1/2 z^T P z + h^T z + c),   z = (x, y),

with complex symmetric ``P`` (positive-definite real part), complex ``h`` and ``c``
is closed under both averaged fluctuation channels: random boosts multiply by a
Gaussian in x - y, random translations convolve along the diagonal. Dyads of coherent
states are of this form, so their channel images are obtained exactly here, by direct
Gaussian integration in position space. This is independent of the FFT/multiplier
route in :mod:`qtstar.channel` and serves as its oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_E = np.array([1.0, 1.0])
_D = np.array([[1.0, -1.0], [-1.0, 1.0]])


def _sqrt_det(P: np.ndarray) -> complex:
    lam = np.linalg.eigvals(P)
    return complex(np.prod(np.sqrt(lam.astype(complex))))


@dataclass(frozen=True)
class GaussianKernel:
    P: np.ndarray
    h: np.ndarray
    c: complex

    @classmethod
    def coherent_dyad(cls, x_mu, v_mu, x_nu, v_nu, sigma_x, mass, hbar) -> "GaussianKernel":
        """<x|x_mu, v_mu><x_nu, v_nu|y> for squeezed coherent states of width sigma_x."""
        a = 1.0 / (2.0 * sigma_x ** 2)
        k_mu = mass * v_mu / hbar
        k_nu = mass * v_nu / hbar
        P = np.diag([a, a]).astype(complex)
        h = np.array([a * x_mu + 1j * k_mu, a * x_nu - 1j * k_nu])
        c = -(x_mu ** 2 + x_nu ** 2) * a / 2.0 - 0.5 * math.log(2.0 * math.pi * sigma_x ** 2)
        return cls(P, h, complex(c))

    def boosted(self, beta_dt: float, mass: float, hbar: float) -> "GaussianKernel":
        """Average over boosts u ~ N(0, beta_dt): multiply by exp(-m^2 beta_dt (x-y)^2 / 2 hbar^2)."""
        if beta_dt == 0:
            return self
        g = mass ** 2 * beta_dt / hbar ** 2
        return GaussianKernel(self.P + g * _D, self.h, self.c)

    def translated(self, alpha_dt: float) -> "GaussianKernel":
        """Average over translations a ~ N(0, alpha_dt): K(x, y) -> E[K(x - a, y - a)]."""
        if alpha_dt == 0:
            return self
        Pe = self.P @ _E
        p = _E @ Pe + 1.0 / alpha_dt
        he = self.h @ _E
        P = self.P - np.outer(Pe, Pe) / p
        h = self.h - he * Pe / p
        c = self.c + he ** 2 / (2.0 * p) - 0.5 * np.log(p * alpha_dt)
        return GaussianKernel(P, h, complex(c))

    def channels(self, alpha_dt: float, beta_dt: float, mass: float, hbar: float) -> "GaussianKernel":
        return self.translated(alpha_dt).boosted(beta_dt, mass, hbar)

    def __call__(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        P, h = self.P, self.h
        q = P[0, 0] * x * x + 2.0 * P[0, 1] * x * y + P[1, 1] * y * y
        return np.exp(-0.5 * q + h[0] * x + h[1] * y + self.c)

    def on_grid(self, points: np.ndarray) -> np.ndarray:
        return self(points[:, None], points[None, :])

    def sup_abs(self) -> float:
        """max over real (x, y) of |K(x, y)|."""
        Pr = self.P.real
        hr = self.h.real
        z = np.linalg.solve(Pr, hr)
        return float(math.exp(0.5 * hr @ z + self.c.real))

    def trace(self) -> complex:
        p = _E @ self.P @ _E
        q = self.h @ _E
        return complex(np.sqrt(2.0 * np.pi / p) * np.exp(q * q / (2.0 * p) + self.c))

    def integral(self) -> complex:
        """Integral of K over the whole plane."""
        z = np.linalg.solve(self.P, self.h)
        return complex(2.0 * np.pi / _sqrt_det(self.P) * np.exp(0.5 * self.h @ z + self.c))

    def sandwich(self, x_l, v_l, x_r, v_r, sigma_x, mass, hbar) -> complex:
        """<x_l, v_l| K |x_r, v_r> for coherent states of width sigma_x."""
        bra = GaussianKernel.coherent_dyad(x_r, v_r, x_l, v_l, sigma_x, mass, hbar)
        # bra(x, y) = <y|x_l,v_l>^* <x|x_r,v_r>; swapping its arguments gives the weight
        # conj(<x|x_l,v_l>) <y|x_r,v_r> that multiplies K(x, y)
        swap = np.array([[0, 1], [1, 0]])
        P = self.P + swap @ bra.P @ swap
        h = self.h + swap @ bra.h
        return GaussianKernel(P, h, self.c + bra.c).integral()
