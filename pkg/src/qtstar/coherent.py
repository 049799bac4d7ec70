"""Coherent states, Husimi-type diagonal analysis and the pointer-state mixture verdict.

Coherent states follow the convention

    <x|x0, v0> = (2 pi sigma_x^2)^(-1/4) exp(-(x - x0)^2 / 4 sigma_x^2) exp(i m x v0 / hbar),

and the phase-space measure making them a resolution of the identity is
m / (2 pi hbar) dx0 dv0. Everything is one-dimensional; three-dimensional values are
products over axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .channel import apply_galilean_decoherence
from .core import MUCH_GREATER, DomainError, GalileanConfig, decoherence_parameter
from .gaussian import GaussianKernel
from .kernel import DensityKernel, Grid1D, Rep, WaveFunction, kernel_from_wavefunction, sup_abs, trace

MIN_POINTS_PER_SIGMA = 4
# coherent states are cut off where the envelope drops below ~1e-16
_WINDOW_SIGMAS = 12.0


@dataclass(frozen=True)
class CoherentLabel:
    x0: float
    v0: float
    sigma_x: float
    mass: float
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.sigma_x > 0 and self.mass > 0 and self.hbar > 0):
            raise DomainError("sigma_x, mass and hbar must be positive")

    @property
    def sigma_u(self) -> float:
        return self.hbar / (2.0 * self.mass * self.sigma_x)

    def moved(self, dx: float = 0.0, dv: float = 0.0) -> "CoherentLabel":
        return CoherentLabel(self.x0 + dx, self.v0 + dv, self.sigma_x, self.mass, self.hbar)


@dataclass(frozen=True)
class BranchSpec:
    weight: float
    label: CoherentLabel

    def __post_init__(self):
        if not self.weight > 0:
            raise DomainError("branch weight must be positive")


def coherent_values(l: CoherentLabel, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    s = l.sigma_x
    return (2.0 * math.pi * s * s) ** -0.25 * np.exp(-((x - l.x0) ** 2) / (4.0 * s * s)
                                                    + 1j * l.mass * l.v0 * x / l.hbar)


def _check_resolution(grid: Grid1D, sigma_x: float) -> None:
    if sigma_x / grid.step < MIN_POINTS_PER_SIGMA:
        raise DomainError(f"grid step {grid.step:.3g} does not resolve sigma_x = {sigma_x:.3g}")


def coherent_wavefunction(l: CoherentLabel, grid: Grid1D) -> WaveFunction:
    _check_resolution(grid, l.sigma_x)
    return WaveFunction(grid, l.mass, coherent_values(l, grid.points), Rep.POSITION, l.hbar)


def coherent_overlap(a: CoherentLabel, b: CoherentLabel) -> complex:
    """Closed-form <a|b> for equal widths and masses."""
    s, m, hb = a.sigma_x, a.mass, a.hbar
    dx, dv = b.x0 - a.x0, b.v0 - a.v0
    k = m * dv / hb
    xm = 0.5 * (a.x0 + b.x0)
    return complex(np.exp(-dx * dx / (8.0 * s * s) - s * s * k * k / 2.0 + 1j * k * xm))


def superposition(labels, coefficients, grid: Grid1D) -> WaveFunction:
    """Normalized sum of coherent states."""
    labels = list(labels)
    if not labels:
        raise DomainError("need at least one label")
    data = sum(c * coherent_values(l, grid.points) for c, l in zip(coefficients, labels))
    return WaveFunction(grid, labels[0].mass, np.asarray(data, dtype=complex), Rep.POSITION, labels[0].hbar).normalized()


def cat_state(grid: Grid1D, sigma_x: float, xa: float, xb: float, mass: float = 1.0, hbar: float = 1.0,
              va: float = 0.0, vb: float = 0.0, phase: float = 0.0) -> WaveFunction:
    a = CoherentLabel(xa, va, sigma_x, mass, hbar)
    b = CoherentLabel(xb, vb, sigma_x, mass, hbar)
    return superposition([a, b], [1.0, np.exp(1j * phase)], grid)


def random_superposition(rng: np.random.Generator, grid: Grid1D, sigma_x: float, mass: float = 1.0,
                         hbar: float = 1.0, terms: int = 3, spread: float = 4.0) -> WaveFunction:
    """Random pure state: a few coherent states with labels within +/- spread widths of the origin."""
    su = hbar / (2.0 * mass * sigma_x)
    labels = [CoherentLabel(rng.uniform(-spread, spread) * sigma_x, rng.uniform(-spread, spread) * su,
                            sigma_x, mass, hbar) for _ in range(terms)]
    coeff = rng.normal(size=terms) + 1j * rng.normal(size=terms)
    return superposition(labels, coeff, grid)


def _position_kernel(W: DensityKernel) -> DensityKernel:
    return W.in_rep(Rep.POSITION)


def overlap_kernel(W: DensityKernel, bra: CoherentLabel, ket: CoherentLabel) -> complex:
    """<bra| W |ket> by double quadrature in the position representation."""
    Wx = _position_kernel(W)
    if abs(bra.mass - Wx.mass) > 1e-12 * Wx.mass or abs(ket.mass - Wx.mass) > 1e-12 * Wx.mass:
        raise DomainError("labels and kernel disagree on the mass")
    x = Wx.grid.points
    left = coherent_values(bra, x)
    right = coherent_values(ket, x)
    return complex(Wx.step ** 2 * (left.conj() @ Wx.data @ right))


def overlap_map(W: DensityKernel, ket: CoherentLabel, x_offsets, v_offsets) -> np.ndarray:
    """|<ket moved by (dx, dv)| W |ket>| over a rectangular set of offsets, shape (len(dx), len(dv))."""
    Wx = _position_kernel(W)
    x = Wx.grid.points
    right = Wx.data @ coherent_values(ket, x)
    out = np.empty((len(x_offsets), len(v_offsets)))
    for i, dx in enumerate(x_offsets):
        bras = np.array([coherent_values(ket.moved(dx, dv), x) for dv in v_offsets])
        out[i] = np.abs(Wx.step ** 2 * (bras.conj() @ right))
    return out


def a1_upper_bound(m_sf: float, sigma_x: float, eta0: float, w_sup: float) -> float:
    """Upper bound on |<Omega'|W''|Omega>| per axis.

    ``w_sup`` bounds |W'(x, y)| = |T_S W| (or |W| itself, which dominates it), and
    ``eta0 = (x0 - x0') / sqrt(2)``. The eta integral of the damped coherent weights
    gives 2 sigma sqrt(pi) / sqrt(1 + 4M^2), the xi integral 2 sigma sqrt(pi), and the
    coherent normalization (2 pi sigma^2)^(-1/2).
    """
    if not m_sf > 0:
        raise DomainError("m_sf must be positive")
    g = 1.0 + 4.0 * m_sf * m_sf
    return (2.0 * math.sqrt(2.0 * math.pi) * sigma_x / math.sqrt(g)
            * math.exp(-m_sf * m_sf * eta0 * eta0 / (g * sigma_x * sigma_x)) * w_sup)


def a1_exponent_coefficient(m_sf: float) -> float:
    """Coefficient M^2 / (1 + 4 M^2) of eta0^2 / sigma_x^2 in the bound."""
    return m_sf * m_sf / (1.0 + 4.0 * m_sf * m_sf)


# -- Husimi lattice ------------------------------------------------------------

@dataclass(frozen=True)
class HusimiLattice:
    x0: np.ndarray
    v0: np.ndarray
    q: np.ndarray  # <Omega|W|Omega>, shape (len(x0), len(v0))
    sigma_x: float
    mass: float
    hbar: float

    @property
    def cell(self) -> float:
        """Phase-space measure of one lattice cell."""
        dx = self.x0[1] - self.x0[0] if self.x0.size > 1 else 1.0
        dv = self.v0[1] - self.v0[0] if self.v0.size > 1 else 1.0
        return self.mass / (2.0 * math.pi * self.hbar) * dx * dv

    def total(self) -> float:
        return float(np.sum(self.q) * self.cell)


def _window(grid: Grid1D, centre: float, sigma_x: float) -> slice:
    half = _WINDOW_SIGMAS * 2.0 * sigma_x
    lo = max(int(math.floor((centre - half - grid.min) / grid.step)), 0)
    hi = min(int(math.ceil((centre + half - grid.min) / grid.step)) + 1, grid.n)
    return slice(lo, max(lo, hi))


def _support(density: np.ndarray, points: np.ndarray, rel: float = 1e-12) -> tuple[float, float]:
    idx = np.nonzero(density >= rel * density.max())[0]
    return float(points[idx[0]]), float(points[idx[-1]])


def lattice_for(W: DensityKernel, sigma_x: float, margin: float = 8.0, spacing: float = 0.5):
    """(x0, v0) lattice with spacing sigma/2 covering the state's support plus 8 sigma each way."""
    Wx = _position_kernel(W)
    Wv = Wx.in_rep(Rep.VELOCITY)
    su = Wx.hbar / (2.0 * Wx.mass * sigma_x)
    xlo, xhi = _support(np.real(np.diag(Wx.data)), Wx.grid.points)
    vlo, vhi = _support(np.real(np.diag(Wv.data)), Wv.grid.points)
    hx, hv = spacing * sigma_x, spacing * su
    x0 = np.arange(math.floor((xlo - margin * sigma_x) / hx), math.ceil((xhi + margin * sigma_x) / hx) + 1) * hx
    v0 = np.arange(math.floor((vlo - margin * su) / hv), math.ceil((vhi + margin * su) / hv) + 1) * hv
    return x0, v0


def husimi_lattice(W: DensityKernel, sigma_x: float, x0=None, v0=None) -> HusimiLattice:
    """<Omega|W|Omega> on a lattice, using only the grid window where each coherent state lives."""
    Wx = _position_kernel(W)
    _check_resolution(Wx.grid, sigma_x)
    if x0 is None or v0 is None:
        lx, lv = lattice_for(Wx, sigma_x)
        x0 = lx if x0 is None else np.asarray(x0, dtype=float)
        v0 = lv if v0 is None else np.asarray(v0, dtype=float)
    m, hb = Wx.mass, Wx.hbar
    x = Wx.grid.points
    norm2 = (2.0 * math.pi * sigma_x ** 2) ** -0.5
    q = np.zeros((x0.size, v0.size))
    for i, c in enumerate(x0):
        sl = _window(Wx.grid, c, sigma_x)
        xs = x[sl]
        if xs.size == 0:
            continue
        g = np.exp(-((xs - c) ** 2) / (4.0 * sigma_x ** 2))
        E = np.exp(1j * (m / hb) * np.outer(v0, xs)) * g
        block = Wx.data[sl, sl]
        q[i] = np.real(np.einsum("ij,jk,ik->i", E.conj(), block, E, optimize=True))
    q *= Wx.step ** 2 * norm2
    return HusimiLattice(np.asarray(x0), np.asarray(v0), q, sigma_x, m, hb)


class LatticeTooCoarse(DomainError):
    pass


MIXTURE_TRACE_TOL = 1e-3


@dataclass(frozen=True)
class CoherentMixture:
    kernel: DensityKernel
    trace_deviation: float
    husimi: HusimiLattice


def mixture_of_coherent_states(W: DensityKernel, sigma_x: float) -> CoherentMixture:
    """W~ = integral of |Omega><Omega|W|Omega><Omega| dOmega by lattice quadrature (trace renormalized)."""
    Wx = _position_kernel(W)
    hus = husimi_lattice(Wx, sigma_x)
    x = Wx.grid.points
    m, hb = Wx.mass, Wx.hbar
    norm2 = (2.0 * math.pi * sigma_x ** 2) ** -0.5
    out = np.zeros_like(Wx.data)
    weights = hus.q * hus.cell
    for i, c in enumerate(hus.x0):
        sl = _window(Wx.grid, c, sigma_x)
        xs = x[sl]
        if xs.size == 0:
            continue
        g = np.exp(-((xs - c) ** 2) / (4.0 * sigma_x ** 2))
        E = np.exp(1j * (m / hb) * np.outer(hus.v0, xs)) * g
        out[sl, sl] += norm2 * (E.T * weights[i]) @ E.conj()
    mixed = Wx.with_data(out)
    tr = trace(mixed)
    deviation = abs(tr - trace(Wx))
    if deviation > MIXTURE_TRACE_TOL:
        raise LatticeTooCoarse(f"coherent-state lattice misses trace {deviation:.2e}")
    mixed = mixed.with_data(out / tr * trace(Wx))
    return CoherentMixture(mixed.in_rep(W.rep), deviation, hus)


# -- pointer dyads -------------------------------------------------------------

def dyad_kernel(l_mu: CoherentLabel, l_nu: CoherentLabel, grid: Grid1D) -> DensityKernel:
    """|Omega_mu><Omega_nu| as a (generally non-Hermitian) position kernel."""
    if l_mu.sigma_x != l_nu.sigma_x or l_mu.mass != l_nu.mass:
        raise DomainError("dyad labels must share sigma_x and mass")
    _check_resolution(grid, l_mu.sigma_x)
    a = coherent_values(l_mu, grid.points)
    b = coherent_values(l_nu, grid.points)
    return DensityKernel(Rep.POSITION, grid, l_mu.mass, np.outer(a, b.conj()), l_mu.hbar)


def velocity_suppression(l_mu: CoherentLabel, l_nu: CoherentLabel, cfg: GalileanConfig, delta_t: float) -> float:
    s2 = l_mu.sigma_x ** 2
    A = cfg.alpha * delta_t
    kappa2 = (l_mu.mass * (l_mu.v0 - l_nu.v0)) ** 2 / (2.0 * l_mu.hbar ** 2)
    return math.exp(-s2 * A * kappa2 / (s2 + A))


def position_suppression(l_mu: CoherentLabel, l_nu: CoherentLabel, cfg: GalileanConfig, delta_t: float) -> float:
    a = 1.0 / (4.0 * l_mu.sigma_x ** 2)
    b = (l_mu.mass / l_mu.hbar) ** 2 * cfg.beta * delta_t
    eta0 = (l_mu.x0 - l_nu.x0) / math.sqrt(2.0)
    if b == 0:
        return 1.0
    return math.exp(-a * b / (a + b) * eta0 * eta0)


def dyad_gaussian(l_mu: CoherentLabel, l_nu: CoherentLabel, cfg: GalileanConfig, delta_t: float) -> GaussianKernel:
    g = GaussianKernel.coherent_dyad(l_mu.x0, l_mu.v0, l_nu.x0, l_nu.v0, l_mu.sigma_x, l_mu.mass, l_mu.hbar)
    return g.channels(cfg.alpha * delta_t, cfg.beta * delta_t, l_mu.mass, l_mu.hbar)


@dataclass(frozen=True)
class DyadImage:
    kernel: DensityKernel
    velocity_factor: float
    position_factor: float
    grid_ratio: float  # sup|T(mu nu)| / sqrt(sup|T(mu mu)| sup|T(nu nu)|) on the grid
    analytic_ratio: float  # the same ratio of continuum suprema
    sampled_ratio: float  # closed-form kernels sampled on the grid


def pointer_dyad_after_channels(l_mu: CoherentLabel, l_nu: CoherentLabel, cfg: GalileanConfig,
                                grid: Grid1D) -> DyadImage:
    """T_B T_S (|Omega_mu><Omega_nu|) on the grid, with its suppression relative to the diagonal dyads."""
    dt = cfg.resolved_delta_t(l_mu.mass)
    cfg_dt = cfg.with_delta_t(dt)
    img = apply_galilean_decoherence(dyad_kernel(l_mu, l_nu, grid), cfg_dt)
    d_mu = apply_galilean_decoherence(dyad_kernel(l_mu, l_mu, grid), cfg_dt)
    d_nu = apply_galilean_decoherence(dyad_kernel(l_nu, l_nu, grid), cfg_dt)
    grid_ratio = sup_abs(img) / math.sqrt(sup_abs(d_mu) * sup_abs(d_nu))
    gs = [dyad_gaussian(p, q, cfg, dt) for p, q in ((l_mu, l_nu), (l_mu, l_mu), (l_nu, l_nu))]
    an, an_mu, an_nu = (g.sup_abs() for g in gs)
    sm, sm_mu, sm_nu = (float(np.max(np.abs(g.on_grid(grid.points)))) for g in gs)
    return DyadImage(img, velocity_suppression(l_mu, l_nu, cfg, dt), position_suppression(l_mu, l_nu, cfg, dt),
                     grid_ratio, an / math.sqrt(an_mu * an_nu), sm / math.sqrt(sm_mu * sm_nu))


# -- measurement verdict -------------------------------------------------------

PROPER_MIXTURE_TOL = 1e-6


def distinct(a: CoherentLabel, b: CoherentLabel, factor: float = MUCH_GREATER) -> bool:
    return abs(a.x0 - b.x0) >= factor * a.sigma_x or abs(a.v0 - b.v0) >= factor * a.sigma_u


@dataclass(frozen=True)
class MeasurementVerdict:
    mixture: DensityKernel
    max_offdiag_residual: float
    proper_mixture: bool
    weights: np.ndarray  # Husimi-recovered branch weights
    diagonal_traces: np.ndarray  # c_mu^2 Tr T(|mu><mu|)
    full: DensityKernel = field(repr=False, default=None)


def measurement_mixture(branches, cfg: GalileanConfig, grid: Grid1D, check_distinct: bool = True,
                        husimi: bool = True) -> MeasurementVerdict:
    """Pointer factor sum c_mu c_nu |Omega_mu><Omega_nu| evolved by the channels.

    The microsystem factors are orthonormal, so the off-diagonal blocks only enter
    through their dyads. ``full`` is the kernel obtained if those factors were ignored
    (the coherent superposition), useful for diagnostics.
    """
    branches = list(branches)
    if not branches:
        raise DomainError("need at least one branch")
    c = np.array([b.weight for b in branches])
    if abs(np.sum(c ** 2) - 1.0) > 1e-12:
        raise DomainError(f"branch weights must satisfy sum c^2 = 1, got {np.sum(c ** 2)!r}")
    if check_distinct:
        for (i, a), (j, b) in combinations(enumerate(branches), 2):
            if not distinct(a.label, b.label):
                raise DomainError(f"branches {i} and {j} are not macroscopically distinct")
    labels = [b.label for b in branches]
    dt = cfg.resolved_delta_t(labels[0].mass)
    cfg_dt = cfg.with_delta_t(dt)
    diag = [apply_galilean_decoherence(dyad_kernel(l, l, grid), cfg_dt) for l in labels]
    sups = [sup_abs(d) for d in diag]
    mix = diag[0].with_data(sum(ci * ci * d.data for ci, d in zip(c, diag)))
    full = mix.data.copy()
    residual = 0.0
    for i, j in combinations(range(len(labels)), 2):
        off = apply_galilean_decoherence(dyad_kernel(labels[i], labels[j], grid), cfg_dt)
        residual = max(residual, sup_abs(off) / math.sqrt(sups[i] * sups[j]))
        full = full + c[i] * c[j] * (off.data + off.data.conj().T)
    traces = np.array([ci * ci * trace(d) for ci, d in zip(c, diag)])
    if husimi:
        weights = branch_weights(mix, labels)
    else:
        weights = traces
    return MeasurementVerdict(mix, residual, residual <= PROPER_MIXTURE_TOL, weights, traces, mix.with_data(full))


def branch_weights(W: DensityKernel, labels) -> np.ndarray:
    """Husimi mass of W nearest to each label (distance in units of sigma_x, sigma_u)."""
    labels = list(labels)
    s = labels[0].sigma_x
    su = labels[0].sigma_u
    hus = husimi_lattice(W, s)
    X, V = np.meshgrid(hus.x0, hus.v0, indexing="ij")
    d = np.stack([((X - l.x0) / s) ** 2 + ((V - l.v0) / su) ** 2 for l in labels])
    nearest = np.argmin(d, axis=0)
    return np.array([float(np.sum(hus.q[nearest == k]) * hus.cell) for k in range(len(labels))])


# -- tube widths ---------------------------------------------------------------

def half_width(offsets, values, level: float = math.exp(-0.5)) -> float:
    """Mean distance from the zero offset to where |values| first drops below level * |values(0)|."""
    offsets = np.asarray(offsets, dtype=float)
    values = np.abs(np.asarray(values))
    i0 = int(np.argmin(np.abs(offsets)))
    ref = values[i0]
    sides = []
    for step in (1, -1):
        i = i0
        while 0 <= i + step < offsets.size and values[i + step] > level * ref:
            i += step
        j = i + step
        if not 0 <= j < offsets.size:
            raise DomainError("profile does not decay within the scanned offsets")
        # linear interpolation of the crossing
        f = (values[i] - level * ref) / (values[i] - values[j])
        sides.append(abs(offsets[i] + f * (offsets[j] - offsets[i])))
    return float(np.mean(sides))


@dataclass(frozen=True)
class TubeWidths:
    position: float
    velocity: float
    label: CoherentLabel


def tube_widths(W: DensityKernel, sigma_x: float, span: float = 8.0, points: int = 161) -> TubeWidths:
    """Widths of |<Omega'|W|Omega>| in x0' and v0' around the Husimi maximum Omega."""
    hus = husimi_lattice(W, sigma_x)
    i, j = np.unravel_index(np.argmax(hus.q), hus.q.shape)
    ket = CoherentLabel(float(hus.x0[i]), float(hus.v0[j]), sigma_x, W.mass, W.hbar)
    dx = np.linspace(-span, span, points) * sigma_x
    dv = np.linspace(-span, span, points) * ket.sigma_u
    px = overlap_map(W, ket, dx, [0.0])[:, 0]
    pv = overlap_map(W, ket, [0.0], dv)[0]
    return TubeWidths(half_width(dx, px), half_width(dv, pv), ket)


def decoherence_parameter_for(cfg: GalileanConfig, mass: float, delta_t: float | None = None) -> float:
    dt = cfg.resolved_delta_t(mass) if delta_t is None else delta_t
    return decoherence_parameter(cfg, mass, dt)


def pure_kernel(psi: WaveFunction) -> DensityKernel:
    return kernel_from_wavefunction(psi.normalized())
