"""Gaussian wave packets, split-step propagation and the atom/pointer collision.

The collision is treated in centre-of-mass and relative coordinates. With equal
dissipation times of the two incoming packets the two-body state factorizes in both
coordinate systems, so a perfect reflection in the relative coordinate again yields a
product of an atom packet and a pointer packet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import DomainError
from .gaussian import GaussianKernel
from .kernel import Grid1D, Rep, WaveFunction


@dataclass(frozen=True)
class GaussianPacketSpec:
    mass: float
    v: float
    d: float
    center: float = 0.0

    def __post_init__(self):
        if not (self.mass > 0 and self.d > 0):
            raise DomainError("packet mass and width must be positive")


def _theta(t, mass, d, hbar):
    return np.asarray(t) * hbar / (d * d * mass)


def packet_from_offset(s, t, mass, v, d, hbar, global_phase=True):
    """Free Gaussian packet as a function of the offset s = r - v t from its moving centre."""
    s = np.asarray(s, dtype=float)
    th = _theta(t, mass, d, hbar)
    den = d * d * (4.0 + th * th)
    amp = (2.0 / math.pi) ** 0.25 / np.sqrt(d * (2.0 + 1j * th))
    phase = th * s * s / (2.0 * den) + mass * v * s / hbar
    if global_phase:
        phase = phase + mass * v * v * t / (2.0 * hbar)
    return amp * np.exp(-s * s / den + 1j * phase)


def gaussian_packet_value(spec: GaussianPacketSpec, r, t: float, hbar: float):
    """Closed-form free Gaussian packet at position r, time t (initial width spec.d)."""
    r = np.asarray(r, dtype=float) - spec.center
    m, v, d = spec.mass, spec.v, spec.d
    th = _theta(t, m, d, hbar)
    den = d * d * (4.0 + th * th)
    amp = (2.0 / math.pi) ** 0.25 / np.sqrt(d * (2.0 + 1j * th))
    re = -((r - t * v) ** 2) / den
    im = th * r * r / (2.0 * den) - 2.0 * m * v * (t * v - 2.0 * r) / (hbar * (4.0 + th * th))
    return amp * np.exp(re + 1j * im)


def packet_width(spec: GaussianPacketSpec, t: float, hbar: float) -> float:
    return math.sqrt(spec.d ** 2 + (t * hbar) ** 2 / (4.0 * spec.d ** 2 * spec.mass ** 2))


def packet_wavefunction(spec: GaussianPacketSpec, grid: Grid1D, t: float, hbar: float) -> WaveFunction:
    return WaveFunction(grid, spec.mass, gaussian_packet_value(spec, grid.points, t, hbar), Rep.POSITION, hbar)


# -- split-step propagation ---------------------------------------------------

@dataclass(frozen=True)
class Free:
    pass


@dataclass(frozen=True)
class DeltaWall:
    """Repulsive strength * delta(x - position), realized as a Gaussian of width one grid step."""

    strength: float
    position: float = 0.0

    def potential(self, grid: Grid1D) -> np.ndarray:
        w = grid.step
        x = grid.points - self.position
        return self.strength / (math.sqrt(2.0 * math.pi) * w) * np.exp(-0.5 * (x / w) ** 2)


Hamiltonian = Union[Free, DeltaWall]

MIN_POINTS_PER_WIDTH = 16
MAX_STEP_PHASE = math.pi / 4


def split_step_propagate(psi: WaveFunction, hamiltonian: Hamiltonian, t: float, steps: int,
                         check: bool = True) -> WaveFunction:
    """Strang splitting exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2), kinetic part by FFT."""
    if psi.rep is not Rep.POSITION:
        raise DomainError("split-step propagation expects a position-representation wave function")
    if t == 0:
        return psi
    if steps < 1:
        raise DomainError("steps must be positive")
    grid, m, hbar = psi.grid, psi.mass, psi.hbar
    dt = t / steps
    k = 2.0 * math.pi * np.fft.fftfreq(grid.n, grid.step)
    kin_phase = hbar * k * k * dt / (2.0 * m)
    if check:
        width = psi.std()
        if width / grid.step < MIN_POINTS_PER_WIDTH:
            raise DomainError(f"grid resolves the packet with {width / grid.step:.1f} points per width "
                              f"(need {MIN_POINTS_PER_WIDTH})")
    if isinstance(hamiltonian, Free):
        # free evolution is exact in the velocity representation, one step suffices
        data = np.fft.ifft(np.exp(-1j * hbar * k * k * t / (2.0 * m)) * np.fft.fft(psi.data))
        return WaveFunction(grid, m, data, Rep.POSITION, hbar)
    if check:
        spec = np.abs(np.fft.fft(psi.data)) ** 2
        significant = spec > 1e-12 * spec.max()
        worst = float(kin_phase[significant].max())
        if worst > MAX_STEP_PHASE:
            raise DomainError(f"per-step kinetic phase {worst:.3f} exceeds pi/4; use more steps")
    kin = np.exp(-1j * kin_phase)
    half = np.exp(-0.5j * hamiltonian.potential(grid) * dt / hbar)
    data = psi.data * half
    for i in range(steps):
        data = np.fft.ifft(kin * np.fft.fft(data))
        data = data * (half if i == steps - 1 else half * half)
    return WaveFunction(grid, m, data, Rep.POSITION, hbar)


def delta_transmission(mass: float, speed: float, strength: float, hbar: float) -> float:
    """Plane-wave transmission probability through strength * delta(x)."""
    g = mass * strength / (hbar * hbar * (mass * speed / hbar))
    return 1.0 / (1.0 + g * g)


# -- centre of mass / relative coordinates -------------------------------------

def cm_relative(x1, x2, m1: float, m2: float):
    if not (m1 > 0 and m2 > 0):
        raise DomainError("masses must be positive")
    M = m1 + m2
    return (m1 * np.asarray(x1) + m2 * np.asarray(x2)) / M, np.asarray(x1) - np.asarray(x2)


def cm_relative_inverse(X, x, m1: float, m2: float):
    if not (m1 > 0 and m2 > 0):
        raise DomainError("masses must be positive")
    M = m1 + m2
    return np.asarray(X) + m2 / M * np.asarray(x), np.asarray(X) - m1 / M * np.asarray(x)


class FactorizationError(RuntimeError):
    """The post-collision two-body state is not a product of atom and pointer states."""


# "x >> y" for the delta strength, encoded as a factor of 100
STRENGTH_FACTOR = 100.0
MAX_INITIAL_OVERLAP = 1e-8
FACTORIZATION_TOL = 1e-4


@dataclass(frozen=True)
class CollisionSetup:
    atom: GaussianPacketSpec
    pointer: GaussianPacketSpec
    v0_strength: float
    hbar: float = 1.0
    check: bool = True

    def __post_init__(self):
        if self.check:
            self.validate()

    @classmethod
    def build(cls, m1, m2, v, d1, A, v0_strength=None, hbar=1.0, d2=None, check=True) -> "CollisionSetup":
        """Atom at the origin moving with v towards a pointer at rest at A.

        ``d2`` defaults to the equal-dissipation-time width d1 sqrt(m1/m2) and
        ``v0_strength`` to the minimal admissible 100 hbar v.
        """
        d2 = d1 * math.sqrt(m1 / m2) if d2 is None else d2
        v0 = STRENGTH_FACTOR * hbar * v if v0_strength is None else v0_strength
        return cls(GaussianPacketSpec(m1, v, d1, 0.0), GaussianPacketSpec(m2, 0.0, d2, A), v0, hbar, check)

    @property
    def m1(self):
        return self.atom.mass

    @property
    def m2(self):
        return self.pointer.mass

    @property
    def v(self):
        return self.atom.v

    @property
    def A(self):
        return self.pointer.center - self.atom.center

    @property
    def total_mass(self):
        return self.m1 + self.m2

    @property
    def reduced_mass(self):
        return self.m1 * self.m2 / (self.m1 + self.m2)

    @property
    def collision_time(self) -> float:
        """t3 = 2A/v, after which only the reflected wave is present."""
        return 2.0 * self.A / self.v

    def initial_overlap(self) -> float:
        a1 = 1.0 / (4.0 * self.atom.d ** 2)
        a2 = 1.0 / (4.0 * self.pointer.d ** 2)
        norm = (2.0 * math.pi * self.atom.d ** 2) ** -0.25 * (2.0 * math.pi * self.pointer.d ** 2) ** -0.25
        return norm * math.sqrt(math.pi / (a1 + a2)) * math.exp(-a1 * a2 * self.A ** 2 / (a1 + a2))

    def equal_dissipation_residual(self) -> float:
        target = self.atom.d * math.sqrt(self.m1 / self.m2)
        return abs(self.pointer.d - target) / target

    def validate(self) -> None:
        if self.atom.center != 0.0 or self.pointer.v != 0.0:
            raise DomainError("atom must start at the origin and the pointer at rest")
        if not (self.A > 0 and self.v > 0):
            raise DomainError("the atom must move towards a pointer at positive distance")
        if self.equal_dissipation_residual() > 1e-12:
            raise DomainError("pointer width violates d2 = d1 sqrt(m1/m2)")
        if self.initial_overlap() >= MAX_INITIAL_OVERLAP:
            raise DomainError(f"initial packets overlap ({self.initial_overlap():.2e})")
        if self.v0_strength < STRENGTH_FACTOR * self.hbar * self.v:
            raise DomainError("delta strength must be at least 100 hbar v")

    # closed-form post-collision packets ------------------------------------

    def pointer_out_spec(self) -> GaussianPacketSpec:
        M = self.total_mass
        return GaussianPacketSpec(self.m2, 2.0 * self.m1 * self.v / M, self.pointer.d,
                                  self.A * (self.m2 - self.m1) / M)

    def atom_out_spec(self) -> GaussianPacketSpec:
        M = self.total_mass
        return GaussianPacketSpec(self.m1, self.v * (self.m1 - self.m2) / M, self.atom.d, 2.0 * self.m2 * self.A / M)

    def pointer_mean(self, t: float) -> float:
        s = self.pointer_out_spec()
        return s.center + s.v * t


def _lab_gaussian(setup: CollisionSetup) -> GaussianKernel:
    """Initial two-body wave function psi_atom(x1) psi_pointer(x2) as a 2D Gaussian."""
    d1, d2, A = setup.atom.d, setup.pointer.d, setup.A
    a1, a2 = 1.0 / (2.0 * d1 * d1), 1.0 / (2.0 * d2 * d2)
    P = np.diag([a1, a2]).astype(complex)
    h = np.array([1j * setup.m1 * setup.v / setup.hbar, a2 * A])
    c = -A * A * a2 / 2.0 - 0.25 * math.log(2.0 * math.pi * d1 * d1) - 0.25 * math.log(2.0 * math.pi * d2 * d2)
    return GaussianKernel(P, h, complex(c))


def _mirror_matrix(m1: float, m2: float) -> np.ndarray:
    """Linear map of (x1, x2) that flips the relative coordinate and keeps the centre of mass."""
    M = m1 + m2
    return np.array([[(m1 - m2) / M, 2.0 * m2 / M], [2.0 * m1 / M, (m2 - m1) / M]])


def _free_evolve(g: GaussianKernel, masses, hbar: float, t: float) -> GaussianKernel:
    """Free two-body evolution of exp(-1/2 z^T P z + h^T z + c) with the given masses."""
    if t == 0:
        return g
    z0 = np.linalg.solve(g.P, g.h)
    c0 = g.c + 0.5 * g.h @ z0
    Pt = np.linalg.inv(np.linalg.inv(g.P) + 1j * hbar * t * np.diag(1.0 / np.asarray(masses)))
    ht = Pt @ z0
    lam_t = np.linalg.eigvals(Pt).astype(complex)
    lam_0 = np.linalg.eigvals(g.P).astype(complex)
    ratio = np.prod(np.sqrt(lam_t)) / np.prod(np.sqrt(lam_0))
    ct = c0 - 0.5 * z0 @ Pt @ z0 + np.log(ratio)
    return GaussianKernel(Pt, ht, complex(ct))


def reflected_two_body(setup: CollisionSetup, t: float) -> GaussianKernel:
    """Two-body wave function after perfect reflection, valid for t >= t3 (sign included)."""
    g = _lab_gaussian(setup)
    R = _mirror_matrix(setup.m1, setup.m2)
    mirrored = GaussianKernel(R.T @ g.P @ R, R.T @ g.h, g.c + 1j * math.pi)
    return _free_evolve(mirrored, (setup.m1, setup.m2), setup.hbar, t)


@dataclass(frozen=True)
class CollisionResult:
    t: float
    atom_out: WaveFunction
    pointer_out: WaveFunction
    factorization_residual: float
    product_error: float


def _packet_grid(spec: GaussianPacketSpec, t: float, hbar: float, n: int, widths: float) -> Grid1D:
    centre = spec.center + spec.v * t
    half = widths * packet_width(spec, t, hbar)
    return Grid1D(n, centre - half, centre + half)


def collide(setup: CollisionSetup, t: float, n: int = 256, widths: float = 10.0,
            tol: float = FACTORIZATION_TOL) -> CollisionResult:
    """Atom and pointer states after the (perfectly reflecting) collision at time t >= t3.

    The two-body state is built from the mirrored initial data by exact free evolution,
    sampled on an (x1, x2) grid around the expected packets and factorized by SVD. The
    returned factors are the closed-form packets; the residual of the best rank-one
    approximation must stay below ``tol``.
    """
    if t < setup.collision_time * (1 - 1e-12):
        raise DomainError(f"t = {t!r} precedes the end of the collision t3 = {setup.collision_time!r}")
    hbar = setup.hbar
    atom_spec, pointer_spec = setup.atom_out_spec(), setup.pointer_out_spec()
    g1 = _packet_grid(atom_spec, t, hbar, n, widths)
    g2 = _packet_grid(pointer_spec, t, hbar, n, widths)
    # sample around the packet centres to keep the phases well conditioned
    c1 = atom_spec.center + atom_spec.v * t
    c2 = pointer_spec.center + pointer_spec.v * t
    two = reflected_two_body(setup, t)
    z0 = np.array([c1, c2])
    lin = two.h - two.P @ z0
    d1 = g1.points - c1
    d2 = g2.points - c2
    P = two.P
    expo = (-0.5 * (P[0, 0] * d1[:, None] ** 2 + 2 * P[0, 1] * d1[:, None] * d2[None, :] + P[1, 1] * d2[None, :] ** 2)
            + lin[0] * d1[:, None] + lin[1] * d2[None, :])
    expo = expo - expo.real.max()
    psi2 = np.exp(expo) * math.sqrt(g1.step * g2.step)
    psi2 /= np.linalg.norm(psi2)
    s = np.linalg.svd(psi2, compute_uv=False)
    residual = float(math.sqrt(max(1.0 - s[0] ** 2 / np.sum(s ** 2), 0.0)))

    atom = WaveFunction(g1, setup.m1, -packet_from_offset(d1 - 0.0, t, setup.m1, atom_spec.v, atom_spec.d, hbar, False),
                        Rep.POSITION, hbar).normalized()
    pointer = WaveFunction(g2, setup.m2, packet_from_offset(d2, t, setup.m2, pointer_spec.v, pointer_spec.d, hbar, False),
                           Rep.POSITION, hbar).normalized()
    prod = np.outer(atom.data, pointer.data) * math.sqrt(g1.step * g2.step)
    prod /= np.linalg.norm(prod)
    overlap = abs(np.vdot(prod, psi2))
    product_error = float(math.sqrt(max(2.0 - 2.0 * overlap, 0.0)))
    if residual > tol or product_error > tol:
        raise FactorizationError(f"post-collision state does not factorize (residual {residual:.2e}, "
                                 f"product error {product_error:.2e})")
    return CollisionResult(t, atom, pointer, residual, product_error)


def coherent_fidelity(setup: CollisionSetup, t: float) -> float:
    """|<x0, v0 | pointer_out(t)>|^2 for the coherent state of width d2 at the pointer's mean."""
    th = t * setup.hbar / (setup.pointer.d ** 2 * setup.m2)
    e = th / 2.0
    # overlap of exp(-r^2/4d^2) with exp(-r^2/(4d^2 (1 + i e))), same centre and mean velocity
    return float(2.0 * math.sqrt(1.0 + e * e) / math.sqrt(4.0 + 5.0 * e * e + e ** 4))


# -- small-time expansion of the pointer state ---------------------------------

@dataclass(frozen=True)
class PointerExpansion:
    theta: float
    R_coeff: float
    I1: float
    I2: float
    x0: float
    v0: float
    R_series: float
    I1_series: float
    I2_series: float


def pointer_expansion(setup: CollisionSetup, t: float) -> PointerExpansion:
    """Exact curvature and phase coefficients of the post-collision pointer packet and their
    leading small-theta forms, theta = t hbar / (d2^2 m2)."""
    m1, m2, v, A, hbar = setup.m1, setup.m2, setup.v, setup.A, setup.hbar
    d = setup.pointer.d
    M = m1 + m2
    th = t * hbar / (d * d * m2)
    if th >= 1:
        raise DomainError(f"expansion parameter theta = {th:.3g} is not small")
    den = 4.0 * d ** 4 * m2 ** 2 + t * t * hbar * hbar
    R = -d * d * m2 * m2 / den
    I1 = (8.0 * d ** 4 * m1 * m2 ** 3 * v + A * (m1 - m2) * m2 * t * hbar ** 2) / (M * hbar * den)
    I2 = m2 * t * hbar / (8.0 * d ** 4 * m2 ** 2 + 2.0 * t * t * hbar ** 2)
    return PointerExpansion(
        theta=th,
        R_coeff=R,
        I1=I1,
        I2=I2,
        x0=A * (m2 - m1) / M + 2.0 * m1 * v * t / M,
        v0=2.0 * m1 * v / M,
        R_series=-1.0 / (4.0 * d * d) + th * th / (16.0 * d * d),
        I1_series=2.0 * m1 * m2 * v / (M * hbar) + A * (m1 - m2) * th / (4.0 * d * d * M),
        I2_series=th / (8.0 * d * d),
    )


@dataclass(frozen=True)
class NumericCollision:
    pointer: WaveFunction
    relative: WaveFunction
    reflection_probability: float
    factorization_residual: float


def collide_numeric(setup: CollisionSetup, t: float, dx: float, steps: int, n2: int = 2048,
                    n1: int = 512) -> NumericCollision:
    """Split-step oracle for the collision: the relative coordinate is integrated through a
    narrow Gaussian barrier, the free centre-of-mass packet is taken in closed form, and the
    two are recombined on aligned lab grids and factorized by SVD.
    """
    if t < setup.collision_time:
        raise DomainError("t must not precede the end of the collision")
    hbar, m1, m2 = setup.hbar, setup.m1, setup.m2
    M, mu = setup.total_mass, setup.reduced_mass
    d_rel = setup.atom.d * math.sqrt(m1 / mu)
    d_cm = setup.atom.d * math.sqrt(m1 / M)
    rel_spec = GaussianPacketSpec(mu, setup.v, d_rel, -setup.A)
    # the reflected packet is centred at A - v t
    reach = 10.0 * max(packet_width(rel_spec, t, hbar), d_rel)
    lo = min(-setup.A, setup.A - setup.v * t) - reach
    hi = 0.25 * reach
    n = 1 << int(math.ceil(math.log2((hi - lo) / dx)))
    grid = Grid1D.from_step(n, dx, lo)
    phi0 = packet_wavefunction(rel_spec, grid, 0.0, hbar)
    phi = split_step_propagate(phi0, DeltaWall(setup.v0_strength, 0.0), t, steps)
    x = grid.points
    refl = float(np.sum(np.abs(phi.data[x < 0]) ** 2) * dx)

    # lab grids aligned with the relative lattice: x1 - x2 falls on grid points
    pointer_spec = setup.pointer_out_spec()
    atom_spec = setup.atom_out_spec()
    c2 = pointer_spec.center + pointer_spec.v * t
    c1 = atom_spec.center + atom_spec.v * t
    q = max(1, int(round(2 * 10.0 * packet_width(atom_spec, t, hbar) / (n1 * dx))))
    j0 = int(round((c2 - lo) / dx))
    x2 = lo + (np.arange(n2) - n2 // 2 + j0) * dx
    i0 = int(round((c1 - lo) / dx))
    i_idx = (np.arange(n1) - n1 // 2) * q + i0
    x1 = lo + i_idx * dx
    rel_pos = x1[:, None] - x2[None, :]
    k = np.rint((rel_pos - lo) / dx).astype(int)
    inside = (k >= 0) & (k < n)
    phi_vals = np.where(inside, phi.data[np.clip(k, 0, n - 1)], 0.0)
    X = (m1 * x1[:, None] + m2 * x2[None, :]) / M
    cm_centre = m2 * setup.A / M + m1 * setup.v * t / M
    Phi = packet_from_offset(X - cm_centre, t, M, m1 * setup.v / M, d_cm, hbar, False)
    psi2 = Phi * phi_vals
    u, s, vh = np.linalg.svd(psi2, full_matrices=False)
    residual = float(math.sqrt(max(1.0 - s[0] ** 2 / np.sum(s ** 2), 0.0)))
    g2 = Grid1D.from_step(n2, dx, float(x2[0]))
    pointer = WaveFunction(g2, m2, vh[0], Rep.POSITION, hbar).normalized()
    return NumericCollision(pointer, phi, refl, residual)


def phase_aligned_l2(a: WaveFunction, b: WaveFunction) -> float:
    """min over global phases of ||a - e^{i phi} b|| for normalized a, b on the same grid."""
    ov = abs(a.inner(b))
    return math.sqrt(max(2.0 - 2.0 * ov, 0.0))
