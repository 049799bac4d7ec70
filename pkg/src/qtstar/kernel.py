"""Discretized density-operator kernels on uniform 1D grids.

A kernel sample ``data[i, j]`` is W(g_i, g_j), with g the grid points of either the
position or the velocity representation. Traces and inner products use the grid step
as quadrature weight, so ``step * data`` is the matrix whose spectrum approximates the
spectrum of the statistical operator.

The change of representation is the continuum transform

    psi(v) = sqrt(m / 2 pi hbar) * integral exp(-i m v x / hbar) phi(x) dx

evaluated with an FFT plus the phase factors needed for grids that do not start at
the origin. Velocity grids produced by the transform are centred on zero.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .core import DomainError

ALIAS_THRESHOLD = 1e-6
STRICT_EIG_LIMIT = 512


class Rep(str, Enum):
    POSITION = "position"
    VELOCITY = "velocity"

    @property
    def other(self) -> "Rep":
        return Rep.VELOCITY if self is Rep.POSITION else Rep.POSITION


class PositivityError(ValueError):
    """A kernel has an eigenvalue below the tolerated negative threshold."""


class AliasingWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Grid1D:
    """Uniform, endpoint-exclusive grid: points min + k * (max - min) / n, k < n."""

    n: int
    min: float
    max: float

    def __post_init__(self):
        if self.n < 16 or self.n & (self.n - 1):
            raise DomainError(f"grid size must be a power of two >= 16, got {self.n}")
        if not self.min < self.max:
            raise DomainError(f"grid bounds must satisfy min < max, got [{self.min}, {self.max})")

    @classmethod
    def centered(cls, n: int, half_width: float) -> "Grid1D":
        return cls(n, -half_width, half_width)

    @classmethod
    def from_step(cls, n: int, step: float, start: float | None = None) -> "Grid1D":
        start = -0.5 * n * step if start is None else start
        return cls(n, start, start + n * step)

    @property
    def step(self) -> float:
        return (self.max - self.min) / self.n

    @property
    def points(self) -> np.ndarray:
        return self.min + self.step * np.arange(self.n)

    def reciprocal(self, mass: float, hbar: float, start: float | None = None) -> "Grid1D":
        """Conjugate grid of the mass-scaled Fourier transform (centred unless ``start``)."""
        step = 2.0 * math.pi * hbar / (mass * self.n * self.step)
        return Grid1D.from_step(self.n, step, start)

    def index_of(self, value: float) -> int:
        return int(round((value - self.min) / self.step))


def _fourier_factors(xgrid: Grid1D, vgrid: Grid1D, mass: float, hbar: float):
    k = mass / hbar
    a, h = xgrid.min, xgrid.step
    b, dv = vgrid.min, vgrid.step
    idx = np.arange(xgrid.n)
    post = np.exp(-1j * k * b * h * idx)
    pre = np.exp(-1j * k * (b * a + a * dv * idx))
    return pre, post


def _forward(arr: np.ndarray, xgrid: Grid1D, vgrid: Grid1D, mass: float, hbar: float, axis: int) -> np.ndarray:
    """Position samples -> velocity samples along ``axis``."""
    pre, post = _fourier_factors(xgrid, vgrid, mass, hbar)
    shape = [1] * arr.ndim
    shape[axis] = -1
    out = np.fft.fft(arr * post.reshape(shape), axis=axis)
    scale = xgrid.step * math.sqrt(mass / (2.0 * math.pi * hbar))
    return scale * pre.reshape(shape) * out


def _backward(arr: np.ndarray, xgrid: Grid1D, vgrid: Grid1D, mass: float, hbar: float, axis: int) -> np.ndarray:
    """Velocity samples -> position samples along ``axis``."""
    pre, post = _fourier_factors(xgrid, vgrid, mass, hbar)
    shape = [1] * arr.ndim
    shape[axis] = -1
    out = np.fft.ifft(arr * np.conj(pre).reshape(shape), axis=axis)
    scale = vgrid.step * math.sqrt(mass / (2.0 * math.pi * hbar)) * vgrid.n
    return scale * np.conj(post).reshape(shape) * out


def _edge_fraction(arr: np.ndarray) -> float:
    peak = np.max(np.abs(arr))
    if peak == 0:
        return 0.0
    if arr.ndim == 1:
        edge = max(abs(arr[0]), abs(arr[-1]))
    else:
        edge = max(np.abs(arr[0]).max(), np.abs(arr[-1]).max(), np.abs(arr[:, 0]).max(), np.abs(arr[:, -1]).max())
    return float(edge / peak)


@dataclass(frozen=True)
class WaveFunction:
    grid: Grid1D
    mass: float
    data: np.ndarray
    rep: Rep = Rep.POSITION
    hbar: float = 1.0
    conjugate_min: float | None = None
    aliased: bool = False

    def __post_init__(self):
        if self.data.shape != (self.grid.n,):
            raise DomainError(f"wave function has shape {self.data.shape}, grid has {self.grid.n} points")

    def norm(self) -> float:
        return math.sqrt(self.grid.step * float(np.sum(np.abs(self.data) ** 2)))

    def normalized(self) -> "WaveFunction":
        return replace(self, data=self.data / self.norm())

    def inner(self, other: "WaveFunction") -> complex:
        """<self|other> by the grid quadrature."""
        return complex(self.grid.step * np.vdot(self.data, other.data))

    def mean(self) -> float:
        p = np.abs(self.data) ** 2
        return float(np.sum(p * self.grid.points) / np.sum(p))

    def std(self) -> float:
        p = np.abs(self.data) ** 2
        p = p / p.sum()
        g = self.grid.points
        mu = np.sum(p * g)
        return float(math.sqrt(max(np.sum(p * (g - mu) ** 2), 0.0)))

    def transformed(self) -> "WaveFunction":
        """The same state in the other representation."""
        if self.rep is Rep.POSITION:
            dst = self.grid.reciprocal(self.mass, self.hbar, self.conjugate_min)
            data = _forward(self.data, self.grid, dst, self.mass, self.hbar, 0)
        else:
            dst = self.grid.reciprocal(self.mass, self.hbar, self.conjugate_min)
            data = _backward(self.data, dst, self.grid, self.mass, self.hbar, 0)
        return WaveFunction(dst, self.mass, data, self.rep.other, self.hbar, self.grid.min,
                            _edge_fraction(data) > ALIAS_THRESHOLD)


@dataclass(frozen=True)
class DensityKernel:
    rep: Rep
    grid: Grid1D
    mass: float
    data: np.ndarray
    hbar: float = 1.0
    conjugate_min: float | None = None
    aliased: bool = False

    def __post_init__(self):
        n = self.grid.n
        if self.data.shape != (n, n):
            raise DomainError(f"kernel has shape {self.data.shape}, expected ({n}, {n})")

    @property
    def step(self) -> float:
        return self.grid.step

    def matrix(self) -> np.ndarray:
        """step * data: the operator as a matrix on the orthonormalized grid basis."""
        return self.step * self.data

    def with_data(self, data: np.ndarray) -> "DensityKernel":
        return replace(self, data=data)

    def conjugate_grid(self) -> Grid1D:
        return self.grid.reciprocal(self.mass, self.hbar, self.conjugate_min)

    def in_rep(self, rep: Rep) -> "DensityKernel":
        if rep is self.rep:
            return self
        return to_velocity_rep(self) if rep is Rep.VELOCITY else to_position_rep(self)

    def validate(self, strict: bool = False, trace_tol: float = 1e-10, eig_tol: float = 1e-10) -> None:
        peak = np.max(np.abs(self.data))
        if np.max(np.abs(self.data - self.data.conj().T)) > 1e-12 * max(peak, 1e-300):
            raise DomainError("kernel is not Hermitian")
        tr = trace(self)
        if abs(tr - 1.0) > trace_tol:
            raise DomainError(f"kernel trace is {tr!r}, expected 1")
        if self.grid.n <= STRICT_EIG_LIMIT or strict:
            lam = min_eigenvalue(self)
            if lam < -eig_tol:
                raise PositivityError(f"kernel has eigenvalue {lam:.3e}")


def _transform(k: DensityKernel, forward: bool) -> DensityKernel:
    src = k.grid
    dst = k.conjugate_grid()
    if forward:
        step1 = _forward(k.data, src, dst, k.mass, k.hbar, 0)
        data = np.conj(_forward(np.conj(step1), src, dst, k.mass, k.hbar, 1))
    else:
        step1 = _backward(k.data, dst, src, k.mass, k.hbar, 0)
        data = np.conj(_backward(np.conj(step1), dst, src, k.mass, k.hbar, 1))
    aliased = max(_edge_fraction(k.data), _edge_fraction(data)) > ALIAS_THRESHOLD
    if aliased:
        warnings.warn("kernel support reaches the grid boundary; transform may alias", AliasingWarning, stacklevel=3)
    return DensityKernel(k.rep.other, dst, k.mass, data, k.hbar, src.min, aliased)


def to_velocity_rep(k: DensityKernel) -> DensityKernel:
    if k.rep is Rep.VELOCITY:
        return k
    return _transform(k, forward=True)


def to_position_rep(k: DensityKernel) -> DensityKernel:
    if k.rep is Rep.POSITION:
        return k
    return _transform(k, forward=False)


def kernel_from_wavefunction(psi: WaveFunction, tol: float = 1e-10) -> DensityKernel:
    norm = psi.norm()
    if abs(norm * norm - 1.0) > tol:
        raise DomainError(f"wave function is not normalized (norm^2 = {norm * norm!r})")
    data = np.outer(psi.data, psi.data.conj())
    return DensityKernel(psi.rep, psi.grid, psi.mass, data, psi.hbar, psi.conjugate_min, psi.aliased)


def mixture(kernels, weights) -> DensityKernel:
    kernels = list(kernels)
    data = sum(w * k.data for w, k in zip(weights, kernels))
    return kernels[0].with_data(data)


def trace(k: DensityKernel) -> float:
    return float(np.real(k.step * np.trace(k.data)))


def purity(k: DensityKernel) -> float:
    return float(k.step ** 2 * np.sum(np.abs(k.data) ** 2))


def eigenvalues(k: DensityKernel) -> np.ndarray:
    m = k.matrix()
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def min_eigenvalue(k: DensityKernel) -> float:
    return float(eigenvalues(k)[0])


def von_neumann_entropy(k: DensityKernel, neg_tol: float = 1e-8) -> float:
    lam = eigenvalues(k)
    if lam[0] < -neg_tol:
        raise PositivityError(f"kernel has eigenvalue {lam[0]:.3e}")
    lam = np.clip(lam, 0.0, 1.0)
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log(lam)))


def sup_abs(k: DensityKernel) -> float:
    return float(np.max(np.abs(k.data)))


def frobenius(k: DensityKernel) -> float:
    """Hilbert-Schmidt norm of the operator (sqrt of purity for density kernels)."""
    return float(k.step * np.linalg.norm(k.data))


def relative_distance(a: DensityKernel, b: DensityKernel) -> float:
    return float(np.linalg.norm(a.data - b.data) / np.linalg.norm(b.data))


# -- snapshot files ----------------------------------------------------------

_HEADER = "qtstar-kernel v1"


def save_snapshot(k: DensityKernel, path: str | Path) -> Path:
    """Write a header block followed by one "re,im" line per entry, row-major."""
    path = Path(path)
    header = {
        "rep": k.rep.value,
        "n": k.grid.n,
        "min": repr(float(k.grid.min)),
        "max": repr(float(k.grid.max)),
        "mass": repr(float(k.mass)),
        "hbar": repr(float(k.hbar)),
    }
    if k.conjugate_min is not None:
        header["conjugate_min"] = repr(float(k.conjugate_min))
    flat = k.data.reshape(-1)
    pairs = np.column_stack([flat.real, flat.imag])
    with path.open("w", newline="\n") as fh:
        fh.write(f"# {_HEADER}\n")
        for key, value in header.items():
            fh.write(f"# {key}={value}\n")
        fh.write("re,im\n")
        np.savetxt(fh, pairs, fmt="%.17g", delimiter=",")
    return path


def load_snapshot(path: str | Path) -> DensityKernel:
    path = Path(path)
    header = {}
    with path.open() as fh:
        first = fh.readline().strip()
        if first != f"# {_HEADER}":
            raise DomainError(f"{path}: not a kernel snapshot (first line {first!r})")
        n_header = 1
        for line in fh:
            n_header += 1
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition("=")
            header[key] = value
    pairs = np.loadtxt(path, delimiter=",", skiprows=n_header, ndmin=2)
    n = int(header["n"])
    if pairs.shape != (n * n, 2):
        raise DomainError(f"{path}: expected {n * n} entries, found {pairs.shape[0]}")
    grid = Grid1D(n, float(header["min"]), float(header["max"]))
    conj = header.get("conjugate_min")
    return DensityKernel(
        Rep(header["rep"]),
        grid,
        float(header["mass"]),
        (pairs[:, 0] + 1j * pairs[:, 1]).reshape(n, n),
        float(header["hbar"]),
        None if conj is None else float(conj),
    )
