"""Discretized phase space: grid construction, sampling, quadrature, marginals.

The momentum axis is slaved to the position axis through FFT conjugacy,
dx * dp * n_x = 2*pi*hbar, so plane waves e^{i p x / hbar} at lattice momenta
are exact discrete Fourier modes. Both axes contain 0 and wrap periodically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fourier import trig_refine

REAL_IMAG_TOL = 1e-12


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform (x, p) lattice with FFT-conjugate momentum axis."""

    n_x: int
    x_min: float
    x_max: float
    hbar: float

    def __post_init__(self):
        n = self.n_x
        if n < 8 or (n & (n - 1)) != 0:
            raise GridError(f"n_x must be a power of two >= 8, got {n}")
        if not (self.x_max > self.x_min):
            raise GridError(f"empty interval [{self.x_min}, {self.x_max}]")
        if not (self.hbar > 0):
            raise GridError(f"hbar must be positive, got {self.hbar}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_x

    @property
    def dp(self) -> float:
        return 2.0 * math.pi * self.hbar / (self.n_x * self.dx)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_x)

    @property
    def p(self) -> np.ndarray:
        return self.dp * (np.arange(self.n_x) - self.n_x // 2)

    def mesh(self):
        """Broadcastable (X, P) coordinate arrays, row index = x."""
        return self.x[:, None], self.p[None, :]

    def embedded(self, pad: int) -> "PhaseGrid":
        """Grid covering pad x the x-extent at the same dx (dp shrinks by pad)."""
        if pad == 1:
            return self
        half = 0.5 * (pad - 1) * (self.x_max - self.x_min)
        return PhaseGrid(pad * self.n_x, self.x_min - half, self.x_max + half, self.hbar)


@dataclass
class SymbolField:
    """Complex samples of a phase-space function on a PhaseGrid."""

    grid: PhaseGrid
    values: np.ndarray
    real_valued: bool = False
    func: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        n = self.grid.n_x
        if self.values.shape != (n, n):
            raise GridError(f"values shape {self.values.shape} != ({n}, {n})")
        if self.real_valued:
            re = np.abs(self.values.real).max()
            im = np.abs(self.values.imag).max()
            if im > REAL_IMAG_TOL * max(re, 1e-300):
                raise GridError(f"field flagged real has |Im| = {im:.3e} vs |Re| = {re:.3e}")

    # small arithmetic surface so linearity properties read naturally
    def __add__(self, other):
        self._check_mate(other)
        return SymbolField(self.grid, self.values + other.values,
                           real_valued=self.real_valued and other.real_valued)

    def __sub__(self, other):
        self._check_mate(other)
        return SymbolField(self.grid, self.values - other.values,
                           real_valued=self.real_valued and other.real_valued)

    def __mul__(self, other):
        if isinstance(other, SymbolField):
            self._check_mate(other)
            return SymbolField(self.grid, self.values * other.values,
                               real_valued=self.real_valued and other.real_valued)
        z = complex(other)
        return SymbolField(self.grid, self.values * z,
                           real_valued=self.real_valued and z.imag == 0.0)

    __rmul__ = __mul__

    def conj(self):
        return SymbolField(self.grid, self.values.conj(), real_valued=self.real_valued)

    def _check_mate(self, other):
        if not isinstance(other, SymbolField):
            raise TypeError("expected a SymbolField")
        if other.grid != self.grid:
            raise GridError("fields live on different grids")

    def sup(self) -> float:
        return float(np.abs(self.values).max())


def make_grid(n_x: int, x_min: float, x_max: float, hbar: float) -> PhaseGrid:
    """Construct a PhaseGrid; rejects non-power-of-two n_x, empty intervals, hbar <= 0."""
    return PhaseGrid(int(n_x), float(x_min), float(x_max), float(hbar))


def sample_symbol(grid: PhaseGrid, f) -> SymbolField:
    """Sample f(x, p) on the lattice; f must broadcast over (n,1) x (1,n) arrays."""
    X, P = grid.mesh()
    vals = np.asarray(f(X, P), dtype=complex)
    vals = np.broadcast_to(vals, (grid.n_x, grid.n_x)).copy()
    bad = ~np.isfinite(vals)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise GridError(
            f"non-finite symbol value {vals[i, j]} at node (i={i}, j={j}), "
            f"x = {grid.x[i]:.6g}, p = {grid.p[j]:.6g}")
    im = np.abs(vals.imag).max()
    re = np.abs(vals.real).max()
    return SymbolField(grid, vals, real_valued=(im <= REAL_IMAG_TOL * max(re, 1e-300)),
                       func=f)


def integrate2d(field: SymbolField) -> complex:
    """Midpoint-rule integral over the periodic lattice: sum * dx * dp."""
    return complex(field.values.sum() * field.grid.dx * field.grid.dp)


def boundary_mass(field: SymbolField) -> float:
    """Max |value| on the outermost frame of the lattice."""
    v = field.values
    return float(max(np.abs(v[0]).max(), np.abs(v[-1]).max(),
                     np.abs(v[:, 0]).max(), np.abs(v[:, -1]).max()))


def relative_boundary_mass(field: SymbolField) -> float:
    s = field.sup()
    return boundary_mass(field) / s if s > 0 else 0.0


def marginals(field: SymbolField):
    """(x_marginal, p_marginal) of a real-valued field, midpoint quadrature."""
    if not field.real_valued:
        raise GridError("marginals are defined for real_valued fields only")
    v = field.values.real
    return v.sum(axis=1) * field.grid.dp, v.sum(axis=0) * field.grid.dx


def interior_slice(n: int, frac: float = 0.125) -> slice:
    """Window dropping frac of the nodes on each edge (default 12.5%)."""
    m = int(round(frac * n))
    return slice(m, n - m)


def interior_sup(values: np.ndarray, frac: float = 0.125) -> float:
    n = values.shape[0]
    w = interior_slice(n, frac)
    return float(np.abs(values[w, w]).max())


def embed_field(field: SymbolField, pad: int) -> SymbolField:
    """Represent the field on grid.embedded(pad).

    Fields that carry their sampling function are resampled (correct for
    non-decaying operator symbols); plain fields are zero-extended in x and
    band-limited-refined along p.
    """
    if pad == 1:
        return field
    big = field.grid.embedded(pad)
    if field.func is not None:
        return sample_symbol(big, field.func)
    vals = field.values
    k = pad
    while k > 1:
        vals = trig_refine(vals, axis=1)
        k //= 2
    n = field.grid.n_x
    out = np.zeros((big.n_x, big.n_x), complex)
    off = (big.n_x - n) // 2
    out[off:off + n, :] = vals
    return SymbolField(big, out, real_valued=field.real_valued)


def restrict_field(field: SymbolField, grid: PhaseGrid, pad: int) -> SymbolField:
    """Restrict a field on grid.embedded(pad) back onto grid."""
    if pad == 1:
        return field
    n = grid.n_x
    off = (field.grid.n_x - n) // 2
    vals = field.values[off:off + n, ::pad]
    return SymbolField(grid, vals.copy(), real_valued=field.real_valued)
