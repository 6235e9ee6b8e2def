"""Shared numerical substrate: periodic grid, field storage, the nonlocal
shift-combine operator u(x+h) +/- u(x-h), spatial derivatives, and Sobolev
norms.

All types are immutable values; all operations are pure functions. The
spectral convention is the real-input DFT with u(x_j) = sum_k c_k
exp(i 2 pi k x_j / L) and the Nyquist mode zeroed wherever a multiplier
would break conjugate symmetry (odd derivatives, minus-sign combine).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

# h/dx must sit this close to an integer to count as grid-aligned
ALIGNMENT_TOL = 1e-12


class SignCase(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


class ShiftMethod(enum.Enum):
    GRID_OFFSET = "grid-offset"
    SPECTRAL_PHASE = "spectral-phase"


class DerivMethod(enum.Enum):
    CENTERED2 = "centered2"
    SPECTRAL = "spectral"


class AlignmentError(ValueError):
    """Requested an exact index shift for a misaligned shift distance."""


@dataclass(frozen=True)
class Grid:
    """Uniform periodic 1-D mesh with nodes x_j = j * period / n_points."""

    n_points: int
    period: float

    def __post_init__(self):
        if self.n_points < 8 or self.n_points % 2 != 0:
            raise ValueError(
                f"n_points must be even and >= 8, got {self.n_points}"
            )
        if not (self.period > 0 and np.isfinite(self.period)):
            raise ValueError(f"period must be positive, got {self.period}")

    @property
    def spacing(self) -> float:
        return self.period / self.n_points

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.n_points) * self.spacing

    def angular_wavenumbers(self) -> np.ndarray:
        """2*pi*k/L for the real-transform modes k = 0..N/2."""
        return 2.0 * np.pi * np.fft.rfftfreq(self.n_points, d=self.spacing)


def make_grid(n_points: int, period: float) -> Grid:
    return Grid(int(n_points), float(period))


@dataclass(frozen=True)
class Field:
    """Sample values of u(., t) on a grid at one instant.

    Values are copied and frozen on construction; non-finite values are
    rejected so a blown-up state can never propagate silently.
    """

    grid: Grid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.grid.n_points,):
            raise ValueError(
                f"values has shape {vals.shape}, grid wants ({self.grid.n_points},)"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field contains non-finite values (blown-up state)")
        if not (np.isfinite(self.time) and self.time >= 0):
            raise ValueError(f"time must be finite and >= 0, got {self.time}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def sample(cls, grid: Grid, fn, time: float = 0.0) -> "Field":
        return cls(grid, np.asarray(fn(grid.nodes), dtype=float), time)


@dataclass(frozen=True)
class NonlocalCoupling:
    """Sign case and shift distance of the nonlocal velocity u(x+h) +/- u(x-h).

    The shift is stored as given (>= 0) and reduced modulo the grid period
    when applied, so h = L realizes the local reductions (2u for plus,
    0 for minus).
    """

    sign: SignCase
    shift: float

    def __post_init__(self):
        if not (np.isfinite(self.shift) and self.shift >= 0):
            raise ValueError(f"shift must be finite and >= 0, got {self.shift}")

    def reduced_shift(self, grid: Grid) -> float:
        return float(self.shift % grid.period)

    def offset_ratio(self, grid: Grid) -> float:
        # multiply before dividing: keeps h/dx exact for exact-ratio shifts
        return self.reduced_shift(grid) * grid.n_points / grid.period

    def is_aligned(self, grid: Grid) -> bool:
        q = self.offset_ratio(grid)
        return abs(q - round(q)) <= ALIGNMENT_TOL

    def offset(self, grid: Grid) -> int:
        """Integer node offset; raises AlignmentError when misaligned."""
        q = self.offset_ratio(grid)
        if abs(q - round(q)) > ALIGNMENT_TOL:
            nearest = round(q) * grid.spacing
            raise AlignmentError(
                f"shift h={self.reduced_shift(grid)} is not grid-aligned: "
                f"h/dx={q} with dx={grid.spacing}; nearest aligned h={nearest}"
            )
        return int(round(q)) % grid.n_points


def _combine_multiplier(grid: Grid, coupling: NonlocalCoupling) -> np.ndarray:
    """rfft multiplier realizing u(x+h) +/- u(x-h) via spectral phase shift."""
    phase = grid.angular_wavenumbers() * coupling.reduced_shift(grid)
    if coupling.sign is SignCase.PLUS:
        return 2.0 * np.cos(phase) + 0j
    mult = 2.0j * np.sin(phase)
    mult[-1] = 0.0  # imaginary Nyquist multiplier would break realness
    return mult


def combine_operator(grid: Grid, coupling: NonlocalCoupling,
                     method: ShiftMethod | None = None):
    """Array-level shift-combine closure, precomputed for repeated use.

    method=None picks GRID_OFFSET when h is grid-aligned (exact index
    arithmetic) and SPECTRAL_PHASE otherwise.
    """
    if method is None:
        method = (ShiftMethod.GRID_OFFSET if coupling.is_aligned(grid)
                  else ShiftMethod.SPECTRAL_PHASE)
    if method is ShiftMethod.GRID_OFFSET:
        q = coupling.offset(grid)
        if coupling.sign is SignCase.PLUS:
            return lambda v: np.roll(v, -q) + np.roll(v, q)
        return lambda v: np.roll(v, -q) - np.roll(v, q)
    mult = _combine_multiplier(grid, coupling)
    n = grid.n_points
    return lambda v: np.fft.irfft(np.fft.rfft(v) * mult, n=n)


def shift_combine(field: Field, coupling: NonlocalCoupling,
                  method: ShiftMethod | None = None) -> Field:
    """The nonlocal velocity field u(x+h) +/- u(x-h) at the same time stamp."""
    op = combine_operator(field.grid, coupling, method)
    return Field(field.grid, op(field.values), field.time)


def derivative_operator(grid: Grid, method: DerivMethod = DerivMethod.SPECTRAL):
    """Array-level d/dx closure with periodic wraparound."""
    if method is DerivMethod.CENTERED2:
        inv2dx = 1.0 / (2.0 * grid.spacing)
        return lambda v: (np.roll(v, -1) - np.roll(v, 1)) * inv2dx
    ik = 1j * grid.angular_wavenumbers()
    ik[-1] = 0.0  # Nyquist mode of an odd derivative has no real signal
    n = grid.n_points
    return lambda v: np.fft.irfft(np.fft.rfft(v) * ik, n=n)


def derivative(field: Field, method: DerivMethod = DerivMethod.SPECTRAL) -> Field:
    """Spatial derivative: 2nd-order centered stencil or exact derivative of
    the trigonometric interpolant."""
    op = derivative_operator(field.grid, method)
    return Field(field.grid, op(field.values), field.time)


def spectral_seminorms(grid: Grid, values: np.ndarray, orders) -> list[float]:
    """Squared-integral seminorms L * sum_k |2 pi k/L|^(2m) |c_k|^2, square-
    rooted, for several derivative orders m from one transform."""
    coeff = np.fft.rfft(values) / grid.n_points
    power = np.abs(coeff) ** 2
    # +/-k pairs collapse onto the real transform: double interior modes
    weights = np.full(power.shape, 2.0)
    weights[0] = 1.0
    weights[-1] = 1.0
    k_ang = grid.angular_wavenumbers()
    return [
        float(np.sqrt(grid.period * np.sum(weights * k_ang ** (2 * m) * power)))
        for m in orders
    ]


def sobolev_norm(field: Field, m: int, homogeneous: bool = True) -> float:
    """Homogeneous Sobolev norm (integral of |d^m u/dx^m|^2 over one period)^(1/2),
    computed spectrally as (L * sum_k |2 pi k/L|^(2m) |c_k|^2)^(1/2).

    m = 0 is the L2 norm. homogeneous=False sums the squared seminorms for
    orders 0..m instead.
    """
    if m < 0 or int(m) != m:
        raise ValueError(f"derivative order m must be a nonnegative integer, got {m}")
    n = field.grid.n_points
    if m > n // 4:
        raise ValueError(
            f"m={m} exceeds the resolved-mode bound N/4={n // 4}; "
            "high-order seminorms amplify round-off at the highest modes"
        )
    orders = [m] if homogeneous else range(m + 1)
    seminorms = spectral_seminorms(field.grid, field.values, orders)
    return float(np.sqrt(sum(s * s for s in seminorms)))
