"""Named, exactly-reproducible initial conditions plus tabulated input and
validators for the gradient blow-up lemma hypotheses.

Every closed-form entry carries a hand-derived derivative (product rule on
the printed factors); tests cross-check those against finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .core import Field, Grid, NonlocalCoupling, SignCase, combine_operator

# absolute tolerance for "vanishes at a lattice point" checks
ZERO_TOL = 1e-9
# relative slack when matching the grid period against an IC's natural period
PERIOD_RTOL = 1e-9


@dataclass(frozen=True)
class PlusBlowupPoly:
    """Quintic x(x-h)(x-2h)(-1/(2h^2) + 3x/h^3 - 3x^2/(2h^4)) on [0, 2h].

    Vanishes at 0, h, 2h with slope -1 at all three, so the plus-sign
    gradient pair starts at (-1, -1) and the probe gradient follows
    1/(1/u_x(0,0) + 2t). The periodic extension is odd.
    """

    h: float = 1.0

    parity = "odd"

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError(f"h must be positive, got {self.h}")

    @property
    def period(self) -> float:
        return 2.0 * self.h

    def _reduce(self, x):
        return np.asarray(x, dtype=float) % self.period

    def __call__(self, x):
        h = self.h
        x = self._reduce(x)
        p = x * (x - h) * (x - 2 * h)
        q = -1.0 / (2 * h**2) + 3.0 * x / h**3 - 1.5 * x**2 / h**4
        return p * q

    def derivative(self, x):
        h = self.h
        x = self._reduce(x)
        p = x * (x - h) * (x - 2 * h)
        dp = 3 * x**2 - 6 * h * x + 2 * h**2
        q = -1.0 / (2 * h**2) + 3.0 * x / h**3 - 1.5 * x**2 / h**4
        dq = 3.0 / h**3 - 3.0 * x / h**4
        return dp * q + p * dq


@dataclass(frozen=True)
class MinusBlowupRational:
    """Even rational function on [-4, 4] with h = 4/3, period 8 pinned.

    -16 (x-4)^2 (x+4)^2 x^2 (3x-8)(3x+8)(3x+4)(3x-4) / (3375 (112+153x^2)).
    Vanishes at every multiple of 4/3 with flat points at 0 and +/-4, and has
    u'(4/3) = 4194304/820125 > 0 > u'(8/3) = -4194304/820125, the sign pattern
    the minus-case gradient system needs to blow up.
    """

    parity = "even"
    h = 4.0 / 3.0

    @property
    def period(self) -> float:
        return 8.0

    def _reduce(self, x):
        # map onto the fundamental domain [-4, 4)
        return (np.asarray(x, dtype=float) + 4.0) % 8.0 - 4.0

    def __call__(self, x):
        x = self._reduce(x)
        num = (16.0 * (x - 4) ** 2 * (x + 4) ** 2 * x**2
               * (3 * x - 8) * (3 * x + 8) * (3 * x + 4) * (3 * x - 4))
        den = 3375.0 * (112.0 + 153.0 * x**2)
        return -num / den

    def derivative(self, x):
        x = self._reduce(x)
        s = x**2
        # numerator polynomial in s = x^2: P = s (s-16)^2 (9s-64)(9s-16)
        p = s * (s - 16) ** 2 * (9 * s - 64) * (9 * s - 16)
        dp_ds = ((s - 16) ** 2 * (9 * s - 64) * (9 * s - 16)
                 + 2 * s * (s - 16) * (9 * s - 64) * (9 * s - 16)
                 + 9 * s * (s - 16) ** 2 * (9 * s - 16)
                 + 9 * s * (s - 16) ** 2 * (9 * s - 64))
        dp = 2 * x * dp_ds
        den = 112.0 + 153.0 * s
        dden = 306.0 * x
        return -(16.0 / 3375.0) * (dp * den - p * dden) / den**2


@dataclass(frozen=True)
class StationaryMinusSine:
    """sin(pi k x / h): the minus-sign coupling with shift h annihilates it,
    so it is a stationary solution. Natural period 2h/k."""

    k: int = 1
    h: float = 1.0

    parity = "odd"

    def __post_init__(self):
        if self.k < 1 or int(self.k) != self.k:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        if self.h <= 0:
            raise ValueError(f"h must be positive, got {self.h}")

    @property
    def period(self) -> float:
        return 2.0 * self.h / self.k

    def __call__(self, x):
        return np.sin(np.pi * self.k * np.asarray(x, dtype=float) / self.h)

    def derivative(self, x):
        w = np.pi * self.k / self.h
        return w * np.cos(w * np.asarray(x, dtype=float))


@dataclass(frozen=True)
class StationaryPlusSine:
    """sin(pi (k - 1/2) x / h): the plus-sign coupling with shift h
    annihilates it. Natural period 4h/(2k-1)."""

    k: int = 1
    h: float = 1.0

    parity = "odd"

    def __post_init__(self):
        if self.k < 1 or int(self.k) != self.k:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        if self.h <= 0:
            raise ValueError(f"h must be positive, got {self.h}")

    @property
    def period(self) -> float:
        return 4.0 * self.h / (2 * self.k - 1)

    def __call__(self, x):
        w = np.pi * (self.k - 0.5) / self.h
        return np.sin(w * np.asarray(x, dtype=float))

    def derivative(self, x):
        w = np.pi * (self.k - 0.5) / self.h
        return w * np.cos(w * np.asarray(x, dtype=float))


@dataclass(frozen=True)
class PlainSine:
    """amplitude * sin(2 pi x / L); with L = 2 and amplitude 1 this is the
    sin(pi x) reference profile. amplitude -1 puts the falling zero (where
    the gradient catastrophe collapses to as h -> 0) at the origin."""

    L: float = 2.0
    amplitude: float = 1.0

    parity = "odd"

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError(f"L must be positive, got {self.L}")
        if self.amplitude == 0:
            raise ValueError("amplitude must be nonzero")

    @property
    def period(self) -> float:
        return self.L

    def __call__(self, x):
        return self.amplitude * np.sin(2.0 * np.pi * np.asarray(x, dtype=float) / self.L)

    def derivative(self, x):
        w = 2.0 * np.pi / self.L
        return self.amplitude * w * np.cos(w * np.asarray(x, dtype=float))


@dataclass(frozen=True)
class Tabulated:
    """Point values from a plain-text file: one decimal float per line,
    exactly N lines, no header. Interpolation is refused so provenance
    stays exact."""

    path: str

    parity = None
    period = None

    def load(self, grid: Grid) -> np.ndarray:
        lines = Path(self.path).read_text().strip().splitlines()
        if len(lines) != grid.n_points:
            raise ValueError(
                f"tabulated file {self.path} has {len(lines)} values, "
                f"grid wants {grid.n_points}; interpolation is not supported"
            )
        return np.array([float(s) for s in lines])


InitialCondition = Union[
    PlusBlowupPoly, MinusBlowupRational, StationaryMinusSine,
    StationaryPlusSine, PlainSine, Tabulated,
]


def evaluate_ic(ic: InitialCondition, grid: Grid) -> Field:
    """Sample the closed-form (or tabulated) initial profile at the grid
    nodes, at t = 0. The grid period must be an integer multiple of the
    IC's natural period."""
    if isinstance(ic, Tabulated):
        return Field(grid, ic.load(grid), 0.0)
    ratio = grid.period / ic.period
    if abs(ratio - round(ratio)) > PERIOD_RTOL * max(1.0, ratio) or round(ratio) < 1:
        raise ValueError(
            f"grid period {grid.period} is not an integer multiple of the "
            f"initial condition's natural period {ic.period}"
        )
    return Field.sample(grid, ic)


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    ok: bool


@dataclass(frozen=True)
class ValidationReport:
    """Numeric hypothesis checks for the blow-up lemma matching the coupling
    sign, plus parity/stationarity classification of the sampled profile."""

    lemma: str
    checks: tuple[Check, ...]
    parity: str | None
    stationary: bool
    passed: bool

    def summary(self) -> str:
        lines = [f"lemma: {self.lemma}  ->  {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            lines.append(f"  [{'ok' if c.ok else 'FAIL'}] {c.name} = {c.value:.6g}")
        lines.append(f"  parity: {self.parity}, stationary: {self.stationary}")
        return "\n".join(lines)


def _classify_parity(values: np.ndarray) -> str | None:
    scale = max(1.0, float(np.max(np.abs(values))))
    mirrored = values[(-np.arange(values.size)) % values.size]
    if float(np.max(np.abs(values - mirrored))) <= ZERO_TOL * scale:
        return "even"
    if float(np.max(np.abs(values + mirrored))) <= ZERO_TOL * scale:
        return "odd"
    return None


def _slope_at(ic, field: Field, x: float) -> float:
    if hasattr(ic, "derivative"):
        return float(ic.derivative(x))
    # tabulated input: spectral derivative sampled at the nearest node
    from .core import derivative

    idx = int(round(x / field.grid.spacing)) % field.grid.n_points
    return float(derivative(field).values[idx])


def _value_at(ic, field: Field, x: float) -> float:
    if isinstance(ic, Tabulated):
        idx = int(round(x / field.grid.spacing)) % field.grid.n_points
        return float(field.values[idx])
    return float(ic(x))


def validate_assumptions(ic: InitialCondition, coupling: NonlocalCoupling,
                         grid: Grid) -> ValidationReport:
    """Check the gradient blow-up hypotheses for the coupling's sign case.

    Plus sign: period 2h, zeros at 0 and h, both slopes negative. Minus
    sign: period 6h, even, zeros at every kh, flat at 3kh, slope positive
    at h, negative at 2h, and the blow-up time B positive. Always returns
    a report; nothing raises.
    """
    h = coupling.shift
    field = evaluate_ic(ic, grid)
    checks: list[Check] = []

    if coupling.sign is SignCase.PLUS:
        lemma = "plus-case gradient blow-up"
        checks.append(Check("period / (2h)", grid.period / (2 * h),
                            abs(grid.period - 2 * h) <= PERIOD_RTOL * grid.period))
        for m in (0, 1):
            v = _value_at(ic, field, m * h)
            checks.append(Check(f"u0({m}h)", v, abs(v) <= ZERO_TOL))
        for m in (0, 1):
            s = _slope_at(ic, field, m * h)
            checks.append(Check(f"u0'({m}h)", s, s < 0))
    else:
        lemma = "minus-case gradient blow-up"
        checks.append(Check("period / (6h)", grid.period / (6 * h),
                            abs(grid.period - 6 * h) <= PERIOD_RTOL * grid.period))
        parity_now = _classify_parity(field.values)
        checks.append(Check("evenness (0=even)", 0.0 if parity_now == "even" else 1.0,
                            parity_now == "even"))
        for m in range(6):
            v = _value_at(ic, field, m * h)
            checks.append(Check(f"u0({m}h)", v, abs(v) <= ZERO_TOL))
        for m in (0, 3):
            s = _slope_at(ic, field, m * h)
            checks.append(Check(f"u0'({m}h)", s, abs(s) <= ZERO_TOL))
        f1 = _slope_at(ic, field, h)
        f2 = _slope_at(ic, field, 2 * h)
        checks.append(Check("F1(0) = u0'(h)", f1, f1 > 0))
        checks.append(Check("F2(0) = u0'(2h)", f2, f2 < 0))
        if f1 > 0 and f2 < 0:
            from .oracle import minus_blowup_time

            b = minus_blowup_time(f1, f2)
            checks.append(Check("B", b, b > 0))
        else:
            checks.append(Check("B", float("nan"), False))

    combine = combine_operator(grid, coupling)
    velocity = combine(field.values)
    scale = max(1.0, float(np.max(np.abs(field.values))))
    stationary = float(np.max(np.abs(velocity))) <= 1e-10 * scale

    return ValidationReport(
        lemma=lemma,
        checks=tuple(checks),
        parity=_classify_parity(field.values),
        stationary=stationary,
        passed=all(c.ok for c in checks),
    )
