"""Time-series recording and oracle comparison shared by the direct and
Picard solvers.

Rows are always computed with spectral derivatives regardless of the
evolution scheme, so observation error stays separable from scheme error.
Norms are capped at m = 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .core import (DerivMethod, Field, Grid, NonlocalCoupling,
                   derivative_operator, spectral_seminorms)

SOBOLEV_ORDERS = (1, 2, 3)


def probe_indices(grid: Grid, probes) -> np.ndarray:
    """Node indices for probe locations; probes must be grid-aligned."""
    idx = []
    for p in probes:
        q = float(p) / grid.spacing
        if abs(q - round(q)) > 1e-9:
            raise ValueError(
                f"probe x={p} is not grid-aligned (x/dx={q}, dx={grid.spacing})"
            )
        idx.append(int(round(q)) % grid.n_points)
    return np.array(idx, dtype=int)


def zero_lattice_indices(grid: Grid, coupling: NonlocalCoupling) -> np.ndarray | None:
    """Node indices of the lattice {m h} when h is grid-aligned and divides
    the period; None otherwise (the zero-conservation channel is then off)."""
    if not coupling.is_aligned(grid):
        return None
    h = coupling.reduced_shift(grid)
    if h == 0.0:
        return np.array([0], dtype=int)
    k = grid.period / h
    if abs(k - round(k)) > 1e-9:
        return None
    q = coupling.offset(grid)
    return (np.arange(int(round(k))) * q) % grid.n_points


@dataclass(frozen=True)
class RunRecordRow:
    time: float
    max_abs_u: float
    max_abs_ux: float
    argmax_ux_location: float
    sobolev: tuple[float, float, float]
    probe_u: tuple[float, ...]
    probe_ux: tuple[float, ...]
    parity_violation: float | None
    zero_violation: float | None


class Diagnostics:
    """Precomputed observer for one (grid, coupling, probes, parity) setup."""

    def __init__(self, grid: Grid, coupling: NonlocalCoupling, probes=(),
                 parity: str | None = None):
        if parity not in (None, "even", "odd"):
            raise ValueError(f"parity must be None, 'even' or 'odd', got {parity!r}")
        self.grid = grid
        self.coupling = coupling
        self.parity = parity
        self.probe_locations = tuple(float(p) for p in probes)
        self._probe_idx = probe_indices(grid, probes)
        self._zero_idx = zero_lattice_indices(grid, coupling)
        self._deriv = derivative_operator(grid, DerivMethod.SPECTRAL)
        self._mirror = (-np.arange(grid.n_points)) % grid.n_points

    def max_abs_ux(self, values: np.ndarray) -> float:
        return float(np.max(np.abs(self._deriv(values))))

    def row(self, values: np.ndarray, time: float) -> RunRecordRow:
        ux = self._deriv(values)
        j = int(np.argmax(np.abs(ux)))
        # near-overflow states square to inf (and 0*inf to nan) in the norm
        # columns; acceptable readings for a terminal row of a blown-up run
        with np.errstate(over="ignore", invalid="ignore"):
            norms = tuple(spectral_seminorms(self.grid, values, SOBOLEV_ORDERS))
        if self.parity == "even":
            pv = float(np.max(np.abs(values - values[self._mirror])))
        elif self.parity == "odd":
            pv = float(np.max(np.abs(values + values[self._mirror])))
        else:
            pv = None
        zv = (float(np.max(np.abs(values[self._zero_idx])))
              if self._zero_idx is not None else None)
        return RunRecordRow(
            time=float(time),
            max_abs_u=float(np.max(np.abs(values))),
            max_abs_ux=float(np.abs(ux[j])),
            argmax_ux_location=float(self.grid.nodes[j]),
            sobolev=norms,
            probe_u=tuple(float(values[i]) for i in self._probe_idx),
            probe_ux=tuple(float(ux[i]) for i in self._probe_idx),
            parity_violation=pv,
            zero_violation=zv,
        )


def record(field: Field, coupling: NonlocalCoupling, probes=(),
           parity: str | None = None) -> RunRecordRow:
    """One diagnostics row for a single field (standalone convenience)."""
    obs = Diagnostics(field.grid, coupling, probes, parity)
    return obs.row(field.values, field.time)


@dataclass
class RunRecord:
    """Accumulated diagnostics series; all columns share one length."""

    probe_locations: tuple[float, ...] = ()
    rows: list[RunRecordRow] = dc_field(default_factory=list)

    def append(self, row: RunRecordRow) -> None:
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def times(self) -> np.ndarray:
        return np.array([r.time for r in self.rows])

    @property
    def max_abs_u(self) -> np.ndarray:
        return np.array([r.max_abs_u for r in self.rows])

    @property
    def max_abs_ux(self) -> np.ndarray:
        return np.array([r.max_abs_ux for r in self.rows])

    @property
    def argmax_ux_location(self) -> np.ndarray:
        return np.array([r.argmax_ux_location for r in self.rows])

    def sobolev(self, m: int) -> np.ndarray:
        i = SOBOLEV_ORDERS.index(m)
        return np.array([r.sobolev[i] for r in self.rows])

    def probe_u(self, probe_index: int) -> np.ndarray:
        return np.array([r.probe_u[probe_index] for r in self.rows])

    def probe_ux(self, probe_index: int) -> np.ndarray:
        return np.array([r.probe_ux[probe_index] for r in self.rows])

    @property
    def parity_violation(self) -> np.ndarray:
        return np.array([np.nan if r.parity_violation is None else r.parity_violation
                         for r in self.rows])

    @property
    def zero_violation(self) -> np.ndarray:
        return np.array([np.nan if r.zero_violation is None else r.zero_violation
                         for r in self.rows])


@dataclass(frozen=True)
class DeviationReport:
    rel_sup_deviation: float
    t_star_discrepancy: float | None
    n_points: int


def compare_to_oracle(run: RunRecord, curve, probe_index: int,
                      t_estimate: float | None = None) -> DeviationReport:
    """Pointwise-relative sup deviation of a probe u_x series against the
    oracle F1(t), restricted to [0, 0.8 t*] (or the curve's span when no
    t* is predicted), plus the blow-up-time discrepancy when both sides
    carry one."""
    times = run.times
    series = run.probe_ux(probe_index)
    horizon = float(curve.times[-1])
    if curve.t_star is not None:
        horizon = min(horizon, 0.8 * curve.t_star)
    mask = times <= horizon + 1e-15
    if not np.any(mask):
        raise ValueError(
            f"no overlap: record starts at t={times[0] if len(times) else 'nan'}, "
            f"comparison horizon is {horizon}"
        )
    oracle_vals = np.interp(times[mask], curve.times, curve.values)
    rel = np.abs(series[mask] - oracle_vals) / np.maximum(np.abs(oracle_vals), 1e-300)
    disc = None
    if t_estimate is not None and curve.t_star is not None:
        disc = abs(t_estimate - curve.t_star)
    return DeviationReport(
        rel_sup_deviation=float(np.max(rel)),
        t_star_discrepancy=disc,
        n_points=int(np.sum(mask)),
    )
