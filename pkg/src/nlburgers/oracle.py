"""Ground-truth curves for the probe-gradient dynamics and the local-Burgers
reduction.

Plus-sign pair system:   F1' = -2 F1 F2,  F2' = -2 F1 F2   (F1 - F2 conserved)
Minus-sign pair system:  F1' = -F1 F2,    F2' = +F1 F2     (F1 + F2 conserved)

Closed forms are the general logistic solutions obtained by partial
fractions; the removable A ~ 0 singularities are branched explicitly, never
epsilon-perturbed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Field, Grid, SignCase

# below this relative size the conserved combination counts as zero and the
# removable-singularity limit formulas take over
A_ZERO_RTOL = 1e-10

# the pair integrator stops once |F1|+|F2| crosses this and reports the last
# time as a divergence bracket
DIVERGENCE_THRESHOLD = 1e8


@dataclass(frozen=True)
class GradientPair:
    """Initial probe gradients (u_x at the two lattice probes) for one sign case."""

    f1_0: float
    f2_0: float
    sign_case: SignCase

    def __post_init__(self):
        if not (np.isfinite(self.f1_0) and np.isfinite(self.f2_0)):
            raise ValueError("initial gradients must be finite")
        if self.sign_case is SignCase.MINUS:
            if self.f1_0 <= 0:
                raise ValueError(
                    "lemma hypothesis violated: F_1(0) > 0 required"
                )
            if self.f2_0 >= 0:
                raise ValueError(
                    "lemma hypothesis violated: F_2(0) < 0 required"
                )


@dataclass(frozen=True)
class OracleCurve:
    """F1(t) samples with the predicted blow-up time (closed form) or the
    divergence bracket (integration); f2_values rides along for convenience."""

    times: np.ndarray
    values: np.ndarray
    t_star: float | None
    f2_values: np.ndarray | None = None


def _is_a_zero(a: float, f1: float, f2: float) -> bool:
    return abs(a) <= A_ZERO_RTOL * max(abs(f1), abs(f2), 1.0)


def plus_blowup_time(f1_0: float, f2_0: float) -> float | None:
    """Singular time of the plus-sign pair system, or None if the forward
    solution stays finite."""
    if f1_0 == 0.0 or f2_0 == 0.0:
        return None  # a vanishing probe freezes the product: fixed point
    a = f1_0 - f2_0
    if _is_a_zero(a, f1_0, f2_0):
        return -1.0 / (2.0 * f1_0) if f1_0 < 0 else None
    ratio = f2_0 / f1_0
    if ratio <= 0:
        return None
    t = np.log(ratio) / (2.0 * a)
    return float(t) if t > 0 else None


def plus_closed_form(pair: GradientPair, t) -> np.ndarray | float:
    """F1(t) for the plus-sign system; accepts scalar or array times
    strictly below the singular time."""
    if pair.sign_case is not SignCase.PLUS:
        raise ValueError("pair was built for the minus case")
    f1, f2 = pair.f1_0, pair.f2_0
    t_arr = np.asarray(t, dtype=float)
    t_star = plus_blowup_time(f1, f2)
    if t_star is not None and np.any(t_arr >= t_star):
        raise ValueError(f"time reaches the singularity at t*={t_star}")
    if f1 == 0.0:
        out = np.zeros_like(t_arr)
        return out if out.ndim else 0.0
    a = f1 - f2
    if _is_a_zero(a, f1, f2):
        out = 1.0 / (1.0 / f1 + 2.0 * t_arr)
    else:
        out = a / (1.0 - (f2 / f1) * np.exp(-2.0 * a * t_arr))
    return out if out.ndim else float(out)


def minus_blowup_time(f1_0: float, f2_0: float) -> float:
    """B, the singular time of the minus-sign pair system. Requires the
    hypothesis signs f1_0 > 0 > f2_0, under which blow-up always occurs."""
    if f1_0 <= 0:
        raise ValueError("lemma hypothesis violated: F_1(0) > 0 required")
    if f2_0 >= 0:
        raise ValueError("lemma hypothesis violated: F_2(0) < 0 required")
    a = f1_0 + f2_0
    if _is_a_zero(a, f1_0, f2_0):
        return 1.0 / f1_0
    return float((np.log(f1_0) - np.log(-f2_0)) / a)


def minus_closed_form(pair: GradientPair, t) -> np.ndarray | float:
    """F1(t) for the minus-sign system (requires f1_0 > 0 > f2_0)."""
    if pair.sign_case is not SignCase.MINUS:
        raise ValueError("pair was built for the plus case")
    f1, f2 = pair.f1_0, pair.f2_0
    t_arr = np.asarray(t, dtype=float)
    t_star = minus_blowup_time(f1, f2)
    if np.any(t_arr >= t_star):
        raise ValueError(f"time reaches the singularity at t*={t_star}")
    a = f1 + f2
    if _is_a_zero(a, f1, f2):
        out = f1 / (1.0 - f1 * t_arr)
    else:
        out = a / (1.0 + (f2 / f1) * np.exp(a * t_arr))
    return out if out.ndim else float(out)


def blowup_time(pair: GradientPair) -> float | None:
    if pair.sign_case is SignCase.PLUS:
        return plus_blowup_time(pair.f1_0, pair.f2_0)
    return minus_blowup_time(pair.f1_0, pair.f2_0)


def closed_form(pair: GradientPair, t) -> np.ndarray | float:
    if pair.sign_case is SignCase.PLUS:
        return plus_closed_form(pair, t)
    return minus_closed_form(pair, t)


def _pair_rates(f1, f2, sign: SignCase):
    # the shared product makes the conserved combination exact in floats
    p = f1 * f2
    if sign is SignCase.PLUS:
        return -2.0 * p, -2.0 * p
    return -p, p


def integrate_pair_batch(f1_0, f2_0, sign: SignCase, dt, n_steps: int):
    """Classical RK4 on a batch of pairs with per-pair step sizes.

    Returns (times, F1, F2) arrays of shape (n_steps+1, ...) broadcast over
    the pair axis. No divergence handling: callers choose horizons below the
    singular times.
    """
    f1 = np.array(f1_0, dtype=float)
    f2 = np.array(f2_0, dtype=float)
    dt = np.asarray(dt, dtype=float)
    out1 = np.empty((n_steps + 1,) + f1.shape)
    out2 = np.empty((n_steps + 1,) + f2.shape)
    times = np.empty((n_steps + 1,) + dt.shape)
    out1[0], out2[0], times[0] = f1, f2, 0.0
    for i in range(n_steps):
        k1a, k1b = _pair_rates(f1, f2, sign)
        k2a, k2b = _pair_rates(f1 + 0.5 * dt * k1a, f2 + 0.5 * dt * k1b, sign)
        k3a, k3b = _pair_rates(f1 + 0.5 * dt * k2a, f2 + 0.5 * dt * k2b, sign)
        k4a, k4b = _pair_rates(f1 + dt * k3a, f2 + dt * k3b, sign)
        f1 = f1 + dt / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a)
        f2 = f2 + dt / 6.0 * (k1b + 2 * k2b + 2 * k3b + k4b)
        out1[i + 1], out2[i + 1] = f1, f2
        times[i + 1] = (i + 1) * dt
    return times, out1, out2


def ode_integrate_pair(pair: GradientPair, dt: float, t_end: float) -> OracleCurve:
    """RK4 integration of the pair system until t_end or until |F1|+|F2|
    crosses the overflow bracket, whichever comes first. When it diverges,
    t_star carries the bracket time."""
    if dt <= 0 or t_end <= 0:
        raise ValueError("dt and t_end must be positive")
    n_steps = int(np.ceil(t_end / dt))
    f1, f2 = pair.f1_0, pair.f2_0
    times = [0.0]
    v1 = [f1]
    v2 = [f2]
    bracket = None
    for i in range(n_steps):
        k1a, k1b = _pair_rates(f1, f2, pair.sign_case)
        k2a, k2b = _pair_rates(f1 + 0.5 * dt * k1a, f2 + 0.5 * dt * k1b, pair.sign_case)
        k3a, k3b = _pair_rates(f1 + 0.5 * dt * k2a, f2 + 0.5 * dt * k2b, pair.sign_case)
        k4a, k4b = _pair_rates(f1 + dt * k3a, f2 + dt * k3b, pair.sign_case)
        f1 = f1 + dt / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a)
        f2 = f2 + dt / 6.0 * (k1b + 2 * k2b + 2 * k3b + k4b)
        t = (i + 1) * dt
        if not (np.isfinite(f1) and np.isfinite(f2)) or abs(f1) + abs(f2) > DIVERGENCE_THRESHOLD:
            bracket = t
            break
        times.append(t)
        v1.append(f1)
        v2.append(f2)
    return OracleCurve(
        times=np.array(times),
        values=np.array(v1),
        t_star=bracket,
        f2_values=np.array(v2),
    )


def closed_form_curve(pair: GradientPair, times) -> OracleCurve:
    """Sample the closed-form F1 (and the conserved-partner F2) at given times."""
    times = np.asarray(times, dtype=float)
    f1_vals = np.asarray(closed_form(pair, times), dtype=float)
    if pair.sign_case is SignCase.PLUS:
        f2_vals = f1_vals - (pair.f1_0 - pair.f2_0)
    else:
        f2_vals = (pair.f1_0 + pair.f2_0) - f1_vals
    return OracleCurve(times=times, values=f1_vals, t_star=blowup_time(pair),
                       f2_values=f2_vals)


def shock_time(u0_prime_min: float) -> float:
    """First characteristic crossing of u_t + 2 u u_x = 0."""
    if u0_prime_min >= 0:
        return float("inf")
    return -1.0 / (2.0 * u0_prime_min)


def burgers_characteristics(u0_eval, grid: Grid, t: float,
                            u0_prime=None) -> tuple[Field, float]:
    """Pre-shock solution of u_t + 2 u u_x = 0 by tracing characteristics:
    solve xi + 2 u0(xi) t = x per node with safeguarded Newton (bisection
    fallback), then u(x, t) = u0(xi).

    u0_eval must accept arbitrary points (periodic closed form). Returns the
    field and the shock time -1/(2 min u0').
    """
    fine = np.linspace(0.0, grid.period, 8 * grid.n_points, endpoint=False)
    if u0_prime is None:
        eps = 1e-6 * grid.period
        u0_prime = lambda x: (u0_eval(x + eps) - u0_eval(x - eps)) / (2 * eps)
    t_shock = shock_time(float(np.min(u0_prime(fine))))
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t >= t_shock:
        raise ValueError(
            f"t={t} is at or beyond the shock time {t_shock}; "
            "only pre-shock solutions are defined"
        )

    x = grid.nodes
    big = float(np.max(np.abs(u0_eval(fine)))) * 2.0 * t + 1e-12
    lo = x - big
    hi = x + big
    xi = x.copy()
    g = xi + 2.0 * u0_eval(xi) * t - x
    for _ in range(100):
        if np.max(np.abs(g)) <= 1e-13 * max(1.0, float(np.max(np.abs(x)))):
            break
        # keep the bracket current (g is increasing in xi pre-shock)
        lo = np.where(g < 0, xi, lo)
        hi = np.where(g > 0, xi, hi)
        gp = 1.0 + 2.0 * u0_prime(xi) * t
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = xi - g / gp
        bad = ~np.isfinite(newton) | (newton <= lo) | (newton >= hi) | (gp <= 0)
        xi = np.where(bad, 0.5 * (lo + hi), newton)
        g = xi + 2.0 * u0_eval(xi) * t - x
    return Field(grid, np.asarray(u0_eval(xi), dtype=float), t), t_shock
