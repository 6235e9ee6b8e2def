"""Acceptance suite: every exit criterion at its stated tolerance, one
pass/fail line each (run with -s to see them stream).

The reference blow-up runs use a detection factor sized to what the pinned
resolutions can actually observe: the gradient spike of the kinked quintic
profile narrows below one N=512 cell once it has grown about 14-fold, after
which the grid-visible gradient saturates, so thresholds in the hundreds or
the 1e3 default can never fire there. The probe-trace check below carries
the same analysis inline and is expected to fail at its nominal tolerance.
"""

import numpy as np
import pytest

from nlburgers import (Field, GradientPair, MinusBlowupRational,
                       NonlocalCoupling, PlainSine, PlusBlowupPoly, Scheme,
                       ShiftMethod, SignCase, SolverConfig,
                       StationaryMinusSine, StationaryPlusSine,
                       burgers_characteristics, evaluate_ic, make_grid,
                       minus_blowup_time, minus_closed_form, picard_solve,
                       plus_closed_form, simulate, validate_assumptions)
from nlburgers.oracle import integrate_pair_batch, plus_blowup_time


def check(name: str, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def plus_reference_run():
    grid = make_grid(512, 2.0)
    config = SolverConfig(dt=1e-4, t_end=1.0, scheme=Scheme.RK4_SPECTRAL,
                          record_every=10, probes=(0.0, 1.0),
                          blowup_gradient_factor=4.0)
    return simulate(PlusBlowupPoly(h=1.0), NonlocalCoupling(SignCase.PLUS, 1.0),
                    grid, config)


@pytest.fixture(scope="module")
def minus_reference_run():
    grid = make_grid(768, 8.0)
    config = SolverConfig(dt=1e-4, t_end=1.0, scheme=Scheme.RK4_SPECTRAL,
                          record_every=10, probes=(4 / 3, 8 / 3),
                          blowup_gradient_factor=8.0)
    return simulate(MinusBlowupRational(), NonlocalCoupling(SignCase.MINUS, 4 / 3),
                    grid, config)


def test_plus_case_blowup_time(plus_reference_run):
    v = plus_reference_run.verdict
    ok = v.blew_up and v.t_estimate is not None and abs(v.t_estimate - 0.5) <= 0.05
    check("plus-case blow-up time", ok,
          f"t_estimate={v.t_estimate} vs t*=0.5 (tolerance 0.05), "
          f"detected at t={v.t_detect}")


def test_plus_case_probe_tracks_oracle(plus_reference_run):
    # The periodic extension of the quintic profile is C1 only: its second
    # derivative jumps by 30/h at the lattice and the jump grows like the
    # squared probe gradient, so the spike narrows below one N=512 cell well
    # before t = 0.4 and no read of the sampled state recovers u_x(0,t) to 2%
    # there (the sampled field itself is accurate to ~1e-4; measured read-off
    # floor at t=0.4 is ~10% for value-based stencils, ~14% spectrally, and
    # scales like 1/N). Kept at the stated tolerance; expected to fail.
    rec = plus_reference_run.record
    mask = rec.times <= 0.4 + 1e-12
    oracle = 1.0 / (-1.0 + 2.0 * rec.times[mask])
    rel = np.max(np.abs(rec.probe_ux(0)[mask] - oracle) / np.abs(oracle))
    check("plus-case probe vs closed form on [0, 0.4]", rel <= 0.02,
          f"max relative deviation {rel:.4f} (tolerance 0.02 at N=512; the C1 "
          "kink makes ~0.1 the information floor of any N=512 read at t=0.4, "
          "so this check documents a known limit; see this test's comment and "
          "the README)")


def test_minus_case_blowup_time(minus_reference_run):
    ic = MinusBlowupRational()
    f1 = float(ic.derivative(4 / 3))
    f2 = float(ic.derivative(8 / 3))
    # independent finite-difference cross-check of the closed-form slopes
    eps = 1e-7
    fd1 = (ic(4 / 3 + eps) - ic(4 / 3 - eps)) / (2 * eps)
    assert f1 == pytest.approx(fd1, rel=1e-5)
    b = minus_blowup_time(f1, f2)

    report = validate_assumptions(ic, NonlocalCoupling(SignCase.MINUS, 4 / 3),
                                  make_grid(768, 8.0))
    v = minus_reference_run.verdict
    ok = (report.passed and v.blew_up and v.t_estimate is not None
          and abs(v.t_estimate - b) <= 0.1 * b)
    check("minus-case blow-up time", ok,
          f"hypotheses passed={report.passed}, F1(0)={f1:.6f}, F2(0)={f2:.6f}, "
          f"B={b:.6f}, t_estimate={v.t_estimate}")


def test_global_regularity():
    cases = [
        ("stationary minus sine", StationaryMinusSine(k=1, h=1.0),
         NonlocalCoupling(SignCase.MINUS, 1.0), make_grid(256, 2.0)),
        ("stationary plus sine", StationaryPlusSine(k=1, h=0.5),
         NonlocalCoupling(SignCase.PLUS, 0.5), make_grid(256, 2.0)),
        ("minus-sign full-period freeze", PlainSine(L=2.0),
         NonlocalCoupling(SignCase.MINUS, 2.0), make_grid(256, 2.0)),
    ]
    details = []
    ok = True
    for name, ic, coupling, grid in cases:
        config = SolverConfig(dt=1e-3, t_end=1.0, record_every=100)
        res = simulate(ic, coupling, grid, config)
        dev = float(np.max(np.abs(res.final.values - evaluate_ic(ic, grid).values)))
        good = (not res.verdict.blew_up) and dev <= 1e-6 and res.final.time >= 1.0
        ok = ok and good
        details.append(f"{name}: dev={dev:.2e}")
    check("global regularity to t=1", ok, "; ".join(details))


def test_zero_and_parity_conservation(plus_reference_run, minus_reference_run):
    details = []
    ok = True
    for name, res in (("plus quintic", plus_reference_run),
                      ("minus rational", minus_reference_run)):
        rec = res.record
        mask = rec.times <= 0.8 * res.verdict.t_detect
        zero_max = float(np.max(rec.zero_violation[mask]))
        parity_max = float(np.max(rec.parity_violation[mask]))
        good = zero_max <= 1e-6 and parity_max <= 1e-6
        ok = ok and good
        details.append(f"{name}: zero={zero_max:.2e}, parity={parity_max:.2e}")
    check("zero and parity conservation to 0.8 t_detect", ok, "; ".join(details))


def test_burgers_reduction():
    # period equal to the shift collapses the plus coupling to 2u
    grid = make_grid(512, 2.0)
    ic = PlainSine(L=2.0)
    coupling = NonlocalCoupling(SignCase.PLUS, 2.0)
    t_shock = 1.0 / (2.0 * np.pi)

    t_target = 0.8 * t_shock
    n_steps = int(round(t_target / 1e-4))
    config = SolverConfig(dt=t_target / n_steps, t_end=t_target,
                          record_every=100, blowup_gradient_factor=1e9)
    res = simulate(ic, coupling, grid, config)
    oracle_field, t_shock_oracle = burgers_characteristics(
        ic, grid, res.final.time, u0_prime=ic.derivative)
    sup_err = float(np.max(np.abs(res.final.values - oracle_field.values)))

    config2 = SolverConfig(dt=1e-4, t_end=0.5, record_every=10,
                           blowup_gradient_factor=10.0)
    res2 = simulate(ic, coupling, grid, config2)
    est = res2.verdict.t_estimate
    ok = (sup_err <= 1e-3 and est is not None
          and abs(est - t_shock) <= 0.1 * t_shock
          and t_shock_oracle == pytest.approx(t_shock, rel=1e-12))
    check("local-Burgers reduction", ok,
          f"sup err at 0.8 t_shock = {sup_err:.2e} (<=1e-3), "
          f"shock-time estimate {est} vs {t_shock:.5f}")


def test_picard_vs_direct():
    grid = make_grid(256, 2.0)
    ic = PlusBlowupPoly(h=1.0)
    coupling = NonlocalCoupling(SignCase.PLUS, 1.0)
    trace, trajectory = picard_solve(ic, coupling, grid, t_end=0.05, dt=1e-3,
                                     tolerance=1e-8, max_iters=10)
    direct = simulate(ic, coupling, grid,
                      SolverConfig(dt=1e-4, t_end=0.05, record_every=100))
    sup_err = float(np.max(np.abs(trajectory.final_field().values
                                  - direct.final.values)))
    ok = trace.converged and len(trace.sup_deltas) <= 10 and sup_err <= 1e-4
    check("fixed-point iteration vs direct solver", ok,
          f"converged in {len(trace.sup_deltas)} iterations "
          f"(deltas {[f'{d:.1e}' for d in trace.sup_deltas]}), sup err {sup_err:.2e}")


def test_oracle_property_suite():
    rng = np.random.default_rng(2024)
    n_pairs, n_steps = 100, 20000
    details = []
    ok = True

    f1 = -rng.uniform(0.3, 2.5, n_pairs)
    f2 = -rng.uniform(0.3, 2.5, n_pairs)
    t_stars = np.array([plus_blowup_time(a, b) for a, b in zip(f1, f2)])
    dts = 0.9 * t_stars / n_steps
    times, g1, g2 = integrate_pair_batch(f1, f2, SignCase.PLUS, dts, n_steps)
    worst = 0.0
    for j in range(n_pairs):
        pair = GradientPair(f1[j], f2[j], SignCase.PLUS)
        worst = max(worst, float(np.max(np.abs(
            plus_closed_form(pair, times[:, j]) - g1[:, j]))))
    drift = float(np.max(np.abs((g1 - g2) - (f1 - f2))))
    ok = ok and worst <= 1e-6 and drift <= 1e-8
    details.append(f"plus: closed-vs-RK4 {worst:.1e}, drift {drift:.1e}")

    f1 = rng.uniform(0.3, 2.5, n_pairs)
    f2 = -rng.uniform(0.3, 2.5, n_pairs)
    t_stars = np.array([minus_blowup_time(a, b) for a, b in zip(f1, f2)])
    dts = 0.9 * t_stars / n_steps
    times, g1, g2 = integrate_pair_batch(f1, f2, SignCase.MINUS, dts, n_steps)
    worst = 0.0
    for j in range(n_pairs):
        pair = GradientPair(f1[j], f2[j], SignCase.MINUS)
        worst = max(worst, float(np.max(np.abs(
            minus_closed_form(pair, times[:, j]) - g1[:, j]))))
    drift = float(np.max(np.abs((g1 + g2) - (f1 + f2))))
    ok = ok and worst <= 1e-6 and drift <= 1e-8
    details.append(f"minus: closed-vs-RK4 {worst:.1e}, drift {drift:.1e}")

    check("oracle property suite (100 random pairs per sign)", ok,
          "; ".join(details))


def test_operator_identities():
    from nlburgers import shift_combine

    rng = np.random.default_rng(7)
    grid = make_grid(64, 1.0)
    worst_plus = worst_minus = 0.0
    for _ in range(1000):
        coeff = np.zeros(33, dtype=complex)
        k = np.arange(1, 9)
        coeff[1:9] = (rng.standard_normal(8) + 1j * rng.standard_normal(8)) / (1 + k**2)
        values = np.fft.irfft(coeff, n=64) * 64
        values /= max(1.0, np.max(np.abs(values)))
        f = Field(grid, values)
        h = float(rng.uniform(0, 1.0))
        a = shift_combine(f, NonlocalCoupling(SignCase.PLUS, h),
                          ShiftMethod.SPECTRAL_PHASE).values
        b = shift_combine(f, NonlocalCoupling(SignCase.PLUS, 1.0 - h),
                          ShiftMethod.SPECTRAL_PHASE).values
        worst_plus = max(worst_plus, float(np.max(np.abs(a - b))))
        c = shift_combine(f, NonlocalCoupling(SignCase.MINUS, h),
                          ShiftMethod.SPECTRAL_PHASE).values
        d = shift_combine(f, NonlocalCoupling(SignCase.MINUS, 1.0 - h),
                          ShiftMethod.SPECTRAL_PHASE).values
        worst_minus = max(worst_minus, float(np.max(np.abs(c + d))))

    # full-solution agreement for the plus sign under h <-> L-h
    grid2 = make_grid(256, 2.0)
    finals = []
    for h in (0.25, 1.75):
        config = SolverConfig(dt=1e-4, t_end=0.25, record_every=250,
                              blowup_gradient_factor=1e9,
                              shift_method=ShiftMethod.SPECTRAL_PHASE)
        res = simulate(PlainSine(L=2.0), NonlocalCoupling(SignCase.PLUS, h),
                       grid2, config, snapshot_every=500)
        finals.append(res.snapshots)
    sol_dev = max(float(np.max(np.abs(v1 - v2)))
                  for (_, v1), (_, v2) in zip(*finals))

    ok = worst_plus <= 1e-12 and worst_minus <= 1e-12 and sol_dev <= 1e-8
    check("shift-reflection operator identities", ok,
          f"plus {worst_plus:.1e}, minus {worst_minus:.1e} (<=1e-12 on 1000 "
          f"fields); plus full-solution dev {sol_dev:.1e} (<=1e-8)")


def test_h_sweep_blowup_location_trend():
    # falling-zero-at-origin orientation of the sine, matching the reference
    # figures the trend reproduces
    grid = make_grid(512, 2.0)
    ic = PlainSine(L=2.0, amplitude=-1.0)
    distances = []
    for h in (2 / 8, 2 / 16, 2 / 32):
        config = SolverConfig(dt=1e-4, t_end=1.0, record_every=10,
                              blowup_gradient_factor=8.0)
        res = simulate(ic, NonlocalCoupling(SignCase.PLUS, h), grid, config)
        assert res.verdict.blew_up, f"h={h}: expected blow-up"
        loc = res.verdict.location
        distances.append(min(loc, 2.0 - loc))
    ok = distances[0] > distances[1] > distances[2]
    check("h-sweep blow-up location trend", ok,
          f"distances from origin {[f'{d:.4f}' for d in distances]} "
          "for h = L/8, L/16, L/32 (strictly decreasing)")
