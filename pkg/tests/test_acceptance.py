"""Acceptance suite: one test per criterion (criterion 5 has three parts).

Every test records a PASS/FAIL line through the ``criterion`` fixture; the
lines are repeated, one per criterion, in the "acceptance criteria" section
of the pytest terminal summary.  Tolerances are the contract values and are
not relaxed here.  Criterion 5b is expected to fail: see the README.
"""
import time

import numpy as np
import pytest

from giantatom import SystemParams, exact_emitter_block, reflection_analytic, solve_scattering
from giantatom.checks import solver_vs_analytic, random_dispersive_params
from giantatom.experiments import analyze, asymmetry, sweep, width_scan
from giantatom.model import wavevector_of_detuning
from giantatom.sweff import verify_sw_projection
from giantatom.wavepacket import WavepacketConfig, propagate

RESONANT = SystemParams(omega_c=20.0, xi=1.0, omega_0=20.0, Omega=20.0, lam=0.2, g=0.5, N=4)
DETUNED = RESONANT.replace(omega_0=18.0)


@pytest.fixture(scope="module")
def draws():
    t0 = time.perf_counter()
    check = solver_vs_analytic(n_draws=1000, seed=2024)
    return check, time.perf_counter() - t0


def test_1_solver_matches_closed_form(draws, criterion):
    check, elapsed = draws
    ok = check.max_deviation <= 1e-10 and check.n_skipped == 0 and elapsed < 10
    criterion("1", "", ok, f"max dev {check.max_deviation:.2e} over {check.n_draws} draws "
              f"({check.n_skipped} skipped), {elapsed:.2f} s")
    assert ok


def test_2_unitarity(draws, criterion):
    check, _ = draws
    ok = check.max_unitarity_residual <= 1e-10
    criterion("2", "", ok, f"max | |r|^2 + |t|^2 - 1 | = {check.max_unitarity_residual:.2e}")
    assert ok


def test_3_odd_n_transparent_and_asymmetric(criterion):
    t0 = time.perf_counter()
    out = []
    ok = True
    for N in (1, 3):
        p = RESONANT.replace(N=N)
        r0 = solve_scattering(exact_emitter_block(p), p, wavevector_of_detuning(p, 0.0)).reflectance
        asym = asymmetry(sweep(p, n_points=2001))
        ok &= r0 <= 1e-12 and asym > 0.05
        out.append(f"N={N}: R(0)={r0:.1e}, asym={asym:.3f}")
    criterion("3", "", ok, ", ".join(out) + f" ({time.perf_counter() - t0:.2f} s)")
    assert ok


def test_4_even_n_peaks_and_widths(criterion):
    s0 = sweep(RESONANT.replace(N=0), n_points=2001)
    f0 = analyze(s0)
    step = s0.deltas[1] - s0.deltas[0]
    peaks = sorted(f0.maxima)
    ok_peaks = len(peaks) == 2 and all(
        abs(d - target) <= step and abs(R - 1) <= 1e-9 for (d, R), target in zip(peaks, (-0.2, 0.2))
    )
    window = analyze(sweep(RESONANT.replace(N=2), n_points=2001, refine=True)).window_width
    fwhm = analyze(sweep(RESONANT.replace(N=4), n_points=2001, refine=True)).central_dip_fwhm
    ok_widths = window is not None and fwhm is not None and window > fwhm
    ok = ok_peaks and ok_widths
    peak_text = ", ".join(f"({d:+.5f}, {R:.10f})" for d, R in peaks)
    criterion("4", "", ok, f"N=0 maxima {peak_text}; N=2 window {window:.4f} > N=4 fwhm {fwhm:.4f}")
    assert ok


def test_5a_valley_widens_with_lambda(criterion):
    scan = width_scan(RESONANT, "lambda", [0.1, 0.2, 0.4], n_points=2001)
    ok = scan.fwhm_strictly_increasing
    criterion("5", "a", ok, "N=4 fwhm vs lambda 0.1,0.2,0.4: " + ", ".join(f"{w:.4f}" for w in scan.fwhm))
    assert ok


def test_5b_valley_insensitive_to_g(criterion):
    scan = width_scan(RESONANT, "g", [0.3, 0.5, 0.7], n_points=2001)
    rel = scan.fwhm_relative_variation
    ok = rel is not None and rel < 0.25
    criterion("5", "b", ok, "N=4 fwhm vs g 0.3,0.5,0.7: " + ", ".join(f"{w:.4f}" for w in scan.fwhm)
              + f"; (max-min)/mean = {rel:.3f} (bound 0.25)")
    assert ok


def test_5c_window_widens_with_lambda(criterion):
    scan = width_scan(RESONANT.replace(N=2), "lambda", [0.1, 0.2, 0.4], n_points=2001)
    ok = scan.window_strictly_increasing
    criterion("5", "c", ok, "N=2 window vs lambda 0.1,0.2,0.4: "
              + ", ".join("none" if w is None else f"{w:.4f}" for w in scan.window))
    assert ok


def test_6_peaks_merge_when_detuned(criterion):
    n_res = analyze(sweep(RESONANT, delta_min=-1.5, delta_max=1.5, n_points=2001)).n_peaks
    n_det = analyze(sweep(DETUNED, delta_min=-1.5, delta_max=1.5, n_points=2001)).n_peaks
    ok = n_res == 2 and n_det == 1
    criterion("6", "", ok, f"maxima above 0.5: resonant {n_res}, omega_0=0.9 omega_c {n_det}")
    assert ok


def _sup_gap(p):
    exact = sweep(p, "exact", -1.5, 1.5, 2001)
    eff = sweep(p, "sw", -1.5, 1.5, 2001)
    return float(np.nanmax(np.abs(exact.values - eff.values)))


def test_7_effective_model_agreement(criterion):
    sup = _sup_gap(DETUNED)
    sup_half = _sup_gap(DETUNED.replace(lam=0.1))
    ratio = sup / sup_half
    ok = sup <= 0.02 and ratio >= 2.0
    criterion("7", "", ok, f"sup|R-R'| = {sup:.5f} (bound 0.02), halving lambda gives {sup_half:.5f}, "
              f"ratio {ratio:.2f} (need >= 2)")
    assert ok


def test_8_projection_oracle(criterion):
    t0 = time.perf_counter()
    devs = [verify_sw_projection(DETUNED, n_phonon_cut=3, n_test_sites=9)]
    rng = np.random.default_rng(8)
    for _ in range(20):
        p = random_dispersive_params(rng)
        devs.append(verify_sw_projection(p, 3, p.N + 3))
    elapsed = time.perf_counter() - t0
    ok = max(devs) <= 1e-12 and elapsed < 30
    criterion("8", "", ok, f"max deviation {max(devs):.1e} over {len(devs)} parameter sets, {elapsed:.2f} s")
    assert ok


def test_9_wavepacket_cross_check(criterion):
    t0 = time.perf_counter()
    cfg = WavepacketConfig.at_detuning(RESONANT, 0.5, sigma_x=40, chain_length=4000)
    res = propagate(exact_emitter_block(RESONANT), RESONANT, cfg)
    R = reflection_analytic(RESONANT, cfg.k0).r_rate
    elapsed = time.perf_counter() - t0
    ok = abs(res.R_wp - R) <= 0.01 and res.norm_drift <= 1e-10 and elapsed <= 120
    criterion("9", "", ok, f"R_wp={res.R_wp:.5f}, R(k0)={R:.5f}, diff {abs(res.R_wp - R):.1e}, "
              f"norm drift {res.norm_drift:.1e}, {elapsed:.1f} s")
    assert ok


def test_10_no_phonon_limit(criterion):
    p = RESONANT.replace(lam=0.0, N=1)
    R = reflection_analytic(p, wavevector_of_detuning(p, 1e-3)).r_rate
    ok = abs(R - 0.5) <= 2e-3
    criterion("10", "", ok, f"R(delta=1e-3) = {R:.6f} (target 0.5 +- 2e-3)")
    assert ok
