import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from giantatom import SystemParams
from giantatom.errors import RangeError, ValidationError
from giantatom.experiments import (
    Spectrum,
    analyze,
    asymmetry,
    emitter_block,
    parity_classification,
    sweep,
    width_scan,
)


def lorentz_dip(x, width, depth=0.8, top=0.9):
    hw = width / 2
    return top - depth * hw**2 / (x**2 + hw**2)


def test_sweep_grid_and_meta(resonant):
    s = sweep(resonant, n_points=11)
    np.testing.assert_allclose(s.deltas, np.linspace(-1, 1, 11))
    assert s.meta["solver"] == "exact" and s.meta["n_points"] == 11
    assert s.meta["params"]["N"] == 4
    assert "timestamp" in s.meta
    assert np.all((s.values >= 0) & (s.values <= 1 + 1e-12))


def test_odd_n_spectrum(resonant):
    s = sweep(resonant.replace(N=1), n_points=2001)
    assert s.at(0.0) <= 1e-12
    assert asymmetry(s) > 0.05


def test_small_atom_two_unit_peaks(resonant):
    s = sweep(resonant.replace(N=0), n_points=2001)
    f = analyze(s)
    assert f.n_peaks == 2
    step = s.deltas[1] - s.deltas[0]
    for (d, R), target in zip(sorted(f.maxima), (-0.2, 0.2)):
        assert abs(d - target) <= step
        assert R == pytest.approx(1.0, abs=1e-9)


def test_decoupled_spectrum_is_zero(resonant):
    s = sweep(resonant.replace(g=0.0), n_points=201)
    assert not s.skipped
    assert np.all(s.values == 0)


def test_out_of_band_points_skipped(resonant):
    s = sweep(resonant, delta_min=1.5, delta_max=2.5, n_points=11)
    reasons = dict(s.skipped)
    # delta = 2 is the band edge k = pi, excluded like the rest of the tail
    assert set(reasons) == {5, 6, 7, 8, 9, 10}
    assert all(r == "out of band" for r in reasons.values())
    assert np.all(np.isnan(s.values[5:]))
    assert s.valid()[0].size == 5


def test_all_out_of_band_is_error(resonant):
    with pytest.raises(RangeError):
        sweep(resonant, delta_min=2.5, delta_max=3.0, n_points=5)


@pytest.mark.parametrize("kw", [dict(n_points=1), dict(delta_min=0.5, delta_max=0.5), dict(block_kind="other")])
def test_sweep_argument_checks(resonant, kw):
    with pytest.raises(ValidationError):
        sweep(resonant, **kw)


def test_block_kind_dispatch(detuned):
    assert emitter_block(detuned, "sw").h_internal[0, 0].real == pytest.approx(20.02)
    assert emitter_block(detuned, "exact").h_internal[0, 1] == detuned.lam


def test_spectrum_rejects_unordered_axis(resonant):
    with pytest.raises(ValidationError):
        Spectrum([0.0, 0.0, 1.0], [0.1, 0.2, 0.3], resonant)
    with pytest.raises(ValidationError):
        Spectrum([0.0, 1.0], [0.1], resonant)


def test_refinement_resolves_dark_lines(resonant):
    p = resonant.replace(N=2, lam=0.1)
    coarse = sweep(p, n_points=2001)
    fine = sweep(p, n_points=2001, refine=True)
    assert fine.deltas.size > coarse.deltas.size
    assert np.nanmax(fine.values) > 0.99
    assert np.nanmax(coarse.values) < 0.9


def lorentz_half_depth_width(width, edge, depth=0.8, top=0.9):
    """Exact full width at half depth when the shoulders are the grid edges."""
    hw = width / 2
    shoulder = lorentz_dip(edge, width, depth, top)
    bottom = top - depth
    level = bottom + (shoulder - bottom) / 2
    return 2 * hw * math.sqrt(depth / (top - level) - 1)


@pytest.mark.parametrize("width", [0.05, 0.2, 0.5])
def test_lorentzian_fwhm_recovered(resonant, width):
    # 200 points per width
    x = np.linspace(-1, 1, int(200 * 2 / width) + 1)
    f = analyze(Spectrum(x, lorentz_dip(x, width), resonant))
    assert f.central_dip_fwhm == pytest.approx(lorentz_half_depth_width(width, 1.0), rel=0.01)
    assert f.shoulder_separation == pytest.approx(2.0)


def test_dip_between_peaks_uses_lower_shoulder(resonant):
    x = np.linspace(-1, 1, 4001)
    y = np.where(x < 0, 0.6, 1.0) * np.exp(-((np.abs(x) - 0.5) ** 2) / 0.02)
    f = analyze(Spectrum(x, y, resonant))
    assert f.shoulder_separation == pytest.approx(1.0, abs=1e-3)
    # half of the lower shoulder, 0.3, is crossed on both flanks
    half = 0.5 - math.sqrt(-0.02 * math.log(0.3 / 0.6))
    right = 0.5 - math.sqrt(-0.02 * math.log(0.3))
    assert f.central_dip_fwhm == pytest.approx(half + right, rel=1e-3)
    assert f.n_peaks == 2


def test_monotone_spectrum_has_no_features(resonant):
    x = np.linspace(-1, 1, 201)
    f = analyze(Spectrum(x, 0.3 + 0.3 * x, resonant))
    assert f.n_peaks == 0 and f.central_dip_fwhm is None
    # R(0) = 0.3 <= 0.5 but the region reaches the left edge: not closed
    assert f.window_width is None


def test_peak_floor(resonant):
    x = np.linspace(-1, 1, 401)
    y = 0.4 * np.exp(-(x**2) / 0.01)
    assert analyze(Spectrum(x, y, resonant)).n_peaks == 0
    assert analyze(Spectrum(x, y, resonant), floor=0.1).n_peaks == 1


def test_parabolic_peak_position(resonant):
    x = np.linspace(-1, 1, 101)
    y = 1 - (x - 0.0123) ** 2
    (d, R), = analyze(Spectrum(x, y, resonant)).maxima
    assert d == pytest.approx(0.0123, abs=1e-12)
    assert R == pytest.approx(1.0, abs=1e-12)


def test_analyze_needs_points(resonant):
    with pytest.raises(ValidationError):
        analyze(Spectrum([0.0, 1.0, 2.0], [0.0, 0.0, 0.0], resonant))


@pytest.mark.parametrize("N,attr", [(4, "central_dip_fwhm"), (2, "window_width")])
def test_widths_grid_independent(resonant, N, attr):
    p = resonant.replace(N=N)
    a = getattr(analyze(sweep(p, n_points=2001, refine=True)), attr)
    b = getattr(analyze(sweep(p, n_points=4001, refine=True)), attr)
    assert abs(a - b) / a < 0.01


def test_valley_widens_with_phonon_coupling(resonant):
    scan = width_scan(resonant, "lambda", [0.1, 0.2, 0.4])
    assert scan.fwhm_strictly_increasing
    assert not scan.errors


def test_window_widens_with_phonon_coupling(resonant):
    scan = width_scan(resonant.replace(N=2), "lambda", [0.1, 0.2, 0.4])
    assert scan.window_strictly_increasing


def test_width_scan_records_errors(resonant):
    scan = width_scan(resonant, "g", [0.5, -1.0])
    assert scan.rows[1] == (-1.0, None)
    assert -1.0 in scan.errors
    assert scan.fwhm_relative_variation is None
    assert not scan.fwhm_strictly_increasing


def test_width_scan_rejects_unknown_axis(resonant):
    with pytest.raises(ValidationError):
        width_scan(resonant, "N", [1, 2])


def test_relative_variation_definition(resonant):
    scan = width_scan(resonant, "g", [0.3, 0.5, 0.7], n_points=801)
    w = scan.fwhm
    assert scan.fwhm_relative_variation == pytest.approx((max(w) - min(w)) / np.mean(w))


def test_parity_classes(resonant):
    rows = parity_classification(resonant, range(0, 9))
    assert [r.klass for r in rows] == [
        "valley", "odd", "window", "odd", "valley", "odd", "window", "odd", "valley"
    ]
    by_n = {r.N: r for r in rows}
    assert by_n[1].r_at_zero <= 1e-12 and by_n[3].r_at_zero <= 1e-12
    assert by_n[2].width > by_n[4].width


@pytest.mark.parametrize("scale", [0.9, 1.1])
def test_parity_stable_under_coupling_change(resonant, scale):
    base = [r.klass for r in parity_classification(resonant, range(7), n_points=801)]
    moved = [r.klass for r in parity_classification(resonant.replace(g=scale * resonant.g), range(7), n_points=801)]
    assert moved == base


def test_parity_needs_resonance(detuned):
    with pytest.raises(ValidationError):
        parity_classification(detuned, [0, 1])


@settings(max_examples=30, deadline=None)
@given(
    g=st.floats(0.0, 1.0),
    lam=st.floats(0.0, 0.5),
    N=st.integers(0, 8),
    omega_0=st.floats(19.0, 21.0),
)
def test_spectrum_values_bounded(g, lam, N, omega_0):
    s = sweep(SystemParams(g=g, lam=lam, N=N, omega_0=omega_0), n_points=41)
    ok = np.isfinite(s.values)
    assert np.all((s.values[ok] >= 0) & (s.values[ok] <= 1 + 1e-12))
    assert {i for i, _ in s.skipped} == set(np.flatnonzero(~ok))
