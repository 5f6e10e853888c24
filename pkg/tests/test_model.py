import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from giantatom import (
    EmitterBlock,
    SystemParams,
    dispersion,
    exact_emitter_block,
    q_roots,
    scattering_point,
    wavevector_of_energy,
)
from giantatom.errors import DomainError, OutOfBandError, ValidationError
from giantatom.model import single_excitation_hamiltonian
from scipy.optimize import brentq


@pytest.mark.parametrize(
    "k, expected",
    [(math.pi / 2, 20.0), (2 * math.pi / 3, 21.0)],
)
def test_dispersion_values(resonant, k, expected):
    assert dispersion(resonant, k) == pytest.approx(expected, abs=1e-12)


def test_dispersion_band_edge_limit(resonant):
    assert dispersion(resonant, 1e-6) == pytest.approx(18.0, abs=1e-10)


@pytest.mark.parametrize("k", [0.0, math.pi, -0.1, 3.5])
def test_dispersion_rejects_closed_interval(resonant, k):
    with pytest.raises(DomainError, match=r"\(0, pi\)"):
        dispersion(resonant, k)


def test_wavevector_of_energy(resonant):
    assert wavevector_of_energy(resonant, 20.0) == pytest.approx(math.pi / 2, abs=1e-12)
    assert wavevector_of_energy(resonant, 21.0) == pytest.approx(2 * math.pi / 3, abs=1e-12)
    for E in (22.0, 18.0, 25.0):
        with pytest.raises(OutOfBandError):
            wavevector_of_energy(resonant, E)


def test_dispersion_strictly_increasing(resonant):
    k = np.linspace(1e-6, math.pi - 1e-6, 1000)
    E = np.array([dispersion(resonant, kk) for kk in k])
    assert np.all(np.diff(E) > 0)


def test_round_trip_1000_random(resonant, rng):
    for k in rng.uniform(1e-6, math.pi - 1e-6, 1000):
        assert abs(wavevector_of_energy(resonant, dispersion(resonant, k)) - k) <= 1e-12 or math.sin(k) < 1e-4


@given(st.floats(min_value=0.01, max_value=math.pi - 0.01), st.floats(min_value=0.1, max_value=5.0))
def test_round_trip_property(k, xi):
    p = SystemParams(xi=xi)
    assert wavevector_of_energy(p, dispersion(p, k)) == pytest.approx(k, abs=1e-12)


def test_scattering_point_at_resonance(resonant):
    pt = scattering_point(resonant, math.pi / 2)
    assert pt.delta == pytest.approx(0.0, abs=1e-12)
    assert pt.delta_k == pytest.approx(0.0, abs=1e-12)
    assert pt.q_value == pytest.approx(-0.04, abs=1e-12)
    assert resonant.band[0] <= pt.E <= resonant.band[1]


def test_scattering_point_q_zero(resonant):
    k = math.acos(-0.2 / 2)  # delta = +0.2
    assert scattering_point(resonant, k).q_value == pytest.approx(0.0, abs=1e-12)


def test_scattering_point_delta_c():
    p = SystemParams(Omega=20.0, omega_0=18.0)
    assert scattering_point(p, math.pi / 2).delta_c == -2.0


def test_scattering_point_idempotent(resonant, rng):
    for k in rng.uniform(0.01, 3.1, 50):
        a = scattering_point(resonant, k)
        b = scattering_point(resonant, a.k)
        assert a == b


@pytest.mark.parametrize("omega_0, lam", [(20.0, 0.2), (18.0, 0.2), (21.3, 0.45), (20.0, 0.0)])
def test_q_roots_against_root_finder(omega_0, lam):
    p = SystemParams(omega_0=omega_0, lam=lam)

    def q(d):
        return d * (d + p.Omega - p.omega_0) - p.lam**2

    lo, hi = q_roots(p)
    if lam == 0:
        assert sorted([lo, hi]) == pytest.approx(sorted([0.0, p.delta_c]), abs=1e-14)
        return
    vertex = (p.omega_0 - p.Omega) / 2
    assert lo == pytest.approx(brentq(q, vertex - 10, vertex), abs=1e-12)
    assert hi == pytest.approx(brentq(q, vertex, vertex + 10), abs=1e-12)


def test_q_roots_resonant_are_plus_minus_lambda(resonant):
    assert q_roots(resonant) == pytest.approx((-0.2, 0.2), abs=1e-15)


def test_exact_block_transcription():
    p = SystemParams(Omega=20.0, omega_0=20.0, lam=0.2, g=0.5, N=4)
    b = exact_emitter_block(p)
    assert b.dim == 2
    np.testing.assert_array_equal(b.h_internal, [[20, 0.2], [0.2, 20]])
    np.testing.assert_array_equal(b.coupling, [[0.5, 0.5], [0, 0]])
    assert b.site_indices == (0, 4)


def test_exact_block_limits(resonant):
    b = exact_emitter_block(resonant.replace(lam=0.0))
    assert b.h_internal[0, 1] == 0 and b.h_internal[1, 0] == 0
    b = exact_emitter_block(resonant.replace(g=0.0))
    assert not b.coupling.any()


@given(
    st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 2), st.floats(0, 2), st.integers(0, 20)
)
def test_exact_block_always_hermitian(Omega, omega_0, lam, g, N):
    b = exact_emitter_block(SystemParams(Omega=Omega, omega_0=omega_0, lam=lam, g=g, N=N))
    assert np.array_equal(b.h_internal, b.h_internal.conj().T)


@pytest.mark.parametrize(
    "kwargs, field",
    [({"xi": 0.0}, "xi"), ({"xi": -1.0}, "xi"), ({"lam": -0.1}, "lam"), ({"g": -1}, "g"),
     ({"N": -1}, "N"), ({"N": 1.5}, "N"), ({"g": 1j}, "g"), ({"omega_c": float("nan")}, "omega_c")],
)
def test_params_validation(kwargs, field):
    with pytest.raises(ValidationError, match=field):
        SystemParams(**kwargs)


def test_emitter_block_validation():
    with pytest.raises(ValidationError, match="Hermitian"):
        EmitterBlock([[1, 1], [0, 1]], [[0, 0], [0, 0]], (0, 1))
    with pytest.raises(ValidationError, match="site_indices"):
        EmitterBlock([[1]], [[1, 1]], (1, 2))
    with pytest.raises(ValidationError, match="shape"):
        EmitterBlock([[1]], [[1, 1, 1]], (0, 2))


def test_single_excitation_hamiltonian_layout(resonant):
    b = exact_emitter_block(resonant)
    H = single_excitation_hamiltonian(b, resonant, np.arange(-2, 7)).toarray()
    n = 9
    assert H.shape == (n + 2, n + 2)
    np.testing.assert_allclose(H, H.conj().T)
    assert H[2, n] == 0.5 and H[6, n] == 0.5  # sites 0 and 4
    assert H[n, n + 1] == 0.2
    assert H[0, 1] == -1.0 and H[0, 0] == 20.0
