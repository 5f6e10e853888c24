import math

import numpy as np
import pytest

from giantatom import SystemParams


@pytest.fixture
def resonant():
    """Resonant parameters of the odd/even-N spectra."""
    return SystemParams(omega_c=20.0, xi=1.0, omega_0=20.0, Omega=20.0, lam=0.2, g=0.5, N=4)


@pytest.fixture
def detuned():
    """Far-detuned phonon: omega_0 = 0.9 omega_c."""
    return SystemParams(omega_c=20.0, xi=1.0, omega_0=18.0, Omega=20.0, lam=0.2, g=0.5, N=4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def k_of_delta(params, delta):
    return math.acos((params.omega_c - params.Omega - delta) / (2 * params.xi))


_ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance verdict; printed per criterion at the end of the run.

    Usage: ``criterion("5", "b", ok, detail)``.  Sub-parts of a criterion are
    merged into one line, which passes only if every part passes.
    """

    def record(number, part, ok, detail):
        _ACCEPTANCE.setdefault(number, []).append((part, bool(ok), detail))
        line = f"criterion {number}{part}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE, key=int):
        parts = _ACCEPTANCE[number]
        ok = all(p[1] for p in parts)
        if len(parts) == 1:
            details = parts[0][2]
        else:
            details = "; ".join(f"{part}: {'ok' if good else 'FAIL'} {d}" for part, good, d in parts)
        terminalreporter.write_line(f"{number:>2} {'PASS' if ok else 'FAIL'}  {details}")
