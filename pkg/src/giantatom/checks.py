"""Randomised consistency checks shared by the ``verify`` command and the tests."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import reflection_analytic
from .errors import NumericalGuardError
from .model import SystemParams, exact_emitter_block
from .solver import solve_scattering
from .sweff import verify_sw_projection

__all__ = ["random_params", "SolverCheck", "solver_vs_analytic", "sw_projection_suite"]


def random_params(rng, *, omega_c=20.0, xi=1.0):
    """One draw from the test box: g in [0, 1], lam in [0, 0.5], N in 0..8.

    Half the draws are fully resonant, the other half have the phonon
    detuned by up to one hopping.  ``Omega`` is jittered around ``omega_c``.
    """
    Omega = omega_c + rng.uniform(-0.5, 0.5) * xi
    if rng.random() < 0.5:
        Omega = omega_0 = omega_c
    else:
        omega_0 = Omega + rng.uniform(-1.0, 1.0) * xi
    return SystemParams(
        omega_c=omega_c,
        xi=xi,
        omega_0=omega_0,
        Omega=Omega,
        lam=rng.uniform(0.0, 0.5) * xi,
        g=rng.uniform(0.0, 1.0) * xi,
        N=int(rng.integers(0, 9)),
    )


def random_wavevector(rng, margin=1e-3):
    return rng.uniform(margin, math.pi - margin)


@dataclass
class SolverCheck:
    n_draws: int
    n_skipped: int
    max_deviation: float
    max_unitarity_residual: float
    worst: SystemParams | None = None


def solver_vs_analytic(n_draws=1000, seed=0):
    """Largest ``| |r|^2_solver - R_closed_form |`` over random draws.

    Draws where either route refuses (degenerate closed form, singular
    system) are counted in ``n_skipped``; they occur with probability zero.
    """
    rng = np.random.default_rng(seed)
    worst_dev = 0.0
    worst_res = 0.0
    worst = None
    skipped = 0
    for _ in range(n_draws):
        p = random_params(rng)
        k = random_wavevector(rng)
        try:
            sol = solve_scattering(exact_emitter_block(p), p, k)
            ref = reflection_analytic(p, k).r_rate
        except NumericalGuardError:
            skipped += 1
            continue
        dev = abs(sol.reflectance - ref)
        if dev > worst_dev:
            worst_dev, worst = dev, p
        worst_res = max(worst_res, sol.unitarity_residual)
    return SolverCheck(n_draws, skipped, worst_dev, worst_res, worst)


def random_dispersive_params(rng):
    """Draw with ``|lam / (omega_0 - Omega)| < 0.25`` for the effective model."""
    dc = rng.choice([-1.0, 1.0]) * rng.uniform(1.0, 3.0)
    lam = rng.uniform(0.0, 0.25) * abs(dc)
    Omega = 20.0 + rng.uniform(-0.5, 0.5)
    return SystemParams(
        omega_c=20.0,
        xi=1.0,
        Omega=Omega,
        omega_0=Omega + dc,
        lam=lam,
        g=rng.uniform(0.0, 1.0),
        N=int(rng.integers(0, 7)),
    )


def sw_projection_suite(params, n_draws=20, seed=0, n_phonon_cut=3):
    """Projection deviations at ``params`` followed by ``n_draws`` random draws."""
    rng = np.random.default_rng(seed)
    out = [verify_sw_projection(params, n_phonon_cut, params.N + 5)]
    for _ in range(n_draws):
        p = random_dispersive_params(rng)
        out.append(verify_sw_projection(p, n_phonon_cut, p.N + 3))
    return out
