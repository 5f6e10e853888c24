"""Boundary-matching solver for single-photon scattering off an emitter block.

A photon ``exp(ikj)`` comes in from the left.  Outside the block the
amplitudes are ``exp(ikj) + r exp(-ikj)`` (j < 0) and ``t exp(ikj)`` (j > N),
inside ``A exp(ikj) + B exp(-ikj)``.  The plane waves solve the bulk lattice
equation identically once ``E = omega_c - 2 xi cos k``, so only the two
continuity conditions, the lattice equations at the connection sites and the
``d`` local-mode equations are assembled.  That is a dense ``(4 + d)`` system.

The module also provides the retarded lattice Green function and the
resulting resonance (quasi-bound state) positions of a block, which
:func:`giantatom.experiments.sweep` uses to refine grids around narrow lines.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NearBoundStateError, OutOfBandError, ValidationError
from .model import dispersion, wavevector_of_energy

__all__ = [
    "ScatteringSolution",
    "solve_scattering",
    "solve_scattering_merged",
    "lattice_green",
    "self_energy",
    "Resonance",
    "resonances",
    "CONDITION_LIMIT",
]

CONDITION_LIMIT = 1e14


@dataclass(frozen=True)
class ScatteringSolution:
    """Complex amplitudes of one scattering state (unit incident amplitude)."""

    r: complex
    t: complex
    a_amp: complex
    b_amp: complex
    emitter_amps: np.ndarray
    unitarity_residual: float
    k: float
    E: float

    @property
    def reflectance(self):
        return abs(self.r) ** 2

    @property
    def transmittance(self):
        return abs(self.t) ** 2


def _check_geometry(block, params):
    if block.site_indices != (0, params.N):
        raise ValidationError(
            f"block is attached at {block.site_indices}, parameters say (0, {params.N})"
        )


def _solve(matrix, rhs, E):
    cond = np.linalg.cond(matrix)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise NearBoundStateError(
            f"scattering system is singular at E={E!r} (condition number {cond:.3g}); "
            "likely a bound state or decoupled mode at this energy",
            energy=E,
            condition=cond,
        )
    return np.linalg.solve(matrix, rhs)


def _free(block, params, k):
    # a block with no coupling cannot scatter; its own modes may sit at any
    # energy without making the physical amplitudes ill-defined
    E = dispersion(params, k)
    return ScatteringSolution(0j, 1 + 0j, 1 + 0j, 0j, np.zeros(block.dim, dtype=complex), 0.0, float(k), E)


def solve_scattering(block, params, k):
    """Scattering amplitudes for wave vector ``k``.

    Unknowns are ordered ``(r, A, B, t, m_0 .. m_{d-1})``.  For ``N = 0`` the
    call is forwarded to :func:`solve_scattering_merged`.

    Raises
    ------
    DomainError
        ``k`` outside (0, pi).
    NearBoundStateError
        Condition number above 1e14.
    """
    _check_geometry(block, params)
    if not np.any(block.coupling):
        return _free(block, params, k)
    if params.N == 0:
        return solve_scattering_merged(block, params, k)
    E = dispersion(params, k)
    N = params.N
    d = block.dim
    xi = params.xi
    detune = params.omega_c - E
    C = block.coupling
    e1 = cmath.exp(1j * k)
    eN = cmath.exp(1j * k * N)

    M = np.zeros((4 + d, 4 + d), dtype=complex)
    rhs = np.zeros(4 + d, dtype=complex)
    R, A, B, T = 0, 1, 2, 3
    modes = slice(4, 4 + d)

    # continuity at j = 0: 1 + r = A + B
    M[0, [R, A, B]] = [1, -1, -1]
    rhs[0] = -1
    # continuity at j = N: A e^{ikN} + B e^{-ikN} = t e^{ikN}
    M[1, [A, B, T]] = [eN, 1 / eN, -eN]
    # site 0: (omega_c - E) c_0 - xi (c_-1 + c_1) + sum_m C[m,0] m = 0
    M[2, A] = detune - xi * e1
    M[2, B] = detune - xi / e1
    M[2, R] = -xi * e1
    rhs[2] = xi / e1
    M[2, modes] = C[:, 0]
    # site N, with c_{N+1} = t e^{ik(N+1)}
    M[3, A] = detune * eN - xi * eN / e1
    M[3, B] = detune / eN - xi * e1 / eN
    M[3, T] = -xi * eN * e1
    M[3, modes] = C[:, 1]
    # local modes: (h - E) m + conj(C) (c_0, c_N) = 0
    M[modes, modes] = block.h_internal - E * np.eye(d)
    Cc = C.conj()
    M[modes, A] = Cc[:, 0] + Cc[:, 1] * eN
    M[modes, B] = Cc[:, 0] + Cc[:, 1] / eN

    x = _solve(M, rhs, E)
    r, a, b, t = x[:4]
    residual = abs(abs(r) ** 2 + abs(t) ** 2 - 1.0)
    return ScatteringSolution(complex(r), complex(t), complex(a), complex(b), x[4:].copy(), residual, float(k), E)


def solve_scattering_merged(block, params, k):
    """Scattering amplitudes when both legs sit on site 0 (``N = 0``).

    Unknowns are ``(r, t, m_0 .. m_{d-1})``.  The single connection site sees
    the row sums of the coupling matrix.  ``a_amp`` and ``b_amp`` are reported
    as ``t`` and ``0``.
    """
    if params.N != 0 or block.site_indices != (0, 0):
        raise ValidationError("solve_scattering_merged requires N = 0")
    if not np.any(block.coupling):
        return _free(block, params, k)
    E = dispersion(params, k)
    d = block.dim
    xi = params.xi
    detune = params.omega_c - E
    c_eff = block.coupling.sum(axis=1)
    e1 = cmath.exp(1j * k)

    M = np.zeros((2 + d, 2 + d), dtype=complex)
    rhs = np.zeros(2 + d, dtype=complex)
    modes = slice(2, 2 + d)
    # 1 + r = t
    M[0, [0, 1]] = [1, -1]
    rhs[0] = -1
    # site 0 with c_0 = t, c_-1 = e^{-ik} + r e^{ik}, c_1 = t e^{ik}
    M[1, 0] = -xi * e1
    M[1, 1] = detune - xi * e1
    rhs[1] = xi / e1
    M[1, modes] = c_eff
    # local modes
    M[modes, modes] = block.h_internal - E * np.eye(d)
    M[modes, 1] = c_eff.conj()

    x = _solve(M, rhs, E)
    r, t = x[:2]
    residual = abs(abs(r) ** 2 + abs(t) ** 2 - 1.0)
    return ScatteringSolution(complex(r), complex(t), complex(t), 0j, x[2:].copy(), residual, float(k), E)


def lattice_green(params, E, distance):
    """Retarded Green function of the bare waveguide between sites ``distance`` apart.

    ``G(n) = -i exp(ik|n|) / (2 xi sin k)`` for ``E`` inside the band.
    """
    k = wavevector_of_energy(params, E)
    return -1j * cmath.exp(1j * k * abs(distance)) / (2.0 * params.xi * math.sin(k))


def self_energy(block, params, E):
    """Waveguide-induced self-energy matrix of the local modes at energy ``E``."""
    g0 = lattice_green(params, E, 0)
    gN = lattice_green(params, E, block.N)
    G = np.array([[g0, gN], [gN, g0]])
    C = block.coupling
    return C.conj() @ G @ C.T


@dataclass(frozen=True)
class Resonance:
    """Quasi-bound state: real part ``energy`` and full width ``width``."""

    energy: float
    width: float


def _poles_at(block, params, E):
    return np.linalg.eigvals(block.h_internal + self_energy(block, params, E))


def resonances(block, params, *, max_iter=200, tol=1e-13):
    """Resonances of a block dressed by the waveguide.

    The poles of ``h + Sigma(E)`` at the mean internal energy seed one branch
    each; a branch is then iterated to self-consistency, ``E <- Re z``,
    always following the eigenvalue closest to its previous value.  Branches
    that leave the band (true bound states) or fail to converge are dropped.
    """
    seeds = np.linalg.eigvalsh(block.h_internal)
    try:
        start = list(_poles_at(block, params, float(np.mean(seeds))))
    except OutOfBandError:
        start = []
        for seed in seeds:
            try:
                start.append(_poles_at(block, params, float(seed))[0])
            except OutOfBandError:
                continue
    found = []
    for z in start:
        E = float(z.real)
        for _ in range(max_iter):
            try:
                eig = _poles_at(block, params, E)
            except OutOfBandError:
                z = None
                break
            z = eig[np.argmin(np.abs(eig - z))]
            if abs(z.real - E) < tol:
                break
            E = float(z.real)
        else:
            z = None
        if z is not None:
            found.append(Resonance(float(z.real), float(-2.0 * z.imag)))
    return found
