"""Closed-form single-photon reflection rate of the phonon-dressed giant atom.

With ``D = delta``, ``Dk = delta_k`` and ``Q = D (D + Omega - omega_0) - lam^2``::

                       4 g^4 Dk^2 cos^4(kN/2)
    R = ----------------------------------------------------------------
        4 g^4 Dk^2 cos^2(kN/2) + xi^2 Q^2 sin^2 k + 2 xi g^2 Q Dk sin k sin kN

The three denominator terms are evaluated separately and summed, so the code
can be read against the formula term by term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IndeterminatePointError, OutOfBandError
from .model import q_roots, scattering_point, wavevector_of_detuning

__all__ = [
    "ReflectionValue",
    "reflection_analytic",
    "reflection_rate",
    "reflection_at_q_zero",
    "DEGENERATE_DENOMINATOR",
]

DEGENERATE_DENOMINATOR = 1e-300
_Q_ZERO_AGREEMENT = 1e-10


@dataclass(frozen=True)
class ReflectionValue:
    r_rate: float
    point: object  # ScatteringPoint


def _terms(params, k, delta_k, q):
    g2 = params.g**2
    half = np.cos(k * params.N / 2.0)
    numerator = 4.0 * g2**2 * delta_k**2 * half**4
    d_coupling = 4.0 * g2**2 * delta_k**2 * half**2
    d_atom = params.xi**2 * q**2 * np.sin(k) ** 2
    d_cross = 2.0 * params.xi * g2 * q * delta_k * np.sin(k) * np.sin(k * params.N)
    return numerator, d_coupling + d_atom + d_cross


def reflection_analytic(params, k):
    """Reflection rate ``|r|^2`` from the closed form at wave vector ``k``.

    Raises
    ------
    DomainError
        ``k`` outside (0, pi).
    IndeterminatePointError
        The denominator vanishes (below 1e-300), as at ``lam = 0`` with
        ``delta = delta_k = 0``.  Evaluate nearby instead.
    """
    pt = scattering_point(params, k)
    numerator, denominator = _terms(params, pt.k, pt.delta_k, pt.q_value)
    if abs(denominator) < DEGENERATE_DENOMINATOR:
        raise IndeterminatePointError(
            f"closed form is 0/0 at k={pt.k!r} (delta={pt.delta!r}); evaluate as a limit"
        )
    return ReflectionValue(float(numerator / denominator), pt)


def reflection_rate(params, k):
    """Vectorised closed form over an array of wave vectors.

    Degenerate points come back as NaN; no domain checks are made.
    """
    k = np.asarray(k, dtype=float)
    E = params.omega_c - 2.0 * params.xi * np.cos(k)
    delta = E - params.Omega
    delta_k = params.omega_0 - E
    q = delta * (delta + params.Omega - params.omega_0) - params.lam**2
    numerator, denominator = _terms(params, k, delta_k, q)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = numerator / denominator
    return np.where(np.abs(denominator) < DEGENERATE_DENOMINATOR, np.nan, out)


def reflection_at_q_zero(params, which_root):
    """Reflection rate at a root of ``Q``, cross-checked two ways.

    At ``Q = 0`` the closed form collapses to ``cos^2(kN/2)``.  Both values
    are computed and must agree to 1e-10.

    Parameters
    ----------
    which_root : {+1, -1}
        Sign of the root ``[(omega_0 - Omega) +/- sqrt((omega_0 - Omega)^2 + 4 lam^2)] / 2``.
    """
    if which_root not in (1, -1):
        raise ValueError(f"which_root must be +1 or -1, got {which_root!r}")
    d_minus, d_plus = q_roots(params)
    delta = d_plus if which_root > 0 else d_minus
    try:
        k = wavevector_of_detuning(params, delta)
    except OutOfBandError as exc:
        raise OutOfBandError(f"root delta={delta!r} of Q is out of band: {exc}") from None
    full = reflection_analytic(params, k)
    reduced = math.cos(k * params.N / 2.0) ** 2
    if abs(full.r_rate - reduced) > _Q_ZERO_AGREEMENT:
        raise ArithmeticError(
            f"Q=0 identity violated: closed form {full.r_rate!r} vs cos^2(kN/2) {reduced!r}"
        )
    return full
