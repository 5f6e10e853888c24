"""Second-order Schrieffer-Wolff model for a far-detuned atom and phonon.

The generator ``S = (lam / dc) (a |e><g| - a^dagger |g><e|)`` with
``dc = omega_0 - Omega`` removes the atom-phonon exchange to first order.
To second order in ``lam / dc`` the transformed Hamiltonian has

* dispersive shifts ``-lam^2/dc`` on the atom and ``+lam^2/dc`` on the phonon,
* atom-waveguide coupling ``g + lam^2 g / (2 dc^2)`` at both legs,
* phonon-waveguide coupling ``(lam / dc) g`` gated by the atom ground state,
* two three-operator terms ``~ lam^2 g / dc^2`` that need two quanta to act.

In the single-excitation sector the gated and three-operator terms reduce to
a two-mode :class:`~giantatom.model.EmitterBlock`.  :func:`verify_sw_projection`
checks that reduction by building every term as an explicit operator.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .analytic import ReflectionValue
from .errors import DispersiveRegimeError, PerturbativeValidityError, ValidationError
from .model import EmitterBlock, scattering_point, single_excitation_hamiltonian
from .solver import solve_scattering

__all__ = [
    "SWModel",
    "sw_model",
    "sw_emitter_block",
    "effective_hamiltonian_operator",
    "verify_sw_projection",
    "reflection_effective",
    "MAX_SMALL_PARAMETER",
]

MAX_SMALL_PARAMETER = 0.3


@dataclass(frozen=True)
class SWModel:
    delta_c: float
    atom_shift: float
    phonon_shift: float
    atom_wg_coupling: float
    phonon_wg_coupling: float
    small_parameter: float


def sw_model(params):
    """Coefficients of the second-order effective Hamiltonian.

    Raises
    ------
    DispersiveRegimeError
        ``omega_0 == Omega``.
    PerturbativeValidityError
        ``|lam / (omega_0 - Omega)| >= 0.3``.
    """
    dc = params.delta_c
    if dc == 0:
        raise DispersiveRegimeError("atom and phonon are resonant (omega_0 == Omega); no dispersive regime")
    eps = params.lam / dc
    if abs(eps) >= MAX_SMALL_PARAMETER:
        raise PerturbativeValidityError(
            f"|lam / (omega_0 - Omega)| = {abs(eps):.4g} is not below {MAX_SMALL_PARAMETER}"
        )
    shift = params.lam**2 / dc
    return SWModel(
        delta_c=dc,
        atom_shift=-shift,
        phonon_shift=shift,
        atom_wg_coupling=params.g + params.lam**2 * params.g / (2.0 * dc**2),
        phonon_wg_coupling=eps * params.g,
        small_parameter=abs(eps),
    )


def sw_emitter_block(params):
    """Single-excitation emitter block of the effective Hamiltonian (atom, phonon)."""
    m = sw_model(params)
    h = np.diag([params.Omega + m.atom_shift, params.omega_0 + m.phonon_shift]).astype(complex)
    coupling = np.array(
        [[m.atom_wg_coupling, m.atom_wg_coupling], [m.phonon_wg_coupling, m.phonon_wg_coupling]],
        dtype=complex,
    )
    return EmitterBlock(h, coupling, (0, params.N), labels=("atom", "phonon"))


def _ladder(n):
    return sp.diags(np.sqrt(np.arange(1, n)), 1, format="csr", dtype=complex)


def _embed(ops, which, op):
    """Kronecker product with ``op`` at slot ``which`` and identities elsewhere."""
    out = None
    for i, dim in enumerate(ops):
        factor = op if i == which else sp.identity(dim, dtype=complex, format="csr")
        out = factor if out is None else sp.kron(out, factor, format="csr")
    return out


def effective_hamiltonian_operator(params, n_phonon_cut, n_test_sites):
    """Every term of the effective Hamiltonian on a truncated tensor-product space.

    Slots are ``atom (2) x phonon (n_phonon_cut + 1) x photon site (2) x ...``.
    Each photon site keeps occupations 0 and 1: every term carries at most
    one photon ladder operator, so nothing that starts with one excitation
    ever needs two photons on a site.  Test site ``i`` is lattice site
    ``i - 1``, so lattice sites ``-1 .. n_test_sites - 2`` are present.

    Returns
    -------
    H : scipy.sparse.csr_matrix
    dims : tuple of int
        Slot dimensions, for locating basis states.
    """
    if n_phonon_cut < 2:
        raise ValidationError("n_phonon_cut must be >= 2")
    if n_test_sites < params.N + 3:
        raise ValidationError(f"n_test_sites must be >= N + 3 = {params.N + 3}")
    m = sw_model(params)
    dc, lam, g = m.delta_c, params.lam, params.g
    dims = (2, n_phonon_cut + 1) + (2,) * n_test_sites

    # atom basis (|g>, |e>)
    sigma_minus = sp.csr_matrix(np.array([[0, 1], [0, 0]], dtype=complex))
    proj_e = sp.csr_matrix(np.diag([0, 1]).astype(complex))
    proj_g = sp.csr_matrix(np.diag([1, 0]).astype(complex))
    sm = _embed(dims, 0, sigma_minus)
    sp_ = sm.conj().T
    Pe = _embed(dims, 0, proj_e)
    Pg = _embed(dims, 0, proj_g)
    a = _embed(dims, 1, _ladder(n_phonon_cut + 1))
    ad = a.conj().T
    b = [_embed(dims, 2 + i, _ladder(2)) for i in range(n_test_sites)]
    bd = [op.conj().T for op in b]
    s0, sN = 1, 1 + params.N
    leg_dag = bd[s0] + bd[sN]
    leg = b[s0] + b[sN]

    H = params.omega_0 * (ad @ a) + params.Omega * Pe
    H = H - (lam**2 / dc) * (a @ ad @ Pe - ad @ a @ Pg)
    for i in range(n_test_sites):
        H = H + params.omega_c * (bd[i] @ b[i])
    for i in range(n_test_sites - 1):
        H = H - params.xi * (bd[i + 1] @ b[i] + bd[i] @ b[i + 1])
    atom_leg = leg_dag @ sm + leg @ sp_
    H = H + g * atom_leg
    H = H + (lam**2 * g / (2 * dc**2)) * atom_leg
    phonon_leg = leg_dag @ a + leg @ ad
    H = H + (lam / dc) * g * (phonon_leg @ (Pg - Pe))
    H = H + (lam**2 * g / dc**2) * (phonon_leg @ a @ sp_)
    H = H + (lam**2 * g / dc**2) * (ad @ phonon_leg @ sm)
    return H.tocsr(), dims


def _single_excitation_indices(dims, n_test_sites):
    """Flat indices of (|e,0,vac>, |g,1,vac>, |g,0,1_i> for each site)."""
    zero = [0] * len(dims)
    states = []
    e0 = list(zero)
    e0[0] = 1
    states.append(e0)
    g1 = list(zero)
    g1[1] = 1
    states.append(g1)
    for i in range(n_test_sites):
        s = list(zero)
        s[2 + i] = 1
        states.append(s)
    return np.ravel_multi_index(np.array(states).T, dims)


def verify_sw_projection(params, n_phonon_cut=3, n_test_sites=None):
    """Largest deviation between the brute-force operator and the emitter block.

    The full effective Hamiltonian is built on the truncated tensor-product
    space, restricted to the single-excitation basis, and compared entry-wise
    with :func:`sw_emitter_block` embedded on the same open chain.  Matrix
    elements linking the sector to the rest of the space are included in the
    deviation, so a nonzero leak also counts.
    """
    if n_test_sites is None:
        n_test_sites = params.N + 5
    H, dims = effective_hamiltonian_operator(params, n_phonon_cut, n_test_sites)
    idx = _single_excitation_indices(dims, n_test_sites)
    sector = H[idx][:, idx].toarray()
    # reorder to (sites..., atom, phonon) as used by single_excitation_hamiltonian
    order = np.r_[np.arange(2, 2 + n_test_sites), 0, 1]
    sector = sector[np.ix_(order, order)]

    sites = np.arange(-1, n_test_sites - 1)
    reference = single_excitation_hamiltonian(sw_emitter_block(params), params, sites).toarray()
    deviation = np.max(np.abs(sector - reference))

    mask = np.ones(H.shape[0], dtype=bool)
    mask[idx] = False
    leak_out = H[mask][:, idx]
    leak_in = H[idx][:, mask]
    for part in (leak_out, leak_in):
        if part.nnz:
            deviation = max(deviation, np.max(np.abs(part.data)))
    return float(deviation)


def reflection_effective(params, k):
    """Reflection rate ``R'`` of the effective model at wave vector ``k``."""
    sol = solve_scattering(sw_emitter_block(params), params, k)
    return ReflectionValue(sol.reflectance, scattering_point(params, k))
