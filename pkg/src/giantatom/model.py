"""Parameters, lattice dispersion and emitter blocks for the giant-atom setup.

A two-level atom (frequency ``Omega``) is coupled with strength ``lam`` to a
single phonon mode (frequency ``omega_0``) and with strength ``g`` to sites
``0`` and ``N`` of an infinite coupled-resonator waveguide (on-site frequency
``omega_c``, hopping ``xi``).  All energies are in units of ``xi`` and
``hbar = 1``.

Everything that couples to the waveguide is described by an
:class:`EmitterBlock`, a set of local modes with an internal Hermitian matrix
and a coupling matrix to the two connection sites.  The exact model and the
Schrieffer-Wolff effective model are both instances.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, OutOfBandError, ValidationError

__all__ = [
    "SystemParams",
    "ScatteringPoint",
    "EmitterBlock",
    "dispersion",
    "wavevector_of_energy",
    "wavevector_of_detuning",
    "scattering_point",
    "q_roots",
    "exact_emitter_block",
    "single_excitation_hamiltonian",
]

# |sin k| below this makes the boundary-matching formulas singular
BAND_EDGE_TOL = 1e-8
HERMITIAN_TOL = 1e-12


def _real(name, value):
    if isinstance(value, (complex, np.complexfloating)):
        if value.imag != 0:
            raise ValidationError(f"{name} must be real, got {value!r}")
        value = value.real
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the hybrid system, in units of ``xi``.

    The defaults are the resonant parameter set of the odd/even-N spectra:
    ``g = 0.5``, ``lam = 0.2``, ``Omega = omega_0 = omega_c = 20`` and ``N = 4``.

    ``lam`` stands for the atom-phonon coupling (``lambda`` is a Python
    keyword).
    """

    omega_c: float = 20.0
    xi: float = 1.0
    omega_0: float = 20.0
    Omega: float = 20.0
    lam: float = 0.2
    g: float = 0.5
    N: int = 4

    def __post_init__(self):
        for name in ("omega_c", "xi", "omega_0", "Omega", "lam", "g"):
            object.__setattr__(self, name, _real(name, getattr(self, name)))
        if self.xi <= 0:
            raise ValidationError(f"xi must be positive, got {self.xi}")
        if self.lam < 0:
            raise ValidationError(f"lam must be >= 0, got {self.lam}")
        if self.g < 0:
            raise ValidationError(f"g must be >= 0, got {self.g}")
        n = self.N
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
            if isinstance(n, float) and n.is_integer():
                n = int(n)
            else:
                raise ValidationError(f"N must be a non-negative integer, got {n!r}")
        if n < 0:
            raise ValidationError(f"N must be a non-negative integer, got {n}")
        object.__setattr__(self, "N", int(n))

    @property
    def delta_c(self):
        """Phonon-atom detuning ``omega_0 - Omega``."""
        return self.omega_0 - self.Omega

    @property
    def band(self):
        """Closed band interval ``(omega_c - 2 xi, omega_c + 2 xi)``."""
        return self.omega_c - 2 * self.xi, self.omega_c + 2 * self.xi

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def as_dict(self):
        return dataclasses.asdict(self)


def _check_k(k):
    k = float(k)
    if not (0.0 < k < math.pi) or abs(math.sin(k)) < BAND_EDGE_TOL:
        raise DomainError(f"wave vector k={k!r} must lie in the open interval (0, pi)")
    return k


def dispersion(params, k):
    """Photon energy ``omega_c - 2 xi cos k`` for a right-moving wave vector."""
    k = _check_k(k)
    return params.omega_c - 2.0 * params.xi * math.cos(k)


def wavevector_of_energy(params, E):
    """Invert the dispersion: the unique ``k`` in (0, pi) with energy ``E``."""
    E = float(E)
    cos_k = (params.omega_c - E) / (2.0 * params.xi)
    if not -1.0 < cos_k < 1.0:
        lo, hi = params.band
        raise OutOfBandError(f"energy E={E!r} is not strictly inside the band ({lo}, {hi})")
    k = math.acos(cos_k)
    if math.sin(k) < BAND_EDGE_TOL:
        raise OutOfBandError(f"energy E={E!r} is too close to a band edge")
    return k


def wavevector_of_detuning(params, delta):
    """Wave vector for the photon-atom detuning ``delta = E - Omega``."""
    return wavevector_of_energy(params, params.Omega + float(delta))


@dataclass(frozen=True)
class ScatteringPoint:
    """Wave vector plus the derived energies entering the reflection rate."""

    k: float
    E: float
    delta: float
    delta_k: float
    delta_c: float
    q_value: float


def scattering_point(params, k):
    """Derived detunings at wave vector ``k``.

    ``delta = E - Omega``, ``delta_k = omega_0 - E``, ``delta_c = omega_0 - Omega``
    and ``q_value = delta (delta + Omega - omega_0) - lam**2``.
    """
    E = dispersion(params, k)
    delta = E - params.Omega
    q = delta * (delta + params.Omega - params.omega_0) - params.lam**2
    return ScatteringPoint(
        k=float(k),
        E=E,
        delta=delta,
        delta_k=params.omega_0 - E,
        delta_c=params.delta_c,
        q_value=q,
    )


def q_roots(params):
    """Real roots ``(delta_minus, delta_plus)`` of ``Q(delta) = 0``."""
    dc = params.delta_c
    s = math.sqrt(dc * dc + 4.0 * params.lam**2)
    return (dc - s) / 2.0, (dc + s) / 2.0


@dataclass(frozen=True, eq=False)
class EmitterBlock:
    """Local modes attached to waveguide sites ``0`` and ``N``.

    Parameters
    ----------
    h_internal : (d, d) complex ndarray
        Hermitian Hamiltonian of the local modes.
    coupling : (d, 2) complex ndarray
        ``coupling[m, s]`` is the matrix element between site ``site_indices[s]``
        and local mode ``m``; the Hamiltonian contains
        ``coupling[m, s] * b_s^dagger m + h.c.``.
    site_indices : tuple of int
        Always ``(0, N)``.
    labels : tuple of str, optional
        Names of the local modes, for reports.
    """

    h_internal: np.ndarray
    coupling: np.ndarray
    site_indices: tuple
    labels: tuple = ()

    def __post_init__(self):
        h = np.array(self.h_internal, dtype=complex)
        c = np.array(self.coupling, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] == 0:
            raise ValidationError(f"h_internal must be a non-empty square matrix, got shape {h.shape}")
        if c.shape != (h.shape[0], 2):
            raise ValidationError(f"coupling must have shape ({h.shape[0]}, 2), got {c.shape}")
        if np.max(np.abs(h - h.conj().T)) > HERMITIAN_TOL:
            raise ValidationError("h_internal is not Hermitian")
        first, second = (int(i) for i in self.site_indices)
        if first != 0 or second < 0:
            raise ValidationError(f"site_indices must be (0, N>=0), got {self.site_indices!r}")
        h.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "h_internal", h)
        object.__setattr__(self, "coupling", c)
        object.__setattr__(self, "site_indices", (first, second))
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def dim(self):
        return self.h_internal.shape[0]

    @property
    def N(self):
        return self.site_indices[1]

    def swapped(self):
        """Mirror image: the two coupling columns exchanged."""
        return EmitterBlock(self.h_internal, self.coupling[:, ::-1], self.site_indices, self.labels)


def exact_emitter_block(params):
    """Atom and phonon modes of the full model.

    Mode 0 is the atom (excited state), mode 1 the phonon; only the atom
    touches the waveguide, with strength ``g`` at both sites.
    """
    h = np.array([[params.Omega, params.lam], [params.lam, params.omega_0]], dtype=complex)
    coupling = np.array([[params.g, params.g], [0.0, 0.0]], dtype=complex)
    return EmitterBlock(h, coupling, (0, params.N), labels=("atom", "phonon"))


def single_excitation_hamiltonian(block, params, sites):
    """Sparse single-excitation Hamiltonian on a finite open chain.

    Parameters
    ----------
    block : EmitterBlock
    params : SystemParams
    sites : array_like of int
        Consecutive lattice indices of the chain; must contain ``0`` and ``N``.

    Returns
    -------
    H : scipy.sparse.csr_matrix
        Basis ordering is the chain sites in the given order followed by the
        ``block.dim`` local modes.
    """
    sites = np.asarray(sites, dtype=int)
    n = sites.size
    if n < 2 or np.any(np.diff(sites) != 1):
        raise ValidationError("sites must be at least two consecutive lattice indices")
    pos = {}
    for s in block.site_indices:
        if not sites[0] <= s <= sites[-1]:
            raise ValidationError(f"connection site {s} is outside the chain")
        pos[s] = s - sites[0]
    d = block.dim
    hop = -params.xi * np.ones(n - 1)
    chain = sp.diags([hop, np.full(n, params.omega_c), hop], [-1, 0, 1], format="lil", dtype=complex)
    H = sp.lil_matrix((n + d, n + d), dtype=complex)
    H[:n, :n] = chain
    H[n:, n:] = block.h_internal
    for col, s in enumerate(block.site_indices):
        i = pos[s]
        for m in range(d):
            H[i, n + m] += block.coupling[m, col]
            H[n + m, i] += np.conj(block.coupling[m, col])
    return H.tocsr()
