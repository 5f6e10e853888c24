"""Reflection spectra over the photon-atom detuning and their features.

Width definitions used throughout:

``central_dip_fwhm``
    Full width at half depth of the dip containing ``delta = 0``.  Depth is
    measured from the dip minimum to the lower of its two shoulders (a local
    maximum, or the spectrum edge).
``window_width``
    Width of the contiguous region around ``delta = 0`` where ``R <= 0.5``.
``shoulder_separation``
    Distance between the two shoulders of the central dip.
"""
from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field

import numpy as np

from .analytic import reflection_at_q_zero
from .errors import NumericalGuardError, OutOfBandError, RangeError, ValidationError
from .model import SystemParams, exact_emitter_block, wavevector_of_detuning
from .solver import resonances, solve_scattering
from .sweff import sw_emitter_block

__all__ = [
    "Spectrum",
    "SpectralFeatures",
    "WidthScan",
    "ParityRow",
    "emitter_block",
    "sweep",
    "analyze",
    "width_scan",
    "parity_classification",
    "asymmetry",
]

BLOCK_KINDS = ("exact", "sw")
DEFAULT_FLOOR = 0.5
WINDOW_LEVEL = 0.5


def emitter_block(params, block_kind):
    if block_kind == "exact":
        return exact_emitter_block(params)
    if block_kind == "sw":
        return sw_emitter_block(params)
    raise ValidationError(f"block_kind must be one of {BLOCK_KINDS}, got {block_kind!r}")


@dataclass
class Spectrum:
    """Reflection rate on an ordered detuning axis.

    ``values[i]`` is NaN exactly when ``i`` appears in ``skipped``.
    """

    deltas: np.ndarray
    values: np.ndarray
    params: SystemParams
    skipped: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.deltas = np.asarray(self.deltas, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.deltas.shape != self.values.shape or self.deltas.ndim != 1:
            raise ValidationError("deltas and values must be 1-d arrays of equal length")
        if np.any(np.diff(self.deltas) <= 0):
            raise ValidationError("deltas must be strictly increasing")

    def __len__(self):
        return self.deltas.size

    def valid(self):
        """``(deltas, values)`` with skipped points removed."""
        ok = np.isfinite(self.values)
        return self.deltas[ok], self.values[ok]

    def at(self, delta):
        """Linear interpolation of the valid points at ``delta``."""
        d, v = self.valid()
        return float(np.interp(delta, d, v))


def _refinement_points(block, params, delta_min, delta_max, n_points, per_line=801, half_widths=25.0):
    step = (delta_max - delta_min) / (n_points - 1)
    extra = []
    for res in resonances(block, params):
        centre = res.energy - params.Omega
        width = res.width
        # wide lines are already resolved by the uniform grid
        if not (width > 1e-10 * params.xi) or width > 20 * step:
            continue
        lo = max(delta_min, centre - half_widths * width)
        hi = min(delta_max, centre + half_widths * width)
        if lo < hi:
            extra.append(np.linspace(lo, hi, per_line))
    return extra


def sweep(params, block_kind="exact", delta_min=-1.0, delta_max=1.0, n_points=2001, *, refine=False):
    """Reflection spectrum on a uniform detuning grid.

    Parameters
    ----------
    params : SystemParams
    block_kind : {"exact", "sw"}
        Full atom-phonon model or the second-order effective model.
    delta_min, delta_max : float
        Detuning range in units of ``xi``.
    n_points : int
        Number of uniform grid points.
    refine : bool
        Add dense points around resonances narrower than about 20 grid steps.
        Lines of a nearly dark giant atom can be many orders of magnitude
        narrower than any practical uniform grid.

    Returns
    -------
    Spectrum
        Out-of-band and singular points are NaN and listed in ``skipped``.
    """
    if n_points < 2:
        raise ValidationError("n_points must be >= 2")
    if not delta_max > delta_min:
        raise ValidationError("delta_max must exceed delta_min")
    block = emitter_block(params, block_kind)
    deltas = np.linspace(delta_min, delta_max, n_points)
    if refine:
        extra = _refinement_points(block, params, delta_min, delta_max, n_points)
        if extra:
            deltas = np.unique(np.concatenate([deltas, *extra]))
    values = np.full(deltas.size, np.nan)
    skipped = []
    for i, delta in enumerate(deltas):
        try:
            k = wavevector_of_detuning(params, delta)
            values[i] = solve_scattering(block, params, k).reflectance
        except OutOfBandError:
            skipped.append((i, "out of band"))
        except NumericalGuardError as exc:
            skipped.append((i, f"singular: {exc}"))
    if len(skipped) == deltas.size:
        raise RangeError(f"no point of delta in [{delta_min}, {delta_max}] could be evaluated")
    meta = {
        "params": params.as_dict(),
        "solver": block_kind,
        "delta_min": float(delta_min),
        "delta_max": float(delta_max),
        "n_points": int(n_points),
        "refine": bool(refine),
        "n_evaluated": int(deltas.size),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    return Spectrum(deltas, values, params, skipped, meta)


@dataclass
class SpectralFeatures:
    maxima: list
    central_dip_fwhm: float | None
    window_width: float | None
    shoulder_separation: float | None = None

    @property
    def n_peaks(self):
        return len(self.maxima)


def _parabolic_peak(x, y, i):
    xs, ys = x[i - 1 : i + 2], y[i - 1 : i + 2]
    a, b, c = np.polyfit(xs - xs[1], ys, 2)
    if a >= 0:
        return float(x[i]), float(y[i])
    dx = -b / (2 * a)
    if not xs[0] - xs[1] <= dx <= xs[2] - xs[1]:
        return float(x[i]), float(y[i])
    return float(xs[1] + dx), float(c - b * b / (4 * a))


def _local_maxima(x, y, floor):
    out = []
    n = y.size
    i = 1
    while i < n - 1:
        if y[i] > y[i - 1] and y[i] >= y[i + 1]:
            # walk over a flat top
            j = i
            while j < n - 1 and y[j + 1] == y[i]:
                j += 1
            if j < n - 1 and y[i] > floor:
                out.append(_parabolic_peak(x, y, i))
            i = j + 1
        else:
            i += 1
    return out


def _crossing(x, y, i, j, level):
    """Abscissa where the segment (i, j) crosses ``level``."""
    if y[j] == y[i]:
        return float(x[i])
    return float(x[i] + (level - y[i]) * (x[j] - x[i]) / (y[j] - y[i]))


def _centre_index(x):
    if not x[0] <= 0.0 <= x[-1]:
        return None
    return int(np.argmin(np.abs(x)))


def _central_dip(x, y):
    i0 = _centre_index(x)
    if i0 is None:
        return None, None
    n = y.size
    m = i0
    # downhill to the bottom of the dip holding delta = 0
    while True:
        if m > 0 and y[m - 1] < y[m]:
            m -= 1
        elif m < n - 1 and y[m + 1] < y[m]:
            m += 1
        else:
            break
    if m in (0, n - 1):
        return None, None
    left = m
    while left > 0 and y[left - 1] >= y[left]:
        left -= 1
    right = m
    while right < n - 1 and y[right + 1] >= y[right]:
        right += 1
    top = min(y[left], y[right])
    depth = top - y[m]
    if depth <= 0:
        return None, None
    level = y[m] + depth / 2.0
    i = m
    while y[i - 1] < level:
        i -= 1
    lo = _crossing(x, y, i - 1, i, level)
    j = m
    while y[j + 1] < level:
        j += 1
    hi = _crossing(x, y, j, j + 1, level)
    return hi - lo, float(x[right] - x[left])


def _window(x, y, level=WINDOW_LEVEL):
    i0 = _centre_index(x)
    if i0 is None:
        return None
    if np.interp(0.0, x, y) > level or y[i0] > level:
        return None
    n = y.size
    i = j = i0
    while i > 0 and y[i - 1] <= level:
        i -= 1
    while j < n - 1 and y[j + 1] <= level:
        j += 1
    if i == 0 or j == n - 1:
        return None
    return _crossing(x, y, j, j + 1, level) - _crossing(x, y, i - 1, i, level)


def analyze(spectrum, floor=DEFAULT_FLOOR):
    """Peaks and widths of a spectrum.

    Maxima are strict 3-point local maxima above ``floor``, refined by a
    parabola through the neighbours.  Widths use linear interpolation of the
    threshold crossings and are ``None`` when the feature is absent or not
    closed inside the scanned range.
    """
    x, y = spectrum.valid()
    if x.size < 5:
        raise ValidationError("analyze needs at least 5 valid points")
    fwhm, separation = _central_dip(x, y)
    return SpectralFeatures(
        maxima=_local_maxima(x, y, floor),
        central_dip_fwhm=fwhm,
        window_width=_window(x, y),
        shoulder_separation=separation,
    )


def asymmetry(spectrum):
    """``max |R(delta) - R(-delta)|`` over the grid points of ``spectrum``."""
    x, y = spectrum.valid()
    span = min(-x[0], x[-1])
    if span <= 0:
        raise RangeError("spectrum does not straddle delta = 0")
    sel = np.abs(x) <= span
    return float(np.max(np.abs(y[sel] - np.interp(-x[sel], x, y))))


@dataclass
class WidthScan:
    """Rows of ``(value, SpectralFeatures or None)`` plus monotonicity verdicts."""

    vary: str
    rows: list
    errors: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.rows)

    def _series(self, attr):
        return [None if f is None else getattr(f, attr) for _, f in self.rows]

    @staticmethod
    def _strict(series):
        if any(v is None for v in series):
            return False
        return all(b > a for a, b in zip(series, series[1:]))

    @property
    def fwhm(self):
        return self._series("central_dip_fwhm")

    @property
    def window(self):
        return self._series("window_width")

    @property
    def fwhm_strictly_increasing(self):
        return self._strict(self.fwhm)

    @property
    def window_strictly_increasing(self):
        return self._strict(self.window)

    @property
    def fwhm_relative_variation(self):
        """``(max - min) / mean`` of the dip widths, or None if any is absent."""
        w = self.fwhm
        if not w or any(v is None for v in w):
            return None
        return (max(w) - min(w)) / float(np.mean(w))


def width_scan(params, vary, values, *, block_kind="exact", delta_min=-1.0, delta_max=1.0,
               n_points=2001, refine=True, floor=DEFAULT_FLOOR):
    """Sweep and analyse once per value of ``lam`` or ``g``.

    Failures for one value are recorded in ``errors`` and leave ``None`` in
    that row rather than aborting the scan.
    """
    field_name = {"lambda": "lam", "lam": "lam", "g": "g"}.get(vary)
    if field_name is None:
        raise ValidationError(f"vary must be 'lambda' or 'g', got {vary!r}")
    rows = []
    errors = {}
    for value in values:
        try:
            p = params.replace(**{field_name: float(value)})
            spec = sweep(p, block_kind, delta_min, delta_max, n_points, refine=refine)
            rows.append((float(value), analyze(spec, floor)))
        except (ValueError, ArithmeticError) as exc:
            rows.append((float(value), None))
            errors[float(value)] = str(exc)
    return WidthScan("lambda" if field_name == "lam" else "g", rows, errors)


@dataclass
class ParityRow:
    N: int
    klass: str
    r_at_zero: float
    width: float | None
    asymmetry: float
    r_at_q_roots: float


def parity_classification(params_base, n_values, *, delta_min=-1.0, delta_max=1.0, n_points=2001,
                          refine=True, zero_tol=1e-12, asymmetry_threshold=0.05):
    """Classify the resonant spectrum for each ``N``.

    ``"odd"``
        Full transmission at ``delta = 0`` and a left/right asymmetric line.
    ``"valley"``
        Even ``N`` whose reflection at the roots of ``Q`` (the Rabi-split
        dressed states) is at least one half: two bright peaks bound a dip.
    ``"window"``
        Even ``N`` whose dressed states reflect less than one half: the legs
        interfere destructively and a broad low-reflection window opens.

    ``width`` is ``central_dip_fwhm`` for valleys and ``window_width`` for
    windows.  The parameters must be resonant (``Omega = omega_0 = omega_c``).
    """
    p0 = params_base
    if not (p0.Omega == p0.omega_0 == p0.omega_c):
        raise ValidationError("parity_classification needs Omega == omega_0 == omega_c")
    rows = []
    for N in n_values:
        p = p0.replace(N=int(N))
        spec = sweep(p, "exact", delta_min, delta_max, n_points, refine=refine)
        feats = analyze(spec)
        block = exact_emitter_block(p)
        r0 = solve_scattering(block, p, wavevector_of_detuning(p, 0.0)).reflectance
        asym = asymmetry(spec)
        r_q = 0.5 * (reflection_at_q_zero(p, 1).r_rate + reflection_at_q_zero(p, -1).r_rate)
        if r0 <= zero_tol and asym > asymmetry_threshold:
            klass, width = "odd", None
        elif r_q >= 0.5:
            klass, width = "valley", feats.central_dip_fwhm
        else:
            klass, width = "window", feats.window_width
        rows.append(ParityRow(int(N), klass, float(r0), width, asym, float(r_q)))
    return rows
