"""Slope limiters in the ``phi(f)`` form and the regions they must live in.

``f = d_minus / d_total`` locates the centre value between its neighbours
(``0 <= f <= 1`` for monotone data) and ``phi = s / s_R`` is the limited slope
normalised by the chord slope through the two neighbours. Every function here
accepts scalars or numpy arrays for ``f`` and returns the same shape.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from slopelim.mesh import UNIFORM, StretchRatios


class LimiterKind(str, enum.Enum):
    NONE = "none"
    SUPERBEE = "superbee"
    MINMOD = "minmod"
    MC = "mc"
    VAN_LEER = "van_leer"
    VAN_ALBADA = "van_albada"
    SIN = "sin"
    BERGER = "berger"

    @classmethod
    def parse(cls, value: LimiterKind | str) -> LimiterKind:
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            allowed = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown limiter {value!r}; choose from {allowed}") from None

    @property
    def code(self) -> int:
        """Small integer id used by the compiled kernels."""
        return _CODES[self]


_CODES = {kind: i for i, kind in enumerate(LimiterKind)}

# Limiters that are defined for the uniform mesh and ignore (a, b).
SYMMETRIC_KINDS = (
    LimiterKind.SUPERBEE,
    LimiterKind.MINMOD,
    LimiterKind.MC,
    LimiterKind.VAN_LEER,
    LimiterKind.VAN_ALBADA,
    LimiterKind.SIN,
)
HIGH_RESOLUTION_KINDS = SYMMETRIC_KINDS + (LimiterKind.BERGER,)


class Region(str, enum.Enum):
    TVD = "tvd"
    HIGH_RESOLUTION = "high_resolution"


def _as_ratios(ratios: StretchRatios | tuple[float, float] | None) -> StretchRatios:
    if ratios is None:
        return UNIFORM
    if isinstance(ratios, StretchRatios):
        return ratios
    return StretchRatios(*ratios)


def _unwrap(value: np.ndarray, scalar: bool):
    return float(value) if scalar else value


def _superbee(f):
    return np.where(
        f <= 1.0 / 3.0,
        4.0 * f,
        np.where(f <= 0.5, 2.0 * (1.0 - f), np.where(f <= 2.0 / 3.0, 2.0 * f, 4.0 * (1.0 - f))),
    )


def _minmod(f):
    return np.minimum(2.0 * f, 2.0 * (1.0 - f))


def _mc(f):
    return np.minimum(1.0, np.minimum(4.0 * f, 4.0 * (1.0 - f)))


def _van_leer(f):
    return 4.0 * f * (1.0 - f)


def _van_albada(f):
    g = 1.0 - f
    return 2.0 * f * g / (f * f + g * g)


def _sin(f):
    return np.sin(np.pi * f)


def _berger(f, a, b):
    # Generalized van Leer of Berger et al., scaled by (2 + a + b) so that it
    # reaches 1 at f2 from both sides and is 4f(1-f) when a = b = 1.
    f2 = (1.0 + a) / (2.0 + a + b)
    scale = 2.0 + a + b
    with np.errstate(invalid="ignore", divide="ignore"):
        left = f * (1.0 - a / (1.0 + a) * np.power(np.maximum(f, 0.0) / f2, 1.0 / a))
        g = 1.0 - f
        right = g * (1.0 - b / (1.0 + b) * np.power(np.maximum(g, 0.0) / (1.0 - f2), 1.0 / b))
    return scale * np.where(f <= f2, left, right)


_FORMULAS = {
    LimiterKind.SUPERBEE: _superbee,
    LimiterKind.MINMOD: _minmod,
    LimiterKind.MC: _mc,
    LimiterKind.VAN_LEER: _van_leer,
    LimiterKind.VAN_ALBADA: _van_albada,
    LimiterKind.SIN: _sin,
}


def phi_ab(kind: LimiterKind, f, a, b) -> np.ndarray:
    """Array form of :func:`phi`; ``a`` and ``b`` may be arrays broadcasting with ``f``."""
    f = np.asarray(f, dtype=np.float64)
    inside = (f >= 0.0) & (f <= 1.0)
    fc = np.where(inside, f, 0.5)
    if kind is LimiterKind.NONE:
        value = np.zeros_like(fc)
    elif kind is LimiterKind.BERGER:
        value = _berger(fc, np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64))
    else:
        value = _FORMULAS[kind](fc)
    # Exactly zero at the ends of [0, 1]: the limit of every formula above.
    return np.where(inside & (f > 0.0) & (f < 1.0), value, 0.0)


def phi(kind: LimiterKind | str, f, ratios: StretchRatios | tuple[float, float] | None = None):
    """Non-dimensional limited slope ``phi(f; a, b)``.

    Zero for ``f`` outside ``[0, 1]`` (local extremum). Only ``berger``
    depends on the stretch ratios.
    """
    kind = LimiterKind.parse(kind)
    r = _as_ratios(ratios)
    return _unwrap(phi_ab(kind, f, r.a, r.b), np.ndim(f) == 0)


def phi_berger(f, ratios: StretchRatios | tuple[float, float] | None = None):
    return phi(LimiterKind.BERGER, f, ratios)


@dataclass(frozen=True)
class BoundingSlopes:
    """The four bounding slopes normalised by the reference slope."""

    phi_minus: float | np.ndarray
    phi_left: float | np.ndarray
    phi_plus: float | np.ndarray
    phi_right: float | np.ndarray

    def as_tuple(self):
        return (self.phi_minus, self.phi_left, self.phi_plus, self.phi_right)


def bounding_slopes(f, ratios: StretchRatios | tuple[float, float] | None = None) -> BoundingSlopes:
    """Slopes of the lines through ``U[i-1]`` (``phi_minus``, ``phi_left``) and ``U[i+1]``.

    ``phi_minus``/``phi_plus`` join the cell centre to the neighbour
    centres; ``phi_left``/``phi_right`` put the cell's edge value exactly on
    the neighbour average.
    """
    r = _as_ratios(ratios)
    scalar = np.ndim(f) == 0
    f = np.asarray(f, dtype=np.float64)
    s = 2.0 + r.a + r.b
    g = 1.0 - f
    return BoundingSlopes(
        _unwrap(s / (1.0 + r.a) * f, scalar),
        _unwrap(s * f, scalar),
        _unwrap(s / (1.0 + r.b) * g, scalar),
        _unwrap(s * g, scalar),
    )


def hr_region_bounds(f, ratios: StretchRatios | tuple[float, float] | None = None):
    """``(lower, upper)``: the two smallest bounding slopes, or ``(0, 0)`` off ``[0, 1]``."""
    scalar = np.ndim(f) == 0
    f = np.asarray(f, dtype=np.float64)
    slopes = np.sort(np.stack(np.broadcast_arrays(*bounding_slopes(f, ratios).as_tuple())), axis=0)
    inside = (f >= 0.0) & (f <= 1.0)
    lower = np.where(inside, slopes[0], 0.0)
    upper = np.where(inside, slopes[1], 0.0)
    return _unwrap(lower, scalar), _unwrap(upper, scalar)


def tvd_region_bounds(f, ratios: StretchRatios | tuple[float, float] | None = None):
    """``(0, min(phi_left, phi_right))`` on ``[0, 1]``, ``(0, 0)`` elsewhere."""
    scalar = np.ndim(f) == 0
    f = np.asarray(f, dtype=np.float64)
    bs = bounding_slopes(f, ratios)
    inside = (f >= 0.0) & (f <= 1.0)
    upper = np.where(inside, np.minimum(bs.phi_left, bs.phi_right), 0.0)
    return _unwrap(np.zeros_like(upper), scalar), _unwrap(upper, scalar)


@dataclass(frozen=True)
class SpecialPoints:
    f1: float
    f2: float
    f3: float


def special_points(ratios: StretchRatios | tuple[float, float] | None = None) -> SpecialPoints:
    """Where pairs of bounding slopes cross.

    ``f1``: ``phi_left == phi_plus``; ``f2``: ``phi_minus == phi_plus`` (where
    affine data lands); ``f3``: ``phi_minus == phi_right``.
    """
    r = _as_ratios(ratios)
    return SpecialPoints(
        1.0 / (2.0 + r.b),
        (1.0 + r.a) / (2.0 + r.a + r.b),
        (1.0 + r.a) / (2.0 + r.a),
    )


def region_bounds(region: Region | str, f, ratios=None):
    region = Region(region)
    if region is Region.TVD:
        return tvd_region_bounds(f, ratios)
    return hr_region_bounds(f, ratios)


def sample_grid(n_samples: int, ratios=None) -> np.ndarray:
    """Uniform grid on ``[0, 1]`` with the three special points merged in."""
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    sp = special_points(ratios)
    return np.unique(np.concatenate((np.linspace(0.0, 1.0, n_samples), [sp.f1, sp.f2, sp.f3])))


@dataclass
class RegionReport:
    kind: LimiterKind
    a: float
    b: float
    region: Region
    n_samples: int
    tolerance: float
    violations: list[tuple[float, float, float, float]] = field(default_factory=list)
    max_excess: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def rows(self):
        """``(f, phi, lower, upper, excess)`` for each violation."""
        for f, p, lo, hi in self.violations:
            yield f, p, lo, hi, max(lo - p, p - hi)


def check_region(
    kind: LimiterKind | str,
    ratios: StretchRatios | tuple[float, float] | None = None,
    n_samples: int = 1001,
    tolerance: float = 1e-12,
    region: Region | str = Region.HIGH_RESOLUTION,
) -> RegionReport:
    """Sample ``phi`` over ``[0, 1]`` and record every point outside the region."""
    kind = LimiterKind.parse(kind)
    r = _as_ratios(ratios)
    region = Region(region)
    f = sample_grid(n_samples, r)
    p = phi_ab(kind, f, r.a, r.b)
    lower, upper = region_bounds(region, f, r)
    excess = np.maximum(lower - p, p - upper)
    bad = excess > tolerance
    violations = [
        (float(f[k]), float(p[k]), float(lower[k]), float(upper[k])) for k in np.flatnonzero(bad)
    ]
    return RegionReport(
        kind=kind,
        a=r.a,
        b=r.b,
        region=region,
        n_samples=int(f.size),
        tolerance=tolerance,
        violations=violations,
        max_excess=float(max(excess.max(), 0.0)),
    )


def symmetry_defect(kind: LimiterKind | str, n_samples: int = 1001) -> float:
    """``max |phi(1-f) - phi(f)|`` on a uniform mesh."""
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    kind = LimiterKind.parse(kind)
    f = np.linspace(0.0, 1.0, n_samples)
    return float(np.max(np.abs(phi_ab(kind, 1.0 - f, 1.0, 1.0) - phi_ab(kind, f, 1.0, 1.0))))
