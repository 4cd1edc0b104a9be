"""Limited piecewise-linear reconstruction on a three-cell stencil."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from slopelim.limiters import LimiterKind, phi_ab
from slopelim.mesh import StretchRatios

DEFAULT_EPS = 1e-14


@dataclass(frozen=True)
class StencilTriple:
    u_lo: float
    u_mid: float
    u_hi: float
    w_lo: float = 1.0
    w_mid: float = 1.0
    w_hi: float = 1.0

    def __post_init__(self) -> None:
        if not (self.w_lo > 0 and self.w_mid > 0 and self.w_hi > 0):
            raise ValueError("stencil cell widths must be positive")

    @property
    def ratios(self) -> StretchRatios:
        return StretchRatios(self.w_lo / self.w_mid, self.w_hi / self.w_mid)


@dataclass(frozen=True)
class LocalDiffs:
    d_minus: float
    d_plus: float
    d_total: float
    f: float
    degenerate: bool = False

    @property
    def monotone(self) -> bool:
        return not self.degenerate and 0.0 <= self.f <= 1.0


@dataclass(frozen=True)
class Reconstruction:
    slope: float
    u_left_edge: float
    u_right_edge: float


def local_diffs(t: StencilTriple, eps: float = DEFAULT_EPS) -> LocalDiffs:
    d_minus = t.u_mid - t.u_lo
    d_plus = t.u_hi - t.u_mid
    d_total = d_minus + d_plus
    scale = max(abs(t.u_lo), abs(t.u_mid), abs(t.u_hi), 1.0)
    if abs(d_total) <= eps * scale:
        return LocalDiffs(d_minus, d_plus, d_total, float("nan"), degenerate=True)
    return LocalDiffs(d_minus, d_plus, d_total, d_minus / d_total)


def reference_slope(t: StencilTriple) -> float:
    """Chord slope between the two neighbour centres."""
    return (t.u_hi - t.u_lo) / (0.5 * t.w_lo + t.w_mid + 0.5 * t.w_hi)


def limited_slope(kind: LimiterKind | str, t: StencilTriple, eps: float = DEFAULT_EPS) -> Reconstruction:
    kind = LimiterKind.parse(kind)
    d = local_diffs(t, eps)
    if d.monotone:
        r = t.ratios
        slope = float(phi_ab(kind, d.f, r.a, r.b)) * reference_slope(t)
    else:
        slope = 0.0
    half = 0.5 * slope * t.w_mid
    return Reconstruction(slope, t.u_mid - half, t.u_mid + half)


def periodic_slopes(
    kind: LimiterKind | str, u: np.ndarray, widths: np.ndarray, eps: float = DEFAULT_EPS
) -> np.ndarray:
    """Vectorised :func:`limited_slope` over every cell of a periodic mesh."""
    kind = LimiterKind.parse(kind)
    u = np.asarray(u, dtype=np.float64)
    w = np.asarray(widths, dtype=np.float64)
    u_lo, u_hi = np.roll(u, 1), np.roll(u, -1)
    w_lo, w_hi = np.roll(w, 1), np.roll(w, -1)
    d_minus = u - u_lo
    d_total = d_minus + (u_hi - u)
    scale = np.maximum(np.maximum(np.abs(u_lo), np.abs(u)), np.maximum(np.abs(u_hi), 1.0))
    live = np.abs(d_total) > eps * scale
    with np.errstate(invalid="ignore", divide="ignore"):
        f = np.where(live, d_minus / np.where(live, d_total, 1.0), -1.0)
    s_ref = (u_hi - u_lo) / (0.5 * w_lo + w + 0.5 * w_hi)
    return phi_ab(kind, f, w_lo / w, w_hi / w) * s_ref
