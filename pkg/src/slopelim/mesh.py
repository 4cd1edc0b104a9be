"""One-dimensional meshes.

Cells are indexed from zero: cell ``i`` spans ``edges[i]`` to ``edges[i + 1]``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class StretchRatios:
    """Neighbour-to-centre width ratios ``a = dx[i-1]/dx[i]``, ``b = dx[i+1]/dx[i]``."""

    a: float = 1.0
    b: float = 1.0

    def __post_init__(self) -> None:
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"stretch ratios must be positive, got a={self.a}, b={self.b}")


UNIFORM = StretchRatios(1.0, 1.0)


@dataclass(frozen=True, eq=False)
class Mesh:
    """Immutable 1-D mesh defined by its strictly increasing edge coordinates."""

    edges: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        edges = np.array(self.edges, dtype=np.float64)
        if edges.ndim != 1 or edges.size < 4:
            raise ValueError("a mesh needs at least 3 cells (4 edges)")
        if not np.all(np.isfinite(edges)):
            raise ValueError("mesh edges must be finite")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("mesh edges must be strictly increasing")
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        widths = np.diff(edges)
        # Spacing that is uniform up to rounding of the edge coordinates is
        # reported as exactly uniform, so a = b = 1 holds bitwise.
        h = (edges[-1] - edges[0]) / widths.size
        scale = max(abs(edges[0]), abs(edges[-1]), h)
        if np.max(np.abs(widths - h)) <= 8 * np.finfo(float).eps * scale:
            widths = np.full(widths.size, h)
        widths.setflags(write=False)
        object.__setattr__(self, "_widths", widths)

    def __repr__(self) -> str:
        return f"Mesh(n_cells={self.n_cells}, x_lo={self.x_lo!r}, x_hi={self.x_hi!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mesh):
            return NotImplemented
        return np.array_equal(self.edges, other.edges)

    __hash__ = None  # type: ignore[assignment]

    @property
    def n_cells(self) -> int:
        return self.edges.size - 1

    @property
    def x_lo(self) -> float:
        return float(self.edges[0])

    @property
    def x_hi(self) -> float:
        return float(self.edges[-1])

    @property
    def length(self) -> float:
        return self.x_hi - self.x_lo

    @property
    def widths(self) -> np.ndarray:
        return self._widths

    @property
    def is_uniform(self) -> bool:
        return bool(np.all(self._widths == self._widths[0]))

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def reversed(self) -> Mesh:
        """Mirror image ``x -> x_lo + x_hi - x``, so cell ``i`` maps to ``N-1-i``."""
        return Mesh(self.x_lo + self.x_hi - self.edges[::-1])

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["edge"])
            for x in self.edges:
                writer.writerow([format(float(x), ".17g")])

    @classmethod
    def from_csv(cls, path: str | Path) -> Mesh:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != ["edge"]:
                raise ValueError(f"expected header 'edge', got {header!r}")
            return cls(np.array([float(row[0]) for row in reader if row]))


def make_uniform(n_cells: int, x_lo: float, x_hi: float) -> Mesh:
    if n_cells < 3:
        raise ValueError(f"n_cells must be >= 3, got {n_cells}")
    if not x_hi > x_lo:
        raise ValueError(f"x_hi must exceed x_lo, got [{x_lo}, {x_hi}]")
    k = np.arange(n_cells + 1, dtype=np.float64)
    edges = x_lo + (x_hi - x_lo) * (k / n_cells)
    edges[-1] = x_hi
    return Mesh(edges)


def splitmix64(seed: int):
    """Yield uniform doubles in [0, 1) from the SplitMix64 sequence.

    Uses the top 53 bits of each 64-bit output, so the stream is reproducible
    in any language with unsigned 64-bit arithmetic.
    """
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        yield (z >> 11) * (1.0 / (1 << 53))


def make_stretched(
    n_cells: int,
    x_lo: float,
    x_hi: float,
    ratio_lo: float,
    ratio_hi: float,
    seed: int,
) -> Mesh:
    """Random non-uniform mesh with successive width ratios in ``[ratio_lo, ratio_hi]``.

    Starting from a unit width, each next width is the previous one times a
    ratio drawn uniformly from the range (SplitMix64 stream of ``seed``). When
    the range contains 1 the widths are additionally kept inside
    ``[min(ratio_lo, 1)**2, max(ratio_hi, 1)**2]``; clipping at that band
    only ever shrinks a step towards ratio 1, so realized ratios stay in range.
    Without the band a random walk in log-width would produce cells many orders
    of magnitude smaller than their neighbours. Finally the widths are scaled
    to span ``[x_lo, x_hi]`` exactly.
    """
    if n_cells < 3:
        raise ValueError(f"n_cells must be >= 3, got {n_cells}")
    if not x_hi > x_lo:
        raise ValueError(f"x_hi must exceed x_lo, got [{x_lo}, {x_hi}]")
    if not (0 < ratio_lo <= ratio_hi):
        raise ValueError(f"need 0 < ratio_lo <= ratio_hi, got [{ratio_lo}, {ratio_hi}]")
    if ratio_lo == ratio_hi == 1.0:
        return make_uniform(n_cells, x_lo, x_hi)

    banded = ratio_lo <= 1.0 <= ratio_hi
    w_min = min(ratio_lo, 1.0) ** 2
    w_max = max(ratio_hi, 1.0) ** 2
    rng = splitmix64(seed)
    widths = np.empty(n_cells)
    widths[0] = 1.0
    for k in range(1, n_cells):
        r = ratio_lo + (ratio_hi - ratio_lo) * next(rng)
        w = widths[k - 1] * r
        if banded:
            w = min(max(w, w_min), w_max)
        widths[k] = w

    cum = np.concatenate(([0.0], np.cumsum(widths)))
    edges = x_lo + (x_hi - x_lo) * (cum / cum[-1])
    edges[0] = x_lo
    edges[-1] = x_hi
    return Mesh(edges)


def stretch_ratios(mesh: Mesh, i: int) -> StretchRatios:
    """Stretch ratios of interior cell ``i`` (``1 <= i <= N-2``)."""
    if not 1 <= i <= mesh.n_cells - 2:
        raise IndexError(f"cell {i} is not interior to a {mesh.n_cells}-cell mesh")
    w = mesh.widths
    return StretchRatios(w[i - 1] / w[i], w[i + 1] / w[i])


def periodic_ratios(widths: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell ``(a, b)`` arrays with periodic wrap at the ends."""
    return np.roll(widths, 1) / widths, np.roll(widths, -1) / widths
