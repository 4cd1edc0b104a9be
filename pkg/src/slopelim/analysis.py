"""Total-variation audits, error norms and convergence studies."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def total_variation(u, bc: str = "periodic") -> float:
    """``sum |u[i+1] - u[i]|`` including the wrap pair ``|u[0] - u[-1]|``."""
    if bc != "periodic":
        raise ValueError(f"only periodic boundaries are supported, got {bc!r}")
    u = np.asarray(u, dtype=np.float64)
    if u.size < 2:
        raise ValueError("total variation needs at least two values")
    return float(np.sum(np.abs(np.diff(u))) + abs(u[0] - u[-1]))


@dataclass
class TvAudit:
    tv_series: list[tuple[int, float, float]]
    max_increase: float

    def passed(self, tolerance: float = 1e-12) -> bool:
        return self.max_increase <= tolerance


def tv_audit(result) -> TvAudit:
    """Per-step TV series of a :class:`~slopelim.solver.RunResult`.

    ``max_increase`` is the largest ``tv[k+1] - tv[k]`` and is negative when
    TV strictly decreases every step; with a single record it is 0.
    """
    hist = np.asarray(result.history)
    series = [(int(s), float(t), float(tv)) for s, t, tv in hist[:, :3]]
    if hist.shape[0] < 2:
        return TvAudit(series, 0.0)
    return TvAudit(series, float(np.max(np.diff(hist[:, 2]))))


def l1_error(state, exact, mesh) -> float:
    """Width-weighted ``sum |u - u_exact| * dx``; accepts states or plain arrays."""
    u = np.asarray(getattr(state, "u", state), dtype=np.float64)
    v = np.asarray(getattr(exact, "u", exact), dtype=np.float64)
    w = mesh.widths
    if not (u.shape == v.shape == w.shape):
        raise ValueError(f"dimension mismatch: {u.shape}, {v.shape}, mesh of {w.size} cells")
    return float(np.sum(np.abs(u - v) * w))


@dataclass(frozen=True)
class ConvergenceRow:
    n_cells: int
    l1_error: float
    observed_order: float | None = None


def observed_order(e_coarse: float, e_fine: float, ratio: float = 2.0) -> float | None:
    if e_coarse <= 0.0 or e_fine <= 0.0:
        return None
    return math.log(e_coarse / e_fine) / math.log(ratio)


def convergence_study(base_config, n_list, backend: str | None = None) -> list[ConvergenceRow]:
    """L1 errors on a sequence of doubled uniform meshes over the base domain.

    Each resolution keeps the base config's speed, cfl, limiter, initial
    condition and end time (one period by default).
    """
    from slopelim.mesh import make_uniform
    from slopelim.solver import exact_solution, run

    n_list = [int(n) for n in n_list]
    if len(n_list) < 2:
        raise ValueError("convergence_study needs at least two resolutions")
    for lo, hi in zip(n_list, n_list[1:]):
        if lo < 3 or hi != 2 * lo:
            raise ValueError(f"resolutions must start >= 3 and double each time, got {n_list}")

    base_mesh = base_config.mesh
    rows: list[ConvergenceRow] = []
    for n in n_list:
        mesh = make_uniform(n, base_mesh.x_lo, base_mesh.x_hi)
        config = base_config.replace(mesh=mesh)
        final = run(config, 0, backend).final
        err = l1_error(final, exact_solution(config, final.t), mesh)
        order = observed_order(rows[-1].l1_error, err) if rows else None
        rows.append(ConvergenceRow(n, err, order))
    return rows
