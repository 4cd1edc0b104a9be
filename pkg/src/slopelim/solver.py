"""Finite-volume solver for ``u_t + speed * u_x = 0`` on a periodic 1-D mesh.

Each step reconstructs a limited linear profile per cell, shifts it exactly by
``speed * dt`` and averages back, which gives the upwind interface flux

    F[i+1/2] = speed * (u[i] + slope[i] * (dx[i] - speed * dt) / 2)

for ``speed > 0``. Negative speeds are solved on the mirrored mesh.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from slopelim import _kernels
from slopelim.analysis import total_variation
from slopelim.limiters import LimiterKind
from slopelim.mesh import Mesh
from slopelim.reconstruction import DEFAULT_EPS


class CflViolation(ValueError):
    pass


class InitialCondition(str, enum.Enum):
    SQUARE = "square"
    SINE = "sine"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class SimConfig:
    mesh: Mesh
    speed: float = 1.0
    cfl: float = 0.8
    limiter: LimiterKind = LimiterKind.MC
    ic: InitialCondition = InitialCondition.SQUARE
    t_end: float | None = None  # None: one period, length / |speed|
    bc: str = "periodic"
    eps: float = DEFAULT_EPS

    def __post_init__(self) -> None:
        object.__setattr__(self, "limiter", LimiterKind.parse(self.limiter))
        object.__setattr__(self, "ic", InitialCondition(self.ic))
        if not (0.0 < self.cfl <= 1.0):
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.speed == 0 or not math.isfinite(self.speed):
            raise ValueError(f"speed must be finite and nonzero, got {self.speed}")
        if self.t_end is not None and not self.t_end >= 0:
            raise ValueError(f"t_end must be >= 0, got {self.t_end}")
        if self.bc != "periodic":
            raise ValueError(f"only periodic boundaries are supported, got {self.bc!r}")

    @property
    def period(self) -> float:
        return self.mesh.length / abs(self.speed)

    @property
    def final_time(self) -> float:
        return self.period if self.t_end is None else float(self.t_end)

    def replace(self, **changes) -> SimConfig:
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True, eq=False)
class State:
    t: float
    u: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        u = np.array(self.u, dtype=np.float64)
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    def total(self, mesh: Mesh) -> float:
        return float(np.sum(self.u * mesh.widths))


# Antiderivatives of the initial profiles over one period [x_lo, x_lo + L],
# written in the local coordinate s = (x - x_lo) / L in [0, 1]; they return
# the integral in units of L.


def _square_primitive(s):
    return np.clip(s, 1.0 / 3.0, 2.0 / 3.0) - 1.0 / 3.0


def _sine_primitive(s, x_lo, length):
    # integral of sin(2 pi x / L) dx / L from x_lo to x_lo + s L.
    k = 2.0 * np.pi / length
    return (np.cos(k * x_lo) - np.cos(k * (x_lo + s * length))) / (k * length)


_HUMP_LO, _HUMP_HI = 0.55, 0.85
_BOX_LO, _BOX_HI = 0.15, 0.45


def _composite_primitive(s):
    box = np.clip(s, _BOX_LO, _BOX_HI) - _BOX_LO
    width = _HUMP_HI - _HUMP_LO
    z = (np.clip(s, _HUMP_LO, _HUMP_HI) - _HUMP_LO) / width
    hump = width / np.pi * (1.0 - np.cos(np.pi * z))
    return box + hump


def _primitive(ic: InitialCondition, mesh: Mesh):
    """Periodic extension of the antiderivative, as a function of x."""
    x_lo, length = mesh.x_lo, mesh.length
    if ic is InitialCondition.SQUARE:
        base, per_period = _square_primitive, 1.0 / 3.0
    elif ic is InitialCondition.SINE:
        base, per_period = (lambda s: _sine_primitive(s, x_lo, length)), 0.0
    else:
        base = _composite_primitive
        per_period = float(_composite_primitive(1.0))

    def big(x):
        s = (np.asarray(x, dtype=np.float64) - x_lo) / length
        n = np.floor(s)
        return length * (n * per_period + base(s - n))

    return big


def cell_averages(ic: InitialCondition | str, mesh: Mesh, shift: float = 0.0) -> np.ndarray:
    """Exact averages of ``u0(x - shift)`` over every cell."""
    prim = _primitive(InitialCondition(ic), mesh)
    e = mesh.edges - shift
    return (prim(e[1:]) - prim(e[:-1])) / np.diff(mesh.edges)


def initial_state(config: SimConfig) -> State:
    return State(0.0, cell_averages(config.ic, config.mesh))


def exact_solution(config: SimConfig, t: float) -> State:
    shift = math.fmod(config.speed * t, config.mesh.length)
    if shift == 0.0:
        return State(t, initial_state(config).u)
    return State(t, cell_averages(config.ic, config.mesh, shift))


def stable_dt(config: SimConfig) -> float:
    return config.cfl * float(np.min(config.mesh.widths)) / abs(config.speed)


def step(state: State, config: SimConfig, dt: float, backend: str | None = None) -> State:
    widths = config.mesh.widths
    speed = abs(config.speed)
    if speed * dt > np.min(widths) * (1.0 + 1e-14):
        raise CflViolation(
            f"|speed|*dt = {speed * dt:.17g} exceeds the smallest cell width {np.min(widths):.17g}"
        )
    if config.speed > 0:
        u = _kernels.advect_step(state.u, widths, config.limiter, speed, dt, config.eps, backend)
    else:
        u = _kernels.advect_step(
            state.u[::-1], widths[::-1], config.limiter, speed, dt, config.eps, backend
        )[::-1]
    return State(state.t + dt, u)


@dataclass
class RunResult:
    config: SimConfig
    snapshots: list[tuple[int, State]]
    history: np.ndarray  # columns: step, t, tv, total_mass, u_min, u_max

    @property
    def final(self) -> State:
        return self.snapshots[-1][1]

    @property
    def n_steps(self) -> int:
        return int(self.history[-1, 0])


def time_levels(config: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """``(t, dt)``: times ``0 = t[0] < ... < t[-1] = t_end`` and the step sizes.

    Every step uses :func:`stable_dt` except the last, which is truncated to
    land on ``t_end``.
    """
    t_end = config.final_time
    if t_end == 0.0:
        return np.zeros(1), np.zeros(0)
    dt = stable_dt(config)
    n = max(1, math.ceil(t_end / dt - 1e-9))
    t = np.arange(n + 1, dtype=np.float64) * dt
    if n > 1 and t[n - 1] >= t_end:
        n -= 1
        t = t[: n + 1]
    t[-1] = t_end
    steps = np.full(n, dt)
    last = t_end - t[n - 1]
    # a remainder equal to dt up to rounding of t[n-1] is a full step
    if abs(last - dt) > 8 * np.finfo(float).eps * t_end:
        steps[-1] = last
    return t, steps


def _record(k: int, state: State, mesh: Mesh):
    return (k, state.t, total_variation(state.u), state.total(mesh), state.u.min(), state.u.max())


def run(config: SimConfig, snapshot_every: int = 0, backend: str | None = None) -> RunResult:
    """Advance from ``t = 0`` to ``config.final_time``.

    ``snapshot_every = k > 0`` keeps step 0 and every k-th step; the final
    state is always kept.
    """
    if snapshot_every < 0:
        raise ValueError("snapshot_every must be >= 0")
    mesh = config.mesh
    state = initial_state(config)
    levels, steps = time_levels(config)
    history = np.empty((levels.size, 6))
    history[0] = _record(0, state, mesh)
    snapshots = [(0, state)] if snapshot_every > 0 else []
    for k in range(1, levels.size):
        state = step(state, config, steps[k - 1], backend)
        state = State(levels[k], state.u)
        history[k] = _record(k, state, mesh)
        if snapshot_every > 0 and k % snapshot_every == 0:
            snapshots.append((k, state))
    last = levels.size - 1
    if not snapshots or snapshots[-1][0] != last:
        snapshots.append((last, state))
    return RunResult(config, snapshots, history)
