"""Hot loops of the advection step, compiled with numba when available.

Set ``SLOPELIM_BACKEND=numpy`` to force the pure-numpy path (the reference
implementation); the default is ``numba`` if it can be imported.
"""

from __future__ import annotations

import math
import os

import numpy as np

from slopelim.limiters import LimiterKind
from slopelim.reconstruction import periodic_slopes

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional accelerator
    HAVE_NUMBA = False

BACKENDS = ("numba", "numpy")


def _default_backend() -> str:
    requested = os.environ.get("SLOPELIM_BACKEND", "numba").strip().lower()
    if requested not in BACKENDS:
        raise ValueError(f"SLOPELIM_BACKEND must be one of {BACKENDS}, got {requested!r}")
    if requested == "numba" and not HAVE_NUMBA:
        return "numpy"
    return requested


_backend = _default_backend()


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> str:
    """Switch backend at runtime; returns the previous one."""
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    previous, _backend = _backend, name
    return previous


def step_numpy(u, widths, kind, speed, dt, eps):
    """One REA step for ``speed > 0`` on a periodic mesh."""
    slopes = periodic_slopes(kind, u, widths, eps)
    g = u + slopes * (widths - speed * dt) * 0.5
    nu = speed * dt / widths
    return u - nu * (g - np.roll(g, 1))


if HAVE_NUMBA:
    _NONE = LimiterKind.NONE.code
    _SUPERBEE = LimiterKind.SUPERBEE.code
    _MINMOD = LimiterKind.MINMOD.code
    _MC = LimiterKind.MC.code
    _VAN_LEER = LimiterKind.VAN_LEER.code
    _VAN_ALBADA = LimiterKind.VAN_ALBADA.code
    _SIN = LimiterKind.SIN.code
    _BERGER = LimiterKind.BERGER.code

    @njit(cache=True)
    def _phi_scalar(code, f, a, b):
        if not (f > 0.0 and f < 1.0):
            return 0.0
        g = 1.0 - f
        if code == _SUPERBEE:
            if f <= 1.0 / 3.0:
                return 4.0 * f
            if f <= 0.5:
                return 2.0 * g
            if f <= 2.0 / 3.0:
                return 2.0 * f
            return 4.0 * g
        if code == _MINMOD:
            return min(2.0 * f, 2.0 * g)
        if code == _MC:
            return min(1.0, min(4.0 * f, 4.0 * g))
        if code == _VAN_LEER:
            return 4.0 * f * g
        if code == _VAN_ALBADA:
            return 2.0 * f * g / (f * f + g * g)
        if code == _SIN:
            return math.sin(math.pi * f)
        if code == _BERGER:
            f2 = (1.0 + a) / (2.0 + a + b)
            scale = 2.0 + a + b
            if f <= f2:
                return scale * (f * (1.0 - a / (1.0 + a) * (f / f2) ** (1.0 / a)))
            return scale * (g * (1.0 - b / (1.0 + b) * (g / (1.0 - f2)) ** (1.0 / b)))
        return 0.0

    @njit(cache=True)
    def _step_loop(u, widths, code, speed, dt, eps):
        n = u.size
        g = np.empty(n)
        for i in range(n):
            im = i - 1 if i > 0 else n - 1
            ip = i + 1 if i < n - 1 else 0
            u_lo, u_mid, u_hi = u[im], u[i], u[ip]
            w_lo, w_mid, w_hi = widths[im], widths[i], widths[ip]
            d_minus = u_mid - u_lo
            d_total = d_minus + (u_hi - u_mid)
            scale = max(max(abs(u_lo), abs(u_mid)), max(abs(u_hi), 1.0))
            slope = 0.0
            if abs(d_total) > eps * scale and code != _NONE:
                f = d_minus / d_total
                s_ref = (u_hi - u_lo) / (0.5 * w_lo + w_mid + 0.5 * w_hi)
                slope = _phi_scalar(code, f, w_lo / w_mid, w_hi / w_mid) * s_ref
            g[i] = u_mid + slope * (w_mid - speed * dt) * 0.5
        out = np.empty(n)
        for i in range(n):
            im = i - 1 if i > 0 else n - 1
            nu = speed * dt / widths[i]
            out[i] = u[i] - nu * (g[i] - g[im])
        return out

    def step_numba(u, widths, kind, speed, dt, eps):
        return _step_loop(
            np.ascontiguousarray(u, dtype=np.float64),
            np.ascontiguousarray(widths, dtype=np.float64),
            LimiterKind.parse(kind).code,
            float(speed),
            float(dt),
            float(eps),
        )

else:  # pragma: no cover
    step_numba = None


def advect_step(u, widths, kind, speed, dt, eps, backend: str | None = None):
    """Dispatch one positive-speed step to the selected backend."""
    backend = backend or _backend
    if backend == "numba":
        return step_numba(u, widths, kind, speed, dt, eps)
    return step_numpy(u, widths, kind, speed, dt, eps)
