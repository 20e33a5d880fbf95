"""Even Mathieu function and the time-dependent-gauge drive built on it.

The even solution M_C(a, q, z) of y'' + (a - 2 q cos 2z) y = 0 is computed
by direct adaptive integration from z = 0 with y(0) = 1, y'(0) = 0.  The
normalization is immaterial downstream: the drive depends on the
logarithmic derivative only, so any constant rescaling of M_C cancels.
The derivative is carried as a second state component, never finite-
differenced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from .errors import NonFiniteError, ZeroCrossingError

__all__ = ["MathieuDrive", "mathieu_c", "mathieu_c_and_derivative",
           "drive_v", "drive_v_dot", "ode_residual"]

_OVERFLOW = 1e150
_RTOL = 3e-14
_ATOL = 1e-15


@dataclass(frozen=True)
class MathieuDrive:
    """Drive data: Mathieu arguments a = 4(alpha-gamma)^2/W^2, q = 2V/W^2."""

    a: float
    q: float
    W: float
    V: float
    alpha_minus_gamma: float

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("a must be nonnegative")
        target = 4.0 * self.alpha_minus_gamma ** 2
        if abs(self.a * self.W ** 2 - target) > 1e-12 * max(1.0, target):
            raise ValueError("a * W^2 must reconstruct 4 (alpha-gamma)^2")

    @classmethod
    def from_couplings(cls, alpha_minus_gamma: float, V: float, W: float
                       ) -> "MathieuDrive":
        return cls(a=4.0 * alpha_minus_gamma ** 2 / W ** 2,
                   q=2.0 * V / W ** 2,
                   W=W, V=V, alpha_minus_gamma=alpha_minus_gamma)


def _integrate(a: float, q: float, z_end: float):
    """Dense solution of the Mathieu equation on [0, z_end] (either sign)."""

    def rhs(z, y):
        return (y[1], -(a - 2.0 * q * math.cos(2.0 * z)) * y[0])

    def blowup(z, y):
        return abs(y[0]) + abs(y[1]) - _OVERFLOW

    blowup.terminal = True
    sol = solve_ivp(rhs, (0.0, z_end), (1.0, 0.0), method="DOP853",
                    rtol=_RTOL, atol=_ATOL, dense_output=True,
                    events=blowup)
    if sol.status == 1:
        raise NonFiniteError(
            f"Mathieu solution overflowed before z={z_end} (a={a}, q={q})"
        )
    if not sol.success:
        raise RuntimeError(f"Mathieu integration failed: {sol.message}")
    return sol


def mathieu_c_and_derivative(a: float, q: float, z: float
                             ) -> tuple[float, float]:
    """(M_C, dM_C/dz) at real z with the y(0)=1, y'(0)=0 normalization."""
    if z == 0.0:
        return 1.0, 0.0
    sol = _integrate(a, q, z)
    y = sol.sol(z)
    return float(y[0]), float(y[1])


def mathieu_c(a: float, q: float, z: float) -> float:
    """Even Mathieu function M_C(a, q, z)."""
    return mathieu_c_and_derivative(a, q, z)[0]


def _log_derivatives(d: MathieuDrive, t: float) -> tuple[float, float]:
    """(f', f'') of f(t) = ln M_C(a, q, W t / 2)."""
    z = 0.5 * d.W * t
    g, gp = mathieu_c_and_derivative(d.a, d.q, z)
    if abs(g) < 1e-12:
        raise ZeroCrossingError(f"M_C crosses zero near t={t}")
    half_w = 0.5 * d.W
    fp = half_w * gp / g
    # g'' from the defining equation, no extra integration state needed
    gpp = -(d.a - 2.0 * d.q * math.cos(2.0 * z)) * g
    fpp = half_w ** 2 * (gpp / g - (gp / g) ** 2)
    return fp, fpp


def drive_v(d: MathieuDrive, t: float, variant: str = "printed") -> complex:
    """Complex drive amplitude v(t) of the momentum-mixing perturbation.

    variant="printed":  v = V (alpha - gamma + i f') / 2
    variant="rescaled": v = (alpha - gamma)/2 + i V f' / 2
    with f the log of the even Mathieu solution at argument W t / 2.  The
    two variants coincide at V = 1 and differ only in how the strength
    multiplies the static part; both are exposed because the observable
    route downstream does not depend on the choice.
    """
    fp, _ = _log_derivatives(d, t)
    if variant == "printed":
        return 0.5 * d.V * (d.alpha_minus_gamma + 1j * fp)
    if variant == "rescaled":
        return 0.5 * d.alpha_minus_gamma + 0.5j * d.V * fp
    raise ValueError(f"unknown drive variant {variant!r}")


def drive_v_dot(d: MathieuDrive, t: float, variant: str = "printed") -> complex:
    """Time derivative of drive_v; identical for both variants (i V f''/2)."""
    if variant not in ("printed", "rescaled"):
        raise ValueError(f"unknown drive variant {variant!r}")
    _, fpp = _log_derivatives(d, t)
    return 0.5j * d.V * fpp


def ode_residual(a: float, q: float, z_grid, h: float = 1e-4) -> float:
    """Max |y'' + (a - 2q cos 2z) y| of the dense solution over a grid.

    y'' is formed from Richardson-extrapolated central differences of the
    integrated derivative component, so the residual probes the interpolant
    rather than the integrator's internal consistency.
    """
    z_grid = np.asarray(z_grid, dtype=float)
    sol = _integrate(a, q, float(z_grid.max()) + 4.0 * h)

    def ypp(z):
        d1 = (sol.sol(z + h)[1] - sol.sol(z - h)[1]) / (2.0 * h)
        d2 = (sol.sol(z + h / 2)[1] - sol.sol(z - h / 2)[1]) / h
        return (4.0 * d2 - d1) / 3.0

    worst = 0.0
    for z in z_grid:
        if z < 2.0 * h:
            continue
        y = sol.sol(z)[0]
        worst = max(worst, abs(ypp(z) + (a - 2.0 * q * math.cos(2.0 * z)) * y))
    return worst
