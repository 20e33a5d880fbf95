"""Inverted-oscillator (Region II) reduced thermodynamics and driven response.

Tracing out the anti-resonant half of the generalized spectrum leaves a
complex reduced partition function Z_r = 1/(2i sin(beta |Omega| / 2)) on
0 < beta |Omega| < 2 pi.  Free energy and entropy are complex; internal
energy, specific heat and mean occupation are real:

    U_r = (|Omega|/2)  cot(beta |Omega| / 2)
    C_r = (|Omega| / (2 T sin(|Omega|/(2T))))^2
    n_r = (1/2) cot(beta |Omega| / 2)

U_r crosses zero at k_B T = |Omega| / pi, the temperature floor of the
reduced description.  A cosine drive switched on at t = 0 corrects the
occupation at second order through the kernel F(t, beta) assembled from
the time kernels K1 (growing) and K2 (decaying) and the spectral sums
S+-, S0 evaluated at complex argument beta +- 2it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (OutOfDomainError, OverflowSaturationError,
                     PoleAtSinZeroError)
from .response import DriveParams

__all__ = [
    "IhoThermo", "SecondOrderKernel",
    "partition_reduced", "thermo_reduced",
    "kernel_K", "s_functions", "eta_factor",
    "kernel_F", "second_order_kernel", "occupation_driven",
]

_POLE_TOL = 1e-12
_MAX_EXPONENT = 700.0


@dataclass(frozen=True)
class IhoThermo:
    """Reduced thermodynamic set at temperature T (k_B = hbar = 1)."""

    Z_r: complex
    F_r: complex
    S_r: complex
    U_r: float
    C_r: float
    n_r: float
    T: float


@dataclass(frozen=True)
class SecondOrderKernel:
    """Second-order correction data at (t, beta): time kernels, spectral
    sums at y = beta + 2it, the thermal weight eta and the assembled F."""

    K1: float
    K2: float
    S_plus: complex
    S_minus: complex
    S_zero: complex
    eta: complex
    F: complex


def _sin_half(abs_omega: float, y: complex) -> complex:
    """sin(y |Omega| / 2) with pole and overflow guards."""
    arg = 0.5 * abs_omega * y
    if abs(arg.imag) > _MAX_EXPONENT:
        raise OverflowSaturationError(
            f"Im(y)*|Omega|/2 = {arg.imag:.1f} beyond float range"
        )
    s = cmath.sin(arg)
    if abs(s) < _POLE_TOL:
        raise PoleAtSinZeroError(
            f"sin(y |Omega| / 2) = {s:.2e} at y={y}: closed form has a pole"
        )
    return s


def partition_reduced(abs_omega: float, beta: float) -> tuple[complex, float]:
    """(Z_r, Z): reduced (complex) and full (real) partition functions.

    Z_r = 1/(2i sin(beta |Omega| / 2)),  Z = 1/(2 sin(beta |Omega| / 2))^2.
    Raises PoleAtSinZeroError when beta |Omega| / 2 hits a multiple of pi.
    """
    if abs_omega <= 0 or beta <= 0:
        raise ValueError("abs_omega and beta must be positive")
    s = _sin_half(abs_omega, complex(beta))
    z_r = 1.0 / (2j * s)
    z = 1.0 / (2.0 * s) ** 2
    return z_r, z.real


def thermo_reduced(abs_omega: float, T: float) -> IhoThermo:
    """Reduced thermodynamics at temperature T on 0 < |Omega|/T < 2 pi.

    F_r and S_r are complex (their imaginary parts +-i pi/2 cancel in the
    combination F_r + T S_r = U_r, which is enforced to 1e-12).
    """
    if T <= 0:
        raise ValueError("T must be positive")
    ratio = abs_omega / T
    if not 0.0 < ratio < 2.0 * math.pi:
        raise OutOfDomainError(
            f"beta*|Omega| = {ratio:.4f} outside (0, 2*pi): reduced "
            "thermodynamics undefined"
        )
    beta = 1.0 / T
    z_r, _ = partition_reduced(abs_omega, beta)
    half = 0.5 * abs_omega * beta
    s, c = math.sin(half), math.cos(half)
    cot = c / s
    f_r = -T * (0.5j * math.pi - math.log(2.0 * s))
    s_r = 0.5j * math.pi - math.log(2.0 * s) + half * cot
    u_r = 0.5 * abs_omega * cot
    c_r = (abs_omega / (2.0 * T * s)) ** 2
    n_r = 0.5 * cot
    if abs(f_r + T * s_r - u_r) > 1e-12 * max(1.0, abs(u_r)):
        raise RuntimeError("thermodynamic consistency F + T S = U violated")
    return IhoThermo(Z_r=z_r, F_r=f_r, S_r=s_r, U_r=u_r, C_r=c_r, n_r=n_r, T=T)


def kernel_K(d: DriveParams, abs_omega: float, t: float
             ) -> tuple[float, float]:
    """Second-order time kernels of the cosine drive switched on at t = 0.

    K1(t) = V^2 int_0^t ds cos(W s) int_0^s ds' cos(W s') e^{+2|Omega|(s-s')}
    K2(t) = same with the decaying kernel e^{-2|Omega|(s-s')}.

    Closed forms; K1 grows with exp(2|Omega| t) and saturates the float
    range at 2|Omega| t > 700.
    """
    if d.W <= 0:
        raise ValueError("W must be positive")
    if t < 0:
        raise ValueError("t must be nonnegative")
    om, W, V = abs_omega, d.W, d.V
    if 2.0 * om * t > _MAX_EXPONENT:
        raise OverflowSaturationError(
            f"2|Omega|t = {2 * om * t:.1f}: growing kernel beyond float range"
        )
    den = W ** 2 + 4.0 * om ** 2
    sw, cw = math.sin(W * t), math.cos(W * t)
    secular = om * (2.0 * W * t + math.sin(2.0 * W * t)) / (W * den)
    grow = 4.0 * om * (math.exp(2.0 * om * t) * (W * sw + 2.0 * om * cw)
                       - 2.0 * om) / den ** 2
    decay = 4.0 * om * (math.exp(-2.0 * om * t) * (W * sw - 2.0 * om * cw)
                        + 2.0 * om) / den ** 2
    k1 = 0.5 * V ** 2 * (sw ** 2 / den - secular + grow)
    k2 = 0.5 * V ** 2 * (sw ** 2 / den + secular - decay)
    return k1, k2


def s_functions(abs_omega: float, y: complex, beta: float
                ) -> tuple[complex, complex, complex]:
    """Spectral sums (S_plus, S_minus, S_zero) at complex argument y.

    S-+(y) = e^{+-i |Omega| beta} / (4i sin^3(y |Omega|/2))  (minus sign in
    the exponent for S_plus), S_0(y) = -cos(y |Omega|) / (2 sin^2(y |Omega|/2)).
    These are the closed forms of the occupation-weighted resonant sums;
    the exponential prefactors carry the real inverse temperature beta
    supplied alongside y.
    """
    y = complex(y)
    s = _sin_half(abs_omega, y)
    s3 = 4j * s ** 3
    s_minus = cmath.exp(1j * abs_omega * beta) / s3
    s_plus = cmath.exp(-1j * abs_omega * beta) / s3
    s_zero = -cmath.cos(y * abs_omega) / (2.0 * s ** 2)
    return s_plus, s_minus, s_zero


def eta_factor(abs_omega: float, beta: float) -> complex:
    """Thermal weight eta = 2i e^{i beta |Omega|} sin(beta |Omega|)."""
    return 2j * cmath.exp(1j * beta * abs_omega) * math.sin(beta * abs_omega)


def second_order_kernel(d: DriveParams, abs_omega: float, t: float,
                        beta: float) -> SecondOrderKernel:
    """All pieces of the second-order correction at (t, beta)."""
    k1, k2 = kernel_K(d, abs_omega, t)
    y = beta + 2j * t
    s_plus, s_minus, s_zero = s_functions(abs_omega, y, beta)
    eta = eta_factor(abs_omega, beta)
    eta_sq = abs(eta) ** 2
    f = (k1 * (eta_sq * s_plus - 2.0 * eta.conjugate() * s_zero)
         + k2 * (eta_sq * s_minus + 2.0 * eta * s_zero))
    return SecondOrderKernel(K1=k1, K2=k2, S_plus=s_plus, S_minus=s_minus,
                             S_zero=s_zero, eta=eta, F=f)


def kernel_F(d: DriveParams, abs_omega: float, t: float,
             beta: float) -> complex:
    """Assembled second-order kernel F(t, beta)."""
    return second_order_kernel(d, abs_omega, t, beta).F


def occupation_driven(d: DriveParams, abs_omega: float, t: float,
                      beta: float) -> tuple[complex, complex]:
    """Driven reduced occupation and energy.

    n(t, beta) = cot(|Omega| beta / 2)/2 - S_0(beta - 2it) F(t, beta) / (2 Z)
    U(t, beta) = |Omega| n(t, beta)

    The static part is real; the second-order term acquires an imaginary
    part that signals the instability of the inverted well and dies out at
    high temperature.
    """
    _, z = partition_reduced(abs_omega, beta)
    _, _, s_zero_m = s_functions(abs_omega, beta - 2j * t, beta)
    f = kernel_F(d, abs_omega, t, beta)
    half = 0.5 * abs_omega * beta
    n_bar = 0.5 * math.cos(half) / math.sin(half) - s_zero_m * f / (2.0 * z)
    return n_bar, abs_omega * n_bar
