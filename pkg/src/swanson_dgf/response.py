"""Region-I thermal observables under a quadratic cosine drive.

All moments are reported in oscillator units: <x^2> in btilde^2 and <p^2>
in hbar^2/btilde^2, with btilde the oscillator length of the effective
Hamiltonian.  In these units the equilibrium values are coth(beta*Omega/2)/2
each, and the drive strength V carries energy units.

Two driven routes are provided:

* linear response (``moments_linear_ex1`` / ``moments_linear_ex2``), the
  first-order switch-on integrals I1/I2 in closed form;
* the su(1,1) propagator route (``moments_exact_ex1``), either from the
  closed-form resummation coefficients (method="resummed") or from the
  numerically exact 2x2 propagator (method="propagator").

The resummed route exponentiates the first-order coefficients; it agrees
with linear response at O(V) and deviates from the true dynamics at O(V^2).
The propagator route solves the dynamics to integrator accuracy and is the
one cross-validated against the dense Fock oracle.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad

from . import su11
from .errors import ResonanceWarning, ValidityWarning, WrongRegionError
from .model_space import EffectiveOscillator, Region

__all__ = [
    "DriveParams", "ThermalMoments",
    "coth", "partition_function", "equilibrium_moments",
    "i1_integral", "i2_integral",
    "moments_linear_ex1", "moments_linear_ex2",
    "moments_exact_ex1", "exact_moments_grid",
]

_RESONANCE_TOL = 1e-9


@dataclass(frozen=True)
class DriveParams:
    """Periodic perturbation: strength V, frequency W, switch-on rate or
    start time.  ``epsilon`` belongs to the adiabatic drive, ``t0`` to the
    sharply switched one."""

    V: float
    W: float
    epsilon: Optional[float] = None
    t0: float = 0.0


@dataclass(frozen=True)
class ThermalMoments:
    """Second moments at time t and inverse temperature beta.

    x2 is in units of btilde^2, p2 in units of hbar^2/btilde^2.
    """

    x2: float
    p2: float
    t: float
    beta: float


def coth(x: float) -> float:
    return 1.0 / math.tanh(x)


def _require_region1(eff: EffectiveOscillator, what: str):
    if eff.region is not Region.I:
        raise WrongRegionError(f"{what} requires Region I, got {eff.region}")


def partition_function(eff: EffectiveOscillator, beta: float) -> float:
    """Canonical partition function exp(-Omega*beta/2)/(1 - exp(-Omega*beta))."""
    _require_region1(eff, "partition function")
    om = eff.abs_omega
    return math.exp(-0.5 * om * beta) / (1.0 - math.exp(-om * beta))


def equilibrium_moments(eff: EffectiveOscillator, beta: float) -> ThermalMoments:
    """Undriven thermal moments, coth(beta*Omega/2)/2 in oscillator units."""
    _require_region1(eff, "equilibrium moments")
    if beta <= 0:
        raise ValueError("beta must be positive")
    c = 0.5 * coth(0.5 * beta * eff.abs_omega)
    return ThermalMoments(x2=c, p2=c, t=0.0, beta=beta)


def i1_integral(d: DriveParams, eff: EffectiveOscillator, t: float) -> float:
    """Adiabatic switch-on response integral.

    I1 = int_{-inf}^t cos(W s) e^{eps s} sin(2 Omega (t - s)) ds, closed form.
    """
    if d.epsilon is None or d.epsilon <= 0:
        raise ValueError("i1_integral requires epsilon > 0")
    om, W, eps = eff.abs_omega, d.W, d.epsilon
    num = ((W + 2 * om) * (W - 2 * om) - eps ** 2) * math.cos(W * t) \
        - 2.0 * W * eps * math.sin(W * t)
    den = ((W + 2 * om) ** 2 + eps ** 2) * ((W - 2 * om) ** 2 + eps ** 2)
    return -2.0 * om * math.exp(eps * t) * num / den


def _i2_quadrature(d: DriveParams, om: float, t: float) -> float:
    val, _ = quad(lambda s: math.cos(d.W * s) * math.sin(2 * om * (t - s)),
                  d.t0, t, limit=400, epsabs=1e-13, epsrel=1e-13)
    return val


def i2_integral(d: DriveParams, eff: EffectiveOscillator, t: float) -> float:
    """Sharp switch-on response integral I2 = int_{t0}^t cos(W s) sin(2 Omega (t-s)) ds.

    The closed form carries the denominator W^2 - 4 Omega^2; within
    1e-9 of the resonance W = 2 Omega the finite time-domain integral is
    evaluated by adaptive quadrature instead and a ResonanceWarning is
    issued.
    """
    om, W, t0 = eff.abs_omega, d.W, d.t0
    if abs(W - 2.0 * om) < _RESONANCE_TOL:
        warnings.warn(
            "W = 2*Omega resonance: closed form degenerate, quadrature used",
            ResonanceWarning, stacklevel=2,
        )
        return _i2_quadrature(d, om, t)
    bracket = 2.0 * om * (math.cos(W * t)
                          - math.cos(W * t0) * math.cos(2 * om * (t - t0))) \
        + W * math.sin(W * t0) * math.sin(2 * om * (t - t0))
    return -bracket / (W ** 2 - 4.0 * om ** 2)


def _warn_validity(d: DriveParams, eff: EffectiveOscillator):
    if abs(d.V) >= 0.5 * eff.omega_sq:
        warnings.warn(
            f"V={d.V} is not small against Omega^2={eff.omega_sq}: "
            "linear response is qualitative here",
            ValidityWarning, stacklevel=3,
        )


def _linear(d, eff, beta, t, integral) -> ThermalMoments:
    c = coth(0.5 * beta * eff.abs_omega)
    shift = d.V * integral
    return ThermalMoments(x2=c * (0.5 + shift), p2=c * (0.5 - shift),
                          t=t, beta=beta)


def moments_linear_ex1(d: DriveParams, eff: EffectiveOscillator,
                       beta: float, t: float) -> ThermalMoments:
    """Linear-response moments for the adiabatically switched cosine drive:
    x2 = coth(beta Omega/2) (1/2 + V I1), p2 = coth(beta Omega/2) (1/2 - V I1).
    """
    _require_region1(eff, "linear response")
    _warn_validity(d, eff)
    return _linear(d, eff, beta, t, i1_integral(d, eff, t))


def moments_linear_ex2(d: DriveParams, eff: EffectiveOscillator,
                       beta: float, t: float) -> ThermalMoments:
    """Linear-response moments for the drive switched on sharply at t0,
    with I2 in place of I1."""
    _require_region1(eff, "linear response")
    _warn_validity(d, eff)
    return _linear(d, eff, beta, t, i2_integral(d, eff, t))


def _moments_from_zeta(z: su11.DisentangledEvolution, om: float,
                       beta: float, t: float) -> tuple[complex, complex]:
    """Thermal second moments from the propagator normal form.

    The oscillating term enters x^2 with a minus sign and p^2 with a plus
    sign, as dictated by the generator transforms (the K+ row of
    ``heisenberg_generators`` traces to -e^{2i Omega t} zm/z0^2 coth/2).
    """
    c = coth(0.5 * beta * om)
    z0sq = z.zeta_zero ** 2
    base = 1.0 - 2.0 * z.zeta_plus * z.zeta_minus / z0sq
    osc_half = cmath.exp(2j * om * t) * z.zeta_minus / z0sq
    osc = osc_half + osc_half.conjugate()
    return 0.5 * c * (base - osc), 0.5 * c * (base + osc)


def _strip_imag(val: complex, what: str) -> float:
    if abs(val.imag) > 1e-10:
        raise RuntimeError(f"{what} acquired imaginary part {val.imag:.3e}")
    return val.real


def moments_exact_ex1(d: DriveParams, eff: EffectiveOscillator,
                      beta: float, t: float,
                      method: str = "resummed") -> ThermalMoments:
    """Driven moments from the su(1,1) propagator.

    method="resummed"  : closed-form coefficients (kappa, kappa0) exponentiated;
    method="propagator": numerically exact 2x2 propagator integration.
    """
    _require_region1(eff, "exact moments")
    if method == "resummed":
        kappa, kappa0 = su11.kappa_coefficients(eff, d, t)
        z = su11.zeta_from_kappa(kappa, kappa0)
    elif method == "propagator":
        z = su11.propagator_zeta(eff, d, float(t))
    else:
        raise ValueError(f"unknown method {method!r}")
    x2, p2 = _moments_from_zeta(z, eff.abs_omega, beta, t)
    return ThermalMoments(x2=_strip_imag(x2, "<x^2>"),
                          p2=_strip_imag(p2, "<p^2>"), t=t, beta=beta)


def exact_moments_grid(d: DriveParams, eff: EffectiveOscillator,
                       beta: float, ts, method: str = "resummed"
                       ) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``moments_exact_ex1`` over a sorted time grid."""
    _require_region1(eff, "exact moments")
    ts = np.asarray(ts, dtype=float)
    om = eff.abs_omega
    if method == "propagator":
        zs = su11.propagator_zeta(eff, d, ts)
    elif method == "resummed":
        zs = [su11.zeta_from_kappa(*su11.kappa_coefficients(eff, d, t))
              for t in ts]
    else:
        raise ValueError(f"unknown method {method!r}")
    x2 = np.empty(len(ts))
    p2 = np.empty(len(ts))
    for k, (z, t) in enumerate(zip(zs, ts)):
        a, b = _moments_from_zeta(z, om, beta, t)
        x2[k] = _strip_imag(a, "<x^2>")
        p2[k] = _strip_imag(b, "<p^2>")
    return x2, p2
