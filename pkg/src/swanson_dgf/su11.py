"""su(1,1) machinery for the quadratically driven oscillator.

Generators K+, K-, K0 (K+ = a^dag^2/2, K- = a^2/2, K0 = (a^dag a + 1/2)/2)
close under [K-, K+] = 2 K0, [K0, K+-] = +-K+-, and admit the faithful 2x2
representation used throughout:

    K+ -> [[0, 1], [0, 0]]     K- -> [[0, 0], [-1, 0]]     2K0 -> [[1, 0], [0, -1]]

Every group element factors as exp(b+ K+) exp(ln(b0) 2K0) exp(b- K-); the
factorization is read off the 2x2 entries.  The interaction-picture
propagator of the cosine drive with adiabatic switch-on is carried either
by the closed-form resummation coefficients (kappa, kappa0) or by direct
numerical integration of the 2x2 propagator equation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.integrate import solve_ivp

from .errors import SingularFactorizationError, WrongRegionError
from .model_space import EffectiveOscillator, Region

__all__ = [
    "K_PLUS", "K_MINUS", "K0_TWICE",
    "Su11Element", "NormalForm", "DisentangledEvolution",
    "matrix_rep", "disentangle", "recompose",
    "kappa_coefficients", "zeta_from_kappa",
    "propagator_zeta", "heisenberg_generators",
]

K_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
K_MINUS = np.array([[0.0, 0.0], [-1.0, 0.0]], dtype=complex)
K0_TWICE = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# Below this the cosh/sinh(r)/r ratios switch to their two-term series.
_SMALL_R = 1e-6


@dataclass(frozen=True)
class Su11Element:
    """Algebra element a_plus K+ + a_minus K- + a_zero 2K0."""

    a_plus: complex
    a_minus: complex
    a_zero: complex


@dataclass(frozen=True)
class NormalForm:
    """Factors of exp(element) = e^{b+ K+} e^{ln(b0) 2K0} e^{b- K-}."""

    beta_plus: complex
    ln_beta_zero: complex
    beta_minus: complex

    @property
    def beta_zero(self) -> complex:
        return cmath.exp(self.ln_beta_zero)


@dataclass(frozen=True)
class DisentangledEvolution:
    """Propagator data: exponent coefficients and normal-form zetas."""

    kappa: complex
    kappa0: complex
    d: complex
    zeta_plus: complex
    zeta_zero: complex
    zeta_minus: complex


def matrix_rep(e: Su11Element) -> np.ndarray:
    """2x2 faithful representation of an algebra element."""
    return e.a_plus * K_PLUS + e.a_minus * K_MINUS + e.a_zero * K0_TWICE


def _cosh_sinhc(r: complex) -> tuple[complex, complex]:
    """(cosh r, sinh(r)/r) with a series branch near r = 0."""
    if abs(r) < _SMALL_R:
        r2 = r * r
        return 1.0 + r2 / 2.0, 1.0 + r2 / 6.0
    return cmath.cosh(r), cmath.sinh(r) / r


def disentangle(e: Su11Element) -> NormalForm:
    """Normal-ordered factorization of exp(A K+ + B K- + C 2K0).

    With r = sqrt(C^2 - A B) the exponential is
    cosh(r) I + sinh(r)/r * (A K+ + B K- + C 2K0); the factors follow from
    matching the 2x2 entries.  Raises SingularFactorizationError when the
    (2,2) entry cosh(r) - C sinh(r)/r vanishes.
    """
    A, B, C = e.a_plus, e.a_minus, e.a_zero
    r = cmath.sqrt(C * C - A * B)
    ch, shc = _cosh_sinhc(r)
    m22 = ch - C * shc
    if abs(m22) < 1e-14:
        raise SingularFactorizationError(
            "normal form does not exist: (2,2) entry of exp vanishes"
        )
    beta_zero = 1.0 / m22
    return NormalForm(
        beta_plus=A * shc * beta_zero,
        ln_beta_zero=cmath.log(beta_zero),
        beta_minus=B * shc * beta_zero,
    )


def recompose(nf: NormalForm) -> np.ndarray:
    """2x2 matrix of e^{b+ K+} e^{ln(b0) 2K0} e^{b- K-}."""
    b0 = nf.beta_zero
    left = np.array([[1.0, nf.beta_plus], [0.0, 1.0]], dtype=complex)
    mid = np.array([[b0, 0.0], [0.0, 1.0 / b0]], dtype=complex)
    right = np.array([[1.0, 0.0], [-nf.beta_minus, 1.0]], dtype=complex)
    return left @ mid @ right


def kappa_coefficients(eff: EffectiveOscillator, drive, t: float
                       ) -> tuple[complex, float]:
    """Closed-form switch-on coefficients (kappa, kappa0) of the cosine drive.

    kappa(t)  = int_{-inf}^t v(s) e^{2i Omega s} ds   and
    kappa0(t) = int_{-inf}^t v(s) ds
    for v(s) = -V cos(W s) e^{eps s}, evaluated in closed form.  These are
    the first-order switch-on integrals; the single-exponential propagator
    built on them resums the drive but is not the exact solution of the
    propagator equation (see ``propagator_zeta``).
    """
    if eff.region is not Region.I:
        raise WrongRegionError("kappa coefficients are a Region-I construct")
    V, W, eps = drive.V, drive.W, drive.epsilon
    if eps is None or eps <= 0:
        raise ValueError("adiabatic switch-on requires epsilon > 0")
    om = eff.abs_omega
    env = V * math.exp(eps * t)
    num = (W ** 2 + (eps - 2j * om) ** 2) * (
        (eps + 2j * om) * math.cos(W * t) + W * math.sin(W * t)
    )
    den = ((W - 2 * om) ** 2 + eps ** 2) * ((W + 2 * om) ** 2 + eps ** 2)
    kappa = -env * cmath.exp(2j * om * t) * num / den
    kappa0 = -env * (eps * math.cos(W * t) + W * math.sin(W * t)) / (W ** 2 + eps ** 2)
    return kappa, kappa0


def zeta_from_kappa(kappa: complex, kappa0: complex) -> DisentangledEvolution:
    """Normal-form zetas of U = exp(-i (kappa K+ + kappa* K- + kappa0 2K0)).

    d = sqrt(kappa0^2 - |kappa|^2) on the principal branch (Re d >= 0); all
    three zetas are even in d, so the branch is observable-neutral.
    """
    d = cmath.sqrt(kappa0 ** 2 - abs(kappa) ** 2)
    if abs(d) < _SMALL_R:
        d2 = d * d
        sinc, cosd = 1.0 - d2 / 6.0, 1.0 - d2 / 2.0
    else:
        sinc, cosd = cmath.sin(d) / d, cmath.cos(d)
    denom = cosd + 1j * kappa0 * sinc
    if abs(denom) < 1e-14:
        raise SingularFactorizationError("cos(d) + i kappa0 sin(d)/d vanishes")
    zeta_zero = 1.0 / denom
    return DisentangledEvolution(
        kappa=kappa,
        kappa0=kappa0,
        d=d,
        zeta_plus=-1j * kappa * sinc * zeta_zero,
        zeta_zero=zeta_zero,
        zeta_minus=-1j * kappa.conjugate() * sinc * zeta_zero,
    )


def _zeta_from_matrix(U: np.ndarray) -> DisentangledEvolution:
    """Normal-form zetas of a group element; also recovers the exponent."""
    if abs(U[1, 1]) < 1e-14:
        raise SingularFactorizationError("(2,2) entry of propagator vanishes")
    zeta_zero = 1.0 / U[1, 1]
    zeta_plus = U[0, 1] * zeta_zero
    zeta_minus = -U[1, 0] * zeta_zero
    # Single-exponential log: U = cos(d) I - i sin(d)/d [[k0, k], [-k*, -k0]].
    cosd = 0.5 * (U[0, 0] + U[1, 1])
    d = cmath.acos(cosd)
    if abs(d) < _SMALL_R:
        sinc = 1.0 - d * d / 6.0
    else:
        sinc = cmath.sin(d) / d
    kappa = 1j * U[0, 1] / sinc
    kappa0 = 1j * (U[0, 0] - cosd) / sinc
    return DisentangledEvolution(
        kappa=kappa,
        kappa0=kappa0.real + 0j if abs(kappa0.imag) < 1e-9 else kappa0,
        d=d,
        zeta_plus=zeta_plus,
        zeta_zero=zeta_zero,
        zeta_minus=zeta_minus,
    )


def switch_on_start(t: float, epsilon: float) -> float:
    """Lower cutoff replacing -inf: t - 40/eps or where exp(eps s) < 1e-14,
    whichever is later."""
    return max(t - 40.0 / epsilon, math.log(1e-14) / epsilon)


def propagator_zeta(eff: EffectiveOscillator, drive,
                    t: Union[float, Sequence[float]],
                    t_start: Optional[float] = None,
                    rtol: float = 1e-12, atol: float = 1e-14):
    """Numerically exact interaction-picture propagator of the cosine drive.

    Integrates i dU/ds = v(s) (e^{2i Omega s} K+ + e^{-2i Omega s} K- + 2K0) U
    in the 2x2 representation from the adiabatic cutoff up to t and returns
    the normal-form evolution data.  Accepts a scalar t or a sorted grid
    (one integration, sampled at every grid point).
    """
    if eff.region is not Region.I:
        raise WrongRegionError("propagator route is a Region-I construct")
    V, W, eps = drive.V, drive.W, drive.epsilon
    if eps is None or eps <= 0:
        raise ValueError("adiabatic switch-on requires epsilon > 0")
    om = eff.abs_omega
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.diff(ts) < 0):
        raise ValueError("time grid must be sorted")
    if t_start is None:
        t_start = switch_on_start(float(ts[0]), eps)

    def rhs(s, y):
        U = y.reshape(2, 2)
        v = -V * math.cos(W * s) * math.exp(eps * s)
        ph = cmath.exp(2j * om * s)
        g = v * np.array([[1.0, ph], [-1.0 / ph, -1.0]])
        return (-1j * (g @ U)).ravel()

    sol = solve_ivp(rhs, (t_start, float(ts[-1])),
                    np.eye(2, dtype=complex).ravel(),
                    t_eval=ts, rtol=rtol, atol=atol, method="DOP853")
    if not sol.success:
        raise RuntimeError(f"propagator integration failed: {sol.message}")
    out = [_zeta_from_matrix(sol.y[:, k].reshape(2, 2)) for k in range(len(ts))]
    return out[0] if np.isscalar(t) or np.asarray(t).ndim == 0 else out


def heisenberg_generators(z: DisentangledEvolution, eff: EffectiveOscillator,
                          t: float) -> np.ndarray:
    """Coefficient matrix of U^dag (K+, K-, 2K0) U in the (K+, K-, 2K0) basis.

    Rows are the transforms of K+, K-, 2K0 under the full evolution
    U = U0(t) U_I with U0 the free rotation at frequency Omega:

        U^dag K+ U  = e^{ 2i Omega t} (K+ + zm^2 K- - zm 2K0) / z0^2
        U^dag K- U  = e^{-2i Omega t} (zm*^2 K+ + K- - zm* 2K0) / z0*^2
        U^dag 2K0 U = (2 zp / z0^2) K+ + conj K- + (1 - 2 zm zp / z0^2) 2K0
    """
    om = eff.abs_omega
    zp, z0, zm = z.zeta_plus, z.zeta_zero, z.zeta_minus
    ph = cmath.exp(2j * om * t)
    row_p = ph / z0 ** 2 * np.array([1.0, zm ** 2, -zm])
    row_m = np.conjugate(row_p)[[1, 0, 2]]
    c_p = 2.0 * zp / z0 ** 2
    row_0 = np.array([c_p, np.conjugate(c_p), 1.0 - 2.0 * zm * zp / z0 ** 2])
    return np.array([row_p, row_m, row_0], dtype=complex)
