"""Parameter space of the quadratic non-hermitian oscillator.

The model is fixed by a frequency ``omega`` and two real couplings
``alpha``, ``gamma`` (natural units hbar = k_B = 1, all rates in the same
energy unit).  For omega - alpha - gamma != 0 it maps onto a self-adjoint
oscillator with

    mass      m       = 1 / ((omega - alpha - gamma) * b0**2)
    frequency Omega^2  = omega**2 - 4 * alpha * gamma

and the sign pair (m, Omega^2) selects one of four regions:

    I   m > 0, Omega^2 > 0   ordinary oscillator
    II  m > 0, Omega^2 < 0   inverted oscillator
    III m < 0, Omega^2 > 0   negative-mass oscillator
    IV  m < 0, Omega^2 < 0   negative-mass barrier

Only Regions I and II carry dynamics elsewhere in the package; III and IV
are classified but otherwise inert.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .errors import BoundaryCaseError, DegenerateMapError

__all__ = [
    "Region",
    "SwansonParams",
    "EffectiveOscillator",
    "GaugeExponent",
    "classify_region",
    "xp_coefficients",
    "gauge_exponent",
]


class Region(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"


@dataclass(frozen=True)
class SwansonParams:
    """Model triple (omega, alpha, gamma) plus the bare length scale b0."""

    omega: float
    alpha: float
    gamma: float
    b0: float = 1.0

    def __post_init__(self):
        for name in ("omega", "alpha", "gamma", "b0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.b0 <= 0:
            raise ValueError("b0 must be positive")

    @property
    def mu(self) -> float:
        """omega - alpha - gamma, the inverse-mass combination."""
        return self.omega - self.alpha - self.gamma


@dataclass(frozen=True)
class EffectiveOscillator:
    """Self-adjoint image of the model: signed mass, signed Omega^2.

    ``btilde`` is the oscillator length sqrt(1/(m*Omega)); it is populated
    only where m*Omega is real positive (Region I).
    """

    mass: float
    omega_sq: float
    abs_omega: float
    btilde: Optional[float]
    region: Region

    @property
    def omega(self) -> float:
        """Real oscillator frequency; only meaningful in Region I."""
        return self.abs_omega


@dataclass(frozen=True)
class GaugeExponent:
    """Coefficient c of x^2 in the similarity map Upsilon = exp(c * x^2)."""

    coefficient: complex
    time_dependent: bool


def classify_region(p: SwansonParams) -> EffectiveOscillator:
    """Map (omega, alpha, gamma) to the effective oscillator and its region.

    Raises DegenerateMapError when omega - alpha - gamma = 0 and
    BoundaryCaseError when Omega^2 = 0; neither point is assigned a region.
    """
    mu = p.mu
    if mu == 0.0:
        raise DegenerateMapError(
            "omega - alpha - gamma = 0: no effective-oscillator image"
        )
    mass = 1.0 / (mu * p.b0 ** 2)
    omega_sq = p.omega ** 2 - 4.0 * p.alpha * p.gamma
    if omega_sq == 0.0:
        raise BoundaryCaseError("Omega^2 = 0: boundary between regions")
    abs_omega = math.sqrt(abs(omega_sq))
    if mass > 0 and omega_sq > 0:
        region = Region.I
        btilde = math.sqrt(1.0 / (mass * abs_omega))
    elif mass > 0 and omega_sq < 0:
        region, btilde = Region.II, None
    elif mass < 0 and omega_sq > 0:
        region, btilde = Region.III, None
    else:
        region, btilde = Region.IV, None
    return EffectiveOscillator(
        mass=mass,
        omega_sq=omega_sq,
        abs_omega=abs_omega,
        btilde=btilde,
        region=region,
    )


def xp_coefficients(p: SwansonParams) -> tuple[float, float, float]:
    """Coefficients (c_xx, c_pp, c_xp) of the model in position-momentum form.

    H = c_xx * x^2 + c_pp * p^2 + c_xp * (i/hbar) * (x p + p x),
    with c_xx = (omega+alpha+gamma)/(2 b0^2), c_pp = (omega-alpha-gamma) b0^2/2
    and c_xp = (alpha-gamma)/2 in hbar = 1 units.
    """
    return (
        0.5 * (p.omega + p.alpha + p.gamma) / p.b0 ** 2,
        0.5 * (p.omega - p.alpha - p.gamma) * p.b0 ** 2,
        0.5 * (p.alpha - p.gamma),
    )


def gauge_exponent(p: SwansonParams, t: float = 0.0, drive=None,
                   drive_variant: str = "printed") -> GaugeExponent:
    """Exponent coefficient of the similarity map Upsilon.

    Static case (no drive): c = -(alpha - gamma) / (2 (omega - alpha - gamma)).
    With a Mathieu drive the coefficient picks up the complex drive function,
    c(t) = -(alpha - gamma - 2 v(t)) / (2 (omega - alpha - gamma)).
    """
    mu = p.mu
    if mu == 0.0:
        raise DegenerateMapError("omega - alpha - gamma = 0: gauge undefined")
    delta = p.alpha - p.gamma
    if drive is None:
        return GaugeExponent(coefficient=complex(-delta / (2.0 * mu)),
                             time_dependent=False)
    from . import mathieu

    v = mathieu.drive_v(drive, t, variant=drive_variant)
    return GaugeExponent(coefficient=-(delta - 2.0 * v) / (2.0 * mu),
                         time_dependent=True)
