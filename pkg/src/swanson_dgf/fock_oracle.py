"""Brute-force validation oracle on a truncated number-state basis.

Everything here is deliberately independent of the closed forms elsewhere
in the package: operators are dense matrices, thermal states come from
eigendecomposition, time evolution is fixed-step RK4 on the commutator
flow, and spectral intensities are double sums over the eigenbasis.  The
truncation couples the top few rows to the cutoff, so identity checks
restrict to a low-lying block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.linalg import eigh

from . import mathieu as mathieu_mod
from .errors import (NonHermitianError, StepTooLargeError, WrongRegionError)
from .model_space import (EffectiveOscillator, Region, SwansonParams,
                          classify_region, gauge_exponent)
from .response import DriveParams
from .su11 import switch_on_start

__all__ = [
    "FockBasis", "OperatorSet", "build_operators",
    "thermal_state", "propagate", "example1_trajectory",
    "spectral_intensity", "gauge_check", "trace_check",
    "resonant_partition_sum",
]


@dataclass(frozen=True)
class FockBasis:
    """Number-state truncation; dim is the retained dimension N >= 2."""

    dim: int

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("need at least two basis states")


@dataclass(frozen=True)
class OperatorSet:
    """Dense matrices of the model operators in the truncated basis.

    ``u`` and ``v`` are the light-cone pair of the inverted well (built for
    positive mass only); ``n_uv`` is the shared occupation observable
    -(u v + v u)/2 = h0 / |Omega|, independent of the sign convention used
    for the pair.
    """

    basis: FockBasis
    a: np.ndarray
    a_dag: np.ndarray
    x: np.ndarray
    p: np.ndarray
    x2: np.ndarray
    h_sw: Optional[np.ndarray]
    h_c: Optional[np.ndarray]
    h0: np.ndarray
    u: Optional[np.ndarray]
    v: Optional[np.ndarray]
    n_uv: Optional[np.ndarray]


def ladder(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """(a, a_dag) in the number basis."""
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)
    return a, a.conj().T


def build_operators(basis: FockBasis,
                    params: Union[SwansonParams, EffectiveOscillator],
                    uv_convention: str = "minus") -> OperatorSet:
    """Operator matrices for the model (SwansonParams) or its oscillator
    image (EffectiveOscillator).

    uv_convention selects the sign of the momentum in u: "minus" puts
    u ~ x - p/(m|Omega|) (raising for the decaying tower), "plus" swaps the
    roles; n_uv is the same matrix either way.
    """
    N = basis.dim
    a, ad = ladder(N)
    if isinstance(params, SwansonParams):
        b0 = params.b0
        eff = classify_region(params)
        h_sw = (params.omega * (ad @ a + 0.5 * np.eye(N))
                + params.alpha * (a @ a) + params.gamma * (ad @ ad))
        h_c = (params.omega * (ad @ a + 0.5 * np.eye(N))
               + params.gamma * (a @ a) + params.alpha * (ad @ ad))
    else:
        b0 = 1.0
        eff = params
        h_sw = h_c = None
    x = b0 / math.sqrt(2.0) * (ad + a)
    p = 1j / (math.sqrt(2.0) * b0) * (ad - a)
    x2 = x @ x
    m = eff.mass
    h0 = p @ p / (2.0 * m) + 0.5 * m * eff.omega_sq * x2
    u = v = n_uv = None
    if m > 0 and eff.abs_omega > 0:
        scale = math.sqrt(m * eff.abs_omega / 2.0)
        pm = -1.0 if uv_convention == "minus" else 1.0
        if uv_convention not in ("minus", "plus"):
            raise ValueError(f"unknown uv convention {uv_convention!r}")
        u = scale * (x + pm * p / (m * eff.abs_omega))
        v = scale * (x - pm * p / (m * eff.abs_omega))
        n_uv = -0.5 * (u @ v + v @ u)
    return OperatorSet(basis=basis, a=a, a_dag=ad, x=x, p=p, x2=x2,
                       h_sw=h_sw, h_c=h_c, h0=h0, u=u, v=v, n_uv=n_uv)


def _check_hermitian(h: np.ndarray, what: str, tol: float = 1e-10):
    scale = max(1.0, float(np.abs(h).max()))
    if np.abs(h - h.conj().T).max() > tol * scale:
        raise NonHermitianError(f"{what} is not hermitian")


def thermal_state(h0: np.ndarray, beta: float) -> np.ndarray:
    """exp(-beta h0)/Tr exp(-beta h0) by eigendecomposition.

    Requires a hermitian h0; the spectrum is shifted by its minimum before
    exponentiating so any beta > 0 is safe within truncation.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    _check_hermitian(h0, "h0")
    evals, vecs = eigh(h0)
    w = np.exp(-beta * (evals - evals.min()))
    w /= w.sum()
    return (vecs * w) @ vecs.conj().T


def _rk4_interaction(rho_eig: np.ndarray, h1_eig_of_t, d_energy: np.ndarray,
                     t0: float, t1: float, dt: float) -> np.ndarray:
    """Fixed-step RK4 on the interaction-picture commutator flow.

    Works in the h0 eigenbasis; the oscillating phases e^{i dE t} are
    maintained multiplicatively (half-step factor), which keeps the cost
    per stage at one elementwise product and two matrix products.
    """
    n_steps = max(1, int(math.ceil((t1 - t0) / dt - 1e-12)))
    step = (t1 - t0) / n_steps
    phase_half = np.exp(0.5j * d_energy * step)
    phase_full = phase_half * phase_half
    cur = np.exp(1j * d_energy * t0)
    rho = rho_eig
    t = t0
    for _ in range(n_steps):
        ph_mid = cur * phase_half
        ph_end = cur * phase_full
        h1 = h1_eig_of_t(t) * cur
        k1 = -1j * (h1 @ rho - rho @ h1)
        y = rho + 0.5 * step * k1
        h2 = h1_eig_of_t(t + 0.5 * step) * ph_mid
        k2 = -1j * (h2 @ y - y @ h2)
        y = rho + 0.5 * step * k2
        k3 = -1j * (h2 @ y - y @ h2)
        y = rho + step * k3
        h4 = h1_eig_of_t(t + step) * ph_end
        k4 = -1j * (h4 @ y - y @ h4)
        rho = rho + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        cur = ph_end
        t += step
    return rho


def propagate(rho0: np.ndarray, h0: np.ndarray,
              t_grid: Sequence[float],
              h1_of_t: Optional[Callable[[float], np.ndarray]] = None,
              drive_profile: Optional[Callable[[float], float]] = None,
              coupling: Optional[np.ndarray] = None,
              t_start: Optional[float] = None,
              dt: Optional[float] = None,
              trace_tol: float = 1e-9,
              check_trace: bool = True) -> np.ndarray:
    """RK4 commutator-flow propagation of a density matrix.

    The Hamiltonian is h0 + h1(t), supplied either as a callable h1_of_t
    returning a matrix or as the pair (drive_profile, coupling) meaning
    h1(t) = drive_profile(t) * coupling.  Propagation runs in the
    interaction picture of h0 (removing the fast free phases), from
    t_start (default: the first grid point) through every point of the
    sorted t_grid; Schroedinger-picture density matrices at the grid
    points are returned stacked.

    The step defaults to 0.01 / max|E(h0)| and the trace drift is checked
    against trace_tol at the end of the run.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be sorted")
    _check_hermitian(h0, "h0")
    evals, vecs = eigh(h0)
    d_energy = evals[:, None] - evals[None, :]
    if dt is None:
        dt = 0.01 / max(1.0, float(np.abs(evals).max()))
    if t_start is None:
        t_start = float(t_grid[0])

    if h1_of_t is None and drive_profile is None:
        def h1_eig_of_t(t):
            return np.zeros_like(h0)
    elif drive_profile is not None:
        if coupling is None:
            raise ValueError("drive_profile needs a coupling matrix")
        coupling_eig = vecs.conj().T @ coupling @ vecs

        def h1_eig_of_t(t):
            return drive_profile(t) * coupling_eig
    else:
        def h1_eig_of_t(t):
            return vecs.conj().T @ h1_of_t(t) @ vecs

    rho_eig = vecs.conj().T @ rho0.astype(complex) @ vecs
    ph0 = np.exp(1j * evals * t_start)
    rho_i = (ph0[:, None] * rho_eig) * ph0.conj()[None, :]
    trace0 = np.trace(rho_i)

    out = np.empty((len(t_grid), *rho0.shape), dtype=complex)
    t_cur = t_start
    for k, t in enumerate(t_grid):
        if t > t_cur:
            rho_i = _rk4_interaction(rho_i, h1_eig_of_t, d_energy,
                                     t_cur, float(t), dt)
            t_cur = float(t)
        ph = np.exp(-1j * evals * t_cur)
        rho_s_eig = (ph[:, None] * rho_i) * ph.conj()[None, :]
        out[k] = vecs @ rho_s_eig @ vecs.conj().T
    if check_trace and abs(np.trace(rho_i) - trace0) > trace_tol:
        raise StepTooLargeError(
            f"trace drifted by {abs(np.trace(rho_i) - trace0):.2e}; "
            "reduce dt"
        )
    return out


def example1_trajectory(eff: EffectiveOscillator, drive: DriveParams,
                        beta: float, t_grid: Sequence[float],
                        dim: int = 80,
                        dt_fine: float = 4e-3, dt_coarse: float = 0.05,
                        switch_at: float = -100.0
                        ) -> tuple[np.ndarray, np.ndarray]:
    """Oracle trajectory of (<x^2>, <p^2>) for the adiabatic cosine drive.

    Works in oscillator units (btilde = 1) so the moments compare directly
    with the closed-form routes.  The long switch-on tail, where the drive
    amplitude is exponentially small, is integrated with a coarse step;
    the window from ``switch_at`` onward uses the fine step.
    """
    if eff.region is not Region.I:
        raise WrongRegionError("oracle trajectory is a Region-I construct")
    if drive.epsilon is None or drive.epsilon <= 0:
        raise ValueError("adiabatic switch-on requires epsilon > 0")
    om = eff.abs_omega
    t_grid = np.asarray(t_grid, dtype=float)
    n = np.arange(dim)
    a, ad = ladder(dim)
    h0 = np.diag(om * (n + 0.5)).astype(complex)
    x = (a + ad) / math.sqrt(2.0)
    p = 1j * (ad - a) / math.sqrt(2.0)
    x2, p2 = x @ x, p @ p
    rho0 = np.diag(_thermal_weights(om, beta, dim)).astype(complex)

    def profile(t):
        return -drive.V * math.cos(drive.W * t) * math.exp(drive.epsilon * t)

    t_start = switch_on_start(float(t_grid[0]), drive.epsilon)
    switch = min(max(switch_at, t_start), float(t_grid[0]))
    rho_at_switch = propagate(rho0, h0, [switch], drive_profile=profile,
                              coupling=x2, t_start=t_start, dt=dt_coarse)[0]
    rhos = propagate(rho_at_switch, h0, t_grid, drive_profile=profile,
                     coupling=x2, t_start=switch, dt=dt_fine)
    x2_t = np.einsum("kij,ji->k", rhos, x2).real
    p2_t = np.einsum("kij,ji->k", rhos, p2).real
    return x2_t, p2_t


def _thermal_weights(om: float, beta: float, dim: int) -> np.ndarray:
    w = np.exp(-beta * om * np.arange(dim))
    return w / w.sum()


def spectral_intensity(A: np.ndarray, B: np.ndarray, h0: np.ndarray,
                       beta: float, primed: bool = False,
                       merge_tol: float = 1e-9
                       ) -> tuple[np.ndarray, np.ndarray]:
    """Discrete spectral lines of the two-time thermal correlator.

    Returns (frequencies, weights) with lines at omega = E_n - E_m and
    weights B_nm A_mn e^{-beta E_n} / Z; with primed=True the weight is
    e^{-beta E_m} instead (the reversed operator ordering), so the two
    lists satisfy the detailed-balance relation J'(w) = e^{beta w} J(w)
    line by line.  Lines closer than merge_tol are merged.
    """
    _check_hermitian(h0, "h0")
    evals, vecs = eigh(h0)
    a_eig = vecs.conj().T @ A @ vecs
    b_eig = vecs.conj().T @ B @ vecs
    boltz = np.exp(-beta * (evals - evals.min()))
    z = boltz.sum()
    occupied = boltz / z
    if primed:
        weight = b_eig * a_eig.T * occupied[None, :]
    else:
        weight = b_eig * a_eig.T * occupied[:, None]
    omega = evals[:, None] - evals[None, :]
    freqs = omega.ravel()
    ws = weight.ravel()
    keep = np.abs(ws) > 0.0
    freqs, ws = freqs[keep], ws[keep]
    order = np.argsort(freqs)
    freqs, ws = freqs[order], ws[order]
    merged_f, merged_w = [], []
    k = 0
    while k < len(freqs):
        j = k + 1
        while j < len(freqs) and freqs[j] - freqs[j - 1] < merge_tol:
            j += 1
        block_w = ws[k:j].sum()
        block_f = float(np.average(freqs[k:j]))
        merged_f.append(block_f)
        merged_w.append(block_w)
        k = j
    return np.asarray(merged_f), np.asarray(merged_w)


def _exp_x2(x2: np.ndarray, coeff: complex) -> np.ndarray:
    """exp(coeff * x^2) by eigendecomposition of the (real symmetric) x^2."""
    evals, vecs = eigh(x2.real)
    return (vecs * np.exp(coeff * evals)) @ vecs.T


def gauge_check(p: SwansonParams, t: float = 0.0, drive=None,
                dim: int = 80, block: Optional[int] = None,
                drive_variant: str = "printed") -> float:
    """Frobenius residual of the similarity map onto the oscillator form.

    Builds Upsilon = exp(c x^2), transforms H (plus the momentum-mixing
    drive term when a Mathieu drive is given, including the gauge's own
    time-derivative term), and compares against the expected oscillator
    Hamiltonian on the low-lying ``block`` x ``block`` corner.  The corner
    defaults to 60% of the basis: exp(+c x^2) couples the top ~40% of the
    truncated basis to the cutoff, so the identity only holds away from it.
    """
    ops = build_operators(FockBasis(dim), p)
    if block is None:
        block = int(0.6 * dim)
    exponent = gauge_exponent(p, t, drive, drive_variant=drive_variant)
    ups = _exp_x2(ops.x2, exponent.coefficient)
    ups_inv = _exp_x2(ops.x2, -exponent.coefficient)
    h_total = ops.h_sw
    gauge_dot = 0.0
    expected = ops.h0.copy()
    if drive is not None:
        v = mathieu_mod.drive_v(drive, t, variant=drive_variant)
        xp = ops.x @ ops.p + ops.p @ ops.x
        h_total = h_total - v * xp
        v_dot = mathieu_mod.drive_v_dot(drive, t, variant=drive_variant)
        gauge_dot = 1j * (v_dot / p.mu) * ops.x2
        expected = expected - drive.V * math.cos(drive.W * t) * ops.x2
    transformed = ups @ h_total @ ups_inv + gauge_dot
    resid = (transformed - expected)[:block, :block]
    return float(np.linalg.norm(resid))


def trace_check(p: SwansonParams, beta: float, observable: np.ndarray,
                dim: int = 80) -> tuple[complex, complex]:
    """Both sides of the similarity-invariance of thermal averages.

    lhs = Tr(Upsilon^{-1} rho0 Upsilon * Upsilon^{-1} o Upsilon), rhs =
    Tr(rho0 o), with the static gauge and the thermal state of the
    oscillator image.  Equal up to rounding; the gap measures how well the
    non-unitary map preserves the statistical content within truncation.
    """
    eff = classify_region(p)
    if eff.region is not Region.I:
        raise WrongRegionError("thermal state needs Region I")
    ops = build_operators(FockBasis(dim), p)
    rho0 = thermal_state(ops.h0, beta)
    c = gauge_exponent(p).coefficient
    ups = _exp_x2(ops.x2, c)
    ups_inv = _exp_x2(ops.x2, -c)
    rho_t = ups_inv @ rho0 @ ups
    obs_t = ups_inv @ observable @ ups
    return complex(np.trace(rho_t @ obs_t)), complex(np.trace(rho0 @ observable))


def resonant_partition_sum(abs_omega: float, beta: float,
                           n_terms: int = 100_000,
                           delta: Optional[float] = None,
                           richardson: bool = True) -> complex:
    """Damped truncated sum over the resonant ladder.

    S(delta) = sum_{n<N} exp(-(i beta |Omega| + delta)(n + 1/2)); the
    damping delta (default 30/N, so the truncated tail is below 1e-12)
    regularizes the non-convergent phase sum and is extrapolated to zero
    with two Richardson stages when richardson=True.
    """
    if delta is None:
        delta = 30.0 / n_terms
    n = np.arange(n_terms) + 0.5

    def damped(dl):
        return complex(np.sum(np.exp(-(1j * beta * abs_omega + dl) * n)))

    if not richardson:
        return damped(delta)
    s1, s2, s4 = damped(delta), damped(delta / 2), damped(delta / 4)
    r1 = 2.0 * s2 - s1
    r2 = 2.0 * s4 - s2
    return (4.0 * r2 - r1) / 3.0
