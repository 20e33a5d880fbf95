"""Self-contained cross-validation suite behind ``swanson-dgf validate``.

Each check pits a closed form against an independent numerical route
(quadrature, dense linear algebra, damped spectral sums).  The suite is a
fast subset of the full test suite, meant for smoke-testing an install.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import dblquad, quad
from scipy.linalg import expm

from . import fock_oracle, iho, mathieu, model_space, response, su11


def _check(name: str, value: float, bound: float, verbose: bool) -> bool:
    ok = value <= bound
    if verbose:
        status = "PASS" if ok else "FAIL"
        print(f"[{status}] {name}: {value:.3e} (bound {bound:.1e})")
    return ok


def _report(name: str, text: str, verbose: bool):
    if verbose:
        print(f"[info] {name}: {text}")


def run_all(verbose: bool = True) -> bool:
    ok = True
    rng = np.random.default_rng(20240817)

    # region map spot values
    eff = model_space.classify_region(model_space.SwansonParams(1.0, 0.2, 0.3))
    err = max(abs(eff.mass - 2.0), abs(eff.omega_sq - 0.76))
    ok &= _check("region map (1, 0.2, 0.3)", err, 1e-14, verbose)

    # su(1,1) disentangling vs direct matrix exponential
    worst = 0.0
    for _ in range(200):
        c = rng.uniform(-2, 2, 6)
        e = su11.Su11Element(c[0] + 1j * c[1], c[2] + 1j * c[3],
                             c[4] + 1j * c[5])
        direct = expm(su11.matrix_rep(e))
        worst = max(worst, float(np.abs(
            su11.recompose(su11.disentangle(e)) - direct).max()))
    ok &= _check("su(1,1) disentangle recomposition", worst, 1e-12, verbose)

    # Mathieu: q=0 reduction and ODE residual
    zs = np.linspace(0.1, 5.0, 40)
    red = max(abs(mathieu.mathieu_c(1.0, 0.0, z) - math.cos(z)) for z in zs)
    ok &= _check("Mathieu q=0 reduction", red, 1e-12, verbose)
    ok &= _check("Mathieu ODE residual (a=1, q=0.5)",
                 mathieu.ode_residual(1.0, 0.5, zs), 1e-8, verbose)

    # response integrals vs quadrature
    eff1 = model_space.classify_region(model_space.SwansonParams(0.6, -0.4, 0.4))
    d1 = response.DriveParams(V=0.26, W=1.0, epsilon=0.05)
    t = 3.0
    om = eff1.abs_omega
    quad_i1, _ = quad(lambda s: math.cos(d1.W * s) * math.exp(d1.epsilon * s)
                      * math.sin(2 * om * (t - s)), -640.0, t, limit=4000)
    ok &= _check("I1 closed form vs quadrature",
                 abs(response.i1_integral(d1, eff1, t) - quad_i1), 1e-8,
                 verbose)
    eff2 = model_space.classify_region(
        model_space.SwansonParams(0.75, 0.0, 0.0))
    d2 = response.DriveParams(V=0.16, W=1.0, t0=0.0)
    quad_i2, _ = quad(lambda s: math.cos(d2.W * s)
                      * math.sin(2 * eff2.abs_omega * (t - s)), 0.0, t,
                      limit=400, epsabs=1e-13, epsrel=1e-13)
    ok &= _check("I2 closed form vs quadrature",
                 abs(response.i2_integral(d2, eff2, t) - quad_i2), 1e-10,
                 verbose)

    # second-order kernels vs nested quadrature
    d3 = response.DriveParams(V=math.pi, W=math.pi)
    abs_om = 2.0 * math.pi
    k1, k2 = iho.kernel_K(d3, abs_om, 0.3)
    q1 = dblquad(lambda sp, s: d3.V ** 2 * math.cos(d3.W * s)
                 * math.cos(d3.W * sp) * math.exp(2 * abs_om * (s - sp)),
                 0, 0.3, 0, lambda s: s, epsabs=1e-12, epsrel=1e-12)[0]
    q2 = dblquad(lambda sp, s: d3.V ** 2 * math.cos(d3.W * s)
                 * math.cos(d3.W * sp) * math.exp(-2 * abs_om * (s - sp)),
                 0, 0.3, 0, lambda s: s, epsabs=1e-12, epsrel=1e-12)[0]
    ok &= _check("growing kernel vs double quadrature", abs(k1 - q1), 1e-9,
                 verbose)
    ok &= _check("decaying kernel vs double quadrature", abs(k2 - q2), 1e-9,
                 verbose)

    # static gauge identity and trace invariance
    p = model_space.SwansonParams(1.0, 0.2, 0.3)
    ok &= _check("static gauge residual (N=80, block 48)",
                 fock_oracle.gauge_check(p, dim=80), 1e-6, verbose)
    worst = 0.0
    for _ in range(10):
        m = rng.standard_normal((24, 24)) + 1j * rng.standard_normal((24, 24))
        obs = np.zeros((60, 60), dtype=complex)
        obs[:24, :24] = 0.5 * (m + m.conj().T)
        lhs, rhs = fock_oracle.trace_check(p, 1.0, obs, dim=60)
        worst = max(worst, abs(lhs - rhs))
    ok &= _check("trace invariance (10 random observables)", worst, 1e-10,
                 verbose)

    # detailed balance of the spectral lines
    ops = fock_oracle.build_operators(fock_oracle.FockBasis(30), p)
    beta = 1.0
    freqs, j_w = fock_oracle.spectral_intensity(ops.x, ops.x, ops.h0, beta)
    _, jp_w = fock_oracle.spectral_intensity(ops.x, ops.x, ops.h0, beta,
                                             primed=True)
    kms = float(np.abs(jp_w - np.exp(beta * freqs) * j_w).max())
    ok &= _check("detailed balance J'(w) = e^{bw} J(w)", kms, 1e-12, verbose)

    # reduced partition function vs damped resonant sum
    worst = 0.0
    for b in (0.3, 0.9, 1.7):
        target = 1.0 / (2j * math.sin(0.5 * b * abs_om))
        s = fock_oracle.resonant_partition_sum(abs_om, b)
        worst = max(worst, abs(s - target))
    ok &= _check("reduced partition sum (3 temperatures)", worst, 1e-4,
                 verbose)

    # specific heat vs numerical derivative of U_r
    h = 1e-4
    temp = 4.0
    num = (iho.thermo_reduced(abs_om, temp + h).U_r
           - iho.thermo_reduced(abs_om, temp - h).U_r) / (2 * h)
    c_r = iho.thermo_reduced(abs_om, temp).C_r
    ok &= _check("C_r vs dU_r/dT", abs(c_r - num) / abs(c_r), 1e-6, verbose)

    # light oracle-vs-propagator cross check (short window)
    drive = response.DriveParams(V=0.26, W=1.0, epsilon=0.05)
    ts = np.array([0.0, 1.0, 2.0])
    x2o, p2o = fock_oracle.example1_trajectory(eff1, drive, 1.0, ts, dim=50,
                                               dt_fine=4e-3, dt_coarse=0.05)
    x2e, p2e = response.exact_moments_grid(drive, eff1, 1.0, ts,
                                           method="propagator")
    gap = max(float(np.abs((x2o - x2e) / x2e).max()),
              float(np.abs((p2o - p2e) / p2e).max()))
    ok &= _check("dense oracle vs 2x2 propagator (t<=2)", gap, 1e-6, verbose)

    # time-dependent gauge residuals, informational (distinguishes variants)
    dm = mathieu.MathieuDrive.from_couplings(p.alpha - p.gamma, 0.16, 1.0)
    for variant in ("printed", "rescaled"):
        res = fock_oracle.gauge_check(p, t=0.5, drive=dm, dim=60,
                                      drive_variant=variant)
        _report(f"gauge residual at t=0.5, variant={variant}",
                f"{res:.6e}", verbose)

    if verbose:
        print("validation " + ("PASSED" if ok else "FAILED"))
    return bool(ok)
