#!/usr/bin/env python3
"""End-to-end certified deconvolution on the sphere.

A smooth signal is convolved with the narrow spherical-cap filter, sampled
with bounded noise on an equal-area family, and reconstructed by weighted
least squares.  The a-priori certificate bounds both the measurement-space
error and, thanks to the cap's positive lower fit, the L2 error of the
signal itself.  No quantity from the run is used in the bound.
"""

import math

from spheredecon import (
    apply_multiplier,
    bound_apriori,
    cap_multipliers,
    choose_degree,
    fit_decay,
    fit_lower,
    lsq_solve,
    predicted_rate_exponent,
    random_poly,
    simulate,
    sobolev_norm,
    verify_bound,
)
from spheredecon.certify import find_family_size
from spheredecon.harmonics import num_coeffs

theta0 = 2 * math.pi / 41
omega, gamma, zeta = 2.0, 1.5, 1.5
beta = 0.01

print("Certified deconvolution: cap filter, bounded noise")
print("=" * 60)

m = choose_degree(beta, omega=omega, gamma=gamma)
print(f"noise level beta = {beta} -> balanced degree m = {m}")
print(f"predicted noise-rate exponent: {predicted_rate_exponent(omega, gamma, zeta):.2f}")

filt = cap_multipliers(theta0, 40)
c = fit_decay(filt, gamma)
c0 = fit_lower(filt, zeta)
print(f"multiplier fits: c = {c:.4f} (decay), c0 = {c0:.6f} (lower), range m <= 40")

truth = random_poly(20, sigma=omega, seed=42)
partition, fam, const, _ = find_family_size(m, eps_target=0.5, start_n=4 * num_coeffs(m))
print(f"family: N = {partition.N} nodes, measured epsilon = {const.epsilon:.4f}")

ms = simulate(truth, filt, fam, beta=beta, seed=2024)
report = lsq_solve(filt, fam, m, ms.y)
print(f"least squares: rank {report.rank}/{num_coeffs(m)}, residual {report.residual:.2e}")

cert = bound_apriori(
    m=m, beta=beta, epsilon=const.epsilon, omega=omega, gamma=gamma, zeta=zeta,
    norm_f_sigma=sobolev_norm(apply_multiplier(filt, truth), omega + gamma),
    c=c, c0=c0, fit_m_max=filt.m_max,
)
ver = verify_bound(truth, filt, report.solution, cert)

print(f"\ncertificate: approx term {cert.term_approx:.3e} + noise term {cert.term_noise:.3e}")
print(f"  measured ||F(f - p)||_H^zeta = {ver.measured_Hzeta:.3e} "
      f"<= bound {ver.bound_Hzeta:.3e}  [{'PASS' if ver.pass_Hzeta else 'FAIL'}]")
print(f"  measured ||f - p||_2         = {ver.measured_L2:.3e} "
      f"<= bound {ver.bound_L2:.3e}  [{'PASS' if ver.pass_L2 else 'FAIL'}]")

print("\nconvergence sweep (noiseless): measured error vs certificate curve")
print(f"{'m':>3} {'N':>6} {'measured L2':>13} {'certificate':>13}")
truth_s = random_poly(20, sigma=2.5, seed=5)
from spheredecon import identity_multipliers

ident = identity_multipliers(20)
for mm in range(3, 13):
    partition, fam, const, _ = find_family_size(mm, eps_target=0.999,
                                                start_n=4 * num_coeffs(mm))
    ms = simulate(truth_s, ident, fam, beta=0.0)
    rep = lsq_solve(ident, fam, mm, ms.y)
    cert = bound_apriori(m=mm, beta=0.0, epsilon=const.epsilon, omega=2.5,
                         gamma=0.0, zeta=0.0,
                         norm_f_sigma=sobolev_norm(truth_s, 2.5), c0=1.0)
    ver = verify_bound(truth_s, ident, rep.solution, cert)
    marker = "ok" if ver.measured_L2 <= cert.bound_Hzeta else "VIOLATION"
    print(f"{mm:3d} {partition.N:6d} {ver.measured_L2:13.3e} {cert.bound_Hzeta:13.3e}  {marker}")

print("\nthe certificate curve dominates the measured error at every degree,")
print("as the sampling theorem guarantees.")
