"""
Power-law trial states and the critical coupling
================================================

``R_s(r) ~ r^s exp(-beta r^2 / 2)`` has closed-form moments.  Its energy
changes sign at ``gamma_c = s hbar^2 / 2m``, which never drops below
``hbar^2 / 8m`` for the physically admissible ``s >= 1/2``.
"""

from centrefall import (TrialState, critical_coupling, min_critical_coupling,
                        quadrature_moments, quasi_stationary_exponent,
                        sample_trial_profile, trial_moments)

mass = hbar = 1.0

# Closed form against an independent quadrature of a sampled profile.
for s in (0.5, 1.0, 2.0):
    ts = TrialState(s, beta=1.0)
    exact = trial_moments(ts, gamma=0.2, mass=mass, hbar=hbar)
    quad = quadrature_moments(sample_trial_profile(ts), 0.2, mass, hbar)
    print(f"s={s}: <r^2> {exact.r2:.6f} / {quad.r2:.6f}   "
          f"<H> {exact.energy:.6f} / {quad.energy:.6f}   gamma_c {critical_coupling(exact):.3f}")

print("universal minimum hbar^2/8m =", min_critical_coupling(mass, hbar))

# For a given coupling, one exponent gives exactly zero energy.
gamma = 1.5
s0 = quasi_stationary_exponent(gamma, mass, hbar)
print(f"gamma={gamma}: s0={s0:g}, <H>={trial_moments(TrialState(s0, 1.0), gamma, mass, hbar).energy:g}")
print(f"the s0/3 variant has <H>={trial_moments(TrialState(s0 / 3, 1.0), gamma, mass, hbar).energy:g}")
