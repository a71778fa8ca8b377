"""
Exact evolution of the mean square radius
=========================================

In an inverse-square potential ``<r^2>`` is exactly quadratic in time.  Its
three coefficients come from the initial ``<r^2>``, ``<rp+pr>`` and the
conserved energy, so the fate of a state is decided by a discriminant.
"""

import numpy as np

from centrefall import (MomentState, classify_fate, curve_from_state,
                        falling_time_symmetric, normalized_curve)

# A state at rest in the radial sense with negative energy falls.
state = MomentState(r2_0=1.0, d_0=0.0, energy=-0.5, mass=1.0)
curve = curve_from_state(state)
print("curve:", curve)
print("fate:", classify_fate(curve))
print("closed form t_f:", falling_time_symmetric(1.0, -0.5, 1.0))

# Positive energy does not protect a state that starts moving inwards
# fast enough.  The boundary is r2_0 = d0^2 / (8 m H).
for d0 in (-1.0, -2.0, -3.0):
    s = MomentState(r2_0=1.0, d_0=d0, energy=0.5, mass=1.0)
    bound = d0 ** 2 / (8 * s.mass * s.energy)
    print(f"d0={d0:+.0f}  falls if r2_0 <= {bound:.3f}:", classify_fate(curve_from_state(s)))

# Every curve collapses onto y(tau) = 1 + eps tau + sign(H) tau^2.
nc = normalized_curve(MomentState(r2_0=1.0, d_0=-3.0, energy=0.5, mass=1.0))
tau = np.linspace(0, 1, 6)
print(f"t0={nc.t0:.3f} eps={nc.eps:.3f}")
print("y(tau):", np.round(nc.y(tau), 4))
print("first zero at tau =", nc.fate())
