"""
Checking the quadratic law on a grid
====================================

The grid propagator evolves the wavefunction and measures ``<r^2>``
directly.  Where the Hamiltonian is self-adjoint the measured curve follows
the exact law closely.  With ``l_z = 0`` in two dimensions any attractive
``-gamma/r^2`` is already supercritical, and the grid result depends on the
cutoff instead of converging.
"""

from centrefall import TrialState, default_grid, discretize, propagate_and_verify

nat = dict(mass=1.0, hbar=1.0)
grid = default_grid(beta=1.0)

cases = [
    ("free, smooth s=2", TrialState(2.0, 1.0), 0.0),
    ("l_z=1, gamma=0.3 (subcritical)", TrialState(2.0, 1.0, l_z=1), 0.3),
    ("l_z=0, gamma=0.25", TrialState(1.0, 1.0), 0.25),
    ("l_z=0, gamma=1.0", TrialState(1.0, 1.0), 1.0),
]
for label, ts, gamma in cases:
    traj, dev = propagate_and_verify(discretize(ts, grid, gamma, **nat), t_max=1.0)
    print(f"{label:32s} t_valid={traj.t_valid:.2f}  max_rel_dev={dev:.2e}")

# Refining the grid does not settle the supercritical case.
spec = grid
for _ in range(3):
    _, dev = propagate_and_verify(discretize(TrialState(1.0, 1.0), spec, 1.0, **nat), 1.0)
    print(f"n={spec.n:5d}  max_rel_dev={dev:.3f}")
    spec = spec.refined()
