"""Quantum fall into an attractive inverse-square potential."""

__version__ = "0.1.0"

from .constants import (CODATA2018, NATURAL, Constants, Particle, UnitSystem,
                        builtin_particle, convert_polarizability, load_particles)
from .errors import (BelowFallingLimitError, CentreFallError, DomainError,
                     GridError, PropagationError, SingularIntegralError,
                     ValidationError)
from .moments import (Escapes, EvolutionCurve, FallsAt, MomentState,
                      NormalizedCurve, QuasiStationary, classical_r2,
                      classify_fate, curve_from_state, falling_time_symmetric,
                      normalized_curve, r2_at)
from .trial import (MomentSet, RadialProfile, TrialState, critical_coupling,
                    min_critical_coupling, quadrature_moments,
                    quasi_stationary_exponent, sample_trial_profile,
                    trial_moments)
from .experiment import (DUS_CHAMBER, ScalingPlan, WireChamber, WireDrive,
                         chamber_falling_time, charge_to_voltage,
                         coupling_from_charge, critical_charge, critical_voltage,
                         infer_outer_radius, proposal_report,
                         scaled_critical_voltage_factor, voltage_to_charge)
from .tdse import (GridSpec, RadialGridState, Trajectory, default_grid,
                   discretize, observables, propagate, propagate_and_verify,
                   step)
