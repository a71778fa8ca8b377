"""
Cold atoms around a charged wire
================================

A polarizable atom near a line charge ``q`` feels ``-gamma/r^2`` with
``gamma = alpha q^2 / 8 pi^2 eps0``.  Below a critical charge no state can
fall; above it the falling time of a cloud filling the chamber follows from
the moment law.
"""

from centrefall import (DUS_CHAMBER, ScalingPlan, WireDrive, builtin_particle,
                        chamber_falling_time, critical_charge, critical_voltage,
                        proposal_report)

li = builtin_particle("Li7")
print(f"Li7: q_c = {critical_charge(li) * 1e12:.3g} pC/m, "
      f"U_c = {critical_voltage(li, DUS_CHAMBER):.3g} V")

est = chamber_falling_time(li, DUS_CHAMBER, WireDrive(voltage=100.0))
print(f"at 100 V: gamma = {est.gamma:.3g} J m^2, t_f = {est.t_f:.2f} s")

# Light atoms have a much higher threshold; a larger chamber raises it further.
report = proposal_report([builtin_particle("H1"), builtin_particle("He3")],
                         DUS_CHAMBER, ScalingPlan(lambda1=1.0, lambda2=10.0))
print(report.to_text())
