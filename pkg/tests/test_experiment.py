import json
import math

import pytest
from hypothesis import given, strategies as st

from centrefall.constants import CODATA2018, Constants, builtin_particle, builtin_particles
from centrefall.errors import BelowFallingLimitError, DomainError, ValidationError
from centrefall.experiment import (DUS_CHAMBER, ScalingPlan, WireChamber, WireDrive,
                                   chamber_falling_time, charge_to_voltage,
                                   coupling_from_charge, critical_charge,
                                   critical_voltage, infer_outer_radius,
                                   min_coupling_check, proposal_report,
                                   scaled_critical_voltage_factor, voltage_to_charge)
from centrefall.trial import min_critical_coupling

LI, H, HE = (builtin_particle(n) for n in ("Li7", "H1", "He3"))
PC = 1e-12


def test_coupling_hand_check():
    # alpha = 24.3 A^3, q = 640 pC/m, eps0 = 8.854e-12
    expected = 24.3e-30 * (640e-12) ** 2 / (8 * math.pi ** 2 * 8.8541878128e-12)
    assert expected == pytest.approx(1.4237e-38, rel=1e-4)
    assert coupling_from_charge(LI, 640 * PC) == pytest.approx(expected, rel=1e-12)
    assert coupling_from_charge(LI, 640 * PC) == pytest.approx(1.42e-38, rel=0.01)


def test_coupling_trivia():
    assert coupling_from_charge(LI, 0.0) == 0.0
    assert coupling_from_charge(LI, 2e-10) == pytest.approx(4 * coupling_from_charge(LI, 1e-10))
    with pytest.raises(ValidationError):
        coupling_from_charge(LI, -1.0)


def test_dus_capacitor_values():
    assert charge_to_voltage(DUS_CHAMBER, 640 * PC) == pytest.approx(100.0, rel=0.02)
    assert voltage_to_charge(DUS_CHAMBER, 100.0) == pytest.approx(640 * PC, rel=0.02)
    assert 8.67 <= DUS_CHAMBER.log_ratio <= 8.70


def test_infer_outer_radius():
    assert infer_outer_radius(0.7e-6, 640 * PC, 100.0) == pytest.approx(4.2e-3, rel=0.02)
    assert infer_outer_radius(0.7e-6, 640 * PC, 0.0) == pytest.approx(0.7e-6)
    r1, q = 1e-6, 5e-10
    ratio = infer_outer_radius(r1, q, 50.0) / r1
    assert infer_outer_radius(r1, q, 100.0) / r1 == pytest.approx(ratio ** 2)


@pytest.mark.parametrize("particle, q_pc", [(LI, 1.8), (H, 30.0), (HE, 31.0)])
def test_critical_charge(particle, q_pc):
    assert critical_charge(particle) / PC == pytest.approx(q_pc, rel=0.05)


@pytest.mark.parametrize("particle, volts", [(LI, 0.29), (H, 4.6), (HE, 4.8)])
def test_critical_voltage(particle, volts):
    assert critical_voltage(particle, DUS_CHAMBER) == pytest.approx(volts, rel=0.05)


@pytest.mark.parametrize("ratio, factor", [(10, 1.26), (100, 1.53)])
def test_scaling_factor(ratio, factor):
    plan = ScalingPlan(lambda1=1.0, lambda2=ratio)
    assert scaled_critical_voltage_factor(DUS_CHAMBER, plan) == pytest.approx(factor, rel=0.01)


def test_scaling_factor_identity_and_domain():
    assert scaled_critical_voltage_factor(DUS_CHAMBER, ScalingPlan(3.0, 3.0)) == 1.0
    with pytest.raises(DomainError):
        scaled_critical_voltage_factor(DUS_CHAMBER, ScalingPlan(lambda1=1e5, lambda2=1e-2))
    with pytest.raises(DomainError):
        ScalingPlan(lambda1=1e4, lambda2=1.0).apply(DUS_CHAMBER)


def test_falling_time_dus():
    est = chamber_falling_time(LI, DUS_CHAMBER, WireDrive(voltage=100.0))
    assert 5.5 <= est.t_f <= 7.5
    assert est.t_f == pytest.approx(6.5, rel=0.02)
    assert est.critical_voltage == pytest.approx(0.29, rel=0.05)


def test_falling_time_at_limit_raises():
    U_c = critical_voltage(LI, DUS_CHAMBER)
    with pytest.raises(BelowFallingLimitError) as exc:
        chamber_falling_time(LI, DUS_CHAMBER, WireDrive(voltage=U_c))
    assert exc.value.critical_voltage == pytest.approx(U_c)
    assert "critical voltage" in str(exc.value)


def test_falling_time_strong_coupling_asymptotics():
    # gamma >> hbar^2/2m: t_f ~ r2^2 sqrt(m / 6 gamma) for s = 1/2
    t1 = chamber_falling_time(LI, DUS_CHAMBER, WireDrive(line_charge=1e-6)).t_f
    t2 = chamber_falling_time(LI, DUS_CHAMBER, WireDrive(line_charge=2e-6)).t_f
    assert t2 == pytest.approx(t1 / 2, rel=1e-6)
    gamma = coupling_from_charge(LI, 1e-6)
    assert t1 == pytest.approx(DUS_CHAMBER.r2 ** 2 * math.sqrt(LI.mass / (6 * gamma)), rel=1e-6)


def test_wire_drive_validation():
    with pytest.raises(ValidationError):
        WireDrive()
    with pytest.raises(ValidationError):
        WireDrive(line_charge=1e-10, voltage=1.0)
    with pytest.raises(ValidationError):
        WireChamber(1e-3, 1e-4)


def test_proposal_report():
    rep = proposal_report([HE, H], DUS_CHAMBER, ScalingPlan(1.0, 10.0))
    he, h = rep.rows
    assert he.U_c_scaled_V == pytest.approx(6.1, rel=0.05)
    assert h.U_c_scaled_V == pytest.approx(5.8, rel=0.05)
    assert he.ratio_vs_Li == pytest.approx(21.0, rel=0.05)
    doc = json.loads(rep.to_json())
    assert set(doc["rows"][0]) == {"particle", "q_c_pC_per_m", "U_c_V", "U_c_scaled_V", "ratio_vs_Li"}
    text = rep.to_text()
    assert "He3" in text and "6.08" in text


# -- invariants -------------------------------------------------------------------

@pytest.mark.parametrize("particle", list(builtin_particles().values()))
def test_dimensional_closure(particle):
    assert min_coupling_check(particle) < 1e-12
    g = coupling_from_charge(particle, critical_charge(particle))
    assert g == pytest.approx(min_critical_coupling(particle.mass), rel=1e-12)


def test_critical_charge_scaling_law():
    ratio = critical_charge(LI) / critical_charge(H)
    assert ratio == pytest.approx(math.sqrt(H.mass * H.alpha_vol / (LI.mass * LI.alpha_vol)), rel=1e-12)


@given(st.floats(0, 1e4))
def test_voltage_charge_roundtrip(U):
    assert charge_to_voltage(DUS_CHAMBER, voltage_to_charge(DUS_CHAMBER, U)) == pytest.approx(U, rel=1e-14, abs=1e-300)


@given(st.floats(-3, 3), st.floats(0.01, 3))
def test_scaling_factor_monotone(log_ratio, step):
    f = lambda lr: 1.0 + lr / DUS_CHAMBER.log_ratio
    a = ScalingPlan(1.0, 10 ** log_ratio)
    b = ScalingPlan(1.0, 10 ** (log_ratio + step))
    fa = scaled_critical_voltage_factor(DUS_CHAMBER, a)
    assert fa == pytest.approx(f(math.log(10 ** log_ratio)))
    assert scaled_critical_voltage_factor(DUS_CHAMBER, b) > fa


def test_classical_limit():
    qs = []
    for scale in (1.0, 1e-3, 1e-6):
        const = Constants(CODATA2018.hbar * scale, CODATA2018.eps0, CODATA2018.amu)
        qs.append(critical_charge(LI, const))
    assert qs[1] == pytest.approx(qs[0] * 1e-3, rel=1e-12)
    assert qs[2] < 1e-5 * qs[0]
