"""
Polarizable atoms around a thin charged wire.

A line charge ``q`` on a wire of radius ``r1`` inside a grounded cylinder
of radius ``r2`` produces ``E = q / (2 pi eps0 r)``.  An atom with
polarizability volume ``alpha`` then feels ``-gamma / r^2`` with

    gamma = alpha q^2 / (8 pi^2 eps0)

and the wire voltage is ``U = q ln(r2/r1) / (2 pi eps0)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .constants import CODATA2018, Constants, Particle, builtin_particle
from .errors import BelowFallingLimitError, DomainError, ValidationError
from .moments import falling_time_symmetric
from .trial import TrialState, min_critical_coupling, trial_moments

__all__ = [
    "WireChamber",
    "WireDrive",
    "ScalingPlan",
    "DUS_CHAMBER",
    "DUS_PRESSURE_TORR",
    "PRESETS",
    "coupling_from_charge",
    "charge_to_voltage",
    "voltage_to_charge",
    "infer_outer_radius",
    "critical_charge",
    "critical_voltage",
    "scaled_critical_voltage_factor",
    "chamber_falling_time",
    "FallingEstimate",
    "ProposalRow",
    "ProposalReport",
    "proposal_report",
]


@dataclass(frozen=True)
class WireChamber:
    """Coaxial wire (radius ``r1``) in a grounded cylinder (radius ``r2``)."""

    r1: float
    r2: float
    length: float = 0.1

    def __post_init__(self):
        if not 0 < self.r1 < self.r2:
            raise ValidationError(f"need 0 < r1 < r2, got r1={self.r1!r}, r2={self.r2!r}")
        if not self.length > 0:
            raise ValidationError(f"length must be > 0, got {self.length!r}")

    @property
    def log_ratio(self) -> float:
        return math.log(self.r2 / self.r1)

    def capacitance(self, const: Constants = CODATA2018) -> float:
        """Capacitance per unit length, F/m."""
        return 2.0 * math.pi * const.eps0 / self.log_ratio


# ultracold Li experiment: 0.7 um wire, 4.2 mm chamber, 10 cm long
DUS_CHAMBER = WireChamber(r1=0.7e-6, r2=4.2e-3, length=0.1)
DUS_PRESSURE_TORR = 6e-10  # metadata only; atoms are treated as collisionless
PRESETS = {"dus": DUS_CHAMBER}


@dataclass(frozen=True)
class WireDrive:
    """Wire excitation given either as line charge (C/m) or voltage (V)."""

    line_charge: Optional[float] = None
    voltage: Optional[float] = None

    def __post_init__(self):
        if (self.line_charge is None) == (self.voltage is None):
            raise ValidationError("give exactly one of line_charge or voltage")
        value = self.line_charge if self.voltage is None else self.voltage
        if not value >= 0:
            raise ValidationError(f"drive must be >= 0, got {value!r}")

    def charge(self, chamber: WireChamber, const: Constants = CODATA2018) -> float:
        if self.line_charge is not None:
            return self.line_charge
        return voltage_to_charge(chamber, self.voltage, const)

    def volts(self, chamber: WireChamber, const: Constants = CODATA2018) -> float:
        if self.voltage is not None:
            return self.voltage
        return charge_to_voltage(chamber, self.line_charge, const)


@dataclass(frozen=True)
class ScalingPlan:
    """Rescale the wire radius by ``lambda1`` and the chamber by ``lambda2``."""

    lambda1: float = 1.0
    lambda2: float = 1.0

    def __post_init__(self):
        if not (self.lambda1 > 0 and self.lambda2 > 0):
            raise ValidationError("scale factors must be > 0")

    def apply(self, chamber: WireChamber) -> WireChamber:
        r1, r2 = self.lambda1 * chamber.r1, self.lambda2 * chamber.r2
        if not r1 < r2:
            raise DomainError(f"scaled wire radius {r1:.3g} m is not inside the "
                              f"scaled chamber radius {r2:.3g} m")
        return WireChamber(r1, r2, chamber.length)


def coupling_from_charge(particle: Particle, q: float,
                         const: Constants = CODATA2018) -> float:
    """Inverse-square coupling ``alpha q^2 / 8 pi^2 eps0`` (J m^2)."""
    if not q >= 0:
        raise ValidationError(f"line charge must be >= 0, got {q!r}")
    return particle.alpha_vol * q * q / (8.0 * math.pi ** 2 * const.eps0)


def charge_to_voltage(chamber: WireChamber, q: float,
                      const: Constants = CODATA2018) -> float:
    return q / chamber.capacitance(const)


def voltage_to_charge(chamber: WireChamber, U: float,
                      const: Constants = CODATA2018) -> float:
    return U * chamber.capacitance(const)


def infer_outer_radius(r1: float, q: float, U: float,
                       const: Constants = CODATA2018) -> float:
    """Chamber radius that makes line charge ``q`` correspond to voltage ``U``."""
    if not (q > 0 and U >= 0 and r1 > 0):
        raise ValidationError("need r1 > 0, q > 0 and U >= 0")
    return r1 * math.exp(2.0 * math.pi * const.eps0 * U / q)


def critical_charge(particle: Particle, const: Constants = CODATA2018) -> float:
    """Line charge (C/m) whose coupling equals ``hbar^2 / 8m``.

    ``q_c = sqrt(hbar^2 pi^2 eps0 / (m alpha))``; vanishes as hbar -> 0.
    """
    return math.sqrt(const.hbar ** 2 * math.pi ** 2 * const.eps0
                     / (particle.mass * particle.alpha_vol))


def critical_voltage(particle: Particle, chamber: WireChamber,
                     const: Constants = CODATA2018) -> float:
    return charge_to_voltage(chamber, critical_charge(particle, const), const)


def scaled_critical_voltage_factor(chamber: WireChamber, plan: ScalingPlan) -> float:
    """``U_c' / U_c = 1 + ln(lambda2/lambda1) / ln(r2/r1)``."""
    factor = 1.0 + math.log(plan.lambda2 / plan.lambda1) / chamber.log_ratio
    if factor <= 0:
        raise DomainError(f"scaling {plan} shrinks the chamber below the wire "
                          f"(factor {factor:.3g} <= 0)")
    return factor


@dataclass(frozen=True)
class FallingEstimate:
    """Result of :func:`chamber_falling_time`."""

    t_f: float
    gamma: float
    line_charge: float
    voltage: float
    energy: float
    r2_0: float
    s: float
    critical_voltage: float


def chamber_falling_time(particle: Particle, chamber: WireChamber,
                         drive: WireDrive, s: float = 0.5,
                         const: Constants = CODATA2018) -> FallingEstimate:
    """Falling time of a trial cloud filling the chamber.

    The atoms are taken in the power-times-Gaussian state of exponent ``s``
    with ``<r^2>_0 = r2^2``, so ``<H> = (s+1)/r2^2 (hbar^2/2m - gamma/s)``.

    Raises
    ------
    BelowFallingLimitError
        If ``<H> >= 0``; carries the universal critical voltage of the
        chamber.
    """
    q = drive.charge(chamber, const)
    U = drive.volts(chamber, const)
    gamma = coupling_from_charge(particle, q, const)
    r2_0 = chamber.r2 ** 2
    ts = TrialState(s=s, beta=(s + 1.0) / r2_0)
    energy = trial_moments(ts, gamma, particle.mass, const.hbar).energy
    U_c = critical_voltage(particle, chamber, const)
    if energy >= 0:
        # voltage at which this particular state reaches zero energy
        gamma_state = s * const.hbar ** 2 / (2.0 * particle.mass)
        q_state = math.sqrt(gamma_state * 8.0 * math.pi ** 2 * const.eps0
                            / particle.alpha_vol)
        U_state = charge_to_voltage(chamber, q_state, const)
        raise BelowFallingLimitError(
            f"{particle.name} at U = {U:.3g} V is below the quantum falling limit: "
            f"<H> = {energy:.3g} J >= 0 (critical voltage {U_c:.3g} V; this "
            f"s = {s:g} state needs U > {U_state:.3g} V)",
            critical_voltage=U_c)
    t_f = falling_time_symmetric(r2_0, energy, particle.mass)
    return FallingEstimate(t_f=t_f, gamma=gamma, line_charge=q, voltage=U,
                           energy=energy, r2_0=r2_0, s=s, critical_voltage=U_c)


@dataclass(frozen=True)
class ProposalRow:
    particle: str
    q_c_pC_per_m: float
    U_c_V: float
    U_c_scaled_V: float
    ratio_vs_Li: float


@dataclass(frozen=True)
class ProposalReport:
    rows: tuple
    chamber: WireChamber
    plan: ScalingPlan
    factor: float
    baseline_U_c: float

    def as_dicts(self) -> list[dict]:
        return [dict(r.__dict__) for r in self.rows]

    def to_json(self) -> str:
        return json.dumps({
            "schema": "centrefall.proposal/1",
            "chamber": {"r1": self.chamber.r1, "r2": self.chamber.r2,
                        "length": self.chamber.length},
            "plan": {"lambda1": self.plan.lambda1, "lambda2": self.plan.lambda2},
            "factor": self.factor,
            "baseline_U_c_V": self.baseline_U_c,
            "rows": self.as_dicts(),
        }, indent=2)

    def to_text(self) -> str:
        head = (f"{'particle':<10}{'q_c [pC/m]':>12}{'U_c [V]':>10}"
                f"{'U_c scaled [V]':>16}{'x Li':>8}")
        lines = [head, "-" * len(head)]
        for r in self.rows:
            lines.append(f"{r.particle:<10}{r.q_c_pC_per_m:>12.3g}{r.U_c_V:>10.3g}"
                         f"{r.U_c_scaled_V:>16.3g}{r.ratio_vs_Li:>8.3g}")
        lines.append(f"scaling factor {self.factor:.3g} "
                     f"(lambda2/lambda1 = {self.plan.lambda2 / self.plan.lambda1:g})")
        return "\n".join(lines)


def proposal_report(particles: Sequence[Particle], chamber: WireChamber,
                    plan: ScalingPlan, baseline: Optional[Particle] = None,
                    const: Constants = CODATA2018) -> ProposalReport:
    """Critical charge and voltage per atom, before and after rescaling.

    ``ratio_vs_Li`` compares each rescaled critical voltage with that of
    ``baseline`` (Li-7 by default) in the unscaled chamber.
    """
    baseline = baseline or builtin_particle("Li7")
    factor = scaled_critical_voltage_factor(chamber, plan)
    plan.apply(chamber)
    U_base = critical_voltage(baseline, chamber, const)
    rows = []
    for p in particles:
        U_c = critical_voltage(p, chamber, const)
        rows.append(ProposalRow(p.name, critical_charge(p, const) * 1e12, U_c,
                                U_c * factor, U_c * factor / U_base))
    return ProposalReport(tuple(rows), chamber, plan, factor, U_base)


def min_coupling_check(particle: Particle, const: Constants = CODATA2018) -> float:
    """Relative mismatch between ``gamma(q_c)`` and ``hbar^2 / 8m``."""
    g = coupling_from_charge(particle, critical_charge(particle, const), const)
    ref = min_critical_coupling(particle.mass, const.hbar)
    return abs(g / ref - 1.0)
