"""
Exact second-moment dynamics in an attractive inverse-square potential.

For ``H = p^2/2m - gamma/r^2`` the virial chain closes after two steps,
so ``<r^2>(t)`` is an exact quadratic in time fixed by three initial
averages: ``<r^2>_0``, ``<rp+pr>_0`` and ``<H>``.  This module holds that
quadratic, decides whether and when it first reaches zero, and produces the
dimensionless curves used for plotting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, ValidationError

__all__ = [
    "MomentState",
    "EvolutionCurve",
    "FallsAt",
    "Escapes",
    "QuasiStationary",
    "Fate",
    "NormalizedCurve",
    "curve_from_state",
    "r2_at",
    "classify_fate",
    "falling_time_symmetric",
    "normalized_curve",
    "classical_r2",
    "classical_curve",
]


@dataclass(frozen=True)
class MomentState:
    """Initial averages that determine ``<r^2>(t)``.

    Parameters
    ----------
    r2_0 : float
        ``<r^2>`` at t = 0 (m^2).
    d_0 : float
        ``<rp + pr>`` at t = 0 (kg m^2 / s).  Zero for real radial states.
    energy : float
        ``<H>`` (J), conserved.
    mass : float
        Particle mass (kg).
    """

    r2_0: float
    d_0: float
    energy: float
    mass: float

    def __post_init__(self):
        if not self.r2_0 > 0:
            raise ValidationError(f"r2_0 must be > 0, got {self.r2_0!r}")
        if not self.mass > 0:
            raise ValidationError(f"mass must be > 0, got {self.mass!r}")
        if not (math.isfinite(self.d_0) and math.isfinite(self.energy)):
            raise ValidationError("d_0 and energy must be finite")


@dataclass(frozen=True)
class EvolutionCurve:
    """The quadratic ``<r^2>(t) = a + b t + c t^2``."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValidationError(f"curve offset a must be > 0, got {self.a!r}")

    def __call__(self, t):
        """Evaluate the quadratic at any real ``t`` (array-friendly)."""
        t = np.asarray(t, dtype=float) if not np.isscalar(t) else t
        return self.a + t * (self.b + self.c * t)

    def derivative(self, t, order: int = 1):
        if order == 1:
            return self.b + 2.0 * self.c * t
        if order == 2:
            return 2.0 * self.c + 0.0 * t
        return 0.0 * t

    @property
    def discriminant(self) -> float:
        return self.b * self.b - 4.0 * self.a * self.c


@dataclass(frozen=True)
class FallsAt:
    """``<r^2>`` reaches zero at ``t_f`` seconds."""

    t_f: float


@dataclass(frozen=True)
class Escapes:
    """``<r^2>`` stays positive for all t >= 0."""


@dataclass(frozen=True)
class QuasiStationary:
    """``<r^2>`` is constant in time."""


Fate = Union[FallsAt, Escapes, QuasiStationary]


def curve_from_state(state: MomentState) -> EvolutionCurve:
    """Coefficients of ``<r^2>(t)`` for an initial moment state."""
    m = state.mass
    return EvolutionCurve(a=state.r2_0, b=state.d_0 / m, c=2.0 * state.energy / m)


def r2_at(curve: EvolutionCurve, t):
    """Value of the quadratic at ``t >= 0``.

    Negative values are returned unclamped; past the first zero the curve is
    only an analytic continuation, use :func:`classify_fate` to find it.
    """
    if np.any(np.asarray(t) < 0):
        raise ValidationError("t must be >= 0")
    return curve(t)


def _is_zero(x: float, scale: float, rtol: float) -> bool:
    return x == 0.0 or abs(x) <= rtol * scale


def _positive_roots(a: float, b: float, c: float) -> list[float]:
    disc = b * b - 4.0 * a * c
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    # cancellation-free pair of roots
    q = -0.5 * (b + math.copysign(sq, b))
    roots = []
    if q != 0.0:
        roots.extend((q / c, a / q))
    else:
        roots.append(0.0)
    return sorted(r for r in roots if r > 0)


def classify_fate(curve: EvolutionCurve, rtol: float = 0.0) -> Fate:
    """Decide whether ``<r^2>`` ever reaches zero.

    Parameters
    ----------
    curve : EvolutionCurve
    rtol : float, optional
        Relative tolerance for deciding that ``b`` or ``c`` vanish.  The
        default of 0 compares against exact zero, which is right for
        analytic inputs; use ~1e-12 for moments obtained by quadrature.

    Returns
    -------
    FallsAt, Escapes or QuasiStationary
        A zero discriminant (grazing contact) counts as falling.
    """
    a, b, c = curve.a, curve.b, curve.c
    c_zero = _is_zero(c, b * b / a, rtol) if b != 0.0 else c == 0.0
    if c_zero:
        b_zero = _is_zero(b, math.sqrt(a * abs(c)), rtol) if c != 0.0 else b == 0.0
        if b_zero:
            return QuasiStationary()
        if b < 0:
            return FallsAt(a / -b)
        return Escapes()
    if c > 0 and b >= 0:
        return Escapes()
    roots = _positive_roots(a, b, c)
    if not roots:
        return Escapes()
    return FallsAt(roots[0])


def falling_time_symmetric(r2_0: float, energy: float, mass: float) -> float:
    """Falling time of a state with ``<rp+pr>_0 = 0``.

    Equals ``sqrt(-m <r^2>_0 / (2 <H>))``.  Raises :class:`DomainError` for
    ``energy >= 0``: such a state never reaches the centre.
    """
    if not r2_0 > 0:
        raise ValidationError(f"r2_0 must be > 0, got {r2_0!r}")
    if not mass > 0:
        raise ValidationError(f"mass must be > 0, got {mass!r}")
    if energy >= 0:
        raise DomainError(
            f"energy = {energy!r} >= 0 with <rp+pr>_0 = 0: the falling time is "
            "imaginary and the particle cannot fall")
    return math.sqrt(-mass * r2_0 / (2.0 * energy))


@dataclass(frozen=True)
class NormalizedCurve:
    """Dimensionless form ``y(tau) = 1 + eps tau + quad_sign tau^2``.

    ``y = <r^2>/<r^2>_0`` and ``tau = t / t0``.
    """

    t0: float
    eps: float
    quad_sign: int

    def y(self, tau):
        tau = np.asarray(tau, dtype=float) if not np.isscalar(tau) else tau
        return 1.0 + self.eps * tau + self.quad_sign * tau * tau

    def fate(self) -> Fate:
        """Fate in units of ``t0``."""
        return classify_fate(EvolutionCurve(1.0, self.eps, float(self.quad_sign)))


def normalized_curve(state: MomentState) -> NormalizedCurve:
    """Time scale ``t0`` and shape parameter ``eps`` of the evolution.

    For ``<H> != 0``, ``t0 = sqrt(m <r^2>_0 / 2|H|)`` and
    ``eps = d_0 / sqrt(2 m |H| <r^2>_0)``.  For ``<H> = 0`` the scale is
    ``t0 = m <r^2>_0 / |d_0|`` and ``eps = sign(d_0)``.  When both vanish the
    time unit is arbitrary and a :class:`DomainError` is raised.
    """
    m, r2, d, H = state.mass, state.r2_0, state.d_0, state.energy
    if H != 0.0:
        t0 = math.sqrt(m * r2 / (2.0 * abs(H)))
        eps = d / math.sqrt(2.0 * m * abs(H) * r2)
        return NormalizedCurve(t0=t0, eps=eps, quad_sign=1 if H > 0 else -1)
    if d != 0.0:
        return NormalizedCurve(t0=m * r2 / abs(d), eps=math.copysign(1.0, d),
                               quad_sign=0)
    raise DomainError("energy = 0 and d_0 = 0: <r^2> is constant and the "
                      "time unit is arbitrary")


def classical_curve(r0: float, rdot0: float, E: float, mass: float) -> EvolutionCurve:
    """Classical radial law ``r^2 = r0^2 + 2 r0 rdot0 t + (2E/m) t^2``."""
    if not r0 > 0:
        raise ValidationError(f"r0 must be > 0, got {r0!r}")
    if not mass > 0:
        raise ValidationError(f"mass must be > 0, got {mass!r}")
    return EvolutionCurve(a=r0 * r0, b=2.0 * r0 * rdot0, c=2.0 * E / mass)


def classical_r2(r0: float, rdot0: float, E: float, mass: float, t):
    """Squared radius of a classical particle at time ``t``."""
    return classical_curve(r0, rdot0, E, mass)(t)
