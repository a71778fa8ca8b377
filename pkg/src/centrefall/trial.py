"""
Moments of radial trial states in two dimensions.

A state is ``psi = R(r) exp(i l_z phi) / sqrt(2 pi)`` with radial measure
``r dr``.  The family

    R_s(r) = sqrt(2 beta^(s+1) / Gamma(s+1)) r^s exp(-beta r^2 / 2)

has closed-form moments; arbitrary sampled profiles are handled by
:func:`quadrature_moments`.  Kinetic energy is always taken in the
positive gradient form ``(hbar^2/2m) int (|R'|^2 + l_z^2 |R|^2 / r^2) r dr``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .constants import CODATA2018
from .errors import SingularIntegralError, ValidationError

__all__ = [
    "TrialState",
    "MomentSet",
    "RadialProfile",
    "UNPHYSICAL_WARNING",
    "trial_radial",
    "trial_moments",
    "critical_coupling",
    "min_critical_coupling",
    "quasi_stationary_exponent",
    "sample_trial_profile",
    "quadrature_moments",
    "integrate_radial",
    "load_profile",
]

UNPHYSICAL_WARNING = ("s < 1/2: the energy integrand of the closed form is "
                      "singular at the origin; such states need infinite "
                      "energy to prepare")

_HBAR = CODATA2018.hbar


@dataclass(frozen=True)
class TrialState:
    """Parameters ``(s, beta, l_z)`` of the power-times-Gaussian family."""

    s: float
    beta: float
    l_z: int = 0

    def __post_init__(self):
        if not self.s > 0:
            raise ValidationError(f"s must be > 0, got {self.s!r}")
        if not self.beta > 0:
            raise ValidationError(f"beta must be > 0, got {self.beta!r}")
        if int(self.l_z) != self.l_z:
            raise ValidationError(f"l_z must be an integer, got {self.l_z!r}")


@dataclass(frozen=True)
class MomentSet:
    """Expectation values of one state at one coupling.

    Attributes
    ----------
    r2, inv_r2 : float
        ``<r^2>`` and ``<1/r^2>``.
    kinetic, energy : float
        ``<T>`` and ``<H> = <T> - gamma <1/r^2>``.
    d : float
        ``<rp + pr>``; zero for real radial functions.
    gamma : float
        Coupling the energy was evaluated at.
    warnings : tuple of str
    """

    r2: float
    inv_r2: float
    kinetic: float
    energy: float
    d: float = 0.0
    gamma: float = 0.0
    warnings: tuple = ()

    def __post_init__(self):
        if not (self.r2 > 0 and self.inv_r2 > 0 and self.kinetic > 0):
            raise ValidationError("r2, inv_r2 and kinetic must be > 0")

    def at_coupling(self, gamma: float) -> "MomentSet":
        """Same state, energy re-evaluated at another coupling."""
        return replace(self, gamma=gamma,
                       energy=self.kinetic - gamma * self.inv_r2)


def trial_radial(ts: TrialState, r):
    """Normalized radial function of the trial family at radii ``r``."""
    r = np.asarray(r, dtype=float)
    log_norm = 0.5 * (math.log(2.0) + (ts.s + 1.0) * math.log(ts.beta)
                      - math.lgamma(ts.s + 1.0))
    with np.errstate(divide="ignore"):
        return np.exp(log_norm + ts.s * np.log(r) - 0.5 * ts.beta * r * r)


def trial_moments(ts: TrialState, gamma: float, mass: float,
                  hbar: float = _HBAR) -> MomentSet:
    """Closed-form moments of a trial state.

    ``<r^2> = (s+1)/beta``, ``<1/r^2> = beta/s`` and
    ``<T> = hbar^2 beta / 2m * (1 + l_z^2 / s)``.  For s < 1/2 the result
    carries :data:`UNPHYSICAL_WARNING`.
    """
    if not mass > 0:
        raise ValidationError(f"mass must be > 0, got {mass!r}")
    s, beta = ts.s, ts.beta
    inv_r2 = beta / s
    kinetic = hbar * hbar * beta / (2.0 * mass) * (1.0 + ts.l_z ** 2 / s)
    warnings = (UNPHYSICAL_WARNING,) if s < 0.5 else ()
    return MomentSet(r2=(s + 1.0) / beta, inv_r2=inv_r2, kinetic=kinetic,
                     energy=kinetic - gamma * inv_r2, d=0.0, gamma=gamma,
                     warnings=warnings)


def critical_coupling(ms: MomentSet) -> float:
    """Coupling at which the state's energy crosses zero.

    Above it ``<H> < 0`` and, with ``<rp+pr>_0 = 0``, the state falls.
    """
    return ms.kinetic / ms.inv_r2


def min_critical_coupling(mass: float, hbar: float = _HBAR) -> float:
    """Universal threshold ``hbar^2 / 8m``."""
    if not mass > 0:
        raise ValidationError(f"mass must be > 0, got {mass!r}")
    return hbar * hbar / (8.0 * mass)


def quasi_stationary_exponent(gamma: float, mass: float,
                              hbar: float = _HBAR) -> float:
    """Exponent ``s0 = 2 m gamma / hbar^2`` giving zero energy at ``l_z = 0``.

    ``psi_{s0}`` keeps ``<r^2>`` constant.  The smaller value
    ``2 m gamma / 3 hbar^2`` that is sometimes quoted leaves the energy
    negative: ``<H> = -2 beta gamma / 3s`` at that exponent.
    """
    if not gamma > 0:
        raise ValidationError(f"gamma must be > 0, got {gamma!r}")
    if not mass > 0:
        raise ValidationError(f"mass must be > 0, got {mass!r}")
    return 2.0 * mass * gamma / (hbar * hbar)


@dataclass(frozen=True)
class RadialProfile:
    """Radial function sampled on ``r_i = i * dr``, ``i = 1..n``.

    ``norm_factor`` records any rescaling applied when the profile was
    loaded (the stored values are already multiplied by it).
    """

    r: np.ndarray
    R: np.ndarray
    l_z: int = 0
    norm_factor: float = 1.0
    dr: float = field(init=False)

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        R = np.asarray(self.R)
        if r.ndim != 1 or r.shape != R.shape:
            raise ValidationError("r and R must be 1-D arrays of equal length")
        if r.size < 16:
            raise ValidationError("profile needs at least 16 samples")
        dr = r[1] - r[0]
        if not dr > 0 or not np.allclose(np.diff(r), dr, rtol=1e-9, atol=0):
            raise ValidationError("r must be uniformly spaced and increasing")
        if not np.isclose(r[0], dr, rtol=1e-6):
            raise ValidationError("grid must start at r = dr (open at the origin)")
        if not np.all(np.isfinite(R)):
            raise ValidationError("profile contains non-finite values")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "dr", float(dr))

    @property
    def norm(self) -> float:
        """``int |R|^2 r dr`` by quadrature."""
        return integrate_radial(np.abs(self.R) ** 2 * self.r, self.r,
                                _origin_power(self.R, self.r) * 2 + 1)

    def normalized(self) -> "RadialProfile":
        factor = 1.0 / math.sqrt(self.norm)
        return RadialProfile(self.r, self.R * factor, self.l_z,
                             self.norm_factor * factor)


def sample_trial_profile(ts: TrialState, r_max: float | None = None,
                         n: int = 16384) -> RadialProfile:
    """Sample a trial state; ``r_max`` defaults to ``12/sqrt(beta)``."""
    if r_max is None:
        r_max = 12.0 / math.sqrt(ts.beta)
    r = r_max / n * np.arange(1, n + 1)
    return RadialProfile(r, trial_radial(ts, r), ts.l_z)


def load_profile(path, l_z: int = 0) -> RadialProfile:
    """Read a two-column text file ``r  R(r)`` with one header line.

    A third column, when present, is taken as ``Im R``.  The profile is
    renormalized; the factor applied is kept in ``norm_factor``.
    """
    data = np.loadtxt(Path(path), skiprows=1, ndmin=2)
    if data.shape[1] not in (2, 3):
        raise ValidationError(f"{path}: expected 2 or 3 columns, got {data.shape[1]}")
    R = data[:, 1] if data.shape[1] == 2 else data[:, 1] + 1j * data[:, 2]
    return RadialProfile(data[:, 0], R, l_z).normalized()


# -- quadrature ---------------------------------------------------------------

_ORIGIN_PANELS = 16  # product-integrated quadratic panels next to the origin


def _origin_power(R, r) -> float:
    """Leading exponent p of ``|R| ~ r^p`` from the first four samples.

    Fits ``log|R| = p log r + c0 + c1 r + c2 r^2``, which absorbs a smooth
    non-power factor to second order.
    """
    y = np.log(np.abs(R[:4]).astype(float))
    if not np.all(np.isfinite(y)):
        return 0.0
    x = r[:4]
    A = np.column_stack([np.log(x), np.ones(4), x, x * x])
    return float(np.linalg.solve(A, y)[0])


def _panel_weights(x0: float, a: float) -> np.ndarray:
    """Weights w_k with int_{x0}^{x0+2} x^a q(x) dx = sum w_k q(x0+k).

    Exact for quadratic q.  Uses Lagrange polynomials in t = x - x0.
    """
    # moments int_{x0}^{x0+2} x^a (x-x0)^m dx for m = 0, 1, 2
    def mom(q):
        return ((x0 + 2.0) ** (q + 1) - x0 ** (q + 1)) / (q + 1)

    m0 = mom(a)
    m1 = mom(a + 1) - x0 * m0
    m2 = mom(a + 2) - 2.0 * x0 * mom(a + 1) + x0 * x0 * m0
    # L0 = (t-1)(t-2)/2, L1 = -t(t-2), L2 = t(t-1)/2
    return np.array([0.5 * (m2 - 3.0 * m1 + 2.0 * m0),
                     -(m2 - 2.0 * m1),
                     0.5 * (m2 - m1)])


def _head_weights(a: float) -> np.ndarray:
    """Weights for int_0^1 x^a q(x) dx with q the quadratic through x=1,2,3."""
    m0, m1, m2 = (1.0 / (a + k + 1.0) for k in range(3))
    # Lagrange basis on nodes 1, 2, 3 expanded in powers of x
    return np.array([0.5 * (m2 - 5.0 * m1 + 6.0 * m0),
                     -(m2 - 4.0 * m1 + 3.0 * m0),
                     0.5 * (m2 - 3.0 * m1 + 2.0 * m0)])


def integrate_radial(f, r, power: float) -> float:
    """Integrate samples ``f(r_i)``, ``r_i = i dr``, over ``[0, r_n]``.

    ``f`` is assumed to behave like ``r^power * (smooth)`` at the origin.
    The smooth factor is integrated against the exact weight ``x^power``
    on the first panels and on ``[0, dr]``; composite Simpson covers the
    rest.
    """
    f = np.asarray(f)
    r = np.asarray(r, dtype=float)
    n = r.size
    h = r[1] - r[0]
    if power <= -1:
        raise SingularIntegralError(
            f"integrand ~ r^{power:.3g} at the origin is not integrable")
    x = r / h
    K = min(2 * _ORIGIN_PANELS + 1, n - (n % 2 == 0))  # odd node count
    smooth = f[:K] / x[:K] ** power

    total = np.dot(_head_weights(power), smooth[:3])
    for j in range(0, K - 2, 2):
        total += np.dot(_panel_weights(x[j], power), smooth[j:j + 3])
    total *= h

    tail = f[K - 1:]
    m = tail.size
    if m >= 3:
        if m % 2 == 0:
            # Simpson 3/8 on the last three intervals keeps the order
            total += 3.0 * h / 8.0 * (tail[-4] + 3 * tail[-3] + 3 * tail[-2] + tail[-1])
            tail = tail[:-3]
        w = np.ones(tail.size)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        total += h / 3.0 * np.dot(w, tail)
    elif m == 2:
        total += 0.5 * h * (tail[0] + tail[1])
    return float(np.real_if_close(total)) if np.isrealobj(f) else total


def _derivative(g, h):
    """Fourth-order finite-difference derivative of uniform samples."""
    g = np.asarray(g)
    d = np.empty_like(g)
    d[2:-2] = (g[:-4] - 8.0 * g[1:-3] + 8.0 * g[3:-1] - g[4:]) / (12.0 * h)
    c = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12.0 * h)
    d[0] = np.dot(c, g[:5])
    d[1] = np.dot([-3.0, -10.0, 18.0, -6.0, 1.0], g[:5]) / (12.0 * h)
    d[-1] = -np.dot(c, g[-1:-6:-1])
    d[-2] = -np.dot([-3.0, -10.0, 18.0, -6.0, 1.0], g[-1:-6:-1]) / (12.0 * h)
    return d


def quadrature_moments(profile: RadialProfile, gamma: float, mass: float,
                       hbar: float = _HBAR, norm_tol: float = 1e-8) -> MomentSet:
    """Numerically integrated moments of a sampled radial function.

    The origin behaviour ``R ~ r^p`` is estimated from the first samples and
    factored out before differentiating and integrating, so states with
    non-integer ``p`` keep high accuracy.

    Raises
    ------
    ValidationError
        If the profile is not normalized to within ``norm_tol`` or carries
        significant probability near ``r_max``.
    SingularIntegralError
        If ``R`` does not vanish at the origin (``<1/r^2>`` diverges).
    """
    if not mass > 0:
        raise ValidationError(f"mass must be > 0, got {mass!r}")
    r, R, h = profile.r, profile.R, profile.dr
    p = _origin_power(R, r)
    if p <= 1e-3:
        raise SingularIntegralError(
            f"R ~ r^{p:.3g} near the origin: <1/r^2> diverges; the profile "
            "must vanish at r = 0")
    rho = np.abs(R) ** 2
    norm = integrate_radial(rho * r, r, 2 * p + 1)
    if abs(norm - 1.0) > norm_tol:
        raise ValidationError(f"profile norm {norm:.12g} differs from 1 by more "
                              f"than {norm_tol:g}; call .normalized() first")
    n_tail = max(3, r.size // 20)
    tail = integrate_radial(rho[-n_tail:] * r[-n_tail:],
                            r[-n_tail:] - r[-n_tail] + h, 0.0)
    if tail > 1e-10:
        raise ValidationError(f"probability {tail:.2e} in the outer 5% of the "
                              "profile; extend r_max")

    # R = r^p G with G smooth at the origin
    rp = r ** p
    G = R / rp
    dR = rp * (p * G / r + _derivative(G, h))

    r2 = integrate_radial(rho * r ** 3, r, 2 * p + 3)
    inv_r2 = integrate_radial(rho / r, r, 2 * p - 1)
    grad = np.abs(dR) ** 2 * r + profile.l_z ** 2 * rho / r
    kinetic = hbar * hbar / (2.0 * mass) * integrate_radial(grad, r, 2 * p - 1)
    d = 0.0
    if np.iscomplexobj(R):
        im = np.imag(np.conj(R) * dR) * r * r
        d = 2.0 * hbar * integrate_radial(im, r, 2 * p + 1)
    return MomentSet(r2=r2, inv_r2=inv_r2, kinetic=kinetic,
                     energy=kinetic - gamma * inv_r2, d=d, gamma=gamma)
