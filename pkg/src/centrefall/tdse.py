"""
Grid propagation of the 2D radial Schroedinger equation.

The oracle is independent of the closed-form moment laws: it evolves the
wavefunction itself and measures ``<r^2>``, ``<rp+pr>`` and ``<H>`` on the
grid.  Discretization is a finite-volume form of the cylindrical Laplacian
on cell centres ``r_i = (i - 1/2) dr``:

    (H R)_i = -(hbar^2/2m) [r_{i+1/2}(R_{i+1}-R_i) - r_{i-1/2}(R_i-R_{i-1})] / (r_i dr^2)
              + (hbar^2 l_z^2 / 2m r_i^2 - gamma / r_i^2) R_i

with ``r_{1/2} = 0`` (regular origin) and ``R = 0`` beyond ``r_max``.  In
the reduced amplitudes ``u_i = sqrt(r_i) R_i`` this is a real symmetric
tridiagonal matrix, so Crank-Nicolson stepping is exactly unitary and
conserves the discrete energy.
"""

from __future__ import annotations

import functools
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Union

import numpy as np
from scipy.linalg import lapack

from .constants import CODATA2018
from .errors import GridError, PropagationError, ValidationError
from .moments import EvolutionCurve
from .trial import RadialProfile, TrialState, trial_moments, trial_radial

__all__ = [
    "GridSpec",
    "RadialGridState",
    "Observables",
    "Trajectory",
    "default_grid",
    "discretize",
    "step",
    "observables",
    "propagate",
    "propagate_and_verify",
    "sweep",
    "LEAKAGE_THRESHOLD",
    "OUTER_FRACTION",
]

LEAKAGE_THRESHOLD = 1e-6
OUTER_FRACTION = 0.05
ORIGIN_CELLS = 10


@dataclass(frozen=True)
class GridSpec:
    """Uniform radial grid and time step.

    Parameters
    ----------
    n : int
        Number of cells, at least 256.
    r_max : float
        Outer radius; ``dr = r_max / n``.
    dt : float
        Time step.
    """

    n: int
    r_max: float
    dt: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 256:
            raise ValidationError(f"grid needs n >= 256 points, got {self.n!r}")
        if not self.r_max > 0:
            raise ValidationError(f"r_max must be > 0, got {self.r_max!r}")
        if not self.dt > 0:
            raise ValidationError(f"dt must be > 0, got {self.dt!r}")

    @property
    def dr(self) -> float:
        return self.r_max / self.n

    @property
    def r(self) -> np.ndarray:
        return self.dr * (np.arange(1, self.n + 1) - 0.5)

    def refined(self) -> "GridSpec":
        """Same domain with ``dr`` and ``dt`` halved."""
        return GridSpec(2 * self.n, self.r_max, 0.5 * self.dt)


def default_grid(beta: float, mass: float = 1.0, hbar: float = 1.0,
                 n: int = 4096, width: float = 12.0,
                 dt_scale: float = 1e-3) -> GridSpec:
    """Grid suited to a trial state of width parameter ``beta``.

    ``r_max = width / sqrt(beta)`` and ``dt = dt_scale * m / (hbar beta)``,
    the latter being the time over which ``<r^2>`` of such a state
    changes by order one.
    """
    return GridSpec(n, width / math.sqrt(beta), dt_scale * mass / (hbar * beta))


@dataclass(frozen=True)
class RadialGridState:
    """Reduced amplitudes ``u_i = sqrt(r_i) R(r_i)`` plus the model."""

    u: np.ndarray
    spec: GridSpec
    gamma: float
    mass: float
    l_z: int = 0
    hbar: float = CODATA2018.hbar
    t: float = 0.0

    def __post_init__(self):
        if self.u.shape != (self.spec.n,):
            raise ValidationError("amplitude array does not match the grid")
        if not self.mass > 0:
            raise ValidationError(f"mass must be > 0, got {self.mass!r}")

    @property
    def r(self) -> np.ndarray:
        return self.spec.r

    @property
    def R(self) -> np.ndarray:
        """Radial function on the cell centres."""
        return self.u / np.sqrt(self.r)


class Observables(NamedTuple):
    norm: float
    r2: float
    d: float
    energy: float


# -- Hamiltonian ----------------------------------------------------------------

@functools.lru_cache(maxsize=32)
def _hamiltonian(spec: GridSpec, gamma: float, mass: float, l_z: int,
                 hbar: float):
    """Diagonal and off-diagonal of the symmetric tridiagonal H."""
    r, dr = spec.r, spec.dr
    kin = hbar * hbar / (2.0 * mass)
    faces = dr * np.arange(1, spec.n)  # r_{i+1/2} between cells i and i+1
    diag = 2.0 * kin / (dr * dr) + (kin * l_z * l_z - gamma) / (r * r)
    off = -kin * faces / (np.sqrt(r[:-1] * r[1:]) * dr * dr)
    diag.setflags(write=False)
    off.setflags(write=False)
    return diag, off


def _apply_h(diag, off, u):
    hu = diag * u
    hu[1:] += off * u[:-1]
    hu[:-1] += off * u[1:]
    return hu


class _CrankNicolson:
    """Factorized ``1 + i dt H / 2 hbar``, reused for every step."""

    def __init__(self, spec, gamma, mass, l_z, hbar):
        self.diag, self.off = _hamiltonian(spec, gamma, mass, l_z, hbar)
        self.theta = 0.5j * spec.dt / hbar
        dl = (self.theta * self.off).astype(complex)
        d = 1.0 + self.theta * self.diag
        self._lu = lapack.zgttrf(dl, d, dl.copy())
        if self._lu[-1] != 0:
            raise PropagationError("Crank-Nicolson matrix is singular")

    def __call__(self, u):
        rhs = u - self.theta * _apply_h(self.diag, self.off, u)
        dl, d, du, du2, ipiv, _ = self._lu
        x, info = lapack.zgttrs(dl, d, du, du2, ipiv, rhs)
        if info != 0 or not np.all(np.isfinite(x)):
            raise PropagationError("tridiagonal solve produced non-finite amplitudes")
        return x


@functools.lru_cache(maxsize=16)
def _stepper(spec, gamma, mass, l_z, hbar) -> _CrankNicolson:
    return _CrankNicolson(spec, gamma, mass, l_z, hbar)


def _stepper_for(state: RadialGridState) -> _CrankNicolson:
    return _stepper(state.spec, float(state.gamma), float(state.mass),
                    int(state.l_z), float(state.hbar))


# -- operations -----------------------------------------------------------------

def _suggest(spec: GridSpec, r2: float) -> GridSpec:
    r_max = max(spec.r_max, 6.5 * math.sqrt(r2))
    dr = min(r_max / spec.n, 0.09 * math.sqrt(r2))
    n = max(256, int(math.ceil(r_max / dr)))
    return GridSpec(n, r_max, spec.dt)


def discretize(source: Union[TrialState, RadialProfile], spec: GridSpec,
               gamma: float, mass: float, hbar: float = CODATA2018.hbar
               ) -> RadialGridState:
    """Place a trial state or sampled profile on the propagation grid.

    The result is renormalized so that ``sum |u_i|^2 dr = 1``.

    Raises
    ------
    GridError
        If ``<r^2>`` of the state lies outside ``[(10 dr)^2, (r_max/6)^2]``;
        the exception carries a suggested grid.
    """
    r = spec.r
    if isinstance(source, TrialState):
        l_z = source.l_z
        R = trial_radial(source, r)
        r2 = trial_moments(source, 0.0, mass, hbar).r2
    elif isinstance(source, RadialProfile):
        l_z = source.l_z
        re = np.interp(r, source.r, np.real(source.R), left=0.0, right=0.0)
        im = np.interp(r, source.r, np.imag(source.R), left=0.0, right=0.0)
        R = re + 1j * im if np.iscomplexobj(source.R) else re
        rho = np.abs(R) ** 2 * r
        r2 = float(np.sum(rho * r * r) / np.sum(rho))
    else:
        raise ValidationError(f"cannot discretize {type(source).__name__}")

    lo, hi = (ORIGIN_CELLS * spec.dr) ** 2, (spec.r_max / 6.0) ** 2
    if not lo <= r2 <= hi:
        raise GridError(
            f"<r^2> = {r2:.4g} outside the resolvable range [{lo:.4g}, {hi:.4g}]",
            suggested=_suggest(spec, r2))
    u = np.sqrt(r) * R
    u = u / math.sqrt(np.sum(np.abs(u) ** 2) * spec.dr)
    return RadialGridState(u.astype(complex), spec, float(gamma), float(mass),
                           int(l_z), float(hbar))


def step(state: RadialGridState) -> RadialGridState:
    """Advance by one Crank-Nicolson step of ``state.spec.dt``."""
    u = _stepper_for(state)(state.u)
    return replace(state, u=u, t=state.t + state.spec.dt)


def observables(state: RadialGridState) -> Observables:
    """Norm, ``<r^2>``, ``<rp+pr>`` and ``<H>`` on the grid.

    ``<rp+pr>`` is built from the discrete probability current through cell
    faces, so that ``d<r^2>/dt = <rp+pr>/m`` holds exactly for the grid
    dynamics; it vanishes identically for real amplitudes.  The energy is
    the gradient form, equal to ``<u, H u>``.
    """
    spec, u, r = state.spec, state.u, state.r
    dr = spec.dr
    rho = np.abs(u) ** 2
    norm = float(np.sum(rho) * dr)
    r2 = float(np.sum(r * r * rho) * dr)

    diag, off = _hamiltonian(spec, state.gamma, state.mass, state.l_z, state.hbar)
    if np.iscomplexobj(u):
        # current through face i+1/2 times (r_{i+1}^2 - r_i^2)
        flow = -2.0 / state.hbar * off * np.imag(np.conj(u[:-1]) * u[1:]) * dr
        d = float(state.mass * np.sum(flow * (r[1:] ** 2 - r[:-1] ** 2)))
    else:
        d = 0.0

    R = state.R
    kin = state.hbar ** 2 / (2.0 * state.mass)
    faces = dr * np.arange(1, spec.n + 1)  # includes the outer face r_max
    grad = np.empty(spec.n, dtype=R.dtype)
    grad[:-1] = R[1:] - R[:-1]
    grad[-1] = -R[-1]
    V = (kin * state.l_z ** 2 - state.gamma) / (r * r)
    energy = float(kin * np.sum(faces * np.abs(grad) ** 2) / dr
                   + np.sum(V * rho) * dr)
    return Observables(norm, r2, d, energy)


@dataclass
class Trajectory:
    """Recorded observables and the exact law built from the first record.

    ``t_valid`` marks the end of the span in which the grid is trusted:
    before probability in the outer 5% of the grid exceeds
    :data:`LEAKAGE_THRESHOLD` and while ``<r^2>`` stays above
    ``(10 dr)^2``.
    """

    t: np.ndarray
    norm: np.ndarray
    r2: np.ndarray
    d: np.ndarray
    energy: np.ndarray
    leakage: np.ndarray
    t_valid: float
    mass: float
    spec: GridSpec
    meta: dict = field(default_factory=dict)

    @property
    def law(self) -> EvolutionCurve:
        return EvolutionCurve(self.r2[0], self.d[0] / self.mass,
                              2.0 * self.energy[0] / self.mass)

    @property
    def r2_analytic(self) -> np.ndarray:
        return self.law(self.t)

    @property
    def rel_dev(self) -> np.ndarray:
        return np.abs(self.r2 - self.r2_analytic) / self.r2[0]

    @property
    def valid(self) -> np.ndarray:
        return self.t <= self.t_valid

    @property
    def max_rel_dev(self) -> float:
        return float(np.max(self.rel_dev[self.valid]))

    def fitted_quadratic(self) -> np.ndarray:
        """Least-squares ``(c, b, a)`` of ``r2`` over the validity window."""
        v = self.valid
        return np.polyfit(self.t[v], self.r2[v], 2)

    def to_csv(self, fh=None) -> str:
        """Write columns ``t, norm, r2_numeric, r2_analytic, d, energy, rel_dev``.

        Grid metadata goes first as ``#`` comment lines.  Returns the text
        when ``fh`` is None.
        """
        out = io.StringIO() if fh is None else fh
        spec = self.spec
        out.write(f"# grid n={spec.n} r_max={spec.r_max:.9g} dr={spec.dr:.9g} "
                  f"dt={spec.dt:.9g}\n")
        out.write(f"# mass={self.mass:.9g} t_valid={self.t_valid:.9g} "
                  f"max_rel_dev={self.max_rel_dev:.9g}\n")
        for key, value in self.meta.items():
            out.write(f"# {key}={value}\n")
        out.write("t,norm,r2_numeric,r2_analytic,d,energy,rel_dev\n")
        cols = (self.t, self.norm, self.r2, self.r2_analytic, self.d,
                self.energy, self.rel_dev)
        for row in zip(*cols):
            out.write(",".join(f"{x:.9g}" for x in row) + "\n")
        return out.getvalue() if fh is None else ""


def _leakage(state: RadialGridState, start: int) -> float:
    return float(np.sum(np.abs(state.u[start:]) ** 2) * state.spec.dr)


def propagate(initial: RadialGridState, t_max: float, record_every: int = 10,
              stop_when_invalid: bool = True) -> Trajectory:
    """Evolve ``initial`` up to ``t_max`` and record observables."""
    if not t_max > 0:
        raise ValidationError(f"t_max must be > 0, got {t_max!r}")
    spec = initial.spec
    n_steps = int(math.ceil(t_max / spec.dt - 1e-9))
    outer = int(round(spec.n * (1.0 - OUTER_FRACTION)))
    r2_floor = (ORIGIN_CELLS * spec.dr) ** 2
    advance = _stepper_for(initial)

    rows = [(initial.t, *observables(initial), _leakage(initial, outer))]
    t_valid = None
    state = initial
    u = initial.u
    for k in range(1, n_steps + 1):
        u = advance(u)
        if k % record_every and k != n_steps:
            continue
        state = replace(initial, u=u, t=initial.t + k * spec.dt)
        obs = observables(state)
        leak = _leakage(state, outer)
        rows.append((state.t, *obs, leak))
        if t_valid is None and (leak > LEAKAGE_THRESHOLD or obs.r2 < r2_floor):
            t_valid = rows[-2][0]
            if stop_when_invalid:
                break
    data = np.array(rows, dtype=float).T
    t = data[0] - initial.t
    if t_valid is None:
        t_valid = t[-1]
    else:
        t_valid -= initial.t
    return Trajectory(t=t, norm=data[1], r2=data[2], d=data[3], energy=data[4],
                      leakage=data[5], t_valid=float(t_valid), mass=initial.mass,
                      spec=spec, meta={"gamma": f"{initial.gamma:.9g}",
                                       "l_z": initial.l_z})


def propagate_and_verify(initial: RadialGridState, t_max: float,
                         record_every: int = 10):
    """Propagate and compare ``<r^2>`` with the exact quadratic law.

    The law is built only from the observables of the first record.

    Returns
    -------
    trajectory : Trajectory
    max_rel_dev : float
        ``max |r2_numeric - r2_analytic| / r2(0)`` over the validity window.

    Raises
    ------
    GridError
        If the grid is invalid from the first recorded step on.
    """
    traj = propagate(initial, t_max, record_every)
    if traj.t_valid <= 0:
        raise GridError("validity window is empty: the state leaks to the "
                        "outer boundary or collapses below 10 dr at once",
                        suggested=_suggest(initial.spec, traj.r2[0]))
    return traj, traj.max_rel_dev


def sweep(initials, t_max: float, record_every: int = 10, max_workers=None):
    """Run :func:`propagate_and_verify` for several states.

    Results come back in input order.
    """
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(
            lambda s: propagate_and_verify(s, t_max, record_every), initials))
