"""
Physical constants, unit modes and atom records.

Constant values are CODATA 2018 and are fixed at import time.  A
:class:`Constants` instance can be built with a different ``hbar`` to
probe classical limits; nothing in the package recomputes the defaults.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ValidationError

__all__ = [
    "Constants",
    "CODATA2018",
    "NATURAL",
    "UnitSystem",
    "Particle",
    "convert_polarizability",
    "builtin_particle",
    "builtin_particles",
    "load_particles",
    "ANGSTROM3",
]

#: one cubic angstrom in m^3
ANGSTROM3 = 1e-30


@dataclass(frozen=True)
class Constants:
    """Set of constants used by a calculation.

    Parameters
    ----------
    hbar : float
        Reduced Planck constant, J s.
    eps0 : float
        Vacuum permittivity, F/m.
    amu : float
        Atomic mass unit, kg.
    """

    hbar: float
    eps0: float
    amu: float

    def __post_init__(self):
        for name in ("hbar", "eps0", "amu"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be strictly positive")


CODATA2018 = Constants(hbar=1.054571817e-34, eps0=8.8541878128e-12,
                       amu=1.66053906660e-27)

# hbar = m = 1; eps0 and amu are placeholders, never used in natural mode
NATURAL = Constants(hbar=1.0, eps0=1.0, amu=1.0)


class UnitSystem(enum.Enum):
    """Unit convention for the abstract (moment, trial, oracle) layers."""

    SI = "si"
    NATURAL = "natural"

    @property
    def constants(self) -> Constants:
        return CODATA2018 if self is UnitSystem.SI else NATURAL


def convert_polarizability(value: float) -> float:
    """Convert a polarizability volume from cubic angstrom to m^3."""
    if value < 0 or math.isnan(value):
        raise ValidationError(f"polarizability must be >= 0, got {value!r}")
    return value * ANGSTROM3


@dataclass(frozen=True)
class Particle:
    """Neutral polarizable atom.

    ``alpha_vol`` is the polarizability *volume* in m^3, so the induced
    dipole energy in a field E is ``-eps0 * alpha_vol * E**2 / 2``.
    """

    name: str
    mass: float
    alpha_vol: float

    def __post_init__(self):
        if not self.mass > 0:
            raise ValidationError(f"{self.name}: mass must be > 0")
        if not self.alpha_vol > 0:
            raise ValidationError(f"{self.name}: alpha_vol must be > 0")

    @classmethod
    def from_table(cls, name: str, mass_u: float, alpha_A3: float,
                   const: Constants = CODATA2018) -> "Particle":
        return cls(name, mass_u * const.amu, convert_polarizability(alpha_A3))


# name -> (isotope mass in u, polarizability volume in A^3)
_ATOMS = {
    "Li7": (7.016003, 24.3),
    "H1": (1.007825, 0.667),
    "He3": (3.016029, 0.205),
}


def builtin_particle(name: str) -> Particle:
    """Return one of the bundled atoms: ``Li7``, ``H1`` or ``He3``."""
    try:
        mass_u, alpha = _ATOMS[name]
    except KeyError:
        raise KeyError(f"unknown particle {name!r}; "
                       f"known: {', '.join(sorted(_ATOMS))}") from None
    return Particle.from_table(name, mass_u, alpha)


def builtin_particles() -> dict[str, Particle]:
    return {name: builtin_particle(name) for name in _ATOMS}


def load_particles(path) -> list[Particle]:
    """Read custom atoms from a ``key=value`` file.

    Records are separated by blank lines; each needs ``name``, ``mass_u``
    and ``alpha_A3``.  ``#`` starts a comment.

    ::

        name = Na23
        mass_u = 22.98977
        alpha_A3 = 24.1
    """
    records, current = [], {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if current:
                records.append(current)
                current = {}
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in current:
            records.append(current)
            current = {}
        current[key] = value
    if current:
        records.append(current)

    particles = []
    for rec in records:
        missing = {"name", "mass_u", "alpha_A3"} - rec.keys()
        if missing:
            raise ValidationError(f"{path}: record {rec} lacks {sorted(missing)}")
        try:
            mass_u, alpha = float(rec["mass_u"]), float(rec["alpha_A3"])
        except ValueError as exc:
            raise ValidationError(f"{path}: {exc}") from None
        particles.append(Particle.from_table(rec["name"], mass_u, alpha))
    return particles
