import math

import pytest
from hypothesis import given, strategies as st

from centrefall.constants import (CODATA2018, NATURAL, Constants, Particle,
                                  UnitSystem, builtin_particle, builtin_particles,
                                  convert_polarizability, load_particles)
from centrefall.errors import ValidationError


def test_codata_values_pinned():
    assert CODATA2018.hbar == 1.054571817e-34
    assert CODATA2018.eps0 == 8.8541878128e-12
    assert CODATA2018.amu == 1.66053906660e-27


def test_constants_are_identical_between_lookups():
    assert UnitSystem.SI.constants is UnitSystem.SI.constants
    assert UnitSystem.SI.constants.hbar == CODATA2018.hbar
    assert UnitSystem.NATURAL.constants is NATURAL


def test_constants_must_be_positive():
    with pytest.raises(ValidationError):
        Constants(hbar=0.0, eps0=1.0, amu=1.0)


@pytest.mark.parametrize("value, expected", [
    (24.3, 2.43e-29),
    (0.0, 0.0),
    (0.667, 6.67e-31),
])
def test_convert_polarizability(value, expected):
    assert convert_polarizability(value) == pytest.approx(expected, rel=1e-14, abs=0)


def test_convert_polarizability_rejects_negative():
    with pytest.raises(ValidationError):
        convert_polarizability(-1.0)


@given(st.floats(0, 1e4), st.floats(0, 1e4))
def test_convert_polarizability_is_additive(x, y):
    assert convert_polarizability(x + y) == pytest.approx(
        convert_polarizability(x) + convert_polarizability(y), rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("name, mass_u, alpha", [
    ("Li7", 7.016003, 2.43e-29),
    ("H1", 1.007825, 6.67e-31),
    ("He3", 3.016029, 2.05e-31),
])
def test_builtin_particles(name, mass_u, alpha):
    p = builtin_particle(name)
    assert p.mass == pytest.approx(mass_u * CODATA2018.amu, rel=1e-14)
    assert p.alpha_vol == pytest.approx(alpha, rel=1e-12)


def test_he3_polarizability_consistent_with_quoted_critical_charge():
    # invert q_c = sqrt(hbar^2 pi^2 eps0 / (m alpha)) at q_c = 31 pC/m
    m = 3.016029 * CODATA2018.amu
    q = 31e-12
    alpha = CODATA2018.hbar ** 2 * math.pi ** 2 * CODATA2018.eps0 / (m * q * q)
    assert alpha == pytest.approx(2.02e-31, rel=5e-3)
    assert builtin_particle("He3").alpha_vol == pytest.approx(alpha, rel=0.02)
    # brute recomputation of q_c with the bundled value lands near 31 pC/m
    q_back = math.sqrt(CODATA2018.hbar ** 2 * math.pi ** 2 * CODATA2018.eps0
                       / (m * builtin_particle("He3").alpha_vol))
    assert q_back == pytest.approx(31e-12, rel=0.01)


def test_unknown_particle():
    with pytest.raises(KeyError):
        builtin_particle("Xe")


def test_particle_validation():
    with pytest.raises(ValidationError):
        Particle("x", -1.0, 1e-30)
    with pytest.raises(ValidationError):
        Particle("x", 1.0, 0.0)


def test_builtin_particles_dict():
    assert set(builtin_particles()) == {"Li7", "H1", "He3"}


def test_load_particles(tmp_path):
    f = tmp_path / "atoms.txt"
    f.write_text("# extra species\nname = Na23\nmass_u = 22.98977\nalpha_A3 = 24.1\n\n"
                 "name=Cs133\nmass_u=132.905\nalpha_A3=59.4\n")
    na, cs = load_particles(f)
    assert na.name == "Na23" and cs.name == "Cs133"
    assert na.alpha_vol == pytest.approx(24.1e-30)
    assert cs.mass == pytest.approx(132.905 * CODATA2018.amu)


def test_load_particles_rejects_incomplete(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("name = X\nmass_u = 1\n")
    with pytest.raises(ValidationError):
        load_particles(f)
