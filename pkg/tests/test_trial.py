import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from centrefall.constants import CODATA2018, builtin_particle
from centrefall.errors import SingularIntegralError, ValidationError
from centrefall.moments import FallsAt, QuasiStationary, Escapes, MomentState, classify_fate, curve_from_state
from centrefall.trial import (UNPHYSICAL_WARNING, RadialProfile, TrialState,
                              critical_coupling, load_profile, min_critical_coupling,
                              quadrature_moments, quasi_stationary_exponent,
                              sample_trial_profile, trial_moments, trial_radial)


def quad_oracle(s, beta, l_z=0, hbar=1.0, m=1.0):
    """Moments by adaptive quadrature of the analytic integrands."""
    N2 = 2 * beta ** (s + 1) / special.gamma(s + 1)
    R = lambda r: math.sqrt(N2) * r ** s * math.exp(-beta * r * r / 2)
    dR = lambda r: math.sqrt(N2) * (s * r ** (s - 1) - beta * r ** (s + 1)) * math.exp(-beta * r * r / 2)
    q = lambda f: integrate.quad(f, 0, np.inf, epsabs=0, epsrel=1e-13, limit=400)[0]
    norm = q(lambda r: R(r) ** 2 * r)
    r2 = q(lambda r: R(r) ** 2 * r ** 3)
    inv = q(lambda r: R(r) ** 2 / r)
    kin = hbar ** 2 / (2 * m) * q(lambda r: dR(r) ** 2 * r + l_z ** 2 * R(r) ** 2 / r)
    return norm, r2, inv, kin


@pytest.mark.parametrize("s", [0.6, 1.0, 2.0, 3.5])
@pytest.mark.parametrize("beta", [0.3, 1.0, 4.0])
def test_closed_forms_against_quadrature_oracle(s, beta):
    norm, r2, inv, kin = quad_oracle(s, beta, l_z=0)
    ms = trial_moments(TrialState(s, beta), 0.0, 1.0, hbar=1.0)
    assert norm == pytest.approx(1.0, rel=1e-9)
    assert ms.r2 == pytest.approx(r2, rel=1e-9)
    assert ms.inv_r2 == pytest.approx(inv, rel=1e-9)
    assert ms.kinetic == pytest.approx(kin, rel=1e-9)


@pytest.mark.parametrize("l_z", [1, 2])
def test_closed_form_kinetic_with_angular_momentum(l_z):
    s, beta = 2.0, 1.5
    *_, kin = quad_oracle(s, beta, l_z=l_z, hbar=1.0, m=2.0)
    assert trial_moments(TrialState(s, beta, l_z), 0.0, 2.0, hbar=1.0).kinetic == pytest.approx(kin, rel=1e-9)


def test_reference_state_values():
    ms = trial_moments(TrialState(1.0, 1.0), 0.5, 1.0, hbar=1.0)
    assert (ms.r2, ms.inv_r2, ms.kinetic, ms.energy, ms.d) == pytest.approx((2.0, 1.0, 0.5, 0.0, 0.0))
    assert critical_coupling(ms) == pytest.approx(0.5)


def test_trial_radial_normalized():
    ts = TrialState(1.7, 2.3)
    val, _ = integrate.quad(lambda r: trial_radial(ts, r) ** 2 * r, 0, np.inf, epsrel=1e-12)
    assert val == pytest.approx(1.0, rel=1e-10)
    assert trial_radial(ts, 0.0) == 0.0


@pytest.mark.parametrize("gamma, fate", [(0.4, Escapes), (0.5, QuasiStationary), (0.6, FallsAt)])
def test_fate_changes_at_critical_coupling(gamma, fate):
    ms = trial_moments(TrialState(1.0, 1.0), gamma, 1.0, hbar=1.0)
    curve = curve_from_state(MomentState(ms.r2, ms.d, ms.energy, 1.0))
    assert isinstance(classify_fate(curve), fate)


def test_min_critical_coupling_li7():
    m = builtin_particle("Li7").mass
    expected = CODATA2018.hbar ** 2 / (8 * m)
    assert min_critical_coupling(m) == pytest.approx(expected, rel=1e-14)
    assert min_critical_coupling(m) == pytest.approx(1.196e-43, rel=5e-3)


def test_quasi_stationary_exponent_zeroes_energy():
    gamma, m = 1.5, 1.0
    s0 = quasi_stationary_exponent(gamma, m, hbar=1.0)
    assert s0 == pytest.approx(3.0)
    assert trial_moments(TrialState(s0, 1.0), gamma, m, hbar=1.0).energy == pytest.approx(0.0, abs=1e-14)
    # the smaller exponent 2 m gamma / 3 hbar^2 leaves <H> = -2 beta gamma / 3s
    s_alt = s0 / 3
    e_alt = trial_moments(TrialState(s_alt, 1.0), gamma, m, hbar=1.0).energy
    assert e_alt == pytest.approx(-2 * gamma / (3 * s_alt))


def test_unphysical_warning():
    assert UNPHYSICAL_WARNING in trial_moments(TrialState(0.3, 1.0), 0.1, 1.0).warnings
    assert trial_moments(TrialState(0.5, 1.0), 0.1, 1.0).warnings == ()


@pytest.mark.parametrize("kw", [dict(s=0.0, beta=1.0), dict(s=1.0, beta=-1.0),
                                dict(s=1.0, beta=1.0, l_z=0.5)])
def test_trial_state_validation(kw):
    with pytest.raises(ValidationError):
        TrialState(**kw)


# -- properties -------------------------------------------------------------------

s_vals = st.floats(0.5, 20)
beta_vals = st.floats(1e-3, 1e3)


@given(s_vals, beta_vals, st.floats(0.01, 100), st.integers(0, 4))
def test_critical_coupling_identities(s, beta, m, l_z):
    ms = trial_moments(TrialState(s, beta, l_z), 0.0, m, hbar=1.0)
    gc = critical_coupling(ms)
    assert gc == pytest.approx((s + l_z ** 2) / (2 * m), rel=1e-12)
    assert ms.at_coupling(gc).energy == pytest.approx(0.0, abs=1e-12 * ms.kinetic)
    if l_z == 0:
        assert gc == pytest.approx(s / (2 * m), rel=1e-12)
        assert gc >= min_critical_coupling(m, hbar=1.0) * (1 - 1e-12)


@given(s_vals, beta_vals, beta_vals)
def test_critical_coupling_independent_of_beta(s, b1, b2):
    g1 = critical_coupling(trial_moments(TrialState(s, b1), 0.0, 1.0, hbar=1.0))
    g2 = critical_coupling(trial_moments(TrialState(s, b2), 0.0, 1.0, hbar=1.0))
    assert g1 == pytest.approx(g2, rel=1e-12)


@given(st.floats(0.5, 10), st.floats(0.01, 5), beta_vals)
def test_critical_coupling_increases_with_s(s, ds, beta):
    g = lambda x: critical_coupling(trial_moments(TrialState(x, beta), 0.0, 1.0, hbar=1.0))
    assert g(s + ds) > g(s)


@given(s_vals, beta_vals, st.floats(0, 10))
def test_energy_linear_in_gamma(s, beta, gamma):
    ms = trial_moments(TrialState(s, beta), gamma, 1.0, hbar=1.0)
    assert ms.energy == pytest.approx(ms.kinetic - gamma * ms.inv_r2, rel=1e-12, abs=1e-12)


# -- sampled profiles ---------------------------------------------------------------

@pytest.mark.parametrize("s", [0.5, 0.7, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("beta", [0.1, 1.0, 10.0])
def test_quadrature_matches_closed_form(s, beta):
    ts = TrialState(s, beta)
    ms_q = quadrature_moments(sample_trial_profile(ts), 0.5, 1.0, hbar=1.0)
    ms = trial_moments(ts, 0.5, 1.0, hbar=1.0)
    for name in ("r2", "inv_r2", "kinetic"):
        assert getattr(ms_q, name) == pytest.approx(getattr(ms, name), rel=1e-9)
    assert ms_q.energy == pytest.approx(ms.energy, abs=1e-9 * ms.kinetic)
    assert ms_q.d == 0.0


def test_quadrature_chirped_profile_gives_expected_d():
    # R exp(i kappa r^2 / 2) has <rp + pr> = 2 hbar kappa <r^2>
    ts, kappa = TrialState(2.0, 1.0), 0.3
    prof = sample_trial_profile(ts)
    chirped = RadialProfile(prof.r, prof.R * np.exp(0.5j * kappa * prof.r ** 2))
    ms = quadrature_moments(chirped, 0.0, 1.0, hbar=1.0)
    assert ms.d == pytest.approx(2 * kappa * 3.0, rel=1e-9)
    # chirp adds hbar^2 kappa^2 <r^2> / 2m to the kinetic energy
    assert ms.kinetic == pytest.approx(0.5 + 0.5 * kappa ** 2 * 3.0, rel=1e-9)


def test_quadrature_rejects_nonvanishing_origin():
    r = 12.0 / 4096 * np.arange(1, 4097)
    prof = RadialProfile(r, math.sqrt(2) * np.exp(-r * r / 2))
    with pytest.raises(SingularIntegralError):
        quadrature_moments(prof, 0.1, 1.0, hbar=1.0)


def test_quadrature_requires_normalization():
    prof = sample_trial_profile(TrialState(1.0, 1.0))
    bad = RadialProfile(prof.r, 1.01 * prof.R)
    with pytest.raises(ValidationError):
        quadrature_moments(bad, 0.1, 1.0)
    assert quadrature_moments(bad.normalized(), 0.1, 1.0, hbar=1.0).r2 == pytest.approx(2.0, rel=1e-9)


def test_quadrature_rejects_truncated_tail():
    prof = sample_trial_profile(TrialState(1.0, 1.0), r_max=3.0)
    with pytest.raises(ValidationError):
        quadrature_moments(prof.normalized(), 0.1, 1.0)


@pytest.mark.parametrize("r, R", [
    (np.arange(1, 10) * 0.1, np.ones(9)),
    (np.array([0.1, 0.2, 0.4] + [0.5 + 0.1 * i for i in range(20)]), np.ones(23)),
    (np.arange(0, 20) * 0.1, np.ones(20)),
])
def test_profile_grid_validation(r, R):
    with pytest.raises(ValidationError):
        RadialProfile(r, R)


def test_load_profile_roundtrip(tmp_path):
    ts = TrialState(1.0, 1.0)
    prof = sample_trial_profile(ts)
    f = tmp_path / "psi.txt"
    np.savetxt(f, np.column_stack([prof.r, 3.0 * prof.R]), header="r R", comments="")
    loaded = load_profile(f)
    assert loaded.norm_factor == pytest.approx(1 / 3, rel=1e-9)
    ms = quadrature_moments(loaded, 0.5, 1.0, hbar=1.0)
    assert ms.r2 == pytest.approx(2.0, rel=1e-9)


def test_load_profile_complex(tmp_path):
    prof = sample_trial_profile(TrialState(2.0, 1.0))
    chirp = prof.R * np.exp(0.05j * prof.r ** 2)
    f = tmp_path / "psi.txt"
    np.savetxt(f, np.column_stack([prof.r, chirp.real, chirp.imag]), header="r re im", comments="")
    assert np.iscomplexobj(load_profile(f).R)


def test_load_profile_column_check(tmp_path):
    f = tmp_path / "psi.txt"
    np.savetxt(f, np.ones((20, 4)), header="a b c d", comments="")
    with pytest.raises(ValidationError):
        load_profile(f)
