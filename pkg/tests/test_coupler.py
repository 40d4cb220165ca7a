import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import OMEGA, random_params
from pdcoupler import (
    CouplerParams,
    InvalidInputError,
    Regime,
    build_drift,
    classify_regime,
    classify_regime_spectral,
    effective_phase,
)
from pdcoupler.coupler import canonical_phase, effective_gain

mags = st.floats(0, 3)
phases = st.floats(-20, 20)


def test_drift_matrix_zero_phases():
    m = build_drift(CouplerParams(1.0, 0.5, 0.25)).matrix
    expected = np.array([
        [0.0, 1.0, 0.0, -2.0],
        [1.0, 0.0, 2.0, 0.0],
        [0.0, -2.0, 0.0, 0.5],
        [2.0, 0.0, 0.5, 0.0],
    ])
    np.testing.assert_allclose(m, expected, atol=1e-15)


def test_drift_matrix_quarter_phase_squeezer():
    m = build_drift(CouplerParams(0.0, 0.2, 0.0, phi_a=math.pi / 2)).matrix
    np.testing.assert_allclose(m[:2, :2], np.diag([-0.4, 0.4]), atol=1e-15)
    assert np.abs(m[2:, :]).max() == 0.0


@settings(max_examples=200, deadline=None)
@given(mags, mags, mags, phases, phases, phases)
def test_drift_is_hamiltonian(gl, ga, gb, pl, pa, pb):
    m = build_drift(CouplerParams(gl, ga, gb, pl, pa, pb)).matrix
    assert np.abs(m.T @ OMEGA + OMEGA @ m).max() < 1e-14
    assert abs(np.trace(m)) < 1e-14


def test_params_validation():
    with pytest.raises(InvalidInputError):
        CouplerParams(-1.0, 0.2, 0.2)
    with pytest.raises(InvalidInputError):
        CouplerParams(1.0, math.inf, 0.2)
    with pytest.raises(InvalidInputError):
        CouplerParams(1.0, 0.2, 0.2, phi_a=math.nan)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e3, 1e3))
def test_canonical_phase_range_and_idempotence(phi):
    r = canonical_phase(phi)
    assert 0.0 <= r < 2 * math.pi
    assert canonical_phase(r) == r
    assert abs(math.sin(r) - math.sin(phi)) < 1e-9 and abs(math.cos(r) - math.cos(phi)) < 1e-9


def test_canonical_phase_tiny_negative():
    assert canonical_phase(-1e-20) == 0.0


def test_params_store_canonical_phases():
    p = CouplerParams(1.0, 1.0, 1.0, phi_l=-math.pi / 2, phi_a=5 * math.pi, phi_b=2 * math.pi)
    assert p.phi_l == pytest.approx(1.5 * math.pi)
    assert p.phi_a == pytest.approx(math.pi)
    assert p.phi_b == 0.0


def test_effective_phase_examples():
    assert effective_phase(CouplerParams(1, 1, 1)) == 0.0
    assert effective_phase(CouplerParams.from_dphi(1, 1, 1, math.pi)) == pytest.approx(math.pi)
    p = CouplerParams(1, 1, 1, phi_l=0.5, phi_a=0.3, phi_b=1.0)
    assert effective_phase(p) == pytest.approx(0.3 - 1.0 + 1.0)


@settings(max_examples=100, deadline=None)
@given(phases, phases, phases, phases)
def test_effective_phase_gauge_shift(pl, pa, pb, theta):
    # shifting mode B by theta moves phi_B by 2 theta and phi_L by theta
    p = CouplerParams(1, 1, 1, pl, pa, pb)
    q = CouplerParams(1, 1, 1, pl + theta, pa, pb + 2 * theta)
    d = abs(effective_phase(p) - effective_phase(q))
    assert min(d, 2 * math.pi - d) < 1e-9


def test_classify_examples():
    below = classify_regime(CouplerParams(2.0, 0.2, 0.2))
    assert below.regime is Regime.BELOW
    assert below.margin == pytest.approx(3.6)

    above = classify_regime(CouplerParams(0.15, 0.2, 0.2))
    assert above.regime is Regime.ABOVE
    assert above.margin == pytest.approx(-0.1)

    at = classify_regime(CouplerParams(0.2, 0.2, 0.2))
    assert at.regime is Regime.AT
    assert abs(at.margin) < 1e-15


def test_regime_string_labels():
    assert str(Regime.BELOW) == "below-threshold"
    assert str(Regime.ABOVE) == "above-threshold"
    assert str(Regime.AT) == "at-threshold"


def test_effective_gain_matched_phases_is_sum():
    assert effective_gain(CouplerParams(1.0, 0.3, 0.2)) == pytest.approx(0.5)
    assert effective_gain(CouplerParams(1.0, 0.2, 0.2)) == pytest.approx(0.4)


def test_effective_gain_equal_strengths_mismatched_phase_vanishes():
    # any linear coupling then keeps the dynamics oscillatory
    assert effective_gain(CouplerParams.from_dphi(1.0, 0.2, 0.2, math.pi)) == 0.0
    assert classify_regime(CouplerParams.from_dphi(1e-3, 0.2, 0.2, math.pi)).regime is Regime.BELOW


def test_spectral_examples():
    regime, ev = classify_regime_spectral(CouplerParams(2.0, 0.2, 0.2))
    assert regime is Regime.BELOW and len(ev) == 4
    assert classify_regime_spectral(CouplerParams(0.15, 0.2, 0.2))[0] is Regime.ABOVE
    assert classify_regime_spectral(CouplerParams(0.0, 0.0, 0.0))[0] is Regime.AT


def test_spectral_defective_threshold_point():
    # 2|g_L| = |g_A| + |g_B| with unequal strengths: repeated real eigenvalues, one eigenvector each
    p = CouplerParams(0.25, 0.3, 0.2)
    assert classify_regime(p).regime is Regime.AT
    assert classify_regime_spectral(p)[0] is Regime.AT


def test_spectral_accepts_precomputed_eigenvalues():
    p = CouplerParams(2.0, 0.2, 0.2)
    _, ev = classify_regime_spectral(p)
    regime, same = classify_regime_spectral(p, ev)
    assert regime is Regime.BELOW and same is ev


def test_closed_form_agrees_with_spectrum(rng):
    checked = 0
    for _ in range(300):
        p = random_params(rng, 1.0)
        result = classify_regime(p)
        if abs(result.margin) < 1e-3:
            continue
        assert classify_regime_spectral(p)[0] is result.regime, p
        checked += 1
    assert checked > 250


def test_regime_is_gauge_invariant(rng):
    for _ in range(50):
        p = random_params(rng, 1.0)
        theta = rng.uniform(0, 2 * np.pi)
        q = CouplerParams(p.gl_mag, p.ga_mag, p.gb_mag, p.phi_l + theta, p.phi_a, p.phi_b + 2 * theta)
        assert classify_regime(q).margin == pytest.approx(classify_regime(p).margin, abs=1e-9)
