import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    local_symplectic,
    random_params,
    random_physical_covariance,
    single_mode_squeezer,
    tmsv_covariance,
)
from pdcoupler import (
    CouplerParams,
    NumericalFailure,
    block_decompose,
    covariance_at,
    log_negativity,
    pt_spectrum_oracle,
    pt_symplectic_spectrum,
    vacuum_covariance,
)
from pdcoupler.entanglement import neg_log_term, symplectic_spectrum

BELOW = (2.0, 0.2, 0.2)


def test_vacuum_is_separable():
    report = log_negativity(vacuum_covariance())
    assert report.c1 == 0.5 and report.c2 == 0.5
    assert report.log_neg == 0.0 and report.negativity == 0.0
    assert not report.entangled


def test_two_mode_squeezed_vacuum():
    r = 0.5
    v = tmsv_covariance(r)
    c1, c2 = pt_symplectic_spectrum(v)
    assert abs(c1 - 0.5 * math.exp(-2 * r)) < 1e-12
    assert abs(c2 - 0.5 * math.exp(2 * r)) < 1e-12
    report = log_negativity(v)
    assert abs(report.log_neg - 2 * r * math.log2(math.e)) < 1e-12
    assert report.entangled


def test_product_of_squeezed_states_is_separable():
    a = 0.5 * single_mode_squeezer(0.7) ** 2
    b = 0.5 * single_mode_squeezer(-0.3) ** 2
    v = np.block([[a, np.zeros((2, 2))], [np.zeros((2, 2)), b]])
    c1, c2 = pt_symplectic_spectrum(v)
    assert c1 == pytest.approx(0.5, abs=1e-15) and c2 == pytest.approx(0.5, abs=1e-15)
    assert log_negativity(v).log_neg == 0.0


def test_symplectic_spectrum_of_pure_state_is_vacuum(rng):
    for _ in range(50):
        v = covariance_at(random_params(rng, 1.0), rng.uniform(0, 1.5))
        nu = symplectic_spectrum(v)
        np.testing.assert_allclose(nu, [0.5, 0.5], atol=1e-8)


def test_closed_form_matches_oracle_on_evolved_states(rng):
    for _ in range(200):
        v = covariance_at(random_params(rng, 1.0), rng.uniform(0, 1.5))
        np.testing.assert_allclose(pt_symplectic_spectrum(v), pt_spectrum_oracle(v), rtol=0, atol=1e-9)


def test_closed_form_matches_oracle_on_mixed_states(rng):
    for _ in range(200):
        v = random_physical_covariance(rng)
        np.testing.assert_allclose(pt_symplectic_spectrum(v), pt_spectrum_oracle(v), rtol=0, atol=1e-9)


def test_pure_state_pt_eigenvalues_multiply_to_quarter(rng):
    # det of the transposed matrix equals det V = 1/16
    for _ in range(50):
        v = covariance_at(random_params(rng, 1.0), rng.uniform(0, 1.5))
        c1, c2 = pt_symplectic_spectrum(v)
        assert abs(c1 * c2 - 0.25) < 1e-10


def test_local_symplectic_invariance(rng):
    for _ in range(50):
        v = random_physical_covariance(rng)
        local = np.block([[local_symplectic(rng), np.zeros((2, 2))], [np.zeros((2, 2)), local_symplectic(rng)]])
        w = local @ v @ local.T
        np.testing.assert_allclose(pt_symplectic_spectrum(w), pt_symplectic_spectrum(v), atol=1e-9)


def test_mode_swap_invariance(rng):
    swap = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
    for _ in range(50):
        v = random_physical_covariance(rng)
        np.testing.assert_allclose(pt_symplectic_spectrum(swap @ v @ swap), pt_symplectic_spectrum(v), atol=1e-9)


def test_block_reassembly(rng):
    v = random_physical_covariance(rng)
    parts = block_decompose(v)
    assert np.array_equal(parts.assemble(), v)
    assert np.array_equal(parts.c, v[:2, 2:])


def test_report_invariants(rng):
    for _ in range(100):
        v = random_physical_covariance(rng) if rng.uniform() < 0.5 else covariance_at(random_params(rng, 1.0), 1.0)
        rep = log_negativity(v)
        assert 0 < rep.c1 <= rep.c2
        assert rep.log_neg >= 0.0
        assert rep.negativity == pytest.approx((2**rep.log_neg - 1) / 2)
        assert rep.entangled == (rep.c1 < 0.5)


def test_opposite_phase_states_are_not_entangled():
    p = CouplerParams.from_dphi(*BELOW, math.pi)
    for z in np.linspace(0, 2, 21):
        assert log_negativity(covariance_at(p, z)).log_neg < 1e-12


def test_matched_phase_states_become_entangled():
    p = CouplerParams.from_dphi(*BELOW, 0.0)
    assert log_negativity(covariance_at(p, 0.3)).log_neg > 0.01


def test_unphysical_covariance_is_reported():
    v = np.diag([0.1, 0.1, 0.5, 0.5])
    v[0, 2] = v[2, 0] = 0.4
    with pytest.raises(NumericalFailure):
        log_negativity(v)


@settings(max_examples=100)
@given(st.floats(1e-6, 10))
def test_neg_log_term(c):
    f = neg_log_term(c)
    if c >= 0.5:
        assert f == 0.0
    else:
        assert f == pytest.approx(-math.log2(2 * c))
