import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capbounds.errors import InvalidArgument, SingularStateError
from capbounds.fock_oracle import diag_relative_entropy, pure_state_fidelity, thermal_pmf
from capbounds.gaussian_entropy import (
    bk_fidelity_radicand,
    bk_tmsv_fidelity,
    bk_tmsv_infidelity,
    gibbs_matrix,
    relative_entropy,
    sigma_term,
    von_neumann_entropy,
)
from capbounds.symplectic import (
    GaussianState,
    make_thermal,
    make_tmsv,
    make_vacuum,
    omega,
    random_covariance,
    s_entropy,
    symplectic_eigenvalues,
)


def _fock_relent(n1, n2):
    p, q = thermal_pmf(n1), thermal_pmf(n2)
    c = max(p.cutoff, q.cutoff)
    return diag_relative_entropy(thermal_pmf(n1, c), thermal_pmf(n2, c))


def test_gibbs_matrix_of_thermal_state():
    # rho ~ exp(-beta n) with beta = ln((n+1)/n); G = beta I in these units
    n = 1.3
    G = gibbs_matrix(make_thermal(n).cov)
    np.testing.assert_allclose(G, math.log((n + 1) / n) * np.eye(2), atol=1e-12)


def test_gibbs_matrix_singular_on_pure_mode():
    with pytest.raises(SingularStateError):
        gibbs_matrix(make_vacuum().cov)


def test_relative_entropy_thermal_pair():
    assert relative_entropy(make_thermal(1.0), make_thermal(2.0)) == pytest.approx(_fock_relent(1.0, 2.0), abs=1e-10)


def test_relative_entropy_self_is_zero():
    s = GaussianState(random_covariance(2, np.random.default_rng(3)))
    assert relative_entropy(s, s) == pytest.approx(0.0, abs=1e-9)


def test_relative_entropy_from_pure_state():
    # S(|0><0| || thermal n) = -log2 p_0 = log2(n + 1)
    assert relative_entropy(make_vacuum(), make_thermal(3.0)) == pytest.approx(2.0, abs=1e-12)


def test_displacement_adds_quadratic_term():
    n2 = 1.0
    beta = math.log((n2 + 1) / n2)
    d = np.array([0.7, -0.2])
    base = relative_entropy(make_thermal(0.5), make_thermal(n2))
    shifted = relative_entropy(make_thermal(0.5).displaced(d), make_thermal(n2))
    assert shifted - base == pytest.approx(beta * d @ d / (2 * math.log(2)), rel=1e-10)


def test_mode_mismatch_rejected():
    with pytest.raises(InvalidArgument):
        sigma_term(make_thermal(1.0), make_tmsv(2.0))


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 5.0), st.floats(0.1, 5.0))
def test_relative_entropy_matches_fock_sum(n1, n2):
    assert relative_entropy(make_thermal(n1), make_thermal(n2)) == pytest.approx(_fock_relent(n1, n2), abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_sigma_self_term_is_entropy(n, seed):
    V = random_covariance(n, np.random.default_rng(seed))
    expected = sum(s_entropy(x) for x in symplectic_eigenvalues(V))
    assert sigma_term(V, V) == pytest.approx(expected, abs=1e-8)
    assert von_neumann_entropy(V) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2), st.integers(0, 2**32 - 1))
def test_relative_entropy_nonnegative(n, seed):
    rng = np.random.default_rng(seed)
    assert relative_entropy(random_covariance(n, rng), random_covariance(n, rng)) >= 0.0


# -- fidelity ---------------------------------------------------------------


def _bk_output_of_tmsv(mu_res, mu_in):
    # teleport the second mode of TMSV(mu_in) through BK with resource energy mu_res
    xi = 2 * mu_res - math.sqrt(4 * mu_res**2 - 1)
    V = make_tmsv(mu_in).cov.copy()
    V[2:, 2:] += xi * np.eye(2)
    return V


@pytest.mark.parametrize("mu_res,mu_in", [(1.0, 0.5), (1.0, 3.0), (10.0, 10.0), (50.0, 2.0)])
def test_fidelity_matches_pure_state_overlap(mu_res, mu_in):
    oracle = pure_state_fidelity(make_tmsv(mu_in).cov, _bk_output_of_tmsv(mu_res, mu_in))
    assert bk_tmsv_fidelity(mu_res, mu_in) == pytest.approx(oracle, rel=1e-10)


def test_fidelity_example_value():
    # at mu_in = 1/2 the fidelity is 1/sqrt(1 + xi)
    xi = 2 - math.sqrt(3)
    assert bk_tmsv_fidelity(1.0, 0.5) == pytest.approx(1 / math.sqrt(1 + xi), rel=1e-14)
    assert bk_tmsv_fidelity(1.0, 0.5) == pytest.approx(0.88807, abs=1e-5)


@given(st.floats(0.51, 100.0), st.floats(0.5, 100.0))
def test_radicand_forms_agree(mu_res, mu_in):
    factored = bk_tmsv_fidelity(mu_res, mu_in) ** -4
    assert bk_fidelity_radicand(mu_res, mu_in) == pytest.approx(factored, rel=1e-7)


@given(st.floats(0.51, 1e6), st.floats(0.5, 1e6))
def test_complement_consistent(mu_res, mu_in):
    F = bk_tmsv_fidelity(mu_res, mu_in)
    c1, c2 = bk_tmsv_infidelity(mu_res, mu_in)
    assert c1 == pytest.approx(1 - F, abs=1e-12)
    assert c2 == pytest.approx(1 - F * F, abs=1e-12)
    assert 0 <= c1 <= c2 <= 1


@given(st.floats(0.6, 1e4), st.floats(0.5, 1e4), st.floats(1.01, 10.0))
def test_fidelity_monotone(mu_res, mu_in, k):
    F = bk_tmsv_fidelity(mu_res, mu_in)
    assert bk_tmsv_fidelity(mu_res * k, mu_in) >= F
    assert bk_tmsv_fidelity(mu_res, mu_in * k) <= F


def test_fidelity_argument_checks():
    with pytest.raises(InvalidArgument):
        bk_tmsv_fidelity(0.5, 1.0)
    with pytest.raises(InvalidArgument):
        bk_tmsv_fidelity(1.0, 0.4)
