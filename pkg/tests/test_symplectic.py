import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capbounds.errors import DomainError, InvalidArgument
from capbounds.symplectic import (
    GaussianState,
    binary_entropy,
    entropic_functions,
    h_entropy,
    is_physical,
    make_thermal,
    make_tmsv,
    make_vacuum,
    mean_photon_number,
    omega,
    ppt_min_symplectic_eigenvalue,
    random_covariance,
    random_symplectic,
    s_entropy,
    symplectic_eigenvalues,
    two_mode_cov,
    uncertainty_min_eigenvalue,
    xxpp_permutation,
)


def test_omega_shape_and_square():
    W = omega(3)
    assert W.shape == (6, 6)
    np.testing.assert_array_equal(W @ W, -np.eye(6))


def test_xxpp_permutation_blocks_omega():
    n = 3
    P = xxpp_permutation(n)
    blocked = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    np.testing.assert_array_equal(P @ omega(n) @ P.T, blocked)


def test_vacuum_is_pure():
    nu = symplectic_eigenvalues(make_vacuum(2))
    np.testing.assert_allclose(nu, [0.5, 0.5], atol=1e-14)


def test_thermal_spectrum():
    assert symplectic_eigenvalues(make_thermal(2.0))[0] == pytest.approx(2.5, abs=1e-13)


def test_tmsv_is_pure_and_entangled():
    s = make_tmsv(3.0)
    np.testing.assert_allclose(symplectic_eigenvalues(s), [0.5, 0.5], atol=1e-12)
    assert ppt_min_symplectic_eigenvalue(s) < 0.5


def test_squeezed_below_vacuum_is_unphysical():
    V = np.diag([0.1, 0.1])
    assert not is_physical(V)
    with pytest.raises(DomainError):
        symplectic_eigenvalues(V)


def test_asymmetric_rejected():
    with pytest.raises(InvalidArgument):
        symplectic_eigenvalues(np.array([[1.0, 0.2], [0.0, 1.0]]))


def test_bad_shapes_rejected():
    with pytest.raises(InvalidArgument):
        GaussianState(np.eye(3))
    with pytest.raises(InvalidArgument):
        GaussianState(np.eye(2), mean=[0.0])


def test_mean_photon_number_counts_displacement():
    s = make_thermal(1.5).displaced([2.0, 0.0])
    assert mean_photon_number(s) == pytest.approx(1.5 + 2.0)


def test_entropy_values():
    assert h_entropy(0) == 0
    assert h_entropy(1) == pytest.approx(2.0)
    assert s_entropy(1.5) == pytest.approx(2.0)
    assert binary_entropy(0.5) == pytest.approx(1.0)


def test_entropic_functions_domains():
    out = entropic_functions(0.3)
    assert out["s"] is None and out["H2"] is not None
    out = entropic_functions(2.0)
    assert out["H2"] is None and out["s"] == pytest.approx(h_entropy(1.5))
    with pytest.raises(InvalidArgument):
        entropic_functions(-0.1)


def test_separable_standard_form():
    assert ppt_min_symplectic_eigenvalue(two_mode_cov(1.0, 1.0, 0.0)) >= 0.5


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_random_symplectic_preserves_form(n, seed):
    S = random_symplectic(n, np.random.default_rng(seed))
    np.testing.assert_allclose(S @ omega(n) @ S.T, omega(n), atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_spectrum_is_symplectic_invariant(n, seed):
    rng = np.random.default_rng(seed)
    V = random_covariance(n, rng)
    S = random_symplectic(n, rng, scale=0.3)
    np.testing.assert_allclose(symplectic_eigenvalues(S @ V @ S.T), symplectic_eigenvalues(V), rtol=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_physical_iff_spectrum_above_half(n, seed):
    V = random_covariance(n, np.random.default_rng(seed))
    assert is_physical(V)
    assert symplectic_eigenvalues(V).min() >= 0.5 - 1e-10
    assert uncertainty_min_eigenvalue(V) >= -1e-10


@given(st.floats(0.0, 50.0))
def test_h_matches_s_shift(n):
    assert s_entropy(n + 0.5) == pytest.approx(h_entropy(n), rel=1e-12, abs=1e-12)


@given(st.floats(0.0, 100.0), st.floats(1e-3, 10.0))
def test_h_increasing(x, dx):
    assert h_entropy(x + dx) > h_entropy(x)
