import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capbounds.channels import (
    AdditiveNoise,
    Amplifier,
    AmplitudeDamping,
    B1Form,
    Dephasing,
    Depolarizing,
    Erasure,
    GaussianChannelSpec,
    Identity,
    Pauli,
    PureLoss,
    QLimAmplifier,
    ThermalLoss,
    apply,
    channel_checks,
    quasi_choi,
    to_spec,
    transmission_and_noise,
)
from capbounds.errors import InvalidArgument
from capbounds.symplectic import Z2, make_thermal, make_tmsv, ppt_min_symplectic_eigenvalue


def test_thermal_loss_spec():
    spec = to_spec(ThermalLoss(0.5, 0.0))
    np.testing.assert_allclose(spec.T, np.eye(2) / math.sqrt(2))
    np.testing.assert_allclose(spec.N, 0.25 * np.eye(2))


def test_additive_zero_is_identity():
    spec = to_spec(AdditiveNoise(0.0))
    np.testing.assert_array_equal(spec.T, np.eye(2))
    np.testing.assert_array_equal(spec.N, np.zeros((2, 2)))


def test_b1_noise():
    np.testing.assert_array_equal(to_spec(B1Form()).N, np.diag([0.0, 1.0]))


def test_apply_on_second_mode_of_tmsv():
    out = apply(to_spec(ThermalLoss(0.5, 0.0)), make_tmsv(2.0), mode=1)
    V = out.cov
    np.testing.assert_allclose(V[:2, :2], 2.0 * np.eye(2))
    np.testing.assert_allclose(V[2:, 2:], 1.25 * np.eye(2))
    np.testing.assert_allclose(V[:2, 2:], math.sqrt(0.5) * math.sqrt(3.75) * Z2)


def test_quasi_choi_identity_is_tmsv():
    np.testing.assert_allclose(quasi_choi(Identity(), 3.0).cov, make_tmsv(3.0).cov)


def test_additive_noise_composes():
    s = make_thermal(0.3)
    twice = apply(to_spec(AdditiveNoise(0.2)), apply(to_spec(AdditiveNoise(0.2)), s))
    once = apply(to_spec(AdditiveNoise(0.4)), s)
    np.testing.assert_allclose(twice.cov, once.cov)


def test_apply_mode_range():
    with pytest.raises(InvalidArgument):
        apply(to_spec(Identity()), make_thermal(1.0), mode=1)


def test_displacement_transported():
    spec = GaussianChannelSpec(0.5 * np.eye(2), 0.5 * np.eye(2), d=[1.0, 2.0])
    out = apply(spec, make_thermal(0.0).displaced([2.0, 0.0]))
    np.testing.assert_allclose(out.mean, [2.0, 2.0])


@pytest.mark.parametrize(
    "form",
    [PureLoss(0.3), ThermalLoss(0.7, 2.0), Amplifier(2.5, 0.4), QLimAmplifier(1.5), AdditiveNoise(0.1), B1Form(), Identity()],
)
def test_canonical_forms_are_bona_fide(form):
    assert channel_checks(form).bona_fide


def test_unphysical_spec_not_bona_fide():
    assert not GaussianChannelSpec(0.5 * np.eye(2), 0.1 * np.eye(2)).bona_fide


@pytest.mark.parametrize(
    "bad",
    [lambda: ThermalLoss(1.2, 0.0), lambda: ThermalLoss(0.5, -1.0), lambda: Amplifier(1.0, 0.0),
     lambda: AdditiveNoise(-0.1), lambda: QLimAmplifier(0.5)],
)
def test_out_of_range_forms(bad):
    with pytest.raises(InvalidArgument):
        bad()


def test_channel_checks_flags():
    assert channel_checks(PureLoss(0.5)).uniform_convergence
    assert not channel_checks(Identity()).uniform_convergence
    assert not channel_checks(B1Form()).uniform_convergence
    assert channel_checks(ThermalLoss(0.5, 1.0)).entanglement_breaking
    assert channel_checks(ThermalLoss(0.5, 0.9)).entanglement_breaking is False
    assert channel_checks(Amplifier(2.0, 1.0)).zero_bound_region
    assert channel_checks(AdditiveNoise(0.3)).entanglement_breaking is None


def test_entanglement_breaking_boundary_via_ppt():
    eta = 0.4
    n0 = eta / (1 - eta)
    inside = ppt_min_symplectic_eigenvalue(quasi_choi(ThermalLoss(eta, 0.9 * n0), 200.0))
    at = ppt_min_symplectic_eigenvalue(quasi_choi(ThermalLoss(eta, n0), 200.0))
    assert inside < 0.5
    assert at == pytest.approx(0.5, abs=2e-3)
    assert at >= 0.5 - 1e-12


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.0, 10.0), st.floats(0.5, 20.0))
def test_quasi_choi_physical(eta, nbar, mu):
    cov = quasi_choi(ThermalLoss(eta, nbar), mu).cov
    assert np.allclose(cov, cov.T)


def test_transmission_and_noise_rejects_b1():
    with pytest.raises(InvalidArgument):
        transmission_and_noise(B1Form())


def test_dv_channels():
    assert Depolarizing(0.4).to_pauli().probs == pytest.approx((0.7, 0.1, 0.1, 0.1))
    assert Dephasing(0.2).to_pauli().probs == (0.8, 0.0, 0.0, 0.2)
    with pytest.raises(InvalidArgument):
        Pauli(0.5, 0.5, 0.1, 0.0)
    with pytest.raises(InvalidArgument):
        Erasure(1.5)
    a0, a1 = AmplitudeDamping(0.3).kraus()
    np.testing.assert_allclose(a0.T @ a0 + a1.T @ a1, np.eye(2))
