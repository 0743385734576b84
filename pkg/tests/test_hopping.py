import numpy as np
import pytest

from fluxmol import excep
from fluxmol import hopping
from fluxmol.datatypes import HoppingParams


def _exact_symmetric_levels(p):
    e, big, small = p.epsilon, p.delta_nn, p.delta_nnn
    root = np.sqrt((e - 0.5 * small) ** 2 + 4.0 * big ** 2)
    return -0.5 * small - root, -0.5 * small + root


def test_hamiltonian_structure():
    p = HoppingParams(1.0, 0.1, 0.02)
    h = hopping.hopping_hamiltonian(p).toarray()
    np.testing.assert_array_equal(h, h.T)
    np.testing.assert_array_equal(np.diag(h), [1.0, 1.0, -1.0, -1.0])
    assert h[0, 1] == -0.02
    assert h[0, 2] == h[1, 3] == -0.1
    assert h[2, 3] == 0.0
    with pytest.raises(excep.InvalidParameterException):
        hopping.hopping_hamiltonian((1.0, 0.1, 0.02))


def test_exact_levels_closed_form():
    p = HoppingParams(1.0, 0.1, 0.02)
    energies = hopping.exact_levels(p).eigenvalues
    low, high = _exact_symmetric_levels(p)
    np.testing.assert_allclose(energies, sorted([low, -1.0, high, 1.02]), atol = 1e-12)


def test_perturbative_levels_close_to_exact():
    p = HoppingParams(1.0, 0.05, 0.01)
    levels = hopping.perturbative_levels(p)
    assert [lv.name for lv in levels] == ["theta+", "theta-", "phi-", "phi+"]
    exact = hopping.exact_levels(p)
    np.testing.assert_allclose(sorted(lv.energy for lv in levels), exact.eigenvalues, atol = 1e-4)
    # ground state is the symmetric theta combination
    overlap = abs(np.dot(levels[0].normalized(), exact.vector(0)))
    assert overlap == pytest.approx(1.0, abs = 1e-3)


def test_perturbative_error_is_third_order():
    errors = []
    for s in (0.02, 0.01, 0.005):
        p = HoppingParams(1.0, s, 0.5 * s)
        pert = sorted(lv.energy for lv in hopping.perturbative_levels(p))
        exact = hopping.exact_levels(p).eigenvalues
        errors.append(np.max(np.abs(np.array(pert) - exact)))
    for coarse, fine in zip(errors[:-1], errors[1:]):
        assert 7.0 < coarse / fine < 9.0
    assert errors[0] < 0.02 ** 3


def test_normalized_vector_sign():
    level = hopping.HoppingLevel("x", 0.0, (0.0, -3.0, 4.0, 0.0))
    np.testing.assert_allclose(level.normalized(), [0.0, -0.6, 0.8, 0.0])
    flipped = hopping.HoppingLevel("x", 0.0, (0.0, 3.0, -4.0, 0.0))
    np.testing.assert_allclose(flipped.normalized(), [0.0, -0.6, 0.8, 0.0])


@pytest.mark.parametrize("small, expected", [(0.02, True), (0.005, False)])
def test_classify_regime_agrees_with_exact_order(small, expected):
    p = HoppingParams(1.0, 0.1, small)
    result = hopping.classify_regime(p)
    assert result["boundary"] == pytest.approx(0.01)
    assert result["theta_plus_lowest_excited"] is expected
    _, phi_plus = _exact_symmetric_levels(p)
    assert (phi_plus < 1.0 + small) is expected


def test_regime_warning():
    with pytest.warns(excep.RegimeWarning):
        hopping.perturbative_levels(HoppingParams(1.0, 0.8, 0.1))
    with pytest.warns(excep.RegimeWarning):
        hopping.classify_regime(HoppingParams(1.0, 0.1, 0.0))


def test_fit_recovers_parameters():
    truth = HoppingParams(1.0, 0.1, 0.02)
    energies = hopping.exact_levels(truth).eigenvalues + 3.0
    fitted, offset, rms = hopping.fit_hopping_params(energies[::-1])
    assert fitted.epsilon == pytest.approx(1.0, abs = 1e-6)
    assert fitted.delta_nn == pytest.approx(0.1, abs = 1e-6)
    assert fitted.delta_nnn == pytest.approx(0.02, abs = 1e-6)
    assert offset == pytest.approx(3.0, abs = 1e-6)
    assert rms < 1e-9


def test_fit_needs_four_energies():
    with pytest.raises(excep.InvalidParameterException):
        hopping.fit_hopping_params([0.0, 1.0, 2.0])
