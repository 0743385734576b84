import math

import numpy as np
import pytest

from fluxmol import excep
from fluxmol import fluxcal
from fluxmol import spectrum
from fluxmol import utils
from fluxmol.datatypes import BasisTruncation, CircuitParams, FluxCalibration, FluxPoint, TwoToneDataset, TwoTonePeak
from fluxmol.fluxcal import CalibrationAnchor

TWO_PI = 2 * math.pi

FLUXES = [(0.3, 0.1), (0.8, 0.3), (1.4, -0.2), (1.9, -0.7), (2.5, 1.1), (2.9, -2.6)]


@pytest.fixture
def cal():
    return FluxCalibration(2.1, 0.3, -0.4, 1.7, 0.2, -0.1)


@pytest.fixture
def fit_trunc():
    return BasisTruncation(12, 12, 4)


def _anchors(cal, quanta):
    out = []
    for n_c, n_d in quanta:
        v_m, v_l = fluxcal.voltages_from_flux(cal, (TWO_PI * n_c, TWO_PI * n_d))
        out.append(CalibrationAnchor(v_m, v_l, n_c, n_d))
    return out


QUANTA = [(0, 0), (1, 0), (0, 1), (1, 1), (2, -1), (-1, 2)]


def test_identity_calibration():
    cal = FluxCalibration(1.0, 0.0, 0.0, 1.0)
    assert fluxcal.flux_from_voltages(cal, 0.3, 0.4) == FluxPoint(0.3, 0.4)
    assert fluxcal.voltages_from_flux(cal, (0.3, 0.4)) == pytest.approx((0.3, 0.4))


def test_voltage_round_trip(cal):
    for v in [(0.0, 0.0), (1.25, -0.5), (-3.0, 7.0)]:
        flux = fluxcal.flux_from_voltages(cal, *v)
        np.testing.assert_allclose(fluxcal.voltages_from_flux(cal, flux), v, atol = 1e-12)


def test_calibration_exact_recovery(cal):
    fitted = fluxcal.fit_calibration(_anchors(cal, QUANTA))
    np.testing.assert_allclose(fitted.matrix, cal.matrix, atol = 1e-10)
    np.testing.assert_allclose(fitted.offsets, cal.offsets, atol = 1e-10)


def test_calibration_accepts_dicts_and_tuples(cal):
    anchors = _anchors(cal, QUANTA)
    mixed = [a.to_dict() for a in anchors[:3]] + [(a.v_m, a.v_l, a.n_c, a.n_d) for a in anchors[3:]]
    assert "v_m_V" in mixed[0]
    fitted = fluxcal.fit_calibration(mixed)
    np.testing.assert_allclose(fitted.matrix, cal.matrix, atol = 1e-10)


def test_calibration_gauge_shift_keeps_matrix(cal):
    anchors = _anchors(cal, QUANTA)
    shifted = [CalibrationAnchor(a.v_m, a.v_l, a.n_c + 1, a.n_d - 2) for a in anchors]
    base = fluxcal.fit_calibration(anchors)
    moved = fluxcal.fit_calibration(shifted)
    np.testing.assert_allclose(moved.matrix, base.matrix, atol = 1e-10)
    np.testing.assert_allclose(moved.offsets - base.offsets, [TWO_PI, -2 * TWO_PI], atol = 1e-10)


def test_calibration_with_noisy_anchors(cal):
    rng = np.random.default_rng(3)
    quanta = [(c, d) for c in range(-2, 3) for d in range(-2, 3)]
    anchors = []
    for a in _anchors(cal, quanta):
        anchors.append(CalibrationAnchor(a.v_m * (1 + 0.01 * rng.standard_normal()),
                                         a.v_l * (1 + 0.01 * rng.standard_normal()), a.n_c, a.n_d))
    fitted = fluxcal.fit_calibration(anchors)
    np.testing.assert_allclose(fitted.matrix, cal.matrix, atol = 0.03 * np.abs(cal.matrix).max())


def test_calibration_rank_deficiency():
    anchors = [CalibrationAnchor(v, 0.0, n, 0) for n, v in enumerate([0.0, 1.0, 2.0, 3.0, 4.0])]
    with pytest.raises(excep.RankDeficiencyException):
        fluxcal.fit_calibration(anchors)
    with pytest.raises(excep.InvalidParameterException):
        fluxcal.fit_calibration(anchors[:3])
    with pytest.raises(excep.InvalidParameterException):
        CalibrationAnchor(float("nan"), 0.0, 0, 0)


def test_predict_transitions(fig2, fit_trunc):
    transitions = fluxcal.predict_transitions(fig2, (0.4, 0.2), k = 5, trunc = fit_trunc, model = "reduced")
    freqs = [t.frequency for t in transitions]
    assert freqs == sorted(freqs)
    assert len(transitions) == 4 + 3
    assert all(t.from_state in (0, 1) and t.to_state > t.from_state for t in transitions)
    assert fluxcal.predict_transitions(fig2, (0.4, 0.2), max_f = 1e-9, k = 5, trunc = fit_trunc, model = "reduced") == []
    with pytest.raises(excep.InvalidParameterException):
        fluxcal.predict_transitions(fig2, (0.4, 0.2), from_states = (5,), k = 5, trunc = fit_trunc)


def test_predicted_transitions_are_periodic(fig2, fit_trunc):
    a = fluxcal.predict_transitions(fig2, (0.4, 0.2), k = 5, trunc = fit_trunc, model = "reduced")
    b = fluxcal.predict_transitions(fig2, (0.4 + TWO_PI, 0.2 - TWO_PI), k = 5, trunc = fit_trunc, model = "reduced")
    np.testing.assert_allclose([t.frequency for t in a], [t.frequency for t in b], atol = 1e-8)


def test_predicted_transitions_flat_at_sweet_spot(fig2, fit_trunc):
    h = 1e-3
    def freqs(c):
        return np.array([t.frequency for t in fluxcal.predict_transitions(fig2, (c, 0.0), k = 4, trunc = fit_trunc, model = "reduced")])
    slope = (freqs(math.pi + h) - freqs(math.pi - h)) / (2 * h)
    assert np.max(np.abs(slope)) < 1e-6


def test_synthetic_dataset(fig2, fit_trunc):
    data = fluxcal.synthetic_dataset(fig2, FLUXES[:3], transitions = [(0, 1), (0, 2)], trunc = fit_trunc, model = "reduced")
    assert len(data) == 6
    assert data.is_labeled()
    spec = spectrum.solve_spectrum(fig2, FLUXES[1], 3, fit_trunc)
    assert data[2].f_transition == pytest.approx(spec.transition(1, 0))
    noisy = fluxcal.synthetic_dataset(fig2, FLUXES[:3], transitions = [(0, 1), (0, 2)], noise = 0.01, seed = 5,
                                      labeled = False, trunc = fit_trunc, model = "reduced")
    again = fluxcal.synthetic_dataset(fig2, FLUXES[:3], transitions = [(0, 1), (0, 2)], noise = 0.01, seed = 5,
                                      labeled = False, trunc = fit_trunc, model = "reduced", threads = 2)
    np.testing.assert_array_equal(noisy.frequencies(), again.frequencies())
    assert all(p.label is None for p in noisy)
    assert not np.allclose(noisy.frequencies(), data.frequencies(), rtol = 1e-6)


def test_dataset_csv_round_trip(tmp_path):
    data = TwoToneDataset([TwoTonePeak(0.1, 0.2, 3.5, 0.02, 0, 1), TwoTonePeak(0.3, 0.4, 5.25)])
    path = str(tmp_path / "peaks.csv")
    fluxcal.write_dataset_csv(path, data)
    back = fluxcal.read_dataset_csv(path)
    assert len(back) == 2
    assert back[0].label == (0, 1)
    assert back[0].sigma == pytest.approx(0.02)
    assert back[1].label is None
    assert back[1].f_transition == pytest.approx(5.25)


def test_dataset_csv_with_voltages(tmp_path, cal):
    path = str(tmp_path / "volts.csv")
    utils.write_csv(path, ["v_m_V", "v_l_V", "f_GHz"], [[0.5, -0.25, 4.0]])
    data = fluxcal.read_dataset_csv(path, calibration = cal)
    expected = fluxcal.flux_from_voltages(cal, 0.5, -0.25)
    assert data[0].phi_c == pytest.approx(expected.phi_c)
    assert data[0].phi_d == pytest.approx(expected.phi_d)
    with pytest.raises(excep.ConfigException) as info:
        fluxcal.read_dataset_csv(path)
    assert info.value.field == "%s:2" % path


def test_dataset_csv_bad_rows(tmp_path):
    path = str(tmp_path / "bad.csv")
    utils.write_csv(path, ["phi_c_rad", "phi_d_rad", "f_GHz"], [[0.0, 0.0, 4.0], [0.0, 0.0, "many"]])
    with pytest.raises(excep.ConfigException) as info:
        fluxcal.read_dataset_csv(path)
    assert info.value.field.endswith(":3")
    with pytest.raises(excep.ConfigException):
        fluxcal.read_dataset_csv(str(tmp_path / "missing.csv"))


def test_dataset_from_sweep_csv(fig2, fit_trunc, tmp_path):
    traj = spectrum.FluxTrajectory([(0.3, 0.1), (1.0, 0.5)], samples = 3)
    sweep = spectrum.sweep_trajectory(fig2, traj, 4, fit_trunc)
    path = str(tmp_path / "sweep.csv")
    spectrum.write_sweep_csv(path, sweep)
    data = fluxcal.dataset_from_sweep_csv(path)
    assert len(data) == 9
    assert data[0].label == (0, 1)
    assert data[0].f_transition == pytest.approx(sweep[0].transition(1, 0), rel = 1e-12)


def test_fit_rejects_bad_input(fig2):
    data = fluxcal.synthetic_dataset(fig2, FLUXES[:2], transitions = [(0, 1)], trunc = BasisTruncation(8, 8, 4), model = "reduced")
    with pytest.raises(excep.InvalidParameterException):
        fluxcal.fit_circuit_params(data, fig2, free = ("e_j",))
    with pytest.raises(excep.InvalidParameterException):
        fluxcal.fit_circuit_params(TwoToneDataset(), fig2)
    big = TwoToneDataset(list(data) * 3)
    with pytest.raises(excep.InvalidParameterException):
        fluxcal.fit_circuit_params(big, fig2, free = ("e_q",))
    with pytest.raises(excep.InvalidParameterException):
        fluxcal.fit_circuit_params(big, fig2, free = ("e_j",), bounds = {"e_j": (20.0, 30.0)})


def test_fit_from_exact_guess(fig2, fit_trunc):
    data = fluxcal.synthetic_dataset(fig2, FLUXES[:3], transitions = [(0, 1), (0, 2), (1, 2)], trunc = fit_trunc, model = "reduced")
    result = fluxcal.fit_circuit_params(data, fig2, free = ("e_j", "e_l"), restarts = 0, trunc = fit_trunc, model = "reduced")
    assert result.params.e_j == pytest.approx(fig2.e_j, rel = 1e-8)
    assert result.params.e_l == pytest.approx(fig2.e_l, rel = 1e-8)
    assert result.rms < 1e-6
    assert not result.misfit
    assert result.assigned == len(data)
    d = result.to_dict()
    assert d["EJ_GHz"] == pytest.approx(fig2.e_j, rel = 1e-8)
    assert set(d["half_widths_95"]) == set(["EJ_GHz", "EL_GHz"])
    assert d["diagnostics"]["starts"] == 1


def test_fit_holds_disorder_at_zero(fig2, fit_trunc):
    data = fluxcal.synthetic_dataset(fig2, FLUXES[:3], transitions = [(0, 1), (0, 2)], trunc = fit_trunc, model = "reduced")
    disordered = fig2.replace(d_cj = 0.05)
    result = fluxcal.fit_circuit_params(data, disordered, free = ("e_j",), restarts = 0, trunc = fit_trunc, model = "reduced")
    assert not result.params.has_disorder()


def test_fit_assigns_unlabeled_peaks(fig2, fit_trunc):
    data = fluxcal.synthetic_dataset(fig2, FLUXES[:4], transitions = [(0, 1), (0, 2)], labeled = False,
                                     trunc = fit_trunc, model = "reduced")
    start = fig2.replace(e_j = 1.02 * fig2.e_j)
    result = fluxcal.fit_circuit_params(data, start, free = ("e_j",), restarts = 0, trunc = fit_trunc, model = "reduced")
    assert result.params.e_j == pytest.approx(fig2.e_j, rel = 1e-5)
    assert 0 < result.assigned <= len(data)


def test_fit_flags_misfit(fig2, fit_trunc):
    data = fluxcal.synthetic_dataset(fig2, FLUXES[:3], transitions = [(0, 1), (0, 2)], trunc = fit_trunc, model = "reduced")
    shifted = TwoToneDataset([TwoTonePeak(p.phi_c, p.phi_d, p.f_transition * (1.1 if n % 2 else 0.9), p.sigma, *p.label)
                              for n, p in enumerate(data)])
    with pytest.warns(excep.FitWarning):
        result = fluxcal.fit_circuit_params(shifted, fig2, free = ("e_j",), restarts = 0, trunc = fit_trunc, model = "reduced")
    assert result.misfit


@pytest.mark.slow
@pytest.mark.parametrize("device", ["device1", "device3"])
def test_fit_recovers_device_parameters(device):
    truth = CircuitParams.from_preset(device)
    trunc = BasisTruncation(14, 14, 4)
    data = fluxcal.synthetic_dataset(truth, FLUXES, trunc = trunc, threads = 4)
    start = truth.replace(e_j = 1.2 * truth.e_j, e_l = 0.85 * truth.e_l, e_ls = 1.15 * truth.e_ls,
                          e_cj = 0.9 * truth.e_cj, e_c = 1.1 * truth.e_c)
    result = fluxcal.fit_circuit_params(data, start, restarts = 4, seed = 1, trunc = trunc, threads = 4)
    for name in fluxcal.FIT_FIELDS:
        assert getattr(result.params, name) == pytest.approx(getattr(truth, name), rel = 0.02), name


@pytest.mark.slow
def test_fit_with_frequency_noise():
    truth = CircuitParams.from_preset("device1")
    trunc = BasisTruncation(14, 14, 4)
    data = fluxcal.synthetic_dataset(truth, FLUXES, noise = 0.005, sigma = 0.02, seed = 2, trunc = trunc, threads = 4)
    start = truth.replace(e_j = 1.1 * truth.e_j, e_l = 0.9 * truth.e_l, e_cj = 1.1 * truth.e_cj)
    result = fluxcal.fit_circuit_params(data, start, free = ("e_j", "e_l", "e_cj"), restarts = 0, trunc = trunc, threads = 4)
    for name in ("e_j", "e_l", "e_cj"):
        assert getattr(result.params, name) == pytest.approx(getattr(truth, name), rel = 0.02), name
    assert result.rms < 0.1
