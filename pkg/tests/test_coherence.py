import math

import numpy as np
import pytest
from scipy import linalg

from fluxmol import coherence
from fluxmol import consts
from fluxmol import excep
from fluxmol import spectrum
from fluxmol.coherence import RateTable, SubspaceSpec
from fluxmol.datatypes import NoiseParams

OMEGA = consts.TWO_PI * 5.0e9


@pytest.fixture
def spec_ii(fig2, small_trunc, spot_ii):
    return spectrum.solve_spectrum(fig2, spot_ii, 4, small_trunc)


@pytest.fixture
def two_level():
    # |1> decays to |0> with T1 = 25 us
    return np.array([0.0, 4.0]), np.array([[0.0, 0.0], [1.0 / 25e-6, 0.0]])


def _boltzmann(delta_ghz, temperature):
    return math.exp(consts.H * delta_ghz * consts.GHZ / (consts.K_B * temperature))


def test_thermal_factor_detailed_balance():
    ratio = coherence.thermal_factor(OMEGA, 0.05) / coherence.thermal_factor(-OMEGA, 0.05)
    assert ratio == pytest.approx(_boltzmann(5.0, 0.05), rel = 1e-12)


def test_thermal_factor_classical_limit():
    x = consts.HBAR * OMEGA / (consts.K_B * 100.0)
    assert coherence.thermal_factor(OMEGA, 100.0) == pytest.approx(2.0 / x, rel = 1e-2)


@pytest.mark.parametrize("omega", [0.0, float("inf"), float("nan")])
def test_zero_frequency_is_rejected(omega):
    with pytest.raises(excep.InvalidParameterException):
        coherence.thermal_factor(omega, 0.05)


def test_quality_factors_at_reference(noise):
    assert coherence.q_cap(consts.Q_CAP_REF_OMEGA, noise) == pytest.approx(noise.q_cap_ref, rel = 1e-12)
    assert coherence.q_cap(-consts.Q_CAP_REF_OMEGA, noise) == pytest.approx(noise.q_cap_ref, rel = 1e-12)
    assert coherence.q_ind(consts.Q_IND_REF_OMEGA, noise) == pytest.approx(noise.q_ind_ref, rel = 1e-12)
    doubled = coherence.q_cap(2 * consts.Q_CAP_REF_OMEGA, noise)
    assert doubled == pytest.approx(noise.q_cap_ref * 2.0 ** -0.7, rel = 1e-12)


@pytest.mark.parametrize("density", [coherence.s_cap, coherence.s_ind, coherence.s_qp])
def test_spectral_densities_obey_detailed_balance(density, fig2, noise):
    up = density(OMEGA, fig2, noise)
    down = density(-OMEGA, fig2, noise)
    assert up > 0 and down > 0
    assert up / down == pytest.approx(_boltzmann(5.0, noise.temperature), rel = 1e-10)


def test_disordered_junction_densities(fig2, noise):
    p = fig2.replace(d_cj = 0.1, d_ej = 0.05)
    energies = p.junction_energies()
    assert coherence.s_cap(OMEGA, p, noise, 1) != coherence.s_cap(OMEGA, p, noise, 2)
    ratio = coherence.s_qp(OMEGA, p, noise, 1) / coherence.s_qp(OMEGA, p, noise, 2)
    assert ratio == pytest.approx(energies["e_j1"] / energies["e_j2"], rel = 1e-12)
    with pytest.raises(excep.InvalidParameterException):
        coherence.s_cap(OMEGA, p, noise, 3)


def test_quasiparticle_model_above_gap(fig2, noise):
    omega = 2.0 * noise.gap_delta * consts.E_CHARGE / consts.HBAR * 1.01
    with pytest.raises(excep.ModelValidityException):
        coherence.re_y_qp(omega, fig2, noise)


def test_rate_table_validation():
    with pytest.raises(excep.InvalidParameterException):
        RateTable({"cap": [[0.0, -1.0], [1.0, 0.0]]})
    with pytest.raises(excep.InvalidParameterException):
        RateTable({"cap": [[1.0, 0.0], [1.0, 0.0]]})
    with pytest.raises(excep.InvalidParameterException):
        RateTable({"cap": np.zeros((2, 2)), "ind": np.zeros((3, 3))})
    with pytest.raises(excep.InvalidParameterException):
        RateTable({})
    table = RateTable({"cap": np.zeros((2, 2))})
    with pytest.raises(ValueError):
        table.rates["cap"][0, 1] = 1.0


def test_state_and_logical_rates():
    table = RateTable({
        "cap": [[0.0, 1.0, 2.0], [3.0, 0.0, 4.0], [5.0, 6.0, 0.0]],
        "ind": [[0.0, 0.5, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
    })
    assert coherence.state_rate(table, 0) == pytest.approx(3.5)
    assert coherence.state_rate(table, 0, "cap") == pytest.approx(3.0)
    assert coherence.state_rate(table, 0, "qp") == 0.0
    assert coherence.logical_rate(table, 0, 1) == pytest.approx(4.5)
    assert coherence.gamma2(table, 0, 1) == pytest.approx(0.5 * (3.5 + 7.0))
    assert table.to_dict()["k"] == 3


def test_rate_table_at_sweet_spot(spec_ii, fig2, noise):
    table = coherence.rate_table(spec_ii, fig2, noise)
    assert set(table.channels) == set(consts.CHANNELS)
    total = table.total()
    assert np.all(total >= 0)
    np.testing.assert_array_equal(np.diag(total), 0.0)
    assert coherence.state_rate(table, 1) > 0
    threaded = coherence.rate_table(spec_ii, fig2, noise, threads = 3)
    for c in consts.CHANNELS:
        np.testing.assert_allclose(threaded.channel(c), table.channel(c), rtol = 1e-14)


def test_rate_table_detailed_balance(spec_ii, fig2, noise):
    table = coherence.rate_table(spec_ii, fig2, noise)
    e = spec_ii.eigenvalues
    for c in table.channels:
        m = table.channel(c)
        floor = 1e-10 * m.max()
        for i in range(table.k):
            for j in range(i):
                if m[j, i] == 0.0 or m[i, j] < floor:
                    continue
                assert m[i, j] / m[j, i] == pytest.approx(_boltzmann(e[i] - e[j], noise.temperature), rel = 1e-9)


def test_golden_rule_matches_table(spec_ii, fig2, noise):
    table = coherence.rate_table(spec_ii, fig2, noise)
    for c in consts.CHANNELS:
        rate = coherence.golden_rule_rate(spec_ii, 1, 0, c, fig2, noise)
        assert rate == pytest.approx(table.channel(c)[1, 0], rel = 1e-10, abs = 1e-10 * table.channel(c).max())
    with pytest.raises(excep.InvalidParameterException):
        coherence.golden_rule_rate(spec_ii, 1, 1, "cap", fig2, noise)
    with pytest.raises(excep.InvalidParameterException):
        coherence.golden_rule_rate(spec_ii, 1, 0, "flux", fig2, noise)


def test_degenerate_pairs_are_unresolved(fig2, small_trunc, noise):
    p = fig2.replace(e_j = 1e-12, e_ls = 2.0 * fig2.e_l / 3.0)
    spec = spectrum.solve_spectrum(p, (0.3, 0.2), 4, small_trunc)
    with pytest.raises(excep.UnresolvedTransitionException):
        coherence.golden_rule_rate(spec, 3, 2, "cap", p, noise)
    table = coherence.rate_table(spec, p, noise, channels = ("cap", "ind"))
    assert (2, 3) in table.unresolved
    assert table.total()[3, 2] == 0.0


def test_quasiparticle_channel_skipped_above_gap(spec_ii, fig2):
    noise = NoiseParams(gap_delta = 1e-6)
    with pytest.warns(excep.RegimeWarning):
        table = coherence.rate_table(spec_ii, fig2, noise)
    assert "qp" not in table.channels
    assert np.all(table.channel("qp") == 0.0)


def test_rates_need_params():
    bare = spectrum.Spectrum([0.0, 1.0], np.eye(2))
    with pytest.raises(excep.InvalidParameterException):
        coherence.rate_table(bare)


def test_two_level_decay(two_level):
    energies, rates = two_level
    times = np.linspace(0.0, 100e-6, 51)
    rho0 = np.diag([0.0, 1.0]).astype(complex)
    traj = coherence.lindblad_evolve(energies, rates, rho0, times)
    np.testing.assert_allclose(traj.populations()[:, 1], np.exp(-times / 25e-6), atol = 1e-8)
    assert traj.trace_error() < 1e-8
    assert traj.hermiticity_error() < 1e-8
    assert traj.min_eigenvalue() > -1e-9


def test_two_level_coherence(two_level):
    energies, rates = two_level
    times = np.linspace(0.0, 20e-6, 41)
    rho0 = 0.5 * np.ones((2, 2), dtype = complex)
    traj = coherence.lindblad_evolve(np.diag(energies), rates, rho0, times)
    gamma2 = 0.5 / 25e-6
    omega = consts.TWO_PI * consts.GHZ * energies
    expected = 0.5 * np.exp(-gamma2 * times) * np.exp(-1j * (omega[0] - omega[1]) * times)
    np.testing.assert_allclose(traj.coherence(0, 1), expected, atol = 1e-8)
    np.testing.assert_allclose(np.abs(traj.coherence(1, 0)), 0.5 * np.exp(-gamma2 * times), atol = 1e-8)


def test_cascade_matches_rate_equation():
    rates = np.zeros((4, 4))
    for n in range(1, 4):
        rates[n, n - 1] = n * 1e5
    rates[0, 1] = 2e3
    rates[1, 3] = 5e3
    energies = np.array([0.0, 3.1, 5.7, 9.2])
    times = np.linspace(0.0, 30e-6, 31)
    rho0 = np.zeros((4, 4), dtype = complex)
    rho0[3, 3] = 1.0
    traj = coherence.lindblad_evolve(energies, rates, rho0, times)
    generator = rates.T - np.diag(rates.sum(axis = 1))
    for t, pops in zip(times, traj.populations()):
        np.testing.assert_allclose(pops, linalg.expm(generator * t) @ [0.0, 0.0, 0.0, 1.0], atol = 1e-6)
    assert traj.trace_error() < 1e-8


def test_initial_slope_equals_state_rate(spec_ii, fig2, noise):
    table = coherence.rate_table(spec_ii, fig2, noise)
    for n in range(1, table.k):
        gamma = coherence.state_rate(table, n)
        times = np.linspace(0.0, 0.01 / gamma, 5)
        rho0 = np.zeros((table.k, table.k), dtype = complex)
        rho0[n, n] = 1.0
        traj = coherence.lindblad_evolve(spec_ii, table, rho0, times)
        slope = (1.0 - traj.populations()[-1, n]) / times[-1]
        assert slope == pytest.approx(gamma, rel = 1e-2)


def test_gamma2_matches_coherence_decay(spec_ii, fig2, noise):
    table = coherence.rate_table(spec_ii, fig2, noise)
    g2 = coherence.gamma2(table, 0, 1)
    times = np.linspace(0.0, 0.01 / g2, 5)
    psi = np.zeros(table.k, dtype = complex)
    psi[0] = psi[1] = 1.0 / math.sqrt(2.0)
    traj = coherence.lindblad_evolve(spec_ii, table, np.outer(psi, psi), times)
    decay = -math.log(2.0 * abs(traj.coherence(0, 1)[-1])) / times[-1]
    assert decay == pytest.approx(g2, rel = 0.05)


def test_lindblad_input_checks(two_level):
    energies, rates = two_level
    rho0 = np.diag([0.0, 1.0]).astype(complex)
    with pytest.raises(excep.InvalidParameterException):
        coherence.lindblad_evolve(np.array([[0.0, 0.1], [0.1, 4.0]]), rates, rho0, [0.0, 1e-6])
    with pytest.raises(excep.InvalidParameterException):
        coherence.lindblad_evolve(energies, rates, 2 * rho0, [0.0, 1e-6])
    with pytest.raises(excep.InvalidParameterException):
        coherence.lindblad_evolve(energies, rates, rho0, [1e-6, 0.0])
    with pytest.raises(excep.InvalidParameterException):
        coherence.lindblad_evolve(energies, np.zeros((3, 3)), rho0, [0.0, 1e-6])
    traj = coherence.lindblad_evolve(energies, rates, rho0, [0.0])
    assert len(traj) == 1


def test_subspace_spec():
    g = SubspaceSpec([2, 0, 2])
    assert g.indices == (0, 2)
    with pytest.raises(excep.InvalidParameterException):
        SubspaceSpec([])
    with pytest.raises(excep.InvalidParameterException):
        SubspaceSpec([-1])
    with pytest.raises(excep.InvalidParameterException):
        g.check(2)


def test_subspace_probability(two_level):
    energies, rates = two_level
    times = np.linspace(0.0, 50e-6, 11)
    traj = coherence.lindblad_evolve(energies, rates, np.diag([0.0, 1.0]).astype(complex), times)
    np.testing.assert_allclose(coherence.subspace_probability(traj, [0]), 1.0 - np.exp(-times / 25e-6), atol = 1e-8)
    np.testing.assert_allclose(coherence.subspace_probability(traj, SubspaceSpec([0, 1])), 1.0, atol = 1e-8)


def test_fit_t1s_recovers_decay():
    rng = np.random.default_rng(7)
    times = np.linspace(0.0, 100e-6, 200)
    series = 0.1 + 0.85 * np.exp(-times / 25e-6) + rng.normal(0.0, 0.01, times.size)
    fit = coherence.fit_t1s(times, series)
    assert fit.t1s == pytest.approx(25e-6, rel = 0.05)
    assert fit.a == pytest.approx(0.1, abs = 0.02)
    assert fit.b == pytest.approx(0.85, abs = 0.03)
    assert np.isfinite(fit.t1s_err)
    np.testing.assert_allclose(fit.model(times), 0.1 + 0.85 * np.exp(-times / fit.t1s), atol = 0.03)


def test_fit_t1s_with_offset_start():
    times = np.linspace(10e-6, 110e-6, 50)
    fit = coherence.fit_t1s(times, 0.2 + 0.7 * np.exp(-times / 30e-6))
    assert fit.t1s == pytest.approx(30e-6, rel = 1e-4)
    assert fit.b == pytest.approx(0.7, rel = 1e-4)


def test_fit_t1s_advises_on_short_records():
    times = np.linspace(0.0, 20e-6, 8)
    with pytest.warns(excep.FitWarning):
        coherence.fit_t1s(times, np.exp(-times / 25e-6))
    with pytest.raises(excep.InvalidParameterException):
        coherence.fit_t1s([0.0, 1.0], [1.0, 0.5])


def test_fit_t2rs_recovers_ramsey():
    rng = np.random.default_rng(11)
    times = np.linspace(0.0, 2e-6, 200)
    clean = 0.5 + 0.5 * np.exp(-times / 0.4e-6) * np.cos(consts.TWO_PI * 2e6 * times)
    fit = coherence.fit_t2rs(times, clean + rng.normal(0.0, 0.01, times.size))
    assert not fit.envelope_only
    assert fit.t2rs == pytest.approx(0.4e-6, rel = 0.1)
    assert fit.frequency == pytest.approx(2e6, rel = 0.02)
    assert fit.b > 0
    assert abs(fit.phase) < 0.2
    assert -math.pi <= fit.phase < math.pi


def test_fit_t2rs_envelope_only():
    times = np.linspace(0.0, 2e-6, 100)
    with pytest.warns(excep.FitWarning):
        fit = coherence.fit_t2rs(times, 0.5 + 0.5 * np.exp(-times / 0.5e-6))
    assert fit.envelope_only
    assert fit.frequency == 0.0
    assert fit.t2rs == pytest.approx(0.5e-6, rel = 1e-4)


def test_simulate_t1s(two_level):
    energies, rates = two_level
    times = np.linspace(0.0, 100e-6, 101)
    traj, series, fit = coherence.simulate_t1s(energies, rates, 1, SubspaceSpec([1]), times)
    assert fit.t1s == pytest.approx(25e-6, rel = 0.05)
    assert series[0] == pytest.approx(1.0)
    _, ground, ground_fit = coherence.simulate_t1s(energies, rates, 1, SubspaceSpec([0]), times)
    np.testing.assert_allclose(ground, 1.0 - np.exp(-times / 25e-6), atol = 1e-8)
    assert ground_fit.t1s == pytest.approx(25e-6, rel = 0.05)


def test_simulate_ramsey():
    energies = np.array([0.0, 4.0])
    rates = np.array([[0.0, 0.0], [5e6, 0.0]])
    times = np.linspace(0.0, 2e-6, 200)
    traj, series, fit = coherence.simulate_ramsey(energies, rates, (0, 1), SubspaceSpec([0]), times, 2e6)
    np.testing.assert_allclose(series, 0.5 + 0.5 * np.exp(-2.5e6 * times) * np.cos(consts.TWO_PI * 2e6 * times), atol = 1e-7)
    assert fit.t2rs == pytest.approx(0.4e-6, rel = 1e-3)
    assert fit.frequency == pytest.approx(2e6, rel = 1e-3)


def test_flux_dephasing_small_at_sweet_spot(fig2, small_trunc, spot_ii, noise):
    on = spectrum.solve_spectrum(fig2, spot_ii, 4, small_trunc)
    j = next(n for n in range(1, 4) if on.transition(n, 0) > 1e-3)
    off = spectrum.solve_spectrum(fig2, spot_ii.shifted(0.3, 0.2), 4, small_trunc)
    rate_on = coherence.flux_dephasing_rate(on, fig2, 0, j, noise)
    rate_off = coherence.flux_dephasing_rate(off, fig2, 0, j, noise)
    assert rate_on >= 0
    assert rate_off > 100 * rate_on


def test_flux_dephasing_regime_warning(spec_ii, fig2):
    noise = NoiseParams(ramsey_time = 1.0)
    j = next(n for n in range(1, 4) if spec_ii.transition(n, 0) > 1e-3)
    with pytest.warns(excep.RegimeWarning):
        coherence.flux_dephasing_rate(spec_ii, fig2, 0, j, noise)


def test_coherence_report(spec_ii, fig2, noise):
    report = coherence.coherence_report(spec_ii, fig2, noise, logical = (0, 1), dephasing = False)
    assert len(report["states"]) == 4
    excited = report["states"][1]
    assert excited["t1_s"] == pytest.approx(1.0 / excited["gamma1_per_s"])
    assert excited["dominant_channel"] in consts.CHANNELS
    assert excited["dominant_destination"] != 1
    assert report["logical"]["states"] == [0, 1]
    assert report["gamma2_per_s"] > 0
    assert "flux_dephasing_per_s" not in report
    assert report["flux"]["phi_c_rad"] == pytest.approx(math.pi)


def test_coherence_report_reuses_rate_table(spec_ii, fig2, noise, small_trunc, spot_ii):
    table = coherence.rate_table(spec_ii, fig2, noise)
    built = coherence.coherence_report(spec_ii, fig2, noise, logical = (0, 1), dephasing = False)
    reused = coherence.coherence_report(spec_ii, fig2, noise, logical = (0, 1), dephasing = False, table = table)
    assert reused == built
    short = spectrum.solve_spectrum(fig2, spot_ii, 3, small_trunc)
    with pytest.raises(excep.InvalidParameterException):
        coherence.coherence_report(spec_ii, fig2, noise, logical = (0, 1), table = coherence.rate_table(short, fig2, noise))
