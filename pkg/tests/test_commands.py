import json
import math
import os

import pytest

from fluxmol import commands
from fluxmol import consts
from fluxmol import excep

SMALL_TRUNC = {"n_phi": 10, "n_theta": 10, "n_zeta": 4}


def _write_config(tmp_path, doc, name = "run.json"):
    path = tmp_path / name
    with open(str(path), "w") as fd:
        json.dump(doc, fd)
    return str(path)


def _run(tmp_path, command, doc, out = "out"):
    config = _write_config(tmp_path, doc)
    return commands.main([command, "--config", config, "--out", str(tmp_path / out)])


def _read(tmp_path, name, out = "out"):
    with open(str(tmp_path / out / name)) as fd:
        return json.load(fd)


def test_decay_two_level(tmp_path):
    doc = {
        "decay": {
            "levels": {"energies_GHz": [0.0, 4.0], "rates_per_s": [[0.0, 0.0], [40000.0, 0.0]]},
            "protocols": ["t1s", "ramsey"],
            "times": {"stop": 1e-4, "samples": 201},
            "detuning_Hz": 1e5,
        }
    }
    assert _run(tmp_path, "decay", doc) == consts.EXIT_OK
    result = _read(tmp_path, "decay.json")
    assert result["schema"] == consts.SCHEMA
    assert result["fits"]["t1s"]["t1s"] == pytest.approx(25e-6, rel = 0.05)
    assert os.path.exists(str(tmp_path / "out" / "decay_t1s.csv"))
    assert os.path.exists(str(tmp_path / "out" / "decay_ramsey.csv"))


def test_decay_unknown_protocol(tmp_path):
    doc = {
        "decay": {
            "levels": {"energies_GHz": [0.0, 4.0], "rates_per_s": [[0.0, 0.0], [40000.0, 0.0]]},
            "protocols": ["echo"],
            "times": {"stop": 1e-4},
        }
    }
    assert _run(tmp_path, "decay", doc) == consts.EXIT_VALIDATION


def test_spectrum_without_trajectory(tmp_path):
    doc = {"circuit": "fig2", "truncation": SMALL_TRUNC, "spectrum": {"k": 3}}
    assert _run(tmp_path, "spectrum", doc) == consts.EXIT_VALIDATION


def test_spectrum_is_reproducible(tmp_path):
    doc = {
        "circuit": "fig2",
        "truncation": SMALL_TRUNC,
        "spectrum": {"k": 3, "trajectory": {"waypoints": [[0.3, 0.1], [1.0, 0.5]], "samples": 3}},
    }
    assert _run(tmp_path, "spectrum", doc, out = "a") == consts.EXIT_OK
    assert _run(tmp_path, "spectrum", doc, out = "b") == consts.EXIT_OK
    first = (tmp_path / "a" / "spectrum.csv").read_bytes()
    assert first == (tmp_path / "b" / "spectrum.csv").read_bytes()
    assert first.splitlines()[0] == b"flux_index,phi_c_rad,phi_d_rad,E0_GHz,E1_GHz,E2_GHz"
    meta = _read(tmp_path, "spectrum.json", out = "a")
    for key, value in SMALL_TRUNC.items():
        assert meta["truncation"][key] == value
    assert meta["params"]["EJ_GHz"] == 11.0


def test_coherence_writes_rates(tmp_path):
    doc = {"circuit": "fig2", "truncation": SMALL_TRUNC, "coherence": {"flux": "II", "k": 4}}
    assert _run(tmp_path, "coherence", doc) == consts.EXIT_OK
    assert os.path.exists(str(tmp_path / "out" / "rates.csv"))
    assert "schema" in _read(tmp_path, "coherence.json")


def test_calibrate_from_anchors(tmp_path):
    anchors = [[0.0, 0.0, 0, 0], [1.0, 0.0, 1, 0], [0.0, 1.0, 0, 1], [1.0, 1.0, 1, 1], [2.0, 1.0, 2, 1]]
    assert _run(tmp_path, "calibrate", {"calibrate": {"anchors": anchors}}) == consts.EXIT_OK
    result = _read(tmp_path, "calibration.json")
    assert set(result["calibration"]) >= {"alpha_m", "alpha_l", "beta_m", "beta_l"}
    assert result["anchor_residual_rad"] < 1e-8


def test_calibrate_without_anchors(tmp_path):
    assert _run(tmp_path, "calibrate", {"calibrate": {}}) == consts.EXIT_VALIDATION


def test_bad_schema(tmp_path):
    doc = {"schema": "fluxmol/v0", "circuit": "fig2"}
    assert _run(tmp_path, "spectrum", doc) == consts.EXIT_VALIDATION


def test_unknown_subcommand():
    with pytest.raises(SystemExit) as info:
        commands.main(["teleport"])
    assert info.value.code == 2


def test_run_section_and_overrides(tmp_path):
    path = _write_config(tmp_path, {"run": {"seed": 7, "threads": 2}, "circuit": "fig2"})
    config = commands.load_config(path, seed = 3)
    assert config.seed == 3
    assert config.threads == 2
    assert config.base_dir == str(tmp_path)


def test_flux_labels_and_units():
    config = commands.RunConfig({"circuit": "fig2"}, flux_units = "two-pi")
    point = config.flux([0.5, -0.25], "flux")
    assert point.phi_c == pytest.approx(math.pi)
    assert point.phi_d == pytest.approx(-0.5 * math.pi)
    label = config.flux("III", "flux")
    assert label.phi_c == pytest.approx(1.5 * math.pi)
    with pytest.raises(excep.ConfigException):
        config.flux("IV", "flux")
    with pytest.raises(excep.ConfigException):
        commands.RunConfig(flux_units = "gauss")


def test_circuit_preset_override():
    config = commands.RunConfig({"circuit": {"preset": "device1", "EJ_GHz": 6.2}})
    assert config.params().e_j == 6.2
    assert config.params().e_c == 4.5
    assert commands.RunConfig().circuit is None
    with pytest.raises(excep.ConfigException):
        commands.RunConfig().params()
    with pytest.raises(excep.ConfigException):
        commands.RunConfig({"circuit": {"preset": "device9"}})


def test_wavefunction_outputs(tmp_path):
    doc = {
        "circuit": "fig2",
        "truncation": SMALL_TRUNC,
        "wavefunction": {"flux": "II", "states": [0, 1], "points": 61},
    }
    assert _run(tmp_path, "wavefunction", doc) == consts.EXIT_OK
    for n in (0, 1):
        grid = _read(tmp_path, "wavefunction_%d.json" % n)
        assert grid["state"] == n
        assert grid["shape"] == [61, 61]
        assert len(grid["phi_rad"]) == len(grid["real"]) == len(grid["imag"]) == 61
        assert len(grid["theta_rad"]) == len(grid["real"][0]) == len(grid["imag"][0]) == 61
    assert not [name for name in os.listdir(str(tmp_path / "out")) if name.endswith(".csv")]
    result = _read(tmp_path, "wavefunction.json")
    assert result["label"] == "II"
    assert set(result["well_weights"]) == {"0", "1"}


def test_spectrum_then_fit_round_trip(tmp_path):
    sweep = {
        "circuit": "fig2",
        "truncation": SMALL_TRUNC,
        "spectrum": {"k": 4, "trajectory": {"waypoints": [[0.3, 0.1], [1.0, 0.5]], "samples": 5}},
    }
    assert _run(tmp_path, "spectrum", sweep, out = "sweep") == consts.EXIT_OK
    fit = {
        "circuit": {"preset": "fig2", "EJ_GHz": 11.3},
        "truncation": SMALL_TRUNC,
        "fit": {
            "sweep": str(tmp_path / "sweep" / "spectrum.csv"),
            "free": ["e_j"],
            "restarts": 0,
            "model": "reduced",
        },
    }
    assert _run(tmp_path, "fit", fit, out = "fit") == consts.EXIT_OK
    result = _read(tmp_path, "fit.json", out = "fit")
    assert result["EJ_GHz"] == pytest.approx(11.0, rel = 1e-4)
    assert result["peaks"] == 15
    assert result["diagnostics"]["misfit"] is False


@pytest.mark.slow
def test_sweetspots_command(tmp_path):
    doc = {
        "circuit": "fig2",
        "truncation": {"n_phi": 16, "n_theta": 16, "n_zeta": 4},
        "sweetspots": {"region": [[2.8, 3.5], [-0.3, 0.3]], "grid": 0},
    }
    assert _run(tmp_path, "sweetspots", doc) == consts.EXIT_OK
    spots = _read(tmp_path, "sweetspots.json")["sweet_spots"]
    assert any(s["label"] == "II" for s in spots)


@pytest.mark.parametrize("command, section", [
    ("spectrum", {"k": "four", "trajectory": {"sweet_spots": ["I", "II"]}}),
    ("spectrum", {"k": 2.5, "trajectory": {"sweet_spots": ["I", "II"]}}),
    ("spectrum", {"k": 3, "trajectory": {"sweet_spots": ["I", "II"], "samples": "x"}}),
    ("sweetspots", {"grid": "coarse"}),
    ("sweetspots", {"tol": "tight"}),
    ("sweetspots", {"region": [1.0, 2.0]}),
    ("wavefunction", {"states": [0, -1]}),
    ("coherence", {"dephasing": "yes"}),
])
def test_malformed_values_are_validation_errors(tmp_path, command, section):
    doc = {"circuit": "fig2", "truncation": SMALL_TRUNC, command: section}
    assert _run(tmp_path, command, doc) == consts.EXIT_VALIDATION


def test_option_reports_the_field():
    config = commands.RunConfig({"spectrum": {"k": "four", "samples": None}})
    with pytest.raises(excep.ConfigException) as info:
        config.option("spectrum", "k", 4, int)
    assert info.value.field == "spectrum.k"
    assert "spectrum.k" in str(info.value)
    with pytest.raises(excep.ConfigException) as info:
        config.option("spectrum", "samples")
    assert info.value.field == "spectrum.samples"
    assert config.option("spectrum", "tol", 1e-6) == 1e-6
    with pytest.raises(excep.ConfigException):
        commands.RunConfig(seed = "abc")


def test_output_path_is_a_file(tmp_path):
    (tmp_path / "taken").write_text(u"")
    doc = {"decay": {"levels": {"energies_GHz": [0.0, 4.0], "rates_per_s": [[0.0, 0.0], [1.0, 0.0]]}}}
    assert _run(tmp_path, "decay", doc, out = "taken") == consts.EXIT_VALIDATION


def test_run_options_before_the_subcommand(tmp_path):
    parser = commands.prepare_parser()
    args = parser.parse_args(["--seed", "5", "--threads", "2", "spectrum"])
    assert (args.seed, args.threads, args.command) == (5, 2, "spectrum")
    assert parser.parse_args(["--seed", "5", "spectrum", "--seed", "6"]).seed == 6
    assert parser.parse_args(["spectrum"]).seed is None
    doc = {
        "decay": {
            "levels": {"energies_GHz": [0.0, 4.0], "rates_per_s": [[0.0, 0.0], [40000.0, 0.0]]},
            "protocols": ["t1s"],
            "times": {"stop": 1e-4, "samples": 51},
        }
    }
    config = _write_config(tmp_path, doc)
    out = str(tmp_path / "early")
    assert commands.main(["--config", config, "--out", out, "decay"]) == consts.EXIT_OK
    assert os.path.exists(os.path.join(out, "decay.json"))
