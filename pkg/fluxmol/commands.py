#!/usr/bin/python
# -*- coding: utf-8 -*- 

# Copyright (c) 2024, The fluxmol developers
# All rights reserved. 
# 
# Redistribution and use in source and binary forms, with or without 
# modification, are permitted provided that the following conditions are met: 
# 
#     * Redistributions of source code must retain the above copyright notice, 
#       this list of conditions and the following disclaimer. 
#     * Redistributions in binary form must reproduce the above copyright 
#       notice,this list of conditions and the following disclaimer in the 
#       documentation and/or other materials provided with the distribution. 
#     * Neither the name of the copyright holder nor the names of its 
#       contributors may be used to endorse or promote products derived from 
#       this software without specific prior written permission. 
# 
# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS" 
# AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE 
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE 
# ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT OWNER OR CONTRIBUTORS BE 
# LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR 
# CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF 
# SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS 
# INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN 
# CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE) 
# ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF THE 
# POSSIBILITY OF SUCH DAMAGE. 

"""
Command-line interface: run configuration, subcommands and exit codes.

Each subcommand reads one JSON run configuration, calls the library and writes
CSV/JSON artifacts to the output directory.

@group Configuration:
    RunConfig, load_config

@group Commands:
    cmd_spectrum, cmd_sweetspots, cmd_wavefunction, cmd_coherence, cmd_decay,
    cmd_calibrate, cmd_fit

@group Entry point:
    prepare_parser, main
"""

__revision__ = "$Id$"

__all__ = [
           "RunConfig", 
           "load_config", 
           "cmd_spectrum", 
           "cmd_sweetspots", 
           "cmd_wavefunction", 
           "cmd_coherence", 
           "cmd_decay", 
           "cmd_calibrate", 
           "cmd_fit", 
           "COMMANDS", 
           "prepare_parser", 
           "main", 
           ]

import argparse
import logging
import os
import sys
import time

import numpy as np

import fluxmol
from fluxmol import circuit
from fluxmol import coherence
from fluxmol import consts
from fluxmol import excep
from fluxmol import fluxcal
from fluxmol import spectrum
from fluxmol import utils
from fluxmol.datatypes import BasisTruncation, CircuitParams, FluxCalibration, FluxPoint, NoiseParams

log = logging.getLogger(__name__)

VALIDATION_ERRORS = (
    excep.InvalidParameterException, 
    excep.ConfigException, 
    excep.SchemaException, 
    excep.TruncationException, 
    excep.MemoryGuardException, 
)

def _flag(value):
    """Strict boolean for configuration switches; JSON C{true}/C{false} only."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    raise ValueError("not a boolean")

def _indices(value):
    """A list of non-negative state indices."""
    out = []
    for v in value:
        if isinstance(v, bool) or int(v) != v or v < 0:
            raise ValueError("bad state index %r" % (v,))
        out.append(int(v))
    return out

def _pair(value):
    """Two state indices, C{[i, j]}."""
    value = _indices(value)
    if len(value) != 2:
        raise ValueError("expected two entries")
    return value

def _range(value):
    """A C{[low, high]} pair of numbers."""
    low, high = (float(v) for v in value)
    return low, high

_KINDS = {
    int: "an integer", 
    float: "a number", 
    list: "a list", 
    dict: "an object", 
    _flag: "true or false", 
    _indices: "a list of state indices", 
    _pair: "a pair of state indices", 
    _range: "a [low, high] pair", 
}

def _convert(value, kind, field):
    """
    Converts one configuration value.
    
    @type kind: callable
    @param kind: C{int}, C{float}, C{_flag}, C{_indices} or any callable raising C{TypeError}/C{ValueError}.
    
    @type field: str
    @param field: Dotted path reported in the diagnostic, e.g. "spectrum.k".
    
    @raise ConfigException: The value does not convert.
    """
    try:
        if kind is int and isinstance(value, float) and not value.is_integer():
            raise ValueError("not an integer")
        return kind(value)
    except (TypeError, ValueError) as e:
        raise excep.ConfigException("expected %s, got %r (%s)" % (_KINDS.get(kind, "a valid value"), value, e), field = field)

class RunConfig(object):
    """Parsed run configuration with the command-line overrides applied."""

    def __init__(self, doc = None, base_dir = ".", out = ".", seed = 0, flux_units = "rad", threads = 1):
        """
        @type doc: dict
        @param doc: (Optional) The configuration document.
        
        @type base_dir: str
        @param base_dir: (Optional) Directory relative paths in C{doc} are resolved against.
        
        @type out: str
        @param out: (Optional) Output directory.
        
        @type seed: int
        @param seed: (Optional) Seed for stochastic steps.
        
        @type flux_units: str
        @param flux_units: (Optional) Units of flux values in C{doc}, "rad" or "two-pi".
        
        @type threads: int
        @param threads: (Optional) Worker threads.
        """
        self.doc = dict(doc or {})
        self.base_dir = base_dir
        self.out = out
        self.seed = _convert(seed, int, "run.seed")
        self.flux_units = flux_units
        self.threads = max(1, _convert(threads, int, "run.threads"))
        if flux_units not in utils.FLUX_UNITS:
            raise excep.ConfigException("unknown flux units %r" % flux_units, field = "flux_units")
        if "schema" in self.doc:
            utils.check_schema(self.doc, "configuration")
        self.circuit = self._circuit(self.doc.get("circuit"))
        self.noise = self._record(NoiseParams, self.doc.get("noise"), "noise")
        self.truncation = self._record(BasisTruncation, self.doc.get("truncation"), "truncation")

    def path(self, name):
        if os.path.isabs(name):
            return name
        return os.path.join(self.base_dir, name)

    def output(self, name):
        return os.path.join(self.out, name)

    def section(self, name):
        section = self.doc.get(name, {})
        if not isinstance(section, dict):
            raise excep.ConfigException("section must be an object", field = name)
        return section

    def option(self, section, key, default = None, kind = float):
        """
        Reads C{key} of a command section, converted with C{kind}.
        
        @raise ConfigException: Missing without a default, or not convertible; the
            field is reported as C{section.key}.
        """
        value = self.section(section).get(key, default)
        if value is None:
            raise excep.ConfigException("a value is required", field = "%s.%s" % (section, key))
        return _convert(value, kind, "%s.%s" % (section, key))

    def _record(self, cls, value, field):
        if value is None:
            return cls()
        if not isinstance(value, dict):
            raise excep.ConfigException("expected an object", field = field)
        if "path" in value:
            value = utils.read_json(self.path(value["path"]), require_schema = False)
        try:
            return cls.from_dict(value)
        except (TypeError, excep.InvalidParameterException) as e:
            raise excep.ConfigException(str(e), field = field)

    def _circuit(self, value):
        if value is None:
            return None
        if isinstance(value, str):
            value = {"preset": value}
        if not isinstance(value, dict):
            raise excep.ConfigException("expected a preset name or an object", field = "circuit")
        try:
            if "preset" in value:
                overrides = dict((k, v) for k, v in value.items() if k != "preset")
                base = CircuitParams.from_preset(value["preset"]).to_dict()
                base.update(overrides)
                return CircuitParams.from_dict(base)
            if "path" in value:
                return CircuitParams.from_dict(utils.read_json(self.path(value["path"]), require_schema = False))
            return CircuitParams.from_dict(value)
        except (TypeError, excep.InvalidParameterException) as e:
            raise excep.ConfigException(str(e), field = "circuit")

    def params(self):
        if self.circuit is None:
            raise excep.ConfigException("a circuit section is required", field = "circuit")
        return self.circuit

    def flux(self, value, field):
        """
        Reads a flux point given as C{[phi_c, phi_d]} or a sweet-spot label.
        
        @rtype: L{FluxPoint}
        """
        if isinstance(value, str):
            table = dict(consts.SWEET_SPOTS)
            if value not in table:
                raise excep.ConfigException("unknown sweet spot %r" % value, field = field)
            return FluxPoint(*table[value])
        try:
            c, d = value
            return FluxPoint(utils.flux_to_radians(float(c), self.flux_units), utils.flux_to_radians(float(d), self.flux_units))
        except (TypeError, ValueError):
            raise excep.ConfigException("expected [phi_c, phi_d] or a sweet-spot label, got %r" % (value,), field = field)

def load_config(path = None, **overrides):
    """
    Reads a run configuration. Keyword arguments override the matching L{RunConfig} settings.
    
    @type path: str
    @param path: (Optional) JSON file; an empty configuration if omitted.
    
    @rtype: L{RunConfig}
    """
    doc = {}
    base_dir = "."
    if path:
        doc = utils.read_json(path, require_schema = False)
        if not isinstance(doc, dict):
            raise excep.ConfigException("the configuration must be a JSON object", field = path)
        base_dir = os.path.dirname(os.path.abspath(path))
    run = doc.get("run", {})
    settings = dict((k, run[k]) for k in ("out", "seed", "flux_units", "threads") if k in run)
    settings.update(dict((k, v) for k, v in overrides.items() if v is not None))
    return RunConfig(doc, base_dir, **settings)

def _metadata(config, started, **extra):
    d = {
        "version": fluxmol.__version__,
        "params": config.circuit.to_dict() if config.circuit is not None else None,
        "truncation": config.truncation.to_dict(),
        "seed": config.seed,
        "wall_time_s": time.time() - started,
    }
    d.update(extra)
    return d

def _model(section, default = "reduced"):
    model = section.get("model", default)
    if model not in circuit.MODELS:
        raise excep.ConfigException("unknown model %r" % model, field = "model")
    return model

def cmd_spectrum(config):
    """
    Spectra along a trajectory (tracked labels, avoided crossings) or over a flux grid.
    
    Section C{spectrum}: C{trajectory} with C{waypoints} or C{sweet_spots} and C{samples},
    or C{grid} with C{phi_c} and C{phi_d} as C{[start, stop, count]}; plus C{k} and C{model}.
    
    @rtype: list of str
    @return: Written files.
    """
    started = time.time()
    section = config.section("spectrum")
    params = config.params()
    model = _model(section)
    k = config.option("spectrum", "k", consts.DEFAULT_RATE_STATES, int)
    extra = {"model": model, "k": k}
    if "grid" in section:
        grid = section["grid"]
        try:
            cs = utils.flux_to_radians(np.linspace(*grid["phi_c"]), config.flux_units)
            ds = utils.flux_to_radians(np.linspace(*grid["phi_d"]), config.flux_units)
        except (KeyError, TypeError, ValueError) as e:
            raise excep.ConfigException("grid needs phi_c and phi_d as [start, stop, count] (%s)" % e, field = "spectrum.grid")
        points = [FluxPoint(c, d) for c in cs for d in ds]
        if not points:
            raise excep.ConfigException("the flux grid is empty", field = "spectrum.grid")
        sweep = utils.parallel_map(lambda p: spectrum.solve_spectrum(params, p, k, config.truncation, model), points, config.threads)
    else:
        trajectory = section.get("trajectory") or {}
        if not isinstance(trajectory, dict):
            raise excep.ConfigException("expected an object", field = "spectrum.trajectory")
        samples = _convert(trajectory.get("samples", 21), int, "spectrum.trajectory.samples")
        if trajectory.get("sweet_spots"):
            traj = spectrum.FluxTrajectory.through_sweet_spots(trajectory["sweet_spots"], samples)
        elif trajectory.get("waypoints"):
            waypoints = [config.flux(w, "spectrum.trajectory.waypoints") for w in trajectory["waypoints"]]
            traj = spectrum.FluxTrajectory(waypoints, samples)
        else:
            raise excep.ConfigException("a trajectory (waypoints or sweet_spots) or a grid is required", field = "spectrum")
        sweep = spectrum.sweep_trajectory(params, traj, k, config.truncation, model, config.threads)
        extra["avoided_crossings"] = [c.to_dict() for c in spectrum.avoided_crossing_gaps(sweep)] if len(sweep) >= 3 else []
    files = [spectrum.write_sweep_csv(config.output("spectrum.csv"), sweep)]
    files.append(utils.write_json(config.output("spectrum.json"), _metadata(config, started, **extra)))
    return files

def cmd_sweetspots(config):
    """
    Sweet-spot search. Section C{sweetspots}: C{region}, C{grid}, C{tol}, C{k}, C{model}.
    """
    started = time.time()
    section = config.section("sweetspots")
    params = config.params()
    model = _model(section)
    k = config.option("sweetspots", "k", consts.DEFAULT_RATE_STATES, int)
    region = section.get("region", [[0.0, consts.TWO_PI], [0.0, consts.TWO_PI]])
    if section.get("region") is not None:
        region = [[utils.flux_to_radians(v, config.flux_units) for v in _convert(axis, _range, "sweetspots.region")] for axis in _convert(region, list, "sweetspots.region")]
    grid = config.option("sweetspots", "grid", consts.SWEET_SPOT_DEFAULT_GRID, int)
    tol = config.option("sweetspots", "tol", consts.SWEET_SPOT_TOL)
    step = config.option("sweetspots", "step", consts.FD_STEP)
    spots = spectrum.find_sweet_spots(params, region, grid, tol, k, step, config.truncation, model, config.threads)
    entries = []
    for spot in spots:
        d = spot.to_dict()
        d["energies_GHz"] = spectrum.solve_spectrum(params, spot.flux, k, config.truncation, model).eigenvalues
        entries.append(d)
    return [utils.write_json(config.output("sweetspots.json"), _metadata(config, started, model = model, sweet_spots = entries))]

def cmd_wavefunction(config):
    """
    Reduced-model wavefunctions and well occupancies at one flux point.
    Section C{wavefunction}: C{flux}, C{states}, C{extent}, C{points}.
    """
    started = time.time()
    section = config.section("wavefunction")
    params = config.params()
    flux = config.flux(section.get("flux", "II"), "wavefunction.flux")
    states = config.option("wavefunction", "states", list(range(consts.DEFAULT_RATE_STATES)), _indices)
    if not states:
        raise excep.ConfigException("at least one state is required", field = "wavefunction.states")
    extent = config.option("wavefunction", "extent", consts.WAVEFUNCTION_EXTENT)
    points = config.option("wavefunction", "points", consts.WAVEFUNCTION_POINTS, int)
    spec = spectrum.solve_spectrum(params, flux, max(states) + 1, config.truncation, "reduced")
    files = []
    weights = {}
    for n in states:
        grid = spectrum.wavefunction(spec, n, extent, points)
        weights[n] = spectrum.well_weights(grid)
        files.append(utils.write_json(config.output("wavefunction_%d.json" % n), grid.to_dict()))
    labels = spectrum.classify_logical_states(spec, states, extent, points)
    files.append(utils.write_json(config.output("wavefunction.json"), _metadata(config, started, 
                 flux = flux.to_dict(), label = spectrum.label_flux_point(flux), energies_GHz = spec.eigenvalues, 
                 well_weights = weights, logical = {"0L": labels["0L"], "1L": labels["1L"], "types": labels["types"]})))
    return files

def cmd_coherence(config):
    """
    Per-state rate decomposition, logical rates and dephasing at one flux point.
    Section C{coherence}: C{flux}, C{k}, C{model}, C{logical}, C{dephasing}.
    """
    started = time.time()
    section = config.section("coherence")
    params = config.params()
    model = _model(section)
    flux = config.flux(section.get("flux", "II"), "coherence.flux")
    k = config.option("coherence", "k", consts.DEFAULT_RATE_STATES, int)
    spec = spectrum.solve_spectrum(params, flux, k, config.truncation, model)
    logical = section.get("logical")
    if logical is not None:
        logical = tuple(_convert(logical, _indices, "coherence.logical"))
    dephasing = config.option("coherence", "dephasing", True, _flag)
    table = coherence.rate_table(spec, params, config.noise, threads = config.threads)
    report = coherence.coherence_report(spec, params, config.noise, logical, dephasing, config.threads, table)
    rows = []
    for channel in table.channels:
        m = table.rates[channel]
        rows.extend([i, j, channel, m[i, j]] for i in range(table.k) for j in range(table.k) if i != j)
    files = [utils.write_csv(config.output("rates.csv"), ["from_state", "to_state", "channel", "rate_per_s"], rows)]
    report.update(_metadata(config, started, model = model, noise = config.noise.to_dict(), label = spectrum.label_flux_point(flux)))
    files.append(utils.write_json(config.output("coherence.json"), report))
    return files

def _decay_system(config, section):
    if "two_level" in section or "levels" in section:
        system = section.get("levels") or section.get("two_level")
        try:
            energies = np.array(system["energies_GHz"], dtype = float)
            table = coherence.RateTable({"input": np.array(system["rates_per_s"], dtype = float)})
        except (KeyError, TypeError, ValueError) as e:
            raise excep.ConfigException("levels need energies_GHz and rates_per_s (%s)" % e, field = "decay.levels")
        return energies, table
    params = config.params()
    flux = config.flux(section.get("flux", "II"), "decay.flux")
    spec = spectrum.solve_spectrum(params, flux, config.option("decay", "k", consts.DEFAULT_RATE_STATES, int), config.truncation, _model(section))
    return spec.eigenvalues, coherence.rate_table(spec, params, config.noise, threads = config.threads)

def _times(section, table):
    spec = section.get("times")
    if spec is None:
        slowest = min([coherence.state_rate(table, n) for n in range(table.k) if coherence.state_rate(table, n) > 0] or [1.0])
        return np.linspace(0.0, 5.0 / slowest, 201)
    try:
        return np.linspace(float(spec.get("start", 0.0)), float(spec["stop"]), int(spec.get("samples", 201)))
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise excep.ConfigException("times need stop (and optionally start, samples) (%s)" % e, field = "decay.times")

def _trajectory_csv(path, traj, series):
    header = ["t_s", "P_G"] + ["p%d" % n for n in range(traj.k)]
    rows = [[t, s] + list(p) for t, s, p in zip(traj.times, series, traj.populations())]
    return utils.write_csv(path, header, rows)

def cmd_decay(config):
    """
    Subspace relaxation and Ramsey protocols with fitted decay constants.
    
    Section C{decay}: C{protocols} (any of "t1s", "ramsey"), C{times}, C{initial},
    C{subspace}, C{logical}, C{detuning_Hz}, and either C{levels} (C{energies_GHz},
    C{rates_per_s}) or a flux point of the configured circuit.
    """
    started = time.time()
    section = config.section("decay")
    energies, table = _decay_system(config, section)
    times = _times(section, table)
    protocols = section.get("protocols", ["t1s"])
    results = {}
    files = []
    for protocol in protocols:
        if protocol == "t1s":
            initial = config.option("decay", "initial", 1, int)
            subspace = coherence.SubspaceSpec(config.option("decay", "subspace", [initial], _indices))
            traj, series, fit = coherence.simulate_t1s(energies, table, initial, subspace, times)
        elif protocol == "ramsey":
            logical = tuple(config.option("decay", "logical", [0, 1], _indices))
            if len(logical) != 2:
                raise excep.ConfigException("expected two logical states, got %r" % (logical,), field = "decay.logical")
            subspace = coherence.SubspaceSpec(config.option("decay", "ramsey_subspace", [logical[0]], _indices))
            detuning = config.option("decay", "detuning_Hz", 0.0)
            traj, series, fit = coherence.simulate_ramsey(energies, table, logical, subspace, times, detuning)
        else:
            raise excep.ConfigException("unknown protocol %r" % protocol, field = "decay.protocols")
        files.append(_trajectory_csv(config.output("decay_%s.csv" % protocol), traj, series))
        results[protocol] = fit.get_fields()
    files.append(utils.write_json(config.output("decay.json"), _metadata(config, started, energies_GHz = energies, fits = results)))
    return files

def _anchors(config, section):
    anchors = section.get("anchors")
    if isinstance(anchors, str):
        try:
            return [(float(r["v_m_V"]), float(r["v_l_V"]), int(r["n_c"]), int(r["n_d"])) for r in utils.read_csv(config.path(anchors))]
        except (KeyError, TypeError, ValueError) as e:
            raise excep.ConfigException("anchor CSV needs v_m_V, v_l_V, n_c, n_d (%s)" % e, field = "calibrate.anchors")
    if not anchors:
        raise excep.ConfigException("no calibration anchors given", field = "calibrate.anchors")
    return anchors

def cmd_calibrate(config):
    """
    Flux calibration from flux-quantum anchors. Section C{calibrate}: C{anchors} as a list
    of C{[v_m, v_l, n_c, n_d]} or a CSV path.
    """
    started = time.time()
    anchors = _anchors(config, config.section("calibrate"))
    cal = fluxcal.fit_calibration(anchors)
    residuals = []
    for a in (fluxcal.CalibrationAnchor.coerce(a) for a in anchors):
        flux = fluxcal.flux_from_voltages(cal, a.v_m, a.v_l)
        residuals.append(float(np.hypot(flux.phi_c - consts.TWO_PI * a.n_c, flux.phi_d - consts.TWO_PI * a.n_d)))
    doc = _metadata(config, started, calibration = cal.to_dict(), anchor_residual_rad = max(residuals))
    return [utils.write_json(config.output("calibration.json"), doc)]

def cmd_fit(config):
    """
    Fit of circuit energies to two-tone peaks.
    
    Section C{fit}: C{data} (peak CSV) or C{sweep} (spectrum CSV with C{transitions}),
    optional C{calibration} (JSON file) for voltage columns, C{initial}, C{bounds},
    C{free}, C{restarts}, C{model}.
    """
    started = time.time()
    section = config.section("fit")
    calibration = None
    if section.get("calibration"):
        doc = utils.read_json(config.path(section["calibration"]))
        calibration = FluxCalibration.from_dict(doc.get("calibration", doc))
    if section.get("data"):
        data = fluxcal.read_dataset_csv(config.path(section["data"]), calibration)
    elif section.get("sweep"):
        transitions = [tuple(_convert(t, _pair, "fit.transitions")) for t in config.option("fit", "transitions", [[0, 1], [0, 2], [0, 3]], list)]
        sigma = config.option("fit", "sigma", consts.DEFAULT_SIGMA)
        data = fluxcal.dataset_from_sweep_csv(config.path(section["sweep"]), transitions, sigma)
    else:
        raise excep.ConfigException("a data or sweep file is required", field = "fit")
    initial = config._circuit(section["initial"]) if section.get("initial") else config.params()
    bounds = dict((k, tuple(_convert(v, _range, "fit.bounds.%s" % k))) for k, v in config.option("fit", "bounds", {}, dict).items()) or None
    free = tuple(config.option("fit", "free", list(fluxcal.FIT_FIELDS), list))
    restarts = config.option("fit", "restarts", consts.FIT_RESTARTS, int)
    window = config.option("fit", "window", consts.ASSIGNMENT_WINDOW)
    trunc = config.truncation if "truncation" in config.doc else None
    result = fluxcal.fit_circuit_params(data, initial, bounds, free, restarts, config.seed, window, trunc = trunc, 
                                        model = _model(section, "full"), threads = config.threads)
    doc = result.to_dict()
    doc.update(_metadata(config, started, peaks = len(data)))
    return [utils.write_json(config.output("fit.json"), doc)]

COMMANDS = {
    "spectrum": cmd_spectrum,
    "sweetspots": cmd_sweetspots,
    "wavefunction": cmd_wavefunction,
    "coherence": cmd_coherence,
    "decay": cmd_decay,
    "calibrate": cmd_calibrate,
    "fit": cmd_fit,
}

def _run_options(parser, suppress = False):
    """
    Adds the run options. Subcommands repeat them with suppressed defaults; a value
    given before the subcommand name is kept unless repeated after it.
    """
    default = (lambda value: argparse.SUPPRESS) if suppress else (lambda value: value)
    group = parser.add_argument_group("Run options")
    group.add_argument("--config", default = default(None), help = "JSON run configuration")
    group.add_argument("--out", default = default(None), help = "output directory (default: current directory)")
    group.add_argument("--seed", type = int, default = default(None), help = "seed for stochastic steps (default: 0)")
    group.add_argument("--flux-units", dest = "flux_units", choices = utils.FLUX_UNITS, default = default(None), help = "units of flux values in the configuration")
    group.add_argument("--threads", type = int, default = default(None), help = "worker threads")
    group.add_argument("-v", "--verbose", action = "count", default = default(0), help = "more logging; repeat for debug output")
    return parser

def prepare_parser():
    parser = argparse.ArgumentParser(prog = "fluxmol", description = "Fluxonium-molecule spectra, coherence and fitting.")
    parser.add_argument("--version", action = "version", version = "%(prog)s " + fluxmol.__version__)
    _run_options(parser)

    common = _run_options(argparse.ArgumentParser(add_help = False), suppress = True)
    sub = parser.add_subparsers(dest = "command", metavar = "command")
    sub.required = True
    for name, func in sorted(COMMANDS.items()):
        sub.add_parser(name, parents = [common], help = func.__doc__.strip().splitlines()[0])
    return parser

def main(argv = None):
    """
    Runs one subcommand.
    
    @rtype: int
    @return: 0 on success, 2 on a validation error, 3 on a numeric failure.
    """
    parser = prepare_parser()
    args = parser.parse_args(argv)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level = level, format = "%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)
    try:
        config = load_config(args.config, out = args.out, seed = args.seed, flux_units = args.flux_units, threads = args.threads)
        if not os.path.isdir(config.out):
            try:
                os.makedirs(config.out)
            except OSError as e:
                raise excep.ConfigException("cannot create the output directory (%s)" % e, field = "out")
        for path in COMMANDS[args.command](config):
            log.info("wrote %s", path)
    except VALIDATION_ERRORS as e:
        sys.stderr.write("fluxmol %s: %s\n" % (args.command, e))
        return consts.EXIT_VALIDATION
    except excep.FluxMolException as e:
        sys.stderr.write("fluxmol %s: numeric failure: %s\n" % (args.command, e))
        return consts.EXIT_NUMERIC
    except OSError as e:
        sys.stderr.write("fluxmol %s: %s\n" % (args.command, e))
        return consts.EXIT_VALIDATION
    return consts.EXIT_OK
