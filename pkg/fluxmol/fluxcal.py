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
Flux calibration and fitting of circuit parameters to two-tone spectroscopy.

@group Calibration:
    CalibrationAnchor, flux_from_voltages, voltages_from_flux, fit_calibration

@group Spectroscopy:
    Transition, predict_transitions, synthetic_dataset, read_dataset_csv, write_dataset_csv,
    dataset_from_sweep_csv

@group Fitting:
    FitResult, fit_circuit_params
"""

__revision__ = "$Id$"

__all__ = [
           "CalibrationAnchor", 
           "flux_from_voltages", 
           "voltages_from_flux", 
           "fit_calibration", 
           "Transition", 
           "predict_transitions", 
           "synthetic_dataset", 
           "read_dataset_csv", 
           "write_dataset_csv", 
           "dataset_from_sweep_csv", 
           "FitResult", 
           "fit_circuit_params", 
           ]

import logging
import math
import warnings

import numpy as np
from scipy import optimize
from scipy import stats
from scipy.stats import qmc

from fluxmol import consts
from fluxmol import excep
from fluxmol import utils
from fluxmol.baseclasses import BaseRecord
from fluxmol.datatypes import BasisTruncation, CircuitParams, FluxCalibration, FluxPoint, TwoTonePeak, TwoToneDataset
from fluxmol.spectrum import solve_spectrum

log = logging.getLogger(__name__)

FIT_FIELDS = ("e_j", "e_l", "e_ls", "e_cj", "e_c")

def _fit_truncation():
    return BasisTruncation(consts.FIT_N_PHI, consts.FIT_N_THETA, consts.FIT_N_ZETA)

class CalibrationAnchor(BaseRecord):
    """Control voltages at which the fluxes are known integer multiples of 2 pi."""
    _jsonKeys = {"v_m": "v_m_V", "v_l": "v_l_V"}

    def __init__(self, v_m, v_l, n_c, n_d):
        BaseRecord.__init__(self)
        self.v_m = float(v_m)
        self.v_l = float(v_l)
        self.n_c = int(n_c)
        self.n_d = int(n_d)
        self._attrsList = ["v_m", "v_l", "n_c", "n_d"]
        self.validate()
        self._freeze()

    def validate(self):
        if not (math.isfinite(self.v_m) and math.isfinite(self.v_l)):
            raise excep.InvalidParameterException("Anchor voltages must be finite, got (%r, %r)." % (self.v_m, self.v_l))

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        if isinstance(value, dict):
            return cls.from_dict(value)
        return cls(*value)

def flux_from_voltages(cal, v_m, v_l):
    """
    C{[phi_c, phi_d] = M [v_m, v_l] + offsets}.
    
    @type cal: L{FluxCalibration}
    @param cal: Calibration.
    
    @type v_m: float
    @param v_m: Magnet voltage, V.
    
    @type v_l: float
    @param v_l: Bias-line voltage, V.
    
    @rtype: L{FluxPoint}
    """
    phi = cal.matrix @ np.array([v_m, v_l], dtype = float) + cal.offsets
    return FluxPoint(phi[0], phi[1])

def voltages_from_flux(cal, flux):
    """
    Inverse of L{flux_from_voltages}.
    
    @rtype: tuple
    @return: C{(v_m, v_l)} in V.
    """
    flux = FluxPoint.coerce(flux)
    v = np.linalg.solve(cal.matrix, flux.as_array() - cal.offsets)
    return float(v[0]), float(v[1])

def fit_calibration(anchors):
    """
    Linear least-squares calibration from flux-quantum anchors.
    
    Each anchor contributes C{phi_c = 2 pi n_c} and C{phi_d = 2 pi n_d}; the rows of
    C{phi_c} and C{phi_d} separate into two independent three-parameter problems.
    
    @type anchors: list
    @param anchors: L{CalibrationAnchor} objects, dicts or C{(v_m, v_l, n_c, n_d)} tuples.
    
    @rtype: L{FluxCalibration}
    
    @raise InvalidParameterException: Fewer than 4 anchors.
    @raise RankDeficiencyException: The anchors do not span both voltage axes.
    """
    anchors = [CalibrationAnchor.coerce(a) for a in anchors]
    if len(anchors) < 4:
        raise excep.InvalidParameterException("Calibration needs at least 4 anchors, got %d." % len(anchors))
    design = np.array([[a.v_m, a.v_l, 1.0] for a in anchors])
    rank = np.linalg.matrix_rank(design)
    if rank < 3:
        raise excep.RankDeficiencyException("Calibration anchors have rank %d < 3; they must span both voltage axes." % rank)
    targets = consts.TWO_PI * np.array([[a.n_c, a.n_d] for a in anchors], dtype = float)
    coef, residuals, _, _ = np.linalg.lstsq(design, targets, rcond = None)
    log.debug("calibration fit over %d anchors, residuals %s", len(anchors), residuals)
    (alpha_m, beta_m), (alpha_l, beta_l), (off_c, off_d) = coef
    return FluxCalibration(alpha_m, alpha_l, beta_m, beta_l, off_c, off_d)

class Transition(BaseRecord):
    """A predicted transition C{i -> j} at one flux point."""

    def __init__(self, from_state, to_state, frequency):
        BaseRecord.__init__(self)
        self.from_state = int(from_state)
        self.to_state = int(to_state)
        self.frequency = float(frequency)
        self._attrsList = ["from_state", "to_state", "frequency"]
        self._freeze()

    def validate(self):
        pass

def _transitions(energies, from_states, max_f):
    out = []
    for i in sorted(from_states):
        for j in range(i + 1, energies.size):
            f = energies[j] - energies[i]
            if f < max_f:
                out.append(Transition(i, j, f))
    out.sort(key = lambda t: (t.frequency, t.from_state, t.to_state))
    return out

def predict_transitions(params, flux, from_states = (0, 1), max_f = float("inf"), k = 8, trunc = None, model = "full"):
    """
    Transition frequencies C{E_j - E_i} from the states in C{from_states} to every higher
    computed state.
    
    @type params: L{CircuitParams}
    @param params: Circuit energies.
    
    @type flux: L{FluxPoint}
    @param flux: Operating point.
    
    @type from_states: iterable
    @param from_states: (Optional) Initial states.
    
    @type max_f: float
    @param max_f: (Optional) Upper frequency limit, GHz.
    
    @type k: int
    @param k: (Optional) Number of computed eigenstates.
    
    @type trunc: L{BasisTruncation}
    @param trunc: (Optional) Basis; a 20/20/4 fitting basis if omitted.
    
    @rtype: list of L{Transition}
    @return: Sorted by frequency.
    """
    from_states = set(int(i) for i in from_states)
    if not from_states or min(from_states) < 0 or max(from_states) >= k:
        raise excep.InvalidParameterException("from_states %r must lie in [0, %d)." % (sorted(from_states), k))
    spec = solve_spectrum(params, flux, k, trunc or _fit_truncation(), model)
    return _transitions(spec.eigenvalues, from_states, max_f)

def synthetic_dataset(params, fluxes, transitions = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3)), noise = 0.0, 
                      sigma = consts.DEFAULT_SIGMA, seed = None, labeled = True, trunc = None, model = "full", threads = 1):
    """
    Two-tone peaks generated from a parameter set.
    
    @type fluxes: iterable
    @param fluxes: Flux points.
    
    @type transitions: iterable
    @param transitions: (Optional) Energy-index pairs C{(i, j)} to emit at each point.
    
    @type noise: float
    @param noise: (Optional) Relative Gaussian frequency noise.
    
    @type seed: int
    @param seed: (Optional) Seed of the noise generator.
    
    @type labeled: bool
    @param labeled: (Optional) Keep the transition labels on the peaks.
    
    @rtype: L{TwoToneDataset}
    """
    fluxes = [FluxPoint.coerce(f) for f in fluxes]
    transitions = [tuple(t) for t in transitions]
    k = max(j for _, j in transitions) + 1
    rng = np.random.default_rng(seed)
    spectra = utils.parallel_map(lambda f: solve_spectrum(params, f, k, trunc or _fit_truncation(), model), fluxes, threads)
    data = TwoToneDataset()
    for flux, spec in zip(fluxes, spectra):
        for i, j in transitions:
            f = spec.eigenvalues[j] - spec.eigenvalues[i]
            if noise:
                f *= 1.0 + noise * rng.standard_normal()
            label = (i, j) if labeled else (None, None)
            data.append(TwoTonePeak(flux.phi_c, flux.phi_d, f, sigma, *label))
    return data

DATASET_COLUMNS = ["phi_c_rad", "phi_d_rad", "f_GHz", "sigma_GHz", "from_state", "to_state"]

def write_dataset_csv(path, data):
    rows = [[p.phi_c, p.phi_d, p.f_transition, p.sigma, p.from_state, p.to_state] for p in data]
    return utils.write_csv(path, DATASET_COLUMNS, rows)

def _opt_int(value):
    return None if value is None else int(value)

def read_dataset_csv(path, calibration = None):
    """
    Reads peaks from CSV. Flux columns are C{phi_c_rad, phi_d_rad}, or C{v_m_V, v_l_V}
    mapped through C{calibration}.
    
    @type calibration: L{FluxCalibration}
    @param calibration: (Optional) Required for voltage columns.
    
    @rtype: L{TwoToneDataset}
    
    @raise ConfigException: Missing columns or unparsable cells; the field names the row.
    """
    data = TwoToneDataset()
    for n, row in enumerate(utils.read_csv(path), 2):
        where = "%s:%d" % (path, n)
        try:
            if row.get("phi_c_rad") is not None:
                flux = FluxPoint(float(row["phi_c_rad"]), float(row["phi_d_rad"]))
            elif row.get("v_m_V") is not None:
                if calibration is None:
                    raise excep.ConfigException("voltage columns need a calibration", field = where)
                flux = flux_from_voltages(calibration, float(row["v_m_V"]), float(row["v_l_V"]))
            else:
                raise excep.ConfigException("row has neither phi_c_rad/phi_d_rad nor v_m_V/v_l_V", field = where)
            sigma = float(row["sigma_GHz"]) if row.get("sigma_GHz") is not None else consts.DEFAULT_SIGMA
            data.append(TwoTonePeak(flux.phi_c, flux.phi_d, float(row["f_GHz"]), sigma, 
                                    _opt_int(row.get("from_state")), _opt_int(row.get("to_state"))))
        except (KeyError, TypeError, ValueError) as e:
            raise excep.ConfigException("bad dataset row (%s)" % e, field = where)
    log.info("read %d peaks from %s", len(data), path)
    return data

def dataset_from_sweep_csv(path, transitions = ((0, 1), (0, 2), (0, 3)), sigma = consts.DEFAULT_SIGMA):
    """
    Turns a sweep CSV (as written by the spectrum command) into labeled peaks. Each row is
    re-sorted into energy order before the labels are applied.
    
    @rtype: L{TwoToneDataset}
    """
    data = TwoToneDataset()
    for n, row in enumerate(utils.read_csv(path), 2):
        try:
            energies = sorted(float(v) for key, v in row.items() if key.startswith("E") and key.endswith("_GHz"))
            for i, j in transitions:
                data.append(TwoTonePeak(float(row["phi_c_rad"]), float(row["phi_d_rad"]), energies[j] - energies[i], sigma, i, j))
        except (KeyError, IndexError, TypeError, ValueError) as e:
            raise excep.ConfigException("bad sweep row (%s)" % e, field = "%s:%d" % (path, n))
    return data

class FitResult(object):
    """Outcome of L{fit_circuit_params}."""

    def __init__(self, params, free, half_widths, rms, cost, nfev, starts, success, message, misfit, assigned):
        self.params = params
        self.free = tuple(free)
        self.half_widths = dict(half_widths)
        self.rms = float(rms)
        self.cost = float(cost)
        self.nfev = int(nfev)
        self.starts = int(starts)
        self.success = bool(success)
        self.message = message
        self.misfit = bool(misfit)
        self.assigned = int(assigned)

    def __repr__(self):
        return "<FitResult rms=%.3g GHz %s>" % (self.rms, self.params)

    def to_dict(self):
        """
        @rtype: dict
        @return: The L{CircuitParams} fields plus a C{diagnostics} section.
        """
        d = self.params.to_dict()
        d["half_widths_95"] = dict((self.params._jsonKeys[n], w) for n, w in self.half_widths.items())
        d["diagnostics"] = {
            "free": list(self.free),
            "rms_GHz": self.rms,
            "cost": self.cost,
            "nfev": self.nfev,
            "starts": self.starts,
            "success": self.success,
            "message": self.message,
            "misfit": self.misfit,
            "assigned_peaks": self.assigned,
        }
        return d

def _bounds(initial, free, bounds):
    lo, hi = [], []
    for name in free:
        value = getattr(initial, name)
        if bounds and name in bounds:
            a, b = bounds[name]
        else:
            a, b = 0.5 * value, 2.0 * value
        if not (0 < a <= value <= b):
            raise excep.InvalidParameterException("Initial %s = %r is outside its bounds [%r, %r]." % (name, value, a, b))
        lo.append(a)
        hi.append(b)
    return np.array(lo), np.array(hi)

class _Model(object):
    """Predicted transitions for every flux point of a dataset."""

    def __init__(self, data, initial, free, k, trunc, model, threads):
        self.data = data
        self.initial = initial
        self.free = free
        self.k = k
        self.trunc = trunc
        self.model = model
        self.threads = threads
        self.points = data.flux_points()
        self.index = [self.points.index(p.flux) for p in data]

    def params(self, x):
        return self.initial.replace(**dict(zip(self.free, x)))

    def energies(self, x):
        params = self.params(x)
        spectra = utils.parallel_map(lambda f: solve_spectrum(params, f, self.k, self.trunc, self.model), self.points, self.threads)
        return [s.eigenvalues for s in spectra]

def _assign(model, energies, window):
    """
    Labels and weights for each peak: labeled peaks keep their label; unlabeled ones take
    the nearest transition from states 0 and 1 within C{window}.
    """
    labels = []
    weights = []
    for peak, idx in zip(model.data, model.index):
        if peak.label is not None:
            labels.append(peak.label)
            weights.append(1.0)
            continue
        candidates = _transitions(energies[idx], (0, 1), float("inf"))
        near = [t for t in candidates if abs(t.frequency - peak.f_transition) <= window]
        if not near:
            labels.append(None)
            weights.append(0.0)
            continue
        best = min(near, key = lambda t: abs(t.frequency - peak.f_transition))
        labels.append((best.from_state, best.to_state))
        weights.append(consts.AMBIGUOUS_WEIGHT if len(near) > 1 else 1.0)
    return labels, np.array(weights)

def _residuals(model, labels, weights):
    f_obs = model.data.frequencies()
    sigma = model.data.sigmas()
    active = [n for n, l in enumerate(labels) if l is not None]

    def residual(x):
        energies = model.energies(x)
        r = np.empty(len(active))
        for m, n in enumerate(active):
            i, j = labels[n]
            e = energies[model.index[n]]
            r[m] = weights[n] * (f_obs[n] - (e[j] - e[i])) / sigma[n]
        return r

    return residual, active

def _solve(model, x0, lo, hi, labels, weights):
    residual, active = _residuals(model, labels, weights)
    if len(active) < len(x0):
        raise excep.ConvergenceException("Only %d peaks could be assigned for %d free parameters." % (len(active), len(x0)))
    x0 = np.clip(x0, lo, hi)
    return optimize.least_squares(residual, x0, bounds = (lo, hi), method = "trf", x_scale = "jac", diff_step = 1e-6)

def _fit_from(model, x0, lo, hi, window, rounds = 5):
    labels, weights = _assign(model, model.energies(x0), window)
    result = None
    for _ in range(rounds):
        result = _solve(model, x0, lo, hi, labels, weights)
        new_labels, new_weights = _assign(model, model.energies(result.x), window)
        if new_labels == labels and np.array_equal(new_weights, weights):
            break
        labels, weights, x0 = new_labels, new_weights, result.x
    return result, labels, weights

def fit_circuit_params(data, initial, bounds = None, free = FIT_FIELDS, restarts = consts.FIT_RESTARTS, seed = None, 
                       window = consts.ASSIGNMENT_WINDOW, k = None, trunc = None, model = "full", threads = 1):
    """
    Bounded least-squares fit of circuit energies to two-tone peaks, minimizing
    C{sum(w (f_obs - f_model) / sigma)^2}.
    
    The fit starts from C{initial} and from C{restarts} Latin-hypercube points spread
    C{+-20%} around it, keeping the lowest cost. Unlabeled peaks are assigned to the
    nearest predicted transition out of states 0 and 1; peaks outside C{window} are
    left out and peaks with two candidates in the window get half weight. Assignment
    and optimization alternate until the assignment is stable. Disorder is held at zero.
    
    @type data: L{TwoToneDataset}
    @param data: Peaks.
    
    @type initial: L{CircuitParams}
    @param initial: Starting point; must lie inside C{bounds}.
    
    @type bounds: dict
    @param bounds: (Optional) Field name to C{(low, high)}; defaults to a factor of 2 around C{initial}.
    
    @type free: tuple
    @param free: (Optional) Fitted fields.
    
    @type restarts: int
    @param restarts: (Optional) Number of extra starting points.
    
    @type seed: int
    @param seed: (Optional) Seed of the Latin-hypercube sampler.
    
    @rtype: L{FitResult}
    
    @raise InvalidParameterException: Too few peaks or C{initial} outside the bounds.
    @raise ConvergenceException: No start converged.
    """
    if not isinstance(data, TwoToneDataset) or not len(data):
        raise excep.InvalidParameterException("fit_circuit_params needs a non-empty TwoToneDataset.")
    free = tuple(free)
    unknown = [n for n in free if n not in CircuitParams._jsonKeys]
    if unknown:
        raise excep.InvalidParameterException("Unknown free parameters %s." % ", ".join(unknown))
    if len(data) < 3 * len(free):
        raise excep.InvalidParameterException("%d peaks for %d free parameters; at least %d are needed." % (len(data), len(free), 3 * len(free)))
    if initial.has_disorder():
        log.info("disorder is held at zero during fitting")
        initial = initial.symmetric()
    lo, hi = _bounds(initial, free, bounds)
    labels = [p.label for p in data if p.label is not None]
    if k is None:
        k = max([j for _, j in labels] + [4]) + 1
    fit_model = _Model(data, initial, free, k, trunc or _fit_truncation(), model, threads)

    x_init = np.array([getattr(initial, n) for n in free])
    starts = [x_init]
    if restarts:
        sample = qmc.LatinHypercube(d = len(free), seed = seed).random(restarts)
        spread = consts.FIT_RESTART_SPREAD
        starts.extend(np.clip(x_init * (1.0 - spread + 2.0 * spread * sample), lo, hi))

    best = None
    tried = 0
    for n, x0 in enumerate(starts):
        tried += 1
        try:
            result, assigned, weights = _fit_from(fit_model, x0, lo, hi, window)
        except excep.FluxMolException as e:
            log.debug("start %d failed: %s", n, e)
            continue
        log.debug("start %d: cost %.6g after %d evaluations", n, result.cost, result.nfev)
        if result.status > 0 and (best is None or result.cost < best[0].cost):
            best = (result, assigned, weights)
        if best is not None and best[0].cost < 1e-20:
            break
    if best is None:
        raise excep.ConvergenceException("None of the %d fit starts converged." % tried)
    result, assigned, weights = best

    active = [n for n, l in enumerate(assigned) if l is not None]
    sigma = data.sigmas()[active]
    resid_ghz = result.fun * sigma / weights[active]
    rms = float(np.sqrt(np.mean(resid_ghz ** 2)))
    dof = len(active) - len(free)
    half = dict((name, float("nan")) for name in free)
    if dof > 0:
        jac = result.jac
        cov = np.linalg.pinv(jac.T @ jac) * (2.0 * result.cost / dof)
        t = stats.t.ppf(0.975, dof)
        half = dict((name, float(t * math.sqrt(max(c, 0.0)))) for name, c in zip(free, np.diag(cov)))
    misfit = rms > consts.MISFIT_FACTOR * float(np.median(data.sigmas()))
    if misfit:
        warnings.warn(excep.FitWarning("Residual RMS %.4g GHz exceeds %g x the median sigma." % (rms, consts.MISFIT_FACTOR)), stacklevel = 2)
    params = fit_model.params(result.x)
    log.info("fit converged: rms %.4g GHz, %s", rms, params)
    return FitResult(params, free, half, rms, result.cost, result.nfev, tried, result.success, result.message, misfit, len(active))
