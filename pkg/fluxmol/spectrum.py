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
Spectra, flux sweeps, sweet spots, avoided crossings and wavefunctions.

@group Types:
    Spectrum, FluxTrajectory, SweetSpot, Dispersion, AvoidedCrossing, WavefunctionGrid

@group Diagonalization:
    diagonalize, solve_spectrum

@group Sweeps:
    sweep_trajectory, track_states, avoided_crossing_gaps, write_sweep_csv

@group Flux derivatives and sweet spots:
    flux_dispersion, energy_gradients, find_sweet_spots, label_flux_point

@group Wavefunctions and matrix elements:
    wavefunction, hermite_functions, matrix_element, well_weights, site_amplitudes,
    classify_logical_states
"""

__revision__ = "$Id$"

__all__ = [
           "Spectrum", 
           "FluxTrajectory", 
           "SweetSpot", 
           "Dispersion", 
           "AvoidedCrossing", 
           "WavefunctionGrid", 
           "diagonalize", 
           "solve_spectrum", 
           "sweep_trajectory", 
           "track_states", 
           "avoided_crossing_gaps", 
           "write_sweep_csv", 
           "energy_gradients", 
           "flux_dispersion", 
           "find_sweet_spots", 
           "label_flux_point", 
           "hermite_functions", 
           "wavefunction", 
           "matrix_element", 
           "well_weights", 
           "site_amplitudes", 
           "classify_logical_states", 
           ]

import itertools
import logging
import math
import warnings

import numpy as np
from scipy import linalg
from scipy import optimize
from scipy.sparse import linalg as sparse_linalg

from fluxmol import circuit
from fluxmol import consts
from fluxmol import excep
from fluxmol import utils
from fluxmol.baseclasses import BaseRecord
from fluxmol.datatypes import CircuitParams, FluxPoint, OperatorMatrix

log = logging.getLogger(__name__)

class Spectrum(object):
    """Lowest eigenpairs of a Hamiltonian."""

    def __init__(self, eigenvalues, eigenvectors, basis = None, flux = None, params = None, model = None, tracking = None):
        """
        @type eigenvalues: numpy.ndarray
        @param eigenvalues: Ascending eigenvalues, GHz.
        
        @type eigenvectors: numpy.ndarray
        @param eigenvectors: Columns in the construction basis.
        
        @type basis: L{BasisDescriptor}
        @param basis: (Optional) Basis of the eigenvectors.
        
        @type flux: L{FluxPoint}
        @param flux: (Optional) Flux point of the Hamiltonian.
        
        @type params: L{CircuitParams}
        @param params: (Optional) Circuit energies of the Hamiltonian.
        
        @type model: str
        @param model: (Optional) "full" or "reduced".
        
        @type tracking: numpy.ndarray
        @param tracking: (Optional) C{tracking[j]} is the energy index of tracked level C{j}.
        """
        eigenvalues = np.array(eigenvalues, dtype = float)
        eigenvectors = np.array(eigenvectors)
        if eigenvectors.ndim != 2 or eigenvectors.shape[1] != eigenvalues.shape[0]:
            raise excep.InvalidParameterException("Eigenvector matrix of shape %r does not match %d eigenvalues." % (eigenvectors.shape, eigenvalues.shape[0]))
        if np.any(np.diff(eigenvalues) < 0):
            raise excep.InvalidParameterException("Eigenvalues must be ascending.")
        eigenvalues.flags.writeable = False
        eigenvectors.flags.writeable = False
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors
        self.basis = basis
        self.flux = flux
        self.params = params
        self.model = model
        if tracking is None:
            tracking = np.arange(self.k)
        self.tracking = np.asarray(tracking, dtype = int)

    def __repr__(self):
        return "<Spectrum k=%d flux=%r E=%s>" % (self.k, self.flux, np.array2string(self.eigenvalues[:4], precision = 6))

    def __len__(self):
        return self.k

    @property
    def k(self):
        return self.eigenvalues.shape[0]

    def vector(self, i):
        return self.eigenvectors[:, i]

    def transition(self, i, j):
        """
        @rtype: float
        @return: C{E_i - E_j} in GHz.
        """
        return float(self.eigenvalues[i] - self.eigenvalues[j])

    def tracked_energies(self):
        """
        @rtype: numpy.ndarray
        @return: Eigenvalues in tracked order.
        """
        return self.eigenvalues[self.tracking]

    def with_tracking(self, tracking):
        return Spectrum(self.eigenvalues, self.eigenvectors, self.basis, self.flux, self.params, self.model, tracking)

    def gram_error(self):
        """
        @rtype: float
        @return: Max-norm deviation of the eigenvector Gram matrix from the identity.
        """
        v = self.eigenvectors
        return float(np.max(np.abs(v.conj().T @ v - np.eye(self.k))))

    def to_dict(self):
        d = {"eigenvalues_GHz": self.eigenvalues}
        if self.flux is not None:
            d["flux"] = self.flux.to_dict()
        if self.model is not None:
            d["model"] = self.model
        return d

class FluxTrajectory(BaseRecord):
    """Piecewise-linear path through flux space."""

    def __init__(self, waypoints, samples = 21):
        """
        @type waypoints: list of L{FluxPoint}
        @param waypoints: At least two points, visited in order.
        
        @type samples: int
        @param samples: (Optional) Samples per segment, endpoints included.
        """
        BaseRecord.__init__(self)
        self.waypoints = tuple(FluxPoint.coerce(p) for p in waypoints)
        self.samples = int(samples)
        self._attrsList = ["waypoints", "samples"]
        self.validate()
        self._freeze()

    def validate(self):
        """
        @raise InvalidParameterException: Fewer than two waypoints or samples.
        """
        if len(self.waypoints) < 2:
            raise excep.InvalidParameterException("A trajectory needs at least 2 waypoints, got %d." % len(self.waypoints))
        if self.samples < 2:
            raise excep.InvalidParameterException("A trajectory needs at least 2 samples per segment, got %d." % self.samples)

    def points(self):
        """
        @rtype: list of L{FluxPoint}
        @return: Sampled points; consecutive segments share their endpoint.
        """
        out = [self.waypoints[0]]
        for a, b in zip(self.waypoints[:-1], self.waypoints[1:]):
            for s in np.linspace(0.0, 1.0, self.samples)[1:]:
                out.append(FluxPoint(a.phi_c + s * (b.phi_c - a.phi_c), a.phi_d + s * (b.phi_d - a.phi_d)))
        return out

    def __len__(self):
        return (len(self.waypoints) - 1) * (self.samples - 1) + 1

    @classmethod
    def through_sweet_spots(cls, labels, samples = 21):
        """
        Trajectory through the named points of L{consts.SWEET_SPOTS}.
        
        @type labels: list of str
        @param labels: E.g. C{["I", "II", "III"]}.
        """
        table = dict(consts.SWEET_SPOTS)
        try:
            return cls([FluxPoint(*table[label]) for label in labels], samples)
        except KeyError as e:
            raise excep.InvalidParameterException("Unknown sweet spot label %s." % e)

class SweetSpot(BaseRecord):
    """A refined flux point where the low-lying transitions are flux insensitive."""

    def __init__(self, flux, label, residual, unresolved = ()):
        """
        @type flux: L{FluxPoint}
        @param flux: Location.
        
        @type label: str
        @param label: One of "I", "I'", "II", "III" or "other".
        
        @type residual: float
        @param residual: Largest transition gradient magnitude left, GHz/rad.
        
        @type unresolved: tuple
        @param unresolved: (Optional) Transitions C{(i, j)} excluded because their splitting is below L{consts.DEGENERACY_TOL}.
        """
        BaseRecord.__init__(self)
        self.flux = FluxPoint.coerce(flux)
        self.label = label
        self.residual = float(residual)
        self.unresolved = tuple(tuple(p) for p in unresolved)
        self._attrsList = ["flux", "label", "residual", "unresolved"]
        self._freeze()

    def validate(self):
        pass

    def to_dict(self):
        return {"phi_c_rad": self.flux.phi_c, "phi_d_rad": self.flux.phi_d, "label": self.label, 
                "residual_GHz_per_rad": self.residual, "unresolved": [list(p) for p in self.unresolved]}

class Dispersion(BaseRecord):
    """Flux gradient of a transition energy."""

    def __init__(self, i, j, gradient, splitting, unresolved = False):
        BaseRecord.__init__(self)
        self.i = int(i)
        self.j = int(j)
        self.gradient = tuple(float(g) for g in gradient)
        self.splitting = float(splitting)
        self.unresolved = bool(unresolved)
        self._attrsList = ["i", "j", "gradient", "splitting", "unresolved"]
        self._freeze()

    def validate(self):
        pass

    @property
    def magnitude(self):
        """Euclidean norm of the gradient, GHz/rad."""
        return math.hypot(*self.gradient)

class AvoidedCrossing(BaseRecord):
    """Local minimum of the separation between adjacent levels along a sweep."""

    def __init__(self, position, flux, pair, labels, gap):
        """
        @type position: float
        @param position: Fractional sample index of the minimum.
        
        @type flux: L{FluxPoint}
        @param flux: Interpolated flux at C{position}.
        
        @type pair: tuple
        @param pair: Energy indices C{(n, n + 1)}.
        
        @type labels: tuple
        @param labels: Tracked labels of the two levels at the nearest sample.
        
        @type gap: float
        @param gap: Refined minimum separation, GHz.
        """
        BaseRecord.__init__(self)
        self.position = float(position)
        self.flux = flux
        self.pair = tuple(pair)
        self.labels = tuple(labels)
        self.gap = float(gap)
        self._attrsList = ["position", "flux", "pair", "labels", "gap"]
        self._freeze()

    def validate(self):
        pass

class WavefunctionGrid(object):
    """Amplitude of one eigenstate on a (phi, theta) grid."""

    def __init__(self, phi, theta, amplitude, state):
        """
        @type phi: numpy.ndarray
        @param phi: Samples along phi, radians.
        
        @type theta: numpy.ndarray
        @param theta: Samples along theta, radians.
        
        @type amplitude: numpy.ndarray
        @param amplitude: C{amplitude[i, j] = psi(phi[i], theta[j])}.
        
        @type state: int
        @param state: Energy index of the state.
        """
        self.phi = np.asarray(phi, dtype = float)
        self.theta = np.asarray(theta, dtype = float)
        self.amplitude = np.asarray(amplitude)
        self.state = int(state)
        if self.amplitude.shape != (self.phi.size, self.theta.size):
            raise excep.InvalidParameterException("Amplitude shape %r does not match the grid (%d, %d)." % (self.amplitude.shape, self.phi.size, self.theta.size))

    @property
    def cell_area(self):
        return float((self.phi[1] - self.phi[0]) * (self.theta[1] - self.theta[0]))

    def norm(self):
        """
        @rtype: float
        @return: Discrete L2 norm squared, C{sum |psi|^2 dphi dtheta}.
        """
        return float(np.sum(np.abs(self.amplitude) ** 2) * self.cell_area)

    def overlap(self, other):
        """
        @rtype: float
        @return: C{sum |psi_a| |psi_b| dphi dtheta}.
        """
        return float(np.sum(np.abs(self.amplitude) * np.abs(other.amplitude)) * self.cell_area)

    def to_dict(self):
        """
        @rtype: dict
        @return: Axes plus row-major C{real}/C{imag} arrays, C{real[i][j]} at C{(phi_rad[i], theta_rad[j])}.
        """
        return {
            "state": self.state,
            "shape": list(self.amplitude.shape),
            "phi_rad": self.phi,
            "theta_rad": self.theta,
            "real": np.real(self.amplitude),
            "imag": np.imag(self.amplitude),
        }

def _fix_phase(vectors):
    vectors = np.array(vectors)
    for col in range(vectors.shape[1]):
        v = vectors[:, col]
        idx = int(np.argmax(np.abs(v)))
        pivot = v[idx]
        if pivot != 0:
            vectors[:, col] = v * (np.conj(pivot) / abs(pivot))
    if np.iscomplexobj(vectors) and np.max(np.abs(vectors.imag), initial = 0.0) == 0.0:
        vectors = vectors.real
    return vectors

def diagonalize(h, k, flux = None, params = None, model = None):
    """
    Lowest C{k} eigenpairs of a Hermitian operator.
    
    Matrices up to L{consts.DENSE_SOLVER_LIMIT} states use a dense solver, larger ones
    the Lanczos solver. The largest-magnitude component of each eigenvector is made
    real and positive.
    
    @type h: L{OperatorMatrix}
    @param h: Hermitian matrix.
    
    @type k: int
    @param k: Number of eigenpairs.
    
    @rtype: L{Spectrum}
    
    @raise NonHermitianException: C{h} is not Hermitian.
    @raise ConvergenceException: The iterative solver did not converge.
    """
    if not isinstance(h, OperatorMatrix):
        raise excep.InvalidParameterException("diagonalize expects an OperatorMatrix, got %r." % type(h))
    k = int(k)
    if not 1 <= k <= h.dimension:
        raise excep.InvalidParameterException("k = %d must lie in [1, %d]." % (k, h.dimension))
    h.check_hermitian()
    if h.dimension <= consts.DENSE_SOLVER_LIMIT or k >= h.dimension - 1:
        log.debug("dense eigensolver, dimension %d, k %d", h.dimension, k)
        w, v = linalg.eigh(h.toarray(), subset_by_index = [0, k - 1])
    else:
        log.debug("Lanczos eigensolver, dimension %d, k %d", h.dimension, k)
        try:
            w, v = sparse_linalg.eigsh(h.matrix, k = k, which = "SA", tol = 0)
        except sparse_linalg.ArpackNoConvergence as e:
            raise excep.ConvergenceException("Lanczos solver did not converge for %d eigenpairs (dimension %d): %s" % (k, h.dimension, e))
        order = np.argsort(w)
        w, v = w[order], v[:, order]
    return Spectrum(w, _fix_phase(v), h.basis, flux, params, model)

def solve_spectrum(params, flux, k = consts.DEFAULT_RATE_STATES, trunc = None, model = "reduced"):
    """
    Builds and diagonalizes the Hamiltonian of C{model} at one flux point.
    
    @rtype: L{Spectrum}
    """
    flux = FluxPoint.coerce(flux)
    h = circuit.build_hamiltonian(params, flux, trunc, model)
    return diagonalize(h, k, flux, params, model)

def _overlap(prev, cur):
    return np.abs(prev.eigenvectors.conj().T @ cur.eigenvectors) ** 2

def track_states(spectra, initial = None):
    """
    Follows eigenstates along a list of spectra by maximal successive overlap.
    
    @type spectra: list of L{Spectrum}
    @param spectra: Spectra in the same basis, all with the same C{k}.
    
    @type initial: numpy.ndarray
    @param initial: (Optional) Tracked order of the first spectrum; identity by default.
    
    @rtype: list of numpy.ndarray
    @return: For every spectrum, C{order[j]} is the energy index of tracked level C{j}.
    """
    if not spectra:
        return []
    k = spectra[0].k
    order = np.arange(k) if initial is None else np.asarray(initial, dtype = int)
    orders = [order]
    for prev, cur in zip(spectra[:-1], spectra[1:]):
        if cur.k != k:
            raise excep.InvalidParameterException("All spectra of a sweep must have the same k.")
        rows, cols = optimize.linear_sum_assignment(_overlap(prev, cur), maximize = True)
        mapping = cols[np.argsort(rows)]
        order = mapping[order]
        orders.append(order)
    return orders

def sweep_trajectory(params, traj, k = consts.DEFAULT_RATE_STATES, trunc = None, model = "reduced", threads = 1):
    """
    Spectra along a flux trajectory with overlap-tracked state labels.
    
    @type params: L{CircuitParams}
    @param params: Circuit energies.
    
    @type traj: L{FluxTrajectory}
    @param traj: Path through flux space.
    
    @type k: int
    @param k: (Optional) Eigenpairs per sample.
    
    @type threads: int
    @param threads: (Optional) Worker threads for the per-sample diagonalizations.
    
    @rtype: list of L{Spectrum}
    @return: One spectrum per sample, each carrying its C{tracking} order.
    """
    if not isinstance(traj, FluxTrajectory):
        raise excep.InvalidParameterException("Expected a FluxTrajectory, got %r." % type(traj))
    points = traj.points()
    log.info("sweeping %d flux points (%s model, k = %d)", len(points), model, k)
    spectra = utils.parallel_map(lambda p: solve_spectrum(params, p, k, trunc, model), points, threads)
    orders = track_states(spectra)
    return [s.with_tracking(o) for s, o in zip(spectra, orders)]

def avoided_crossing_gaps(sweep):
    """
    Local minima of the separation between energy-adjacent levels along a sweep, refined
    by a parabola through the minimum sample and its two neighbors.
    
    @type sweep: list of L{Spectrum}
    @param sweep: At least three spectra.
    
    @rtype: list of L{AvoidedCrossing}
    """
    if len(sweep) < 3:
        raise excep.InvalidParameterException("Avoided-crossing detection needs at least 3 samples, got %d." % len(sweep))
    energies = np.array([s.eigenvalues for s in sweep])
    found = []
    for n in range(energies.shape[1] - 1):
        gap = energies[:, n + 1] - energies[:, n]
        for s in range(1, len(gap) - 1):
            if not (gap[s] < gap[s - 1] and gap[s] <= gap[s + 1]):
                continue
            g0, g1, g2 = gap[s - 1], gap[s], gap[s + 1]
            curvature = g0 - 2.0 * g1 + g2
            delta = 0.5 * (g0 - g2) / curvature if curvature > 0 else 0.0
            delta = min(max(delta, -0.5), 0.5)
            value = g1 - 0.25 * (g0 - g2) * delta
            flux = _interpolate_flux(sweep, s, delta)
            labels = tuple(int(np.argmax(sweep[s].tracking == m)) for m in (n, n + 1))
            found.append(AvoidedCrossing(s + delta, flux, (n, n + 1), labels, value))
    found.sort(key = lambda c: (c.position, c.pair))
    log.debug("found %d avoided crossings", len(found))
    return found

def _interpolate_flux(sweep, s, delta):
    a = sweep[s].flux
    b = sweep[s + 1].flux if delta >= 0 else sweep[s - 1].flux
    if a is None or b is None:
        return a
    f = abs(delta)
    return FluxPoint(a.phi_c + f * (b.phi_c - a.phi_c), a.phi_d + f * (b.phi_d - a.phi_d))

def write_sweep_csv(path, sweep):
    """
    Writes a sweep as CSV with columns flux_index, phi_c_rad, phi_d_rad, E0_GHz ... in tracked order.
    """
    k = sweep[0].k
    header = ["flux_index", "phi_c_rad", "phi_d_rad"] + ["E%d_GHz" % n for n in range(k)]
    rows = []
    for index, spec in enumerate(sweep):
        rows.append([index, spec.flux.phi_c, spec.flux.phi_d] + list(spec.tracked_energies()))
    return utils.write_csv(path, header, rows)

def _check_step(step):
    if not consts.FD_STEP_MIN <= step <= consts.FD_STEP_MAX:
        raise excep.InvalidParameterException("Finite-difference step %g rad outside [%g, %g]." % (step, consts.FD_STEP_MIN, consts.FD_STEP_MAX))

def _energies_at(params, points, k, trunc, model, threads = 1):
    return np.array(utils.parallel_map(lambda p: solve_spectrum(params, p, k, trunc, model).eigenvalues, points, threads))

def _central(params, flux, k, h, trunc, model, threads):
    points = [flux.shifted(h, 0), flux.shifted(-h, 0), flux.shifted(0, h), flux.shifted(0, -h)]
    e = _energies_at(params, points, k, trunc, model, threads)
    return np.stack([(e[0] - e[1]) / (2 * h), (e[2] - e[3]) / (2 * h)], axis = 1)

def energy_gradients(params, flux, k = consts.DEFAULT_RATE_STATES, step = consts.FD_STEP, trunc = None, model = "reduced", threads = 1):
    """
    Flux gradients of the lowest C{k} energies (by energy index), from central
    differences at C{step} and C{step/2} combined by one Richardson extrapolation.
    
    @rtype: tuple
    @return: C{(energies, gradients)}, shapes C{(k,)} and C{(k, 2)}; GHz and GHz/rad.
    """
    _check_step(step)
    flux = FluxPoint.coerce(flux)
    energies = solve_spectrum(params, flux, k, trunc, model).eigenvalues
    coarse = _central(params, flux, k, step, trunc, model, threads)
    fine = _central(params, flux, k, 0.5 * step, trunc, model, threads)
    return energies, (4.0 * fine - coarse) / 3.0

def flux_dispersion(params, flux, i, j, step = consts.FD_STEP, trunc = None, model = "reduced"):
    """
    Gradient of C{E_ij = E_i - E_j} with respect to C{(phi_c, phi_d)}.
    
    @type params: L{CircuitParams}
    @param params: Circuit energies.
    
    @type flux: L{FluxPoint}
    @param flux: Evaluation point.
    
    @type i: int
    @param i: Energy index of the first state.
    
    @type j: int
    @param j: Energy index of the second state.
    
    @type step: float
    @param step: (Optional) Finite-difference step in [1e-4, 1e-1] rad.
    
    @rtype: L{Dispersion}
    @return: The gradient, flagged unresolved if C{|E_i - E_j| < consts.DEGENERACY_TOL}.
    """
    k = max(i, j) + 1
    energies, grads = energy_gradients(params, flux, k, step, trunc, model)
    splitting = abs(energies[i] - energies[j])
    unresolved = i != j and splitting < consts.DEGENERACY_TOL
    if unresolved:
        log.debug("transition %d-%d unresolved at %r (splitting %.3e GHz)", i, j, flux, splitting)
    return Dispersion(i, j, grads[i] - grads[j], splitting, unresolved)

def label_flux_point(flux, radius = consts.SWEET_SPOT_LABEL_RADIUS):
    """
    Names the sweet-spot class of a flux point, comparing modulo 2*pi.
    
    @rtype: str
    @return: "I", "I'", "II", "III" or "other".
    """
    flux = FluxPoint.coerce(flux)
    for label, members in consts.SWEET_SPOT_CLASSES:
        for member in members:
            if flux.distance(FluxPoint(*member)) < radius:
                return label
    return "other"

def _transition_residual(energies, grads):
    k = len(energies)
    worst = 0.0
    unresolved = []
    for i, j in itertools.combinations(range(k), 2):
        if abs(energies[j] - energies[i]) < consts.DEGENERACY_TOL:
            unresolved.append((i, j))
            continue
        worst = max(worst, float(np.hypot(*(grads[j] - grads[i]))))
    return worst, unresolved

def _newton_step(params, flux, k, h, trunc, model, threads):
    c, d = flux.phi_c, flux.phi_d
    offsets = [(h, 0), (-h, 0), (0, h), (0, -h), (h, h), (h, -h), (-h, h), (-h, -h), (0, 0)]
    e = _energies_at(params, [FluxPoint(c + a, d + b) for a, b in offsets], k, trunc, model, threads)
    t = e - e[:, :1]
    grad = np.stack([(t[0] - t[1]) / (2 * h), (t[2] - t[3]) / (2 * h)], axis = 1)
    hcc = (t[0] - 2 * t[8] + t[1]) / h ** 2
    hdd = (t[2] - 2 * t[8] + t[3]) / h ** 2
    hcd = (t[4] - t[5] - t[6] + t[7]) / (4 * h ** 2)
    keep = [n for n in range(1, k) if abs(t[8][n]) >= consts.DEGENERACY_TOL]
    if not keep:
        return np.zeros(2)
    g = np.concatenate([grad[n] for n in keep])
    jac = np.concatenate([[[hcc[n], hcd[n]], [hcd[n], hdd[n]]] for n in keep])
    delta = np.linalg.lstsq(jac, -g, rcond = None)[0]
    norm = np.linalg.norm(delta)
    if norm > consts.SWEET_SPOT_MAX_STEP:
        delta *= consts.SWEET_SPOT_MAX_STEP / norm
    return delta

def _refine(params, seed, k, tol, step, trunc, model, threads):
    flux = seed
    for iteration in range(consts.SWEET_SPOT_MAX_ITER + 1):
        energies, grads = energy_gradients(params, flux, k, step, trunc, model, threads)
        residual, unresolved = _transition_residual(energies, grads)
        log.debug("sweet-spot refinement at %r, iteration %d, residual %.3e", flux, iteration, residual)
        if residual < tol:
            return flux, residual, unresolved, True
        if iteration == consts.SWEET_SPOT_MAX_ITER:
            break
        delta = _newton_step(params, flux, k, step, trunc, model, threads)
        flux = flux.shifted(*delta)
    return flux, residual, unresolved, False

def _symmetry_seeds(region):
    (c0, c1), (d0, d1) = region
    seeds = []
    eps = 1e-9
    for label, members in consts.SWEET_SPOT_CLASSES:
        for mc, md in members:
            for nc in range(int(math.floor((c0 - mc) / consts.TWO_PI)), int(math.ceil((c1 - mc) / consts.TWO_PI)) + 1):
                for nd in range(int(math.floor((d0 - md) / consts.TWO_PI)), int(math.ceil((d1 - md) / consts.TWO_PI)) + 1):
                    c, d = mc + nc * consts.TWO_PI, md + nd * consts.TWO_PI
                    if c0 - eps <= c <= c1 + eps and d0 - eps <= d <= d1 + eps:
                        seeds.append(FluxPoint(c, d))
    return seeds

def _grid_seeds(params, region, grid, k, trunc, model, threads):
    (c0, c1), (d0, d1) = region
    cs = np.linspace(c0, c1, grid)
    ds = np.linspace(d0, d1, grid)
    points = [FluxPoint(c, d) for c in cs for d in ds]
    e = _energies_at(params, points, k, trunc, model, threads).reshape(grid, grid, k)
    t = e[:, :, 1:] - e[:, :, :1]
    gc = np.gradient(t, cs, axis = 0)
    gd = np.gradient(t, ds, axis = 1)
    cost = np.max(np.hypot(gc, gd), axis = 2)
    seeds = []
    for a in range(1, grid - 1):
        for b in range(1, grid - 1):
            if cost[a, b] <= cost[a - 1:a + 2, b - 1:b + 2].min():
                seeds.append(FluxPoint(cs[a], ds[b]))
    return seeds

def find_sweet_spots(params, region = ((0.0, consts.TWO_PI), (0.0, consts.TWO_PI)), grid = consts.SWEET_SPOT_DEFAULT_GRID, 
                     tol = consts.SWEET_SPOT_TOL, k = consts.DEFAULT_RATE_STATES, step = consts.FD_STEP, trunc = None, 
                     model = "reduced", threads = 1):
    """
    Locates flux points where every resolved transition among the lowest C{k} states
    has a vanishing flux gradient.
    
    Seeds are the members of the four symmetry classes inside C{region} and the local
    minima of a C{grid x grid} scan of the transition gradients. Each seed is refined by
    Newton iterations on the stacked transition gradients. Seeds that do not converge
    are reported with a L{SweetSpotWarning} and dropped.
    
    @type params: L{CircuitParams}
    @param params: Circuit energies.
    
    @type region: tuple
    @param region: (Optional) C{((phi_c_min, phi_c_max), (phi_d_min, phi_d_max))}, at least 2*pi wide on each axis.
    
    @type grid: int
    @param grid: (Optional) Points per axis of the scan; 0 disables the scan.
    
    @type tol: float
    @param tol: (Optional) Residual gradient tolerance, GHz/rad.
    
    @rtype: list of L{SweetSpot}
    """
    try:
        (c0, c1), (d0, d1) = region
    except (TypeError, ValueError):
        raise excep.InvalidParameterException("Region must be ((c_min, c_max), (d_min, d_max)), got %r." % (region,))
    if c1 - c0 < consts.TWO_PI - 1e-9 or d1 - d0 < consts.TWO_PI - 1e-9:
        raise excep.InvalidParameterException("Region %r does not span a full 2*pi x 2*pi cell." % (region,))
    seeds = _symmetry_seeds(region)
    if grid and grid >= 3:
        for p in _grid_seeds(params, region, int(grid), k, trunc, model, threads):
            if all(p.distance(s) > 0.2 for s in seeds):
                seeds.append(p)
    log.info("refining %d sweet-spot seeds", len(seeds))
    found = []
    for seed in seeds:
        flux, residual, unresolved, ok = _refine(params, seed, k, tol, step, trunc, model, threads)
        if not ok:
            warnings.warn(excep.SweetSpotWarning("Refinement from %r did not converge: residual %.3e GHz/rad at %r." % (seed, residual, flux)), stacklevel = 2)
            continue
        if not (c0 - 1e-6 <= flux.phi_c <= c1 + 1e-6 and d0 - 1e-6 <= flux.phi_d <= d1 + 1e-6):
            continue
        if any(flux.distance(s.flux) < consts.SWEET_SPOT_MERGE_RADIUS for s in found):
            continue
        spot = SweetSpot(flux, label_flux_point(flux), residual, unresolved)
        log.info("sweet spot %s at (%.6f, %.6f), residual %.2e", spot.label, flux.phi_c, flux.phi_d, residual)
        found.append(spot)
    return found

def hermite_functions(n, x, length):
    """
    Harmonic-oscillator eigenfunctions C{<x|m>} for C{m < n}, oscillator length C{length}.
    
    @rtype: numpy.ndarray
    @return: Array of shape C{(n, len(x))}.
    """
    u = np.asarray(x, dtype = float) / length
    out = np.zeros((n, u.size))
    out[0] = np.exp(-0.5 * u ** 2) / (math.pi ** 0.25 * math.sqrt(length))
    if n > 1:
        out[1] = math.sqrt(2.0) * u * out[0]
    for m in range(1, n - 1):
        out[m + 1] = math.sqrt(2.0 / (m + 1)) * u * out[m] - math.sqrt(m / (m + 1.0)) * out[m - 1]
    return out

def wavefunction(spec, state, extent = consts.WAVEFUNCTION_EXTENT, points = consts.WAVEFUNCTION_POINTS):
    """
    Real-space amplitude C{psi(phi, theta)} of a reduced-model eigenstate.
    
    @type spec: L{Spectrum}
    @param spec: Spectrum in a (phi, theta) basis.
    
    @type state: int
    @param state: Energy index, below C{spec.k}.
    
    @type extent: float
    @param extent: (Optional) Half-width of the square grid, radians.
    
    @type points: int
    @param points: (Optional) Samples per axis.
    
    @rtype: L{WavefunctionGrid}
    
    @raise InvalidParameterException: Grid spacing above a quarter of the smallest oscillator length.
    @raise BasisMismatchException: The spectrum is not in a (phi, theta) basis.
    """
    if spec.basis is None or spec.basis.modes != ("phi", "theta"):
        raise excep.BasisMismatchException("Wavefunctions need a (phi, theta) basis, got %r." % (None if spec.basis is None else spec.basis.modes,))
    if not 0 <= state < spec.k:
        raise excep.InvalidParameterException("State %d outside the %d computed states." % (state, spec.k))
    axis = np.linspace(-extent, extent, int(points))
    spacing = axis[1] - axis[0]
    if spacing > min(spec.basis.lengths) / 4.0:
        raise excep.InvalidParameterException("Grid spacing %.4g rad exceeds a quarter of the oscillator length %.4g rad." % (spacing, min(spec.basis.lengths)))
    (n_phi, n_theta), (l_phi, l_theta) = spec.basis.cutoffs, spec.basis.lengths
    coeffs = spec.vector(state).reshape(n_phi, n_theta)
    h_phi = hermite_functions(n_phi, axis, l_phi)
    h_theta = hermite_functions(n_theta, axis, l_theta)
    return WavefunctionGrid(axis, axis, h_phi.T @ coeffs @ h_theta, state)

def matrix_element(spec, op, i, j):
    """
    C{<i|op|j>} between eigenstates of a spectrum.
    
    @type spec: L{Spectrum}
    @param spec: Eigenstates.
    
    @type op: L{OperatorMatrix}
    @param op: Operator in the basis of C{spec}.
    
    @rtype: complex
    
    @raise BasisMismatchException: C{op} and C{spec} use different bases.
    """
    if spec.basis is None or not spec.basis.same_as(op.basis):
        raise excep.BasisMismatchException("Operator basis %r does not match the spectrum basis %r." % (op.basis, spec.basis))
    return complex(np.vdot(spec.vector(i), op.dot(spec.vector(j))))

def well_weights(grid):
    """
    Splits the probability of a wavefunction between wells displaced along theta
    (C{|theta| > |phi|}) and along phi (C{|phi| > |theta|}). Points on the diagonals
    count half to each.
    
    @rtype: dict
    @return: Keys "theta" and "phi"; they sum to the grid norm.
    """
    p, t = np.meshgrid(grid.phi, grid.theta, indexing = "ij")
    density = np.abs(grid.amplitude) ** 2 * grid.cell_area
    theta_side = np.where(np.abs(t) > np.abs(p), 1.0, np.where(np.abs(t) == np.abs(p), 0.5, 0.0))
    return {"theta": float(np.sum(density * theta_side)), "phi": float(np.sum(density * (1.0 - theta_side)))}

def site_amplitudes(grid, sites, radius = 0.5 * math.pi):
    """
    Integrated amplitude in disks around well centers.
    
    @type sites: dict
    @param sites: Site name to C{(phi, theta)} center.
    
    @rtype: dict
    @return: Site name to C{sum psi dphi dtheta} over the disk.
    """
    p, t = np.meshgrid(grid.phi, grid.theta, indexing = "ij")
    out = {}
    for name, (pc, tc) in sites.items():
        mask = (p - pc) ** 2 + (t - tc) ** 2 < radius ** 2
        out[name] = complex(np.sum(grid.amplitude[mask]) * grid.cell_area)
    return out

def classify_logical_states(spec, states = None, extent = consts.WAVEFUNCTION_EXTENT, points = consts.WAVEFUNCTION_POINTS):
    """
    Assigns the logical states by well occupancy.
    
    Each state is typed "theta" or "phi" by its larger L{well_weights} entry (ties go
    to "theta"). C{0_L} is the lowest state and C{1_L} the lowest state of the other
    type; if every state has the same type C{1_L} is state 1.
    
    @type spec: L{Spectrum}
    @param spec: Reduced-model spectrum.
    
    @type states: list of int
    @param states: (Optional) Candidate states, all computed states by default.
    
    @rtype: dict
    @return: Keys "0L", "1L" (energy indices), "types" and "weights" (per state).
    """
    states = list(range(spec.k)) if states is None else list(states)
    types = {}
    weights = {}
    for n in states:
        w = well_weights(wavefunction(spec, n, extent, points))
        weights[n] = w
        types[n] = "theta" if w["theta"] >= w["phi"] else "phi"
    zero = states[0]
    one = next((n for n in states[1:] if types[n] != types[zero]), states[1] if len(states) > 1 else zero)
    return {"0L": zero, "1L": one, "types": types, "weights": weights}
