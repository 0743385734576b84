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
Loss channels, golden-rule rates, flux dephasing and leakage dynamics.

Spectral densities follow the convention C{S(omega) ~ |coth(x/2) + 1|} with
C{x = hbar omega / k_B T}, so that C{S(omega)/S(-omega) = exp(x)} and every
rate is non-negative. Transition frequencies are C{omega_ij = omega_i - omega_j};
C{Gamma[i, j]} is the rate of transitions from state C{i} to state C{j} and
enters the master equation through the jump operator C{|j><i|}.

@group Noise spectra:
    thermal_factor, q_cap, q_ind, re_y_qp, s_cap, s_ind, s_qp

@group Rates:
    RateTable, channel_terms, golden_rule_rate, rate_table, state_rate, logical_rate,
    gamma2, flux_dephasing_rate, coherence_report

@group Dynamics:
    SubspaceSpec, DensityTrajectory, lindblad_evolve, subspace_probability,
    simulate_t1s, simulate_ramsey

@group Protocol fits:
    T1sFit, T2RsFit, fit_t1s, fit_t2rs
"""

__revision__ = "$Id$"

__all__ = [
           "thermal_factor", 
           "q_cap", 
           "q_ind", 
           "re_y_qp", 
           "s_cap", 
           "s_ind", 
           "s_qp", 
           "RateTable", 
           "channel_terms", 
           "golden_rule_rate", 
           "rate_table", 
           "state_rate", 
           "logical_rate", 
           "gamma2", 
           "flux_dephasing_rate", 
           "coherence_report", 
           "SubspaceSpec", 
           "DensityTrajectory", 
           "lindblad_evolve", 
           "subspace_probability", 
           "simulate_t1s", 
           "simulate_ramsey", 
           "T1sFit", 
           "T2RsFit", 
           "fit_t1s", 
           "fit_t2rs", 
           ]

import logging
import math
import warnings

import numpy as np
from scipy import integrate
from scipy import optimize
from scipy import special

from fluxmol import consts
from fluxmol import excep
from fluxmol import spectrum as spectrum_mod
from fluxmol import utils
from fluxmol.baseclasses import BaseRecord
from fluxmol.circuit import ModeOperators
from fluxmol.datatypes import BasisTruncation, CircuitParams, NoiseParams

log = logging.getLogger(__name__)

def _ghz_to_joule(energy):
    return consts.H * consts.GHZ * energy

def _ghz_to_omega(energy):
    return consts.TWO_PI * consts.GHZ * energy

def _check_omega(omega):
    omega = float(omega)
    if omega == 0.0 or not math.isfinite(omega):
        raise excep.InvalidParameterException("Spectral densities are undefined at omega = %r (diverging coth)." % omega)
    return omega

def thermal_factor(omega, temperature):
    """
    C{|coth(x/2) + 1| = 2/|1 - exp(-x)|} with C{x = hbar omega / k_B T}.
    
    @type omega: float
    @param omega: Angular frequency, rad/s, non-zero.
    
    @type temperature: float
    @param temperature: Bath temperature, K.
    
    @rtype: float
    """
    omega = _check_omega(omega)
    x = consts.HBAR * omega / (consts.K_B * temperature)
    return 2.0 / abs(math.expm1(-x))

def _k0_sinh(x):
    # K0(x) sinh(x) without overflow
    return special.k0e(x) * -math.expm1(-2.0 * x) / 2.0

def q_cap(omega, noise):
    """
    Dielectric quality factor C{Q_cap(|omega|) = q_cap_ref (2 pi 6 GHz / |omega|)^0.7}.
    """
    omega = _check_omega(omega)
    return noise.q_cap_ref * (consts.Q_CAP_REF_OMEGA / abs(omega)) ** consts.Q_CAP_EXPONENT

def q_ind(omega, noise):
    """
    Inductive quality factor, normalized to C{q_ind_ref} at 2 pi 0.5 GHz, with the
    frequency dependence C{1 / (K0(x) sinh(x))}, C{x = hbar |omega| / 2 k_B T}.
    """
    omega = _check_omega(omega)
    kt2 = 2.0 * consts.K_B * noise.temperature
    x_ref = consts.HBAR * consts.Q_IND_REF_OMEGA / kt2
    x = consts.HBAR * abs(omega) / kt2
    return noise.q_ind_ref * _k0_sinh(x_ref) / _k0_sinh(x)

def _pick(params, name, which):
    if which is None:
        return getattr(params, name)
    energies = params.junction_energies()
    key = "%s%s" % (name, which)
    if key not in energies:
        raise excep.InvalidParameterException("Unknown element %r for %s." % (which, name))
    return energies[key]

def re_y_qp(omega, params, noise, junction = None):
    """
    Real part of the quasiparticle admittance of one junction, Siemens.
    
    All fractional powers, C{K0} and C{sinh} are evaluated at C{|omega|}; the sign of
    C{omega * sinh} is even, so this is the magnitude of the signed expression.
    
    @type junction: int
    @param junction: (Optional) 1 or 2 to use the disordered junction energy.
    
    @raise ModelValidityException: C{hbar |omega| >= 2 Delta}.
    """
    omega = _check_omega(omega)
    gap = noise.gap_delta * consts.E_CHARGE
    energy = consts.HBAR * abs(omega)
    if energy >= 2.0 * gap:
        raise excep.ModelValidityException("Quasiparticle model invalid above the gap: hbar|omega| = %.3e J >= 2 Delta = %.3e J." % (energy, 2.0 * gap))
    e_j = _ghz_to_joule(_pick(params, "e_j", junction))
    x = energy / (2.0 * consts.K_B * noise.temperature)
    return (math.sqrt(2.0 / math.pi) * 8.0 * e_j / (consts.R_K * gap) * (2.0 * gap / energy) ** 1.5 
            * noise.x_qp * math.sqrt(x) * _k0_sinh(x))

def s_cap(omega, params, noise, junction = None):
    """
    Capacitive-loss spectral density C{hbar / (C_J Q_cap(|omega|)) |coth + 1|}.
    
    @type omega: float
    @param omega: Angular frequency, rad/s, non-zero.
    
    @type params: L{CircuitParams}
    @param params: Circuit energies; C{C_J = e^2 / 2 E_CJ}.
    
    @type noise: L{NoiseParams}
    @param noise: Bath parameters.
    
    @type junction: int
    @param junction: (Optional) 1 or 2 to use the disordered junction capacitance.
    
    @rtype: float
    """
    c_j = consts.E_CHARGE ** 2 / (2.0 * _ghz_to_joule(_pick(params, "e_cj", junction)))
    return consts.HBAR / (c_j * q_cap(omega, noise)) * thermal_factor(omega, noise.temperature)

def s_ind(omega, params, noise, inductor = None):
    """
    Inductive-loss spectral density C{hbar / (L Q_ind(|omega|)) |coth + 1|}, C{L = phi_0^2 / E_L}.
    
    @type inductor: int
    @param inductor: (Optional) 1 or 2 for a disordered loop inductor; the shunt uses C{E_L}.
    """
    inductance = consts.PHI0 ** 2 / _ghz_to_joule(_pick(params, "e_l", inductor))
    return consts.HBAR / (inductance * q_ind(omega, noise)) * thermal_factor(omega, noise.temperature)

def s_qp(omega, params, noise, junction = None):
    """
    Quasiparticle spectral density C{hbar omega Re(Y_qp) (coth + 1)}, positive for both signs of C{omega}.
    
    @raise ModelValidityException: C{hbar |omega| >= 2 Delta}.
    """
    return consts.HBAR * abs(omega) * re_y_qp(omega, params, noise, junction) * thermal_factor(omega, noise.temperature)

def _modes(spec):
    if spec.basis is None:
        raise excep.BasisMismatchException("The spectrum carries no basis descriptor.")
    return ModeOperators(spec.basis)

def channel_terms(spec, channel, params, noise):
    """
    Noise operators of a loss channel in the basis of C{spec}.
    
    @rtype: list of tuple
    @return: C{(name, operator, rate)} where C{operator} is the dimensionless part of
        C{G} and C{rate(omega)} is C{prefactor^2 S(omega) / hbar^2} in 1/s.
    """
    ops = _modes(spec)
    disordered = params.has_disorder()
    hb2 = consts.HBAR ** 2
    terms = []
    if channel == consts.CHANNEL_CAP:
        n_phi = ops.embed({"phi": ops.charge("phi")})
        n_theta = ops.embed({"theta": ops.charge("theta")})
        for junction, sign in ((1, 1.0), (2, -1.0)):
            which = junction if disordered else None
            rate = lambda w, which = which: consts.E_CHARGE ** 2 * s_cap(w, params, noise, which) / hb2
            terms.append(("n_phi%sn_theta" % ("+" if sign > 0 else "-"), n_phi + sign * n_theta, rate))
    elif channel == consts.CHANNEL_IND:
        phi = ops.embed({"phi": ops.position("phi")})
        theta = ops.embed({"theta": ops.position("theta")})
        zeta = ops.embed({"zeta": ops.position("zeta")}) if "zeta" in spec.basis.modes else None
        for inductor, sign in ((1, 1.0), (2, -1.0)):
            which = inductor if disordered else None
            op = sign * phi + theta
            if zeta is not None:
                op = op - zeta
            rate = lambda w, which = which: consts.PHI0 ** 2 * s_ind(w, params, noise, which) / hb2
            terms.append(("%sphi+theta-zeta" % ("+" if sign > 0 else "-"), op, rate))
        if zeta is not None:
            rate = lambda w: consts.PHI0 ** 2 * s_ind(w, params, noise) / hb2
            terms.append(("zeta", zeta, rate))
    elif channel == consts.CHANNEL_QP:
        if spec.flux is None:
            raise excep.InvalidParameterException("The quasiparticle channel needs the flux point of the spectrum.")
        a, b = spec.flux.phi_c, spec.flux.phi_d
        sin_a = ops.function("phi", lambda x: np.sin(0.5 * (x + a)))
        cos_a = ops.function("phi", lambda x: np.cos(0.5 * (x + a)))
        sin_b = ops.function("theta", lambda x: np.sin(0.5 * (x + b)))
        cos_b = ops.function("theta", lambda x: np.cos(0.5 * (x + b)))
        sa_cb = ops.embed({"phi": sin_a, "theta": cos_b})
        ca_sb = ops.embed({"phi": cos_a, "theta": sin_b})
        # junction 1 carries phi + theta, junction 2 carries phi - theta
        for junction, sign in ((1, 1.0), (2, -1.0)):
            which = junction if disordered else None
            rate = lambda w, which = which: (2.0 * consts.PHI0) ** 2 * s_qp(w, params, noise, which) / hb2
            terms.append(("sin((phi%stheta)/2)" % ("+" if sign > 0 else "-"), sa_cb + sign * ca_sb, rate))
    else:
        raise excep.InvalidParameterException("Unknown channel %r, expected one of %s." % (channel, ", ".join(consts.CHANNELS)))
    return terms

def _elements(spec, operator):
    v = spec.eigenvectors
    return v.conj().T @ (operator @ v)

def _channel_rates(spec, channel, params, noise):
    k = spec.k
    omega = _ghz_to_omega(spec.eigenvalues[:, None] - spec.eigenvalues[None, :])
    rates = np.zeros((k, k))
    unresolved = set()
    for name, op, rate in channel_terms(spec, channel, params, noise):
        elements = np.abs(_elements(spec, op)) ** 2
        for i in range(k):
            for j in range(k):
                if i == j:
                    continue
                if abs(spec.eigenvalues[i] - spec.eigenvalues[j]) < consts.DEGENERACY_TOL:
                    unresolved.add((min(i, j), max(i, j)))
                    continue
                rates[i, j] += elements[i, j] * rate(omega[i, j])
    return rates, unresolved

def _params_of(spec, params):
    params = params if params is not None else spec.params
    if not isinstance(params, CircuitParams):
        raise excep.InvalidParameterException("Circuit parameters are required, got %r." % (params,))
    return params

def golden_rule_rate(spec, i, j, channel, params = None, noise = None):
    """
    Golden-rule rate from eigenstate C{i} to C{j} through one loss channel.
    
    @type spec: L{Spectrum}
    @param spec: Eigenstates; C{i} and C{j} are energy indices.
    
    @type channel: str
    @param channel: "cap", "ind" or "qp".
    
    @type params: L{CircuitParams}
    @param params: (Optional) Circuit energies; those of C{spec} by default.
    
    @type noise: L{NoiseParams}
    @param noise: (Optional) Bath parameters; L{NoiseParams} defaults if omitted.
    
    @rtype: float
    @return: Rate in 1/s.
    
    @raise UnresolvedTransitionException: C{|E_i - E_j| < consts.DEGENERACY_TOL}.
    """
    params = _params_of(spec, params)
    noise = noise if noise is not None else NoiseParams()
    if i == j:
        raise excep.InvalidParameterException("Golden-rule rates need i != j.")
    if abs(spec.eigenvalues[i] - spec.eigenvalues[j]) < consts.DEGENERACY_TOL:
        raise excep.UnresolvedTransitionException("States %d and %d are degenerate within %g GHz." % (i, j, consts.DEGENERACY_TOL))
    omega = _ghz_to_omega(spec.eigenvalues[i] - spec.eigenvalues[j])
    total = 0.0
    for name, op, rate in channel_terms(spec, channel, params, noise):
        element = np.vdot(spec.vector(i), op @ spec.vector(j))
        total += abs(element) ** 2 * rate(omega)
    return float(total)

class RateTable(object):
    """Per-channel golden-rule rates between the lowest C{k} eigenstates."""

    def __init__(self, rates, spectrum = None, unresolved = ()):
        """
        @type rates: dict
        @param rates: Channel name to a C{k x k} array, C{rates[c][i, j]} from C{i} to C{j}, 1/s.
        
        @type spectrum: L{Spectrum}
        @param spectrum: (Optional) The spectrum the rates were computed from.
        
        @type unresolved: iterable
        @param unresolved: (Optional) Pairs left at zero because they are degenerate.
        
        @raise InvalidParameterException: Negative entries, non-zero diagonal or mismatched shapes.
        """
        self.rates = {}
        k = None
        for channel, matrix in rates.items():
            matrix = np.array(matrix, dtype = float)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise excep.InvalidParameterException("Rate matrix for %r must be square." % channel)
            if k is not None and matrix.shape[0] != k:
                raise excep.InvalidParameterException("Rate matrices have different sizes.")
            k = matrix.shape[0]
            if np.any(matrix < 0):
                raise excep.InvalidParameterException("Rates must be non-negative (channel %r)." % channel)
            if np.any(np.diag(matrix) != 0):
                raise excep.InvalidParameterException("Rate matrix diagonal must be zero (channel %r)." % channel)
            matrix.flags.writeable = False
            self.rates[channel] = matrix
        if k is None:
            raise excep.InvalidParameterException("A rate table needs at least one channel.")
        self.k = k
        self.spectrum = spectrum
        self.unresolved = tuple(sorted(unresolved))

    def __repr__(self):
        return "<RateTable k=%d channels=%s>" % (self.k, sorted(self.rates))

    @property
    def channels(self):
        return tuple(self.rates)

    def total(self):
        """
        @rtype: numpy.ndarray
        @return: Sum over channels.
        """
        return sum(self.rates.values())

    def channel(self, name):
        return self.rates.get(name, np.zeros((self.k, self.k)))

    def to_dict(self):
        return {"k": self.k, "rates_per_s": dict((c, m) for c, m in self.rates.items()), 
                "unresolved": [list(p) for p in self.unresolved]}

def rate_table(spec, params = None, noise = None, channels = consts.CHANNELS, threads = 1):
    """
    Golden-rule rates among all computed eigenstates of C{spec}.
    
    Degenerate pairs are left at zero and listed in C{unresolved}. The quasiparticle
    channel is skipped with a L{RegimeWarning} when a transition lies above the gap.
    
    @type threads: int
    @param threads: (Optional) Worker threads; channels are computed concurrently.
    
    @rtype: L{RateTable}
    """
    params = _params_of(spec, params)
    noise = noise if noise is not None else NoiseParams()

    def work(channel):
        try:
            return channel, _channel_rates(spec, channel, params, noise)
        except excep.ModelValidityException as e:
            warnings.warn(excep.RegimeWarning("Channel %s skipped: %s" % (channel, e)), stacklevel = 3)
            return channel, None

    results = utils.parallel_map(work, channels, threads)
    rates = {}
    unresolved = set()
    for channel, result in results:
        if result is None:
            continue
        rates[channel], pairs = result
        unresolved |= pairs
    log.debug("rate table over %d states, channels %s", spec.k, sorted(rates))
    return RateTable(rates, spec, unresolved)

def state_rate(table, n, channel = None):
    """
    C{Gamma_1,n = sum_{j != n} Gamma[n, j]}, over all channels or one.
    
    @rtype: float
    """
    m = table.total() if channel is None else table.channel(channel)
    return float(np.sum(m[n]) - m[n, n])

def logical_rate(table, i_l, j_l, channel = None):
    """
    C{Gamma_1,L = Gamma[i_L, j_L] + Gamma[j_L, i_L]}: transitions between the two logical states only.
    
    @rtype: float
    """
    m = table.total() if channel is None else table.channel(channel)
    return float(m[i_l, j_l] + m[j_l, i_l])

def gamma2(table, i_l, j_l):
    """
    Depolarization-induced dephasing rate of the logical pair,
    C{(Gamma_1,i_L + Gamma_1,j_L) / 2}, leakage included.
    
    @rtype: float
    """
    return 0.5 * (state_rate(table, i_l) + state_rate(table, j_l))

def _truncation_of(spec):
    cutoffs = dict(zip(spec.basis.modes, spec.basis.cutoffs))
    return BasisTruncation(cutoffs["phi"], cutoffs["theta"], cutoffs.get("zeta", consts.DEFAULT_N_ZETA))

def flux_dephasing_rate(spec, params, i, j, noise = None, step = consts.FD_STEP):
    """
    First-order 1/f flux dephasing rate between states C{i} and C{j},
    C{sum_lambda A_lambda sqrt(|ln 2 omega_ir t|) |d omega_ij / d lambda|} over the common
    and differential fluxes.
    
    @rtype: float
    @return: Rate in 1/s.
    
    @raise UnresolvedTransitionException: The transition is degenerate.
    """
    noise = noise if noise is not None else NoiseParams()
    params = _params_of(spec, params)
    product = 2.0 * noise.omega_ir * noise.ramsey_time
    if product >= 1.0:
        warnings.warn(excep.RegimeWarning("omega_ir * t = %.3g >= 1/2; the logarithm changes sign." % (product / 2.0)), stacklevel = 2)
    disp = spectrum_mod.flux_dispersion(params, spec.flux, i, j, step, _truncation_of(spec), spec.model or "reduced")
    if disp.unresolved:
        raise excep.UnresolvedTransitionException("Transition %d-%d is unresolved (splitting %.3e GHz)." % (i, j, disp.splitting))
    factor = math.sqrt(abs(math.log(product)))
    g_c, g_d = (_ghz_to_omega(abs(g)) for g in disp.gradient)
    return float(factor * (noise.flux_noise_amp_c * g_c + noise.flux_noise_amp_d * g_d))

class SubspaceSpec(BaseRecord):
    """Eigenstates spanning a readout subspace."""

    def __init__(self, indices):
        BaseRecord.__init__(self)
        self.indices = tuple(sorted(set(int(i) for i in indices)))
        self._attrsList = ["indices"]
        self.validate()
        self._freeze()

    def validate(self):
        """
        @raise InvalidParameterException: Empty subspace or negative index.
        """
        if not self.indices:
            raise excep.InvalidParameterException("A subspace needs at least one state.")
        if self.indices[0] < 0:
            raise excep.InvalidParameterException("Subspace indices must be non-negative, got %r." % (self.indices,))

    def check(self, k):
        if self.indices[-1] >= k:
            raise excep.InvalidParameterException("Subspace %r exceeds the %d-state space." % (self.indices, k))

class DensityTrajectory(object):
    """Density matrices at a sequence of times, in the eigenbasis."""

    def __init__(self, times, states):
        """
        @type times: numpy.ndarray
        @param times: Times, s.
        
        @type states: numpy.ndarray
        @param states: Array of shape C{(len(times), k, k)}.
        """
        self.times = np.asarray(times, dtype = float)
        self.states = np.asarray(states)
        self.times.flags.writeable = False
        self.states.flags.writeable = False

    def __len__(self):
        return self.times.size

    @property
    def k(self):
        return self.states.shape[1]

    def populations(self):
        """
        @rtype: numpy.ndarray
        @return: Diagonals, shape C{(len(times), k)}.
        """
        return np.real(np.diagonal(self.states, axis1 = 1, axis2 = 2))

    def coherence(self, a, b):
        return self.states[:, a, b]

    def trace_error(self):
        return float(np.max(np.abs(np.trace(self.states, axis1 = 1, axis2 = 2) - 1.0)))

    def hermiticity_error(self):
        return float(np.max(np.abs(self.states - np.conj(np.transpose(self.states, (0, 2, 1))))))

    def min_eigenvalue(self):
        return float(min(np.linalg.eigvalsh(0.5 * (r + r.conj().T)).min() for r in self.states))

def _energies(h_diag):
    if hasattr(h_diag, "eigenvalues"):
        return np.asarray(h_diag.eigenvalues, dtype = float)
    h = np.asarray(h_diag)
    if h.ndim == 1:
        return h.astype(float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise excep.InvalidParameterException("Eigenbasis Hamiltonian must be a vector of energies or a square matrix.")
    if np.max(np.abs(h - np.diag(np.diag(h))), initial = 0.0) > 0.0:
        raise excep.InvalidParameterException("The master equation is integrated in the eigenbasis; H must be diagonal.")
    return np.real(np.diag(h)).astype(float)

def _check_density(rho, k):
    rho = np.asarray(rho, dtype = complex)
    if rho.shape != (k, k):
        raise excep.InvalidParameterException("Initial state has shape %r, expected (%d, %d)." % (rho.shape, k, k))
    if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
        raise excep.InvalidParameterException("Initial state is not Hermitian.")
    if abs(np.trace(rho).real - 1.0) > 1e-10:
        raise excep.InvalidParameterException("Initial state has trace %r." % np.trace(rho).real)
    if np.linalg.eigvalsh(rho).min() < -1e-10:
        raise excep.InvalidParameterException("Initial state is not positive semidefinite.")
    return rho

def lindblad_evolve(h_diag, table, rho0, times, method = "DOP853", rtol = consts.LINDBLAD_RTOL, atol = consts.LINDBLAD_ATOL):
    """
    Integrates C{d rho/dt = -i[H, rho] + sum_{i != j} Gamma[i, j] D[|j><i|] rho}.
    
    The dissipator commutes with the rotation generated by a diagonal C{H}, so the
    equation is integrated in the interaction frame and rotated back at the output times.
    
    @type h_diag: numpy.ndarray or L{Spectrum}
    @param h_diag: Energies (GHz), a diagonal matrix, or a spectrum.
    
    @type table: L{RateTable} or numpy.ndarray
    @param table: Rates over the same C{k} states, 1/s.
    
    @type rho0: numpy.ndarray
    @param rho0: Initial density matrix at C{t = 0}.
    
    @type times: numpy.ndarray
    @param times: Non-negative, ascending output times, s.
    
    @rtype: L{DensityTrajectory}
    
    @raise ConvergenceException: The integrator failed.
    """
    energies = _energies(h_diag)
    rates = table.total() if isinstance(table, RateTable) else np.asarray(table, dtype = float)
    k = energies.size
    if rates.shape != (k, k):
        raise excep.InvalidParameterException("Rate table is %r but the Hamiltonian has %d states." % (rates.shape, k))
    rates = rates - np.diag(np.diag(rates))
    rho0 = _check_density(rho0, k)
    times = np.asarray(times, dtype = float)
    if times.ndim != 1 or times.size == 0 or times[0] < 0 or np.any(np.diff(times) < 0):
        raise excep.InvalidParameterException("Times must be a non-empty, ascending, non-negative sequence.")

    out_rate = rates.sum(axis = 1)
    damping = 0.5 * (out_rate[:, None] + out_rate[None, :])

    def rhs(t, y):
        rho = (y[:k * k] + 1j * y[k * k:]).reshape(k, k)
        drho = -damping * rho
        drho[np.diag_indices(k)] += rates.T @ np.real(np.diag(rho))
        d = drho.ravel()
        return np.concatenate([d.real, d.imag])

    y0 = np.concatenate([rho0.ravel().real, rho0.ravel().imag])
    t_end = times[-1]
    if t_end == 0.0:
        states = np.repeat(rho0[None], times.size, axis = 0)
    else:
        sol = integrate.solve_ivp(rhs, (0.0, t_end), y0, method = method, t_eval = times, rtol = rtol, atol = atol)
        if not sol.success:
            raise excep.ConvergenceException("Master-equation integration failed: %s" % sol.message)
        y = sol.y.T
        states = (y[:, :k * k] + 1j * y[:, k * k:]).reshape(-1, k, k)
    omega = _ghz_to_omega(energies)
    phase = np.exp(-1j * (omega[None, :, None] - omega[None, None, :]) * times[:, None, None])
    states = states * phase
    log.debug("integrated %d-state master equation to t = %.3g s", k, t_end)
    return DensityTrajectory(times, states)

def subspace_probability(traj, g):
    """
    C{P_G(t) = sum_{i in G} <i|rho(t)|i>}.
    
    @type traj: L{DensityTrajectory}
    @param traj: Trajectory in the eigenbasis.
    
    @type g: L{SubspaceSpec}
    @param g: Subspace.
    
    @rtype: numpy.ndarray
    """
    if not isinstance(g, SubspaceSpec):
        g = SubspaceSpec(g)
    g.check(traj.k)
    return traj.populations()[:, list(g.indices)].sum(axis = 1)

class T1sFit(BaseRecord):
    """Result of a C{A + B exp(-t/T1s)} fit."""

    def __init__(self, t1s, a, b, t1s_err = float("nan")):
        BaseRecord.__init__(self)
        self.t1s = float(t1s)
        self.a = float(a)
        self.b = float(b)
        self.t1s_err = float(t1s_err)
        self._attrsList = ["t1s", "a", "b", "t1s_err"]
        self._freeze()

    def validate(self):
        pass

    def model(self, t):
        return self.a + self.b * np.exp(-np.asarray(t) / self.t1s)

class T2RsFit(BaseRecord):
    """Result of a C{A + B exp(-t/T2Rs) cos(2 pi f t + phase)} fit."""

    def __init__(self, t2rs, a, b, frequency, phase, envelope_only = False, t2rs_err = float("nan")):
        BaseRecord.__init__(self)
        self.t2rs = float(t2rs)
        self.a = float(a)
        self.b = float(b)
        self.frequency = float(frequency)
        self.phase = float(phase)
        self.envelope_only = bool(envelope_only)
        self.t2rs_err = float(t2rs_err)
        self._attrsList = ["t2rs", "a", "b", "frequency", "phase", "envelope_only", "t2rs_err"]
        self._freeze()

    def validate(self):
        pass

    def model(self, t):
        t = np.asarray(t)
        return self.a + self.b * np.exp(-t / self.t2rs) * np.cos(consts.TWO_PI * self.frequency * t + self.phase)

def _series(times, series):
    t = np.asarray(times, dtype = float)
    y = np.asarray(series, dtype = float)
    if t.shape != y.shape or t.ndim != 1 or t.size < 3:
        raise excep.InvalidParameterException("Times and series must be equal-length 1-D arrays with at least 3 samples.")
    return t, y

def _advise(t, tau, what):
    if t.size < 10 or (t[-1] - t[0]) < 2.0 * tau:
        warnings.warn(excep.FitWarning("%s fit uses %d samples spanning %.3g s for a %.3g s decay; at least 10 samples over 2 decay constants are advised." 
                      % (what, t.size, t[-1] - t[0], tau)), stacklevel = 3)

def _exp_fit(t, y):
    span = t[-1] - t[0]
    a0 = y[-1]
    b0 = y[0] - y[-1]
    target = a0 + b0 / math.e
    crossed = np.nonzero((y - target) * np.sign(b0 or 1.0) <= 0)[0]
    tau0 = (t[crossed[0]] - t[0]) if crossed.size and t[crossed[0]] > t[0] else span / 3.0
    s = t - t[0]

    def model(x, a, b, rate):
        return a + b * np.exp(-rate * x / span)

    try:
        popt, pcov = optimize.curve_fit(model, s, y, p0 = [a0, b0, span / tau0], maxfev = 20000)
    except (RuntimeError, ValueError) as e:
        raise excep.ConvergenceException("Exponential fit did not converge: %s" % e)
    a, b, rate = popt
    if rate <= 0:
        raise excep.ConvergenceException("Fitted decay time is negative (rate %.3g)." % rate)
    tau = span / rate
    # move the amplitude back to t = 0
    b = b * math.exp(t[0] / tau)
    err = tau * math.sqrt(abs(pcov[2, 2])) / rate if np.all(np.isfinite(pcov)) else float("nan")
    return a, b, tau, err

def fit_t1s(times, series):
    """
    Fits C{A + B exp(-t/T1s)} by nonlinear least squares.
    
    @type times: numpy.ndarray
    @param times: Sample times, s.
    
    @type series: numpy.ndarray
    @param series: Subspace probabilities.
    
    @rtype: L{T1sFit}
    
    @raise ConvergenceException: The fit failed or returned a negative time.
    """
    t, y = _series(times, series)
    a, b, tau, err = _exp_fit(t, y)
    _advise(t, tau, "T1s")
    log.info("T1s fit: %.4g s", tau)
    return T1sFit(tau, a, b, err)

def _fft_guess(t, y):
    dt = np.diff(t)
    if not np.allclose(dt, dt[0], rtol = 1e-6, atol = 0.0):
        grid = np.linspace(t[0], t[-1], t.size)
        y = np.interp(grid, t, y)
        dt = np.diff(grid)
    spectrum = np.abs(np.fft.rfft(y - y.mean()))
    freqs = np.fft.rfftfreq(y.size, dt[0])
    if spectrum.size < 3:
        return None
    peak = 1 + int(np.argmax(spectrum[1:]))
    if spectrum[peak] < 3.0 * np.median(spectrum[1:]) or freqs[peak] * (t[-1] - t[0]) < 1.0:
        return None
    return freqs[peak]

def fit_t2rs(times, series):
    """
    Fits C{A + B exp(-t/T2Rs) cos(2 pi f t + phase)}.
    
    The starting frequency comes from the largest non-zero FFT component. If no
    oscillation is resolved (less than one period in the window or no clear peak),
    only the envelope C{A + B exp(-t/T2Rs)} is fitted and C{envelope_only} is set.
    
    @rtype: L{T2RsFit}
    
    @raise ConvergenceException: The fit failed or returned a negative time.
    """
    t, y = _series(times, series)
    f0 = _fft_guess(t, y)
    if f0 is None:
        warnings.warn(excep.FitWarning("No oscillation resolved; fitting the envelope only."), stacklevel = 2)
        a, b, tau, err = _exp_fit(t, y)
        return T2RsFit(tau, a, b, 0.0, 0.0, True, err)
    span = t[-1] - t[0]
    s = (t - t[0]) / span

    def model(x, a, b, rate, f, phase):
        return a + b * np.exp(-rate * x) * np.cos(consts.TWO_PI * f * x + phase)

    a0 = y.mean()
    b0 = 0.5 * (y.max() - y.min())
    phase0 = 0.0 if y[0] >= a0 else math.pi
    try:
        popt, pcov = optimize.curve_fit(model, s, y, p0 = [a0, b0, 3.0, f0 * span, phase0], maxfev = 40000)
    except (RuntimeError, ValueError) as e:
        raise excep.ConvergenceException("Ramsey fit did not converge: %s" % e)
    a, b, rate, f, phase = popt
    if rate <= 0:
        raise excep.ConvergenceException("Fitted Ramsey decay time is negative (rate %.3g)." % rate)
    if f < 0:
        f, phase = -f, -phase
    if b < 0:
        b, phase = -b, phase + math.pi
    tau = span / rate
    frequency = f / span
    # phase and amplitude referred to t = 0
    phase = phase - consts.TWO_PI * frequency * t[0]
    b = b * math.exp(t[0] / tau)
    phase = (phase + math.pi) % consts.TWO_PI - math.pi
    err = tau * math.sqrt(abs(pcov[2, 2])) / rate if np.all(np.isfinite(pcov)) else float("nan")
    _advise(t, tau, "T2Rs")
    log.info("T2Rs fit: %.4g s at %.4g Hz", tau, frequency)
    return T2RsFit(tau, a, b, frequency, phase, False, err)

def simulate_t1s(h_diag, table, initial, subspace, times):
    """
    Subspace relaxation protocol: start in eigenstate C{initial}, record C{P_G(t)}
    and fit C{A + B exp(-t/T1s)}.
    
    @type initial: int
    @param initial: Prepared eigenstate.
    
    @type subspace: L{SubspaceSpec}
    @param subspace: States indistinguishable from C{initial} at readout.
    
    @rtype: tuple
    @return: C{(DensityTrajectory, P_G series, T1sFit)}.
    """
    k = _energies(h_diag).size
    rho0 = np.zeros((k, k), dtype = complex)
    rho0[initial, initial] = 1.0
    traj = lindblad_evolve(h_diag, table, rho0, times)
    series = subspace_probability(traj, subspace)
    return traj, series, fit_t1s(times, series)

def simulate_ramsey(h_diag, table, logical, subspace, times, detuning):
    """
    Subspace Ramsey protocol with ideal instantaneous pulses.
    
    The state C{(|0_L> + |1_L>)/sqrt(2)} evolves freely; at each time an ideal pulse,
    phased to rotate at the logical frequency plus C{detuning}, maps it back
    toward C{|0_L>}, and C{P_G} of the readout subspace is recorded.
    
    @type logical: tuple
    @param logical: Energy indices C{(0_L, 1_L)}.
    
    @type subspace: L{SubspaceSpec}
    @param subspace: Readout subspace containing C{0_L}.
    
    @type detuning: float
    @param detuning: Frame detuning, Hz.
    
    @rtype: tuple
    @return: C{(DensityTrajectory, P_G series, T2RsFit)}.
    """
    energies = _energies(h_diag)
    k = energies.size
    zero, one = logical
    psi = np.zeros(k, dtype = complex)
    psi[zero] = psi[one] = 1.0 / math.sqrt(2.0)
    traj = lindblad_evolve(h_diag, table, np.outer(psi, psi.conj()), times)
    if not isinstance(subspace, SubspaceSpec):
        subspace = SubspaceSpec(subspace)
    subspace.check(k)
    omega_l = _ghz_to_omega(energies[one] - energies[zero])
    series = np.empty(len(traj))
    for n, (t, rho) in enumerate(zip(traj.times, traj.states)):
        chi = -(omega_l + consts.TWO_PI * detuning) * t
        u = np.eye(k, dtype = complex)
        u[zero, zero] = u[one, one] = 1.0 / math.sqrt(2.0)
        u[zero, one] = np.exp(-1j * chi) / math.sqrt(2.0)
        u[one, zero] = -np.exp(1j * chi) / math.sqrt(2.0)
        measured = u @ rho @ u.conj().T
        series[n] = np.real(np.trace(measured[np.ix_(subspace.indices, subspace.indices)]))
    return traj, series, fit_t2rs(times, series)

def coherence_report(spec, params = None, noise = None, logical = None, dephasing = True, threads = 1, table = None):
    """
    Per-state relaxation budget, logical rates and dephasing at one flux point.
    
    @type spec: L{Spectrum}
    @param spec: Spectrum at the operating point (lowest C{k} states).
    
    @type logical: tuple
    @param logical: (Optional) Energy indices C{(0_L, 1_L)}; assigned by well occupancy for
        reduced spectra and C{(0, 1)} otherwise.
    
    @type dephasing: bool
    @param dephasing: (Optional) Include first-order flux dephasing of the logical transition.
    
    @type table: L{RateTable}
    @param table: (Optional) Rates of C{spec} computed earlier; built with L{rate_table} if omitted.
    
    @rtype: dict
    """
    params = _params_of(spec, params)
    noise = noise if noise is not None else NoiseParams()
    if logical is None:
        if spec.basis is not None and spec.basis.modes == ("phi", "theta"):
            labels = spectrum_mod.classify_logical_states(spec)
            logical = (labels["0L"], labels["1L"])
        else:
            logical = (0, 1)
    if table is None:
        table = rate_table(spec, params, noise, threads = threads)
    elif table.k != spec.k:
        raise excep.InvalidParameterException("Rate table has %d states but the spectrum has %d." % (table.k, spec.k))
    states = []
    for n in range(table.k):
        per_channel = dict((c, state_rate(table, n, c)) for c in table.channels)
        total = state_rate(table, n)
        row = table.total()[n].copy()
        row[n] = -1.0
        dominant_channel = max(per_channel, key = per_channel.get) if total > 0 else None
        dominant_destination = int(np.argmax(row)) if total > 0 else None
        states.append({
            "state": n,
            "energy_GHz": float(spec.eigenvalues[n]),
            "gamma1_per_s": total,
            "t1_s": 1.0 / total if total > 0 else float("inf"),
            "channels_per_s": per_channel,
            "destinations_per_s": dict((int(j), float(table.total()[n, j])) for j in range(table.k) if j != n),
            "dominant_channel": dominant_channel,
            "dominant_destination": dominant_destination,
        })
    i_l, j_l = logical
    gamma_l = logical_rate(table, i_l, j_l)
    report = {
        "flux": spec.flux.to_dict() if spec.flux is not None else None,
        "states": states,
        "logical": {
            "states": [int(i_l), int(j_l)],
            "gamma1_per_s": gamma_l,
            "t1_s": 1.0 / gamma_l if gamma_l > 0 else float("inf"),
            "channels_per_s": dict((c, logical_rate(table, i_l, j_l, c)) for c in table.channels),
        },
        "gamma2_per_s": gamma2(table, i_l, j_l),
        "unresolved": [list(p) for p in table.unresolved],
    }
    if dephasing and spec.flux is not None:
        try:
            report["flux_dephasing_per_s"] = flux_dephasing_rate(spec, params, i_l, j_l, noise)
        except excep.UnresolvedTransitionException as e:
            log.warning("flux dephasing skipped: %s", e)
            report["flux_dephasing_per_s"] = None
    return report
