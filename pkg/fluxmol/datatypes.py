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
Value types shared by the modules of the library.

@group Circuit:
    CircuitParams, FluxPoint, BasisTruncation, BasisDescriptor, OperatorMatrix

@group Noise:
    NoiseParams

@group Hopping model:
    HoppingParams

@group Calibration and fitting:
    FluxCalibration, TwoTonePeak, TwoToneDataset
"""

__revision__ = "$Id$"

__all__ = [
           "CircuitParams", 
           "FluxPoint", 
           "BasisTruncation", 
           "BasisDescriptor", 
           "OperatorMatrix", 
           "NoiseParams", 
           "HoppingParams", 
           "FluxCalibration", 
           "TwoTonePeak", 
           "TwoToneDataset", 
           ]

import math
import warnings

import numpy as np
from scipy import sparse

from fluxmol import consts
from fluxmol import excep
from fluxmol import utils
from fluxmol.baseclasses import BaseRecord

def _finite(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise excep.InvalidParameterException("%s must be a real number, got %r." % (name, value))
    if not math.isfinite(value):
        raise excep.InvalidParameterException("%s must be finite, got %r." % (name, value))
    return value

class CircuitParams(BaseRecord):
    """Circuit energies of the fluxonium molecule."""
    _jsonKeys = {
        "e_j": "EJ_GHz",
        "e_l": "EL_GHz",
        "e_ls": "ELs_GHz",
        "e_cj": "ECJ_GHz",
        "e_c": "EC_GHz",
        "d_cj": "dCJ",
        "d_l": "dL",
        "d_ej": "dEJ",
    }

    def __init__(self, e_j, e_l, e_ls, e_cj, e_c, d_cj = 0.0, d_l = 0.0, d_ej = 0.0):
        """
        All energies are E/h in GHz. Disorder fractions follow C{C_J1 = C_J(1 - d_cj)},
        C{C_J2 = C_J(1 + d_cj)} and likewise for the inductors and junction energies.
        
        @type e_j: float
        @param e_j: Josephson energy of each junction.
        
        @type e_l: float
        @param e_l: Inductive energy of each loop superinductor.
        
        @type e_ls: float
        @param e_ls: Inductive energy of the shared shunt superinductor.
        
        @type e_cj: float
        @param e_cj: Charging energy of each junction.
        
        @type e_c: float
        @param e_c: Charging energy of the residual capacitance between nodes 1 and 3.
        
        @type d_cj: float
        @param d_cj: (Optional) Junction capacitance disorder, in (-1, 1).
        
        @type d_l: float
        @param d_l: (Optional) Loop inductance disorder, in (-1, 1).
        
        @type d_ej: float
        @param d_ej: (Optional) Josephson energy disorder, in (-1, 1).
        
        @raise InvalidParameterException: An energy is not strictly positive or a disorder fraction is out of range.
        """
        BaseRecord.__init__(self)
        self.e_j = _finite("e_j", e_j)
        self.e_l = _finite("e_l", e_l)
        self.e_ls = _finite("e_ls", e_ls)
        self.e_cj = _finite("e_cj", e_cj)
        self.e_c = _finite("e_c", e_c)
        self.d_cj = _finite("d_cj", d_cj)
        self.d_l = _finite("d_l", d_l)
        self.d_ej = _finite("d_ej", d_ej)
        self._attrsList = ["e_j", "e_l", "e_ls", "e_cj", "e_c", "d_cj", "d_l", "d_ej"]
        self.validate()
        self._freeze()

    def validate(self):
        """
        @raise InvalidParameterException: If an invariant does not hold.
        """
        for name in ("e_j", "e_l", "e_ls", "e_cj", "e_c"):
            if getattr(self, name) <= 0:
                raise excep.InvalidParameterException("%s must be strictly positive, got %r GHz." % (name, getattr(self, name)))
        for name in ("d_cj", "d_l", "d_ej"):
            if not -1.0 < getattr(self, name) < 1.0:
                raise excep.InvalidParameterException("%s must lie in (-1, 1), got %r." % (name, getattr(self, name)))

    @classmethod
    def from_preset(cls, name, **overrides):
        """
        Returns the parameters of a named device.
        
        @type name: str
        @param name: One of the keys of L{consts.DEVICES} ("fig2", "device1" ... "device4").
        
        @rtype: L{CircuitParams}
        
        @raise InvalidParameterException: Unknown preset.
        """
        try:
            d = dict(consts.DEVICES[name.lower()])
        except KeyError:
            raise excep.InvalidParameterException("Unknown circuit preset %r. Known presets: %s." % (name, ", ".join(sorted(consts.DEVICES))))
        params = cls.from_dict(d)
        if overrides:
            params = params.replace(**overrides)
        return params

    def is_protomon_regime(self):
        """
        Advisory regime flag: E_L much smaller than E_J (ratio below 0.2) and E_CJ < E_J.
        
        @rtype: bool
        """
        return self.e_l / self.e_j < consts.PROTOMON_EL_EJ_RATIO and self.e_cj < self.e_j

    def has_disorder(self):
        """
        @rtype: bool
        @return: C{True} if any disorder fraction is non-zero.
        """
        return self.d_cj != 0.0 or self.d_l != 0.0 or self.d_ej != 0.0

    def symmetric(self):
        """
        @rtype: L{CircuitParams}
        @return: The same energies with all disorder fractions set to zero.
        """
        return self.replace(d_cj = 0.0, d_l = 0.0, d_ej = 0.0)

    def energies(self):
        """
        @rtype: numpy.ndarray
        @return: The five energies in the order (e_j, e_l, e_ls, e_cj, e_c).
        """
        return np.array([self.e_j, self.e_l, self.e_ls, self.e_cj, self.e_c])

    def junction_energies(self):
        """
        Per-element energies of the two loops.
        
        Capacitances and inductances enter the energies inversely, so
        C{E_CJ1 = E_CJ/(1 - dC_J)} and C{E_L1 = E_L/(1 - dL)}, while
        C{E_J1 = E_J(1 - dE_J)}.
        
        @rtype: dict
        @return: Keys e_cj1, e_cj2, e_j1, e_j2, e_l1, e_l2 (GHz).
        """
        return {
            "e_cj1": self.e_cj / (1.0 - self.d_cj),
            "e_cj2": self.e_cj / (1.0 + self.d_cj),
            "e_j1": self.e_j * (1.0 - self.d_ej),
            "e_j2": self.e_j * (1.0 + self.d_ej),
            "e_l1": self.e_l / (1.0 - self.d_l),
            "e_l2": self.e_l / (1.0 + self.d_l),
        }

class FluxPoint(BaseRecord):
    """Reduced common and differential external fluxes, in radians."""
    _jsonKeys = {"phi_c": "phi_c_rad", "phi_d": "phi_d_rad"}

    def __init__(self, phi_c, phi_d):
        """
        Fluxes are 2*pi periodic but are stored unwrapped.
        
        @type phi_c: float
        @param phi_c: Common flux C{(Phi_1 + Phi_2)/(2 phi_0)}.
        
        @type phi_d: float
        @param phi_d: Differential flux C{(Phi_1 - Phi_2)/(2 phi_0)}.
        """
        BaseRecord.__init__(self)
        self.phi_c = _finite("phi_c", phi_c)
        self.phi_d = _finite("phi_d", phi_d)
        self._attrsList = ["phi_c", "phi_d"]
        self._freeze()

    def validate(self):
        pass

    @classmethod
    def coerce(cls, value):
        """
        @type value: L{FluxPoint} or sequence of two floats
        @param value: A flux point or a C{(phi_c, phi_d)} pair in radians.
        
        @rtype: L{FluxPoint}
        """
        if isinstance(value, cls):
            return value
        try:
            phi_c, phi_d = value
        except (TypeError, ValueError):
            raise excep.InvalidParameterException("Expected a FluxPoint or a (phi_c, phi_d) pair, got %r." % (value,))
        return cls(phi_c, phi_d)

    def __iter__(self):
        return iter((self.phi_c, self.phi_d))

    def as_array(self):
        return np.array([self.phi_c, self.phi_d])

    def inverted(self):
        """
        @rtype: L{FluxPoint}
        @return: The point C{(-phi_c, -phi_d)}.
        """
        return FluxPoint(-self.phi_c, -self.phi_d)

    def shifted(self, d_c = 0.0, d_d = 0.0):
        """
        @rtype: L{FluxPoint}
        @return: The point displaced by C{(d_c, d_d)}.
        """
        return FluxPoint(self.phi_c + d_c, self.phi_d + d_d)

    def distance(self, other, periodic = True):
        """
        Euclidean distance to another point, optionally modulo 2*pi in each axis.
        
        @type other: L{FluxPoint}
        @param other: The other point.
        
        @type periodic: bool
        @param periodic: (Optional) If C{True}, distances are taken on the 2*pi torus.
        
        @rtype: float
        """
        diff = self.as_array() - other.as_array()
        if periodic:
            diff = (diff + math.pi) % consts.TWO_PI - math.pi
        return float(np.hypot(diff[0], diff[1]))

class BasisTruncation(BaseRecord):
    """Oscillator cutoffs of the product basis."""

    def __init__(self, n_phi = consts.DEFAULT_N_PHI, n_theta = consts.DEFAULT_N_THETA, n_zeta = consts.DEFAULT_N_ZETA, memory_guard = consts.MEMORY_GUARD):
        """
        @type n_phi: int
        @param n_phi: (Optional) Oscillator levels kept for the phi mode.
        
        @type n_theta: int
        @param n_theta: (Optional) Oscillator levels kept for the theta mode.
        
        @type n_zeta: int
        @param n_zeta: (Optional) Oscillator levels kept for the zeta mode. Ignored by the reduced model.
        
        @type memory_guard: int
        @param memory_guard: (Optional) Largest allowed number of product basis states.
        
        @raise TruncationException: A cutoff is below L{consts.MIN_CUTOFF}.
        @raise MemoryGuardException: The full product basis exceeds C{memory_guard}.
        """
        BaseRecord.__init__(self)
        self.n_phi = self._cutoff("n_phi", n_phi)
        self.n_theta = self._cutoff("n_theta", n_theta)
        self.n_zeta = self._cutoff("n_zeta", n_zeta)
        self.memory_guard = int(memory_guard)
        self._attrsList = ["n_phi", "n_theta", "n_zeta", "memory_guard"]
        self.validate()
        self._freeze()

    @staticmethod
    def _cutoff(name, value):
        if isinstance(value, bool) or int(value) != value:
            raise excep.InvalidParameterException("%s must be an integer, got %r." % (name, value))
        return int(value)

    def validate(self):
        """
        @raise TruncationException: A cutoff is below L{consts.MIN_CUTOFF}.
        @raise MemoryGuardException: The full product basis exceeds the memory guard.
        """
        for name in ("n_phi", "n_theta", "n_zeta"):
            if getattr(self, name) < consts.MIN_CUTOFF:
                raise excep.TruncationException("%s = %d is below the minimum cutoff %d." % (name, getattr(self, name), consts.MIN_CUTOFF))
        if self.dimension("full") > self.memory_guard:
            raise excep.MemoryGuardException("Product basis of %d states exceeds the memory guard of %d." % (self.dimension("full"), self.memory_guard))

    def dimension(self, model = "full"):
        """
        @type model: str
        @param model: (Optional) "full" (three modes) or "reduced" (phi and theta).
        
        @rtype: int
        @return: The number of product basis states.
        """
        if model == "reduced":
            return self.n_phi * self.n_theta
        return self.n_phi * self.n_theta * self.n_zeta

    def enlarged(self, by):
        """
        @rtype: L{BasisTruncation}
        @return: A truncation with every cutoff increased by C{by}.
        """
        return BasisTruncation(self.n_phi + by, self.n_theta + by, self.n_zeta + by, self.memory_guard)

class BasisDescriptor(BaseRecord):
    """Mode ordering, cutoffs and oscillator lengths of a product basis."""

    def __init__(self, modes, cutoffs, lengths):
        """
        @type modes: tuple of str
        @param modes: Mode names, slowest index first (e.g. C{("phi", "theta", "zeta")}).
        
        @type cutoffs: tuple of int
        @param cutoffs: Levels kept per mode.
        
        @type lengths: tuple of float
        @param lengths: Oscillator length of each mode (radians).
        """
        BaseRecord.__init__(self)
        self.modes = tuple(modes)
        self.cutoffs = tuple(int(n) for n in cutoffs)
        self.lengths = tuple(float(l) for l in lengths)
        self._attrsList = ["modes", "cutoffs", "lengths"]
        self.validate()
        self._freeze()

    def validate(self):
        if not len(self.modes) == len(self.cutoffs) == len(self.lengths):
            raise excep.InvalidParameterException("Basis descriptor fields have different lengths.")

    @property
    def dimension(self):
        return int(np.prod(self.cutoffs))

    def same_as(self, other, rtol = 1e-12):
        """
        @rtype: bool
        @return: C{True} if both descriptors span the same basis.
        """
        return (self.modes == other.modes and self.cutoffs == other.cutoffs
                and np.allclose(self.lengths, other.lengths, rtol = rtol, atol = 0.0))

class OperatorMatrix(object):
    """Square matrix expressed in a truncated oscillator product basis."""

    def __init__(self, matrix, basis):
        """
        Dense matrices are stored read-only. Real symmetric matrices are kept real.
        
        @type matrix: numpy.ndarray or scipy.sparse matrix
        @param matrix: The square matrix.
        
        @type basis: L{BasisDescriptor}
        @param basis: The basis the matrix is written in.
        
        @raise InvalidParameterException: The matrix is not square or does not match the basis dimension.
        """
        if sparse.issparse(matrix):
            matrix = sparse.csr_matrix(matrix)
        else:
            matrix = np.array(matrix)
            matrix.flags.writeable = False
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise excep.InvalidParameterException("Operator matrix must be square, got shape %r." % (matrix.shape,))
        if matrix.shape[0] != basis.dimension:
            raise excep.InvalidParameterException("Matrix dimension %d does not match basis dimension %d." % (matrix.shape[0], basis.dimension))
        self.matrix = matrix
        self.basis = basis

    def __repr__(self):
        return "<OperatorMatrix dim=%d sparse=%s basis=%r>" % (self.dimension, self.is_sparse, self.basis.modes)

    @property
    def dimension(self):
        return self.matrix.shape[0]

    @property
    def is_sparse(self):
        return sparse.issparse(self.matrix)

    def toarray(self):
        """
        @rtype: numpy.ndarray
        @return: A dense copy of the matrix.
        """
        if self.is_sparse:
            return self.matrix.toarray()
        return np.array(self.matrix)

    def dot(self, vectors):
        return self.matrix @ vectors

    def hermiticity_error(self):
        """
        @rtype: float
        @return: C{||H - H^dagger||_F / ||H||_F} (0 for the zero matrix).
        """
        return utils.hermiticity_error(self.matrix)

    def check_hermitian(self, tol = consts.HERMITICITY_TOL):
        """
        @raise NonHermitianException: The relative anti-Hermitian part exceeds C{tol}.
        """
        err = self.hermiticity_error()
        if err >= tol:
            raise excep.NonHermitianException("Matrix is not Hermitian: relative Frobenius error %.3e >= %.1e." % (err, tol))

class NoiseParams(BaseRecord):
    """Bath parameters of the loss and dephasing channels."""
    _jsonKeys = {
        "temperature": "T_K",
        "q_cap_ref": "Q_cap",
        "q_ind_ref": "Q_ind",
        "gap_delta": "Delta_eV",
        "x_qp": "x_qp",
        "flux_noise_amp_c": "A_c_rad",
        "flux_noise_amp_d": "A_d_rad",
        "omega_ir": "omega_ir_rad_s",
        "ramsey_time": "t_ramsey_s",
    }

    def __init__(self, temperature = consts.DEFAULT_TEMPERATURE, q_cap_ref = consts.DEFAULT_Q_CAP, q_ind_ref = consts.DEFAULT_Q_IND, 
                 gap_delta = consts.DEFAULT_GAP, x_qp = consts.DEFAULT_X_QP, flux_noise_amp_c = consts.DEFAULT_FLUX_NOISE_AMP, 
                 flux_noise_amp_d = consts.DEFAULT_FLUX_NOISE_AMP, omega_ir = consts.DEFAULT_OMEGA_IR, ramsey_time = consts.DEFAULT_RAMSEY_TIME):
        """
        Defaults reproduce the noise table used for the theoretical coherence estimates
        (T = 50 mK, Q_cap = 1e6 at 6 GHz, Q_ind = 5e8 at 0.5 GHz, Delta = 3.4e-4 eV, x_qp = 1e-8).
        
        @type temperature: float
        @param temperature: (Optional) Bath temperature, K.
        
        @type q_cap_ref: float
        @param q_cap_ref: (Optional) Dielectric quality factor at 2*pi*6 GHz.
        
        @type q_ind_ref: float
        @param q_ind_ref: (Optional) Inductive quality factor at 2*pi*0.5 GHz.
        
        @type gap_delta: float
        @param gap_delta: (Optional) Superconducting gap, eV.
        
        @type x_qp: float
        @param x_qp: (Optional) Normalized quasiparticle density.
        
        @type flux_noise_amp_c: float
        @param flux_noise_amp_c: (Optional) 1/f amplitude of common flux noise, rad.
        
        @type flux_noise_amp_d: float
        @param flux_noise_amp_d: (Optional) 1/f amplitude of differential flux noise, rad.
        
        @type omega_ir: float
        @param omega_ir: (Optional) Infrared cutoff, rad/s.
        
        @type ramsey_time: float
        @param ramsey_time: (Optional) Ramsey measurement time, s.
        """
        BaseRecord.__init__(self)
        self.temperature = _finite("temperature", temperature)
        self.q_cap_ref = _finite("q_cap_ref", q_cap_ref)
        self.q_ind_ref = _finite("q_ind_ref", q_ind_ref)
        self.gap_delta = _finite("gap_delta", gap_delta)
        self.x_qp = _finite("x_qp", x_qp)
        self.flux_noise_amp_c = _finite("flux_noise_amp_c", flux_noise_amp_c)
        self.flux_noise_amp_d = _finite("flux_noise_amp_d", flux_noise_amp_d)
        self.omega_ir = _finite("omega_ir", omega_ir)
        self.ramsey_time = _finite("ramsey_time", ramsey_time)
        self._attrsList = ["temperature", "q_cap_ref", "q_ind_ref", "gap_delta", "x_qp", 
                           "flux_noise_amp_c", "flux_noise_amp_d", "omega_ir", "ramsey_time"]
        self.validate()
        self._freeze()

    def validate(self):
        """
        @raise InvalidParameterException: If an invariant does not hold.
        """
        for name in ("temperature", "q_cap_ref", "q_ind_ref", "gap_delta", "omega_ir", "ramsey_time"):
            if getattr(self, name) <= 0:
                raise excep.InvalidParameterException("%s must be strictly positive, got %r." % (name, getattr(self, name)))
        for name in ("x_qp", "flux_noise_amp_c", "flux_noise_amp_d"):
            if getattr(self, name) < 0:
                raise excep.InvalidParameterException("%s must be non-negative, got %r." % (name, getattr(self, name)))

class HoppingParams(BaseRecord):
    """Parameters of the four-site hopping model."""

    def __init__(self, epsilon, delta_nn, delta_nnn):
        """
        @type epsilon: float
        @param epsilon: On-site energy; +epsilon on the up/down sites, -epsilon on left/right.
        
        @type delta_nn: float
        @param delta_nn: Nearest-neighbor hopping Delta.
        
        @type delta_nnn: float
        @param delta_nnn: Next-nearest-neighbor hopping delta between up and down.
        """
        BaseRecord.__init__(self)
        self.epsilon = _finite("epsilon", epsilon)
        self.delta_nn = _finite("delta_nn", delta_nn)
        self.delta_nnn = _finite("delta_nnn", delta_nnn)
        self._attrsList = ["epsilon", "delta_nn", "delta_nnn"]
        self._freeze()

    def validate(self):
        pass

    def in_regime(self):
        """
        Advisory flag for C{epsilon >> Delta >> delta > 0}, with "much larger" read as
        a ratio of at least L{consts.HOPPING_REGIME_RATIO}.
        
        @rtype: bool
        """
        r = consts.HOPPING_REGIME_RATIO
        return (self.delta_nnn > 0 and self.delta_nn >= r * self.delta_nnn
                and self.epsilon >= r * self.delta_nn)

    def warn_regime(self):
        """Emits a L{RegimeWarning} if L{in_regime} is C{False}. Returns the flag."""
        ok = self.in_regime()
        if not ok:
            warnings.warn(excep.RegimeWarning("Hopping parameters (%g, %g, %g) violate epsilon >> Delta >> delta > 0." 
                          % (self.epsilon, self.delta_nn, self.delta_nnn)), stacklevel = 3)
        return ok

class FluxCalibration(BaseRecord):
    """Linear map from control voltages to reduced fluxes."""

    def __init__(self, alpha_m, alpha_l, beta_m, beta_l, phi_offset_c = 0.0, phi_offset_d = 0.0):
        """
        C{[phi_c, phi_d] = [[alpha_m, alpha_l], [beta_m, beta_l]] [v_m, v_l] + [phi_offset_c, phi_offset_d]}.
        
        @type alpha_m: float
        @param alpha_m: Magnet coupling to phi_c, rad/V.
        
        @type alpha_l: float
        @param alpha_l: Bias-line coupling to phi_c, rad/V.
        
        @type beta_m: float
        @param beta_m: Magnet coupling to phi_d, rad/V.
        
        @type beta_l: float
        @param beta_l: Bias-line coupling to phi_d, rad/V.
        
        @type phi_offset_c: float
        @param phi_offset_c: (Optional) Constant common flux offset, rad.
        
        @type phi_offset_d: float
        @param phi_offset_d: (Optional) Constant differential flux offset, rad.
        
        @raise InvalidParameterException: The coefficient matrix is singular.
        """
        BaseRecord.__init__(self)
        self.alpha_m = _finite("alpha_m", alpha_m)
        self.alpha_l = _finite("alpha_l", alpha_l)
        self.beta_m = _finite("beta_m", beta_m)
        self.beta_l = _finite("beta_l", beta_l)
        self.phi_offset_c = _finite("phi_offset_c", phi_offset_c)
        self.phi_offset_d = _finite("phi_offset_d", phi_offset_d)
        self._attrsList = ["alpha_m", "alpha_l", "beta_m", "beta_l", "phi_offset_c", "phi_offset_d"]
        self.validate()
        self._freeze()

    def validate(self):
        """
        @raise InvalidParameterException: C{|det M| <= 1e-12}.
        """
        det = np.linalg.det(self.matrix)
        if abs(det) <= 1e-12:
            raise excep.InvalidParameterException("Calibration matrix is singular (det = %.3e rad^2/V^2)." % det)

    @property
    def matrix(self):
        return np.array([[self.alpha_m, self.alpha_l], [self.beta_m, self.beta_l]])

    @property
    def offsets(self):
        return np.array([self.phi_offset_c, self.phi_offset_d])

class TwoTonePeak(BaseRecord):
    """One extracted spectroscopy peak."""
    _jsonKeys = {"phi_c": "phi_c_rad", "phi_d": "phi_d_rad", "f_transition": "f_GHz", "sigma": "sigma_GHz"}

    def __init__(self, phi_c, phi_d, f_transition, sigma = consts.DEFAULT_SIGMA, from_state = None, to_state = None):
        """
        @type phi_c: float
        @param phi_c: Common flux, rad.
        
        @type phi_d: float
        @param phi_d: Differential flux, rad.
        
        @type f_transition: float
        @param f_transition: Peak frequency, GHz.
        
        @type sigma: float
        @param sigma: (Optional) Measurement uncertainty used as weight, GHz.
        
        @type from_state: int
        @param from_state: (Optional) Lower state of the assigned transition.
        
        @type to_state: int
        @param to_state: (Optional) Upper state of the assigned transition.
        """
        BaseRecord.__init__(self)
        self.phi_c = _finite("phi_c", phi_c)
        self.phi_d = _finite("phi_d", phi_d)
        self.f_transition = _finite("f_transition", f_transition)
        self.sigma = _finite("sigma", sigma)
        self.from_state = None if from_state is None else int(from_state)
        self.to_state = None if to_state is None else int(to_state)
        self._attrsList = ["phi_c", "phi_d", "f_transition", "sigma", "from_state", "to_state"]
        self.validate()
        self._freeze()

    def validate(self):
        if self.f_transition <= 0:
            raise excep.InvalidParameterException("f_transition must be positive, got %r GHz." % self.f_transition)
        if self.sigma <= 0:
            raise excep.InvalidParameterException("sigma must be positive, got %r GHz." % self.sigma)
        if (self.from_state is None) != (self.to_state is None):
            raise excep.InvalidParameterException("A transition label needs both from_state and to_state.")
        if self.from_state is not None and not 0 <= self.from_state < self.to_state:
            raise excep.InvalidParameterException("Invalid transition label %r -> %r." % (self.from_state, self.to_state))

    @property
    def flux(self):
        return FluxPoint(self.phi_c, self.phi_d)

    @property
    def label(self):
        if self.from_state is None:
            return None
        return (self.from_state, self.to_state)

class TwoToneDataset(list):
    """List of L{TwoTonePeak} objects."""

    def __init__(self, peaks = ()):
        list.__init__(self)
        for peak in peaks:
            self.append(peak)

    def append(self, peak):
        if not isinstance(peak, TwoTonePeak):
            raise excep.InvalidParameterException("TwoToneDataset only holds TwoTonePeak objects, got %r." % type(peak))
        list.append(self, peak)

    def flux_points(self):
        """
        @rtype: list of L{FluxPoint}
        @return: Distinct flux points, in order of first appearance.
        """
        seen = []
        for peak in self:
            point = peak.flux
            if point not in seen:
                seen.append(point)
        return seen

    def is_labeled(self):
        """
        @rtype: bool
        @return: C{True} if every peak carries a transition label.
        """
        return all(peak.label is not None for peak in self)

    def frequencies(self):
        return np.array([peak.f_transition for peak in self])

    def sigmas(self):
        return np.array([peak.sigma for peak in self])
