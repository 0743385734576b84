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
Hamiltonians of the fluxonium molecule in truncated oscillator product bases.

Each mode with Hamiltonian C{A n^2 + B x^2} is expanded in the eigenbasis of
that harmonic part, with oscillator length C{l = (A/B)^(1/4)},
C{x = l (a + a^dagger)/sqrt(2)} and C{n = i (a^dagger - a)/(sqrt(2) l)}.
Squares of C{x} and C{n} are truncated after squaring, and cosines and sines
of shifted positions are computed from the eigendecomposition of the
truncated position matrix. Every Hamiltonian is real symmetric and in GHz.

@group Basis:
    ModeOperators, mode_operators, oscillator_lengths

@group Hamiltonians:
    build_full_hamiltonian, build_reduced_hamiltonian, build_disordered_hamiltonian,
    build_hamiltonian

@group Closed forms:
    zeta_frequency, theta_stiffness, zeta_zpf, sw_theta_shift, normal_mode_frequencies

@group Potential:
    potential
"""

__revision__ = "$Id$"

__all__ = [
           "MODELS", 
           "ModeOperators", 
           "mode_operators", 
           "oscillator_lengths", 
           "build_full_hamiltonian", 
           "build_reduced_hamiltonian", 
           "build_disordered_hamiltonian", 
           "build_hamiltonian", 
           "zeta_frequency", 
           "theta_stiffness", 
           "zeta_zpf", 
           "sw_theta_shift", 
           "normal_mode_frequencies", 
           "potential", 
           ]

import logging
import math

import numpy as np
from scipy import linalg
from scipy import sparse

from fluxmol import caching
from fluxmol import consts
from fluxmol import excep
from fluxmol.datatypes import BasisDescriptor, BasisTruncation, CircuitParams, FluxPoint, OperatorMatrix

log = logging.getLogger(__name__)

MODELS = ("full", "reduced")

SQRT2 = math.sqrt(2.0)

def zeta_frequency(params):
    """
    Frequency of the zeta mode, C{sqrt(8 E_C (2 E_L + E_Ls))}.
    
    @type params: L{CircuitParams}
    @param params: Circuit energies. Any object with C{e_c}, C{e_l} and C{e_ls} attributes is accepted.
    
    @rtype: float
    @return: Frequency in GHz.
    """
    return math.sqrt(8.0 * params.e_c * (2.0 * params.e_l + params.e_ls))

def theta_stiffness(params):
    """
    Coefficient of C{theta^2} in the reduced Hamiltonian, C{E_L E_Ls / (2 E_L + E_Ls)}.
    
    @rtype: float
    @return: Energy in GHz.
    """
    return params.e_l * params.e_ls / (2.0 * params.e_l + params.e_ls)

def zeta_zpf(params):
    """
    Zero-point fluctuation C{<0|zeta|1>} of the uncoupled zeta oscillator,
    C{(4 E_C / (E_L + E_Ls/2))^(1/4) / sqrt(2)}.
    
    @rtype: float
    @return: Dimensionless (radians).
    """
    return (4.0 * params.e_c / (params.e_l + 0.5 * params.e_ls)) ** 0.25 / SQRT2

def sw_theta_shift(params):
    """
    Second-order shift of the C{theta^2} coefficient from eliminating the zeta mode,
    C{(2 E_L zeta_zpf)^2 / hbar omega_zeta}. L{theta_stiffness} equals C{E_L} minus this value.
    
    @rtype: float
    """
    return (2.0 * params.e_l * zeta_zpf(params)) ** 2 / zeta_frequency(params)

def normal_mode_frequencies(params):
    """
    Frequencies of the harmonic part of the full Hamiltonian (all junction terms dropped).
    
    The phi mode is decoupled; theta and zeta mix through the C{-2 E_L theta zeta} term.
    
    @rtype: dict
    @return: Keys "phi", "theta" (the soft theta-zeta mode) and "zeta" (the stiff one), GHz.
    """
    kinetic = np.diag([2.0 * params.e_cj, 4.0 * params.e_c])
    stiffness = np.array([[params.e_l, -params.e_l], [-params.e_l, params.e_l + 0.5 * params.e_ls]])
    root = np.sqrt(kinetic)
    w = linalg.eigvalsh(root @ stiffness @ root)
    return {
        "phi": 2.0 * math.sqrt(2.0 * params.e_cj * params.e_l),
        "theta": 2.0 * math.sqrt(w[0]),
        "zeta": 2.0 * math.sqrt(w[1]),
    }

def oscillator_lengths(params, model = "full"):
    """
    Oscillator lengths fixed by the quadratic part of each mode. Disorder is ignored
    so that all disorder values share one basis.
    
    @type params: L{CircuitParams}
    @param params: Circuit energies.
    
    @type model: str
    @param model: (Optional) "full" or "reduced".
    
    @rtype: tuple of float
    @return: Lengths in mode order (phi, theta[, zeta]).
    """
    _check_model(model)
    phi = (2.0 * params.e_cj / params.e_l) ** 0.25
    if model == "reduced":
        return (phi, (2.0 * params.e_cj / theta_stiffness(params)) ** 0.25)
    zeta = (4.0 * params.e_c / (params.e_l + 0.5 * params.e_ls)) ** 0.25
    return (phi, phi, zeta)

@caching.cached("annihilation", maxsize = consts.OPERATOR_CACHE_SIZE)
def _annihilation(n):
    return np.diag(np.sqrt(np.arange(1.0, n)), 1)

@caching.cached("quadratures", maxsize = consts.OPERATOR_CACHE_SIZE)
def _quadratures(n, length):
    a = _annihilation(n)
    ad = a.T
    eye = np.eye(n)
    number = np.diag(np.arange(float(n)))
    a2 = a @ a
    x = length / SQRT2 * (a + ad)
    # real antisymmetric part of n = i p
    p = (ad - a) / (SQRT2 * length)
    x2 = 0.5 * length ** 2 * (2.0 * number + eye + a2 + a2.T)
    n2 = 0.5 / length ** 2 * (2.0 * number + eye - a2 - a2.T)
    w, v = linalg.eigh(x)
    return x, p, x2, n2, w, v

class ModeOperators(object):
    """
    Single-mode operators of a product basis, with helpers to embed them into the
    product space. Mode order is the Kronecker order: the first mode is the slowest index.
    """

    def __init__(self, basis):
        """
        @type basis: L{BasisDescriptor}
        @param basis: Modes, cutoffs and oscillator lengths.
        """
        self.basis = basis

    def __repr__(self):
        return "<ModeOperators %r cutoffs=%r>" % (self.basis.modes, self.basis.cutoffs)

    @property
    def dimension(self):
        return self.basis.dimension

    def _local(self, mode):
        try:
            i = self.basis.modes.index(mode)
        except ValueError:
            raise excep.BasisMismatchException("Mode %r is not part of the basis %r." % (mode, self.basis.modes))
        return _quadratures(self.basis.cutoffs[i], self.basis.lengths[i])

    def position(self, mode):
        return self._local(mode)[0]

    def charge(self, mode):
        """
        @rtype: numpy.ndarray
        @return: The (purely imaginary) charge operator C{n} of C{mode}.
        """
        return 1j * self._local(mode)[1]

    def charge_quadrature(self, mode):
        """
        @rtype: numpy.ndarray
        @return: The real antisymmetric matrix C{p} with C{n = i p}.
        """
        return self._local(mode)[1]

    def position_squared(self, mode):
        return self._local(mode)[2]

    def charge_squared(self, mode):
        return self._local(mode)[3]

    def cos(self, mode, shift = 0.0):
        """
        @rtype: numpy.ndarray
        @return: C{cos(x + shift)} for the position C{x} of C{mode}.
        """
        w, v = self._local(mode)[4:]
        return (v * np.cos(w + shift)) @ v.T

    def sin(self, mode, shift = 0.0):
        """
        @rtype: numpy.ndarray
        @return: C{sin(x + shift)} for the position C{x} of C{mode}.
        """
        w, v = self._local(mode)[4:]
        return (v * np.sin(w + shift)) @ v.T

    def function(self, mode, func):
        """
        @type func: callable
        @param func: Scalar function, vectorized over numpy arrays.
        
        @rtype: numpy.ndarray
        @return: C{func(x)} for the position of C{mode}, by spectral mapping.
        """
        w, v = self._local(mode)[4:]
        return (v * func(w)) @ v.T

    def embed(self, factors):
        """
        Kronecker product of per-mode factors, with identities for the missing modes.
        
        @type factors: dict
        @param factors: Mode name to square matrix.
        
        @rtype: scipy.sparse.csr_matrix
        """
        unknown = set(factors) - set(self.basis.modes)
        if unknown:
            raise excep.BasisMismatchException("Modes %r are not part of the basis %r." % (sorted(unknown), self.basis.modes))
        result = None
        for mode, n in zip(self.basis.modes, self.basis.cutoffs):
            if mode in factors:
                block = sparse.csr_matrix(factors[mode])
            else:
                block = sparse.identity(n, format = "csr")
            result = block if result is None else sparse.kron(result, block, format = "csr")
        return result

    def operator(self, factors, coef = 1.0):
        """
        @rtype: L{OperatorMatrix}
        @return: C{coef} times the embedded product of C{factors}.
        """
        return OperatorMatrix(_densify(coef * self.embed(factors)), self.basis)

    def __getitem__(self, name):
        """
        Product-space operators by name: "phi", "theta", "zeta" and "n_phi", "n_theta", "n_zeta".
        """
        if name.startswith("n_"):
            mode = name[2:]
            return self.operator({mode: self.charge(mode)})
        return self.operator({name: self.position(name)})

    def identity(self):
        return OperatorMatrix(_densify(sparse.identity(self.dimension, format = "csr")), self.basis)

def _check_model(model):
    if model not in MODELS:
        raise excep.InvalidParameterException("Unknown model %r, expected one of %s." % (model, ", ".join(MODELS)))

def _check_inputs(params, trunc):
    if not isinstance(params, CircuitParams):
        raise excep.InvalidParameterException("Expected CircuitParams, got %r." % type(params))
    if trunc is None:
        trunc = BasisTruncation()
    elif not isinstance(trunc, BasisTruncation):
        raise excep.InvalidParameterException("Expected BasisTruncation, got %r." % type(trunc))
    return trunc

def _densify(matrix):
    if matrix.shape[0] <= consts.DENSE_SOLVER_LIMIT:
        return matrix.toarray()
    return matrix

def mode_operators(trunc, params, model = "full"):
    """
    Builds the per-mode operator set of a model.
    
    @type trunc: L{BasisTruncation}
    @param trunc: Cutoffs. C{n_zeta} is ignored by the reduced model.
    
    @type params: L{CircuitParams}
    @param params: Circuit energies; they fix the oscillator lengths.
    
    @type model: str
    @param model: (Optional) "full" (phi, theta, zeta) or "reduced" (phi, theta).
    
    @rtype: L{ModeOperators}
    
    @raise TruncationException: A cutoff is below the minimum.
    @raise MemoryGuardException: The product basis exceeds the memory guard.
    """
    _check_model(model)
    trunc = _check_inputs(params, trunc)
    trunc.validate()
    lengths = oscillator_lengths(params, model)
    if model == "reduced":
        basis = BasisDescriptor(("phi", "theta"), (trunc.n_phi, trunc.n_theta), lengths)
    else:
        basis = BasisDescriptor(("phi", "theta", "zeta"), (trunc.n_phi, trunc.n_theta, trunc.n_zeta), lengths)
    return ModeOperators(basis)

def _assemble(params, flux, trunc, model, exact = True):
    flux = FluxPoint.coerce(flux)
    ops = mode_operators(trunc, params, model)
    phi_c, phi_d = flux.phi_c, flux.phi_d
    terms = []
    if model == "reduced":
        terms.append((2.0 * params.e_cj, {"phi": ops.charge_squared("phi")}))
        terms.append((2.0 * params.e_cj, {"theta": ops.charge_squared("theta")}))
        terms.append((params.e_l, {"phi": ops.position_squared("phi")}))
        terms.append((theta_stiffness(params), {"theta": ops.position_squared("theta")}))
    else:
        cj = 1.0 / (1.0 - params.d_cj ** 2) if exact else 1.0
        lf = 1.0 / (1.0 - params.d_l ** 2) if exact else 1.0
        terms.append((2.0 * params.e_cj * cj, {"phi": ops.charge_squared("phi")}))
        terms.append((2.0 * params.e_cj * cj, {"theta": ops.charge_squared("theta")}))
        terms.append((4.0 * params.e_c, {"zeta": ops.charge_squared("zeta")}))
        terms.append((params.e_l * lf, {"phi": ops.position_squared("phi")}))
        terms.append((params.e_l * lf, {"theta": ops.position_squared("theta")}))
        terms.append((params.e_l * lf + 0.5 * params.e_ls, {"zeta": ops.position_squared("zeta")}))
        terms.append((-2.0 * params.e_l * lf, {"theta": ops.position("theta"), "zeta": ops.position("zeta")}))
    terms.append((-2.0 * params.e_j, {"phi": ops.cos("phi", phi_c), "theta": ops.cos("theta", phi_d)}))

    if model == "full":
        if params.d_cj != 0.0:
            # n_theta n_phi = (i p_theta)(i p_phi) = -p_theta p_phi
            terms.append((-4.0 * params.e_cj * cj * params.d_cj, {"phi": ops.charge_quadrature("phi"), "theta": ops.charge_quadrature("theta")}))
        if params.d_l != 0.0:
            coef = 2.0 * params.e_l * lf * params.d_l
            terms.append((coef, {"phi": ops.position("phi"), "theta": ops.position("theta")}))
            terms.append((-coef, {"phi": ops.position("phi"), "zeta": ops.position("zeta")}))
        if params.d_ej != 0.0:
            terms.append((-2.0 * params.e_j * params.d_ej, {"phi": ops.sin("phi", phi_c), "theta": ops.sin("theta", phi_d)}))

    matrix = None
    for coef, factors in terms:
        term = coef * ops.embed(factors)
        matrix = term if matrix is None else matrix + term
    log.debug("assembled %s Hamiltonian, dimension %d, %d terms, flux (%g, %g)", model, ops.dimension, len(terms), phi_c, phi_d)
    h = OperatorMatrix(_densify(matrix.tocsr()), ops.basis)
    h.check_hermitian()
    return h

def build_full_hamiltonian(params, flux, trunc = None):
    """
    Three-mode Hamiltonian of the symmetric circuit,
    C{2E_CJ(n_phi^2 + n_theta^2) + 4E_C n_zeta^2 + E_L[phi^2 + (theta - zeta)^2]
    + E_Ls zeta^2/2 - 2E_J cos(phi + phi_c) cos(theta + phi_d)}.
    
    @type params: L{CircuitParams}
    @param params: Circuit energies, without disorder.
    
    @type flux: L{FluxPoint}
    @param flux: External fluxes.
    
    @type trunc: L{BasisTruncation}
    @param trunc: (Optional) Cutoffs; the defaults of L{BasisTruncation} if omitted.
    
    @rtype: L{OperatorMatrix}
    @return: Real symmetric matrix in GHz.
    
    @raise DisorderException: C{params} carries non-zero disorder.
    """
    if isinstance(params, CircuitParams) and params.has_disorder():
        raise excep.DisorderException("build_full_hamiltonian takes a symmetric circuit; use build_disordered_hamiltonian for %r." % params)
    return _assemble(params, flux, trunc, "full")

def build_reduced_hamiltonian(params, flux, trunc = None):
    """
    Two-mode Hamiltonian with the zeta mode eliminated,
    C{2E_CJ(n_theta^2 + n_phi^2) + [E_L E_Ls/(2E_L + E_Ls)] theta^2 + E_L phi^2
    - 2E_J cos(phi + phi_c) cos(theta + phi_d)}.
    
    @type params: L{CircuitParams}
    @param params: Circuit energies, without disorder.
    
    @type flux: L{FluxPoint}
    @param flux: External fluxes.
    
    @type trunc: L{BasisTruncation}
    @param trunc: (Optional) Cutoffs; C{n_zeta} is ignored.
    
    @rtype: L{OperatorMatrix}
    
    @raise DisorderException: C{params} carries non-zero disorder.
    """
    if isinstance(params, CircuitParams) and params.has_disorder():
        raise excep.DisorderException("The reduced Hamiltonian is only defined for a symmetric circuit, got %r." % params)
    return _assemble(params, flux, trunc, "reduced")

def build_disordered_hamiltonian(params, flux, trunc = None, exact = True):
    """
    Three-mode Hamiltonian with junction-capacitance, inductance and Josephson-energy disorder.
    
    With C{exact} the charging and inductive energies carry their C{(1 - d^2)^-1}
    factors; otherwise the symmetric Hamiltonian plus the three cross terms to first
    order in the disorder is returned. With zero disorder both forms equal
    L{build_full_hamiltonian}.
    
    @type params: L{CircuitParams}
    @param params: Circuit energies and disorder fractions.
    
    @type flux: L{FluxPoint}
    @param flux: External fluxes.
    
    @type trunc: L{BasisTruncation}
    @param trunc: (Optional) Cutoffs.
    
    @type exact: bool
    @param exact: (Optional) Exact form if C{True}, leading order if C{False}.
    
    @rtype: L{OperatorMatrix}
    """
    return _assemble(params, flux, trunc, "full", exact = exact)

def build_hamiltonian(params, flux, trunc = None, model = "reduced"):
    """
    Dispatches to the builder of C{model}. A full model with disorder uses the exact
    disordered Hamiltonian.
    
    @rtype: L{OperatorMatrix}
    """
    _check_model(model)
    if model == "reduced":
        return build_reduced_hamiltonian(params, flux, trunc)
    if params.has_disorder():
        return build_disordered_hamiltonian(params, flux, trunc, exact = True)
    return build_full_hamiltonian(params, flux, trunc)

def potential(params, flux, phi, theta, junction_only = False):
    """
    Potential of the reduced Hamiltonian on a grid,
    C{V(phi, theta) = E_L phi^2 + K theta^2 - 2E_J cos(phi + phi_c) cos(theta + phi_d)}.
    
    @type params: L{CircuitParams}
    @param params: Circuit energies.
    
    @type flux: L{FluxPoint}
    @param flux: External fluxes.
    
    @type phi: numpy.ndarray
    @param phi: Grid along phi (radians).
    
    @type theta: numpy.ndarray
    @param theta: Grid along theta (radians).
    
    @type junction_only: bool
    @param junction_only: (Optional) Return only the double-cosine term.
    
    @rtype: numpy.ndarray
    @return: Array of shape C{(len(phi), len(theta))} in GHz, C{V[i, j] = V(phi[i], theta[j])}.
    """
    flux = FluxPoint.coerce(flux)
    p, t = np.meshgrid(np.asarray(phi, dtype = float), np.asarray(theta, dtype = float), indexing = "ij")
    v = -2.0 * params.e_j * np.cos(p + flux.phi_c) * np.cos(t + flux.phi_d)
    if not junction_only:
        v = v + params.e_l * p ** 2 + theta_stiffness(params) * t ** 2
    return v
