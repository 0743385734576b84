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
Four-site hopping model of the wells around sweet spot II.

Sites are ordered (u, d, l, r): u and d sit at C{+epsilon}, l and r at
C{-epsilon}; every u/d-l/r link hops with C{-Delta} and u-d with C{-delta}.

@group Model:
    HoppingLevel, HOPPING_BASIS, SITES, hopping_hamiltonian

@group Levels:
    perturbative_levels, exact_levels, classify_regime, fit_hopping_params
"""

__revision__ = "$Id$"

__all__ = [
           "SITES", 
           "HOPPING_BASIS", 
           "HoppingLevel", 
           "hopping_hamiltonian", 
           "perturbative_levels", 
           "exact_levels", 
           "classify_regime", 
           "fit_hopping_params", 
           ]

import logging

import numpy as np
from scipy import optimize

from fluxmol import excep
from fluxmol import spectrum
from fluxmol.baseclasses import BaseRecord
from fluxmol.datatypes import BasisDescriptor, HoppingParams, OperatorMatrix

log = logging.getLogger(__name__)

SITES = ("u", "d", "l", "r")

HOPPING_BASIS = BasisDescriptor(("site",), (len(SITES),), (1.0,))

class HoppingLevel(BaseRecord):
    """One eigenlevel of the hopping model."""

    def __init__(self, name, energy, vector):
        """
        @type name: str
        @param name: "theta+", "theta-", "phi-" or "phi+".
        
        @type energy: float
        @param energy: Level energy, units of the hopping parameters.
        
        @type vector: tuple
        @param vector: Amplitudes on (u, d, l, r).
        """
        BaseRecord.__init__(self)
        self.name = name
        self.energy = float(energy)
        self.vector = tuple(float(a) for a in vector)
        self._attrsList = ["name", "energy", "vector"]
        self._freeze()

    def validate(self):
        pass

    def normalized(self):
        """
        @rtype: numpy.ndarray
        @return: The unit vector, largest-magnitude component positive.
        """
        v = np.array(self.vector)
        v = v / np.linalg.norm(v)
        pivot = v[np.argmax(np.abs(v))]
        return v * np.sign(pivot)

def _check(p):
    if not isinstance(p, HoppingParams):
        raise excep.InvalidParameterException("Expected HoppingParams, got %r." % type(p))

def hopping_hamiltonian(p):
    """
    @type p: L{HoppingParams}
    @param p: On-site energy and hopping amplitudes.
    
    @rtype: L{OperatorMatrix}
    @return: Real symmetric 4x4 matrix in the (u, d, l, r) basis.
    """
    _check(p)
    e, big, small = p.epsilon, p.delta_nn, p.delta_nnn
    h = np.array([
        [e, -small, -big, -big],
        [-small, e, -big, -big],
        [-big, -big, -e, 0.0],
        [-big, -big, 0.0, -e],
    ])
    return OperatorMatrix(h, HOPPING_BASIS)

def perturbative_levels(p):
    """
    Eigenlevels to second order in C{Delta/epsilon}, with unnormalized vectors.
    
    Emits a L{RegimeWarning} when C{epsilon >> Delta >> delta > 0} does not hold.
    
    @type p: L{HoppingParams}
    @param p: Model parameters.
    
    @rtype: list of L{HoppingLevel}
    @return: theta+, theta-, phi-, phi+ in that order.
    """
    _check(p)
    p.warn_regime()
    e, big, small = p.epsilon, p.delta_nn, p.delta_nnn
    r = big / e
    return [
        HoppingLevel("theta+", -e - 2.0 * big ** 2 / e, (r, r, 1.0, 1.0)),
        HoppingLevel("theta-", -e, (0.0, 0.0, -1.0, 1.0)),
        HoppingLevel("phi-", e + small, (1.0, -1.0, 0.0, 0.0)),
        HoppingLevel("phi+", e - small + 2.0 * big ** 2 / e, (1.0, 1.0, -r, -r)),
    ]

def exact_levels(p):
    """
    @rtype: L{Spectrum}
    @return: All four eigenpairs of L{hopping_hamiltonian}, ascending.
    """
    return spectrum.diagonalize(hopping_hamiltonian(p), len(SITES))

def classify_regime(p):
    """
    Tells whether the symmetric phi state lies below the antisymmetric one,
    which to second order happens iff C{delta > Delta^2/epsilon}.
    
    @rtype: dict
    @return: C{{"theta_plus_lowest_excited": bool, "boundary": Delta^2/epsilon}}.
    """
    _check(p)
    p.warn_regime()
    boundary = p.delta_nn ** 2 / p.epsilon
    return {"theta_plus_lowest_excited": p.delta_nnn > boundary, "boundary": boundary}

def fit_hopping_params(energies):
    """
    Least-squares hopping parameters and gauge offset reproducing four energies.
    
    @type energies: sequence of float
    @param energies: The four lowest levels of the continuum model.
    
    @rtype: tuple
    @return: C{(HoppingParams, offset, rms residual)}.
    
    @raise ConvergenceException: The optimizer failed.
    """
    target = np.sort(np.asarray(energies, dtype = float))
    if target.shape != (4,):
        raise excep.InvalidParameterException("Expected 4 energies, got %d." % target.size)
    offset0 = target.mean()
    eps0 = max(0.25 * (target[2] + target[3] - target[0] - target[1]), 1e-9)
    big0 = np.sqrt(max(0.5 * eps0 * (target[1] - target[0]), 1e-12))
    small0 = max(0.5 * abs(target[3] - target[2]), 1e-12)

    def residual(x):
        eps, big, small, offset = x
        h = np.array([[eps, -small, -big, -big], [-small, eps, -big, -big], [-big, -big, -eps, 0.0], [-big, -big, 0.0, -eps]])
        return np.linalg.eigvalsh(h) + offset - target

    result = optimize.least_squares(residual, [eps0, big0, small0, offset0], 
                                    bounds = ([0.0, 0.0, 0.0, -np.inf], [np.inf, np.inf, np.inf, np.inf]), 
                                    x_scale = "jac", xtol = 1e-14, ftol = 1e-14, gtol = 1e-14)
    if not result.success:
        raise excep.ConvergenceException("Hopping fit failed: %s" % result.message)
    eps, big, small, offset = result.x
    rms = float(np.sqrt(np.mean(result.fun ** 2)))
    log.info("hopping fit: epsilon %.6g, Delta %.6g, delta %.6g, offset %.6g, rms %.2e", eps, big, small, offset, rms)
    return HoppingParams(eps, big, small), float(offset), rms
