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
Exceptions and warnings used by the entire library.

@group Base exceptions: 
    FluxMolException, FluxMolWarning

@group Warnings: 
    RegimeWarning, SweetSpotWarning, FitWarning
    
@group Exceptions: 
    InvalidParameterException, TruncationException, MemoryGuardException,
    DisorderException, NonHermitianException, ConvergenceException,
    BasisMismatchException, UnresolvedTransitionException,
    ModelValidityException, RankDeficiencyException, SchemaException,
    ConfigException
"""

__revision__ = "$Id$"

__all__ = [
           "FluxMolException",
           "FluxMolWarning", 
           "RegimeWarning", 
           "SweetSpotWarning", 
           "FitWarning", 
           "InvalidParameterException", 
           "TruncationException", 
           "MemoryGuardException", 
           "DisorderException", 
           "NonHermitianException", 
           "ConvergenceException", 
           "BasisMismatchException", 
           "UnresolvedTransitionException", 
           "ModelValidityException", 
           "RankDeficiencyException", 
           "SchemaException", 
           "ConfigException", 
           ]
           
class FluxMolException(Exception):
    """Base exception class."""
    pass

class FluxMolWarning(UserWarning):
    """Base warning class."""
    pass

class RegimeWarning(FluxMolWarning):
    """Raised when parameters leave the regime a model or approximation was written for."""
    pass

class SweetSpotWarning(FluxMolWarning):
    """Raised when a sweet-spot candidate could not be refined below the requested tolerance."""
    pass

class FitWarning(FluxMolWarning):
    """Raised when a fit converged to a suspicious solution or was fed too little data."""
    pass
    
class InvalidParameterException(FluxMolException):
    """Raised when an invalid parameter is received."""
    pass

class TruncationException(FluxMolException):
    """Raised when an oscillator cutoff is below the supported minimum."""
    pass

class MemoryGuardException(FluxMolException):
    """Raised when a product basis would exceed the configured number of basis states."""
    pass

class DisorderException(FluxMolException):
    """
    Raised when non-zero disorder fractions are passed to a builder of the symmetric
    Hamiltonian. Use L{circuit.build_disordered_hamiltonian} instead.
    """
    pass

class NonHermitianException(FluxMolException):
    """Raised when a matrix expected to be Hermitian is not."""
    pass

class ConvergenceException(FluxMolException):
    """Raised when an eigensolver, integrator, optimizer or refinement loop does not converge."""
    pass

class BasisMismatchException(FluxMolException):
    """Raised when an operator and a L{spectrum.Spectrum} live in different bases."""
    pass

class UnresolvedTransitionException(FluxMolException):
    """Raised when a quantity is requested for two states that are degenerate within solver tolerance."""
    pass

class ModelValidityException(FluxMolException):
    """Raised when a loss model is evaluated outside its range of validity."""
    pass

class RankDeficiencyException(FluxMolException):
    """Raised when a linear system is unobservable, e.g. calibration anchors along a single axis."""
    pass

class SchemaException(FluxMolException):
    """Raised when a JSON artifact carries an unknown or missing schema tag."""
    pass

class ConfigException(FluxMolException):
    """Raised when a run configuration does not parse. The message names the offending field."""
    def __init__(self, message, field = None):
        """
        @type message: str
        @param message: Description of the problem.
        
        @type field: str
        @param field: (Optional) Dotted path of the offending configuration field.
        """
        if field:
            message = "%s: %s" % (field, message)
        FluxMolException.__init__(self, message)
        self.field = field
