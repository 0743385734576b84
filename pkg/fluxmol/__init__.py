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
Numerical toolkit for the fluxonium-molecule circuit: Hamiltonians in truncated
oscillator bases, flux-dependent spectra and sweet spots, golden-rule coherence
budgets, master-equation dynamics with subspace readout, and fits of circuit
parameters to two-tone spectroscopy.

@group Circuit:
    CircuitParams, FluxPoint, BasisTruncation, build_hamiltonian, build_full_hamiltonian,
    build_reduced_hamiltonian, build_disordered_hamiltonian, zeta_frequency

@group Spectrum:
    Spectrum, solve_spectrum, sweep_trajectory, find_sweet_spots, flux_dispersion, wavefunction

@group Coherence:
    NoiseParams, RateTable, rate_table, coherence_report, lindblad_evolve

@group Fitting:
    FluxCalibration, TwoTonePeak, TwoToneDataset, fit_calibration, fit_circuit_params

@group Exceptions:
    FluxMolException, FluxMolWarning

@type __version__: str
@var __version__: This fluxmol release version.
"""

__revision__ = "$Id$"

__version__ = "0.1.0"
version_number = (0, 1, 0)

__all__ = [
           "__version__", 
           "version_number", 
           "CircuitParams", 
           "FluxPoint", 
           "BasisTruncation", 
           "NoiseParams", 
           "FluxCalibration", 
           "TwoTonePeak", 
           "TwoToneDataset", 
           "build_hamiltonian", 
           "build_full_hamiltonian", 
           "build_reduced_hamiltonian", 
           "build_disordered_hamiltonian", 
           "zeta_frequency", 
           "Spectrum", 
           "solve_spectrum", 
           "sweep_trajectory", 
           "find_sweet_spots", 
           "flux_dispersion", 
           "wavefunction", 
           "RateTable", 
           "rate_table", 
           "coherence_report", 
           "lindblad_evolve", 
           "fit_calibration", 
           "fit_circuit_params", 
           "FluxMolException", 
           "FluxMolWarning", 
           ]

import logging

from fluxmol.excep import FluxMolException, FluxMolWarning
from fluxmol.datatypes import CircuitParams, FluxPoint, BasisTruncation, NoiseParams, FluxCalibration, TwoTonePeak, TwoToneDataset
from fluxmol.circuit import build_hamiltonian, build_full_hamiltonian, build_reduced_hamiltonian, build_disordered_hamiltonian, zeta_frequency
from fluxmol.spectrum import Spectrum, solve_spectrum, sweep_trajectory, find_sweet_spots, flux_dispersion, wavefunction
from fluxmol.coherence import RateTable, rate_table, coherence_report, lindblad_evolve
from fluxmol.fluxcal import fit_calibration, fit_circuit_params

logging.getLogger(__name__).addHandler(logging.NullHandler())
