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
Common definitions.

Physical constants, default cutoffs and tolerances, flux symmetry points
and the device/noise presets. This is the only module where physical
constants appear.
"""

__revision__ = "$Id$"

import math

from scipy import constants as _sc

# Physical constants (SI unless stated otherwise)
H = _sc.h
HBAR = _sc.hbar
E_CHARGE = _sc.e
K_B = _sc.k
PHI0 = HBAR / (2 * E_CHARGE)       # reduced flux quantum, Wb
R_K = H / E_CHARGE ** 2            # resistance quantum, Ohm
GHZ = 1.0e9
KB_OVER_H_GHZ = K_B / H / GHZ      # 20.836619 GHz/K
H_EV_S = H / E_CHARGE              # Planck constant in eV*s

TWO_PI = 2.0 * math.pi

# Basis truncation
DEFAULT_N_PHI = 35
DEFAULT_N_THETA = 35
DEFAULT_N_ZETA = 6
MIN_CUTOFF = 4
MEMORY_GUARD = 2000000

# Entries per single-mode operator cache; keys include the oscillator length
OPERATOR_CACHE_SIZE = 32

# Above this dimension the sparse Lanczos solver is used
DENSE_SOLVER_LIMIT = 4000

# Tolerances
HERMITICITY_TOL = 1e-10
DEGENERACY_TOL = 1e-6              # GHz
ORTHONORMALITY_TOL = 1e-8
SWEET_SPOT_TOL = 1e-4              # GHz/rad
SWEET_SPOT_LABEL_RADIUS = 1e-2     # rad

# Finite differences
FD_STEP = 1e-3
FD_STEP_MIN = 1e-4
FD_STEP_MAX = 1e-1

# Wavefunction grids
WAVEFUNCTION_EXTENT = 4 * math.pi
WAVEFUNCTION_POINTS = 241

# Regime flags
PROTOMON_EL_EJ_RATIO = 0.2

# Flux points with inversion symmetry; I and I' carry the same Hamiltonian
SWEET_SPOTS = [
    ("I", (math.pi, -math.pi)),
    ("I'", (2 * math.pi, 0.0)),
    ("II", (math.pi, 0.0)),
    ("III", (1.5 * math.pi, -0.5 * math.pi)),
]

# Members (modulo 2*pi) of each sweet-spot class. Shifting both fluxes by pi
# leaves the Hamiltonian unchanged, so II and III have several members.
SWEET_SPOT_CLASSES = [
    ("I", [(math.pi, math.pi)]),
    ("I'", [(0.0, 0.0)]),
    ("II", [(math.pi, 0.0), (0.0, math.pi)]),
    ("III", [(0.5 * math.pi, 0.5 * math.pi), (1.5 * math.pi, 1.5 * math.pi), 
             (0.5 * math.pi, 1.5 * math.pi), (1.5 * math.pi, 0.5 * math.pi)]),
]

# Loss models
CHANNEL_CAP = "cap"
CHANNEL_IND = "ind"
CHANNEL_QP = "qp"
CHANNELS = (CHANNEL_CAP, CHANNEL_IND, CHANNEL_QP)

Q_CAP_REF_OMEGA = TWO_PI * 6.0e9
Q_CAP_EXPONENT = 0.7
Q_IND_REF_OMEGA = TWO_PI * 0.5e9

DEFAULT_TEMPERATURE = 0.05         # K
DEFAULT_Q_CAP = 1.0e6
DEFAULT_Q_IND = 5.0e8
DEFAULT_GAP = 3.4e-4               # eV
DEFAULT_X_QP = 1.0e-8
DEFAULT_FLUX_NOISE_AMP = TWO_PI * 1.0e-6   # rad, about 1 micro flux quantum
DEFAULT_OMEGA_IR = TWO_PI * 1.0    # rad/s
DEFAULT_RAMSEY_TIME = 10.0e-6      # s

DEFAULT_RATE_STATES = 4

# Master equation integrator
LINDBLAD_RTOL = 1e-10
LINDBLAD_ATOL = 1e-12

# Spectrum fitting
ASSIGNMENT_WINDOW = 0.3            # GHz
AMBIGUOUS_WEIGHT = 0.5
FIT_RESTARTS = 8
FIT_RESTART_SPREAD = 0.2
MISFIT_FACTOR = 5.0
FIT_N_PHI = 20
FIT_N_THETA = 20
FIT_N_ZETA = 4

# Artifacts
SCHEMA = "fluxmol/v1"
SCHEMA_PREFIX = "fluxmol/v"

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3

# Circuit presets, energies E/h in GHz
DEVICES = {
    "fig2": {"EJ_GHz": 11.0, "EL_GHz": 0.36, "ELs_GHz": 0.36, "ECJ_GHz": 2.5, "EC_GHz": 50.0},
    "device1": {"EJ_GHz": 5.9, "EL_GHz": 0.15, "ELs_GHz": 0.15, "ECJ_GHz": 2.4, "EC_GHz": 4.5},
    "device2": {"EJ_GHz": 7.0, "EL_GHz": 0.30, "ELs_GHz": 0.30, "ECJ_GHz": 3.5, "EC_GHz": 7.8},
    "device3": {"EJ_GHz": 11.0, "EL_GHz": 0.36, "ELs_GHz": 0.36, "ECJ_GHz": 2.5, "EC_GHz": 3.8},
    "device4": {"EJ_GHz": 8.5, "EL_GHz": 0.48, "ELs_GHz": 0.48, "ECJ_GHz": 2.5, "EC_GHz": 5.0},
}

# Hopping model: "much larger than" is read as a ratio of at least this value
HOPPING_REGIME_RATIO = 2.0

# Default spectroscopy peak uncertainty, GHz
DEFAULT_SIGMA = 0.01

# Sweet-spot refinement
SWEET_SPOT_MAX_ITER = 20
SWEET_SPOT_MAX_STEP = 0.5
SWEET_SPOT_DEFAULT_GRID = 8
SWEET_SPOT_MERGE_RADIUS = 1e-3
