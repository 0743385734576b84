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

__revision__ = "$Id$"

__all__ = ['metadata', 'setup']

from setuptools import setup
from warnings import warn

import os
import re
import glob

# Get the base directory
here = os.path.dirname(__file__)
if not here:
    here = os.path.curdir

# Read the version without importing the package
with open(os.path.join(here, 'fluxmol', '__init__.py')) as fd:
    version = re.search(r'^__version__ = "([^"]+)"', fd.read(), re.M).group(1)

# Text describing the module (markdown)
try:
    readme = os.path.join(here, 'README.md')
    long_description = open(readme, 'r').read()
except Exception:
    warn("README.md file not found or unreadable!")
    long_description = """fluxmol computes spectra, coherence and flux calibrations of fluxonium molecules."""

# Get the list of scripts in the "tools" folder
scripts = glob.glob(os.path.join(here, 'tools', '*.py'))

# Set the parameters for the setup script
metadata = {

    # Setup instructions
    'provides'          : ['fluxmol'],
    'packages'          : ['fluxmol'],
    'scripts'           : scripts,
    'python_requires'   : '>=3.8',
    'install_requires'  : ['numpy>=1.20', 'scipy>=1.7'],
    'extras_require'    : {'tests': ['pytest>=6']},

    # Metadata
    'name'              : 'fluxmol',
    'version'           : version,
    'description'       : 'Spectra, coherence and flux calibration of two-fluxonium molecule qubits.',
    'long_description'  : long_description,
    'long_description_content_type' : 'text/markdown',
    'author'            : 'The fluxmol developers',
    'license'           : 'BSD 3-Clause',
    'keywords'          : ['fluxonium', 'superconducting', 'qubit', 'coherence', 'spectroscopy'],
    }

# Execute the setup script
if __name__ == '__main__':
    setup(**metadata)
