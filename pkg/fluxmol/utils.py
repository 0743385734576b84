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
Auxiliary classes and functions.

@group Flux units:
    flux_to_radians, flux_from_radians

@group Matrix checks:
    hermiticity_error, is_hermitian

@group Concurrency:
    parallel_map

@group JSON and CSV artifacts:
    to_jsonable, stamp, check_schema, write_json, read_json, write_csv, read_csv
"""

__revision__ = "$Id$"

__all__ = [
           "flux_to_radians", 
           "flux_from_radians", 
           "hermiticity_error", 
           "is_hermitian", 
           "to_jsonable", 
           "stamp", 
           "check_schema", 
           "write_json", 
           "read_json", 
           "write_csv", 
           "read_csv", 
           "parallel_map", 
           ]

import csv
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as sparse_linalg

from fluxmol import consts
from fluxmol import excep

log = logging.getLogger(__name__)

FLUX_UNITS = ("rad", "two-pi")

def _check_units(units):
    if units not in FLUX_UNITS:
        raise excep.InvalidParameterException("Unknown flux units %r, expected one of %s." % (units, ", ".join(FLUX_UNITS)))

def flux_to_radians(value, units = "rad"):
    """
    Converts a flux value (or array) to radians.
    
    @type value: float or numpy.ndarray
    @param value: Flux in C{units}.
    
    @type units: str
    @param units: (Optional) "rad" or "two-pi" (units of 2*pi, i.e. Phi/Phi_0).
    
    @rtype: float or numpy.ndarray
    """
    _check_units(units)
    if units == "two-pi":
        return np.multiply(value, consts.TWO_PI)
    return value

def flux_from_radians(value, units = "rad"):
    """
    Inverse of L{flux_to_radians}.
    """
    _check_units(units)
    if units == "two-pi":
        return np.divide(value, consts.TWO_PI)
    return value

def hermiticity_error(matrix):
    """
    @type matrix: numpy.ndarray or scipy.sparse matrix
    @param matrix: Square matrix.
    
    @rtype: float
    @return: C{||M - M^dagger||_F / ||M||_F}, 0 for the zero matrix.
    """
    diff = matrix - matrix.conj().T
    if sparse.issparse(matrix):
        num, den = sparse_linalg.norm(diff), sparse_linalg.norm(matrix)
    else:
        num, den = np.linalg.norm(diff), np.linalg.norm(matrix)
    if den == 0:
        return 0.0
    return float(num / den)

def is_hermitian(matrix, tol = consts.HERMITICITY_TOL):
    """
    @rtype: bool
    @return: C{True} if L{hermiticity_error} is below C{tol}.
    """
    return hermiticity_error(matrix) < tol

def to_jsonable(obj):
    """
    Recursively converts numpy scalars/arrays, complex numbers, tuples and records
    with a C{to_dict} method to plain JSON types. Complex values become
    C{{"re": x, "im": y}}.
    """
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return dict((str(k), to_jsonable(v)) for k, v in obj.items())
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"re": obj.real.tolist(), "im": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj

def stamp(doc, schema = consts.SCHEMA):
    """
    @rtype: dict
    @return: A copy of C{doc} carrying the schema tag as its first key.
    """
    out = {"schema": schema}
    for k, v in doc.items():
        if k != "schema":
            out[k] = v
    return out

def check_schema(doc, source = "<document>"):
    """
    @raise SchemaException: The document has no schema tag or an unsupported version.
    """
    schema = doc.get("schema") if isinstance(doc, dict) else None
    if schema is None:
        raise excep.SchemaException("%s carries no schema tag." % source)
    if schema != consts.SCHEMA:
        raise excep.SchemaException("%s has unsupported schema %r (expected %r)." % (source, schema, consts.SCHEMA))
    return doc

def write_json(path, doc):
    """
    Writes a stamped JSON artifact. Keys keep their insertion order.
    
    @type path: str
    @param path: Destination file.
    
    @type doc: dict
    @param doc: Payload; converted with L{to_jsonable}.
    """
    with open(path, "w") as fd:
        json.dump(stamp(to_jsonable(doc)), fd, indent = 2)
        fd.write("\n")
    log.debug("wrote %s", path)
    return path

def read_json(path, require_schema = True):
    """
    Reads a JSON document.
    
    @type require_schema: bool
    @param require_schema: (Optional) If C{True}, the document must carry the current schema tag.
    
    @raise ConfigException: The file is missing or is not valid JSON.
    @raise SchemaException: Schema tag missing or unsupported.
    """
    if not os.path.isfile(path):
        raise excep.ConfigException("file not found: %s" % path, field = path)
    with open(path) as fd:
        try:
            doc = json.load(fd)
        except ValueError as e:
            raise excep.ConfigException("invalid JSON (%s)" % e, field = path)
    if require_schema:
        check_schema(doc, path)
    return doc

def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return "%.15g" % value
    return str(value)

def write_csv(path, header, rows):
    """
    Writes rows to a CSV file with a fixed float format, so repeated runs give
    byte-identical files.
    
    @type header: list of str
    @param header: Column names.
    
    @type rows: iterable of sequences
    @param rows: One sequence per row, same length as C{header}.
    """
    with open(path, "w", newline = "") as fd:
        writer = csv.writer(fd, lineterminator = "\n")
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise excep.InvalidParameterException("CSV row has %d cells, header has %d." % (len(row), len(header)))
            writer.writerow([_cell(v) for v in row])
    log.debug("wrote %s", path)
    return path

def read_csv(path):
    """
    @rtype: list of dict
    @return: One dictionary per row, keyed by column name. Empty cells become C{None}.
    
    @raise ConfigException: Missing file.
    """
    if not os.path.isfile(path):
        raise excep.ConfigException("file not found: %s" % path, field = path)
    with open(path, newline = "") as fd:
        rows = []
        for row in csv.DictReader(fd):
            rows.append(dict((k, (v if v != "" else None)) for k, v in row.items()))
    return rows

def parallel_map(func, items, threads = 1):
    """
    Applies C{func} to every item, on a thread pool when C{threads > 1}.
    
    @rtype: list
    @return: Results in input order.
    """
    items = list(items)
    if threads and threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers = threads) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]
