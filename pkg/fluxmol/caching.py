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
Memoization of single-mode operator matrices.
"""

__revision__ = "$Id$"

__all__ = [
           "Cache", 
           "get_cache", 
           "clear_caches", 
           "cached", 
           ]

import collections
import functools
import logging
import threading

import numpy as np

log = logging.getLogger(__name__)

caches = {}

class Cache(object):
    """Named cache; with C{maxsize} set, the least recently used entry is evicted first."""

    def __init__(self, name, maxsize = None):
        """
        @type name: str
        @param name: Registry name.
        
        @type maxsize: int
        @param maxsize: (Optional) Entry limit; unbounded if C{None}.
        """
        if maxsize is not None and maxsize < 1:
            raise ValueError("maxsize must be positive, got %r" % maxsize)
        self.name = name
        self.maxsize = maxsize
        self.cache = collections.OrderedDict()
        self.hits = 0
        self.misses = 0
        self.evictions = 0
        self._lock = threading.Lock()

    def __len__(self):
        return len(self.cache)

    def get(self, key):
        with self._lock:
            result = self.cache.get(key)
            if result is None:
                self.misses += 1
            else:
                self.hits += 1
                self.cache.move_to_end(key)
            return result

    def put(self, key, value):
        with self._lock:
            self.cache[key] = value
            self.cache.move_to_end(key)
            while self.maxsize is not None and len(self.cache) > self.maxsize:
                self.cache.popitem(last = False)
                self.evictions += 1

    def clear(self):
        with self._lock:
            self.cache.clear()
            self.hits = self.misses = self.evictions = 0

def get_cache(name, maxsize = None):
    cache = caches.get(name)
    if cache is None:
        cache = Cache(name, maxsize)
        caches[name] = cache
    return cache

def clear_caches():
    for cache in caches.values():
        cache.clear()

def _readonly(value):
    if isinstance(value, np.ndarray):
        value.flags.writeable = False
    elif isinstance(value, tuple):
        for item in value:
            _readonly(item)
    return value

def cached(*ids, maxsize = None):
    """
    Caches the results of a function of hashable arguments.
    
    Returned numpy arrays are shared between callers and therefore made read-only.
    Float arguments are rounded to 12 significant digits before hashing.
    
    @type maxsize: int
    @param maxsize: (Optional) Entries kept per function, least recently used evicted first.
    """
    def decorator(func):
        funcname = "#".join([func.__name__] + [str(_) for _ in ids])
        @functools.wraps(func)
        def decorated(*args):
            cache = get_cache(funcname, maxsize)
            key = tuple(float("%.12g" % a) if isinstance(a, float) else a for a in args)
            result = cache.get(key)
            if result is None:
                log.debug("cache miss in %s for %r", funcname, key)
                result = _readonly(func(*args))
                cache.put(key, result)
            return result
        decorated.cache = lambda: get_cache(funcname, maxsize)
        return decorated
    return decorator
