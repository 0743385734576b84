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
Base classes.
"""

__revision__ = "$Id$"

import json
import inspect

class BaseRecord(object):
    """
    Base class containing methods used by the value types of the library.
    
    Subclasses list their public attributes in C{_attrsList}, in the order they
    should be reported, and call L{_freeze} at the end of C{__init__}. Frozen
    records reject attribute assignment.
    
    C{_jsonKeys} optionally maps attribute names to the keys used by the
    external JSON representation.
    """
    _jsonKeys = {}

    def __init__(self):
        object.__setattr__(self, "_attrsList", [])
        object.__setattr__(self, "_frozen", False)

    def __setattr__(self, name, value):
        if getattr(self, "_frozen", False):
            raise AttributeError("%s objects are immutable (tried to set %s)." % (self.__class__.__name__, name))
        object.__setattr__(self, name, value)

    def __dir__(self):
        return sorted(self._attrsList or self.__dict__.keys())

    def __repr__(self):
        fields = ", ".join("%s=%r" % (k, v) for k, v in self.get_fields().items())
        return "%s(%s)" % (self.__class__.__name__, fields)

    def __eq__(self, other):
        if not isinstance(other, self.__class__):
            return NotImplemented
        return self._key() == other._key()

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash((self.__class__.__name__,) + self._key())

    def _key(self):
        key = []
        for value in self.get_fields().values():
            if isinstance(value, list):
                value = tuple(value)
            elif isinstance(value, dict):
                value = tuple(sorted(value.items()))
            key.append(value)
        return tuple(key)

    def _freeze(self):
        object.__setattr__(self, "_frozen", True)

    def get_fields(self):
        """
        Returns all the record attributes.
        
        @rtype: dict
        @return: A dictionary containing all the record attributes, in declaration order.
        """
        d = {}
        for i in self._attrsList:
            d[i] = getattr(self, i)
        return d

    def replace(self, **changes):
        """
        Returns a copy of the record with some attributes changed.
        
        @rtype: L{BaseRecord}
        @return: A new record of the same class.
        """
        fields = self.get_fields()
        fields.update(changes)
        return self.__class__(**fields)

    def to_dict(self):
        """
        Returns the external (JSON) representation of the record.
        
        @rtype: dict
        @return: Attribute values keyed by their external names.
        """
        d = {}
        for name, value in self.get_fields().items():
            d[self._jsonKeys.get(name, name)] = value
        return d

    @classmethod
    def from_dict(cls, d):
        """
        Builds a record from its external representation.
        
        @type d: dict
        @param d: Values keyed by external names. Unknown keys are ignored.
        
        @rtype: L{BaseRecord}
        @return: A new record.
        """
        reverse = dict((v, k) for k, v in cls._jsonKeys.items())
        kwargs = {}
        for key, value in d.items():
            name = reverse.get(key, key)
            kwargs[name] = value
        accepted = cls._acceptedNames()
        return cls(**dict((k, v) for k, v in kwargs.items() if k in accepted))

    @classmethod
    def _acceptedNames(cls):
        return set(inspect.signature(cls.__init__).parameters) - set(["self"])

    def to_json(self):
        """
        @rtype: str
        @return: The JSON text of L{to_dict}.
        """
        return json.dumps(self.to_dict(), sort_keys = True)

    def validate(self):
        """
        This method should be implemented in the inherited classes. When implemented, checks
        the record invariants.
        
        @raise NotImplementedError: The method wasn't implemented in the inherited class.
        """
        raise NotImplementedError("validate() method not implemented.")
