"""Semirings used by the multiplication kernels.

A semiring is described by scalar ``add``/``multiply`` functions plus the two
identities. The functions must be compilable by :func:`numba.njit`; the jitted
versions are built lazily and cached on the instance.
"""
from dataclasses import dataclass, field

import numba
import numpy as np

__all__ = ["Semiring", "REAL", "INTEGER", "BOOLEAN", "get_semiring"]


@dataclass(frozen=True, eq=False)
class Semiring:
    name: str
    dtype: np.dtype
    zero: object
    one: object
    add: object
    multiply: object
    _jit: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dtype", np.dtype(self.dtype))
        object.__setattr__(self, "zero", self.dtype.type(self.zero))
        object.__setattr__(self, "one", self.dtype.type(self.one))

    @property
    def jit_add(self):
        if "add" not in self._jit:
            self._jit["add"] = numba.njit(nogil=True)(self.add)
        return self._jit["add"]

    @property
    def jit_multiply(self):
        if "mul" not in self._jit:
            self._jit["mul"] = numba.njit(nogil=True)(self.multiply)
        return self._jit["mul"]

    def cast(self, values):
        return np.asarray(values).astype(self.dtype, copy=False)

    def __repr__(self):
        return f"Semiring({self.name!r}, dtype={self.dtype})"


def _plus(a, b):
    return a + b


def _times(a, b):
    return a * b


def _lor(a, b):
    return a or b


def _land(a, b):
    return a and b


REAL = Semiring("real", np.float64, 0.0, 1.0, _plus, _times)
INTEGER = Semiring("integer", np.int64, 0, 1, _plus, _times)
BOOLEAN = Semiring("boolean", np.bool_, False, True, _lor, _land)

_BY_NAME = {s.name: s for s in (REAL, INTEGER, BOOLEAN)}
_BY_NAME.update({"plus_times": REAL, "int": INTEGER, "bool": BOOLEAN, "or_and": BOOLEAN})


def get_semiring(name):
    """Look up a shipped semiring by name (``real``, ``integer``, ``boolean``)."""
    if isinstance(name, Semiring):
        return name
    try:
        return _BY_NAME[name]
    except KeyError:
        raise ValueError(
            f"unknown semiring {name!r}; expected one of real, integer, boolean"
        ) from None
