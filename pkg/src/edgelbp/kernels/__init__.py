"""Hot pixel-scan kernels with switchable backends.

Two implementations exist for every kernel: a numba-compiled loop
(``_numba``) and a vectorized pure-numpy fallback (``_numpy``). Both
produce identical integer counts, so every feature value downstream is
bit-identical across backends.

Selection, checked once at import:

* ``EDGELBP_BACKEND=numba``  force numba (error if not importable)
* ``EDGELBP_BACKEND=numpy``  force the pure-numpy path
* unset or ``auto``          numba when importable, else numpy

``set_backend`` switches at runtime (used by tests and the benchmark).
"""

import os

from . import _numpy

_BACKENDS = {"numpy": _numpy}

try:
    from . import _numba

    _BACKENDS["numba"] = _numba
except ImportError:  # numba genuinely absent; numpy path still works
    _numba = None


def available_backends():
    return tuple(sorted(_BACKENDS))


def _resolve(name):
    if name == "auto":
        return _BACKENDS.get("numba", _numpy)
    if name not in _BACKENDS:
        if name == "numba":
            raise RuntimeError("EDGELBP_BACKEND=numba requested but numba is not importable")
        raise ValueError(f"unknown kernel backend {name!r}; choose from numpy, numba, auto")
    return _BACKENDS[name]


_active = _resolve(os.environ.get("EDGELBP_BACKEND", "auto").strip().lower() or "auto")


def active_backend():
    """Name of the backend currently answering kernel calls."""
    return _active.NAME


def set_backend(name):
    """Switch kernel backend; returns the name that ended up active."""
    global _active
    _active = _resolve(name)
    return _active.NAME


def edm1_counts(edge):
    return _active.edm1_counts(edge)


def edm2_counts(edge, priority):
    return _active.edm2_counts(edge, priority)


def lbp_code_map(gray):
    return _active.lbp_code_map(gray)


def glcm_counts(quantized, dx, dy, levels):
    return _active.glcm_counts(quantized, dx, dy, levels)
