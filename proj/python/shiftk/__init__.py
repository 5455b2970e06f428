"""Invariants of one-sided shift spaces.

Presentations may be given as JSON text, a dict, or a path to a JSON file.
"""

import json
import os

from . import _shiftk
from ._shiftk import CapExceeded, NotStabilized, ShiftkError, __version__

__all__ = [
    "CapExceeded",
    "NotStabilized",
    "ShiftkError",
    "canonical",
    "classes",
    "compare",
    "invariants",
    "transform",
    "verify_model",
]


def _text(p):
    if isinstance(p, dict):
        return json.dumps(p)
    if isinstance(p, os.PathLike) or (isinstance(p, str) and not p.lstrip().startswith("{")):
        with open(p, encoding="utf-8") as f:
            return f.read()
    return p


def canonical(p):
    return json.loads(_shiftk.canonical(_text(p)))


def invariants(p, lmax=12):
    return json.loads(_shiftk.invariants(_text(p), lmax))


def classes(p, lmax=12, signatures=True):
    return json.loads(_shiftk.classes(_text(p), lmax, signatures))


def transform(p, move):
    """Apply a move descriptor; returns a list of reports (two for split)."""
    move = move if isinstance(move, str) else json.dumps(move)
    return [json.loads(r) for r in _shiftk.transform(_text(p), move)]


def compare(a, b, lmax=12):
    return json.loads(_shiftk.compare(_text(a), _text(b), lmax))


def verify_model(p, L=3):
    return json.loads(_shiftk.verify_model(_text(p), L))
