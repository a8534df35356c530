"""Weakest liberal preconditions for hybrid programs.

Problems are given either as ``.hwl`` source text or as a ``pathlib.Path``.
Reports come back as plain dicts with the same layout as ``hybrid-wlp --json``.
"""

import json
import os

from . import _core
from ._core import Error, ParseError, law_ids

__all__ = ["Error", "ParseError", "verify", "certify", "falsify", "laws", "law_ids", "wlp", "format_problem"]
__version__ = _core.__version__


def _source(problem):
    if isinstance(problem, os.PathLike):
        return "", os.fspath(problem)
    return problem, ""


def verify(problem, **settings):
    """Generate and discharge all obligations. Keyword settings: seed, trials, step, horizon, ..."""
    return json.loads(_core.verify(*_source(problem), settings))


def certify(problem, only="", **settings):
    """Flow certificates and differential invariants only; ``only`` is "flow", "dinv" or ""."""
    text, origin = _source(problem)
    return json.loads(_core.certify(text, origin, only, settings))


def falsify(problem, **settings):
    return json.loads(_core.falsify(*_source(problem), settings))


def laws(model="rel", n=2, ids=(), exhaustive=True, seed=1, trials=1000):
    return json.loads(_core.laws(model, n, list(ids), exhaustive, seed, trials))


def wlp(program, post, consts=()):
    """Precondition text and side obligations for a bare program."""
    r = _core.wlp(program, post, list(consts))
    return {"pre": r["pre"], "obligations": [json.loads(o) for o in r["obligations"]]}


def format_problem(text):
    return _core.format(text)
