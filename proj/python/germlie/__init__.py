"""Germ spaces, germ groups and complexifications: Python access to the C++ core."""

import json as _json

from ._germlie import (
    DomainError,
    EvaluationError,
    PreconditionError,
    StructuralError,
    bch,
    expm,
    lie_norm,
    logm,
    suite_names,
)
from . import _germlie

__all__ = [
    "DomainError",
    "EvaluationError",
    "PreconditionError",
    "StructuralError",
    "bch",
    "certify_atlas",
    "example_atlas",
    "expm",
    "lie_norm",
    "logm",
    "run_check",
    "run_suite",
    "suite_names",
]


def run_suite(suite="all", **config):
    """Run a suite and return the report as a dict."""
    return _json.loads(_germlie.run_suite_json(suite, **config))


def run_check(name, **config):
    """Run one named check (e.g. "bch_pairs") and return its report."""
    return _json.loads(_germlie.run_check_json(name, **config))


def example_atlas(name="circle"):
    return _json.loads(_germlie.example_atlas_json(name))


def certify_atlas(atlas, height=0.5):
    """Extend a real atlas (dict in the atlas JSON format) and certify its cocycles."""
    return _json.loads(_germlie.certify_atlas_json(_json.dumps(atlas), height))
