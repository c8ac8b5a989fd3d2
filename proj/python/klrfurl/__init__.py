"""Exact unfurlings of Cartan data from KLR parameter polynomials.

Thin wrapper over the C++ core; every function speaks JSON strings, and the
helpers here parse them into plain Python objects.
"""

import json as _json

from ._core import (
    FieldError,
    ParseError,
    PreconditionError,
    cartan_matrix,
    complete_spectra,
    fixture,
    fixture_names,
    sigma_check,
    unfurl,
    validate_params,
    verify_klr,
    verify_nu,
)

__all__ = [
    "FieldError",
    "ParseError",
    "PreconditionError",
    "cartan_matrix",
    "complete_spectra",
    "fixture",
    "fixture_names",
    "load_fixture",
    "sigma_check",
    "unfurl",
    "validate_params",
    "verify_klr",
    "verify_nu",
]


def load_fixture(name):
    """Fixture as a dict with 'datum', 'pack' and 'spectra' entries."""
    return _json.loads(fixture(name))
