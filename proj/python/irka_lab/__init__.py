"""IRKA model reduction with fixed-point certification."""

import json

from ._core import (
    IrkaLabError,
    System,
    diagonal,
    h2_norm,
    hermite_residual,
    interpolant,
    parse_system,
    random_sss,
    rc_ladder,
)
from . import _core

__all__ = [
    "IrkaLabError",
    "System",
    "certify",
    "diagonal",
    "error_zeros",
    "h2_error",
    "h2_norm",
    "hermite_residual",
    "interpolant",
    "irka",
    "parse_system",
    "random_sss",
    "rc_ladder",
    "reduce_report",
]


def h2_error(full, reduced):
    """Gramian and pole-residue H2 error of full - reduced, as a dict."""
    return json.loads(_core._h2_error(full, reduced))


def irka(sys, r, tol=1e-10, max_sweeps=200, init="logspace", seed=0):
    """Run IRKA; returns (reduced System, trace dict)."""
    reduced, trace = _core._irka(sys, r, tol, max_sweeps, init, seed)
    return reduced, json.loads(trace)


def certify(full, reduced):
    return json.loads(_core._certify(full, reduced))


def error_zeros(full, reduced):
    return json.loads(_core._error_zeros(full, reduced))


def reduce_report(system_text, r, tol=1e-10, max_sweeps=200, init="logspace", seed=0, certify=True):
    """Same report as `irka-lab reduce --no-timings`; returns (dict, exit code)."""
    text, code = _core._reduce_report(system_text, r, tol, max_sweeps, init, seed, certify)
    return json.loads(text), code
