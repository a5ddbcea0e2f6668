"""Measurement-dependence bounds for Bell and network scenarios."""

import json

from . import _mdnet
from ._mdnet import (
    ArgumentError,
    CapacityError,
    Error,
    NameError,
    ParseError,
    cglmp_l1_lower,
    chsh_l1_lower,
    chsh_mi_lower,
    critical_visibility,
    fritz_theta_distribution,
    fritz_theta_paper_formula,
    max_over_deterministic,
    mermin_mi_lower,
    pinsker_mi_to_l1,
    verify_lemma1,
)

__all__ = [
    "ArgumentError",
    "CapacityError",
    "Error",
    "NameError",
    "ParseError",
    "bilocality",
    "bilocality_quantum_behavior",
    "cglmp_l1_lower",
    "chsh_l1_lower",
    "chsh_mi_lower",
    "critical_visibility",
    "evaluate",
    "figure7",
    "fritz_conditional",
    "fritz_distribution",
    "fritz_theta_distribution",
    "fritz_theta_paper_formula",
    "ghz_mermin_behavior",
    "max_over_deterministic",
    "mermin_mi_lower",
    "no_signaling_violation",
    "pinsker_mi_to_l1",
    "run_cli",
    "theta",
    "verify_lemma1",
]


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def evaluate(functional, behavior):
    return _mdnet.evaluate(functional, _text(behavior))


def bilocality(behavior):
    return _mdnet.bilocality(_text(behavior))


def no_signaling_violation(behavior):
    return _mdnet.no_signaling_violation(_text(behavior))


def theta(dist, x="X", y="Y", r=("R",)):
    value, argmin, *expressions = _mdnet.theta(_text(dist), x, y, list(r))
    return {"value": value, "argmin": argmin, "expressions": expressions}


def fritz_distribution(v):
    return json.loads(_mdnet.fritz_distribution(v))


def fritz_conditional(v):
    return json.loads(_mdnet.fritz_conditional(v))


def ghz_mermin_behavior():
    return json.loads(_mdnet.ghz_mermin_behavior())


def bilocality_quantum_behavior():
    return json.loads(_mdnet.bilocality_quantum_behavior())


def figure7(resolution=501):
    lines = _mdnet.figure7_csv(resolution).strip().splitlines()
    return [tuple(float(f) for f in line.split(",")) for line in lines[1:]]


def run_cli(*args):
    return _mdnet.run_cli([str(a) for a in args])
