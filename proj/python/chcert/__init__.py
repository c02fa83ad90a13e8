# SPDX-License-Identifier: Apache-2.0
"""Weight conditions, discretization and a ratio oracle for three-weight
Copson-Hardy inequalities (compiled core)."""

import json

from ._core import (
    DomainError,
    Interval,
    NumericalError,
    Parameters,
    Weight,
    WeightTriple,
    __version__,
    certify,
    compute_C,
    discretize,
    lemma_suite_names,
    maximize_ratio,
    run_command,
    run_lemma_suite,
)


def report(command, config_text):
    """Parsed JSON report of a subcommand (not for sweep, which is CSV)."""
    return json.loads(run_command(command, config_text))


__all__ = [
    "DomainError",
    "Interval",
    "NumericalError",
    "Parameters",
    "Weight",
    "WeightTriple",
    "__version__",
    "certify",
    "compute_C",
    "discretize",
    "lemma_suite_names",
    "maximize_ratio",
    "report",
    "run_command",
    "run_lemma_suite",
]
