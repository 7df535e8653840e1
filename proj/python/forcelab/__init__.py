"""Python access to the forcelab core. Rationals are passed as "p/q" strings."""

import json

from . import _core
from ._core import (
    ForcelabError,
    binom_cdf,
    cichon_two_valued_count,
    fam_size_bound,
    find_k,
    success_probs,
    zeta_tilde,
)

__all__ = [
    "ForcelabError",
    "approximate_support",
    "bad_branch_measure",
    "binom_cdf",
    "cichon_check",
    "cichon_two_valued_count",
    "extract_delta",
    "fam_size_bound",
    "find_k",
    "run_suite",
    "success_probs",
    "zeta_tilde",
]


def approximate_support(measure, eps, k_star=0):
    return json.loads(_core.approximate_support(json.dumps(measure), str(eps), k_star))


def extract_delta(supports, min_size):
    return json.loads(_core.extract_delta(json.dumps(supports), min_size))


def bad_branch_measure(tree, jobs):
    pairs = [(list(j["levels"]), int(j["threshold"])) for j in jobs]
    return json.loads(_core.bad_branch_measure(json.dumps(tree), pairs))


def cichon_check(assignment):
    return _core.cichon_check(json.dumps(assignment))


def run_suite(name, trials=100, seed=0):
    return json.loads(_core.run_suite(name, trials, seed))
