"""Streaming symmetric means with mergeable accumulator states."""

import json

from ._core import Descriptor, Error, State, init, parse_state, evaluate
from . import _core

__all__ = [
    "Descriptor",
    "Error",
    "State",
    "classify",
    "descriptor",
    "evaluate",
    "init",
    "myhill",
    "parse_state",
    "run_suite",
]


def descriptor(family, **params):
    return _core.descriptor(json.dumps({"family": family, **params}))


def classify(desc):
    return json.loads(_core.classify(desc))


def run_suite(desc, seed=20190307):
    return [json.loads(line) for line in _core.run_suite(desc, seed)]


def myhill(desc, alphabet, max_len, probe_len=2):
    return json.loads(_core.myhill(desc, list(alphabet), max_len, probe_len))
