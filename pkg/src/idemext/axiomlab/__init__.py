"""Randomized axiom checks with deterministic, replayable reports."""

from .core import REGISTRY, Check, Tamper
from .gen import gen_class, gen_idempotent, gen_kar_object, gen_object
from .runner import (
    Report,
    TrialConfig,
    build_report,
    make_payload,
    replay,
    run_payload,
    run_suite,
    trial_rng,
)

__all__ = [
    "REGISTRY",
    "Check",
    "Report",
    "Tamper",
    "TrialConfig",
    "build_report",
    "gen_class",
    "gen_idempotent",
    "gen_kar_object",
    "gen_object",
    "make_payload",
    "replay",
    "run_payload",
    "run_suite",
    "trial_rng",
]
