"""Exact-arithmetic toolkit for cost-bounded control-state reachability in
priced timed Petri nets.

The pipeline goes from concrete rational-time semantics (`nets`), through
fractional-part analysis and cost-preserving retiming (`deltaform`), the
untimed three-part abstraction (`abstraction`) and its budgeted variant
(`budget`), to generic well-quasi-order engines (`wqo`), transfer-net
backends (`sdtn`), the word-encoding compiler (`encoder`) and the top-level
decision procedures (`solver`).
"""

from .intervals import Interval, age_in, frac_match, parse_interval
from .mset import Multiset
from .nets import (
    Configuration,
    DiscreteStep,
    NetError,
    PTPN,
    Run,
    TimedStep,
    Transition,
    Witness,
    build_run,
    enabled_discrete,
    fire_discrete,
    marking,
    match,
    run_cost,
    timed_step,
)

__all__ = [
    "Interval",
    "age_in",
    "frac_match",
    "parse_interval",
    "Multiset",
    "Configuration",
    "DiscreteStep",
    "NetError",
    "PTPN",
    "Run",
    "TimedStep",
    "Transition",
    "Witness",
    "build_run",
    "enabled_discrete",
    "fire_discrete",
    "marking",
    "match",
    "run_cost",
    "timed_step",
]

__version__ = "0.1.0"
