"""Regular asynchronous systems: signals, schedules, generator functions,
the asynchronous solver, system combinators and a theorem harness."""

from .errors import ArsError, NonStabilizing
from .genfn import GeneratorFunction, dual, parallel, parse_genfn, product, serial_star
from .schedule import Schedule, pair_schedules
from .signal import Signal, bits, canonicalize, complement, pair, project
from .solver import MembershipResult, OscillationReport, membership, solve
from .systems import ExplicitSystem

__all__ = [
    "ArsError", "NonStabilizing", "GeneratorFunction", "dual", "parallel", "parse_genfn",
    "product", "serial_star", "Schedule", "pair_schedules", "Signal", "bits", "canonicalize",
    "complement", "pair", "project", "MembershipResult", "OscillationReport", "membership",
    "solve", "ExplicitSystem",
]
__version__ = "0.1.0"
