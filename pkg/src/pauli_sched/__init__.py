"""Pauli frame tracking through Clifford circuits and MBQC scheduling."""

from .circuit import CircuitError, Instruction, parse_circuit, run_circuit
from .instances import InstanceSpec, density_for_size, random_frames, random_graph
from .pauli import (
    GateKind,
    PauliEnc,
    apply_gate_rule,
    conjugate_cx,
    conjugate_cz,
    conjugate_h,
    conjugate_s,
)
from .schedule import (
    Cost,
    CycleError,
    Graph,
    OrderDag,
    PatternError,
    Schedule,
    Violation,
    cost_of,
    order_from_frames,
    schedule_from_pattern,
    transitive_reduction,
    trivial_time_optimal,
    validate_pattern,
    validate_schedule,
)
from .search import (
    AcceptanceParams,
    ParetoFront,
    SearchConfig,
    SearchResult,
    accept_probability,
    measurable_now,
    search,
    search_approximate,
    search_exact,
)
from .tracker import FramesTracker, LiveTracker, MeasuredStack, TrackerError

__version__ = "0.1.0"

__all__ = [
    "AcceptanceParams",
    "CircuitError",
    "Cost",
    "CycleError",
    "FramesTracker",
    "GateKind",
    "Graph",
    "InstanceSpec",
    "Instruction",
    "LiveTracker",
    "MeasuredStack",
    "OrderDag",
    "ParetoFront",
    "PatternError",
    "PauliEnc",
    "Schedule",
    "SearchConfig",
    "SearchResult",
    "TrackerError",
    "Violation",
    "accept_probability",
    "apply_gate_rule",
    "conjugate_cx",
    "conjugate_cz",
    "conjugate_h",
    "conjugate_s",
    "cost_of",
    "density_for_size",
    "measurable_now",
    "order_from_frames",
    "parse_circuit",
    "random_frames",
    "random_graph",
    "run_circuit",
    "schedule_from_pattern",
    "search",
    "search_approximate",
    "search_exact",
    "transitive_reduction",
    "trivial_time_optimal",
    "validate_pattern",
    "validate_schedule",
]
