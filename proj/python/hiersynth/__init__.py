"""Cost-optimal single-qubit gate sequences over Clifford-hierarchy rotation layers.

The heavy lifting lives in the compiled extension ``hiersynth._core``; this
package re-exports its public surface.
"""

from hiersynth._core import (
    BaseGate,
    CostModel,
    ExperimentRow,
    ExperimentSpec,
    ExperimentTable,
    FitResult,
    GateElement,
    GateSet,
    GateSetSpec,
    GrowthPolicy,
    ProportionParams,
    ProportionResult,
    Rng,
    ScalingReduction,
    SeqNode,
    SequenceDatabase,
    SynthesisResult,
    Synthesizer,
    VerifyReport,
    adjoint,
    build_gate_set,
    compose,
    empirical_proportions,
    fit_to_json,
    format_gate,
    gate_h,
    gate_s,
    gate_t,
    gate_x,
    gate_y,
    gate_z,
    haar_random_gate,
    identity_gate,
    ols_fit,
    parse_gate,
    proportions,
    run_experiment,
    rz,
    scaling_reduction,
    scan_synthesize,
    student_t_critical,
    table_from_json,
    trace_distance,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "BaseGate",
    "CostModel",
    "ExperimentRow",
    "ExperimentSpec",
    "ExperimentTable",
    "FitResult",
    "GateElement",
    "GateSet",
    "GateSetSpec",
    "GrowthPolicy",
    "ProportionParams",
    "ProportionResult",
    "Rng",
    "ScalingReduction",
    "SeqNode",
    "SequenceDatabase",
    "SynthesisResult",
    "Synthesizer",
    "VerifyReport",
    "adjoint",
    "build_gate_set",
    "compose",
    "empirical_proportions",
    "fit_to_json",
    "format_gate",
    "gate_h",
    "gate_s",
    "gate_t",
    "gate_x",
    "gate_y",
    "gate_z",
    "haar_random_gate",
    "identity_gate",
    "ols_fit",
    "parse_gate",
    "proportions",
    "run_experiment",
    "rz",
    "scaling_reduction",
    "scan_synthesize",
    "student_t_critical",
    "table_from_json",
    "trace_distance",
    "verify",
]
