"""Problem instances, QUBO builders, decoders, and exact classical oracles."""

from __future__ import annotations

from dataclasses import dataclass

from ..constraints import PenaltyConfig
from ..model import QuadraticBinaryModel, VariableRegistry
from .binpacking import (
    BPP_ORACLE_CAP,
    bpp_labels,
    bpp_optimal_assignments,
    build_bpp_qubo,
    decode_bpp,
    oracle_bpp,
)
from .instances import (
    BppInstance,
    DecodedSolution,
    KpInstance,
    ProblemInstance,
    TspInstance,
    generate,
    instance_from_json,
    instance_to_json,
)
from .knapsack import KP_ORACLE_CAP, build_kp_qubo, decode_kp, kp_labels, kp_optimal_assignments, oracle_kp
from .tsp import (
    TSP_ORACLE_CAP,
    build_tsp_qubo,
    decode_tsp,
    oracle_tsp,
    subtour_subsets,
    tsp_labels,
    tsp_optimal_assignments,
)

__all__ = [
    "BppInstance",
    "DecodedSolution",
    "KpInstance",
    "OracleResult",
    "ProblemInstance",
    "TspInstance",
    "build_qubo",
    "decode",
    "generate",
    "instance_from_json",
    "instance_to_json",
    "optimal_assignments",
    "oracle_solve",
    "problem_labels",
    "subtour_subsets",
]


@dataclass(frozen=True)
class OracleResult:
    """Exact optimum: objective, one optimal assignment, and the tie count."""

    objective: float
    best_assignment: dict[str, int]
    num_optimal: int


def problem_labels(instance: ProblemInstance) -> list[str]:
    if isinstance(instance, TspInstance):
        return tsp_labels(instance.n)
    if isinstance(instance, KpInstance):
        return kp_labels(instance.n)
    if isinstance(instance, BppInstance):
        return bpp_labels(instance.n, instance.m)
    raise TypeError(f"not a problem instance: {instance!r}")


def build_qubo(
    instance: ProblemInstance,
    encoding: str,
    config: PenaltyConfig,
    apply_simplifications: bool = True,
) -> tuple[QuadraticBinaryModel, VariableRegistry]:
    """Build the penalized QUBO for any instance kind under either encoding."""
    if isinstance(instance, TspInstance):
        return build_tsp_qubo(instance, encoding, config)
    if isinstance(instance, KpInstance):
        return build_kp_qubo(instance, encoding, config)
    if isinstance(instance, BppInstance):
        return build_bpp_qubo(instance, encoding, config, apply_simplifications)
    raise TypeError(f"not a problem instance: {instance!r}")


def decode(bits, registry: VariableRegistry, instance: ProblemInstance) -> DecodedSolution:
    """Judge feasibility against the original constraints; slack bits are ignored."""
    if len(bits) != registry.num_vars:
        from ..errors import DimensionError

        raise DimensionError(
            f"bitstring has length {len(bits)}, registry has {registry.num_vars} free variables"
        )
    if isinstance(instance, TspInstance):
        return decode_tsp(bits, registry, instance)
    if isinstance(instance, KpInstance):
        return decode_kp(bits, registry, instance)
    if isinstance(instance, BppInstance):
        return decode_bpp(bits, registry, instance)
    raise TypeError(f"not a problem instance: {instance!r}")


def oracle_solve(instance: ProblemInstance) -> OracleResult:
    """Exact optimum with deterministic tie-reporting (lexicographically smallest)."""
    if isinstance(instance, TspInstance):
        objective, assignments = tsp_optimal_assignments(instance)
        ordered = sorted(assignments, key=lambda a: tuple(a[l] for l in tsp_labels(instance.n)))
        return OracleResult(objective, ordered[0], len(assignments))
    if isinstance(instance, KpInstance):
        optimum, assignments = kp_optimal_assignments(instance)
        return OracleResult(float(optimum), assignments[0], len(assignments))
    if isinstance(instance, BppInstance):
        bins, best, count = oracle_bpp(instance)
        return OracleResult(float(bins), best, count)
    raise TypeError(f"not a problem instance: {instance!r}")


def optimal_assignments(instance: ProblemInstance) -> list[dict[str, int]]:
    """Every optimal assignment as a label -> bit dict (capped for huge tie sets)."""
    if isinstance(instance, TspInstance):
        return tsp_optimal_assignments(instance)[1]
    if isinstance(instance, KpInstance):
        return kp_optimal_assignments(instance)[1]
    if isinstance(instance, BppInstance):
        return bpp_optimal_assignments(instance)[1]
    raise TypeError(f"not a problem instance: {instance!r}")
