"""Knapsack: n item variables, negated-value objective, one capacity constraint."""

from __future__ import annotations

from ..constraints import InequalityConstraint, PenaltyConfig, encode_slack, encode_unbalanced
from ..errors import CapabilityError, ParameterError
from ..model import QuadraticBinaryModel, VariableRegistry
from .instances import DecodedSolution, KpInstance

__all__ = [
    "kp_labels",
    "build_kp_qubo",
    "decode_kp",
    "oracle_kp",
    "kp_optimal_assignments",
]

KP_ORACLE_CAP = 30
_KP_SOLUTION_CAP = 100_000


def kp_labels(n: int) -> list[str]:
    return [f"x[{i}]" for i in range(1, n + 1)]


def build_kp_qubo(
    instance: KpInstance,
    encoding: str,
    config: PenaltyConfig,
) -> tuple[QuadraticBinaryModel, VariableRegistry]:
    """Minimize -sum p_i x_i subject to sum w_i x_i <= W (no equality penalties)."""
    n = instance.n
    registry = VariableRegistry(tuple(kp_labels(n)))
    linear = {i: -float(p) for i, p in enumerate(instance.values)}
    model = QuadraticBinaryModel.from_terms(n, linear)
    coeffs = {f"x[{i + 1}]": int(w) for i, w in enumerate(instance.weights)}
    constraint = InequalityConstraint("capacity", coeffs, bound=instance.capacity, direction="le")
    if encoding == "slack":
        model, registry = encode_slack(model, registry, constraint, config.lambda1)
    elif encoding == "unbalanced":
        model = encode_unbalanced(model, registry, constraint, config.lambda1, config.lambda2)
    else:
        raise ParameterError(f"unknown encoding {encoding!r}")
    return model, registry


def decode_kp(bits, registry: VariableRegistry, instance: KpInstance) -> DecodedSolution:
    taken = []
    for i in range(1, instance.n + 1):
        label = f"x[{i}]"
        value = registry.fixed.get(label)
        if value is None:
            value = bits[registry.index(label)]
        taken.append(int(value))
    weight = sum(w for w, t in zip(instance.weights, taken) if t)
    value = sum(p for p, t in zip(instance.values, taken) if t)
    violations = () if weight <= instance.capacity else ("capacity",)
    return DecodedSolution(feasible=not violations, objective=float(value),
                           violation_report=violations)


def _suffix_best(values, weights, capacity) -> list[list[int]]:
    """best[i][c] = max value achievable with items i.. and remaining capacity c."""
    n = len(values)
    best = [[0] * (capacity + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        w, p = weights[i], values[i]
        row, nxt = best[i], best[i + 1]
        for c in range(capacity + 1):
            take = p + nxt[c - w] if w <= c else -1
            row[c] = max(nxt[c], take)
    return best


def oracle_kp(instance: KpInstance) -> tuple[int, list[tuple[int, ...]]]:
    """Dynamic program over capacity; enumerates every optimal item subset.

    Returns (optimal value, list of 0/1 item tuples sorted ascending), so the
    first tuple is the lexicographically smallest optimal assignment.
    """
    if instance.n > KP_ORACLE_CAP:
        raise CapabilityError(f"KP oracle is capped at n <= {KP_ORACLE_CAP}, got {instance.n}")
    values, weights, capacity = instance.values, instance.weights, instance.capacity
    n = instance.n
    best = _suffix_best(values, weights, capacity)
    optimum = best[0][capacity]

    solutions: list[tuple[int, ...]] = []
    stack: list[tuple[int, int, tuple[int, ...]]] = [(0, capacity, ())]
    while stack:
        i, cap, prefix = stack.pop()
        if i == n:
            solutions.append(prefix)
            if len(solutions) > _KP_SOLUTION_CAP:
                raise CapabilityError("too many tied optimal knapsack solutions to enumerate")
            continue
        target = best[i][cap]
        # push take-branch first so skip-branches (lexicographically smaller) pop first
        if weights[i] <= cap and values[i] + best[i + 1][cap - weights[i]] == target:
            stack.append((i + 1, cap - weights[i], prefix + (1,)))
        if best[i + 1][cap] == target:
            stack.append((i + 1, cap, prefix + (0,)))
    solutions.sort()
    return optimum, solutions


def kp_optimal_assignments(instance: KpInstance) -> tuple[int, list[dict[str, int]]]:
    optimum, solutions = oracle_kp(instance)
    labels = kp_labels(instance.n)
    return optimum, [dict(zip(labels, sol)) for sol in solutions]
