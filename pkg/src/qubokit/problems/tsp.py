"""Traveling salesman: directed-edge QUBO with per-subset subtour elimination.

Variables are x[i][j] for every ordered pair of distinct cities (1-based),
n*(n-1) of them.  Degree constraints (enter and leave each city exactly once)
become equality penalties; each subset Q of {2..n} with |Q| >= 2 contributes
the inequality  sum_{i,j in Q, i != j} x_ij <= |Q| - 1  that forbids a closed
subtour inside Q.  City 1 is excluded from the subset family: any collection
of two or more cycles leaves at least one cycle that avoids city 1, so the
reduced family rejects exactly the same assignments once the degree
constraints hold.
"""

from __future__ import annotations

import math
from itertools import combinations, permutations

from ..constraints import InequalityConstraint, PenaltyConfig, encode_slack, encode_unbalanced
from ..errors import CapabilityError, ParameterError
from ..model import QuadraticBinaryModel, VariableRegistry, add_equality_penalty
from .instances import DecodedSolution, TspInstance

__all__ = [
    "tsp_labels",
    "subtour_subsets",
    "build_tsp_qubo",
    "decode_tsp",
    "oracle_tsp",
    "tsp_optimal_assignments",
]

TSP_ORACLE_CAP = 10


def tsp_labels(n: int) -> list[str]:
    """Edge labels x[i][j] in row-major order over ordered pairs, 1-based."""
    return [f"x[{i}][{j}]" for i in range(1, n + 1) for j in range(1, n + 1) if j != i]


def subtour_subsets(n: int) -> list[tuple[int, ...]]:
    """Subsets of {2..n} with 2 <= |Q|, ordered by size then lexicographically.

    The family has 2^(n-1) - n members.
    """
    cities = range(2, n + 1)
    return [q for size in range(2, n) for q in combinations(cities, size)]


def _tour_length(dist, order: tuple[int, ...]) -> float:
    """Exact tour length: fsum over the undirected edges in sorted order."""
    n = len(order)
    edges = []
    for k in range(n):
        a, b = order[k], order[(k + 1) % n]
        edges.append((min(a, b), max(a, b)))
    edges.sort()
    return math.fsum(dist[a - 1][b - 1] for a, b in edges)


def build_tsp_qubo(
    instance: TspInstance,
    encoding: str,
    config: PenaltyConfig,
) -> tuple[QuadraticBinaryModel, VariableRegistry]:
    """Distance objective plus degree equalities and subtour inequalities."""
    n = instance.n
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")
    dist = instance.dist
    registry = VariableRegistry(tuple(tsp_labels(n)))
    linear = {
        registry.index(f"x[{i}][{j}]"): float(dist[i - 1][j - 1])
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if j != i
    }
    model = QuadraticBinaryModel.from_terms(registry.num_vars, linear)

    lam0 = config.require_lambda0()
    for j in range(1, n + 1):
        enter = {f"x[{i}][{j}]": 1 for i in range(1, n + 1) if i != j}
        model = add_equality_penalty(model, registry, enter, 1, lam0)
    for i in range(1, n + 1):
        leave = {f"x[{i}][{j}]": 1 for j in range(1, n + 1) if j != i}
        model = add_equality_penalty(model, registry, leave, 1, lam0)

    for q in subtour_subsets(n):
        name = "subtour[" + ",".join(map(str, q)) + "]"
        coeffs = {f"x[{i}][{j}]": 1 for i in q for j in q if j != i}
        constraint = InequalityConstraint(name, coeffs, bound=len(q) - 1, direction="le")
        if encoding == "slack":
            model, registry = encode_slack(model, registry, constraint, config.lambda1)
        elif encoding == "unbalanced":
            model = encode_unbalanced(model, registry, constraint, config.lambda1, config.lambda2)
        else:
            raise ParameterError(f"unknown encoding {encoding!r}")
    return model, registry


def _edges_from_bits(bits, registry: VariableRegistry, n: int) -> set[tuple[int, int]]:
    edges = set()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if j == i:
                continue
            label = f"x[{i}][{j}]"
            if label in registry.fixed:
                value = registry.fixed[label]
            else:
                value = bits[registry.index(label)]
            if value:
                edges.add((i, j))
    return edges


def decode_tsp(bits, registry: VariableRegistry, instance: TspInstance) -> DecodedSolution:
    """Check degree and subtour constraints; objective is the selected-edge length."""
    n = instance.n
    dist = instance.dist
    edges = _edges_from_bits(bits, registry, n)
    objective = math.fsum(dist[i - 1][j - 1] for i, j in sorted(edges))

    violations: list[str] = []
    out_deg = {i: 0 for i in range(1, n + 1)}
    in_deg = {i: 0 for i in range(1, n + 1)}
    for i, j in edges:
        out_deg[i] += 1
        in_deg[j] += 1
    for i in range(1, n + 1):
        if out_deg[i] != 1:
            violations.append(f"leave[{i}]")
        if in_deg[i] != 1:
            violations.append(f"enter[{i}]")

    if not violations:
        succ = {i: j for i, j in edges}
        seen = set()
        start = 1
        cycle = [start]
        seen.add(start)
        node = succ[start]
        while node not in seen:
            cycle.append(node)
            seen.add(node)
            node = succ[node]
        if len(cycle) != n:
            others = sorted(set(range(1, n + 1)) - seen)
            sub = [others[0]]
            node = succ[others[0]]
            while node != others[0]:
                sub.append(node)
                node = succ[node]
            violations.append("subtour[" + ",".join(map(str, sorted(sub))) + "]")

    return DecodedSolution(
        feasible=not violations,
        objective=objective,
        violation_report=tuple(violations),
    )


def _iter_tours(n: int):
    for rest in permutations(range(2, n + 1)):
        yield (1,) + rest


def oracle_tsp(instance: TspInstance) -> tuple[float, list[tuple[int, ...]]]:
    """Exhaustive optimum over directed tours: (length, all optimal tour orders)."""
    n = instance.n
    if n > TSP_ORACLE_CAP:
        raise CapabilityError(f"TSP oracle is capped at n <= {TSP_ORACLE_CAP}, got {n}")
    dist = instance.dist
    best = math.inf
    winners: list[tuple[int, ...]] = []
    for order in _iter_tours(n):
        length = _tour_length(dist, order)
        if length < best:
            best = length
            winners = [order]
        elif length == best:
            winners.append(order)
    return best, winners


def tour_to_assignment(order: tuple[int, ...], n: int) -> dict[str, int]:
    bits = {label: 0 for label in tsp_labels(n)}
    for k in range(n):
        a, b = order[k], order[(k + 1) % n]
        bits[f"x[{a}][{b}]"] = 1
    return bits


def tsp_optimal_assignments(instance: TspInstance) -> tuple[float, list[dict[str, int]]]:
    objective, winners = oracle_tsp(instance)
    return objective, [tour_to_assignment(order, instance.n) for order in winners]
