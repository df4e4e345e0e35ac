"""Bin packing: bin-use variables y[j], assignment variables x[i][j].

Objective sum_j y_j; each item sits in exactly one bin (equality penalty) and
each bin obeys  sum_i w_i x_ij <= B y_j, an inequality whose coefficient list
includes -B on y_j.  Two standard simplifications can be applied before
encoding: pin item 1 to bin 1, and pre-set y_j = 1 for the first
ceil(total_weight / B) bins, since at least that many bins are needed.
"""

from __future__ import annotations

from itertools import combinations

from ..constraints import InequalityConstraint, PenaltyConfig, encode_slack, encode_unbalanced
from ..errors import CapabilityError, ParameterError
from ..model import QuadraticBinaryModel, VariableRegistry, add_equality_penalty, fix_variable
from .instances import BppInstance, DecodedSolution

__all__ = [
    "bpp_labels",
    "build_bpp_qubo",
    "decode_bpp",
    "oracle_bpp",
    "bpp_optimal_assignments",
]

BPP_ORACLE_CAP = 10
_BPP_SOLUTION_CAP = 200_000


def bpp_labels(n: int, m: int) -> list[str]:
    labels = [f"y[{j}]" for j in range(1, m + 1)]
    labels += [f"x[{i}][{j}]" for i in range(1, n + 1) for j in range(1, m + 1)]
    return labels


def build_bpp_qubo(
    instance: BppInstance,
    encoding: str,
    config: PenaltyConfig,
    apply_simplifications: bool = True,
) -> tuple[QuadraticBinaryModel, VariableRegistry]:
    n, m, cap = instance.n, instance.m, instance.bin_capacity
    registry = VariableRegistry(tuple(bpp_labels(n, m)))
    linear = {registry.index(f"y[{j}]"): 1.0 for j in range(1, m + 1)}
    model = QuadraticBinaryModel.from_terms(registry.num_vars, linear)

    if apply_simplifications:
        model, registry = fix_variable(model, registry, "x[1][1]", 1)
        for j in range(2, m + 1):
            model, registry = fix_variable(model, registry, f"x[1][{j}]", 0)
        for j in range(1, instance.min_bins + 1):
            model, registry = fix_variable(model, registry, f"y[{j}]", 1)

    lam0 = config.require_lambda0()
    for i in range(1, n + 1):
        coeffs = {f"x[{i}][{j}]": 1 for j in range(1, m + 1)}
        model = add_equality_penalty(model, registry, coeffs, 1, lam0)

    for j in range(1, m + 1):
        coeffs = {f"x[{i}][{j}]": int(w) for i, w in enumerate(instance.weights, start=1)}
        coeffs[f"y[{j}]"] = -cap
        constraint = InequalityConstraint(f"bincap[{j}]", coeffs, bound=0, direction="le")
        if encoding == "slack":
            model, registry = encode_slack(model, registry, constraint, config.lambda1)
        elif encoding == "unbalanced":
            model = encode_unbalanced(model, registry, constraint, config.lambda1, config.lambda2)
        else:
            raise ParameterError(f"unknown encoding {encoding!r}")
    return model, registry


def _assignment_value(bits, registry: VariableRegistry, label: str) -> int:
    value = registry.fixed.get(label)
    if value is None:
        value = bits[registry.index(label)]
    return int(value)


def decode_bpp(bits, registry: VariableRegistry, instance: BppInstance) -> DecodedSolution:
    n, m, cap = instance.n, instance.m, instance.bin_capacity
    y = {j: _assignment_value(bits, registry, f"y[{j}]") for j in range(1, m + 1)}
    x = {
        (i, j): _assignment_value(bits, registry, f"x[{i}][{j}]")
        for i in range(1, n + 1)
        for j in range(1, m + 1)
    }
    violations: list[str] = []
    for i in range(1, n + 1):
        if sum(x[(i, j)] for j in range(1, m + 1)) != 1:
            violations.append(f"item[{i}]")
    loads = {j: sum(instance.weights[i - 1] * x[(i, j)] for i in range(1, n + 1))
             for j in range(1, m + 1)}
    for j in range(1, m + 1):
        if loads[j] > cap * y[j]:
            violations.append(f"bincap[{j}]")
    used = sum(1 for j in range(1, m + 1) if y[j] or loads[j] > 0)
    return DecodedSolution(feasible=not violations, objective=float(used),
                           violation_report=tuple(violations))


def _min_bins(weights, capacity: int) -> int:
    """Exact minimum bin count by canonical-partition search with pruning."""
    n = len(weights)
    best = n  # one bin per item always works (weights never exceed capacity)
    loads: list[int] = []

    def dfs(i: int) -> None:
        nonlocal best
        if len(loads) >= best:
            return
        if i == n:
            best = len(loads)
            return
        w = weights[i]
        for b in range(len(loads)):
            if loads[b] + w <= capacity:
                loads[b] += w
                dfs(i + 1)
                loads[b] -= w
        if len(loads) + 1 < best:
            loads.append(w)
            dfs(i + 1)
            loads.pop()

    dfs(0)
    return best


def _count_partitions(weights, capacity: int, k: int) -> int:
    """Number of feasible partitions of the items into exactly k groups."""
    n = len(weights)
    count = 0
    loads: list[int] = []

    def dfs(i: int) -> None:
        nonlocal count
        if len(loads) > k or len(loads) + (n - i) < k:
            return
        if i == n:
            count += 1
            return
        w = weights[i]
        for b in range(len(loads)):
            if loads[b] + w <= capacity:
                loads[b] += w
                dfs(i + 1)
                loads[b] -= w
        if len(loads) < k:
            loads.append(w)
            dfs(i + 1)
            loads.pop()

    dfs(0)
    return count


def _can_fit(weights, start: int, caps: list[int], memo: dict) -> bool:
    """Can items start.. be placed into slots with the given remaining capacities?"""
    if start == len(weights):
        return True
    key = (start, tuple(sorted(caps)))
    hit = memo.get(key)
    if hit is not None:
        return hit
    w = weights[start]
    tried = set()
    ok = False
    for b in range(len(caps)):
        c = caps[b]
        if c >= w and c not in tried:
            tried.add(c)
            caps[b] = c - w
            if _can_fit(weights, start + 1, caps, memo):
                caps[b] = c
                ok = True
                break
            caps[b] = c
    memo[key] = ok
    return ok


def oracle_bpp(instance: BppInstance) -> tuple[int, dict[str, int], int]:
    """Exact minimum bins, the lexicographically smallest optimal assignment,
    and the optimal-solution count.

    Optimal assignments mark exactly k bins with y_j = 1 and place every item
    in a marked bin; minimality keeps every marked bin nonempty, so the count
    is (#feasible k-partitions) * m! / (m-k)!.
    """
    n, m, cap = instance.n, instance.m, instance.bin_capacity
    if n > BPP_ORACLE_CAP:
        raise CapabilityError(f"BPP oracle is capped at n <= {BPP_ORACLE_CAP}, got {n}")
    weights = list(instance.weights)
    k = _min_bins(weights, cap)

    perms = 1
    for t in range(k):
        perms *= m - t
    count = _count_partitions(weights, cap, k) * perms

    # Lexicographically smallest bit tuple (y row then x rows): y uses the last
    # k slots; each item takes the highest-numbered slot that still allows the
    # remaining items to fit.
    slots = list(range(m - k + 1, m + 1))
    caps = {j: cap for j in slots}
    assignment = {f"y[{j}]": (1 if j in caps else 0) for j in range(1, m + 1)}
    memo: dict = {}
    placed: dict[int, int] = {}
    for i in range(1, n + 1):
        w = weights[i - 1]
        for j in sorted(slots, reverse=True):
            if caps[j] < w:
                continue
            caps[j] -= w
            rest = [caps[s] for s in slots]
            if _can_fit(weights, i, rest, memo):
                placed[i] = j
                break
            caps[j] += w
        else:
            raise AssertionError("greedy placement lost feasibility")
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            assignment[f"x[{i}][{j}]"] = 1 if placed.get(i) == j else 0
    return k, assignment, count


def bpp_optimal_assignments(
    instance: BppInstance, cap_solutions: int = _BPP_SOLUTION_CAP
) -> tuple[int, list[dict[str, int]]]:
    """All optimal assignments as label -> bit dicts (may be large; capped)."""
    n, m, cap = instance.n, instance.m, instance.bin_capacity
    weights = list(instance.weights)
    k = _min_bins(weights, cap)

    out: list[dict[str, int]] = []
    for used in combinations(range(1, m + 1), k):
        caps = {j: cap for j in used}
        placed: dict[int, int] = {}

        def dfs(i: int) -> None:
            if len(out) > cap_solutions:
                raise CapabilityError("too many tied optimal bin-packing solutions to enumerate")
            if i > n:
                assignment = {f"y[{j}]": (1 if j in caps else 0) for j in range(1, m + 1)}
                for ii in range(1, n + 1):
                    for j in range(1, m + 1):
                        assignment[f"x[{ii}][{j}]"] = 1 if placed[ii] == j else 0
                out.append(assignment)
                return
            w = weights[i - 1]
            for j in used:
                if caps[j] >= w:
                    caps[j] -= w
                    placed[i] = j
                    dfs(i + 1)
                    del placed[i]
                    caps[j] += w

        dfs(1)
    return k, out
