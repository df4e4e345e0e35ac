"""Inequality-constraint penalty encoders.

Two encodings of a linear inequality  sum_i l_i x_i <= B  (or >= B) into
QUBO penalty terms:

* slack encoding: introduce N binary slack variables with weights 2^k and
  penalize lambda1 * (B - sum l_i x_i - sum 2^k s_k)^2, which vanishes
  exactly when the inequality holds and the slack absorbs the margin;
* unbalanced encoding: add zeta(h) = -lambda1 * h + lambda2 * h^2 with
  h(x) = B - sum l_i x_i (the constraint margin), a quadratic truncation of
  exp(-h) that penalizes violation (h < 0) more than satisfaction (h > 0)
  and needs no extra variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import InfeasibleConstraintError, ParameterError
from .model import QuadraticBinaryModel, VariableRegistry, add_equality_penalty

__all__ = [
    "InequalityConstraint",
    "PenaltyConfig",
    "DEFAULT_PENALTIES",
    "slack_bit_count",
    "encode_slack",
    "encode_unbalanced",
    "unbalanced_penalty_value",
]


@dataclass(frozen=True)
class InequalityConstraint:
    """Linear inequality over labelled binary variables."""

    name: str
    coeffs: Mapping[str, int]
    bound: int
    direction: str = "le"  # "le": sum l_i x_i <= bound; "ge": sum l_i x_i >= bound

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ParameterError(f"constraint {self.name!r} has no coefficients")
        if self.direction not in ("le", "ge"):
            raise ParameterError(f"direction must be 'le' or 'ge', got {self.direction!r}")


@dataclass(frozen=True)
class PenaltyConfig:
    """Penalty weights: lambda0 for equalities, lambda1/lambda2 for inequalities.

    lambda0 may be None for problems without equality constraints (knapsack).
    """

    lambda0: float | None
    lambda1: float
    lambda2: float

    def __post_init__(self) -> None:
        if self.lambda0 is not None and self.lambda0 < 0:
            raise ParameterError(f"lambda0 must be >= 0, got {self.lambda0}")

    def require_lambda0(self) -> float:
        if self.lambda0 is None:
            raise ParameterError("this problem needs lambda0 but the config has none")
        return self.lambda0


# Tuned weights per problem family (equalities / inequality linear / quadratic).
DEFAULT_PENALTIES: dict[str, PenaltyConfig] = {
    "tsp": PenaltyConfig(lambda0=38.2584, lambda1=18.2838, lambda2=57.0375),
    "bpp": PenaltyConfig(lambda0=20.5198, lambda1=7.2949, lambda2=0.8583),
    "kp": PenaltyConfig(lambda0=None, lambda1=0.9603, lambda2=0.0371),
}


def _normalize_le(
    constraint: InequalityConstraint, registry: VariableRegistry
) -> tuple[dict[int, int], int]:
    """Return (index -> coeff, bound) of the equivalent <= constraint over free vars."""
    coeffs = {k: int(v) for k, v in constraint.coeffs.items()}
    bound = int(constraint.bound)
    if constraint.direction == "ge":
        coeffs = {k: -v for k, v in coeffs.items()}
        bound = -bound
    indexed, const = registry.resolve_terms({k: float(v) for k, v in coeffs.items()})
    bound -= int(round(const))
    return {i: int(round(c)) for i, c in indexed.items() if c != 0.0}, bound


def _max_margin(indexed: Mapping[int, int], bound: int) -> int:
    """Largest value of bound - sum l_i x_i over free assignments."""
    return bound - sum(c for c in indexed.values() if c < 0)


def slack_bit_count(constraint: InequalityConstraint, registry: VariableRegistry) -> int:
    """Number of binary slack variables needed: floor(log2(M) + 1) for margin M >= 1."""
    indexed, bound = _normalize_le(constraint, registry)
    m = _max_margin(indexed, bound)
    if m < 0:
        raise InfeasibleConstraintError(
            f"constraint {constraint.name!r} cannot be satisfied by any assignment"
        )
    if m == 0:
        return 0
    return m.bit_length()  # == floor(log2(m)) + 1 for m >= 1


def encode_slack(
    model: QuadraticBinaryModel,
    registry: VariableRegistry,
    constraint: InequalityConstraint,
    lambda1: float,
) -> tuple[QuadraticBinaryModel, VariableRegistry]:
    """Append slack bits and add lambda1 * (B - sum l_i x_i - sum 2^k s_k)^2.

    Returns the grown model and a registry with the new slack labels recorded
    under the constraint's name.  When the maximum margin is zero the
    constraint degenerates to an equality penalty with weight lambda1 and no
    slack bits are added.
    """
    if lambda1 < 0:
        raise ParameterError(f"lambda1 must be >= 0, got {lambda1}")
    n_bits = slack_bit_count(constraint, registry)
    indexed, bound = _normalize_le(constraint, registry)

    slack_labels = [f"{constraint.name}.s{k}" for k in range(n_bits)]
    new_registry = (
        registry.with_slack_group(constraint.name, slack_labels) if n_bits else registry
    )
    grown = QuadraticBinaryModel.from_terms(
        new_registry.num_vars,
        model.linear,
        model.quadratic,
        model.offset,
    )

    terms = {new_registry.names[i]: c for i, c in indexed.items()}
    for k, label in enumerate(slack_labels):
        terms[label] = 2**k
    return add_equality_penalty(grown, new_registry, terms, bound, lambda1), new_registry


def unbalanced_penalty_value(h: float, lambda1: float, lambda2: float) -> float:
    """zeta(h) = -lambda1 * h + lambda2 * h^2 for a given constraint margin h."""
    return -lambda1 * h + lambda2 * h * h


def encode_unbalanced(
    model: QuadraticBinaryModel,
    registry: VariableRegistry,
    constraint: InequalityConstraint,
    lambda1: float,
    lambda2: float,
) -> QuadraticBinaryModel:
    """Add zeta(h(x)) to the model without creating any new variables.

    h(x) = B - sum l_i x_i for a <= constraint and sum l_i x_i - B for a >=
    constraint; the sign flip reuses the single <= expansion path.  The
    model's energy delta equals zeta(h(x)) exactly for every assignment.
    """
    if lambda1 <= 0 or lambda2 <= 0:
        raise ParameterError(
            f"unbalanced encoding needs lambda1 > 0 and lambda2 > 0, got {lambda1}, {lambda2}"
        )
    # After le-normalization the margin of either direction is the same linear
    # form h(x) = bound - sum l_i x_i over the free variables.
    indexed, bound = _normalize_le(constraint, registry)
    lin: dict[int, float] = {}
    quad: dict[tuple[int, int], float] = {}
    offset = -lambda1 * bound + lambda2 * bound * bound
    items = sorted(indexed.items())
    for a, (i, ci) in enumerate(items):
        lin[i] = lambda1 * ci + lambda2 * (ci * ci - 2.0 * bound * ci)
        for j, cj in items[a + 1:]:
            quad[(i, j)] = 2.0 * lambda2 * ci * cj
    penalty = QuadraticBinaryModel.from_terms(model.num_vars, lin, quad, offset)
    return model + penalty
