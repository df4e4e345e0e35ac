"""Quadratic binary models, spin models, and the variable registry.

A :class:`QuadraticBinaryModel` stores a quadratic polynomial over binary
variables x_i in {0, 1},

    E(x) = offset + sum_i linear[i] * x_i + sum_{i<j} quadratic[i, j] * x_i * x_j,

in canonical upper-triangular form: quadratic keys always satisfy i < j,
diagonal products x_i*x_i are folded into linear terms (x*x == x for binary
variables), and coefficients that cancel to zero are dropped.

Bit convention used throughout the package: an assignment is a sequence of
0/1 values indexed by variable index, and a *state index* is the integer
whose k-th least significant bit is the value of variable k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import DimensionError, ParameterError, UnknownLabelError

__all__ = [
    "QuadraticBinaryModel",
    "IsingModel",
    "VariableRegistry",
    "add_equality_penalty",
    "fix_variable",
    "write_qubo_text",
    "parse_qubo_text",
]


def _canonical_terms(
    num_vars: int,
    linear: Mapping[int, float],
    quadratic: Mapping[tuple[int, int], float],
    offset: float,
) -> tuple[dict[int, float], dict[tuple[int, int], float], float]:
    lin: dict[int, float] = {}
    quad: dict[tuple[int, int], float] = {}
    off = float(offset)
    for i, c in linear.items():
        if not 0 <= i < num_vars:
            raise DimensionError(f"linear index {i} out of range for {num_vars} variables")
        lin[i] = lin.get(i, 0.0) + float(c)
    for (i, j), c in quadratic.items():
        if not (0 <= i < num_vars and 0 <= j < num_vars):
            raise DimensionError(f"quadratic key ({i},{j}) out of range for {num_vars} variables")
        if i == j:
            lin[i] = lin.get(i, 0.0) + float(c)
            continue
        key = (i, j) if i < j else (j, i)
        quad[key] = quad.get(key, 0.0) + float(c)
    lin = {i: c for i, c in lin.items() if c != 0.0}
    quad = {k: c for k, c in quad.items() if c != 0.0}
    return lin, quad, off


@dataclass(frozen=True)
class QuadraticBinaryModel:
    """Sparse quadratic polynomial over binary variables plus a constant offset."""

    num_vars: int
    linear: dict[int, float] = field(default_factory=dict)
    quadratic: dict[tuple[int, int], float] = field(default_factory=dict)
    offset: float = 0.0

    @classmethod
    def from_terms(
        cls,
        num_vars: int,
        linear: Mapping[int, float] | None = None,
        quadratic: Mapping[tuple[int, int], float] | None = None,
        offset: float = 0.0,
    ) -> "QuadraticBinaryModel":
        """Build a model, canonicalizing keys and dropping zero coefficients."""
        lin, quad, off = _canonical_terms(num_vars, linear or {}, quadratic or {}, offset)
        return cls(num_vars=num_vars, linear=lin, quadratic=quad, offset=off)

    def evaluate(self, assignment: Sequence[int]) -> float:
        """Energy of one 0/1 assignment."""
        if len(assignment) != self.num_vars:
            raise DimensionError(
                f"assignment has length {len(assignment)}, model has {self.num_vars} variables"
            )
        e = self.offset
        for i, c in self.linear.items():
            if assignment[i]:
                e += c
        for (i, j), c in self.quadratic.items():
            if assignment[i] and assignment[j]:
                e += c
        return e

    def evaluate_state(self, state: int) -> float:
        """Energy of the assignment encoded as a state index (bit k = variable k)."""
        e = self.offset
        for i, c in self.linear.items():
            if (state >> i) & 1:
                e += c
        for (i, j), c in self.quadratic.items():
            if (state >> i) & 1 and (state >> j) & 1:
                e += c
        return e

    def __add__(self, other: "QuadraticBinaryModel") -> "QuadraticBinaryModel":
        if self.num_vars != other.num_vars:
            raise DimensionError("cannot add models with different variable counts")
        lin = dict(self.linear)
        for i, c in other.linear.items():
            lin[i] = lin.get(i, 0.0) + c
        quad = dict(self.quadratic)
        for k, c in other.quadratic.items():
            quad[k] = quad.get(k, 0.0) + c
        return QuadraticBinaryModel(
            num_vars=self.num_vars,
            linear={i: c for i, c in lin.items() if c != 0.0},
            quadratic={k: c for k, c in quad.items() if c != 0.0},
            offset=self.offset + other.offset,
        )

    def num_terms(self) -> int:
        return len(self.linear) + len(self.quadratic)

    def max_abs_coefficient(self) -> float:
        """Largest |coefficient| over linear and quadratic terms (0 for an empty model)."""
        coeffs = [abs(c) for c in self.linear.values()]
        coeffs += [abs(c) for c in self.quadratic.values()]
        return max(coeffs, default=0.0)

    def to_ising(self) -> "IsingModel":
        """Spin form under x_i = (1 - z_i) / 2, z_i in {+1, -1}."""
        h: dict[int, float] = {}
        J: dict[tuple[int, int], float] = {}
        off = self.offset
        for i, c in self.linear.items():
            off += c / 2.0
            h[i] = h.get(i, 0.0) - c / 2.0
        for (i, j), c in self.quadratic.items():
            off += c / 4.0
            h[i] = h.get(i, 0.0) - c / 4.0
            h[j] = h.get(j, 0.0) - c / 4.0
            J[(i, j)] = J.get((i, j), 0.0) + c / 4.0
        return IsingModel(
            num_spins=self.num_vars,
            h={i: c for i, c in h.items() if c != 0.0},
            J={k: c for k, c in J.items() if c != 0.0},
            offset=off,
        )


@dataclass(frozen=True)
class IsingModel:
    """Linear/quadratic spin coefficients plus offset: E(z) = offset + sum h_i z_i + sum J_ij z_i z_j."""

    num_spins: int
    h: dict[int, float] = field(default_factory=dict)
    J: dict[tuple[int, int], float] = field(default_factory=dict)
    offset: float = 0.0

    def energy(self, spins: Sequence[int]) -> float:
        """Energy of one +/-1 spin configuration."""
        if len(spins) != self.num_spins:
            raise DimensionError(
                f"configuration has length {len(spins)}, model has {self.num_spins} spins"
            )
        e = self.offset
        for i, c in self.h.items():
            e += c * spins[i]
        for (i, j), c in self.J.items():
            e += c * spins[i] * spins[j]
        return e

    def energy_of_state(self, state: int) -> float:
        """Energy of the spin configuration z_k = 1 - 2 * bit_k(state)."""
        e = self.offset
        for i, c in self.h.items():
            e += -c if (state >> i) & 1 else c
        for (i, j), c in self.J.items():
            zi = -1 if (state >> i) & 1 else 1
            zj = -1 if (state >> j) & 1 else 1
            e += c * zi * zj
        return e

    def max_abs_coefficient(self) -> float:
        coeffs = [abs(c) for c in self.h.values()]
        coeffs += [abs(c) for c in self.J.values()]
        return max(coeffs, default=0.0)


@dataclass(frozen=True)
class VariableRegistry:
    """Maps logical variable labels to qubit indices and records fixed assignments.

    Free labels are indexed 0..num_vars-1 in the order of ``names``; a label is
    either free (indexed) or fixed to a constant, never both.  Slack labels
    introduced by inequality encoders are grouped per constraint so decoders
    can ignore them.
    """

    names: tuple[str, ...] = ()
    fixed: dict[str, int] = field(default_factory=dict)
    slack_groups: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        overlap = set(self.names) & set(self.fixed)
        if overlap:
            raise ValueError(f"labels both fixed and indexed: {sorted(overlap)}")

    @property
    def num_vars(self) -> int:
        return len(self.names)

    @property
    def index_of(self) -> dict[str, int]:
        cached = self.__dict__.get("_index_of")
        if cached is None:
            cached = {name: i for i, name in enumerate(self.names)}
            self.__dict__["_index_of"] = cached
        return cached

    def index(self, label: str) -> int:
        try:
            return self.index_of[label]
        except KeyError:
            raise UnknownLabelError(label) from None

    def is_slack(self, label: str) -> bool:
        cached = self.__dict__.get("_slack_set")
        if cached is None:
            cached = {s for group in self.slack_groups.values() for s in group}
            self.__dict__["_slack_set"] = cached
        return label in cached

    def with_labels(self, labels: Iterable[str]) -> "VariableRegistry":
        """Append new free labels at the end of the index range."""
        new = tuple(labels)
        dupes = (set(new) & set(self.names)) | (set(new) & set(self.fixed))
        if dupes:
            raise ValueError(f"labels already registered: {sorted(dupes)}")
        return VariableRegistry(self.names + new, dict(self.fixed), dict(self.slack_groups))

    def with_slack_group(self, constraint_name: str, labels: Sequence[str]) -> "VariableRegistry":
        if constraint_name in self.slack_groups:
            raise ValueError(f"slack group {constraint_name!r} already present")
        reg = self.with_labels(labels)
        groups = dict(reg.slack_groups)
        groups[constraint_name] = tuple(labels)
        return VariableRegistry(reg.names, dict(reg.fixed), groups)

    def resolve_terms(self, coeffs: Mapping[str, float]) -> tuple[dict[int, float], float]:
        """Split labelled coefficients into (index -> coeff) plus the fixed-label constant."""
        indexed: dict[int, float] = {}
        constant = 0.0
        for label, c in coeffs.items():
            if label in self.fixed:
                constant += c * self.fixed[label]
            else:
                idx = self.index(label)
                indexed[idx] = indexed.get(idx, 0.0) + c
        return indexed, constant


def add_equality_penalty(
    model: QuadraticBinaryModel,
    registry: VariableRegistry,
    coeffs: Mapping[str, int],
    target: int,
    lambda0: float,
) -> QuadraticBinaryModel:
    """Add lambda0 * (sum_i c_i x_i - target)^2 to the model.

    Fixed labels are substituted by their constants before the square is
    expanded; squares of binaries fold into linear terms and the pure
    constant goes to the offset.
    """
    if lambda0 < 0:
        raise ParameterError(f"lambda0 must be >= 0, got {lambda0}")
    indexed, const = registry.resolve_terms({k: float(v) for k, v in coeffs.items()})
    shift = const - float(target)
    lin: dict[int, float] = {}
    quad: dict[tuple[int, int], float] = {}
    items = sorted(indexed.items())
    for a, (i, ci) in enumerate(items):
        lin[i] = lin.get(i, 0.0) + lambda0 * (ci * ci + 2.0 * ci * shift)
        for j, cj in items[a + 1:]:
            quad[(i, j)] = quad.get((i, j), 0.0) + 2.0 * lambda0 * ci * cj
    penalty = QuadraticBinaryModel.from_terms(
        model.num_vars, lin, quad, lambda0 * shift * shift
    )
    return model + penalty


def fix_variable(
    model: QuadraticBinaryModel,
    registry: VariableRegistry,
    label: str,
    value: int,
) -> tuple[QuadraticBinaryModel, VariableRegistry]:
    """Substitute x_label = value and compact the remaining indices in order."""
    if value not in (0, 1):
        raise ParameterError(f"fixed value must be 0 or 1, got {value}")
    if label in registry.fixed:
        raise UnknownLabelError(f"label {label!r} is already fixed")
    idx = registry.index(label)

    def remap(i: int) -> int:
        return i if i < idx else i - 1

    lin: dict[int, float] = {}
    quad: dict[tuple[int, int], float] = {}
    offset = model.offset
    for i, c in model.linear.items():
        if i == idx:
            offset += c * value
        else:
            lin[remap(i)] = lin.get(remap(i), 0.0) + c
    for (i, j), c in model.quadratic.items():
        if i == idx or j == idx:
            other = j if i == idx else i
            if value:
                k = remap(other)
                lin[k] = lin.get(k, 0.0) + c
        else:
            key = (remap(i), remap(j))
            quad[key] = quad.get(key, 0.0) + c
    reduced = QuadraticBinaryModel.from_terms(model.num_vars - 1, lin, quad, offset)

    names = tuple(n for n in registry.names if n != label)
    fixed = dict(registry.fixed)
    fixed[label] = value
    return reduced, VariableRegistry(names, fixed, dict(registry.slack_groups))


# ---------------------------------------------------------------------------
# QUBO text format:
#   qubo <num_vars> <offset>
#   L <i> <coeff>
#   Q <i> <j> <coeff>        (i < j)
# Coefficients are printed with repr() so parsing is round-trip exact.


def _fmt(x: float) -> str:
    return repr(float(x))


def write_qubo_text(model: QuadraticBinaryModel) -> str:
    lines = [f"qubo {model.num_vars} {_fmt(model.offset)}"]
    for i in sorted(model.linear):
        lines.append(f"L {i} {_fmt(model.linear[i])}")
    for i, j in sorted(model.quadratic):
        lines.append(f"Q {i} {j} {_fmt(model.quadratic[(i, j)])}")
    return "\n".join(lines) + "\n"


def parse_qubo_text(text: str) -> QuadraticBinaryModel:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("qubo "):
        raise ValueError("missing 'qubo <num_vars> <offset>' header")
    _, nv, off = lines[0].split()
    num_vars, offset = int(nv), float(off)
    linear: dict[int, float] = {}
    quadratic: dict[tuple[int, int], float] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "L" and len(parts) == 3:
            linear[int(parts[1])] = float(parts[2])
        elif parts[0] == "Q" and len(parts) == 4:
            i, j = int(parts[1]), int(parts[2])
            if not i < j:
                raise ValueError(f"quadratic line must have i < j: {ln!r}")
            quadratic[(i, j)] = float(parts[3])
        else:
            raise ValueError(f"unrecognized line: {ln!r}")
    return QuadraticBinaryModel.from_terms(num_vars, linear, quadratic, offset)
