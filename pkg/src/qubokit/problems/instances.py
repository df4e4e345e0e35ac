"""Random problem instances and their serialization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ..errors import ParameterError

__all__ = [
    "TspInstance",
    "KpInstance",
    "BppInstance",
    "ProblemInstance",
    "DecodedSolution",
    "generate",
    "instance_to_json",
    "instance_from_json",
]


@dataclass(frozen=True)
class TspInstance:
    """Cities on the [0, 50] x [0, 50] square with Euclidean distances."""

    n: int
    coords: tuple[tuple[float, float], ...]
    seed: int | None = None

    @property
    def dist(self) -> np.ndarray:
        cached = self.__dict__.get("_dist")
        if cached is None:
            pts = np.asarray(self.coords)
            diff = pts[:, None, :] - pts[None, :, :]
            cached = np.sqrt((diff**2).sum(axis=2))
            self.__dict__["_dist"] = cached
        return cached

    @property
    def kind(self) -> str:
        return "tsp"


@dataclass(frozen=True)
class KpInstance:
    """Knapsack items with values in [1, 63], weights in [1, 127]."""

    n: int
    values: tuple[int, ...]
    weights: tuple[int, ...]
    capacity: int
    seed: int | None = None

    @property
    def kind(self) -> str:
        return "kp"


@dataclass(frozen=True)
class BppInstance:
    """Bin packing with item weights in [4, 20], bin capacity 20, one bin per item."""

    n: int
    weights: tuple[int, ...]
    bin_capacity: int = 20
    seed: int | None = None

    @property
    def m(self) -> int:
        return self.n

    @property
    def kind(self) -> str:
        return "bpp"

    @property
    def min_bins(self) -> int:
        """Lower bound on the number of bins: ceil(total weight / capacity)."""
        return -(-sum(self.weights) // self.bin_capacity)


ProblemInstance = Union[TspInstance, KpInstance, BppInstance]


@dataclass(frozen=True)
class DecodedSolution:
    """Feasibility verdict and original-problem objective for one decoded assignment."""

    feasible: bool
    objective: float
    violation_report: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.feasible != (len(self.violation_report) == 0):
            raise ValueError("feasible must hold exactly when violation_report is empty")


def generate(kind: str, n: int, seed: int) -> ProblemInstance:
    """Create a random instance; deterministic for a fixed (kind, n, seed)."""
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")
    rng = np.random.default_rng(seed)
    if kind == "tsp":
        pts = rng.uniform(0.0, 50.0, size=(n, 2))
        return TspInstance(n=n, coords=tuple((float(x), float(y)) for x, y in pts), seed=seed)
    if kind == "kp":
        values = rng.integers(1, 63, size=n, endpoint=True)
        weights = rng.integers(1, 127, size=n, endpoint=True)
        capacity = math.floor(0.7 * int(weights.sum()))
        return KpInstance(
            n=n,
            values=tuple(int(v) for v in values),
            weights=tuple(int(w) for w in weights),
            capacity=capacity,
            seed=seed,
        )
    if kind == "bpp":
        weights = rng.integers(4, 20, size=n, endpoint=True)
        return BppInstance(n=n, weights=tuple(int(w) for w in weights), seed=seed)
    raise ParameterError(f"unknown problem kind {kind!r}")


def instance_to_json(instance: ProblemInstance) -> str:
    if isinstance(instance, TspInstance):
        data = {"kind": "tsp", "n": instance.n, "seed": instance.seed,
                "coords": [list(p) for p in instance.coords]}
    elif isinstance(instance, KpInstance):
        data = {"kind": "kp", "n": instance.n, "seed": instance.seed,
                "values": list(instance.values), "weights": list(instance.weights),
                "capacity": instance.capacity}
    elif isinstance(instance, BppInstance):
        data = {"kind": "bpp", "n": instance.n, "seed": instance.seed,
                "weights": list(instance.weights), "bin_capacity": instance.bin_capacity,
                "bins": instance.m}
    else:
        raise TypeError(f"not a problem instance: {instance!r}")
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def instance_from_json(text: str) -> ProblemInstance:
    data = json.loads(text)
    kind = data["kind"]
    if kind == "tsp":
        return TspInstance(n=data["n"], seed=data.get("seed"),
                           coords=tuple((float(x), float(y)) for x, y in data["coords"]))
    if kind == "kp":
        return KpInstance(n=data["n"], seed=data.get("seed"),
                          values=tuple(data["values"]), weights=tuple(data["weights"]),
                          capacity=data["capacity"])
    if kind == "bpp":
        return BppInstance(n=data["n"], seed=data.get("seed"),
                           weights=tuple(data["weights"]), bin_capacity=data["bin_capacity"])
    raise ValueError(f"unknown problem kind {kind!r}")
