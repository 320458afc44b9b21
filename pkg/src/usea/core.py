"""Core data types: individuals, populations, the evaluation archive and seeded RNG streams."""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from enum import Enum

import numpy as np


class EvaluationError(ValueError):
    """Raised when a real evaluation produces a non-finite objective value."""


def as_vector(x) -> np.ndarray:
    """Copy `x` into a read-only 1-D float64 vector, rejecting non-finite entries."""
    v = np.array(x, dtype=np.float64, copy=True)
    if v.ndim != 1:
        raise ValueError(f"decision vector must be 1-D, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("decision vector contains non-finite components")
    v.setflags(write=False)
    return v


@dataclass(frozen=True)
class Bounds:
    """Box constraints: lower[i] < upper[i] for every dimension."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lower", as_vector(self.lower))
        object.__setattr__(self, "upper", as_vector(self.upper))
        if self.lower.shape != self.upper.shape:
            raise ValueError("lower/upper length mismatch")
        if not np.all(self.lower < self.upper):
            raise ValueError("need lower[i] < upper[i] for all i")

    @classmethod
    def cube(cls, lo: float, hi: float, n: int) -> "Bounds":
        return cls(np.full(n, float(lo)), np.full(n, float(hi)))

    @property
    def n(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)


@dataclass(frozen=True)
class Evaluated:
    """Objective value from a real function evaluation."""

    value: float


@dataclass(frozen=True)
class Predicted:
    """Objective value estimated by a surrogate model."""

    value: float


# An individual's fitness is Evaluated, Predicted, or None (not yet assessed).
Fitness = Evaluated | Predicted | None


@dataclass(frozen=True, eq=False)
class Individual:
    x: np.ndarray
    fitness: Fitness = None

    def __post_init__(self):
        object.__setattr__(self, "x", as_vector(self.x))

    @property
    def fitness_value(self) -> float:
        if self.fitness is None:
            raise ValueError("individual has no fitness value")
        return self.fitness.value

    def with_fitness(self, fitness: Fitness) -> "Individual":
        return Individual(self.x, fitness)


class Role(Enum):
    EVALUATED = "evaluated"      # P_e: members carry real objective values
    UNEVALUATED = "unevaluated"  # P_u: members carry surrogate predictions
    OFFSPRING = "offspring"      # freshly generated, typically fitness-free


@dataclass(frozen=True, eq=False)
class Population:
    """Immutable ordered collection of individuals with a role tag."""

    members: tuple[Individual, ...]
    role: Role

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if self.role is Role.EVALUATED:
            if not all(isinstance(m.fitness, Evaluated) for m in self.members):
                raise ValueError("evaluated population requires Evaluated fitness on every member")
        elif self.role is Role.UNEVALUATED:
            if not all(isinstance(m.fitness, Predicted) for m in self.members):
                raise ValueError("unevaluated population requires Predicted fitness on every member")

    @classmethod
    def evaluated(cls, members) -> "Population":
        return cls(tuple(members), Role.EVALUATED)

    @classmethod
    def unevaluated(cls, members=()) -> "Population":
        return cls(tuple(members), Role.UNEVALUATED)

    @classmethod
    def offspring(cls, members) -> "Population":
        return cls(tuple(members), Role.OFFSPRING)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i) -> Individual:
        return self.members[i]

    def xs(self) -> np.ndarray:
        """Stack member decision vectors into an (m, n) matrix."""
        if not self.members:
            raise ValueError("empty population has no coordinate matrix")
        return np.stack([m.x for m in self.members])

    def fitness_values(self) -> np.ndarray:
        return np.array([m.fitness_value for m in self.members])


@dataclass(frozen=True, eq=False)
class Archive:
    """Append-only log of truly evaluated (x, f(x)) pairs; `fes` counts real evaluations."""

    xs: tuple[np.ndarray, ...] = ()
    ys: tuple[float, ...] = ()

    @property
    def fes(self) -> int:
        return len(self.ys)

    def __len__(self) -> int:
        return len(self.ys)

    def x_matrix(self) -> np.ndarray:
        return np.stack(self.xs)

    def y_array(self) -> np.ndarray:
        return np.array(self.ys)

    def best(self) -> tuple[np.ndarray, float]:
        """Earliest-inserted record with the smallest objective value."""
        i = int(np.argmin(self.ys))
        return self.xs[i], self.ys[i]


def archive_insert(archive: Archive, x, y: float) -> Archive:
    """Append one evaluated record; rejects non-finite objectives."""
    y = float(y)
    if not np.isfinite(y):
        raise EvaluationError(f"non-finite objective: {y!r}")
    return Archive(archive.xs + (as_vector(x),), archive.ys + (y,))


def population_update(archive: Archive, n: int) -> Population:
    """Best-n truncation of the archive into a P_e population, ascending by objective.

    Ties break by insertion order (earliest evaluation wins). If the archive
    holds fewer than n records, all of them are returned.
    """
    if n <= 0:
        raise ValueError("population size must be positive")
    if len(archive) == 0:
        raise ValueError("cannot update population from an empty archive")
    order = np.argsort(archive.y_array(), kind="stable")[: min(n, len(archive))]
    members = [Individual(archive.xs[i], Evaluated(archive.ys[i])) for i in order]
    return Population.evaluated(members)


def _label_key(label) -> int:
    if isinstance(label, int):
        return label & 0xFFFFFFFF
    return zlib.crc32(str(label).encode("utf-8"))


class RngStream:
    """Seeded random stream with reproducible, independent child streams.

    Streams are backed by PCG64 seeded through a SeedSequence, so identical
    seeds yield identical draw sequences across platforms. ``child(label)``
    derives an independent stream from (seed, path + label).
    """

    def __init__(self, seed: int, _path: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.path = tuple(_path)
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)
        self.gen = np.random.Generator(np.random.PCG64(ss))

    def child(self, label) -> "RngStream":
        return RngStream(self.seed, self.path + (_label_key(label),))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, path={self.path})"
