"""Finite probability spaces over propositional atoms.

A space with n atoms has 2**n worlds; world index bit k encodes the truth of
atom k. Distributions are dense weight vectors over worlds. All types are
immutable after construction and all operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import formula as _formula

MAX_ATOMS = 20
SUM_TOLERANCE = 1e-12
DEFAULT_EXTREMALITY_EPS = 1e-9


class ProbError(ValueError):
    """Base class for errors raised by this package's probability core."""


class SpaceMismatchError(ProbError):
    """Operands defined over different world spaces."""


class UndefinedConditionalError(ProbError):
    """Conditioning on a zero-probability event.

    Distinct from structural errors: callers performing condition checks must
    surface this as "condition inapplicable" rather than as a failure.
    """


class InvalidDistributionError(ProbError):
    """Weight vector violates nonnegativity or normalization."""


@dataclass(frozen=True)
class WorldSpace:
    """Ordered list of atoms fixing a canonical enumeration of 2**n worlds."""

    atoms: tuple[str, ...]

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise ValueError("a world space needs at least one atom")
        if len(atoms) > MAX_ATOMS:
            raise ValueError(f"at most {MAX_ATOMS} atoms supported, got {len(atoms)}")
        seen = set()
        for name in atoms:
            if not isinstance(name, str) or not name:
                raise ValueError("atom names must be nonempty strings")
            if not name.isidentifier():
                raise ValueError(f"atom name {name!r} is not an identifier")
            if name in seen:
                raise ValueError(f"duplicate atom name {name!r}")
            seen.add(name)

    @property
    def world_count(self) -> int:
        return 1 << len(self.atoms)

    def index(self, name: str) -> int:
        try:
            return self.atoms.index(name)
        except ValueError:
            raise KeyError(f"unknown atom {name!r}") from None

    def atom_mask(self, name: str) -> np.ndarray:
        """Boolean mask over world indices where the named atom is true."""
        k = self.index(name)
        mask = ((np.arange(self.world_count) >> k) & 1).astype(bool)
        mask.flags.writeable = False
        return mask

    def world_description(self, world: int) -> dict[str, bool]:
        return {a: bool((world >> k) & 1) for k, a in enumerate(self.atoms)}


class Proposition:
    """A boolean formula over atoms, evaluated as a set of worlds."""

    __slots__ = ("space", "mask", "text")

    def __init__(self, space: WorldSpace, mask: np.ndarray, text: str | None = None):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (space.world_count,):
            raise ValueError("mask length must equal the space's world count")
        mask = mask.copy()
        mask.flags.writeable = False
        self.space = space
        self.mask = mask
        self.text = text

    @classmethod
    def atom(cls, space: WorldSpace, name: str) -> "Proposition":
        return cls(space, space.atom_mask(name), name)

    @classmethod
    def parse(cls, space: WorldSpace, text: str) -> "Proposition":
        node = _formula.parse(text)
        unknown = _formula.atom_names(node) - set(space.atoms)
        if unknown:
            raise _formula.FormulaError(
                f"unknown atom(s) {sorted(unknown)} in formula {text!r}"
            )
        return cls(space, _eval_node(node, space), text)

    @classmethod
    def tautology(cls, space: WorldSpace) -> "Proposition":
        return cls(space, np.ones(space.world_count, dtype=bool), "⊤")

    @classmethod
    def contradiction(cls, space: WorldSpace) -> "Proposition":
        return cls(space, np.zeros(space.world_count, dtype=bool), "⊥")

    @property
    def extension(self) -> frozenset[int]:
        return frozenset(int(i) for i in np.flatnonzero(self.mask))

    def __invert__(self) -> "Proposition":
        text = f"!({self.text})" if self.text else None
        return Proposition(self.space, ~self.mask, text)

    def __and__(self, other: "Proposition") -> "Proposition":
        _require_same_space(self.space, other.space)
        text = None
        if self.text and other.text:
            text = f"({self.text}) & ({other.text})"
        return Proposition(self.space, self.mask & other.mask, text)

    def __or__(self, other: "Proposition") -> "Proposition":
        _require_same_space(self.space, other.space)
        text = None
        if self.text and other.text:
            text = f"({self.text}) | ({other.text})"
        return Proposition(self.space, self.mask | other.mask, text)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Proposition):
            return NotImplemented
        return self.space == other.space and bool(np.array_equal(self.mask, other.mask))

    def __hash__(self):
        return hash((self.space, self.mask.tobytes()))

    def __repr__(self):
        label = self.text or f"<{np.count_nonzero(self.mask)} worlds>"
        return f"Proposition({label})"


def _eval_node(node: tuple, space: WorldSpace) -> np.ndarray:
    kind = node[0]
    if kind == "atom":
        return space.atom_mask(node[1])
    if kind == "not":
        return ~_eval_node(node[1], space)
    left = _eval_node(node[1], space)
    right = _eval_node(node[2], space)
    return (left & right) if kind == "and" else (left | right)


class JointDistribution:
    """Nonnegative weights over worlds summing to one."""

    __slots__ = ("space", "weights")

    def __init__(self, space: WorldSpace, weights):
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (space.world_count,):
            raise InvalidDistributionError(
                f"expected {space.world_count} weights, got shape {w.shape}"
            )
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise InvalidDistributionError("weights must be finite and nonnegative")
        total = float(w.sum())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidDistributionError(f"weights sum to {total!r}, not 1")
        w = w.copy()
        w.flags.writeable = False
        self.space = space
        self.weights = w

    @classmethod
    def uniform(cls, space: WorldSpace) -> "JointDistribution":
        n = space.world_count
        return cls(space, np.full(n, 1.0 / n))

    @classmethod
    def from_unnormalized(cls, space: WorldSpace, weights) -> "JointDistribution":
        w = np.asarray(weights, dtype=np.float64)
        total = w.sum()
        if total <= 0:
            raise InvalidDistributionError("cannot normalize nonpositive total mass")
        return cls(space, w / total)

    def __eq__(self, other) -> bool:
        if not isinstance(other, JointDistribution):
            return NotImplemented
        return self.space == other.space and bool(np.array_equal(self.weights, other.weights))

    def __repr__(self):
        return f"JointDistribution(atoms={self.space.atoms}, weights={self.weights.tolist()})"


def _require_same_space(a: WorldSpace, b: WorldSpace) -> None:
    if a != b:
        raise SpaceMismatchError(f"world spaces differ: {a.atoms} vs {b.atoms}")


def probability(dist: JointDistribution, a: Proposition) -> float:
    """Sum of weights of the worlds in a's extension."""
    _require_same_space(dist.space, a.space)
    return float(dist.weights[a.mask].sum())


def conditional(dist: JointDistribution, a: Proposition, given: Proposition) -> float:
    """P(a | given); raises UndefinedConditionalError when P(given) = 0."""
    _require_same_space(dist.space, a.space)
    _require_same_space(dist.space, given.space)
    denom = float(dist.weights[given.mask].sum())
    if denom <= 0.0:
        raise UndefinedConditionalError(
            f"conditioning on zero-probability event {given!r}"
        )
    num = float(dist.weights[a.mask & given.mask].sum())
    return num / denom


def entails(a: Proposition, b: Proposition) -> bool:
    """True iff a's extension is a subset of b's."""
    _require_same_space(a.space, b.space)
    return not bool(np.any(a.mask & ~b.mask))


def is_non_extremal(
    dist: JointDistribution, a: Proposition, eps: float = DEFAULT_EXTREMALITY_EPS
) -> bool:
    p = probability(dist, a)
    return eps < p < 1.0 - eps
