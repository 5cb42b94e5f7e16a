"""Finest product factorization of pure states and separability labels.

A split A|rest is valid iff the reduction onto A has numerical rank 1; the
finest partition is obtained by greedy recursive splitting, which is unique
for pure states. Every multi-party factor of the finest partition is
genuinely entangled on its own parties.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import (
    DEFAULT_RANK_TOL,
    DensityMatrix,
    PureState,
    SubsystemSet,
    numerical_rank,
    reduce,
    spectrum,
)
from .errors import ConsistencyError

FULLY_SEPARABLE = "FullySeparable"
GENUINELY_ENTANGLED = "GenuinelyEntangled"

PURITY_ATOL = 1e-8


@dataclass(frozen=True)
class PartitionStructure:
    """Finest product factorization of a pure state.

    ``factors`` partition {1..m}; ``factor_states`` carry the extracted pure
    state of each factor on its restricted profile; a factor is flagged
    entangled iff it has two or more parties (finest factors cannot be
    internally product).
    """

    party_count: int
    factors: tuple[SubsystemSet, ...]
    factor_states: tuple[PureState, ...]
    entangled: tuple[bool, ...]
    label: str

    @property
    def is_fully_separable(self) -> bool:
        return self.label == FULLY_SEPARABLE

    @property
    def is_genuinely_entangled(self) -> bool:
        return self.label == GENUINELY_ENTANGLED

    def entangled_factors(self) -> list[tuple[SubsystemSet, PureState]]:
        return [
            (f, s)
            for f, s, e in zip(self.factors, self.factor_states, self.entangled)
            if e
        ]


def enumerate_bipartitions(m: int) -> list[SubsystemSet]:
    """All unordered proper bipartitions of m parties, canonically ordered.

    Each bipartition is represented by its side containing party 1; ordering
    is by size then lexicographic.
    """
    if m < 2:
        raise ValueError("bipartitions need at least two parties")
    out: list[SubsystemSet] = []
    rest = list(range(2, m + 1))
    for size in range(1, m):
        for extra in combinations(rest, size - 1):
            out.append(SubsystemSet((1,) + extra))
    return out


def _local_subsets(k: int) -> list[tuple[int, ...]]:
    """Proper subsets of {1..k} containing 1, by size then lexicographic."""
    out = []
    for size in range(1, k):
        for extra in combinations(range(2, k + 1), size - 1):
            out.append((1,) + extra)
    return out


def _dominant_pure(red: DensityMatrix) -> PureState:
    w, v = spectrum(red)
    if float(w[0]) < 1.0 - PURITY_ATOL:
        raise ConsistencyError(
            f"expected a pure reduction, largest eigenvalue {float(w[0])}"
        )
    vec = v[:, 0]
    return PureState(red.profile, vec / np.linalg.norm(vec))


def _finest(parties: tuple[int, ...], state: PureState, tol: float):
    k = len(parties)
    if k == 1:
        return [(parties, state)]
    for local in _local_subsets(k):
        side = SubsystemSet(local)
        if numerical_rank(reduce(state, side), tol) == 1:
            other = side.complement(k)
            state_a = _dominant_pure(reduce(state, side))
            state_b = _dominant_pure(reduce(state, other))
            parties_a = tuple(parties[i - 1] for i in side.indices)
            parties_b = tuple(parties[i - 1] for i in other.indices)
            return _finest(parties_a, state_a, tol) + _finest(parties_b, state_b, tol)
    return [(parties, state)]


def structure_label(factors: tuple[SubsystemSet, ...], m: int) -> str:
    if all(len(f) == 1 for f in factors):
        return FULLY_SEPARABLE
    if len(factors) == 1:
        return GENUINELY_ENTANGLED
    sep = "," if m > 9 else ""
    return "|".join(sep.join(str(i) for i in f.indices) for f in factors)


def factorize(state: PureState, tol: float = DEFAULT_RANK_TOL) -> PartitionStructure:
    """Finest product factorization of a normalized pure state."""
    m = state.party_count
    leaves = _finest(tuple(range(1, m + 1)), state, tol)
    leaves.sort(key=lambda item: item[0][0])
    factors = tuple(SubsystemSet(p) for p, _ in leaves)
    states = tuple(s for _, s in leaves)
    entangled = tuple(len(f) >= 2 for f in factors)
    return PartitionStructure(
        party_count=m,
        factors=factors,
        factor_states=states,
        entangled=entangled,
        label=structure_label(factors, m),
    )


def local_rank_vector(state: PureState, tol: float = DEFAULT_RANK_TOL) -> tuple[int, ...]:
    """Per-party reduction ranks (the entanglement dimensionality vector)."""
    return tuple(
        numerical_rank(reduce(state, SubsystemSet((i,))), tol)
        for i in range(1, state.party_count + 1)
    )
