"""Dense multipartite state and operator primitives.

Conventions
-----------
- Parties are numbered 1..m in every public API;
  internally party i lives on tensor axis i - 1.
- Amplitude vectors are row-major over the multi-index (i_1, ..., i_m) with
  party 1 varying slowest.
- All tolerances are explicit; the numerical rank cutoff is relative to the
  largest eigenvalue and defaults to ``DEFAULT_RANK_TOL``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Union

import numpy as np

NORM_ATOL = 1e-10
HERM_ATOL = 1e-10
TRACE_ATOL = 1e-10
PSD_ATOL = 1e-10
DEFAULT_RANK_TOL = 1e-8


@dataclass(frozen=True)
class DimensionProfile:
    """Ordered local dimensions (N_1, ..., N_m) of a multipartite system."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 1:
            raise ValueError("a dimension profile needs at least one party")
        if any(d < 1 for d in dims):
            raise ValueError(f"local dimensions must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def party_count(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        out = 1
        for d in self.dims:
            out *= d
        return out

    def restrict(self, keep: "SubsystemSet") -> "DimensionProfile":
        keep.validate_for(self)
        return DimensionProfile(tuple(self.dims[i - 1] for i in keep.indices))


@dataclass(frozen=True)
class SubsystemSet:
    """A nonempty set of party labels, stored strictly increasing, 1-based."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(idx) == 0:
            raise ValueError("subsystem set must be nonempty")
        if any(i < 1 for i in idx):
            raise ValueError("party labels are 1-based")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"party labels must be strictly increasing, got {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, indices: Iterable[int]) -> "SubsystemSet":
        return cls(tuple(sorted(set(int(i) for i in indices))))

    def complement(self, party_count: int) -> "SubsystemSet":
        rest = tuple(i for i in range(1, party_count + 1) if i not in self.indices)
        if not rest:
            raise ValueError("complement of the full party set is empty")
        return SubsystemSet(rest)

    def validate_for(self, profile: DimensionProfile) -> None:
        if self.indices[-1] > profile.party_count:
            raise ValueError(
                f"party {self.indices[-1]} out of range for {profile.party_count} parties"
            )

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, party: int) -> bool:
        return party in self.indices


@dataclass(frozen=True)
class PureState:
    """A normalized complex amplitude vector over a dimension profile."""

    profile: DimensionProfile
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128).reshape(-1).copy()
        if amps.shape[0] != self.profile.total_dim:
            raise ValueError(
                f"amplitude length {amps.shape[0]} does not match total dimension "
                f"{self.profile.total_dim}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {NORM_ATOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def party_count(self) -> int:
        return self.profile.party_count

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.profile.dims)

    def density(self) -> "DensityMatrix":
        mat = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityMatrix(self.profile, mat)


def normalized_state(profile: DimensionProfile, amplitudes: np.ndarray) -> PureState:
    """Build a PureState from an unnormalized amplitude vector."""
    amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(amps)
    if norm <= 0:
        raise ValueError("cannot normalize the zero vector")
    return PureState(profile, amps / norm)


@dataclass(frozen=True)
class DensityMatrix:
    """A Hermitian, positive semidefinite, trace-one operator."""

    profile: DimensionProfile
    matrix: np.ndarray

    def __post_init__(self):
        n = self.profile.total_dim
        mat = np.ascontiguousarray(self.matrix, dtype=np.complex128).copy()
        if mat.shape != (n, n):
            raise ValueError(f"matrix shape {mat.shape} does not match profile dimension {n}")
        herm_err = float(np.max(np.abs(mat - mat.conj().T))) if n else 0.0
        if herm_err > HERM_ATOL:
            raise ValueError(f"matrix is not Hermitian: max |A - A^dag| = {herm_err}")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValueError(f"trace {tr} deviates from 1 beyond {TRACE_ATOL}")
        wmin = float(np.linalg.eigvalsh(mat)[0])
        if wmin < -PSD_ATOL:
            raise ValueError(f"matrix has negative eigenvalue {wmin}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def party_count(self) -> int:
        return self.profile.party_count


MatrixLike = Union[np.ndarray, DensityMatrix]


def as_matrix(operand: MatrixLike) -> np.ndarray:
    return operand.matrix if isinstance(operand, DensityMatrix) else np.asarray(operand)


def _require_hermitian(mat: np.ndarray, atol: float = 1e-8) -> np.ndarray:
    mat = np.asarray(mat, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    err = float(np.max(np.abs(mat - mat.conj().T)))
    if err > atol:
        raise ValueError(f"matrix is not Hermitian within {atol}: deviation {err}")
    # symmetrize so eigh sees an exactly Hermitian operand
    return (mat + mat.conj().T) / 2.0


def reduce(state: Union[PureState, DensityMatrix], keep: SubsystemSet) -> DensityMatrix:
    """Partial trace over the complement of ``keep``.

    The result profile is the input profile restricted to ``keep`` (ascending
    party order). Works for pure states and density matrices.
    """
    profile = state.profile
    keep.validate_for(profile)
    m = profile.party_count
    keep_axes = [i - 1 for i in keep.indices]
    traced_axes = [i for i in range(m) if i + 1 not in keep]
    dims = profile.dims
    dk = int(np.prod([dims[a] for a in keep_axes], dtype=np.int64))
    dt = int(np.prod([dims[a] for a in traced_axes], dtype=np.int64)) if traced_axes else 1

    if isinstance(state, PureState):
        psi = state.tensor().transpose(keep_axes + traced_axes).reshape(dk, dt)
        mat = psi @ psi.conj().T
    else:
        t = state.matrix.reshape(dims + dims)
        perm = keep_axes + traced_axes + [m + a for a in keep_axes] + [m + a for a in traced_axes]
        blocks = t.transpose(perm).reshape(dk, dt, dk, dt)
        mat = np.einsum("ijkj->ik", blocks)

    mat = (mat + mat.conj().T) / 2.0
    return DensityMatrix(profile.restrict(keep), mat)


def numerical_rank(mat: MatrixLike, tol: float = DEFAULT_RANK_TOL) -> int:
    """Count eigenvalues above ``tol`` times the largest eigenvalue."""
    arr = _require_hermitian(as_matrix(mat))
    w = np.linalg.eigvalsh(arr)
    top = float(w[-1])
    if top <= 0.0:
        return 0
    return int(np.count_nonzero(w > tol * top))


class Eigensystem(NamedTuple):
    values: np.ndarray  # descending real eigenvalues
    vectors: np.ndarray  # columns are the matching orthonormal eigenvectors


def spectrum(mat: MatrixLike) -> Eigensystem:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    arr = _require_hermitian(as_matrix(mat))
    w, v = np.linalg.eigh(arr)
    return Eigensystem(np.ascontiguousarray(w[::-1]), np.ascontiguousarray(v[:, ::-1]))


def scaled_root(rho: DensityMatrix) -> np.ndarray:
    """The square root of a density matrix scaled by 1/sqrt(2).

    The eigenvalues of the result are sqrt(lambda)/sqrt(2) for each
    eigenvalue lambda of ``rho``; their squares sum to 1/2.
    """
    w, v = spectrum(rho)
    if float(w[-1]) < -PSD_ATOL:
        raise ValueError(f"negative eigenvalue {float(w[-1])} beyond tolerance")
    wc = np.clip(w, 0.0, None)
    root = (v * np.sqrt(wc / 2.0)) @ v.conj().T
    return (root + root.conj().T) / 2.0


def entropy_bits(weights: np.ndarray) -> float:
    """Shannon entropy in bits of a nonnegative weight vector, 0*log0 := 0."""
    p = np.asarray(weights, dtype=np.float64)
    p = p[p > 1e-300]
    if p.size == 0:
        return 0.0
    return float(-np.sum(p * np.log2(p)))
