"""Bipartite operations: Schmidt decomposition, entropy, PPT separability.

The PPT (partial transpose) test decides separability exactly on 2x2 and 2x3
shapes; on larger shapes a violation still certifies entanglement but a pass
is inconclusive, and callers receive that caveat through ``ppt_decisive``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_RANK_TOL,
    DensityMatrix,
    PureState,
    SubsystemSet,
    entropy_bits,
    numerical_rank,
    reduce,
)

PPT_NEG_TOL = 1e-9


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Singular value form of a pure state across one bipartition."""

    coefficients: np.ndarray  # descending positive reals, length == rank
    left_vectors: np.ndarray  # (dim_left, rank), orthonormal columns
    right_vectors: np.ndarray  # (dim_right, rank), orthonormal columns
    rank: int

    def reconstruct(self) -> np.ndarray:
        """Coefficient matrix sum_k lambda_k |e_k><f_k^*| (left x right)."""
        return (self.left_vectors * self.coefficients) @ self.right_vectors.T


def coefficient_matrix(state: PureState, left: SubsystemSet) -> np.ndarray:
    """Amplitudes reshaped to a (left block) x (right block) matrix."""
    profile = state.profile
    left.validate_for(profile)
    m = profile.party_count
    if len(left) >= m:
        raise ValueError("left side must be a proper subset of the parties")
    left_axes = [i - 1 for i in left.indices]
    right_axes = [i for i in range(m) if i + 1 not in left]
    dl = int(np.prod([profile.dims[a] for a in left_axes], dtype=np.int64))
    dr = int(np.prod([profile.dims[a] for a in right_axes], dtype=np.int64))
    return state.tensor().transpose(left_axes + right_axes).reshape(dl, dr)


def schmidt_decompose(
    state: PureState, left: SubsystemSet, tol: float = DEFAULT_RANK_TOL
) -> SchmidtDecomposition:
    """Schmidt decomposition of ``state`` across ``left`` | complement.

    Column phases are fixed by making the first significant component of each
    left vector real positive, so degenerate coefficients come out in a
    reproducible basis.
    """
    mat = coefficient_matrix(state, left)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    # rank on squared singular values so it agrees with numerical_rank of
    # either reduction (whose eigenvalues are the squares)
    rank = int(np.count_nonzero(s**2 > tol * s[0] ** 2)) if s[0] > 0 else 0
    rank = max(rank, 1)
    u, s, vh = u[:, :rank], s[:rank] / np.linalg.norm(s[:rank]), vh[:rank, :]
    for k in range(rank):
        col = u[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            phase = col[nz[0]] / abs(col[nz[0]])
            u[:, k] = col / phase
            vh[k, :] = vh[k, :] * phase
    return SchmidtDecomposition(
        coefficients=np.ascontiguousarray(s),
        left_vectors=np.ascontiguousarray(u),
        right_vectors=np.ascontiguousarray(vh.T),
        rank=rank,
    )


def entanglement_entropy(decomp: SchmidtDecomposition) -> float:
    """Von Neumann entanglement entropy in bits, -sum lambda^2 log2 lambda^2."""
    return entropy_bits(decomp.coefficients**2)


def _grouped_dims(rho: DensityMatrix, cut: SubsystemSet) -> tuple[int, int]:
    profile = rho.profile
    cut.validate_for(profile)
    m = profile.party_count
    if len(cut) >= m:
        raise ValueError("cut must be a proper subset of the parties")
    d_cut = int(np.prod([profile.dims[i - 1] for i in cut.indices], dtype=np.int64))
    d_rest = profile.total_dim // d_cut
    return d_cut, d_rest


def partial_transpose(rho: DensityMatrix, cut: SubsystemSet) -> np.ndarray:
    """Partial transpose over the ``cut`` group of the bipartition cut|rest."""
    profile = rho.profile
    m = profile.party_count
    cut_axes = [i - 1 for i in cut.indices]
    rest_axes = [i for i in range(m) if i + 1 not in cut]
    da, db = _grouped_dims(rho, cut)
    t = rho.matrix.reshape(profile.dims + profile.dims)
    perm = (
        cut_axes
        + rest_axes
        + [m + a for a in cut_axes]
        + [m + a for a in rest_axes]
    )
    blk = t.transpose(perm).reshape(da, db, da, db)
    return blk.transpose(2, 1, 0, 3).reshape(da * db, da * db)


def ppt_entangled(rho: DensityMatrix, cut: SubsystemSet, tol: float = PPT_NEG_TOL) -> bool:
    """True iff the partial transpose over ``cut`` has an eigenvalue < -tol.

    A True result certifies entanglement across cut|rest for any shape; a
    False result certifies separability only where PPT is decisive.
    """
    pt = partial_transpose(rho, cut)
    wmin = float(np.linalg.eigvalsh((pt + pt.conj().T) / 2.0)[0])
    return wmin < -tol


def ppt_decisive(rho: DensityMatrix, cut: SubsystemSet) -> bool:
    """Whether PPT decides separability exactly for this grouped shape."""
    da, db = _grouped_dims(rho, cut)
    return tuple(sorted((da, db))) in ((2, 2), (2, 3))


def ppt_negativity(rho: DensityMatrix, cut: SubsystemSet) -> float:
    """Total magnitude of negative partial-transpose eigenvalues."""
    pt = partial_transpose(rho, cut)
    w = np.linalg.eigvalsh((pt + pt.conj().T) / 2.0)
    return float(-np.sum(w[w < 0.0]))


def mixed_bipartite_schmidt_number(rho: DensityMatrix, budget=None, tol: float = DEFAULT_RANK_TOL):
    """Schmidt number interval of a two-party mixed state.

    Defers to the general mixed-state engine: the lower bound combines the
    PPT test (decisive on 2x2 / 2x3) with exact rank-2 range analysis, the
    upper bound comes from ensemble search.
    """
    from .number import DEFAULT_BUDGET, mixed_schmidt_number

    if rho.party_count != 2:
        raise ValueError("mixed_bipartite_schmidt_number expects a two-party profile")
    return mixed_schmidt_number(rho, budget=budget or DEFAULT_BUDGET, tol=tol)


def pure_projector_rank(state: PureState, tol: float = DEFAULT_RANK_TOL) -> int:
    """Schmidt rank of a bipartite pure state (helper shared with tests)."""
    if state.party_count != 2:
        raise ValueError("expects a two-party state")
    return numerical_rank(reduce(state, SubsystemSet((1,))), tol)
