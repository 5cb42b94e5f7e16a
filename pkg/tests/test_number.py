import numpy as np
import pytest

import multischmidt as ms
from multischmidt.core import DensityMatrix, PureState

FAST = ms.SearchBudget(restarts=16, iters=150, seed=0)


def mixture(states, weights):
    prof = states[0].profile
    mat = np.zeros((prof.total_dim,) * 2, dtype=complex)
    for st, w in zip(states, weights):
        mat += w * np.outer(st.amplitudes, st.amplitudes.conj())
    return DensityMatrix(prof, mat)


class TestPureSchmidtNumber:
    @pytest.mark.parametrize(
        "state, want",
        [
            (ms.w_state(3), 4),
            (ms.ghz_state(3), 3),
            (ms.ghz_state(3, 3), 4),
        ],
    )
    def test_paper_examples(self, state, want):
        res = ms.pure_schmidt_number(state)
        assert res.exact and res.value_hi == want

    def test_zero_times_bell(self):
        amps = np.kron([1.0, 0.0], ms.bell_state().amplitudes)
        res = ms.pure_schmidt_number(PureState(ms.qubits(3), amps))
        assert res.exact and res.value_hi == 2
        assert res.branch_trace["rule"] == "single-entangled-factor"

    def test_w4(self):
        res = ms.pure_schmidt_number(ms.w_state(4))
        assert res.exact and res.value_hi == 6

    def test_pair_times_pair_adds(self):
        pair_a = ms.random_pure(ms.DimensionProfile((2, 2)), 1)
        pair_b = ms.random_pure(ms.DimensionProfile((3, 3)), 2)
        amps = np.kron(pair_a.amplitudes, pair_b.amplitudes)
        st = PureState(ms.DimensionProfile((2, 2, 3, 3)), amps)
        ra = ms.pure_schmidt_number(pair_a).value_hi
        rb = ms.pure_schmidt_number(pair_b).value_hi
        res = ms.pure_schmidt_number(st)
        assert res.exact and res.value_hi == ra + rb
        assert res.branch_trace["rule"] == "factor-sum"

    @pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3)])
    @pytest.mark.parametrize("seed", range(25))
    def test_bipartite_oracle_equivalence(self, dims, seed):
        st = ms.random_pure(ms.DimensionProfile(dims), seed)
        rank = ms.schmidt_decompose(st, ms.SubsystemSet((1,))).rank
        res = ms.pure_schmidt_number(st)
        assert res.exact and res.value_hi == rank

    @pytest.mark.parametrize("seed", range(30))
    def test_fully_separable_iff_value_one(self, seed):
        prof = ms.qubits(3)
        prod = ms.random_product(prof, seed)
        res = ms.pure_schmidt_number(prod)
        assert res.exact and res.value_hi == 1
        assert ms.factorize(prod).label == ms.FULLY_SEPARABLE
        ent = ms.random_pure(prof, seed)
        res2 = ms.pure_schmidt_number(ent)
        is_sep = ms.factorize(ent).label == ms.FULLY_SEPARABLE
        assert (res2.value_hi == 1) == is_sep

    @pytest.mark.parametrize("seed", range(10))
    def test_monotone_under_appending_product(self, seed):
        base = ms.random_pure(ms.qubits(2), seed)
        tail = ms.random_product(ms.qubits(2), seed + 50)
        amps = np.kron(base.amplitudes, tail.amplitudes)
        joined = PureState(ms.qubits(4), amps)
        assert (
            ms.pure_schmidt_number(joined).value_hi
            >= ms.pure_schmidt_number(base).value_hi
        )


class TestMixedSchmidtNumber:
    def test_pure_projector_short_circuits(self):
        w3 = ms.w_state(3)
        res = ms.mixed_schmidt_number(w3.density())
        assert res.exact and res.value_hi == 4

    def test_ghz_reduction(self):
        red = ms.reduce(ms.ghz_state(3), ms.SubsystemSet((2, 3)))
        res = ms.mixed_schmidt_number(red)
        assert (res.value_lo, res.value_hi) == (1, 1)
        assert res.witness_ensemble is not None
        weights = sorted(res.witness_ensemble.weights)
        assert np.allclose(weights, [0.5, 0.5], atol=1e-9)

    def test_basis_mixture_is_separable(self):
        prof = ms.qubits(3)
        rho = mixture(
            [ms.basis_state(prof, (0, 0, 0)), ms.basis_state(prof, (1, 1, 1))],
            [0.5, 0.5],
        )
        res = ms.mixed_schmidt_number(rho)
        assert (res.value_lo, res.value_hi, res.exact) == (1, 1, True)

    def test_w4_reduction_certified(self):
        red = ms.reduce(ms.w_state(4), ms.SubsystemSet((2, 3, 4)))
        res = ms.mixed_schmidt_number(red)
        assert (res.value_lo, res.value_hi, res.exact) == (4, 4, True)
        assert res.branch_trace["rule"] == "range-span-certified"

    @pytest.mark.parametrize("seed", range(10))
    def test_product_mixtures_resolve_exactly(self, seed):
        prof = ms.qubits(3)
        rho = mixture(
            [ms.random_product(prof, 2 * seed), ms.random_product(prof, 2 * seed + 1)],
            [0.35, 0.65],
        )
        res = ms.mixed_schmidt_number(rho, FAST)
        assert (res.value_lo, res.value_hi, res.exact) == (1, 1, True)


class TestEnsembleSearch:
    def test_ghz_reduction_product_ensemble(self):
        red = ms.reduce(ms.ghz_state(3), ms.SubsystemSet((2, 3)))
        cand = ms.ensemble_search(red, 1)
        assert cand is not None
        assert np.linalg.norm(cand.reconstruct() - red.matrix) <= 1e-7
        for st in cand.states:
            assert ms.pure_schmidt_number(st).value_hi == 1

    def test_pure_projector_singleton(self):
        st = ms.random_pure(ms.DimensionProfile((2, 2)), 3)
        rank = ms.schmidt_decompose(st, ms.SubsystemSet((1,))).rank
        cand = ms.ensemble_search(st.density(), rank)
        assert cand is not None and len(cand.states) == 1

    def test_w3_reduction_product_impossible(self):
        red = ms.reduce(ms.w_state(3), ms.SubsystemSet((2, 3)))
        assert ms.ensemble_search(red, 1, FAST) is None

    def test_rejects_bad_target(self):
        red = ms.reduce(ms.ghz_state(3), ms.SubsystemSet((2, 3)))
        with pytest.raises(ValueError):
            ms.ensemble_search(red, 0)

    @pytest.mark.parametrize("seed", range(5))
    def test_candidates_always_reconstruct(self, seed):
        prof = ms.DimensionProfile((2, 2))
        rho = mixture(
            [ms.random_pure(prof, 3 * seed + k) for k in range(3)],
            [0.5, 0.3, 0.2],
        )
        cand = ms.ensemble_search(rho, 2, FAST)
        assert cand is not None  # every 2x2 pure state has rank <= 2
        assert np.linalg.norm(cand.reconstruct() - rho.matrix) <= 1e-7


class TestSloccRankCheck:
    def test_w3_random_invertibles(self):
        ops = ms.random_local_invertible(ms.qubits(3), 5)
        assert ms.slocc_rank_check(ms.w_state(3), ops)

    def test_ghz3_local_unitaries(self):
        ops = ms.random_local_unitary(ms.qubits(3), 6)
        assert ms.slocc_rank_check(ms.ghz_state(3), ops)

    def test_product_state(self):
        ops = ms.random_local_invertible(ms.qubits(3), 7)
        st = ms.basis_state(ms.qubits(3), (0, 0, 0))
        assert ms.slocc_rank_check(st, ops)

    def test_rejects_singular_operator(self):
        ops = [np.eye(2), np.eye(2), np.diag([1.0, 0.0])]
        with pytest.raises(ValueError):
            ms.slocc_rank_check(ms.ghz_state(3), ops)


class TestResultInvariants:
    def test_result_validation(self):
        with pytest.raises(ValueError):
            ms.SchmidtNumberResult(2, 1, False, None, {})
        with pytest.raises(ValueError):
            ms.SchmidtNumberResult(1, 1, False, None, {})

    def test_interval_value_raises_when_inexact(self):
        res = ms.SchmidtNumberResult(1, 2, False, None, {})
        with pytest.raises(ValueError):
            _ = res.value
