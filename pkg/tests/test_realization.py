import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import assert_close
from ncjulia.errors import DimensionError, DomainError
from ncjulia.hermitian import imag_part, min_eig, op_norm
from ncjulia.ncfunction import LoewnerFunction, direct_sum
from ncjulia.realization import LoewnerRealization, random_realization
from ncjulia.sampling import random_half_plane_point

seeds = st.integers(0, 2**32 - 1)


def scalar_oracle(R: LoewnerRealization, z: complex) -> complex:
    """``s + sum |<v, e_i>|^2 (1 + z lam_i) / (lam_i - z)`` for a pure-M one-variable realization."""
    lam, U = np.linalg.eigh(R.A)
    w = np.abs(U.conj().T @ R.v) ** 2
    return R.s + np.sum(w * (1 + z * lam) / (lam - z))


class TestConstruction:
    def test_projections_orthogonal_and_complete(self, rng):
        R = random_realization(rng, n_vars=2)
        P = R.projections()
        for i, Pi in enumerate(P):
            for j, Pj in enumerate(P):
                assert_close(Pi @ Pj, Pi if i == j else np.zeros_like(Pi), 0)
            assert_close(Pi, Pi.conj().T, 0)
        assert_close(sum(P), np.eye(R.dim), 0)

    def test_vector_normalized(self):
        R = LoewnerRealization(0, 2, np.eye(2), [[0, 1]], [3.0, 4.0])
        assert np.linalg.norm(R.v) == pytest.approx(1)

    def test_bad_partition(self):
        with pytest.raises(ValueError):
            LoewnerRealization(1, 1, [[0.0]], [[0], [0]], [1.0, 0.0])

    def test_empty(self):
        with pytest.raises(DimensionError):
            LoewnerRealization(0, 0, np.zeros((0, 0)), [[]], [])

    def test_json_round_trip(self, rng):
        R = random_realization(rng, n_vars=2)
        S = LoewnerRealization.from_json(json.loads(json.dumps(R.to_json())))
        pts = [random_half_plane_point(rng, 2) for _ in range(2)]
        assert_close(R.evaluate(pts), S.evaluate(pts), 1e-14)


class TestEvaluation:
    def test_minimal_example(self):
        R = LoewnerRealization(0, 1, [[0.0]], [[0]], [1.0], 0.0)
        h = R.evaluate([[[1j]]])
        assert h[0, 0].imag > 0
        assert h[0, 0] == pytest.approx(1j)  # reduces to -1/z

    @given(seeds)
    def test_scalar_formula(self, seed):
        rng = np.random.default_rng(seed)
        m = int(rng.integers(1, 4))
        G = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        R = LoewnerRealization(0, m, G + G.conj().T, [list(range(m))],
                               rng.normal(size=m) + 1j * rng.normal(size=m), rng.normal())
        z = complex(rng.normal(), abs(rng.normal()) + 0.05)
        assert R.evaluate([[[z]]])[0, 0] == pytest.approx(scalar_oracle(R, z), rel=1e-10)

    @given(seeds, st.integers(1, 3))
    def test_direct_sums(self, seed, k):
        rng = np.random.default_rng(seed)
        R = random_realization(rng, n_vars=2)
        a = [random_half_plane_point(rng, k) for _ in range(2)]
        c = [random_half_plane_point(rng, 2) for _ in range(2)]
        joint = R.evaluate([direct_sum(x, y) for x, y in zip(a, c)])
        assert op_norm(joint - direct_sum(R.evaluate(a), R.evaluate(c))) <= 1e-10 * (1 + op_norm(joint))

    def test_two_variable_positivity(self, rng):
        R = random_realization(rng, n_vars=2)
        for _ in range(1000):
            z, w = (complex(rng.normal(), abs(rng.normal()) + 1e-3) for _ in range(2))
            assert R.evaluate([[[z]], [[w]]])[0, 0].imag > 0

    def test_operator_positivity_on_samples(self, rng):
        worst = np.inf
        for _ in range(300):
            R = random_realization(rng, n_vars=int(rng.integers(1, 3)))
            k = int(rng.integers(1, 4))
            pts = [random_half_plane_point(rng, k) for _ in range(R.n_vars)]
            worst = min(worst, min_eig(imag_part(R.operator(pts))))
        assert worst > 0

    def test_singular_middle_factor(self):
        R = LoewnerRealization(0, 1, [[0.5]], [[0]], [1.0])
        with pytest.raises(DomainError) as info:
            R.operator([[[0.5]]])
        assert info.value.smallest_singular_value is not None

    def test_variable_count_checked(self, rng):
        R = random_realization(rng, n_vars=2)
        with pytest.raises(DimensionError):
            R.evaluate([1j * np.eye(2)])

    def test_induced_function_is_half_plane_map(self, rng):
        f = LoewnerFunction(random_realization(rng, n_vars=2))
        a = random_half_plane_point(rng, 3)
        assert min_eig(imag_part(f(a))) > 0
