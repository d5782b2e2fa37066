import numpy as np
import pytest
from hypothesis import given, strategies as st

from ncjulia.errors import DimensionError, DomainError, PreconditionError
from ncjulia.hermitian import herm_sqrt, imag_part, op_norm
from ncjulia.hyperbolic import (BallSpec, ball_diagnostics, ball_distance, boundary_sequence,
                                midpoint_convexity_check, midpoint_residual, ray_exit,
                                sample_members, theta, theta_low)
from ncjulia.ncfunction import amplify
from ncjulia.sampling import complex_gaussian, random_half_plane_point
from ncjulia.suites import ball_suite

seeds = st.integers(0, 2**32 - 1)
GRID = [(n, r) for n in (1, 2, 3) for r in (0.25, 1.0, 4.0)]


class TestDistance:
    def test_center(self, rng):
        c = random_half_plane_point(rng, 3)
        assert ball_distance(c, c) == 0

    def test_scalar_examples(self):
        assert ball_distance([[1j]], [[2j]]) == pytest.approx(1 / np.sqrt(2))
        assert ball_distance([[1j]], [[1 + 1j]]) == pytest.approx(1)

    def test_definite(self, rng):
        c = random_half_plane_point(rng, 2)
        a = c + 1e-6 * complex_gaussian(rng, (2, 2))
        assert ball_distance(c, a) > 0

    def test_levels_must_match(self):
        with pytest.raises(DimensionError):
            ball_distance(1j * np.eye(2), 1j * np.eye(3))

    def test_outside_half_plane(self):
        with pytest.raises(DomainError):
            ball_distance([[1j]], [[-1j]])

    @given(seeds, st.integers(1, 3), st.sampled_from([2, 3]))
    def test_amplification(self, seed, n, p):
        rng = np.random.default_rng(seed)
        c, a = random_half_plane_point(rng, n), random_half_plane_point(rng, n)
        assert ball_distance(amplify(c, p), amplify(a, p)) == pytest.approx(ball_distance(c, a), abs=1e-10)


class TestSpec:
    def test_bad_radius(self):
        for r in (0.0, -1.0, np.inf):
            with pytest.raises(ValueError):
                BallSpec(1j * np.eye(1), r)

    def test_center_in_half_plane(self):
        with pytest.raises(DomainError):
            BallSpec(np.eye(2), 1.0)

    def test_amplified(self):
        spec = BallSpec(1j * np.eye(2), 1.0).amplified(3)
        assert spec.level == 6


class TestDiagnostics:
    def test_center_is_member(self, rng):
        c = random_half_plane_point(rng, 2)
        d = ball_diagnostics(BallSpec(c, 0.5), c)
        assert d.member and d.bounds_ok

    def test_scalar_non_member(self):
        d = ball_diagnostics(BallSpec([[1j]], 0.5), [[2j]])
        assert d.distance == pytest.approx(1 / np.sqrt(2)) and not d.member

    def test_theta_band(self):
        assert theta(1.0) * theta_low(1.0) == pytest.approx(1.0)

    def test_unit_ball_lower_bound(self, rng):
        spec = BallSpec(1j * np.eye(1), 1.0)
        pts = sample_members(rng, spec, 3000)
        assert np.min(imag_part(pts)[:, 0, 0].real) >= 1 / 3 - 1e-10

    @pytest.mark.parametrize("n,r", GRID)
    def test_members_satisfy_bounds(self, n, r):
        rng = np.random.default_rng(n * 100 + int(r * 4))
        spec = BallSpec(random_half_plane_point(rng, n), r)
        pts = sample_members(rng, spec, 1500)
        d = ball_diagnostics(spec, pts)
        assert d.member.all()
        assert d.bounds_ok.all()
        assert d.distance.max() > 0.999 * r  # the shell is reached


class TestSampler:
    @given(seeds, st.integers(1, 3), st.sampled_from([0.25, 1.0, 4.0]))
    def test_ray_exit_on_sphere(self, seed, n, r):
        rng = np.random.default_rng(seed)
        u = complex_gaussian(rng, (n, n))
        u /= op_norm(u)
        t = ray_exit(u[None], r)[0]
        i = 1j * np.eye(n)
        assert ball_distance(i, i + t * u) == pytest.approx(r, rel=1e-8)
        assert ball_distance(i, i + 0.5 * t * u) < r

    def test_congruence_covariance(self, rng):
        c = random_half_plane_point(rng, 2)
        S = herm_sqrt(imag_part(c))
        u = complex_gaussian(rng, (2, 2))
        u *= 0.5 / op_norm(u)
        a = c + S @ u @ S
        base = 1j * np.eye(2) + u
        assert ball_distance(c, a) == pytest.approx(ball_distance(1j * np.eye(2), base), rel=1e-10)


class TestMidpoint:
    def test_trivial(self, rng):
        c = random_half_plane_point(rng, 2)
        assert midpoint_convexity_check(BallSpec(c, 1.0), c, c)

    def test_scalar_members(self, rng):
        spec = BallSpec(1j * np.eye(1), 1.0)
        a1, a2 = sample_members(rng, spec, 500), sample_members(rng, spec, 500)
        assert midpoint_convexity_check(spec, a1, a2).all()

    def test_non_member_rejected(self):
        spec = BallSpec(1j * np.eye(1), 0.5)
        with pytest.raises(PreconditionError):
            midpoint_convexity_check(spec, [[2j]], [[1j]])

    @pytest.mark.parametrize("n,r", GRID)
    def test_residual_identity(self, n, r):
        rng = np.random.default_rng(7 * n + int(r * 8))
        spec = BallSpec(random_half_plane_point(rng, n), r)
        a1, a2 = sample_members(rng, spec, 50), sample_members(rng, spec, 50)
        for x, y in zip(a1, a2):
            gap, lam = midpoint_residual(spec, x, y)
            assert gap <= 1e-10 * max(1.0, op_norm(x - spec.center) ** 2)
            assert lam >= -1e-12


class TestBoundarySequence:
    @pytest.mark.parametrize("n,r", [(1, 1.0), (2, 0.25), (3, 4.0)])
    def test_members_close_to_shell(self, rng, n, r):
        spec = BallSpec(random_half_plane_point(rng, n), r)
        seq = boundary_sequence(spec, complex_gaussian(rng, (n, n)))
        d = ball_distance(spec.center, seq)
        targets = r * (1 - 10.0 ** -np.arange(1, 9))
        assert (d <= r).all()
        assert np.allclose(d, targets, rtol=1e-9)
        assert np.all(np.diff(d) > 0)


def test_suite_small_run():
    res = ball_suite(seed=4, samples=400, radii=(0.25, 1.0))
    assert res.passed, res.minimal_failure
    assert len(res.rows) == 400 * 6
    assert all(v["amplification_error"] <= 1e-10 for v in res.summary["configs"].values())
    assert res.csv_text().splitlines()[0].split(",")[:6] == ["level", "r", "seed", "index", "distance", "member"]
