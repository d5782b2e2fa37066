"""The balls ``B(c, r) = {a : ||(Im a)^-1/2 (a - c)(Im c)^-1/2|| <= r}`` in the matrix half-plane.

Functions here take single matrices or stacks of matrices with shape
``(..., n, n)``; the center is always a single matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, PreconditionError
from .hermitian import (HalfPlanePoint, adjoint, as_cmatrix, herm_inv, herm_inv_sqrt,
                        herm_sqrt, hermitize, imag_part, min_eig, op_norm, real_part)

SLACK = 1e-10


def theta(r: float) -> float:
    """``(r^2 + 2 + r sqrt(r^2 + 4)) / 2``, the largest ratio ``||Im a|| / ||Im c||`` in the ball."""
    return (r * r + 2 + r * np.sqrt(r * r + 4)) / 2


def theta_low(r: float) -> float:
    return (r * r + 2 - r * np.sqrt(r * r + 4)) / 2


@dataclass(frozen=True)
class BallSpec:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = self.center.value if isinstance(self.center, HalfPlanePoint) else self.center
        c = HalfPlanePoint.from_matrix(c).value
        object.__setattr__(self, "center", c)
        if not (0 < self.radius < np.inf):
            raise ValueError(f"radius must be positive and finite, got {self.radius}")
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def level(self) -> int:
        return self.center.shape[0]

    def amplified(self, p: int) -> "BallSpec":
        return BallSpec(np.kron(np.eye(p), self.center), self.radius)


def ball_distance(c, a):
    """``||(Im a)^-1/2 (a - c)(Im c)^-1/2||``."""
    c, a = as_cmatrix(c), as_cmatrix(a)
    if c.shape[-1] != a.shape[-1]:
        raise DimensionError("center and point live at different levels")
    return op_norm(herm_inv_sqrt(imag_part(a)) @ (a - c) @ herm_inv_sqrt(imag_part(c)))


@dataclass(frozen=True)
class BallDiagnostics:
    distance: np.ndarray
    member: np.ndarray
    norm_bound_ok: np.ndarray
    im_lower_ok: np.ndarray
    im_band_ok: np.ndarray
    re_band_ok: np.ndarray

    @property
    def bounds_ok(self):
        return self.norm_bound_ok & self.im_lower_ok & self.im_band_ok & self.re_band_ok

    @property
    def consistent(self):
        """Membership implies every bound (the property under test)."""
        return ~self.member | self.bounds_ok


def ball_diagnostics(spec: BallSpec, a) -> BallDiagnostics:
    """Distance, membership and the four a-priori bounds for members of the ball."""
    a = as_cmatrix(a)
    c, r = spec.center, spec.radius
    ic, rc = imag_part(c), real_part(c)
    n_ic, n_rc = op_norm(ic), op_norm(rc)
    th = theta(r)
    dist = ball_distance(c, a)
    ia = imag_part(a)
    n_ia = op_norm(ia)
    rel = SLACK * max(1.0, n_rc + n_ic * (th + r * np.sqrt(th)))
    norm_ok = op_norm(a) <= n_rc + n_ic * (th + r * np.sqrt(th)) + rel
    im_lower = min_eig(ia - ic / (2 + r * r)) >= -SLACK * n_ic
    im_band = (n_ia >= n_ic * theta_low(r) - SLACK * n_ic) & (n_ia <= n_ic * th + SLACK * n_ic)
    re_band = op_norm(real_part(a)) <= n_rc + r * n_ic * np.sqrt(th) + rel
    return BallDiagnostics(np.asarray(dist), np.asarray(dist <= r), np.asarray(norm_ok),
                           np.asarray(im_lower), np.asarray(im_band), np.asarray(re_band))


def _require_members(spec, *points):
    for x in points:
        d = np.asarray(ball_distance(spec.center, x))
        if np.any(d > spec.radius + SLACK):
            raise PreconditionError(f"point at distance {float(d.max()):.6g} is outside the ball of radius {spec.radius}")


def midpoint_convexity_check(spec: BallSpec, a1, a2):
    """True where the midpoint of two members is again a member (up to 1e-10)."""
    _require_members(spec, a1, a2)
    mid = (as_cmatrix(a1) + as_cmatrix(a2)) / 2
    return ball_distance(spec.center, mid) <= spec.radius + SLACK


def midpoint_residual(spec: BallSpec, a1, a2):
    """Check the algebraic identity behind midpoint convexity.

    With ``q(x, y) = (x - c)(Im c)^-1 (y - c)*`` the averaged member
    inequalities exceed the midpoint's quadratic form by exactly
    ``(a1 - a2)(Im c)^-1 (a1 - a2)* / 4``.  Returns the norm of the
    discrepancy between both sides and the smallest eigenvalue of the
    (positive) remainder.
    """
    c = spec.center
    a1, a2 = as_cmatrix(a1), as_cmatrix(a2)
    ic_inv = herm_inv(imag_part(c))

    def q(x, y):
        return (x - c) @ ic_inv @ adjoint(y - c)

    mid = (a1 + a2) / 2
    averaged = (q(a1, a1) + q(a2, a2)) / 2
    remainder = (a1 - a2) @ ic_inv @ adjoint(a1 - a2) / 4
    gap = averaged - q(mid, mid) - remainder
    return op_norm(gap), min_eig(hermitize(remainder))


def ray_exit(u, r: float) -> np.ndarray:
    """Largest ``t`` with ``i + t u`` in the ball of radius ``r`` about ``i * 1``.

    Along the ray the membership condition reads
    ``r^2 s^2 + r^2 s Im u - u u* >= 0`` with ``s = 1/t``; its boundary is the
    largest real root of the quadratic eigenvalue problem, computed from the
    companion linearization ``[[0, 1], [u u* / r^2, -Im u]]``.
    """
    u = np.asarray(u, dtype=complex)
    n = u.shape[-1]
    lead = u.shape[:-2]
    top = np.concatenate([np.zeros(lead + (n, n)), np.broadcast_to(np.eye(n), lead + (n, n))], axis=-1)
    bottom = np.concatenate([u @ adjoint(u) / r ** 2, -imag_part(u)], axis=-1)
    ev = np.linalg.eigvals(np.concatenate([top, bottom], axis=-2))
    real = np.where(np.abs(ev.imag) <= 1e-9 * (1 + np.abs(ev.real)), ev.real, -np.inf)
    return 1.0 / np.max(real, axis=-1)


def _pull_inside(spec, S, u, t, radius):
    """Shrink ``t`` until the recomputed distance is within ``radius``."""
    c = spec.center
    for _ in range(60):
        a = c + t[:, None, None] * (S @ u @ S)
        bad = ball_distance(c, a) > radius
        if not np.any(bad):
            return a
        t = np.where(bad, t * (1 - 1e-12), t)
    raise RuntimeError("could not place samples inside the ball")


def sample_members(rng: np.random.Generator, spec: BallSpec, count: int,
                   shell_fraction: float = 0.1) -> np.ndarray:
    """Draw ``count`` members of the ball as ``c + t S u S`` with ``S = (Im c)^1/2``.

    ``u`` is a random unit-norm direction.  The ball is convex and contains
    ``c``, so admissible ``t`` form an interval ``[0, t_max]``; a
    ``shell_fraction`` of the samples sit on its outer end, the rest are
    spread over the interval with density growing towards the shell.
    Congruence by ``S`` maps the ball about ``Re c + i`` onto this one.
    """
    c, r = spec.center, spec.radius
    n = spec.level
    S = herm_sqrt(imag_part(c))
    u = rng.normal(size=(count, n, n)) + 1j * rng.normal(size=(count, n, n))
    u = u / op_norm(u)[:, None, None]
    t_max = ray_exit(u, r)
    frac = rng.random(count) ** (1.0 / (2 * n * n))
    on_shell = rng.random(count) < shell_fraction
    t = np.where(on_shell, t_max, t_max * frac)
    return _pull_inside(spec, S, u, t, r)


def boundary_sequence(spec: BallSpec, direction, ks=range(1, 9)) -> np.ndarray:
    """Members along one ray at distance ``r (1 - 10^-k)`` from the center."""
    c, r = spec.center, spec.radius
    S = herm_sqrt(imag_part(c))
    u = as_cmatrix(direction)
    u = u / op_norm(u)
    out = []
    for k in ks:
        target = r * (1 - 10.0 ** (-k))
        t = np.array([ray_exit(u, target)])
        out.append(_pull_inside(spec, S, u[None], t, target)[0])
    return np.array(out)
