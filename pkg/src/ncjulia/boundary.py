"""Numerical boundary analysis of half-plane self-maps at a selfadjoint point.

Approaching ``alpha`` along ``alpha + z v`` with ``z = y (M + i) / |M + i|``
on a geometric schedule ``y_k = y0 rho^k``, we estimate

* ``c(v) = lim Im f(alpha + z v) / Im z``,
* the boundary value ``f(alpha) = lim f(alpha + z v)``,
* the boundary derivative ``lim f'(alpha + z v)(w)``,

and check the inequalities tying them together.  Limits are extrapolated
with one Richardson step whose order is read off the decay of successive
differences.  :func:`scalar_jwc` is an independent level-one oracle built on
plain complex arithmetic, polynomial (Neville) extrapolation and Cauchy
integrals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, NumericError, PreconditionError
from .hermitian import (as_cmatrix, herm_inv_sqrt, hermitize, imag_part, matrix_from_json,
                        matrix_to_json, min_eig, op_norm, real_part)
from .ncfunction import NCFunction, delta_f, derivative, from_descriptor
from .sampling import random_unit_vectors

EPS = np.finfo(float).eps
DIVERGENCE_FACTOR = 1e6
DEGENERATE_EIG = 1e-8


class Status(str, Enum):
    CONVERGED = "converged"
    LIMINF_INFINITE = "liminf-infinite"
    DEGENERATE = "degenerate"
    FAILED = "failed"


@dataclass(frozen=True)
class Schedule:
    y0: float = 0.1
    rho: float = 0.5
    k_max: int = 20
    tol: float = 1e-6

    def __post_init__(self):
        if not 0 < self.rho < 1:
            raise ValueError("rho must lie in (0, 1)")
        if self.k_max < 3:
            raise ValueError("need at least four schedule points")
        if self.y0 * self.rho ** self.k_max <= 1e-9:
            raise ValueError("schedule reaches below the 1e-9 floating-point floor")

    @property
    def ys(self) -> np.ndarray:
        return self.y0 * self.rho ** np.arange(self.k_max + 1)

    def to_json(self):
        return {"y0": self.y0, "rho": self.rho, "k_max": self.k_max, "tol": self.tol}


@dataclass(frozen=True)
class BoundaryProbe:
    alpha: np.ndarray
    direction: np.ndarray
    schedule: Schedule = Schedule()
    cone_slope: float = 0.0

    def __post_init__(self):
        alpha = hermitize(as_cmatrix(self.alpha))
        v = hermitize(as_cmatrix(self.direction))
        if alpha.shape != v.shape:
            raise PreconditionError("alpha and direction differ in level")
        lam = min_eig(v)
        if lam <= 0:
            raise PreconditionError(f"direction must be positive definite (min eig {lam:.3e})")
        if self.cone_slope < 0:
            raise PreconditionError("cone slope must be nonnegative")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "direction", v)

    @property
    def level(self) -> int:
        return self.alpha.shape[0]

    def zs(self) -> np.ndarray:
        """Approach parameters ``y_k (M + i) / |M + i|``."""
        m = self.cone_slope
        return self.schedule.ys * (m + 1j) / abs(m + 1j)

    def point(self, z: complex) -> np.ndarray:
        return self.alpha + z * self.direction

    def with_(self, **kw) -> "BoundaryProbe":
        d = dict(alpha=self.alpha, direction=self.direction, schedule=self.schedule,
                 cone_slope=self.cone_slope)
        d.update(kw)
        return BoundaryProbe(**d)


@dataclass
class ConvergenceReport:
    quantity: str
    ys: np.ndarray
    samples: np.ndarray
    extrapolants: np.ndarray
    limit: np.ndarray | None
    fitted_rate: float
    converged: bool
    residual: float
    status: Status
    message: str = ""
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def mat(x):
            x = np.asarray(x)
            return {"re": x.real.tolist(), "im": x.imag.tolist()}

        return {
            "quantity": self.quantity,
            "status": self.status.value,
            "converged": bool(self.converged),
            "fitted_rate": None if not np.isfinite(self.fitted_rate) else float(self.fitted_rate),
            "residual": float(self.residual),
            "limit": None if self.limit is None else mat(self.limit),
            "samples": [{"y": float(y), "value": mat(s)} for y, s in zip(self.ys, self.samples)],
            "extrapolants": [mat(e) for e in self.extrapolants],
            "message": self.message,
            "extra": self.extra,
        }


def _fit_rate(ys, diffs, noise, tail: int = 8) -> float:
    """Log-log slope of successive differences above the noise floor (finest ``tail`` points)."""
    ok = diffs > 100 * noise
    idx = np.flatnonzero(ok)[-tail:]
    if idx.size < 2:
        return float("nan")
    return float(np.polyfit(np.log(ys[idx]), np.log(diffs[idx]), 1)[0])


def richardson(ys, values, noise, tol):
    """One Richardson step on a geometric schedule.

    Returns ``(extrapolants, limit, fitted_rate, converged, residual)``.
    The step order is the rounded decay rate of successive differences
    (clamped to 1..4; 1 when the differences sit in the noise).  The limit
    is the extrapolant whose change from its predecessor is smallest, which
    keeps rounding amplified at tiny ``y`` out of the answer.  ``converged``
    compares the last two extrapolants.
    """
    values = np.asarray(values)
    diffs = np.array([op_norm(values[k + 1] - values[k]) for k in range(len(values) - 1)])
    rate = _fit_rate(ys[:-1], diffs, noise[:-1] + noise[1:])
    p = int(np.clip(np.rint(rate), 1, 4)) if np.isfinite(rate) else 1
    r = ys[1:] / ys[:-1]
    w = (r ** p)[:, None, None]
    ext = (values[1:] - w * values[:-1]) / (1 - w)
    steps = np.array([op_norm(ext[k] - ext[k - 1]) for k in range(1, len(ext))])
    best = int(np.argmin(steps)) + 1
    limit = ext[best]
    converged = bool(steps[-1] < tol * (1 + op_norm(limit)))
    return ext, limit, rate, converged, float(steps[best - 1])


def _diverges(ys, sizes, rate) -> bool:
    """Monotone growth that is either huge or accelerating (increments not contracting)."""
    tail = sizes[len(sizes) // 2:]
    monotone = np.all(np.diff(tail) >= -1e-12 * np.abs(tail[1:]))
    if not monotone or sizes[-1] <= sizes[0]:
        return False
    return bool(sizes[-1] > DIVERGENCE_FACTOR * max(sizes[0], EPS) or (np.isfinite(rate) and rate < 0))


def _sample(fn, zs, quantity):
    out = []
    for z in zs:
        try:
            out.append(fn(z))
        except (DomainError, NumericError) as exc:
            return np.array(out), f"{quantity}: evaluation failed at z={z:.3e}: {exc}"
    return np.array(out), ""


def _partial(quantity, ys, samples, message):
    return ConvergenceReport(quantity, ys[:len(samples)], samples, np.empty((0,)), None,
                             float("nan"), False, float("inf"), Status.FAILED, message)


def estimate_c(f: NCFunction, probe: BoundaryProbe) -> ConvergenceReport:
    """``c(v) = lim Im f(alpha + z v) / Im z`` along the probe's approach."""
    zs, ys = probe.zs(), probe.schedule.ys
    values, msg = _sample(lambda z: f(probe.point(z)), zs, "c")
    if msg:
        return _partial("c", ys, values, msg)
    im_z = zs.imag
    q = np.array([imag_part(F) / t for F, t in zip(values, im_z)])
    noise = 64 * EPS * (1 + op_norm(values)) / im_z
    ext, limit, rate, converged, resid = richardson(ys, q, noise, probe.schedule.tol)
    sizes = np.array([np.max(np.linalg.eigvalsh(x)) for x in q])
    if _diverges(ys, sizes, rate):
        return ConvergenceReport("c", ys, q, ext, None, rate, False, float("inf"),
                                 Status.LIMINF_INFINITE,
                                 f"Im f / Im z grew from {sizes[0]:.3e} to {sizes[-1]:.3e}")
    limit = hermitize(limit)
    status = Status.CONVERGED if converged else Status.FAILED
    if converged and min_eig(limit) < DEGENERATE_EIG:
        status = Status.DEGENERATE
    return ConvergenceReport("c", ys, q, ext, limit, rate, converged, resid, status)


def estimate_boundary_value(f: NCFunction, probe: BoundaryProbe) -> ConvergenceReport:
    """``f(alpha) = lim f(alpha + z v)``; records ``||Im f(alpha)||`` in ``extra``."""
    zs, ys = probe.zs(), probe.schedule.ys
    values, msg = _sample(lambda z: f(probe.point(z)), zs, "f(alpha)")
    if msg:
        return _partial("f(alpha)", ys, values, msg)
    noise = 64 * EPS * (1 + op_norm(values))
    tol = probe.schedule.tol
    ext, limit, rate, converged, resid = richardson(ys, values, noise, tol)
    im_norm = op_norm(imag_part(limit))
    selfadjoint = im_norm <= tol * (1 + op_norm(limit))
    status = Status.CONVERGED if converged and selfadjoint else Status.FAILED
    return ConvergenceReport("f(alpha)", ys, values, ext, limit, rate, converged, resid, status,
                             "" if selfadjoint else f"limit not selfadjoint (||Im|| = {im_norm:.3e})",
                             {"im_norm": im_norm, "selfadjoint": bool(selfadjoint)})


def estimate_boundary_derivative(f: NCFunction, probe: BoundaryProbe, w=None) -> ConvergenceReport:
    """``lim f'(alpha + z v)(w)``; ``w`` defaults to the direction ``v``."""
    w = probe.direction if w is None else as_cmatrix(w)
    zs, ys = probe.zs(), probe.schedule.ys
    values, msg = _sample(lambda z: derivative(f, probe.point(z), w), zs, "f'(alpha)")
    if msg:
        return _partial("f'(alpha)", ys, values, msg)
    noise = 1e3 * EPS * (1 + op_norm(values)) / np.abs(zs)
    ext, limit, rate, converged, resid = richardson(ys, values, noise, probe.schedule.tol)
    status = Status.CONVERGED if converged else Status.FAILED
    return ConvergenceReport("f'(alpha)", ys, values, ext, limit, rate, converged, resid, status)


@dataclass
class MarginReport:
    name: str
    ys: np.ndarray
    margins: np.ndarray
    tol: float
    passed: bool
    extra: dict = field(default_factory=dict)

    @property
    def min_margin(self) -> float:
        return float(np.min(self.margins)) if len(self.margins) else float("nan")

    def to_json(self):
        return {"name": self.name, "passed": bool(self.passed), "tol": self.tol,
                "min_margin": self.min_margin,
                "rows": [{"y": float(y), "margin": float(m)} for y, m in zip(self.ys, self.margins)],
                "extra": self.extra}


def _require_c(f, probe, c):
    if c is None:
        rep = estimate_c(f, probe)
        if rep.status not in (Status.CONVERGED, Status.DEGENERATE):
            raise PreconditionError(f"c(v) did not converge: {rep.status.value} {rep.message}")
        c = rep.limit
    return hermitize(as_cmatrix(c))


def julia_inequality_check(f: NCFunction, probe: BoundaryProbe, c=None, tol: float = 1e-8,
                           n_states: int = 100, seed: int = 0) -> MarginReport:
    """``y c(v) - Im f(alpha + i y v) >= 0`` on the vertical schedule, plus the cone bound.

    The cone bound ``phi(Im f(alpha + z v)) / Im z <= phi(c) (1 + M^2)`` is
    scalarized through ``n_states`` seeded random vector states.
    """
    c = _require_c(f, probe, c)
    ys = probe.schedule.ys
    margins = np.array([min_eig(y * c - imag_part(f(probe.point(1j * y)))) for y in ys])
    m = probe.cone_slope
    xi = random_unit_vectors(np.random.default_rng(seed), probe.level, n_states)
    phi_c = np.einsum("si,ij,sj->s", xi.conj(), c, xi).real
    growth = []
    for z in probe.zs():
        ratio = np.einsum("si,ij,sj->s", xi.conj(), imag_part(f(probe.point(z))), xi).real / z.imag
        growth.append(np.min(phi_c * (1 + m * m) - ratio))
    growth = np.array(growth)
    scale = 1 + op_norm(c)
    passed = bool(np.all(margins >= -tol * scale) and np.all(growth >= -tol * scale * (1 + m * m)))
    return MarginReport("julia", ys, margins, tol, passed,
                        {"cone_slope": m, "cone_margins": growth.tolist(),
                         "min_cone_margin": float(growth.min())})


def re_vanishing_check(f: NCFunction, probe: BoundaryProbe, value_report: ConvergenceReport = None,
                       tol: float = None) -> MarginReport:
    """``(Re f(alpha + i y v) - f(alpha)) / y`` should vanish as ``y -> 0``.

    ``margins`` holds the ratios ``||Re f(alpha + i y v) - f(alpha)|| / y``
    and ``extra["fitted_rate"]`` their log-log decay rate on the finest
    points above the noise floor.  Near ``y = 0`` the ratios are swamped by
    the error in ``f(alpha)`` divided by ``y``, so the check extrapolates the
    matrix sequence to ``y = 0`` and requires the limit to be below ``tol``.
    """
    tol = probe.schedule.tol if tol is None else tol
    if value_report is None:
        value_report = estimate_boundary_value(f, probe)
    if value_report.limit is None or not value_report.converged:
        raise PreconditionError("boundary value did not converge")
    fa = hermitize(value_report.limit)
    ys = probe.schedule.ys
    F = np.array([f(probe.point(1j * y)) for y in ys])
    quotients = np.array([(real_part(x) - fa) / y for x, y in zip(F, ys)])
    ratios = op_norm(quotients)
    noise = (value_report.residual + 64 * EPS * (1 + op_norm(F))) / ys
    rate = _fit_rate(ys, ratios, noise)
    _, limit, _, _, resid = richardson(ys, quotients, noise, tol)
    limit_norm = op_norm(limit)
    decays = not np.isfinite(rate) or rate > 0
    passed = bool(decays and limit_norm <= tol * (1 + op_norm(fa)))
    return MarginReport("re_vanishing", ys, ratios, tol, passed,
                        {"fitted_rate": rate, "limit_norm": limit_norm, "limit_residual": resid})


@dataclass
class BlockConsistencyReport:
    C: np.ndarray
    expected: np.ndarray
    diag_error: float
    offdiag_error: float
    min_eig: float
    passed: bool
    reports: dict

    def to_json(self):
        return {"diag_error": self.diag_error, "offdiag_error": self.offdiag_error,
                "min_eig": self.min_eig, "passed": self.passed,
                "C": {"re": self.C.real.tolist(), "im": self.C.imag.tolist()}}


def c_block_consistency(f: NCFunction, alpha, v, b, schedule: Schedule = Schedule(),
                        tol: float = 1e-6) -> BlockConsistencyReport:
    """The level-two limit ``C = lim Im f([[alpha + iyv, iyb], [iyb, alpha + iyv]]) / y``.

    Its diagonal blocks must equal ``(c(v+b) + c(v-b)) / 2`` and its
    off-diagonal blocks ``(c(v+b) - c(v-b)) / 2``; ``C`` must be positive.
    """
    alpha, v, b = (hermitize(as_cmatrix(x)) for x in (alpha, v, b))
    if min_eig(b) <= 0 or min_eig(v - b) <= 0:
        raise PreconditionError("need 0 < b < v")
    n = alpha.shape[0]
    big = BoundaryProbe(np.kron(np.eye(2), alpha), np.block([[v, b], [b, v]]), schedule)
    reports = {"C": estimate_c(f, big),
               "c(v+b)": estimate_c(f, BoundaryProbe(alpha, v + b, schedule)),
               "c(v-b)": estimate_c(f, BoundaryProbe(alpha, v - b, schedule))}
    for name, rep in reports.items():
        if rep.limit is None:
            raise PreconditionError(f"{name} did not converge: {rep.status.value} {rep.message}")
    C, cp, cm = (reports[k].limit for k in ("C", "c(v+b)", "c(v-b)"))
    expected = np.block([[(cp + cm) / 2, (cp - cm) / 2], [(cp - cm) / 2, (cp + cm) / 2]])
    d_err = max(op_norm(C[:n, :n] - expected[:n, :n]), op_norm(C[n:, n:] - expected[n:, n:]))
    o_err = max(op_norm(C[:n, n:] - expected[:n, n:]), op_norm(C[n:, :n] - expected[n:, :n]))
    lam = min_eig(C)
    scale = 1 + op_norm(C)
    passed = bool(d_err <= tol * scale and o_err <= tol * scale and lam > 0)
    return BlockConsistencyReport(C, expected, d_err, o_err, lam, passed, reports)


@dataclass
class BoundednessReport:
    sup: float
    argmax: dict
    max_bound_ratio: float
    bound_violations: int
    n_evaluations: int

    def to_json(self):
        return dict(self.__dict__)


def delta_limit_boundedness(f: NCFunction, alpha, v1, v2, ws, schedule: Schedule = Schedule(),
                            slopes=(0.0, 1.0, 4.0), stride: int = 1) -> BoundednessReport:
    """Sup of ``||Δf(alpha + z v1, alpha + zeta v2)(w)||`` over approach points and ``w``.

    Each sample is also compared with the contraction bound
    ``||v1^-1/2 w v2^-1/2|| * sqrt(||Im f(alpha+z v1)|| / Im z * ||Im f(alpha+zeta v2)|| / Im zeta)``;
    ``max_bound_ratio`` above 1 would signal a contraction failure.
    """
    alpha, v1, v2 = (hermitize(as_cmatrix(x)) for x in (alpha, v1, v2))
    p1, p2 = BoundaryProbe(alpha, v1, schedule), BoundaryProbe(alpha, v2, schedule)
    v1_is, v2_is = herm_inv_sqrt(v1), herm_inv_sqrt(v2)
    sup, arg, worst, bad, count = 0.0, {}, 0.0, 0, 0
    ys = schedule.ys[::stride]
    for y in ys:
        for m1 in slopes:
            z = y * (m1 + 1j) / abs(m1 + 1j)
            a = p1.point(z)
            A1 = op_norm(imag_part(f(a))) / z.imag
            for m2 in slopes:
                zeta = y * (m2 + 1j) / abs(m2 + 1j)
                c = p2.point(zeta)
                A2 = op_norm(imag_part(f(c))) / zeta.imag
                for j, w in enumerate(ws):
                    val = op_norm(delta_f(f, a, c, w))
                    bound = op_norm(v1_is @ w @ v2_is) * np.sqrt(A1 * A2)
                    count += 1
                    ratio = val / bound if bound > 0 else (0.0 if val == 0 else np.inf)
                    worst = max(worst, ratio)
                    bad += ratio > 1 + 1e-8
                    if val > sup:
                        sup, arg = val, {"y": float(y), "slope_1": m1, "slope_2": m2, "w_index": j}
    return BoundednessReport(float(sup), arg, float(worst), int(bad), count)


# ---------------------------------------------------------------- scalar oracle

def _neville_zero(xs, fs):
    """Value at 0 of the interpolating polynomial through ``(xs, fs)``."""
    p = list(fs)
    n = len(xs)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i])
    return p[0]


def _poly_limit(ys, fs, window: int = 6):
    """Best polynomial extrapolation to 0 over sliding windows; returns (value, error estimate)."""
    window = min(window, len(ys))
    best = (None, np.inf)
    for j in range(len(ys) - window + 1):
        xs, vs = ys[j:j + window], fs[j:j + window]
        hi = _neville_zero(xs, vs)
        lo = _neville_zero(xs[1:], vs[1:])
        err = abs(hi - lo)
        if err < best[1]:
            best = (hi, err)
    return best


def _cauchy_derivative(g, z, radius, nodes: int = 256):
    theta = 2 * np.pi * np.arange(nodes) / nodes
    omega = np.exp(1j * theta)
    return sum(g(z + radius * o) / o for o in omega) / (nodes * radius)


@dataclass
class ScalarJWC:
    c: float
    f_alpha: float
    f_prime: float
    quotient: float
    status: Status
    agreement: float
    estimates: dict = field(default_factory=dict)


def scalar_jwc(f: NCFunction, alpha: float, schedule: Schedule = Schedule()) -> ScalarJWC:
    """Classical boundary analysis of the level-one function at a real point.

    Computes independently the vertical ratio ``Im f(alpha+iy)/y``, the
    derivative ``f'(alpha+iy)`` (Cauchy integral on a circle of radius
    ``3y/4``, inside the half-plane) and the difference quotient ``(f(alpha+iy) - f(alpha))/(iy)``,
    extrapolates each to ``y = 0`` and reports their mutual agreement.
    """
    alpha = float(alpha)
    ys = schedule.ys
    vals = [f.scalar(alpha + 1j * y) for y in ys]
    q = [v.imag / y for v, y in zip(vals, ys)]
    diffs = np.abs(np.diff(q))
    noise = 64 * EPS * (1 + np.abs(vals[1:])) / ys[1:]
    rate = _fit_rate(ys[:-1], diffs, noise)
    if _diverges(ys, np.array(q), rate):
        return ScalarJWC(np.inf, np.nan, np.nan, np.nan, Status.LIMINF_INFINITE, np.nan,
                         {"ratios": q})
    c, c_err = _poly_limit(ys, q)
    fa, fa_err = _poly_limit(ys, vals)
    dq = [(v - fa.real) / (1j * y) for v, y in zip(vals, ys)]
    quot, _ = _poly_limit(ys, dq)
    # a circle of radius 3y/4 stays in the half-plane; 256 nodes push the
    # trapezoid aliasing below (3/4)^256
    der = [_cauchy_derivative(f.scalar, alpha + 1j * y, 0.75 * y) for y in ys]
    fp, _ = _poly_limit(ys, der, window=8)
    agreement = max(abs(c - quot), abs(c - fp), abs(quot - fp))
    tol = schedule.tol
    ok = agreement <= tol * (1 + abs(c)) and abs(fa.imag) <= tol * (1 + abs(fa))
    status = Status.CONVERGED if ok else Status.FAILED
    if ok and c < DEGENERATE_EIG:
        status = Status.DEGENERATE
    return ScalarJWC(float(c), float(fa.real), float(fp.real), float(quot.real), status,
                     float(agreement),
                     {"c_error": float(c_err), "f_alpha_error": float(fa_err),
                      "f_alpha_imag": float(fa.imag), "f_prime_imag": float(fp.imag),
                      "quotient_imag": float(quot.imag)})


# ---------------------------------------------------------------- implication chain

@dataclass
class ChainReport:
    alpha: np.ndarray
    directions: list
    c_reports: list
    value_reports: list
    derivative_reports: list
    julia_reports: list
    checks: dict
    status: Status

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self):
        return {
            "status": self.status.value,
            "passed": self.passed,
            "checks": {k: bool(v) for k, v in self.checks.items()},
            "directions": [{"re": np.asarray(v).real.tolist(), "im": np.asarray(v).imag.tolist()}
                           for v in self.directions],
            "c": [r.to_json() for r in self.c_reports],
            "f_alpha": [r.to_json() for r in self.value_reports],
            "derivative": [r.to_json() for r in self.derivative_reports],
            "julia": [r.to_json() for r in self.julia_reports],
        }


def implication_chain(f: NCFunction, alpha, directions, schedule: Schedule = Schedule(),
                  cone_slope: float = 0.0, julia_tol: float = 1e-8) -> ChainReport:
    """Run the whole implication chain at ``alpha`` for each direction.

    When every ``c(v)`` converges: each boundary value converges and is
    selfadjoint, the values agree across directions, ``f'(alpha)(v)``
    matches ``c(v)``, ``c(v) > 0`` and the Julia inequality holds.  If some
    ``c(v)`` blows up the chain is vacuous and the status says so.
    """
    alpha = hermitize(as_cmatrix(alpha))
    tol = schedule.tol
    probes = [BoundaryProbe(alpha, v, schedule, cone_slope) for v in directions]
    c_reps = [estimate_c(f, p) for p in probes]
    if any(r.status == Status.LIMINF_INFINITE for r in c_reps):
        return ChainReport(alpha, list(directions), c_reps, [], [], [], {}, Status.LIMINF_INFINITE)
    if any(r.limit is None or not r.converged for r in c_reps):
        return ChainReport(alpha, list(directions), c_reps, [], [], [], {"c_converged": False},
                           Status.FAILED)
    val_reps = [estimate_boundary_value(f, p) for p in probes]
    der_reps = [estimate_boundary_derivative(f, p) for p in probes]
    jul_reps = [julia_inequality_check(f, p, c=r.limit, tol=julia_tol) for p, r in zip(probes, c_reps)]
    checks = {"value_converged": all(r.converged for r in val_reps),
              "value_selfadjoint": all(r.extra.get("selfadjoint", False) for r in val_reps)}
    limits = [r.limit for r in val_reps if r.limit is not None]
    spread = max((op_norm(x - limits[0]) for x in limits), default=np.inf)
    checks["value_direction_independent"] = bool(spread <= tol * (1 + op_norm(limits[0])))
    checks["derivative_matches_c"] = all(
        d.limit is not None and op_norm(d.limit - c.limit) <= tol * (1 + op_norm(c.limit))
        for d, c in zip(der_reps, c_reps))
    checks["c_positive"] = all(min_eig(r.limit) > DEGENERATE_EIG for r in c_reps)
    checks["julia"] = all(r.passed for r in jul_reps)
    status = Status.CONVERGED if all(checks.values()) else Status.FAILED
    return ChainReport(alpha, list(directions), c_reps, val_reps, der_reps, jul_reps, checks, status)


# ---------------------------------------------------------------- descriptors

def probe_to_json(f: NCFunction, probe: BoundaryProbe) -> dict:
    return {"function": f.to_descriptor(), "alpha": matrix_to_json(probe.alpha),
            "direction": matrix_to_json(probe.direction), "schedule": probe.schedule.to_json(),
            "cone_slope": probe.cone_slope}


def probe_from_json(desc) -> tuple:
    """``(f, probe)`` from a probe descriptor.

    Scalars are accepted for alpha and direction; a scalar direction ``t``
    next to a matrix alpha means ``t * 1``.
    """
    if isinstance(desc, str):
        desc = json.loads(desc)

    def mat(x):
        return matrix_from_json(x) if isinstance(x, dict) else as_cmatrix(np.asarray(x, dtype=complex))

    f = from_descriptor(desc["function"])
    alpha = mat(desc["alpha"])
    v = mat(desc.get("direction", 1.0))
    if v.shape == (1, 1) and alpha.shape[0] > 1:
        v = v[0, 0] * np.eye(alpha.shape[0])
    probe = BoundaryProbe(alpha, v,
                          Schedule(**desc.get("schedule", {})), float(desc.get("cone_slope", 0.0)))
    return f, probe
