"""Seeded verification suites.

Each suite draws the inputs of sample ``i`` from its own generator keyed by
``(seed, i)``, evaluates them with a pure function and returns table rows,
a JSON-ready summary and the failing samples in a replayable form.
Parallel execution uses threads; rows are sorted by sample seed before they
are returned, so reports do not depend on the number of workers.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import boundary as bd
from .errors import ConditioningError, DomainError, NCJuliaError, PreconditionError
from .hermitian import (as_cmatrix, block2_is_positive, herm_inv_sqrt, imag_part,
                        matrix_from_json, matrix_to_json, min_eig, op_norm)
from .hyperbolic import BallSpec, ball_diagnostics, ball_distance, sample_members
from .ncfunction import (HALF_PLANE, Moebius, Polynomial, amplify, delta_f,
                         derivative, direct_sum, from_descriptor)
from .sampling import (FAMILIES, complex_gaussian, random_function, random_half_plane_point,
                       random_hermitian, random_moebius,
                       random_nevanlinna_pick, random_positive, sample_rng, sample_seed)
from .schwarz_pick import MarginForm, all_margins, second_order_margin

SUITES = ("schwarz-pick", "ball", "ncfunction", "boundary", "dichotomy")


@dataclass
class SuiteResult:
    name: str
    columns: tuple
    rows: list
    summary: dict
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def minimal_failure(self):
        if not self.failures:
            return None
        return min(self.failures, key=lambda f: (f.get("level", 0), f.get("index", 0)))

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(self.columns), lineterminator="\n",
                           extrasaction="ignore")
        w.writeheader()
        w.writerows(self.rows)
        return buf.getvalue()

    def summary_text(self) -> str:
        doc = dict(self.summary)
        doc["passed"] = self.passed
        doc["n_failures"] = len(self.failures)
        doc["minimal_failure"] = self.minimal_failure
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _map(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _mj(x):
    return matrix_to_json(x)


def _stats(values) -> dict:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return {"count": 0}
    return {"count": int(v.size), "min": float(v.min()), "median": float(np.median(v)),
            "max": float(v.max())}


def _collect(name, columns, per_sample, params) -> SuiteResult:
    rows, failures = [], []
    for r, f in per_sample:
        rows.extend(r)
        failures.extend(f)
    rows.sort(key=lambda r: (r["seed"], r.get("index", 0)))
    failures.sort(key=lambda f: (f["seed"], f.get("index", 0)))
    return SuiteResult(name, columns, rows, dict(params, suite=name), failures)


# ------------------------------------------------------------------ Schwarz-Pick

SP_COLUMNS = ("form", "level", "family", "seed", "index", "lhs", "rhs", "margin", "holds")
SATURATION_TOL = 1e-9


def draw_schwarz_pick(seed, index, levels, families, with_second_order=False) -> dict:
    """Inputs of one contraction sample; ill-conditioned draws are redrawn from the same stream."""
    level = levels[index % len(levels)]
    family = families[(index // len(levels)) % len(families)]
    rng = sample_rng(seed, index)
    for _ in range(20):
        f = random_function(rng, family)
        a, c = random_half_plane_point(rng, level), random_half_plane_point(rng, level)
        b = complex_gaussian(rng, (level, level))
        sample = {"seed": sample_seed(seed, index), "index": index, "level": level,
                  "family": family, "function": f.to_descriptor(), "a": _mj(a), "c": _mj(c),
                  "b": _mj(b)}
        if with_second_order:
            a4 = random_half_plane_point(rng, level)
            b2 = complex_gaussian(rng, (level, level))
            # scale the connecting direction into the block domain
            k = op_norm(herm_inv_sqrt(imag_part(c)) @ b2 @ herm_inv_sqrt(imag_part(a4)))
            sample.update(a4=_mj(a4), b2=_mj(b2 * rng.uniform(0.1, 1.9) / k))
        try:
            evaluate_schwarz_pick(sample)
            return sample
        except (ConditioningError, DomainError):
            continue
    raise NCJuliaError(f"could not draw a well-conditioned sample for index {index}")


def evaluate_schwarz_pick(sample) -> dict:
    f = from_descriptor(sample["function"])
    a, c, b = (matrix_from_json(sample[k]) for k in ("a", "c", "b"))
    out = all_margins(f, a, c, b)
    if "a4" in sample:
        a4, b2 = matrix_from_json(sample["a4"]), matrix_from_json(sample["b2"])
        out[MarginForm.SECOND_ORDER] = second_order_margin(f, a, c, a4, b, b2)
    return out


def _schwarz_pick_violations(sample, margins, tol) -> list:
    bad = [m.form.value for m in margins.values() if not m.holds(tol)]
    if sample["family"] == "moebius" and abs(margins[MarginForm.NORM].margin) > SATURATION_TOL:
        bad.append("saturation")
    return bad


def _schwarz_pick_one(args):
    seed, index, levels, families, tol, second = args
    sample = draw_schwarz_pick(seed, index, levels, families, second)
    margins = evaluate_schwarz_pick(sample)
    rows = [{"form": m.form.value, "level": sample["level"], "family": sample["family"],
             "seed": sample["seed"], "index": index, "lhs": m.lhs, "rhs": m.rhs,
             "margin": m.margin, "holds": m.holds(tol)} for m in margins.values()]
    bad = _schwarz_pick_violations(sample, margins, tol)
    fails = [dict(sample, suite="schwarz-pick", tol=tol, violated=bad)] if bad else []
    return rows, fails


def schwarz_pick_suite(seed: int = 0, samples: int = 10_000, levels=(1, 2, 3),
                       families=FAMILIES, tol: float = 1e-8, second_order: bool = False,
                       workers: int = 1) -> SuiteResult:
    """Every contraction form on ``samples`` random ``(f, a, c, b)``, levels and families cycled."""
    levels, families = tuple(levels), tuple(families)
    args = [(seed, i, levels, families, tol, second_order) for i in range(samples)]
    res = _collect("schwarz-pick", SP_COLUMNS, _map(_schwarz_pick_one, args, workers),
                   {"seed": seed, "samples": samples, "levels": list(levels),
                    "families": list(families), "tol": tol, "second_order": second_order})
    by_form = {}
    for r in res.rows:
        by_form.setdefault(r["form"], []).append(r["margin"])
    res.summary["margins"] = {k: _stats(v) for k, v in sorted(by_form.items())}
    sat = [abs(r["margin"]) for r in res.rows if r["family"] == "moebius" and r["form"] == "norm"]
    res.summary["moebius_saturation"] = _stats(sat)
    return res


# ------------------------------------------------------------------ balls

BALL_COLUMNS = ("level", "r", "seed", "index", "distance", "member", "norm_bound_ok",
                "im_lower_ok", "im_band_ok", "re_band_ok")
BALL_CHUNK = 1000
AMPLIFICATION_TOL = 1e-10


def _ball_key(r: float) -> int:
    return int(round(r * 1e6))


def ball_center(seed, level, r, center="random") -> np.ndarray:
    if center == "i":
        return 1j * np.eye(level)
    return random_half_plane_point(sample_rng(seed, level, _ball_key(r), 0), level)


def check_ball_point(spec: BallSpec, a) -> list:
    d = ball_diagnostics(spec, a)
    names = ("norm_bound_ok", "im_lower_ok", "im_band_ok", "re_band_ok")
    if not bool(d.member):
        return ["not_member"]
    return [n for n in names if not bool(getattr(d, n))]


def check_midpoint(spec: BallSpec, a1, a2) -> list:
    mid = (as_cmatrix(a1) + as_cmatrix(a2)) / 2
    return [] if ball_distance(spec.center, mid) <= spec.radius + 1e-10 else ["midpoint"]


def check_amplification(spec: BallSpec, a, p: int) -> list:
    d = ball_distance(spec.center, a)
    dp = ball_distance(amplify(spec.center, p), amplify(a, p))
    return [] if abs(d - dp) <= AMPLIFICATION_TOL else ["amplification"]


def _ball_chunk(args):
    seed, level, r, chunk, count, center = args
    spec = BallSpec(ball_center(seed, level, r, center), r)
    cseed = sample_seed(seed, level, _ball_key(r), chunk + 1)
    pts = sample_members(sample_rng(seed, level, _ball_key(r), chunk + 1), spec, count)
    d = ball_diagnostics(spec, pts)
    base = chunk * BALL_CHUNK
    rows = [{"level": level, "r": r, "seed": cseed, "index": base + k,
             "distance": float(d.distance[k]), "member": bool(d.member[k]),
             "norm_bound_ok": bool(d.norm_bound_ok[k]), "im_lower_ok": bool(d.im_lower_ok[k]),
             "im_band_ok": bool(d.im_band_ok[k]), "re_band_ok": bool(d.re_band_ok[k])}
            for k in range(count)]
    fails = []

    def fail(kind, k, points, **extra):
        fails.append(dict(suite="ball", kind=kind, seed=cseed, index=base + k, level=level,
                          center=_mj(spec.center), radius=r,
                          points=[_mj(x) for x in points], **extra))

    for k in np.flatnonzero(~(d.member & d.bounds_ok)):
        fail("bounds", int(k), [pts[k]])
    partner = np.roll(pts, 1, axis=0)
    mid = ball_distance(spec.center, (pts + partner) / 2)
    for k in np.flatnonzero(mid > r + 1e-10):
        fail("midpoint", int(k), [pts[k], partner[k]])
    amp_err = 0.0
    for k in range(min(count, 20)):
        for p in (2, 3):
            err = abs(ball_distance(amplify(spec.center, p), amplify(pts[k], p)) - d.distance[k])
            amp_err = max(amp_err, float(err))
            if err > AMPLIFICATION_TOL:
                fail("amplification", k, [pts[k]], p=p)
    im_margin = float(np.min(min_eig(imag_part(pts) - imag_part(spec.center) / (2 + r * r))))
    stats = {"pairs": count, "amplification_error": amp_err, "im_lower_margin": im_margin,
             "max_distance": float(d.distance.max())}
    return rows, fails, (level, r), stats


def ball_suite(seed: int = 0, samples: int = 10_000, levels=(1, 2, 3), radii=(0.25, 1.0, 4.0),
               center: str = "random", workers: int = 1) -> SuiteResult:
    """Members of ``B(c, r)`` for every ``(level, r)``: the four bounds, midpoints, amplification."""
    tasks = []
    for level in levels:
        for r in radii:
            for chunk in range(-(-samples // BALL_CHUNK)):
                count = min(BALL_CHUNK, samples - chunk * BALL_CHUNK)
                tasks.append((seed, level, float(r), chunk, count, center))
    out = _map(_ball_chunk, tasks, workers)
    res = _collect("ball", BALL_COLUMNS, [(r, f) for r, f, _, _ in out],
                   {"seed": seed, "samples": samples, "levels": list(levels),
                    "radii": [float(r) for r in radii], "center": center})
    configs = {}
    for _, _, key, st in out:
        c = configs.setdefault(f"level={key[0]},r={key[1]}",
                               {"pairs": 0, "amplification_error": 0.0,
                                "im_lower_margin": np.inf, "max_distance": 0.0})
        c["pairs"] += st["pairs"]
        c["amplification_error"] = max(c["amplification_error"], st["amplification_error"])
        c["im_lower_margin"] = min(c["im_lower_margin"], st["im_lower_margin"])
        c["max_distance"] = max(c["max_distance"], st["max_distance"])
    res.summary["configs"] = configs
    res.rows.sort(key=lambda r: (r["level"], r["r"], r["seed"], r["index"]))
    return res


def replay_ball(failure) -> list:
    spec = BallSpec(matrix_from_json(failure["center"]), failure["radius"])
    pts = [matrix_from_json(p) for p in failure["points"]]
    if failure["kind"] == "bounds":
        return check_ball_point(spec, pts[0])
    if failure["kind"] == "midpoint":
        return check_midpoint(spec, *pts)
    return check_amplification(spec, pts[0], failure["p"])


# ------------------------------------------------------------------ nc-function axioms

NC_COLUMNS = ("family", "level", "seed", "index", "check", "error", "bound", "passed")
BLOCK_NORMS = (1.9, 2.0, 2.1)


def _scaled_direction(rng, a, c, t):
    b = complex_gaussian(rng, (a.shape[0], c.shape[0]))
    return b * t / op_norm(herm_inv_sqrt(imag_part(a)) @ b @ herm_inv_sqrt(imag_part(c)))


def draw_ncfunction(seed, index, levels, families) -> dict:
    level = levels[index % len(levels)]
    family = families[(index // len(levels)) % len(families)]
    rng = sample_rng(seed, index)
    f = random_function(rng, family)
    a, a2 = random_half_plane_point(rng, level), random_half_plane_point(rng, level)
    other = random_half_plane_point(rng, int(rng.choice(levels)))
    g = complex_gaussian(rng, (level, level))
    t = 1.0
    while True:
        T = np.eye(level) + t * g
        if np.linalg.cond(T) <= 1e3 and min_eig(imag_part(np.linalg.solve(T, a @ T))) > 1e-3:
            break
        t /= 2
    b1, b2 = complex_gaussian(rng, (level, level)), complex_gaussian(rng, (level, level))
    alpha, beta = complex_gaussian(rng, 2)
    blocks = [_scaled_direction(rng, a, a2, s) for s in BLOCK_NORMS]
    return {"seed": sample_seed(seed, index), "index": index, "level": level, "family": family,
            "function": f.to_descriptor(), "a": _mj(a), "a2": _mj(a2), "other": _mj(other),
            "T": _mj(T), "b1": _mj(b1), "b2": _mj(b2),
            "alpha": [alpha.real, alpha.imag], "beta": [beta.real, beta.imag],
            "block_directions": [_mj(b) for b in blocks]}


def evaluate_ncfunction(sample) -> list:
    """``(check, error, bound)`` triples; a check passes when ``error <= bound``."""
    f = from_descriptor(sample["function"])
    m = {k: matrix_from_json(sample[k]) for k in ("a", "a2", "other", "T", "b1", "b2")}
    a, a2, other, T, b1, b2 = (m[k] for k in ("a", "a2", "other", "T", "b1", "b2"))
    alpha, beta = complex(*sample["alpha"]), complex(*sample["beta"])
    fa, fa2, fo = f(a), f(a2), f(other)
    out = []
    err = op_norm(f(direct_sum(a, other)) - direct_sum(fa, fo))
    out.append(("direct_sum", err, 1e-10 * (1 + op_norm(fa) + op_norm(fo))))
    Ti = np.linalg.inv(T)
    err = op_norm(f(Ti @ a @ T) - Ti @ fa @ T)
    out.append(("similarity", err, 1e-8 * np.linalg.cond(T) * max(op_norm(fa), 1e-300)))
    scale = 1 + op_norm(fa) + op_norm(fa2)
    for name, (x, y, fx, fy) in (("fdc", (a, a2, fa, fa2)), ("fdc_swapped", (a2, a, fa2, fa))):
        out.append((name, op_norm(delta_f(f, x, y, x - y) - (fx - fy)), 1e-9 * scale))
    d1, d2 = delta_f(f, a, a2, b1), delta_f(f, a, a2, b2)
    err = op_norm(delta_f(f, a, a2, alpha * b1 + beta * b2) - alpha * d1 - beta * d2)
    out.append(("linearity", err, 1e-10 * (1 + abs(alpha) * op_norm(d1) + abs(beta) * op_norm(d2))))
    h = 1e-5 * op_norm(a) / op_norm(b1)
    fd = (f(a + h * b1) - f(a - h * b1)) / (2 * h)
    der = derivative(f, a, b1)
    out.append(("derivative_fd", op_norm(der - fd), 1e-6 * max(op_norm(der), 1e-300)))
    eps = 1 / (1 + op_norm(herm_inv_sqrt(imag_part(a)) @ b1 @ herm_inv_sqrt(imag_part(a2))))
    e1, e2 = delta_f(f, a, a2, b1, eps=eps), delta_f(f, a, a2, b1, eps=eps / 10)
    out.append(("eps_independence", op_norm(e1 - e2), 1e-10 * max(op_norm(e1), 1e-300)))
    if f.domain_kind == HALF_PLANE:
        out.append(("half_plane", max(0.0, -min_eig(imag_part(fa))), 1e-10))
    ia, ia2 = imag_part(a), imag_part(a2)
    for t, bj in zip(BLOCK_NORMS, sample["block_directions"]):
        b = matrix_from_json(bj)
        crit = op_norm(herm_inv_sqrt(ia) @ b @ herm_inv_sqrt(ia2)) < 2 - 1e-12
        certs = [block2_is_positive(ia, b / 2j, ia2, route=rt).is_positive
                 for rt in ("direct", "schur_w", "schur_u")]
        mismatches = sum(c != crit for c in certs)
        out.append((f"block_criterion_{t}", float(mismatches), 0.0))
    return out


def _ncfunction_one(args):
    seed, index, levels, families = args
    sample = draw_ncfunction(seed, index, levels, families)
    checks = evaluate_ncfunction(sample)
    rows = [{"family": sample["family"], "level": sample["level"], "seed": sample["seed"],
             "index": index, "check": name, "error": float(e), "bound": float(b),
             "passed": bool(e <= b)} for name, e, b in checks]
    bad = [name for name, e, b in checks if not e <= b]
    return rows, ([dict(sample, suite="ncfunction", violated=bad)] if bad else [])


def ncfunction_suite(seed: int = 0, samples: int = 1000, levels=(1, 2, 3), families=FAMILIES,
                     workers: int = 1) -> SuiteResult:
    """Direct sums, similarity, Δ-identities and the block half-plane criterion."""
    levels, families = tuple(levels), tuple(families)
    args = [(seed, i, levels, families) for i in range(samples)]
    res = _collect("ncfunction", NC_COLUMNS, _map(_ncfunction_one, args, workers),
                   {"seed": seed, "samples": samples, "levels": list(levels),
                    "families": list(families)})
    by_check = {}
    for r in res.rows:
        by_check.setdefault(r["check"], []).append(r["error"] / r["bound"] if r["bound"] else r["error"])
    res.summary["error_to_bound"] = {k: _stats(v) for k, v in sorted(by_check.items())}
    return res


# ------------------------------------------------------------------ boundary analysis

BD_COLUMNS = ("family", "level", "seed", "index", "check", "value", "bound", "passed")
BOUNDARY_FAMILIES = ("moebius", "nevanlinna_pick")
ORACLE_TOL = 1e-10


def _regular_point(rng, f, level, gap=0.3):
    """A Hermitian point whose spectrum stays ``gap`` away from the singularities of ``f``."""
    while True:
        alpha = random_hermitian(rng, level)
        lam = np.linalg.eigvalsh(alpha)
        if isinstance(f, Moebius):
            ok = np.all(np.abs(f.c * lam + f.d) > gap)
        else:
            ok = all(np.all(np.abs(lam - r) > gap) for r in f.poles)
        if ok:
            return alpha


def boundary_oracle_c(f, alpha, v) -> np.ndarray:
    """``f'(alpha)(v)`` in closed form for Möbius and Nevanlinna-Pick maps."""
    eye = np.eye(alpha.shape[0])
    if isinstance(f, Moebius):
        g = np.linalg.inv(f.c * alpha + f.d * eye)
        return g @ v @ g
    out = f.t * v
    for r, w in zip(f.poles, f.weights):
        g = np.linalg.inv(r * eye - alpha)
        out = out + w * g @ v @ g
    return out


def draw_boundary(seed, index, levels, families=BOUNDARY_FAMILIES) -> dict:
    level = levels[index % len(levels)]
    family = families[(index // len(levels)) % len(families)]
    rng = sample_rng(seed, index)
    f = random_moebius(rng) if family == "moebius" else random_nevanlinna_pick(rng)
    alpha = _regular_point(rng, f, level)
    dirs = [random_positive(rng, level), np.eye(level), random_positive(rng, level)]
    return {"seed": sample_seed(seed, index), "index": index, "level": level, "family": family,
            "function": f.to_descriptor(), "alpha": _mj(alpha),
            "directions": [_mj(v) for v in dirs]}


def evaluate_boundary(sample, schedule: bd.Schedule = bd.Schedule()) -> list:
    """``(check, value, bound)`` triples for one boundary sample (pass when value <= bound)."""
    f = from_descriptor(sample["function"])
    alpha = matrix_from_json(sample["alpha"])
    dirs = [matrix_from_json(v) for v in sample["directions"]]
    tol = schedule.tol
    out = []
    chain = bd.implication_chain(f, alpha, dirs, schedule)
    for name, ok in chain.checks.items():
        out.append((f"chain_{name}", 0.0 if ok else 1.0, 0.0))
    out.append(("chain_status", 0.0 if chain.status == bd.Status.CONVERGED else 1.0, 0.0))
    if chain.status != bd.Status.CONVERGED:
        return out
    v = dirs[0]
    c = chain.c_reports[0].limit
    exact = boundary_oracle_c(f, alpha, v)
    out.append(("c_oracle", op_norm(c - exact), tol * (1 + op_norm(exact))))
    out.append(("julia_min_margin", -chain.julia_reports[0].min_margin, 1e-8))
    probe = bd.BoundaryProbe(alpha, v, schedule)
    for m in (1.0, 4.0):
        cm = bd.estimate_c(f, probe.with_(cone_slope=m))
        gap = op_norm(cm.limit - c) if cm.limit is not None else np.inf
        out.append((f"cone_{m:g}", gap, tol * (1 + op_norm(c))))
    fa_limit = chain.value_reports[0].limit
    rate = chain.value_reports[0].fitted_rate
    out.append(("value_rate_deficit", 0.8 - rate if np.isfinite(rate) else 0.0, 0.0))
    rv = bd.re_vanishing_check(f, probe, chain.value_reports[0])
    out.append(("re_vanishing_limit", rv.extra["limit_norm"], tol * (1 + op_norm(fa_limit))))
    rr = rv.extra["fitted_rate"]
    if isinstance(f, Moebius) and np.isfinite(rr):
        out.append(("re_vanishing_rate", abs(rr - 1.0), 0.2))
    if alpha.shape[0] == 1:
        s = bd.scalar_jwc(f, alpha[0, 0].real, schedule)
        d = chain.derivative_reports[0].limit[0, 0] / v[0, 0].real
        fa = chain.value_reports[0].limit[0, 0]
        out.append(("oracle_c", abs(c[0, 0] / v[0, 0].real - s.c), ORACLE_TOL))
        out.append(("oracle_f_alpha", abs(fa - s.f_alpha), ORACLE_TOL))
        out.append(("oracle_f_prime", abs(d - s.f_prime), ORACLE_TOL))
    return out


def _table_one(kind, draw, evaluate):
    def run(args):
        seed, index = args[:2]
        sample = draw(*args)
        checks = evaluate(sample)
        rows = [{"family": sample.get("family", sample.get("kind")), "level": sample["level"],
                 "seed": sample["seed"], "index": index, "check": name, "value": float(v),
                 "bound": float(b), "passed": bool(v <= b)} for name, v, b in checks]
        bad = [name for name, v, b in checks if not v <= b]
        return rows, ([dict(sample, suite=kind, violated=bad)] if bad else [])
    return run


def boundary_suite(seed: int = 0, samples: int = 60, levels=(1, 2, 3), workers: int = 1) -> SuiteResult:
    """The boundary implication chain and its closed-form oracles at random regular points."""
    levels = tuple(levels)
    run = _table_one("boundary", draw_boundary, evaluate_boundary)
    args = [(seed, i, levels) for i in range(samples)]
    res = _collect("boundary", BD_COLUMNS, _map(run, args, workers),
                   {"seed": seed, "samples": samples, "levels": list(levels)})
    by_check = {}
    for r in res.rows:
        by_check.setdefault(r["check"], []).append(r["value"])
    res.summary["checks"] = {k: _stats(v) for k, v in sorted(by_check.items())}
    return res


def draw_dichotomy(seed, index, levels) -> dict:
    """Perturbations of ``z + i`` (liminf infinite) and of ``z`` (converges, ``c = slope * v``)."""
    rng = sample_rng(seed, index)
    level = levels[index % len(levels)]
    kind = "shifted" if (index // len(levels)) % 2 == 0 else "linear"
    slope = float(np.exp(0.2 * rng.normal()))
    const = 0.1 * rng.normal() + (1j * float(np.exp(0.5 * rng.normal())) if kind == "shifted" else 0)
    f = Polynomial((const, slope))
    alpha = random_hermitian(rng, level)
    v = random_positive(rng, level)
    return {"seed": sample_seed(seed, index), "index": index, "level": level, "kind": kind,
            "function": f.to_descriptor(), "alpha": _mj(alpha), "direction": _mj(v)}


def evaluate_dichotomy(sample, schedule: bd.Schedule = bd.Schedule()) -> list:
    f = from_descriptor(sample["function"])
    alpha, v = matrix_from_json(sample["alpha"]), matrix_from_json(sample["direction"])
    rep = bd.estimate_c(f, bd.BoundaryProbe(alpha, v, schedule))
    out = []
    if sample["kind"] == "shifted":
        out.append(("classified", 0.0 if rep.status == bd.Status.LIMINF_INFINITE else 1.0, 0.0))
        if alpha.shape[0] == 1:
            s = bd.scalar_jwc(f, alpha[0, 0].real, schedule)
            out.append(("scalar_classified", 0.0 if s.status == bd.Status.LIMINF_INFINITE else 1.0, 0.0))
    else:
        out.append(("classified", 0.0 if rep.status == bd.Status.CONVERGED else 1.0, 0.0))
        if rep.limit is not None:
            exact = f.coefficients[1].real * v
            out.append(("c_error", op_norm(rep.limit - exact), schedule.tol * (1 + op_norm(exact))))
    return out


def dichotomy_suite(seed: int = 0, samples: int = 100, levels=(1, 2, 3), workers: int = 1) -> SuiteResult:
    levels = tuple(levels)
    run = _table_one("dichotomy", draw_dichotomy, evaluate_dichotomy)
    args = [(seed, i, levels) for i in range(samples)]
    res = _collect("dichotomy", BD_COLUMNS, _map(run, args, workers),
                   {"seed": seed, "samples": samples, "levels": list(levels)})
    res.summary["misclassified"] = sum(1 for r in res.rows if r["check"] == "classified" and not r["passed"])
    return res


# ------------------------------------------------------------------ replay

def replay(failure: dict) -> list:
    """Re-evaluate a serialized failing sample; returns the checks that still fail."""
    suite = failure["suite"]
    if suite == "schwarz-pick":
        margins = evaluate_schwarz_pick(failure)
        return _schwarz_pick_violations(failure, margins, failure["tol"])
    if suite == "ball":
        return replay_ball(failure)
    if suite == "ncfunction":
        return [n for n, e, b in evaluate_ncfunction(failure) if not e <= b]
    if suite == "boundary":
        return [n for n, e, b in evaluate_boundary(failure) if not e <= b]
    if suite == "dichotomy":
        return [n for n, e, b in evaluate_dichotomy(failure) if not e <= b]
    raise PreconditionError(f"unknown suite {suite!r}")
