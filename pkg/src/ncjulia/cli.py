"""Command-line driver for the verification suites and boundary reports.

Every run writes ``<out>/<subcommand>.json`` (summary) and
``<out>/<subcommand>.csv`` (detail).  Exit codes: 0 when every asserted
invariant holds, 1 for usage or configuration errors, 2 when an invariant
is violated; the minimal failing sample is then written to
``<out>/<subcommand>-failure.json`` and can be re-checked with ``replay``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import boundary as bd
from . import suites
from .errors import NCJuliaError
from .hermitian import as_cmatrix, imag_part, matrix_from_json, matrix_to_json, min_eig, op_norm
from .ncfunction import Polynomial, direct_sum, from_descriptor, identity, inversion
from .realization import random_realization
from .sampling import FAMILIES, random_half_plane_point, sample_rng, sample_seed

SUBCOMMANDS = ("verify-schwarz-pick", "verify-ball", "verify-ncfunction", "boundary-report",
               "realization-demo", "replay")
MAX_LEVEL = 8
DEFAULT_SAMPLES = {"verify-schwarz-pick": 1000, "verify-ball": 1000, "verify-ncfunction": 200,
                   "boundary-report": 30, "realization-demo": 200}
NAMED_FUNCTIONS = {"identity": identity, "inversion": inversion,
                   "shift": lambda: Polynomial((1j, 1.0))}


class UsageError(NCJuliaError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    seed: int = 0
    samples: int | None = None
    levels: tuple = (1, 2, 3)
    tol: float | None = None
    out: str = "."
    workers: int = 1
    options: dict = field(default_factory=dict)

    def validate(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if self.samples is None:
            self.samples = DEFAULT_SAMPLES.get(self.subcommand, 1)
        if isinstance(self.samples, bool) or not isinstance(self.samples, int) or self.samples < 1:
            raise UsageError(f"samples must be a positive integer, got {self.samples!r}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise UsageError("seed must be a 64-bit unsigned integer")
        self.seed = int(self.seed)
        self.levels = tuple(int(k) for k in self.levels)
        if not self.levels or any(not 1 <= k <= MAX_LEVEL for k in self.levels):
            raise UsageError(f"levels must lie in 1..{MAX_LEVEL}, got {list(self.levels)}")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("tol must be positive")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")
        return self


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _levels(text: str):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad level list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file mirroring the run configuration")
    common.add_argument("--seed", type=int, help="master seed (64-bit)")
    common.add_argument("--samples", type=int, help="number of samples")
    common.add_argument("--levels", type=_levels, help="comma-separated matrix levels, e.g. 1,2,3")
    common.add_argument("--tol", type=float, help="tolerance override")
    common.add_argument("--out", help="output directory (default: current directory)")
    common.add_argument("--workers", type=int, help="worker threads (results do not depend on it)")

    p = _Parser(prog="ncjulia", description=__doc__.splitlines()[0], parents=[common],
                argument_default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="subcommand", parser_class=_Parser)
    sp = sub.add_parser("verify-schwarz-pick", parents=[common], argument_default=argparse.SUPPRESS,
                        help="contraction margins over random samples")
    sp.add_argument("--families", type=lambda s: tuple(s.split(",")))
    sp.add_argument("--second-order", action="store_true", dest="second_order")
    b = sub.add_parser("verify-ball", parents=[common], argument_default=argparse.SUPPRESS,
                       help="hyperbolic ball bounds, midpoints and amplification")
    b.add_argument("--radii", type=lambda s: tuple(float(x) for x in s.split(",")))
    b.add_argument("--center", choices=("random", "i"))
    n = sub.add_parser("verify-ncfunction", parents=[common], argument_default=argparse.SUPPRESS,
                       help="nc-function axioms and Δ identities")
    n.add_argument("--families", type=lambda s: tuple(s.split(",")))
    r = sub.add_parser("boundary-report", parents=[common], argument_default=argparse.SUPPRESS,
                       help="boundary analysis of one probe, or the boundary suites")
    r.add_argument("--probe", help="probe descriptor JSON file")
    r.add_argument("--function", help="function descriptor JSON, or identity|inversion|shift")
    r.add_argument("--alpha", help="selfadjoint point: number or matrix JSON")
    r.add_argument("--direction", help="positive direction: number or matrix JSON")
    r.add_argument("--cone-slope", type=float, dest="cone_slope")
    sub.add_parser("realization-demo", parents=[common], argument_default=argparse.SUPPRESS,
                   help="evaluate a random Loewner realization at random points")
    rp = sub.add_parser("replay", parents=[common], argument_default=argparse.SUPPRESS,
                        help="re-check a serialized failing sample")
    rp.add_argument("failure", help="failure JSON written by a previous run")
    return p


def load_config(argv) -> RunConfig:
    """Defaults, then the ``--config`` file, then explicit flags."""
    ns = {k: v for k, v in vars(build_parser().parse_args(argv)).items() if v is not None}
    merged = {}
    if "config" in ns:
        try:
            merged.update(json.loads(Path(ns.pop("config")).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}")
    merged.update(ns)
    if "subcommand" not in merged or merged["subcommand"] is None:
        raise UsageError("no subcommand given (flag or config file)")
    base = {k: merged.pop(k) for k in ("subcommand", "seed", "samples", "levels", "tol", "out",
                                       "workers") if k in merged}
    if isinstance(base.get("levels"), str):
        base["levels"] = _levels(base["levels"])
    return RunConfig(**base, options=merged).validate()


def _prepare_out(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise UsageError(f"output path {out} is not writable: {exc}")
    return out


def _write(out: Path, name: str, summary: str, detail: str, failure=None):
    (out / f"{name}.json").write_text(summary)
    (out / f"{name}.csv").write_text(detail)
    fpath = out / f"{name}-failure.json"
    if failure is not None:
        fpath.write_text(json.dumps(failure, indent=2, sort_keys=True) + "\n")
    elif fpath.exists():
        fpath.unlink()


# ----------------------------------------------------------------- boundary probes

def _parse_matrix(text):
    if text is None:
        return None
    if isinstance(text, (int, float, complex)):
        return as_cmatrix(np.asarray(text, dtype=complex))
    obj = json.loads(text) if isinstance(text, str) else text
    if isinstance(obj, dict):
        return matrix_from_json(obj)
    return as_cmatrix(np.asarray(obj, dtype=complex))


def _parse_function(text):
    if text in NAMED_FUNCTIONS:
        return NAMED_FUNCTIONS[text]()
    return from_descriptor(json.loads(text) if isinstance(text, str) else text)


def _probe_from_options(opts):
    if "probe" in opts:
        src = opts["probe"]
        try:
            desc = json.loads(Path(src).read_text()) if isinstance(src, str) else src
            return bd.probe_from_json(desc)
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise UsageError(f"bad probe descriptor: {exc}")
    if "function" not in opts:
        return None
    try:
        f = _parse_function(opts["function"])
        alpha = _parse_matrix(opts.get("alpha", "0"))
        v = _parse_matrix(opts.get("direction", None))
        v = np.eye(alpha.shape[0]) if v is None else v
        return f, bd.BoundaryProbe(alpha, v, bd.Schedule(), float(opts.get("cone_slope", 0.0)))
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise UsageError(f"bad probe: {exc}")


def probe_report(f, probe: bd.BoundaryProbe) -> tuple[dict, list, list]:
    """JSON report, CSV rows and violated checks for one probe."""
    c = bd.estimate_c(f, probe)
    doc = {"probe": bd.probe_to_json(f, probe), "status": c.status.value, "c": c.to_json()}
    rows = [{"quantity": "c", "k": k, "y": float(y), "norm": op_norm(s)}
            for k, (y, s) in enumerate(zip(c.ys, c.samples))]
    bad = []
    if c.status in (bd.Status.CONVERGED, bd.Status.DEGENERATE):
        chain = bd.implication_chain(f, probe.alpha, [probe.direction], probe.schedule,
                                 probe.cone_slope)
        val, der = chain.value_reports[0], chain.derivative_reports[0]
        doc.update(f_alpha=val.to_json(), derivative=der.to_json(),
                   julia=chain.julia_reports[0].to_json(), checks=chain.checks)
        bad += [k for k, ok in chain.checks.items() if not ok and k != "c_positive"]
        if c.status == bd.Status.CONVERGED and not chain.checks.get("c_positive", True):
            bad.append("c_positive")
        for rep in (val, der):
            rows += [{"quantity": rep.quantity, "k": k, "y": float(y), "norm": op_norm(s)}
                     for k, (y, s) in enumerate(zip(rep.ys, rep.samples))]
        if val.converged:
            rv = bd.re_vanishing_check(f, probe, val)
            doc["re_vanishing"] = rv.to_json()
            if not rv.passed:
                bad.append("re_vanishing")
        cones = {}
        for m in (0.0, 1.0, 4.0):
            rep = bd.estimate_c(f, probe.with_(cone_slope=m))
            cones[f"{m:g}"] = None if rep.limit is None else matrix_to_json(rep.limit)
            if rep.limit is None or op_norm(rep.limit - c.limit) > probe.schedule.tol * (1 + op_norm(c.limit)):
                bad.append(f"cone_{m:g}")
        doc["nontangential_c"] = cones
        if probe.level == 1:
            s = bd.scalar_jwc(f, probe.alpha[0, 0].real, probe.schedule)
            doc["scalar_oracle"] = {"c": s.c, "f_alpha": s.f_alpha, "f_prime": s.f_prime,
                                    "quotient": s.quotient, "status": s.status.value,
                                    "agreement": s.agreement}
    elif c.status == bd.Status.FAILED:
        bad.append("c_converged")
    doc["violated"] = bad
    return doc, rows, bad


def _csv(rows, columns):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


# ----------------------------------------------------------------- realization demo

def realization_demo(seed: int, samples: int, levels, n_vars: int = 2):
    rng = sample_rng(seed, 0)
    real = random_realization(rng, n_vars=n_vars)
    rows, failures = [], []
    for i in range(samples):
        r = sample_rng(seed, i + 1)
        level = levels[i % len(levels)]
        pts = [random_half_plane_point(r, level) for _ in range(n_vars)]
        other = [random_half_plane_point(r, level) for _ in range(n_vars)]
        M = real.operator(pts)
        h = real.evaluate(pts)
        joint = real.evaluate([direct_sum(a, b) for a, b in zip(pts, other)])
        ds_err = op_norm(joint - direct_sum(h, real.evaluate(other)))
        lam_m, lam_h = min_eig(imag_part(M)), min_eig(imag_part(h))
        ok = lam_m > 0 and lam_h > 0 and ds_err <= 1e-10 * (1 + op_norm(joint))
        row = {"index": i, "seed": sample_seed(seed, i + 1), "level": level, "min_eig_im_M": lam_m,
               "min_eig_im_h": lam_h, "direct_sum_error": ds_err, "passed": ok}
        rows.append(row)
        if not ok:
            failures.append({"suite": "realization", "index": i, "level": level, **row,
                             "realization": real.to_json(),
                             "points": [matrix_to_json(a) for a in pts]})
    rows.sort(key=lambda r: (r["seed"], r["index"]))
    summary = {"suite": "realization-demo", "seed": seed, "samples": samples,
               "levels": list(levels), "realization": real.to_json(),
               "min_eig_im_M": min(r["min_eig_im_M"] for r in rows),
               "min_eig_im_h": min(r["min_eig_im_h"] for r in rows),
               "max_direct_sum_error": max(r["direct_sum_error"] for r in rows)}
    return summary, rows, failures


# ----------------------------------------------------------------- dispatch

def _suite_run(cfg: RunConfig, out: Path) -> int:
    o, name = cfg.options, cfg.subcommand
    if name == "verify-schwarz-pick":
        res = suites.schwarz_pick_suite(cfg.seed, cfg.samples, cfg.levels,
                                        o.get("families", FAMILIES), cfg.tol or 1e-8,
                                        bool(o.get("second_order", False)), cfg.workers)
    elif name == "verify-ball":
        res = suites.ball_suite(cfg.seed, cfg.samples, cfg.levels,
                                o.get("radii", (0.25, 1.0, 4.0)), o.get("center", "random"),
                                cfg.workers)
    else:
        res = suites.ncfunction_suite(cfg.seed, cfg.samples, cfg.levels,
                                      o.get("families", FAMILIES), cfg.workers)
    _write(out, name, res.summary_text(), res.csv_text(), res.minimal_failure)
    return _report(name, res.passed, len(res.rows), out)


def _report(name, passed, n_rows, out) -> int:
    verdict = "passed" if passed else "INVARIANT VIOLATED"
    print(f"{name}: {verdict} ({n_rows} rows) -> {out / (name + '.json')}")
    return 0 if passed else 2


def run(cfg: RunConfig) -> int:
    name = cfg.subcommand
    if name == "replay":
        return _replay(cfg.options["failure"])
    fams = cfg.options.get("families")
    if fams is not None and any(f not in FAMILIES for f in fams):
        raise UsageError(f"families must be among {FAMILIES}")
    out = _prepare_out(cfg)
    if name in ("verify-schwarz-pick", "verify-ball", "verify-ncfunction"):
        return _suite_run(cfg, out)
    if name == "realization-demo":
        summary, rows, failures = realization_demo(cfg.seed, cfg.samples, cfg.levels)
        minimal = min(failures, key=lambda f: (f["level"], f["index"])) if failures else None
        summary["passed"] = not failures
        _write(out, name, json.dumps(summary, indent=2, sort_keys=True) + "\n",
               _csv(rows, list(rows[0])), minimal)
        return _report(name, not failures, len(rows), out)
    # boundary-report
    probe = _probe_from_options(cfg.options)
    if probe is not None:
        f, p = probe
        if cfg.tol is not None:
            p = p.with_(schedule=bd.Schedule(p.schedule.y0, p.schedule.rho, p.schedule.k_max, cfg.tol))
        doc, rows, bad = probe_report(f, p)
        doc["passed"] = not bad
        failure = dict(suite="probe", violated=bad, **doc["probe"]) if bad else None
        _write(out, name, json.dumps(doc, indent=2, sort_keys=True) + "\n",
               _csv(rows, ("quantity", "k", "y", "norm")), failure)
        return _report(name, not bad, len(rows), out)
    res = suites.boundary_suite(cfg.seed, cfg.samples, cfg.levels, cfg.workers)
    dic = suites.dichotomy_suite(cfg.seed, cfg.samples, cfg.levels, cfg.workers)
    summary = {"boundary": json.loads(res.summary_text()), "dichotomy": json.loads(dic.summary_text())}
    passed = res.passed and dic.passed
    summary["passed"] = passed
    minimal = res.minimal_failure or dic.minimal_failure
    rows = [dict(r, suite="boundary") for r in res.rows] + [dict(r, suite="dichotomy") for r in dic.rows]
    _write(out, name, json.dumps(summary, indent=2, sort_keys=True) + "\n",
           _csv(rows, ("suite",) + suites.BD_COLUMNS), minimal)
    return _report(name, passed, len(rows), out)


def _replay(path) -> int:
    try:
        failure = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read failure file: {exc}")
    if failure.get("suite") == "probe":
        f, p = bd.probe_from_json(failure)
        _, _, still = probe_report(f, p)
    elif failure.get("suite") == "realization":
        from .realization import LoewnerRealization
        real = LoewnerRealization.from_json(failure["realization"])
        pts = [matrix_from_json(x) for x in failure["points"]]
        M, h = real.operator(pts), real.evaluate(pts)
        still = [n for n, lam in (("im_M", min_eig(imag_part(M))), ("im_h", min_eig(imag_part(h))))
                 if not lam > 0]
    else:
        still = suites.replay(failure)
    if still:
        print(f"replay: violation reproduced: {', '.join(still)}")
        return 2
    print("replay: no violation")
    return 0


def main(argv=None) -> int:
    try:
        return run(load_config(sys.argv[1:] if argv is None else argv))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
