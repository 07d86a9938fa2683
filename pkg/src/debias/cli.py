"""Command-line front end.

Subcommands: prox-table, solve, cs-sweep, registration, nrsfm, certify.
Every run writes one output file (CSV or JSON) and prints a one-line
summary.  Exit codes: 0 success, 1 parameter or usage error, 2 numeric or
ingestion failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

import numpy as np

from .errors import (
    CapacityError,
    DegenerateGeometryError,
    IngestionError,
    NumericError,
    ParameterError,
    ParseError,
)
from .experiments import (
    CsTrialConfig,
    TrialOutcome,
    nrsfm_metrics,
    read_correspondences,
    read_mocap,
    register_correspondences,
    run_cs_sweep,
    run_nrsfm_sweep,
    run_registration_sweep,
)
from .numerics import read_matrix, read_vector
from .regularizer import RegParams, prox_scalar, reg_value_scalar
from .solver import (
    AdmmSettings,
    VectorProblem,
    admm_vector,
    least_squares_init,
    forbidden_band,
    rip_delta_bruteforce,
    stationarity_check,
)

CSV_HEADER = "method,noise_norm,trial,cardinality_or_rank,dist_oracle,dist_gt,datafit,converged"


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def emit_results(outcomes, fmt: str, path) -> None:
    """Write trial outcomes as CSV (fixed header) or a JSON array.

    Floats are written with full (17 significant digit) precision so the
    files round trip exactly; missing metrics become empty CSV fields or
    JSON nulls.
    """
    outcomes = list(outcomes)
    if not outcomes:
        raise ParameterError("no outcomes to write")
    if fmt == "csv":
        lines = [CSV_HEADER]
        for o in outcomes:
            d = asdict(o)
            lines.append(",".join(_fmt(d[k]) for k in CSV_HEADER.split(",")))
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    elif fmt == "json":
        with open(path, "w") as fh:
            json.dump([asdict(o) for o in outcomes], fh, indent=1)
            fh.write("\n")
    else:
        raise ParameterError(f"unknown format {fmt!r}")


def read_results_json(path) -> list:
    """Reload a JSON results file into TrialOutcome rows."""
    with open(path) as fh:
        return [TrialOutcome(**row) for row in json.load(fh)]


def _parse_sweep(text: str) -> list:
    """Parse 'start:step:stop' (stop included when on-grid), a comma list,
    or a single number."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ParameterError(f"sweep must be 'start:step:stop', got {text!r}")
        try:
            start, step, stop = (float(t) for t in parts)
        except ValueError:
            raise ParameterError(f"unparseable sweep {text!r}") from None
        if step <= 0 or stop < start:
            raise ParameterError("sweep needs step > 0 and stop >= start")
        count = int(np.floor((stop - start) / step + 1e-9))
        return [start + i * step for i in range(count + 1)]
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ParameterError(f"unparseable value list {text!r}") from None


def _settings(args) -> AdmmSettings:
    return AdmmSettings(
        rho=args.rho,
        max_iters=args.max_iters,
        primal_tol=args.primal_tol,
        objective_tol=args.objective_tol,
    )


def _add_solver_flags(sp):
    sp.add_argument("--rho", type=float, default=2.0, help="ADMM penalty (> 1)")
    sp.add_argument("--max-iters", type=int, default=2000)
    sp.add_argument("--primal-tol", type=float, default=1e-8)
    sp.add_argument("--objective-tol", type=float, default=1e-10)


def _x0_from_spec(spec: str, prob: VectorProblem) -> np.ndarray:
    if spec == "ls":
        return least_squares_init(prob)
    if spec == "zero":
        return np.zeros(prob.n)
    if spec.startswith("random:"):
        try:
            seed = int(spec.split(":", 1)[1])
        except ValueError:
            raise ParameterError(f"bad random seed in {spec!r}") from None
        return np.random.default_rng(seed).standard_normal(prob.n)
    return read_vector(spec)


def _vec_summary(x, limit: int = 6) -> str:
    if x.size <= limit:
        return "(" + ", ".join(f"{v:.6g}" for v in x) + ")"
    return f"[{x.size} entries]"


def _write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def cmd_prox_table(args) -> int:
    p = RegParams(args.mu, args.lam)
    ys = _parse_sweep(args.range)
    rows = [
        {"y": y, "prox": prox_scalar(y, p, args.rho), "reg_value": reg_value_scalar(y, p)}
        for y in ys
    ]
    if args.format == "csv":
        with open(args.out, "w") as fh:
            fh.write("y,prox,reg_value\n")
            for r in rows:
                fh.write(f"{r['y']:.17g},{r['prox']:.17g},{r['reg_value']:.17g}\n")
    else:
        _write_json(args.out, rows)
    print(f"prox-table: {len(rows)} rows -> {args.out}")
    return 0


def cmd_solve(args) -> int:
    prob = VectorProblem(read_matrix(args.matrix), read_vector(args.rhs))
    p = RegParams(args.mu, args.lam)
    res = admm_vector(prob, p, _settings(args), x0=_x0_from_spec(args.x0, prob))
    if args.format == "json":
        _write_json(
            args.out,
            {
                "solution": list(res.x),
                "objective": res.objective,
                "primal_residual": res.primal_residual,
                "iterations": res.iterations,
                "terminated_by": res.terminated_by,
            },
        )
    else:
        with open(args.out, "w") as fh:
            fh.write("index,value\n")
            for i, v in enumerate(res.x):
                fh.write(f"{i},{v:.17g}\n")
    print(
        f"solve: solution {_vec_summary(res.x)}, objective {res.objective:.6g}, "
        f"{res.iterations} iterations ({res.terminated_by}) -> {args.out}"
    )
    return 0


def cmd_cs_sweep(args) -> int:
    levels = _parse_sweep(args.levels)
    cfg = CsTrialConfig(p=args.p, n=args.n, sparsity=args.sparsity)
    outcomes = run_cs_sweep(
        levels, args.trials, args.seed, cfg, _settings(args), mu=args.mu
    )
    emit_results(outcomes, args.format, args.out)
    print(
        f"cs-sweep: {len(levels)} levels x {args.trials} trials, "
        f"{len(outcomes)} rows -> {args.out}"
    )
    return 0


def cmd_registration(args) -> int:
    settings = _settings(args)
    if args.correspondences:
        model, target = read_correspondences(args.correspondences)
        mu = 400.0 if args.mu is None else args.mu
        lam_combined = 5.0 if args.lam_combined is None else args.lam_combined
        lam_l1 = 10.0 if args.lam_l1 is None else args.lam_l1
        outcomes = []
        counts = {}
        for method, p in (
            ("envelope", RegParams(mu, 0.0)),
            ("combined", RegParams(mu, lam_combined)),
            ("l1", RegParams(0.0, lam_l1)),
        ):
            fit = register_correspondences(model, target, p, settings)
            counts[method] = int(np.sum(fit.outlier_flags))
            prob = fit.problem
            outcomes.append(
                TrialOutcome(
                    method=method,
                    noise_norm=0.0,
                    trial=0,
                    cardinality_or_rank=counts[method],
                    dist_oracle=None,
                    dist_gt=None,
                    datafit=float(np.linalg.norm(prob.a @ fit.x - prob.b)),
                    converged=fit.result.converged,
                )
            )
        emit_results(outcomes, args.format, args.out)
        summary = ", ".join(f"{k}: {v} outliers" for k, v in counts.items())
        print(f"registration: {model.shape[1]} correspondences; {summary} -> {args.out}")
        return 0
    mu = 1.0 if args.mu is None else args.mu
    lam_combined = 0.5 if args.lam_combined is None else args.lam_combined
    lam_l1 = 2.0 if args.lam_l1 is None else args.lam_l1
    outcomes = run_registration_sweep(
        args.instances,
        args.seed,
        settings,
        mu=mu,
        lam_combined=lam_combined,
        lam_l1=lam_l1,
    )
    emit_results(outcomes, args.format, args.out)
    print(
        f"registration: {args.instances} instances, {len(outcomes)} rows -> {args.out}"
    )
    return 0


def cmd_nrsfm(args) -> int:
    settings = _settings(args)
    sqrt_mus = _parse_sweep(args.sqrt_mu)
    if args.mocap:
        inst = read_mocap(args.mocap)
        rng = np.random.default_rng(args.seed)
        x0 = rng.standard_normal((3 * inst.problem.frames, inst.problem.points))
        outcomes = []
        from .solver import admm_matrix_nrsfm

        for sq in sqrt_mus:
            for method, p in (
                ("envelope", RegParams(sq * sq, 0.0)),
                ("combined", RegParams(sq * sq, args.lam)),
                ("l1", RegParams(0.0, 2.0 * sq)),
            ):
                res = admm_matrix_nrsfm(inst.problem, p, settings, x0=x0)
                met = nrsfm_metrics(inst, res.x)
                outcomes.append(
                    TrialOutcome(
                        method=method,
                        noise_norm=sq,
                        trial=0,
                        cardinality_or_rank=met.rank,
                        dist_oracle=None,
                        dist_gt=met.gt_distance,
                        datafit=met.datafit,
                        converged=res.converged,
                    )
                )
        outcomes.sort(key=lambda o: (o.method, o.noise_norm, o.trial))
        emit_results(outcomes, args.format, args.out)
        print(
            f"nrsfm: {inst.problem.frames} frames x {inst.problem.points} points "
            f"from {args.mocap}, {len(outcomes)} rows -> {args.out}"
        )
        return 0
    outcomes = run_nrsfm_sweep(
        sqrt_mus,
        n_seeds=args.seeds,
        base_seed=args.seed,
        frames=args.frames,
        points=args.points,
        rank=args.rank,
        lam_combined=args.lam,
        settings=settings,
    )
    emit_results(outcomes, args.format, args.out)
    print(
        f"nrsfm: {args.seeds} seeds x {len(sqrt_mus)} sqrt(mu) values, "
        f"{len(outcomes)} rows -> {args.out}"
    )
    return 0


def cmd_certify(args) -> int:
    prob = VectorProblem(read_matrix(args.matrix), read_vector(args.rhs))
    x = read_vector(args.x)
    p = RegParams(args.mu, args.lam)
    delta = args.delta
    if args.k is not None:
        delta = rip_delta_bruteforce(prob.a, args.k)
    report = stationarity_check(prob, x, p, tol=args.tol, delta_k=delta)
    payload = {
        "is_stationary": report.is_stationary,
        "tolerance": report.tolerance,
        "delta_k": report.delta_k,
        "forbidden_band": list(forbidden_band(p, delta)) if delta is not None else None,
        "z": list(report.z),
        "per_coordinate_margin": list(report.per_coordinate_margin),
        "forbidden_band_hits": report.forbidden_band_hits,
    }
    if args.format == "json":
        _write_json(args.out, payload)
    else:
        with open(args.out, "w") as fh:
            fh.write("index,x,z,margin,band_hit\n")
            hits = set(report.forbidden_band_hits)
            for i, (xi, zi, mi) in enumerate(
                zip(x, report.z, report.per_coordinate_margin)
            ):
                fh.write(
                    f"{i},{xi:.17g},{zi:.17g},{mi:.17g},{'true' if i in hits else 'false'}\n"
                )
    verdict = "stationary" if report.is_stationary else "not stationary"
    extra = f", delta_k {delta:.6g}" if delta is not None else ""
    print(
        f"certify: {verdict} at tol {report.tolerance:g}{extra}, "
        f"{len(report.forbidden_band_hits)} band hits -> {args.out}"
    )
    return 0


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the contract here is 1
    def error(self, message):
        raise ParameterError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="debias", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("prox-table", parents=[], help="tabulate the scalar prox")
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, default=0.0)
    sp.add_argument("--rho", type=float, default=2.0)
    sp.add_argument("--range", default="-3:0.01:3", help="y sweep start:step:stop")
    sp.add_argument("--out", default="prox_table.csv")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_prox_table)

    sp = sub.add_parser("solve", help="solve one vector problem from files")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--rhs", required=True)
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, default=0.0)
    sp.add_argument("--x0", default="ls", help="ls | zero | random:<seed> | <path>")
    sp.add_argument("--out", default="solve.json")
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    _add_solver_flags(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("cs-sweep", help="sparse-recovery noise sweep")
    sp.add_argument("--levels", default="0:0.5:5")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--p", type=int, default=100)
    sp.add_argument("--n", type=int, default=200)
    sp.add_argument("--sparsity", type=int, default=10)
    sp.add_argument("--mu", type=float, default=1.0)
    sp.add_argument("--out", default="sweep.csv")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_solver_flags(sp)
    sp.set_defaults(func=cmd_cs_sweep)

    sp = sub.add_parser("registration", help="robust 2-D registration")
    sp.add_argument("--instances", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--correspondences", help="match file: solve this instance instead")
    sp.add_argument("--mu", type=float, default=None)
    sp.add_argument("--lambda-combined", dest="lam_combined", type=float, default=None)
    sp.add_argument("--lambda-l1", dest="lam_l1", type=float, default=None)
    sp.add_argument("--out", default="registration.csv")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_solver_flags(sp)
    sp.set_defaults(func=cmd_registration)

    sp = sub.add_parser("nrsfm", help="non-rigid structure-from-motion sweep")
    sp.add_argument("--frames", type=int, default=20)
    sp.add_argument("--points", type=int, default=15)
    sp.add_argument("--rank", type=int, default=3)
    sp.add_argument("--seeds", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sqrt-mu", default="10:10:100")
    sp.add_argument("--lambda", dest="lam", type=float, default=5.0)
    sp.add_argument("--mocap", help="track file: run the sweep on it instead")
    sp.add_argument("--out", default="nrsfm.csv")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_solver_flags(sp)
    sp.set_defaults(func=cmd_nrsfm)

    sp = sub.add_parser("certify", help="stationarity certificate for a candidate x")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--rhs", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, default=0.0)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--k", type=int, default=None, help="sparsity for exact delta_K")
    sp.add_argument("--delta", type=float, default=None, help="use this delta_K directly")
    sp.add_argument("--out", default="certify.json")
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.set_defaults(func=cmd_certify)

    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (
        ParseError,
        IngestionError,
        NumericError,
        CapacityError,
        DegenerateGeometryError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
