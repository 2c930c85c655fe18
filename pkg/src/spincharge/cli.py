"""Command-line interface: run, sweep, fit, and validate subcommands."""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from .errors import SpinChargeError
from .harness import (
    ExperimentConfig,
    SweepOutcome,
    emit_report,
    fit_from_results,
    results_from_csv,
    run_single,
    run_sweep,
)
from .lattice import ring
from .models import fit_scaling
from .observables import stored_power
from .operators import hs_norm_closed_form, hs_norm_numeric, build_H
from .schedule import (
    ProtocolSchedule,
    coefficients,
    equalize_local,
    equalized_local_field,
    g_of_t,
    s_of_t,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spincharge",
        description="Charge Ising spin-network batteries and fit precision scaling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to a JSON experiment config")
    common.add_argument("--seed", type=int, help="override the shot-sampling seed")
    common.add_argument("--out", help="output directory for reports")
    common.add_argument("--preset", help="schedule preset name (dwave|numerics)")
    common.add_argument("--workers", type=int, default=1,
                        help="worker processes for sweeps")

    sub.add_parser("run", parents=[common], help="execute a single charging run")
    sub.add_parser("sweep", parents=[common], help="execute a sweep and fit scaling")

    fit_p = sub.add_parser("fit", parents=[common],
                           help="refit scaling from an existing results CSV")
    fit_p.add_argument("csv", help="path to a results.csv produced by sweep")
    fit_p.add_argument("--sampled", action="store_true",
                       help="fit the sampled sigma instead of the exact one")

    sub.add_parser("validate", parents=[common], help="run the invariant suite")
    return parser


def _load_config(args) -> ExperimentConfig:
    if args.config:
        cfg = ExperimentConfig.from_json(args.config)
    else:
        cfg = ExperimentConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.preset is not None:
        overrides["preset"] = args.preset
    if args.out is not None:
        overrides["out"] = args.out
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


def _cmd_run(args) -> int:
    cfg = _load_config(args)
    result = run_single(cfg)
    print(json.dumps(dataclasses.asdict(result), indent=2))
    if cfg.out:
        emit_report(SweepOutcome(results=(result,), fits=()), cfg.out)
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    outcome = run_sweep(cfg, workers=max(1, args.workers))
    for r in outcome.results:
        print(
            f"N={r.n_spins:3d} gamma={r.gamma:g} J_CT={r.j_crosstalk:g} "
            f"mu={r.mu_exact:+.6f} sigma={r.sigma_exact:.6f}"
        )
    for gamma, j_ct, fit in outcome.fits:
        print(
            f"fit gamma={gamma:g} J_CT={j_ct:g}: "
            f"c={fit.c:.4f}+-{fit.c_err:.4f} "
            f"alpha={fit.alpha:.4f}+-{fit.alpha_err:.4f}"
        )
    for point, error in outcome.failures:
        print(f"FAILED point {point}: {error}", file=sys.stderr)
    if cfg.out:
        written = emit_report(outcome, cfg.out)
        for name, path in sorted(written.items()):
            print(f"wrote {name}: {path}")
    return 1 if outcome.failures else 0


def _cmd_fit(args) -> int:
    rows = results_from_csv(args.csv)
    key = "sigma_bar" if args.sampled else "sigma_exact"
    groups: dict[tuple[float, float], list] = {}
    for row in rows:
        groups.setdefault((row["gamma"], row["j_crosstalk"]), []).append(row)
    payload = []
    for (gamma, j_ct), members in sorted(groups.items()):
        points = sorted((m["N"], m[key]) for m in members)
        if len({p[0] for p in points}) < 3:
            continue
        fit = fit_scaling(points)
        payload.append({"gamma": gamma, "j_crosstalk": j_ct,
                        **json.loads(fit.to_json())})
        print(
            f"fit gamma={gamma:g} J_CT={j_ct:g}: "
            f"c={fit.c:.4f}+-{fit.c_err:.4f} "
            f"alpha={fit.alpha:.4f}+-{fit.alpha_err:.4f}"
        )
    if not payload:
        print("no group has enough points to fit", file=sys.stderr)
        return 1
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "fit.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        print(f"wrote fit: {path}")
    return 0


def _validate_checks():
    tau = 12.0
    yield ("schedule cyclic and continuous", lambda: (
        abs(s_of_t(0.0, tau) - 1.0) < 1e-12
        and abs(s_of_t(tau, tau) - 1.0) < 1e-12
        and abs(g_of_t(0.0, tau)) < 1e-12
        and abs(g_of_t(tau, tau)) < 1e-12
        and abs(s_of_t(tau / 3 - 1e-12, tau) - s_of_t(tau / 3 + 1e-12, tau)) < 1e-9
    ))
    yield ("equalized field anchor 0.73", lambda: (
        abs(equalized_local_field(0.5, 0.2, 7.0, 1.0) - 0.73) < 0.005
    ))

    def hs_identity():
        cp = ProtocolSchedule(tau=tau, h=-0.5, J=-0.2)
        lp = equalize_local(cp, 1.0, scheme="pointwise")
        n, n_c = 6, 6
        for t in np.linspace(0.0, tau, 101):
            bx_c, bz_c, jc = coefficients(t, cp)
            bx_l, bz_l, _ = coefficients(t, lp)
            lhs = hs_norm_closed_form(bx_l, bz_l, 0.0, n, 0)
            rhs = hs_norm_closed_form(bx_c, bz_c, jc, n, n_c)
            if abs(lhs - rhs) > 1e-9 * max(lhs, rhs, 1e-30):
                return False
        return True

    yield ("pointwise HS-norm identity", hs_identity)

    def closed_vs_numeric():
        rng = np.random.default_rng(0)
        for n in (2, 3, 4, 5, 6):
            lat = ring(n)
            sched = ProtocolSchedule(
                tau=tau, h=float(rng.normal()), J=float(rng.normal())
            )
            for t in rng.uniform(0, tau, size=3):
                bx, bz, jc = coefficients(t, sched)
                closed = hs_norm_closed_form(bx, bz, jc, n, lat.n_couplings)
                numeric = hs_norm_numeric(build_H(t, sched, lat)) / math.sqrt(2.0**n)
                if abs(closed - numeric) > 1e-10 * max(closed, 1e-30):
                    return False
        return True

    yield ("HS norm closed form vs numeric", closed_vs_numeric)

    def power_anchor():
        _, p_c = stored_power(0.999, 5612, 7.57, 60e-6)
        _, p_l = stored_power(0.833, 5612, 7.57, 60e-6)
        return (abs(p_c - 2.344e-16) / 2.344e-16 < 1e-3
                and abs(p_l - 2.151e-16) / 2.151e-16 < 1e-3)

    yield ("stored power anchor", power_anchor)

    def determinism():
        cfg = ExperimentConfig(
            preset="numerics", mode="local", n_spins=2, tau=6.0, nu=50, seed=3
        )
        a = run_single(cfg)
        b = run_single(cfg)
        fields = dataclasses.asdict(a)
        fields_b = dataclasses.asdict(b)
        fields.pop("wall_time")
        fields_b.pop("wall_time")
        return fields == fields_b

    yield ("run determinism", determinism)


def _cmd_validate(args) -> int:
    failed = 0
    for name, check in _validate_checks():
        try:
            ok = bool(check())
        except Exception as err:
            ok = False
            print(f"FAIL {name}: {type(err).__name__}: {err}")
            failed += 1
            continue
        print(f"{'PASS' if ok else 'FAIL'} {name}")
        failed += 0 if ok else 1
    return 1 if failed else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "fit": _cmd_fit,
        "validate": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except SpinChargeError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
