"""Command-line entry point: ``imvs {select,posi,fdist,baseline,simulate}``.

Exit status is 0 on success, 2 on a usage error and 1 when a data or
numerical stage fails (the message names the stage).
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from pathlib import Path

import numpy as np

from . import im
from .baselines import Method, run_baseline
from .errors import IMError
from .maxnorm import DEFAULT_B, THREADS_ENV, build, default_threads
from .regression import center, fit, read_csv
from .simulation import (ALL_METHODS, DEFAULT_NS, DEFAULT_REPS, DEFAULT_SIM_B, SCENARIOS,
                         load_scenario, report, run, scenario_metadata)


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _grid(text: str) -> list[float]:
    try:
        lo, hi, num = text.split(":")
        return list(np.linspace(float(lo), float(hi), int(num)))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be START:STOP:NUM, got {text!r}") from None


def _meta(command: str, args: argparse.Namespace, **extra) -> str:
    fields = {"alpha": getattr(args, "alpha", None), "B": getattr(args, "b", None),
              "seed": args.seed, **extra}
    body = " ".join(f"{k}={v}" for k, v in fields.items() if v is not None)
    return f"# imvs {command} {body}\n"


def _add_common(p: argparse.ArgumentParser, data: bool = True, default_b: int = DEFAULT_B) -> None:
    if data:
        p.add_argument("--input", required=True, help="headered numeric CSV")
        p.add_argument("--response", required=True, help="name of the response column")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--b", type=int, default=default_b, help="Monte Carlo sample size for F")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default ${THREADS_ENV} or all cores)")
    p.add_argument("--output", default="-", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="imvs", description="Inferential-model variable selection")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("select", help="plausibility table and selected model"))
    _add_common(sub.add_parser("posi", help="simultaneous post-selection intervals"))

    p = sub.add_parser("fdist", help="dump the CDF of ||U||_inf and its quantiles")
    p.add_argument("--input")
    p.add_argument("--response")
    p.add_argument("--identity", type=int, metavar="P", help="use L = I_P instead of a data fit")
    p.add_argument("--nu", type=int, help="degrees of freedom with --identity")
    p.add_argument("--grid", type=_grid, default=_grid("0:5:51"), help="START:STOP:NUM")
    p.add_argument("--q", type=_floats, default=[0.5, 0.9, 0.95, 0.99], help="comma-separated levels")
    _add_common(p, data=False)

    p = sub.add_parser("baseline", help="AIC / BIC / lasso selections")
    _add_common(p)
    p.add_argument("--methods", default=",".join(m.value for m in Method))

    p = sub.add_parser("simulate", help="simulation study across scenarios and n")
    p.add_argument("--scenario", action="append", help="built-in label 1-6 (repeatable)")
    p.add_argument("--config", action="append", help="scenario JSON file (repeatable)")
    p.add_argument("--reps", type=int, default=DEFAULT_REPS)
    p.add_argument("--ns", type=_ints, default=list(DEFAULT_NS))
    p.add_argument("--methods", default=",".join(ALL_METHODS))
    p.add_argument("--sigma", type=float, default=None, help="override noise scale")
    p.add_argument("--out", default="sim_out", help="output directory")
    p.add_argument("--full-figures", action="store_true",
                   help="all six scenarios, 1000 reps, full n grid (hours)")
    _add_common(p, data=False, default_b=DEFAULT_SIM_B)
    return parser


def _load(args):
    data = read_csv(args.input, args.response)
    return data, fit(center(data))


def cmd_select(args, out):
    data, theta = _load(args)
    dist = build(theta.L, theta.nu, args.b, args.seed, threads=args.threads)
    table = im.plausibility_table(theta, dist)
    result = im.select(table, args.alpha)
    out.write(_meta("select", args, input=args.input, response=args.response,
                    n=data.n, p=data.p, nu=theta.nu))
    out.write("order,variable,abs_t,eta\n")
    for j, (name, t, eta) in enumerate(zip(table.names_ordered, table.abs_t_sorted, table.eta), 1):
        out.write(f"{j},{name},{t:.4f},{eta:.4f}\n")
    names = ";".join(theta.names[i] for i in table.pi[result.j_star:][::-1])
    out.write(f"# selected={names} j_star={result.j_star}\n")


def cmd_posi(args, out):
    data, theta = _load(args)
    dist = build(theta.L, theta.nu, args.b, args.seed, threads=args.threads)
    region = im.posi_region(theta, dist, args.alpha)
    out.write(_meta("posi", args, input=args.input, response=args.response, n=data.n, p=data.p))
    out.write(f"# k_alpha={region.k_alpha:.4f}\n")
    out.write("variable,beta_hat,lower,upper\n")
    for name, b, (lo, hi) in zip(theta.names, theta.beta_hat, region.beta_intervals):
        out.write(f"{name},{b:.4f},{lo:.4f},{hi:.4f}\n")


def cmd_fdist(args, out):
    if args.identity is not None:
        if args.nu is None:
            raise SystemExit("imvs fdist: --identity requires --nu")
        L, nu = np.eye(args.identity), args.nu
        source = {"identity": args.identity, "nu": nu}
    elif args.input and args.response:
        _, theta = _load(args)
        L, nu = theta.L, theta.nu
        source = {"input": args.input, "response": args.response, "nu": nu}
    else:
        raise SystemExit("imvs fdist: give --input/--response or --identity/--nu")
    dist = build(L, nu, args.b, args.seed, threads=args.threads)
    out.write(_meta("fdist", args, **source))
    out.write("c,F\n")
    for c in args.grid:
        out.write(f"{c:.4f},{dist.cdf(c):.4f}\n")
    out.write("q,quantile\n")
    for q in args.q:
        out.write(f"{q:.4f},{dist.quantile(q):.4f}\n")


def cmd_baseline(args, out):
    data, _ = _load(args)
    centered = center(data)
    out.write(_meta("baseline", args, input=args.input, response=args.response))
    out.write("method,selected,score\n")
    for name in args.methods.split(","):
        choice = run_baseline(centered, Method(name.strip()), seed=args.seed)
        sel = ";".join(data.names[i] for i in choice.selected)
        out.write(f"{choice.method.value},{sel},{choice.score:.4f}\n")


def cmd_simulate(args, out):
    if args.full_figures:
        scenarios = list(SCENARIOS.values())
        args.reps, args.ns, args.methods = DEFAULT_REPS, list(DEFAULT_NS), ",".join(ALL_METHODS)
    else:
        scenarios = [SCENARIOS[s] for s in (args.scenario or [])]
        scenarios += [load_scenario(c) for c in (args.config or [])]
        if not scenarios:
            raise SystemExit("imvs simulate: give --scenario, --config or --full-figures")
    if args.sigma is not None:
        scenarios = [s.with_sigma(args.sigma) for s in scenarios]
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    results = run(scenarios, methods, args.ns, args.reps, args.alpha, args.b, args.seed,
                  threads=args.threads)
    meta = scenario_metadata(scenarios, alpha=args.alpha, B=args.b, seed=args.seed,
                             reps=args.reps, ns=list(args.ns), methods=methods,
                             ic_search="exhaustive for p <= 20, forward stepwise otherwise",
                             design="X redrawn every replicate")
    paths = report(results, args.out, args.alpha, meta)
    for p in paths:
        out.write(f"{p}\n")


COMMANDS = {"select": cmd_select, "posi": cmd_posi, "fdist": cmd_fdist,
            "baseline": cmd_baseline, "simulate": cmd_simulate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads is None:
        args.threads = default_threads()
    if args.command != "fdist" and args.command != "simulate" and not Path(args.input).exists():
        print(f"imvs: error in data: no such file {args.input}", file=sys.stderr)
        return 1
    try:
        with contextlib.ExitStack() as stack:
            out = sys.stdout if args.output == "-" else stack.enter_context(
                open(args.output, "w", newline=""))
            COMMANDS[args.command](args, out)
    except SystemExit as exc:
        print(exc.code, file=sys.stderr)
        return 2
    except IMError as exc:
        print(f"imvs: error in {exc.stage}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"imvs: error in {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
