"""Command-line interface.

Exit codes: 0 success, 1 invalid model (validation errors, unknown target),
2 unreadable or unparsable input, 3 evaluation infeasible (oracle cap
exceeded, shared events in closed form, overlapping paths).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from . import __version__
from .ccd import ConsequenceBox, ConsequencePath, box_prob_closed, path_prob_closed, reduce_report
from .diagnostics import ERROR, has_errors
from .dsl import Model, ParseError, bundled, load, pretty_print, validate
from .errors import CCDError
from .faulttree import ft_prob_closed
from .metrics import METHODS, saidi_full
from .montecarlo import DEFAULT_SAMPLES, DEFAULT_SEED, mcs_estimate, renewal_unavailability, ttf_ttr_study
from .oracle import oracle_prob

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_INFEASIBLE = 0, 1, 2, 3

# Reference values reported for the 39-bus case study (one-year horizon).
REFERENCE_VALUES = {
    "FOR_PV": 0.9919,
    "FOR_STEAM": 38.87e-3,
    "SAIDI": 6.3728,
    "MCS_FOR_PV": 98.93e-2,
    "MCS_FOR_STEAM": 38.85e-3,
    "MCS_SAIDI": 6.3549,
}

log = logging.getLogger("ccdrel")


class Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def _open_model(path: str) -> Model:
    try:
        return load(path)
    except OSError as exc:
        raise Exit(EXIT_PARSE, f"cannot read {path}: {exc.strerror or exc}") from None
    except ParseError as exc:
        for d in exc.diagnostics:
            print(f"{path}:{d}", file=sys.stderr)
        raise Exit(EXIT_PARSE) from None


def _checked_model(path: str) -> Model:
    model = _open_model(path)
    diags = validate(model)
    for d in diags:
        if d.severity != "notice":
            print(f"{path}:{d}", file=sys.stderr)
    if has_errors(diags):
        raise Exit(EXIT_INVALID)
    return model


def _envelope(command: str, model: str, method: str, t: Optional[float]) -> dict:
    return {
        "tool": "ccdrel",
        "version": __version__,
        "command": command,
        "model": model,
        "method": method,
        "t_years": t,
        "results": [],
    }


def _kind(target) -> str:
    if isinstance(target, ConsequenceBox):
        return "consequence"
    if isinstance(target, ConsequencePath):
        return "path"
    return "fault-tree"


def evaluate(target, assign, method: str, samples: int, seed: int) -> dict:
    if method == "closed":
        if isinstance(target, ConsequenceBox):
            p = box_prob_closed(target, assign)
        elif isinstance(target, ConsequencePath):
            p = path_prob_closed(target, assign)
        else:
            p = ft_prob_closed(target, assign)
        return {"probability": p}
    if method == "oracle":
        return {"probability": oracle_prob(target, assign)}
    if method == "mcs":
        est = mcs_estimate(target, assign, n=samples, seed=seed)
        return {"probability": est.mean, "stderr": est.stderr, "ci95": list(est.ci95),
                "n": est.n, "seed": est.seed, "algorithm": est.algorithm}
    raise Exit(EXIT_INVALID, f"unknown method {method!r}")


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _table(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    cells = [list(map(str, header))] + [[_fmt(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _emit(report: dict, as_json: bool, text: str) -> None:
    if as_json:
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        print(text)


# --- commands -------------------------------------------------------------

def cmd_eval(args) -> int:
    model = _checked_model(args.model)
    try:
        target = model.target(args.target)
    except KeyError as exc:
        raise Exit(EXIT_INVALID, exc.args[0]) from None
    t = model.mission_t if args.t is None else args.t
    assign = model.assignment(t)
    res = evaluate(target, assign, args.method, args.samples, args.seed)
    res = {"target": args.target, "kind": _kind(target), **res}
    report = _envelope("eval", model.name, args.method, t)
    report["results"].append(res)
    if args.method == "mcs":
        report["seed"], report["samples"] = args.seed, args.samples
    text = f"{args.target} ({res['kind']}, {args.method}, t={t:g} y): {res['probability']:.12g}"
    if args.method == "mcs":
        text += f" +/- {res['stderr']:.3g} (n={args.samples}, seed={args.seed})"
    _emit(report, args.json, text)
    return EXIT_OK


def cmd_mcs(args) -> int:
    if args.renewal:
        if args.rate is None or args.repair is None or args.horizon is None:
            raise Exit(EXIT_INVALID, "--renewal needs --rate, --repair and --horizon")
        est = ttf_ttr_study(args.rate, args.repair, args.horizon, seed=args.seed,
                            corrected=args.mean_repair_time)
        report = _envelope("mcs", "-", "renewal", None)
        report["seed"] = args.seed
        report["renewal"] = {**est.to_dict(), "rate_per_h": args.rate, "repair": args.repair,
                             "long_run": renewal_unavailability(args.rate, args.repair,
                                                                args.mean_repair_time)}
        _emit(report, args.json,
              f"unavailability {est.unavailability:.6g} over {est.cycles} cycles "
              f"(long-run {report['renewal']['long_run']:.6g}, seed={args.seed})")
        return EXIT_OK
    if not args.model or not args.target:
        raise Exit(EXIT_INVALID, "mcs needs MODEL and --target (or --renewal)")
    args.method = "mcs"
    report_code = cmd_eval_like(args, "mcs")
    return report_code


def cmd_eval_like(args, command: str) -> int:
    model = _checked_model(args.model)
    try:
        target = model.target(args.target)
    except KeyError as exc:
        raise Exit(EXIT_INVALID, exc.args[0]) from None
    t = model.mission_t if args.t is None else args.t
    assign = model.assignment(t)
    res = {"target": args.target, "kind": _kind(target),
           **evaluate(target, assign, "mcs", args.samples, args.seed)}
    closed = None
    try:
        closed = oracle_prob(target, assign)
    except CCDError:
        pass
    report = _envelope(command, model.name, "mcs", t)
    report["seed"], report["samples"] = args.seed, args.samples
    if closed is not None:
        res["exact"] = closed
    report["results"].append(res)
    text = (f"{args.target}: {res['probability']:.6g} +/- {res['stderr']:.3g} "
            f"(n={args.samples}, seed={args.seed})")
    if closed is not None:
        text += f"; exact {closed:.6g}"
    _emit(report, args.json, text)
    return EXIT_OK


def cmd_reduce(args) -> int:
    model = _checked_model(args.model)
    base = model.merged() if args.merge else model
    merged_away = [p for p in model.paths if p not in base.paths]
    red = reduce_report(base.ccd())
    reduced = base.reduced()
    text = pretty_print(reduced)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    summary = [f"merged away {len(merged_away)} complementary path(s)"
               + (f": {', '.join(merged_away)}" if merged_away else ""),
               f"dropped {len(red.dropped_boxes)} irrelevant box(es)"]
    for cons, path, box in red.dropped_boxes:
        summary.append(f"  {cons}/{path}: {box}")
    for cons, path in red.dropped_paths:
        summary.append(f"warning: {cons}/{path} had only irrelevant boxes and was removed")
    if args.json:
        report = _envelope("reduce", model.name, "reduce", model.mission_t)
        report["reduction"] = {
            "dropped_boxes": [{"consequence": c, "path": p, "box": b}
                              for c, p, b in red.dropped_boxes],
            "dropped_paths": [{"consequence": c, "path": p} for c, p in red.dropped_paths],
            "merged_paths": merged_away,
            "out": args.out,
        }
        if not args.out:
            report["reduction"]["text"] = text
        _emit(report, True, "")
    else:
        if not args.out:
            sys.stdout.write(text)
        print("\n".join(summary), file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    model = _open_model(args.model)
    diags = validate(model)
    if args.json:
        report = _envelope("check", model.name, "static", model.mission_t)
        report["diagnostics"] = [d.to_dict() for d in diags]
        _emit(report, True, "")
    else:
        for d in diags:
            print(f"{args.model}:{d}")
        n_err = sum(d.severity == ERROR for d in diags)
        print(f"{len(diags)} diagnostic(s), {n_err} error(s)")
    return EXIT_INVALID if has_errors(diags) else EXIT_OK


def _saidi_text(rep) -> str:
    rows = [(ld.label, ld.consequence, ld.probability, ld.mttr_h, ld.customers, ld.term)
            for ld in rep.loads]
    out = [_table(rows, ["load", "consequence", "probability", "mttr_h", "customers", "term"]),
           f"SAIDI ({rep.method}, t={rep.t_years:g} y): {rep.saidi_hours:.10g} h"]
    for route, val in rep.cross_checks.items():
        out.append(f"  cross-check {route}: {val.get('saidi_hours', val.get('error'))}")
    return "\n".join(out)


def cmd_saidi(args) -> int:
    model = _checked_model(args.model)
    if not model.loads:
        raise Exit(EXIT_INVALID, "model declares no loads")
    t = model.mission_t if args.t is None else args.t
    rep = saidi_full(model.study(t), model, t, method=args.method,
                     samples=args.samples, seed=args.seed)
    report = _envelope("saidi", model.name, args.method, t)
    report["results"] = [{"target": ld.label, "kind": "load", "probability": ld.probability}
                         for ld in rep.loads]
    report["saidi"] = rep.to_dict()
    if args.method == "mcs":
        report["seed"], report["samples"] = args.seed, args.samples
    _emit(report, args.json, _saidi_text(rep))
    return EXIT_OK


def case39_report(t: float = 1.0, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> dict:
    """Every route for the bundled 39-bus study, with the reference values."""
    model = bundled("ieee39.ccd")
    assign = model.assignment(t)
    report = _envelope("case39", model.name, "all", t)
    report["seed"], report["samples"] = seed, samples
    for k, name in enumerate(("FOR_PV", "FOR_STEAM")):
        ft = model.ft(name)
        est = mcs_estimate(ft, assign, n=samples, seed=seed + 100 + k)
        report["results"].append({
            "target": name, "kind": "fault-tree",
            "probability": ft_prob_closed(ft, assign),
            "oracle": oracle_prob(ft, assign),
            "mcs": est.mean, "stderr": est.stderr,
            "reference": REFERENCE_VALUES[name],
        })
    routes = {}
    for method in ("closed", "oracle", "exactly-one", "mcs"):
        routes[method] = saidi_full(model.study(t), model, t, method=method, samples=samples,
                                    seed=seed, cross_check=False)
    for i, ld in enumerate(routes["closed"].loads):
        report["results"].append({
            "target": f"LOAD_{ld.label}", "kind": "load",
            "probability": ld.probability,
            "oracle": routes["oracle"].loads[i].probability,
            "exactly_one": routes["exactly-one"].loads[i].probability,
            "mcs": routes["mcs"].loads[i].probability,
            "stderr": routes["mcs"].loads[i].stderr,
        })
    report["saidi"] = routes["closed"].to_dict()
    report["saidi"]["cross_checks"] = {m: {"saidi_hours": r.saidi_hours}
                                       for m, r in routes.items() if m != "closed"}
    report["reference"] = dict(REFERENCE_VALUES)
    return report


def cmd_case39(args) -> int:
    report = case39_report(args.t, args.samples, args.seed)
    rows = []
    for r in report["results"]:
        rows.append((r["target"], r["probability"], r["oracle"], r.get("exactly_one"),
                     r["mcs"], r.get("reference")))
    s = report["saidi"]
    cc = s["cross_checks"]
    rows.append(("SAIDI [h]", s["saidi_hours"], cc["oracle"]["saidi_hours"],
                 cc["exactly-one"]["saidi_hours"], cc["mcs"]["saidi_hours"],
                 REFERENCE_VALUES["SAIDI"]))
    text = "\n".join([
        f"IEEE 39-bus generation study, t={args.t:g} y, MCS n={args.samples} seed={args.seed}",
        _table(rows, ["quantity", "closed", "oracle", "exactly-one", "mcs", "reference"]),
    ])
    _emit(report, args.json, text)
    return EXIT_OK


# --- entry point ----------------------------------------------------------

def _non_negative(text: str) -> float:
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive_int(text: str) -> int:
    v = int(float(text))
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ccd", description="Cause-consequence diagram reliability engine")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def stochastic(sp):
        sp.add_argument("--samples", "-n", type=_positive_int, default=DEFAULT_SAMPLES,
                        help=f"Monte-Carlo sample count (default {DEFAULT_SAMPLES})")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"PRNG seed (default {DEFAULT_SEED})")

    sp = sub.add_parser("eval", help="probability of a consequence, path or fault tree")
    sp.add_argument("model")
    sp.add_argument("--target", required=True)
    sp.add_argument("--method", choices=("closed", "oracle", "mcs"), default="closed")
    sp.add_argument("--t", type=_non_negative, help="mission time in years (default: model's)")
    stochastic(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("reduce", help="remove irrelevant decision boxes")
    sp.add_argument("model")
    sp.add_argument("--out", help="write the reduced model here (default: stdout)")
    sp.add_argument("--merge", action="store_true",
                    help="first combine complementary sibling paths (turns a full "
                         "expansion into its minimal form)")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("check", help="parse and validate a model")
    sp.add_argument("model")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("mcs", help="Monte-Carlo estimate of a target, or a TTF/TTR renewal run")
    sp.add_argument("model", nargs="?")
    sp.add_argument("--target")
    sp.add_argument("--t", type=_non_negative)
    sp.add_argument("--renewal", action="store_true", help="alternating TTF/TTR simulation")
    sp.add_argument("--rate", type=float, help="failure rate per hour (renewal)")
    sp.add_argument("--repair", type=float, help="repair parameter (renewal)")
    sp.add_argument("--horizon", type=float, help="simulated hours (renewal)")
    sp.add_argument("--mean-repair-time", action="store_true",
                    help="treat --repair as a mean repair time instead of a rate")
    stochastic(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_mcs)

    sp = sub.add_parser("saidi", help="SAIDI over the model's loads")
    sp.add_argument("model")
    sp.add_argument("--method", choices=METHODS, default="closed")
    sp.add_argument("--t", type=_non_negative)
    stochastic(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_saidi)

    sp = sub.add_parser("case39", help="IEEE 39-bus case study by every route")
    sp.add_argument("--t", type=_non_negative, default=1.0)
    stochastic(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_case39)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except Exit as exc:
        if str(exc):
            print(f"ccd: {exc}", file=sys.stderr)
        return exc.code
    except CCDError as exc:
        print(f"ccd: evaluation infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
