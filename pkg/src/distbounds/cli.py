"""Command-line front end.

Subcommands::

    distbounds bound METHOD --config FILE --t T
    distbounds aggregate --config FILE --t T [--method auto|brute|conv|iid] [--merge-tol EPS]
    distbounds repro {3,4,5,6} --out FILE [--t T] [--n-min A --n-max B --n-step S]
    distbounds verify {3,4,5,6} --n N [--t T] [--trials K] [--seed S] [--alpha A]

Exit codes: 0 success, 2 configuration or usage error, 3 bound violated by
the Monte Carlo estimate, 4 partition cell-count guard exceeded.  The default
seed for ``verify`` is read from ``DISTBOUNDS_SEED``; ``--seed`` overrides it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace
from fractions import Fraction

import jsonschema

from . import bounds, partition, scenarios
from .coords import CoordinateSpec, DiffLevel, IntervalLevel
from .errors import DomainError, InputError, ResourceError
from .montecarlo import SeedSpec, estimate_tail, verify

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_GUARD = 0, 2, 3, 4

SEED_ENV = "DISTBOUNDS_SEED"
DEFAULT_SEED = 20240229
CONFIG_PROB_TOL = 1e-9

_prob = {"type": "number", "minimum": 0, "maximum": 1}
_interval_level = {
    "type": "object",
    "properties": {"a": {"type": "number"}, "b": {"type": "number"}, "p": _prob},
    "required": ["a", "b"],
    "additionalProperties": False,
}
_diff_level = {
    "type": "object",
    "properties": {"c": {"type": "number", "minimum": 0}, "p": _prob},
    "required": ["c"],
    "additionalProperties": False,
}


def _levels_or_coords(level):
    return {
        "oneOf": [
            {"type": "array", "minItems": 1, "items": level},
            {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": level}},
        ]
    }


CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "intervals": _levels_or_coords(_interval_level),
        "diffs": _levels_or_coords(_diff_level),
        "iid": {"type": "boolean"},
        "n": {"type": "integer", "minimum": 1},
        "pA": _prob,
        "p": _prob,
    },
    "oneOf": [{"required": ["intervals"]}, {"required": ["diffs"]}],
    "additionalProperties": False,
}

BOUND_METHODS = ("hoeffding", "mcdiarmid", "combes", "cor1", "cor2", "thm1", "thm2", "envelope")


def fmt(x: float) -> str:
    """17 significant digits, scientific notation."""
    return format(float(x), ".16e")


# --- config loading -----------------------------------------------------------

def _field_path(err: jsonschema.ValidationError) -> str:
    path = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
    return "config" + path


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"config {path} is not valid JSON: {exc}") from exc
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: len(list(e.absolute_path)), reverse=True)
    if errors:
        err = errors[0]
        # oneOf failures hide the useful message in their context
        if err.context:
            err = max(err.context, key=lambda e: len(list(e.absolute_path)))
        raise InputError(f"{_field_path(err)}: {err.message}")
    return doc


def spec_from_config(doc: dict) -> CoordinateSpec:
    key = "intervals" if "intervals" in doc else "diffs"
    raw = doc[key]
    iid = bool(doc.get("iid", False))
    nested = isinstance(raw[0], list)
    if iid:
        if nested:
            if len(raw) != 1:
                raise InputError(f"config.{key}: an i.i.d. config takes one level list")
            raw = raw[0]
        if "n" not in doc:
            raise InputError("config.n: required when iid is true")
        coords = [raw]
    else:
        if "n" in doc and not nested:
            coords = [raw] * doc["n"]
        else:
            coords = raw if nested else [[lv] for lv in raw]
        if "n" in doc and len(coords) != doc["n"]:
            raise InputError(f"config.n: {doc['n']} does not match {len(coords)} coordinates")

    def level(lv, where):
        p = lv.get("p", 1.0)
        try:
            if key == "intervals":
                return IntervalLevel((lv["a"], lv["b"]), p)
            return DiffLevel(lv["c"], p)
        except InputError as exc:
            raise InputError(f"{where}: {exc}") from exc

    built = [[level(lv, f"config.{key}[{i}][{j}]") for j, lv in enumerate(c)] for i, c in enumerate(coords)]
    if iid:
        return CoordinateSpec.iid(built[0], doc["n"])
    return CoordinateSpec.from_levels(built)


def _require_hierarchy(spec: CoordinateSpec, key: str) -> None:
    for i, p in enumerate(spec.probs()):
        s = math.fsum(p)
        if abs(s - 1.0) > CONFIG_PROB_TOL:
            raise InputError(f"config.{key}[{i}]: level probabilities sum to {s!r}, expected 1")


def _normalized(spec: CoordinateSpec) -> CoordinateSpec:
    """Rescale level probabilities that pass the config tolerance to sum to exactly 1."""
    def fix(levels):
        s = math.fsum(lv.prob for lv in levels)
        if abs(s - 1.0) <= 1e-12:
            return list(levels)
        return [replace(lv, prob=lv.prob / s) for lv in levels]

    if spec.iid_flag:
        return CoordinateSpec.iid(fix(spec.shared_levels), spec.n)
    return CoordinateSpec.from_levels([fix(c) for c in spec.coordinates])


def _hierarchy_spec(doc: dict, kind: str) -> CoordinateSpec:
    spec = spec_from_config(doc)
    key = "intervals" if spec.kind == "interval" else "diffs"
    if kind is not None and spec.kind != kind:
        want = "intervals" if kind == "interval" else "diffs"
        raise InputError(f"config.{want}: required for this method")
    _require_hierarchy(spec, key)
    return _normalized(spec)


def _single_level_prob(spec: CoordinateSpec, doc: dict) -> float:
    if "pA" in doc:
        return float(doc["pA"])
    return math.prod(lv.prob for levels in spec.coordinates for lv in levels)


def compute_bound(method: str, doc: dict, t: float, agg: str = "auto", two_sided: bool = True) -> bounds.BoundReport:
    if method in ("thm1", "thm2"):
        spec = _hierarchy_spec(doc, "interval" if method == "thm1" else "diff")
        fn = bounds.theorem1_bound if method == "thm1" else bounds.theorem2_bound
        return fn(spec, t, method=agg, two_sided=two_sided)
    if method == "envelope":
        spec = _hierarchy_spec(doc, "diff")
        if not spec.iid_flag:
            raise InputError("config.iid: the envelope bound needs an i.i.d. config")
        return bounds.level_envelope_bound(spec.shared_levels, spec.n, t, two_sided=two_sided)
    want = "interval" if method in ("hoeffding", "cor1") else "diff"
    spec = spec_from_config(doc)
    if spec.kind != want:
        raise InputError(f"config.{'intervals' if want == 'interval' else 'diffs'}: required for {method}")
    env = bounds.worst_case_envelope(spec)
    if method == "hoeffding":
        return bounds.hoeffding_bound(env, t, two_sided)
    if method == "mcdiarmid":
        return bounds.mcdiarmid_bound(env, t, two_sided)
    pA = _single_level_prob(spec, doc)
    if method == "cor1":
        return bounds.corollary1_bound(env, pA, t, two_sided)
    if method == "cor2":
        return bounds.corollary2_bound(env, pA, t, two_sided)
    p = float(doc["p"]) if "p" in doc else 1.0 - pA
    return bounds.combes_bound(env, p, t, two_sided)


# --- subcommands ----------------------------------------------------------------

def cmd_bound(args, out) -> int:
    doc = load_config(args.config)
    agg = partition.BruteForce(args.guard) if args.agg == "brute" else args.agg
    rep = compute_bound(args.method, doc, args.t, agg, not args.one_sided)
    print(f"method {rep.method}", file=out)
    print(f"sided {rep.sided}", file=out)
    print(f"t {fmt(rep.t)}", file=out)
    print(f"raw {fmt(rep.raw)}", file=out)
    print(f"clamped {fmt(rep.clamped)}", file=out)
    return EXIT_OK


def cmd_aggregate(args, out) -> int:
    spec = _hierarchy_spec(load_config(args.config), None)
    if args.merge_tol is not None and args.method not in ("conv", "auto"):
        raise InputError("--merge-tol only applies to the conv method")
    method = partition.BruteForce(args.guard) if args.method == "brute" else args.method
    if args.merge_tol is not None:
        method = partition.Convolution(args.merge_tol)
    dist = partition.weight_distribution(spec, method)
    print(f"atoms {dist.size}", file=out)
    print(f"total_mass {fmt(dist.total_mass)}", file=out)
    print(f"aggregate {fmt(partition.aggregate(dist, args.t))}", file=out)
    return EXIT_OK


def _scenario(args, n: int) -> scenarios.ScenarioSpec:
    kind = f"example{args.example}"
    kw = {}
    if args.variant is not None:
        kw["variant"] = args.variant
    if getattr(args, "phi_exponent", None) is not None:
        kw["phi_exponent"] = Fraction(args.phi_exponent)
    return scenarios.ScenarioSpec(kind, n, t=args.t, general_form=args.general_form, **kw)


def write_csv(series: list[scenarios.CurveSeries], t: float) -> str:
    rows = ["n,method,t,value"]
    for s in series:
        for n, v in s.points:
            rows.append(f"{n},{s.method},{fmt(t)},{fmt(v)}")
    return "\n".join(rows) + "\n"


def cmd_repro(args, out) -> int:
    kind = f"example{args.example}"
    lo, hi, step = scenarios.DEFAULT_RANGE[kind]
    n_min = lo if args.n_min is None else args.n_min
    n_max = hi if args.n_max is None else args.n_max
    n_step = step if args.n_step is None else args.n_step
    template = _scenario(args, n_min)
    series = scenarios.sweep(template, n_min, n_max, n_step)
    text = write_csv(series, template.t)
    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {sum(len(s.points) for s in series)} rows to {args.out}", file=out)
    return EXIT_OK


def _default_seed() -> int:
    env = os.environ.get(SEED_ENV)
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"{SEED_ENV} must be an integer, got {env!r}") from exc


def cmd_verify(args, out) -> int:
    if args.trials < 1:
        raise InputError("--trials must be >= 1")
    if not 0 < args.alpha < 1:
        raise InputError("--alpha must lie in (0, 1)")
    spec = _scenario(args, args.n)
    seed = args.seed if args.seed is not None else _default_seed()
    bound = scenarios.scenario_bound(spec, args.bound_method)
    if args.bound_scale != 1.0:
        # testing hook: deliberately distort the compared bound
        bound = bounds.BoundReport.make(bound.raw * args.bound_scale, bound.method, bound.t, False)
    est = estimate_tail(spec, spec.t, args.trials, SeedSpec(seed), args.alpha, args.workers)
    verdict = verify(bound, est)
    print(f"bound {bound.method} raw {fmt(bound.raw)} clamped {fmt(bound.clamped)} ({bound.sided})", file=out)
    print(f"seed {seed}", file=out)
    print(f"trials {est.trials}", file=out)
    print(f"hits {est.hits}", file=out)
    print(f"point {fmt(est.point)}", file=out)
    print(f"ci_low {fmt(est.ci_low)}", file=out)
    print(f"ci_high {fmt(est.ci_high)}", file=out)
    print(f"confidence {fmt(est.confidence)}", file=out)
    print(f"verdict {verdict.status}", file=out)
    return EXIT_VIOLATION if verdict.status == "Violation" else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="distbounds", description="Distribution-dependent concentration bounds.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="evaluate one bound from a JSON config")
    p.add_argument("method", choices=BOUND_METHODS)
    p.add_argument("--config", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--agg", default="auto", choices=("auto", "brute", "conv", "iid"))
    p.add_argument("--guard", type=int, default=partition.CELL_GUARD)
    p.add_argument("--one-sided", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("aggregate", help="summarise the weight-sum distribution of a hierarchy config")
    p.add_argument("--config", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--method", default="auto", choices=("auto", "brute", "conv", "iid"))
    p.add_argument("--merge-tol", type=float, default=None)
    p.add_argument("--guard", type=int, default=partition.CELL_GUARD)
    p.set_defaults(func=cmd_aggregate)

    for name, helptext in (("repro", "write example curves as CSV"), ("verify", "Monte Carlo check of an example bound")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("example", type=int, choices=(3, 4, 5, 6))
        p.add_argument("--t", type=float, default=None)
        p.add_argument("--variant", default=None)
        p.add_argument("--general-form", action="store_true")
        p.add_argument("--phi-exponent", default=None)
        if name == "repro":
            p.add_argument("--n-min", type=int)
            p.add_argument("--n-max", type=int)
            p.add_argument("--n-step", type=int)
            p.add_argument("--out", required=True)
            p.set_defaults(func=cmd_repro)
        else:
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--trials", type=int, default=100_000)
            p.add_argument("--seed", type=int, default=None)
            p.add_argument("--alpha", type=float, default=0.001)
            p.add_argument("--workers", type=int, default=1)
            p.add_argument("--bound-method", default=None)
            p.add_argument("--bound-scale", type=float, default=1.0, help=argparse.SUPPRESS)
            p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (InputError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
