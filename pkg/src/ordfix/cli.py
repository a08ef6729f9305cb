"""Command-line front end.

Every command prints one JSON report on stdout. Exit codes: 0 when
everything checked passes, 1 when a checked property fails, 2 on input or
usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .compfn import ScalarGauge, UniformFamily
from .contract import VARIANTS, ContractionVariant, check_contraction, check_monotone, progressive_sets
from .errors import GenerationError, InputError, OrdfixError, PreconditionError
from .instances import (
    GeneratorParams,
    gen_theorem_instance,
    get_instance,
    instance_to_json,
    parse_instance,
)
from .maia import build_maia_metric, verify_maia_properties
from .oracle import THEOREMS, canonical_theorem, theorem_suite
from .picard import run_picard, trace_to_csv
from .spaces import FiniteSpace, check_axioms, check_bounds_and_directedness

__all__ = ["main", "build_parser", "run_command", "parse_instance", "falsify"]

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
VARIANT_LABELS = {label: tag for tag, label in VARIANTS.items()}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser():
    p = _Parser(prog="ordfix", description="Fixed-point checks on finite ordered metric spaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def source(sp, required=True):
        g = sp.add_mutually_exclusive_group(required=required)
        g.add_argument("--instance", metavar="FILE", help="instance JSON file")
        g.add_argument("--library", metavar="NAME", help="built-in instance name")
        g.add_argument("--gen", metavar="PARAMS", help='generator parameters, e.g. "n=6,target=T4"')

    def common(sp):
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--tol", type=float, default=None)

    c = sub.add_parser("check", help="axioms, bounds, monotonicity, or one contraction variant")
    source(c)
    common(c)
    c.add_argument("--variant", metavar="TAG")
    c.add_argument("--alpha", type=float)
    c.add_argument("--gauge", metavar="JSON")

    s = sub.add_parser("solve", help="Picard iteration with a trace")
    source(s)
    common(s)
    s.add_argument("--start", type=int, default=None)
    s.add_argument("--gauge", metavar="JSON")
    s.add_argument("--alpha", type=float)

    m = sub.add_parser("maia", help="build and verify the series metric")
    source(m)
    common(m)
    m.add_argument("--alpha", type=float)
    m.add_argument("--lambda", dest="lam", type=float)

    t = sub.add_parser("suite", help="theorem suite verdict")
    source(t)
    common(t)
    t.add_argument("--theorem", required=True)
    t.add_argument("--alpha", type=float)
    t.add_argument("--gauge", metavar="JSON")
    t.add_argument("--drop", action="append", default=[])

    f = sub.add_parser("falsify", help="randomised counterexample search")
    common(f)
    f.add_argument("--theorem", required=True)
    f.add_argument("--drop", action="append", default=[])
    f.add_argument("--trials", type=int, default=1000)
    f.add_argument("--gen", metavar="PARAMS", default="")

    g = sub.add_parser("gen", help="generate an instance")
    common(g)
    g.add_argument("--gen", metavar="PARAMS", default="")
    g.add_argument("--theorem")
    return p


def _load(args):
    if getattr(args, "instance", None):
        path = Path(args.instance)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        return parse_instance(text, name=path.stem)
    if getattr(args, "library", None):
        return get_instance(args.library)
    params = GeneratorParams.from_string(args.gen)
    if args.seed is not None:
        params = replace(params, seed=args.seed)
    return gen_theorem_instance(params)


def _gauge(text):
    try:
        return ScalarGauge.from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InputError(f"--gauge is not JSON: {exc.msg}") from None


def _overrides(spec, args):
    kw = {}
    if getattr(args, "alpha", None) is not None:
        kw["alpha"] = args.alpha
    if getattr(args, "gauge", None):
        kw["phi"] = _gauge(args.gauge)
    return replace(spec, **kw) if kw else spec


def _emit(report, args):
    text = json.dumps(report, indent=2, default=_default)
    print(text)
    return text


def _default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (set, frozenset, tuple)):
        return sorted(o) if isinstance(o, (set, frozenset)) else list(o)
    return repr(o)


def _write(path, text):
    Path(path).write_text(text)


def cmd_check(args):
    spec = _overrides(_load(args), args)
    space = spec.space
    if args.variant:
        variant = _variant(args.variant, spec)
        rep = check_contraction(space, variant, slack=args.tol or 0.0)
        out = {"instance": spec.name, "contraction": rep.to_json()}
        ok = rep.holds
    else:
        if not isinstance(space, FiniteSpace):
            raise InputError(f"{spec.name} is analytic; only --variant checks apply")
        axioms = {}
        ok = True
        for mode in spec.modes:
            r = check_axioms(space, mode)
            axioms[mode] = {"ok": r.ok, "results": r.results, "witnesses": {k: list(v) for k, v in r.witnesses.items()}}
            ok = ok and r.ok
        b = check_bounds_and_directedness(space)
        out = {
            "instance": spec.name,
            "axioms": axioms,
            "bounds": {"a05": b.a05, "d03": b.d03, "d04": b.d04, "linear": b.linear},
        }
        if space.has_selfmap:
            prog = progressive_sets(space)
            out["progressive"] = {"leq": sorted(prog.leq), "comp": sorted(prog.comp)}
            for mode in ("leq", "comparability"):
                r = check_monotone(space, mode)
                out[f"monotone_{mode}"] = {"increasing": r.increasing, "decreasing": r.decreasing}
    text = _emit(out, args)
    if args.out:
        _write(args.out, text)
    return EXIT_OK if ok else EXIT_FAIL


def _variant(tag, spec):
    name = VARIANT_LABELS.get(tag, tag)
    if name not in VARIANTS:
        raise InputError(f"unknown variant {tag!r}; expected one of {sorted(VARIANTS)}")
    if name in ("order-linear", "plain-linear"):
        if spec.alpha is None:
            raise InputError(f"variant {name} needs --alpha")
        return ContractionVariant(name, alpha=spec.alpha)
    if name in ("eM-order", "eM-plain", "phi-order"):
        if spec.phi is None:
            raise InputError(f"variant {name} needs --gauge")
        return ContractionVariant(name, gauge=spec.phi, metric=spec.metric)
    if spec.family is None:
        if name == "iterative-uniform" and spec.phi is not None:
            return ContractionVariant(name, family=UniformFamily((1,) * spec.space.n, spec.phi))
        raise InputError(f"variant {name} needs a gauge family in the instance")
    return ContractionVariant(name, family=spec.family)


def cmd_solve(args):
    spec = _overrides(_load(args), args)
    space = spec.space
    if not space.has_selfmap:
        raise InputError("instance has no selfmap")
    starts = [args.start] if args.start is not None else list(space.points)
    if isinstance(space, FiniteSpace):
        for s in starts:
            if not 0 <= s < space.n:
                raise InputError(f"--start {s} out of range 0..{space.n - 1}")
    phi = spec.phi
    if phi is None and args.alpha is not None:
        phi = ScalarGauge.linear(args.alpha)
    results = [run_picard(space, s, phi=phi, tol=args.tol or 0.0) for s in starts]
    out = {"instance": spec.name, "results": [r.to_json() for r in results]}
    _emit(out, args)
    if args.out:
        if len(results) == 1:
            _write(args.out, trace_to_csv(results[0].trace))
        else:
            _write(args.out, "".join(
                trace_to_csv(r.trace) if i == 0 else trace_to_csv(r.trace).split("\n", 1)[1]
                for i, r in enumerate(results)))
    return EXIT_OK if all(r.converged for r in results) else EXIT_FAIL


def cmd_maia(args):
    spec = _overrides(_load(args), args)
    if spec.alpha is None:
        raise InputError("maia needs --alpha (or an instance carrying alpha)")
    try:
        dm = build_maia_metric(spec.space, spec.alpha, args.lam, tol=args.tol or 1e-9)
    except PreconditionError as exc:
        _emit({"instance": spec.name, "precondition_failed": exc.hypothesis, "detail": str(exc)}, args)
        return EXIT_FAIL
    rep = verify_maia_properties(dm)
    out = {"instance": spec.name, "metric": dm.to_json(), "properties": rep.to_json()}
    text = _emit(out, args)
    if args.out:
        _write(args.out, text)
    return EXIT_OK if rep.ok else EXIT_FAIL


def _suite_params(spec, theorem, slack):
    params = spec.suite_params(slack=slack)
    if theorem == "T9" and params.family is None and params.phi is not None:
        params = replace(params, family=UniformFamily((1,) * spec.space.n, params.phi))
    if theorem == "T3-Maia" and params.metric is None and spec.alpha is not None:
        dm = build_maia_metric(spec.space, spec.alpha)
        params = replace(params, metric=dm, mu=dm.mu)
    return params


def cmd_suite(args):
    spec = _overrides(_load(args), args)
    theorem = canonical_theorem(args.theorem)
    try:
        params = _suite_params(spec, theorem, args.tol or 0.0)
    except PreconditionError as exc:
        _emit({"instance": spec.name, "theorem": theorem, "precondition_failed": exc.hypothesis}, args)
        return EXIT_FAIL
    verdict = theorem_suite(spec.space, theorem, params, drop=args.drop)
    out = {"instance": spec.name, **verdict.to_json()}
    text = _emit(out, args)
    if args.out:
        _write(args.out, text)
    ok = verdict.hypotheses_hold and verdict.conclusions_hold
    return EXIT_OK if ok else EXIT_FAIL


def falsify(theorem, drop=(), trials=1000, seed=0, base=None):
    """Search generated instances for hypotheses-hold-but-conclusions-fail.

    Trial ``i`` uses seed ``seed + i``; the lowest counterexample trial wins.
    Returns ``(trial, spec, verdict)`` or None.
    """
    theorem = canonical_theorem(theorem)
    base = base or GeneratorParams(target=theorem)
    base = replace(base, target=theorem, drop=tuple(drop))
    for i in range(trials):
        params = replace(base, seed=seed + i)
        try:
            spec = gen_theorem_instance(params)
        except GenerationError:
            continue
        verdict = theorem_suite(spec.space, theorem, spec.suite_params(), drop=drop)
        if verdict.counterexample:
            return i, spec, verdict
    return None


def cmd_falsify(args):
    theorem = canonical_theorem(args.theorem)
    hyps = THEOREMS[theorem][0]
    for h in args.drop:
        if h not in hyps:
            raise InputError(f"--drop {h}: not a hypothesis of {theorem} ({', '.join(hyps)})")
    if args.trials < 1:
        raise InputError("--trials must be >= 1")
    base = GeneratorParams.from_string(args.gen) if args.gen else GeneratorParams(target=theorem)
    found = falsify(theorem, args.drop, args.trials, args.seed or 0, base)
    out = {"theorem": theorem, "dropped": args.drop, "trials": args.trials, "seed": args.seed or 0}
    if found is None:
        out["counterexample"] = None
    else:
        i, spec, verdict = found
        out["counterexample"] = {"trial": i, "instance": instance_to_json(spec), "verdict": verdict.to_json()}
    text = _emit(out, args)
    if args.out:
        _write(args.out, text)
    if args.drop:
        return EXIT_OK if found is not None else EXIT_FAIL
    return EXIT_OK if found is None else EXIT_FAIL


def cmd_gen(args):
    params = GeneratorParams.from_string(args.gen) if args.gen else GeneratorParams()
    if args.theorem:
        params = replace(params, target=canonical_theorem(args.theorem))
    if args.seed is not None:
        params = replace(params, seed=args.seed)
    spec = gen_theorem_instance(params)
    text = _emit(instance_to_json(spec), args)
    if args.out:
        _write(args.out, text)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "solve": cmd_solve,
    "maia": cmd_maia,
    "suite": cmd_suite,
    "falsify": cmd_falsify,
    "gen": cmd_gen,
}


def run_command(argv):
    """Parse ``argv`` and dispatch; returns the exit status."""
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"ordfix: usage error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, GenerationError) as exc:
        print(f"ordfix: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OrdfixError as exc:
        print(f"ordfix: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
