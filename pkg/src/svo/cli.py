"""Command-line frontend: ``svo validate|check|multiplier|verify|fuzz|report``.

Exit codes: 0 pass, 1 asserted failure (or a negative verdict for
``check``/``multiplier``), 2 usage or IO error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .criteria import check_l_wmin, check_v_wmin
from .harness import (
    DEFAULT_EPSILONS,
    FuzzConfig,
    canon,
    emit_report,
    exit_status,
    fuzz_instances,
    load_report,
    verify_suite,
)
from .instance import InstanceError, load_instance
from .lagrange import find_multiplier, slackness_report
from .rational import q


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load(path: str, mode: str | None = None):
    inst = load_instance(_read(path), name=path)
    return inst.with_mode(mode) if mode else inst


def _rational(text: str):
    try:
        return q(text)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"not a rational: {text!r}") from exc


def _dump(obj) -> None:
    print(json.dumps(canon(obj), indent=1, sort_keys=True))


def cmd_validate(args) -> int:
    inst = _load(args.file)
    print(
        f"valid: m={inst.y_dim} p={inst.z_dim} labels={len(inst.labels)} "
        f"mode={inst.mode} dom_f={len(inst.dom_f)}"
    )
    return 0


def cmd_check(args) -> int:
    inst = _load(args.file, args.mode)
    eps = _rational(args.epsilon)
    if args.criterion == "v":
        verdict = check_v_wmin(inst, args.x0, eps)
    else:
        probes = []
        if args.probes:
            try:
                probes = [tuple(q(c) for c in p) for p in json.loads(_read(args.probes))]
            except (ValueError, TypeError) as exc:
                raise UsageError(f"bad probe file {args.probes}: {exc}") from exc
        verdict = check_l_wmin(inst, args.x0, eps, probes=probes)
    doc = {
        "criterion": f"{args.criterion}-wmin",
        "x0": args.x0,
        "epsilon": eps,
        "mode": inst.mode,
        "holds": verdict.holds,
        "exact": verdict.exact,
        "certifying_y0": verdict.certifying_y0,
    }
    v = verdict.violation
    if v is not None:
        doc["violation"] = {"y0": v.y0, "candidate": v.candidate, "point": v.point, "reason": v.reason}
    _dump(doc)
    return 0 if verdict.holds else 1


def cmd_multiplier(args) -> int:
    inst = _load(args.file, args.mode)
    eps = _rational(args.epsilon)
    cert = find_multiplier(inst, args.x0, eps)
    if cert is None:
        _dump({"x0": args.x0, "epsilon": eps, "mode": inst.mode, "certificate": None})
        return 1
    rep = slackness_report(cert, inst, args.x0)
    _dump(
        {
            "x0": args.x0,
            "epsilon": eps,
            "mode": inst.mode,
            "certificate": {
                "y0": cert.y0,
                "z0": cert.z0,
                "y_star": cert.y_star,
                "z_star": cert.z_star,
                "normalization": cert.normalization,
                "inf_Q": cert.inf_Q_value,
                "min_slack": rep.min_slack,
            },
        }
    )
    return 0


def _epsilons(text: str | None):
    if not text:
        return DEFAULT_EPSILONS
    return tuple(_rational(t.strip()) for t in text.split(",") if t.strip())


def cmd_verify(args) -> int:
    inst = _load(args.file, args.mode)
    results = verify_suite(inst, _epsilons(args.epsilons), instance_ref=args.file)
    sys.stdout.write(emit_report(results, args.format))
    return exit_status(results)


def cmd_fuzz(args) -> int:
    try:
        config = FuzzConfig(
            seed=args.seed,
            count=args.count,
            plant_slater=args.plant_slater,
            mode=args.mode,
            epsilons=_epsilons(args.epsilons),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    results, archived = [], []
    for bundle in fuzz_instances(config, args.out):
        results.extend(bundle.results)
        archived.extend((path, bundle.failed) for path in bundle.archived)
    sys.stdout.write(emit_report(results, args.format))
    for path, failed in archived:
        print(f"{'failure' if failed else 'counterexample'} archived: {path}", file=sys.stderr)
    return exit_status(results)


def cmd_report(args) -> int:
    try:
        results = load_report(_read(args.results))
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad report {args.results}: {exc}") from exc
    sys.stdout.write(emit_report(results, args.format))
    return exit_status(results)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="svo", description="Exact multiplier rules for set-valued problems.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse and validate an instance file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    mode = dict(choices=("discrete", "convexified"), default=None)

    s = sub.add_parser("check", help="decide eps-v-wmin or eps-l-wmin for a label")
    s.add_argument("file")
    s.add_argument("--x0", required=True)
    s.add_argument("--criterion", choices=("v", "l"), required=True)
    s.add_argument("--epsilon", default="0")
    s.add_argument("--mode", **mode)
    s.add_argument("--probes", help="JSON list of weight vectors (convexified lattice check)")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("multiplier", help="search a multiplier certificate")
    s.add_argument("file")
    s.add_argument("--x0", required=True)
    s.add_argument("--epsilon", default="0")
    s.add_argument("--mode", **mode)
    s.set_defaults(func=cmd_multiplier)

    fmt = dict(choices=("human", "machine"), default="human")

    s = sub.add_parser("verify", help="run every property on one instance")
    s.add_argument("file")
    s.add_argument("--epsilons", help="comma-separated rationals (default 0,1/4,1)")
    s.add_argument("--mode", **mode)
    s.add_argument("--format", **fmt)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("fuzz", help="generate seeded instances and verify them")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--plant-slater", action="store_true")
    s.add_argument("--mode", choices=("discrete", "convexified", "both"), default="both")
    s.add_argument("--epsilons")
    s.add_argument("--out", help="directory for archived counterexamples")
    s.add_argument("--format", **fmt)
    s.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("report", help="re-emit a machine report")
    s.add_argument("results")
    s.add_argument("--format", **fmt)
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (UsageError, InstanceError, OSError) as exc:
        print(f"svo: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
