"""Command-line driver: file loading, checkers, seeded suites and report emission."""

import argparse
import json
import os
import sys

from ..errors import BInftyError, InjectivityRequired, ParseError, TruncationUnsound
from ..hochschild import (AlgebraMorphism, AlgebraPresentation, HochschildComplex,
                          cohomology_compare, cohomology_dims, diagram_algebra, hochschild_binfty,
                          validate_algebra, validate_morphism, verify_tau_morphism)
from ..kernel import generate_probes, verify_binfty
from ..report import SCHEMA_VERSION, Report
from .fileformat import load_file, parse_files
from .suites import (SUITES, Config, _merge, cobar_algebra_check, extension_algebra, morphism_mc,
                     run_suite)

COMMANDS = ("validate", "hochschild", "diagram", "tau-check", "mc-check", "extend-check",
            "cobar-check", "cohomology-compare", "proptest")
SEED_ENV = "BINFTY_SEED"


class UsageError(BInftyError):
    pass


def parse_degrees(text):
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            a, b = int(a), int(b)
        else:
            a = b = int(text)
    except ValueError:
        raise UsageError(f"--degrees expects a..b, got {text!r}") from None
    if a > b:
        raise UsageError(f"empty degree window {text!r}")
    return list(range(a, b + 1))


def build_parser():
    p = argparse.ArgumentParser(prog="binfty", description="Check B-infinity identities exactly.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("files", nargs="*")
    p.add_argument("--arity", type=int, default=4, help="arity cutoff N")
    p.add_argument("--weight", type=int, default=3, help="cobar weight cutoff P")
    p.add_argument("--filtration", type=int, default=3, help="filtration cutoff F")
    p.add_argument("--degrees", default="0..2", help="cohomology window a..b")
    p.add_argument("--samples", type=int, default=25)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--suite", default="all", choices=sorted(SUITES) + ["all"])
    p.add_argument("--format", default="text", choices=("text", "machine"))
    p.add_argument("--out", default=None)
    return p


def _one(files, kind, command):
    if len(files) != 1:
        raise UsageError(f"{command} takes exactly one file")
    obj = load_file(files[0])
    if not isinstance(obj, kind):
        want = "an algebra" if kind is AlgebraPresentation else "a morphism"
        raise UsageError(f"{command} needs {want} file")
    return obj


def _validate(files, cfg):
    if not files:
        raise UsageError("validate needs at least one file")
    report = Report("validate", seed=cfg.seed)
    for obj in parse_files(files, validate=False):
        if isinstance(obj, AlgebraMorphism):
            _merge(report, validate_algebra(obj.dom), obj.dom.name)
            _merge(report, validate_algebra(obj.cod), obj.cod.name)
            _merge(report, validate_morphism(obj), obj.name)
        else:
            _merge(report, validate_algebra(obj), obj.name)
            report.data[f"{obj.name}: dimension"] = len(obj.labels)
    return report


def _hochschild(files, cfg):
    p = _one(files, AlgebraPresentation, "hochschild")
    report = Report(f"hochschild {p.name}", cfg.cutoffs("N"), cfg.seed)
    B = hochschild_binfty(p, cfg.N)
    pr = generate_probes(B, cfg.N, samples=cfg.samples, seed=cfg.seed, budget_slack=4)
    _merge(report, verify_binfty(B, pr))
    cx = HochschildComplex(p, cfg.N)
    sound = [n for n in cfg.degrees if all(cx.exact(m) for m in (n - 1, n, n + 1))]
    report.data["HH"] = {str(n): d for n, d in cohomology_dims(cx, sound).items()}
    dropped = [n for n in cfg.degrees if n not in sound]
    if dropped:
        report.data["HH omitted (beyond the arity cutoff)"] = dropped
    return report


def _diagram(files, cfg):
    f = _one(files, AlgebraMorphism, "diagram")
    D = diagram_algebra(f)
    report = validate_algebra(D)
    report.suite = f"diagram {f.name}"
    report.data["dimension"] = len(D.labels)
    report.data["basis"] = list(D.labels)
    return report


def _tau(files, cfg):
    f = _one(files, AlgebraMorphism, "tau-check")
    return verify_tau_morphism(f, cfg.N, cfg.degrees, cfg.samples, cfg.seed,
                               Report(f"tau {f.name}", cfg.cutoffs("N"), cfg.seed))


def _mc(files, cfg):
    f = _one(files, AlgebraMorphism, "mc-check")
    report = Report(f"mc {f.name}", cfg.cutoffs("N", "P", "F"), cfg.seed)
    return morphism_mc(f, cfg.N, cfg.P, cfg.F, cfg.samples, cfg.seed, report, deformed=True)


def _extend(files, cfg):
    p = _one(files, AlgebraPresentation, "extend-check")
    report = Report(f"extensions {p.name}", cfg.cutoffs("N"), cfg.seed)
    return extension_algebra(p, cfg.N, cfg.samples, cfg.seed, report)


def _cobar(files, cfg):
    p = _one(files, AlgebraPresentation, "cobar-check")
    report = Report(f"cobar {p.name}", cfg.cutoffs("P"), cfg.seed)
    return cobar_algebra_check(p, cfg.P, cfg.samples, cfg.seed, report)


def _compare(files, cfg):
    f = _one(files, AlgebraMorphism, "cohomology-compare")
    return cohomology_compare(f, cfg.degrees, cfg.N)


def _proptest(files, cfg, suite):
    if files:
        raise UsageError("proptest runs on the shipped catalog and takes no files")
    return run_suite(suite, cfg)


HANDLERS = {"validate": _validate, "hochschild": _hochschild, "diagram": _diagram,
            "tau-check": _tau, "mc-check": _mc, "extend-check": _extend, "cobar-check": _cobar,
            "cohomology-compare": _compare}


def emit_report(report, fmt="text"):
    """Text or machine (schema-versioned, key-sorted JSON) rendering of a report."""
    if fmt == "machine":
        body = report.to_machine() if isinstance(report, Report) else report
        return json.dumps(body, sort_keys=True, indent=2, ensure_ascii=False, default=str) + "\n"
    if isinstance(report, Report):
        return report.render() + "\n"
    return f"error: {report['error']['message']}\n"


def _error_report(command, exc):
    return {"schema_version": SCHEMA_VERSION, "suite": command, "status": "error",
            "error": {"type": type(exc).__name__, "message": str(exc)}}


def run_command(argv):
    """Run one command; returns (report or error dict, exit code, rendering)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        if not e.code:  # --help
            return {}, 0, ""
        err = _error_report("usage", UsageError("invalid command line (see --help)"))
        return err, 2 if e.code else 0, emit_report(err)
    seed = args.seed
    seed_note = None
    if seed is None:
        env = os.environ.get(SEED_ENV)
        seed = int(env) if env and env.lstrip("-").isdigit() else 1
        if env:
            seed_note = f"{SEED_ENV}={env}"
    try:
        cfg = Config(args.arity, args.weight, args.filtration, parse_degrees(args.degrees),
                     args.samples, seed)
        if args.command == "proptest":
            report = _proptest(args.files, cfg, args.suite)
        else:
            report = HANDLERS[args.command](args.files, cfg)
    except (ParseError, UsageError, TruncationUnsound, InjectivityRequired, BInftyError) as e:
        err = _error_report(args.command, e)
        return err, 2, emit_report(err, args.format)
    if seed_note:
        report.data["seed_source"] = seed_note
    code = 0 if report.ok else 1
    return report, code, emit_report(report, args.format)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    report, code, text = run_command(argv)
    if not text:  # --help already printed by argparse
        return code
    lenient = argparse.ArgumentParser(add_help=False)
    lenient.add_argument("--out", default=None)
    out = lenient.parse_known_args(argv)[0].out
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        if isinstance(report, dict):
            sys.stderr.write(emit_report(report))
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
