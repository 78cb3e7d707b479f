"""Command-line front end.

Every command prints (or writes with ``--out``) one JSON report::

    {"command": ..., "args": {...}, "input_digest": ..., "result": {...},
     "checks": {...}, "ok": true}

Exit status: 0 on success, 1 when a postcondition or validation check
fails, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import __version__
from .decomp import doob_meyer, rao, riesz, stricker_projection
from .doleans import doleans_of, jordan, total_variation
from .errors import NotAdaptedError, PreconditionError, QuasimartError, SpaceError
from .process import classify, conditional_variation, d_variation, is_natural, q_norm
from .rational import format_rational
from .scenario import (
    Scenario,
    ScenarioError,
    digest,
    dump_process,
    load_scenario,
    scenario_text,
)
from .space import Cut
from .verify import (
    KINDS,
    GenParams,
    brute_force_q_norm,
    gen_process,
    gen_space,
    gen_subfiltration,
    run_suite,
)

FAIL, USAGE = 1, 2


class UsageError(QuasimartError):
    pass


def _rv(values):
    return [format_rational(v) for v in values]


def _part(X):
    return {"slices": dump_process(X), "flags": classify(X).as_dict()}


def _require(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for {args.command}")
    return value


def _scenario(args):
    return load_scenario(_require(args, "scenario"))


def _process(args, scenario):
    return scenario.process(_require(args, "process"))


def _cut(args, space):
    cut = Cut.parse(_require(args, "cut"))
    space.cut_positions(cut)
    return cut


# -- commands: each returns (input digest or None, result, checks) ------


def cmd_validate(args):
    try:
        scenario = _scenario(args)
    except (SpaceError, NotAdaptedError) as exc:
        violations = exc.violations if isinstance(exc, SpaceError) else [str(exc)]
        return None, {"violations": violations}, {"valid": False}
    result = {
        "violations": [],
        "outcomes": scenario.space.size,
        "indices": scenario.space.horizon,
        "processes": sorted(scenario.processes),
        "subfiltrations": sorted(scenario.subfiltrations),
    }
    return digest(scenario), result, {"valid": True}


def cmd_variation(args):
    scenario = _scenario(args)
    X = _process(args, scenario)
    cut = _cut(args, scenario.space)
    v = d_variation(X, cut)
    first = cut.labels[0]
    ends = (first, cut.labels[-1]) if len(cut) > 1 else cut.labels
    cond = conditional_variation(X, cut, first)
    result = {
        "process": args.process,
        "cut": list(cut.labels),
        "variation": _rv(v),
        "expected_variation": format_rational(scenario.space.expect(v)),
        "conditional_variation": _rv(cond),
    }
    dominated = all(a <= b for a, b in zip(d_variation(X, ends), cond))
    return digest(scenario), result, {"dominates_endpoint_variation": dominated}


def cmd_norm(args):
    scenario = _scenario(args)
    X = _process(args, scenario)
    value = q_norm(X)
    result = {"process": args.process, "value": format_rational(value)}
    checks = {}
    if args.brute_force:
        bf, cut = brute_force_q_norm(X)
        result["value"] = format_rational(bf)
        result["argmax"] = list(cut.labels)
        checks["fast_path_matches_brute_force"] = bf == value
    checks["isometry"] = total_variation(doleans_of(X)) == value
    return digest(scenario), result, checks


def cmd_measure(args):
    scenario = _scenario(args)
    X = _process(args, scenario)
    x = doleans_of(X)
    result = {
        "process": args.process,
        "atoms": x.to_records(),
        "total_variation": format_rational(total_variation(x)),
        "mass": format_rational(x.mass),
    }
    checks = {
        "isometry": total_variation(x) == q_norm(X),
        "positivity_matches_supermartingale": x.is_nonnegative() == classify(X).supermartingale,
    }
    return digest(scenario), result, checks


def cmd_jordan(args):
    scenario = _scenario(args)
    X = _process(args, scenario)
    x = doleans_of(X)
    pos, neg = jordan(x)
    result = {
        "process": args.process,
        "positive": pos.to_records(),
        "negative": neg.to_records(),
    }
    checks = {
        "difference_reconstructs_measure": pos - neg == x,
        "masses_add_to_total_variation": pos.mass + neg.mass == total_variation(x),
        "parts_nonnegative": pos.is_nonnegative() and neg.is_nonnegative(),
    }
    return digest(scenario), result, checks


def cmd_riesz(args):
    scenario = _scenario(args)
    X = _process(args, scenario)
    dec = riesz(X)
    result = {
        "process": args.process,
        "input": _part(X),
        "martingale": _part(dec.martingale),
        "quasi_potential": _part(dec.quasi_potential),
    }
    return digest(scenario), result, dec.checks(X)


def cmd_rao(args):
    scenario = _scenario(args)
    X = _process(args, scenario)
    dec = rao(X)
    result = {
        "process": args.process,
        "input": _part(X),
        "pos_part": _part(dec.pos_part),
        "neg_part": _part(dec.neg_part),
        "neg_part_is_zero": all(v == 0 for row in dec.neg_part.values for v in row),
        "norm_certificate": dec.certificate_text,
    }
    return digest(scenario), result, dec.checks(X)


def cmd_doob_meyer(args):
    scenario = _scenario(args)
    X = _process(args, scenario)
    c = classify(X)
    result = {"process": args.process, "input": _part(X)}
    checks = {}
    target = X
    if not c.potential:
        if not (c.positive and c.supermartingale):
            missing = "positive" if not c.positive else "supermartingale"
            raise PreconditionError(
                f"doob-meyer needs a positive supermartingale; {args.process} is not {missing}"
            )
        dec = riesz(X)
        result["martingale"] = _part(dec.martingale)
        checks.update(dec.checks(X))
        target = dec.quasi_potential
    result["potential"] = _part(target)
    dm = doob_meyer(target)
    result["terminal"] = _rv(dm.terminal)
    result["compensator"] = _part(dm.compensator)
    checks.update(dm.checks(target))
    trials = args.trials if args.trials is not None else 64
    nat = is_natural(dm.compensator, trials=trials, seed=args.seed)
    checks["natural_integral_identity"] = nat.natural and nat.mismatches == 0
    return digest(scenario), result, checks


def cmd_project(args):
    scenario = _scenario(args)
    X = _process(args, scenario)
    G = scenario.subfiltration(_require(args, "subfiltration"))
    XG = stricker_projection(X, G)
    before, after = q_norm(X), q_norm(XG)
    result = {
        "process": args.process,
        "subfiltration": args.subfiltration,
        "projection": {"slices": dump_process(XG), "flags": classify(XG).as_dict()},
        "q_norm_before": format_rational(before),
        "q_norm_after": format_rational(after),
    }
    return digest(scenario), result, {
        "adapted_to_subfiltration": XG.space == G,
        "norm_contracts": after <= before,
    }


def _params(args, default_outcomes, default_indices):
    return GenParams(
        seed=args.seed,
        num_outcomes=args.outcomes if args.outcomes is not None else default_outcomes,
        num_indices=args.indices if args.indices is not None else default_indices,
    )


def cmd_check(args):
    p = _params(args, 6, 5)
    trials = args.trials if args.trials is not None else 100
    report = run_suite(p, trials, fixtures=args.fixtures)
    result = {
        "seed": p.seed,
        "trials": trials,
        "max_outcomes": p.num_outcomes,
        "max_indices": p.num_indices,
        "fixtures": args.fixtures,
        **report.to_dict(),
    }
    return None, result, {"all_invariants_hold": report.ok}


def scenario_from_params(p):
    space = gen_space(p)
    return Scenario(
        space,
        {kind: gen_process(p, kind, space) for kind in KINDS},
        {"G": gen_subfiltration(p, space)},
    )


def cmd_gen(args):
    p = _params(args, 4, 3)
    scenario = scenario_from_params(p)
    text = scenario_text(scenario)
    if args.out is None:
        sys.stdout.write(text)
        return None
    _write_atomic(args.out, text)
    return None


COMMANDS = {
    "validate": cmd_validate,
    "variation": cmd_variation,
    "norm": cmd_norm,
    "measure": cmd_measure,
    "jordan": cmd_jordan,
    "riesz": cmd_riesz,
    "rao": cmd_rao,
    "doob-meyer": cmd_doob_meyer,
    "project": cmd_project,
    "check": cmd_check,
    "gen": cmd_gen,
}


def _write_atomic(path, text):
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".quasimart-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quasimart",
        description="Quasimartingale decompositions on finite filtered spaces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", metavar="PATH")
    common.add_argument("--process", metavar="NAME")
    common.add_argument("--cut", metavar="L1,L2,...")
    common.add_argument("--subfiltration", metavar="NAME")
    common.add_argument("--brute-force", action="store_true")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int)
    common.add_argument("--outcomes", type=int, metavar="M")
    common.add_argument("--indices", type=int, metavar="T")
    common.add_argument("--fixtures", action="store_true", help="check: run the fixtures too")
    common.add_argument("--out", metavar="PATH")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=f"run {name}")
    return parser


def _echo(args):
    keys = ("scenario", "process", "cut", "subfiltration", "brute_force", "seed", "trials",
            "outcomes", "indices", "fixtures")
    return {
        k: getattr(args, k)
        for k in keys
        if getattr(args, k) is not None and getattr(args, k) is not False
    }


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        outcome = COMMANDS[args.command](args)
    except (SpaceError, NotAdaptedError, PreconditionError) as exc:
        print(f"quasimart {args.command}: {exc}", file=sys.stderr)
        return FAIL
    except (UsageError, ScenarioError, ValueError) as exc:
        print(f"quasimart {args.command}: {exc}", file=sys.stderr)
        return USAGE
    if outcome is None:
        return 0
    input_digest, result, checks = outcome
    ok = all(checks.values())
    report = {
        "command": args.command,
        "args": _echo(args),
        "input_digest": input_digest,
        "result": result,
        "checks": checks,
        "ok": ok,
    }
    text = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    if args.out:
        _write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0 if ok else FAIL


if __name__ == "__main__":
    sys.exit(main())
