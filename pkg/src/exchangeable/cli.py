"""Command-line entry point: ``exchangeable {check,demo,search,sample}``.

Exit codes: 0 pass, 1 property failure or mismatch, 2 usage or format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import matrix as mx
from . import montecarlo as mc
from .core import DomainError, MatrixLaw, marginal
from .families import counterexample_law, markov_law, markov_spec
from .lawio import LawFormatError, law_from_doc
from .presets import PRESETS, build_preset
from .properties import (PreconditionError, check_exchangeable, check_homogeneous, check_joint_urn,
                         check_marginal_urn, check_markov, check_reverse_martingale,
                         check_stationary, demonstrate_flaw, verify_converse)
from .report import CheckReport, rational_str


class UsageError(Exception):
    pass


SEQUENCE_CHECKS = {
    "exchangeable": lambda law, a: check_exchangeable(law, brute_force=a.brute_force),
    "stationary": lambda law, a: check_stationary(law),
    "reverse-martingale": lambda law, a: check_reverse_martingale(law),
    "converse": lambda law, a: verify_converse(law),
    "markov": lambda law, a: check_markov(law),
    "homogeneous": lambda law, a: check_homogeneous(law),
    "marginal-urn": lambda law, a: check_marginal_urn(law),
    "joint-urn": lambda law, a: check_joint_urn(law),
}
MATRIX_CHECKS = {
    "sep-exchangeable": lambda law, a: mx.check_sep_exchangeable(law, brute_force=a.brute_force),
    "reverse-martingale-2d": lambda law, a: mx.check_reverse_martingale_2d(law, a.field),
    "marginal-characterisation": lambda law, a: mx.check_marginal_characterisation(law),
}
DEMOS = ("counterexample", "remark4-flaw", "theorem1", "theorem3", "remark5")


def _load(args, default_preset: str | None = None):
    if args.law and args.preset:
        raise UsageError("give either --law or --preset, not both")
    if args.law:
        try:
            with open(args.law) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError("cannot read %s: %s" % (args.law, exc)) from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise LawFormatError(exc.msg, "line %d column %d" % (exc.lineno, exc.colno)) from None
        if isinstance(doc, dict) and "preset" in doc:
            return build_preset(doc["preset"], doc.get("n", args.n), doc.get("params"))
        return law_from_doc(doc)
    name = args.preset or default_preset
    if name is None:
        raise UsageError("a law is required: use --law FILE or --preset NAME")
    params = json.loads(args.params) if args.params else None
    return build_preset(name, args.n, params)


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "structured":
        out = json.dumps(payload, indent=2)
    else:
        out = "\n".join(text_lines)
    if args.out and args.command != "sample":
        with open(args.out, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def _report_out(args, report: CheckReport) -> int:
    _emit(args, report.to_doc(), [report.summary()] + [
        "  %s: %s" % (k, json.dumps(v)) for k, v in report.details.items()])
    return 0 if report.passed else 1


def cmd_check(args) -> int:
    law = _load(args)
    table = MATRIX_CHECKS if isinstance(law, MatrixLaw) else SEQUENCE_CHECKS
    if args.property not in table:
        kind = "matrix" if isinstance(law, MatrixLaw) else "sequence"
        raise UsageError("check %r does not apply to a %s law" % (args.property, kind))
    return _report_out(args, table[args.property](law, args))


# ---------------------------------------------------------------------------
# Demos


def _demo_counterexample(args) -> tuple[dict, list[str], bool]:
    n = args.n or 4
    law = counterexample_law(n)
    p_all = law.prob((1,) * n)
    rest = marginal(law, range(1, n)).prob((1,) * (n - 1)) if n > 1 else Fraction(1)
    cond = p_all / rest
    f_all = Fraction(1, 3) + Fraction(1, 3) * Fraction(1, 2) ** n
    f_cond = Fraction(2 ** n + 1, 2 ** n + 2)
    ok = p_all == f_all and cond == f_cond
    lines = ["n = %d" % n,
             "P(all ones)              engine %s   formula 1/3+1/3*(1/2)^%d = %s   %s"
             % (p_all, n, f_all, "match" if p_all == f_all else "MISMATCH"),
             "P(xi_1=1 | rest ones)    engine %s   formula (2^%d+1)/(2^%d+2) = %s   %s"
             % (cond, n, n, f_cond, "match" if cond == f_cond else "MISMATCH")]
    markov = check_markov(law) if n >= 3 else None
    if markov is not None:
        lines.append(markov.summary())
    payload = {"demo": "counterexample", "n": n,
               "p_all_ones": {"engine": rational_str(p_all), "formula": rational_str(f_all)},
               "conditional": {"engine": rational_str(cond), "formula": rational_str(f_cond)},
               "match": ok}
    if markov is not None:
        payload["markov"] = markov.to_doc()
    return payload, lines, ok


def _demo_flaw(args):
    r = demonstrate_flaw()
    w = r.first
    lines = ["urn {a, b}, n = 2, k = 0, f_1 = f_2 = 1{a}",
             "product chain %s" % r.details["product_chain"],
             "factorial form %s" % r.details["factorial_form"],
             "true E(f_1 f_2 | beta_2) %s" % r.details["true_conditional_expectation"],
             "pointwise gap on path %s: %s vs %s" % ("".join(w.location["path"]), w.lhs, w.rhs),
             "product measurable w.r.t. beta_2: %s" % r.details["product_is_beta_measurable"],
             "single conditioning steps hold: %s" % r.details["single_steps_hold"]]
    ok = (not r.passed and not r.details["product_is_beta_measurable"]
          and r.details["single_steps_hold"])
    return {"demo": "remark4-flaw", "report": r.to_doc(), "as_expected": ok}, lines, ok


def _exchangeable_fixtures():
    for name in ("iid", "mixture", "urn", "polya", "counterexample"):
        yield name, build_preset(name)


def _demo_martingale_fixtures(args):
    payload, lines, ok = {"demo": "theorem1", "fixtures": {}}, [], True
    for name, law in _exchangeable_fixtures():
        ex, rm = check_exchangeable(law), check_reverse_martingale(law)
        payload["fixtures"][name] = {"exchangeable": ex.passed, "reverse_martingale": rm.passed}
        lines.append("%-15s exchangeable=%s reverse_martingale=%s" % (name, ex.verdict, rm.verdict))
        ok &= ex.passed and rm.passed
    return payload, lines, ok


def _demo_converse(args):
    law = _load(args, default_preset="counterexample")
    if isinstance(law, MatrixLaw):
        raise UsageError("the converse demo needs a sequence law")
    r = verify_converse(law)
    lines = ["stationary=%s reverse_martingale=%s exchangeable=%s implication=%s" % (
        r.details["stationary"], r.details["reverse_martingale"], r.details["exchangeable"],
        r.details["implication"])]
    return {"demo": "theorem3", "report": r.to_doc()}, lines, r.passed


def _markov_fixtures():
    ab = ("a", "b")
    half = Fraction(1, 2)
    yield "iid-kernel", markov_law(markov_spec(ab, {"a": half, "b": half},
                                               {"a": {"a": half, "b": half}, "b": {"a": half, "b": half}}), 4)
    yield "constant-path", markov_law(markov_spec(ab, {"a": Fraction(1, 3), "b": Fraction(2, 3)},
                                                  {"a": {"a": 1}, "b": {"b": 1}}), 4)
    yield "asymmetric", build_preset("markov", 4)


def _demo_markov_pipeline(args):
    payload, lines, ok = {"demo": "remark5", "fixtures": {}}, [], True
    for name, law in _markov_fixtures():
        hom = check_homogeneous(law).passed
        rm = check_reverse_martingale(law).passed
        ex = check_exchangeable(law).passed
        holds = not (hom and rm) or ex
        ok &= holds
        payload["fixtures"][name] = {"homogeneous": hom, "reverse_martingale": rm,
                                     "exchangeable": ex, "implication_holds": holds}
        lines.append("%-14s homogeneous=%s reverse_martingale=%s exchangeable=%s" % (name, hom, rm, ex))
    ce = check_markov(counterexample_law(args.n or 4))
    ok &= not ce.passed
    payload["counterexample_markov"] = ce.to_doc()
    lines.append("counterexample " + ce.summary())
    lines.append("  P(xi_{k+1}=1 | first k ones): %s" % ", ".join(ce.details["repeat_conditionals"]["1"]))
    return payload, lines, ok


def cmd_demo(args) -> int:
    handlers = {"counterexample": _demo_counterexample, "remark4-flaw": _demo_flaw,
                "theorem1": _demo_martingale_fixtures, "theorem3": _demo_converse, "remark5": _demo_markov_pipeline}
    payload, lines, ok = handlers[args.name](args)
    _emit(args, payload, lines)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Search and sampling


def _fixture_space(args):
    laws = [build_preset("matrix-iid", 2), build_preset("matrix-labels", 2),
            build_preset("matrix-iid", 3), build_preset("matrix-labels", 3)]
    return mx.ExplicitSpace(tuple(laws))


def cmd_search(args) -> int:
    if args.space == "grid":
        space = mx.GridSpace(denominator=args.denominator)
    elif args.space == "random":
        space = mx.RandomGridSpace(denominator=args.denominator, count=args.samples or 1000,
                                   seed=args.seed or 0)
    elif args.space == "fixtures":
        space = _fixture_space(args)
    elif args.space == "point":
        space = mx.ExplicitSpace((build_preset("matrix-point"),))
    else:
        raise UsageError("unknown search space %r" % args.space)
    report = mx.conjecture_search(space, budget=args.budget, field_variant=args.field,
                                  progress=lambda msg: print(msg, file=sys.stderr))
    d = report.details
    _emit(args, report.to_doc(), [
        "%d forward violations / %d candidates" % (d["forward_violations"], d["candidates"]),
        "martingale-passing: %d, separately exchangeable: %d, converse failures: %d"
        % (d["martingale_pass"], d["sep_exchangeable_pass"], d["converse_failures"]),
        "status: %s" % d["status"]])
    return 0


def _source_for(args):
    name = args.preset or ("counterexample" if not args.law else None)
    if name == "counterexample":
        return mc.CounterexampleSource(args.n or 10), None
    law = _load(args)
    if isinstance(law, MatrixLaw):
        raise UsageError("sampling supports sequence laws only")
    return mc.LawSource(law), law


def cmd_sample(args) -> int:
    if args.seed is None or args.samples is None:
        raise UsageError("sample needs --seed and --samples")
    source, law = _source_for(args)
    rng = mc.make_rng(args.seed)
    x = source.sample_indices(rng, args.samples)
    if args.out:
        with open(args.out, "w") as fh:
            for row in x:
                fh.write(" ".join(str(source.alphabet[i]) for i in row) + "\n")
    n = source.length
    estimates = {}
    if isinstance(source, mc.CounterexampleSource):
        one = source.alphabet.index(1)
        rng2 = mc.make_rng(args.seed, 1)
        p_all = mc.estimate_probability(source, mc.all_equal(one), rng2, args.samples, args.seed)
        cond = mc.estimate_conditional(source, lambda y: y[:, 0] == one,
                                       mc.all_equal(one, slice(1, None)), rng2, args.samples, args.seed)
        closed = {"p_all_ones": Fraction(1, 3) + Fraction(1, 3) * Fraction(1, 2) ** n,
                  "conditional": Fraction(2 ** n + 1, 2 ** n + 2)}
        for key, est in (("p_all_ones", p_all), ("conditional", cond)):
            estimates[key] = {**est.to_doc(), "closed_form": rational_str(closed[key]),
                              "covers": est.covers(closed[key])}
    else:
        pos = {a: i for i, a in enumerate(source.alphabet)}
        for y, p in law.probs.items():
            idx = [pos[a] for a in y]
            hits = (x == idx).all(axis=1)
            f = float(hits.mean())
            half = mc.Z * (f * (1 - f) / len(x)) ** 0.5
            estimates[" ".join(map(str, y))] = {"point": f, "half_width": half,
                                                "exact": rational_str(p)}
    payload = {"command": "sample", "n": n, "seed": args.seed, "samples": args.samples,
               "montecarlo": estimates}
    lines = ["%s: %.6f +- %.6f%s" % (k, v["point"], v["half_width"],
                                     "  (closed form %s)" % v["closed_form"] if "closed_form" in v
                                     else "  (exact %s)" % v["exact"])
             for k, v in estimates.items()]
    _emit(args, payload, lines)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--law", metavar="FILE", help="law or preset descriptor document")
    common.add_argument("--preset", choices=sorted(PRESETS), help="built-in law")
    common.add_argument("--params", metavar="JSON", help="preset parameters as a JSON object")
    common.add_argument("--n", type=int, help="sequence length / matrix size")
    common.add_argument("--field", choices=mx.FIELD_VARIANTS, default="block-complement")
    common.add_argument("--brute-force", action="store_true")
    common.add_argument("--seed", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--out", metavar="FILE")
    common.add_argument("--format", choices=("text", "structured"), default="text")

    parser = argparse.ArgumentParser(prog="exchangeable", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="run one exact checker")
    p.add_argument("property", choices=sorted(SEQUENCE_CHECKS) + sorted(MATRIX_CHECKS))
    p = sub.add_parser("demo", parents=[common], help="reproduce a closed form or construction")
    p.add_argument("name", choices=DEMOS)
    p = sub.add_parser("search", parents=[common], help="search small matrix laws")
    p.add_argument("--space", default="grid", choices=("grid", "random", "fixtures", "point"))
    p.add_argument("--denominator", type=int, default=4)
    p.add_argument("--budget", type=int)
    sub.add_parser("sample", parents=[common], help="seeded Monte Carlo sampling")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"check": cmd_check, "demo": cmd_demo, "search": cmd_search, "sample": cmd_sample}
    try:
        return handlers[args.command](args)
    except LawFormatError as exc:
        print("format error: %s" % exc, file=sys.stderr)
        return 2
    except (UsageError, PreconditionError, DomainError, json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
