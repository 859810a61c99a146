"""Command-line interface over the machine file format.

One verb per invocation; exit status 0 on success, 1 on domain errors
(including a rejected run, unless --allow-reject), 2 on usage errors.
All outputs are deterministic: identical invocations write identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analysis, automata, digits, serialize, transducers
from .digits import Expansion, hamming_weight
from .errors import FsmError
from .machine import Machine
from .symbols import parse_symbol_token, parse_word_text

PRESETS = {
    "naf-acceptor": digits.build_naf_acceptor,
    "naf1": digits.build_naf1,
    "naf2": digits.build_naf2,
    "naf-all": digits.build_naf_all,
    "triple": digits.build_triple,
    "identity": lambda: transducers.identity_transducer([0, 1]),
    "weight": lambda: transducers.weight_transducer(range(-2, 3)),
    "abs": lambda: transducers.abs_transducer([-1, 0, 1]),
    "minus": digits.build_minus,
    "naf3": digits.build_naf3,
    "combined-3n-n": digits.build_combined_3n_n,
    "T": digits.build_T,
    "W": digits.build_W,
    "R": digits.build_R,
}

WEIGHT_FUNCTIONS = {
    "in-minus-out": lambda t: hamming_weight(t.input) - hamming_weight(t.output),
    "out-minus-in": lambda t: hamming_weight(t.output) - hamming_weight(t.input),
    "zero": lambda t: 0,
}


def _emit(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _write_machine(m: Machine, path):
    serialize.save(m, path)
    print(f"{len(m.states)} states, {len(m.transitions)} transitions -> {path}")


def _load(path) -> Machine:
    try:
        return serialize.load(path)
    except OSError as exc:
        raise FsmError(f"cannot read {path}: {exc}") from exc


def _parse_input(args) -> tuple:
    if args.digits_of is not None:
        return digits.binary_digits(args.digits_of)
    if args.input is not None:
        return parse_word_text(args.input)
    raise FsmError("provide --input or --digits-of")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fsmkit",
        description="Finite automata and transducers with exact analyses.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("build", help="write a prebuilt machine")
    p.add_argument("preset")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("run", help="process an input word")
    p.add_argument("machine")
    p.add_argument("--input", help="comma-separated letters, e.g. 0,1,1,1")
    p.add_argument("--digits-of", type=int,
                   help="use the binary digits of this number as input")
    p.add_argument("--eval-offset", type=int, default=None,
                   help="also print the value of the output expansion, "
                        "least significant digit weighing 2**offset")
    p.add_argument("--allow-reject", action="store_true",
                   help="exit 0 even when the input is rejected")

    for verb in ("minimize", "determinize", "complement", "star",
                 "project-output", "simplify", "trim"):
        p = sub.add_parser(verb)
        p.add_argument("machine")
        p.add_argument("-o", "--output", required=True)

    for verb in ("intersect", "union", "concat", "product"):
        p = sub.add_parser(verb)
        p.add_argument("left")
        p.add_argument("right")
        p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("compose")
    p.add_argument("--outer", required=True)
    p.add_argument("--inner", required=True)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("final-word-out")
    p.add_argument("machine")
    p.add_argument("--letter", required=True)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("export")
    p.add_argument("machine")
    p.add_argument("--format", required=True, choices=("dot", "tikz"))
    p.add_argument("--coords", help="JSON file mapping labels to [x, y]")
    p.add_argument("--negative-overline", action="store_true",
                   help="render negative digits with an overline (tikz)")
    p.add_argument("-o", "--output")

    analyze = sub.add_parser("analyze").add_subparsers(dest="analysis",
                                                       required=True)

    p = analyze.add_parser("count")
    p.add_argument("machine")
    p.add_argument("--length", type=int, required=True)

    p = analyze.add_parser("recurrence")
    p.add_argument("machine")

    p = analyze.add_parser("equivalent")
    p.add_argument("left")
    p.add_argument("right")

    for verb in ("shortest-paths", "check-minimality"):
        p = analyze.add_parser(verb)
        p.add_argument("machine")
        p.add_argument("--weight", default="in-minus-out",
                       choices=sorted(WEIGHT_FUNCTIONS))

    for verb in ("density", "moments"):
        p = analyze.add_parser(verb)
        p.add_argument("machine")

    return parser


def _cmd_build(args) -> int:
    if args.preset not in PRESETS:
        raise FsmError(f"unknown preset {args.preset!r}; "
                       f"choose from {', '.join(sorted(PRESETS))}")
    _write_machine(PRESETS[args.preset](), args.output)
    return 0


def _cmd_run(args) -> int:
    m = _load(args.machine)
    result = m.process(_parse_input(args))
    print(f"accepted: {'true' if result.accepted else 'false'}")
    print(f"stop: {result.stop_state}")
    print("output: " + ",".join(str(s) for s in result.output))
    if args.eval_offset is not None:
        value = Expansion(result.output, args.eval_offset).value()
        print(f"value: {value}")
    if not result.accepted and not args.allow_reject:
        return 1
    return 0


def _cmd_op(args) -> int:
    if args.verb == "minimize":
        out = automata.minimize(_load(args.machine))
    elif args.verb == "determinize":
        out = automata.determinize(_load(args.machine))
    elif args.verb == "complement":
        out = automata.complement(_load(args.machine))
    elif args.verb == "star":
        out = automata.kleene_star(_load(args.machine))
    elif args.verb == "project-output":
        out = transducers.output_projection(_load(args.machine))
    elif args.verb == "simplify":
        out = transducers.simplify(_load(args.machine))
    elif args.verb == "trim":
        out = _load(args.machine).trim()
    elif args.verb == "intersect":
        out = automata.intersection(_load(args.left), _load(args.right))
    elif args.verb == "union":
        out = automata.union(_load(args.left), _load(args.right))
    elif args.verb == "concat":
        out = automata.concat(_load(args.left), _load(args.right))
    elif args.verb == "product":
        out = transducers.cartesian_product(_load(args.left), _load(args.right))
    elif args.verb == "compose":
        out = transducers.compose(_load(args.outer), _load(args.inner))
    elif args.verb == "final-word-out":
        out = transducers.with_final_word_out(
            _load(args.machine), parse_symbol_token(args.letter))
    else:  # pragma: no cover
        raise FsmError(f"unhandled verb {args.verb}")
    _write_machine(out, args.output)
    return 0


def _cmd_export(args) -> int:
    m = _load(args.machine)
    coordinates = None
    if args.coords:
        with open(args.coords, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
        coordinates = {label: (float(xy[0]), float(xy[1]))
                       for label, xy in raw.items()}
    format_letter = None
    if args.negative_overline:
        from .export import format_letter_negative
        format_letter = format_letter_negative
    text = m.export(args.format, coordinates=coordinates,
                    format_letter=format_letter)
    _emit(text, args.output)
    return 0


def _cmd_analyze(args) -> int:
    if args.analysis == "count":
        print(automata.count_words(_load(args.machine), args.length))
    elif args.analysis == "recurrence":
        rec = automata.word_count_recurrence(_load(args.machine))
        terms = " + ".join(f"{c}*a(n-{i + 1})"
                           for i, c in enumerate(rec.coefficients))
        print(f"a(n) = {terms}")
        print("initial: " + ", ".join(str(x) for x in rec.initial_terms))
    elif args.analysis == "equivalent":
        flag = automata.is_equivalent(_load(args.left), _load(args.right))
        print(f"equivalent: {'true' if flag else 'false'}")
    elif args.analysis == "shortest-paths":
        m = _load(args.machine)
        initial = m.initial_states()
        if len(initial) != 1:
            raise FsmError("shortest paths need exactly one initial state")
        paths = analysis.bellman_ford(
            m.digraph(WEIGHT_FUNCTIONS[args.weight]), initial[0].label)
        for label in sorted(paths.distance):
            print(f"{label}: {paths.distance[label]}")
    elif args.analysis == "check-minimality":
        flag, paths = analysis.check_minimality(
            _load(args.machine), WEIGHT_FUNCTIONS[args.weight])
        print(f"minimal: {'true' if flag else 'false'}")
        for label in sorted(paths.distance):
            print(f"{label}: {paths.distance[label]}")
    elif args.analysis == "density":
        print(analysis.expected_density(_load(args.machine)))
    elif args.analysis == "moments":
        moments = analysis.asymptotic_moments(_load(args.machine))
        print(f"expectation: {moments.expectation}")
        print(f"variance: {moments.variance}")
        print(f"covariance: {moments.covariance}")
    else:  # pragma: no cover
        raise FsmError(f"unhandled analysis {args.analysis}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "build":
            return _cmd_build(args)
        if args.verb == "run":
            return _cmd_run(args)
        if args.verb == "export":
            return _cmd_export(args)
        if args.verb == "analyze":
            return _cmd_analyze(args)
        return _cmd_op(args)
    except FsmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
