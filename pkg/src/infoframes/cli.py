"""Command-line entry point: ``infoframes COMMAND ...``.

Exit codes: 0 success or pass, 1 verification failure or not derivable,
2 usage or input error, 3 search bound exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from .axioms import Report, check_family, check_frame, check_mapping, check_system, fmt, format_report
from .bases import AbstractBasis, basis_of, check_abstract_basis, complete, export_dot
from .category import compose, first_difference, identity_of, rel_equal
from .document import load_document, serialize
from .errors import DEFAULT_BOUND, ArtifactError
from .functors import FAMILY_BOUND, PAIR_IDS, apply_F, apply_S, apply_T, apply_W, verify_equivalence
from .logic import (
    CSL,
    AtomF,
    AtomTable,
    Sequent,
    apply_C,
    apply_E,
    check_csl_table,
    derivation,
    derives,
    format_steps,
    parse_antecedent,
    parse_formula,
    verify_logic_metatheorems,
)
from .model import Frame, InfoSystem, Morphism
from .tokens import RESERVED

OK, FAIL, ERROR, BOUND = 0, 1, 2, 3

LEVELS = ("scis", "cis", "cif", "sif", "cif_t", "sif_t", "csl")
FRAME_LEVELS = {"cif": (False, False), "sif": (True, False), "cif_t": (False, True), "sif_t": (True, True), "csl": (True, True)}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(ERROR)


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n <= 0:
        raise argparse.ArgumentTypeError("bound must be positive")
    return n


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _write_doc(obj, out: Optional[str]) -> None:
    relative_to = Path(out).resolve().parent if out else None
    _emit(serialize(obj, relative_to), out)


def _frame_report(f: Frame, level: str, args) -> Report:
    strong, truth = FRAME_LEVELS[level]
    report = check_frame(f, strong, truth, all_witnesses=args.all_witnesses, bound=args.bound)
    if level == "csl" and report.passed:
        report = verify_logic_metatheorems(CSL(f), all_witnesses=args.all_witnesses, bound=args.bound)
    return report


def _endpoint_level(h: Morphism) -> str:
    return {"mapping": "scis", "family": "cif", "global": "sif_t"}[h.kind]


def _validate_endpoints(h: Morphism, bound: int) -> None:
    """Endpoints must pass their class before any morphism operation."""
    level = _endpoint_level(h)
    for word, end in (("source", h.source), ("target", h.target)):
        if isinstance(end, InfoSystem):
            report = check_system(end, level, bound=bound)
        else:
            strong, truth = FRAME_LEVELS[level]
            report = check_frame(end, strong, truth, bound=bound)
        if not report.passed:
            v = report.violations[0]
            raise ArtifactError("E_TYPE", f"{word} endpoint fails {level} at {v.axiom}: {v.message}", v.witness)


def _load_morphism(path: str, bound: int) -> Morphism:
    h = load_document(path)
    if not isinstance(h, Morphism):
        raise ArtifactError("E_TYPE", f"{path} is not a morphism document")
    _validate_endpoints(h, bound)
    return h


def _report_doc(report: Report) -> str:
    lines = ["report {", f"  verdict {report.verdict}", "  violations {"]
    by_axiom: dict = {}
    for v in report.violations:
        by_axiom.setdefault(v.axiom, []).append(v)
    for axiom in sorted(by_axiom):
        shown = " ".join('"' + ", ".join(fmt(x) for x in v.witness) + '"' for v in by_axiom[axiom])
        lines.append(f'    "{axiom}": [{shown}]')
    lines += ["  }", "}"]
    return "\n".join(lines) + "\n"


def _print_report(report: Report, args) -> int:
    text = _report_doc(report) if args.format == "doc" else format_report(report)
    sys.stdout.write(text)
    return OK if report.passed else FAIL


# ---------------------------------------------------------------- commands


def cmd_check(args) -> int:
    obj = load_document(args.file)
    level = args.level
    if isinstance(obj, InfoSystem):
        level = level or "scis"
        if level not in ("scis", "cis"):
            raise ArtifactError("E_TYPE", f"level {level} does not apply to systems")
        report = check_system(obj, level, all_witnesses=args.all_witnesses, bound=args.bound)
    elif isinstance(obj, Frame):
        level = level or "cif"
        if level not in FRAME_LEVELS:
            raise ArtifactError("E_TYPE", f"level {level} does not apply to frames")
        report = _frame_report(obj, level, args)
    elif isinstance(obj, Morphism):
        _validate_endpoints(obj, args.bound)
        kw = dict(all_witnesses=args.all_witnesses, bound=args.bound)
        if obj.kind == "mapping":
            report = check_mapping(obj, obj.source, obj.target, **kw)
        else:
            respect = obj.kind == "global" or level in ("cif_t", "sif_t", "csl")
            report = check_family(obj, obj.source, obj.target, respect, **kw)
    elif isinstance(obj, AtomTable):
        report = check_csl_table(obj, all_witnesses=args.all_witnesses, bound=args.bound)
        if report.passed:
            report = verify_logic_metatheorems(obj, all_witnesses=args.all_witnesses, bound=args.bound)
    elif isinstance(obj, AbstractBasis):
        report = check_abstract_basis(obj, all_witnesses=args.all_witnesses, bound=args.bound)
    else:
        raise ArtifactError("E_TYPE", f"cannot check {type(obj).__name__}")
    return _print_report(report, args)


def cmd_convert(args) -> int:
    obj = load_document(args.file)
    if isinstance(obj, Morphism):
        _validate_endpoints(obj, args.bound)
    name = args.functor
    if name == "F":
        out = apply_F(obj, args.family_bound)
    elif name == "S":
        out = apply_S(obj)
    elif name == "T":
        out = apply_T(obj, args.family_bound)
    elif name == "W":
        out = apply_W(obj, args.truth_name or RESERVED)
    elif name == "C":
        out = apply_C(obj, bound=args.bound)
        if isinstance(out, CSL):
            out = out.table
    else:
        out = apply_E(apply_C(obj) if isinstance(obj, Frame) else obj)
    _write_doc(out, args.output)
    return OK


def cmd_compose(args) -> int:
    g = _load_morphism(args.first, args.bound)
    h = _load_morphism(args.second, args.bound)
    _write_doc(compose(g, h, args.bound), args.output)
    return OK


def cmd_identity(args) -> int:
    obj = load_document(args.file)
    if isinstance(obj, AtomTable):
        ident = identity_of(apply_E(obj), "global")
    elif isinstance(obj, (Frame, InfoSystem)):
        ident = identity_of(obj, args.kind)
    else:
        raise ArtifactError("E_TYPE", "identity needs a frame, system or logic table")
    _write_doc(ident, args.output)
    return OK


def cmd_releq(args) -> int:
    g = _load_morphism(args.first, args.bound)
    h = _load_morphism(args.second, args.bound)
    if rel_equal(g, h):
        print("equal")
        return OK
    i, x, b = first_difference(g, h)
    print(f"unequal: first difference at ({fmt(i)}, {fmt(x)}, {fmt(b)})")
    return FAIL


def cmd_roundtrip(args) -> int:
    obj = load_document(args.file)
    morphisms = []
    if args.with_:
        h = _load_morphism(args.with_, args.bound)
        morphisms.append(h)
    objects = [obj]
    for h in morphisms:
        for end in (h.source, h.target):
            if end not in objects:
                objects.append(end)
    report = verify_equivalence(
        args.pair,
        objects,
        morphisms,
        truth_name=args.truth_name or RESERVED,
        family_bound=args.family_bound,
        bound=args.bound,
        all_witnesses=args.all_witnesses,
    )
    return _print_report(report, args)


def _logic_of(obj) -> CSL:
    if isinstance(obj, AtomTable):
        return CSL(apply_E(obj))
    if isinstance(obj, Frame):
        return apply_C(obj)
    raise ArtifactError("E_TYPE", "prove needs a frame with truth or a logic table")


def cmd_prove(args) -> int:
    logic = _logic_of(load_document(args.file))
    stage = parse_formula(args.stage, logic)
    if not isinstance(stage, AtomF):
        raise ArtifactError("E_SYNTAX", "the stage must be a single atom")
    p = stage.token
    gamma = parse_antecedent(args.gamma, logic, p)
    seq = Sequent(p, gamma, parse_formula(args.phi, logic))
    ok = derives(logic, seq)
    print(f"{seq}: {'derivable' if ok else 'not derivable'}")
    if ok and args.trace:
        sys.stdout.write(format_steps(derivation(logic, seq)))
    return OK if ok else FAIL


def cmd_complete(args) -> int:
    b = basis_of(load_document(args.file), bound=args.bound)
    poset = complete(b, bound=args.bound)
    _emit(export_dot(poset, args.way_below), args.output)
    return OK


def cmd_basis(args) -> int:
    b = basis_of(load_document(args.file), bound=args.bound)
    _write_doc(b, args.output)
    return OK


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=_positive, default=DEFAULT_BOUND, help="search bound (candidate visits)")
    common.add_argument("--format", choices=("text", "doc"), default="text", help="report format")

    parser = _Parser(prog="infoframes", description="Check and transform finite information structures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", parents=[common], help="verify a structure against its axioms")
    p.add_argument("file")
    p.add_argument("--level", choices=LEVELS)
    p.add_argument("--all-witnesses", action="store_true")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("convert", parents=[common], help="apply a functor")
    p.add_argument("--functor", required=True, choices=("F", "S", "T", "W", "C", "E"))
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--truth-name")
    p.add_argument("--family-bound", type=_positive, default=FAMILY_BOUND)
    p.set_defaults(run=cmd_convert)

    p = sub.add_parser("compose", parents=[common], help="compose two morphisms, first argument first")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_compose)

    p = sub.add_parser("identity", parents=[common], help="identity morphism of a structure")
    p.add_argument("file")
    p.add_argument("--kind", choices=("family", "global"))
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_identity)

    p = sub.add_parser("releq", parents=[common], help="exact equality of two morphisms")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(run=cmd_releq)

    p = sub.add_parser("roundtrip", parents=[common], help="check an equivalence witness pair")
    p.add_argument("--pair", required=True, choices=PAIR_IDS)
    p.add_argument("file")
    p.add_argument("--with", dest="with_", metavar="MORPHISM")
    p.add_argument("--truth-name")
    p.add_argument("--family-bound", type=_positive, default=FAMILY_BOUND)
    p.add_argument("--all-witnesses", action="store_true")
    p.set_defaults(run=cmd_roundtrip)

    p = sub.add_parser("prove", parents=[common], help="decide a sequent")
    p.add_argument("file")
    p.add_argument("--stage", required=True)
    p.add_argument("--gamma", default="")
    p.add_argument("--phi", required=True)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(run=cmd_prove)

    p = sub.add_parser("complete", parents=[common], help="rounded-ideal completion as DOT")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--way-below", action="store_true")
    p.set_defaults(run=cmd_complete)

    p = sub.add_parser("basis", parents=[common], help="abstract basis of a system")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_basis)
    return parser


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except ArtifactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BOUND if exc.code == "E_BOUND" else ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
