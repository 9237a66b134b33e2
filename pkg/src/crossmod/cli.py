"""Command-line front end: ``crossmod {validate,invariant,extract,examples}``.

Exit codes: 0 success, 1 input error, 2 the two counting paths disagree.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from ._text import ParseError
from .algebra import CrossedModuleError, GroupTableError, parse_crossed_module
from .corpus import CATALOG, UnknownExample, coefficient, example_path, list_examples
from .kwb import KwbDiagram, check_consistency, count_colorings, extract_presentation, parse_diagram
from .presentation import (
    CrossedModulePresentation,
    PresentationInconsistency,
    count_homs,
    parse_presentation,
    serialize,
)

EXIT_OK, EXIT_INPUT, EXIT_DISAGREE = 0, 1, 2


@dataclass
class RunReport:
    input: str
    coefficient: str
    via: str
    count: int
    exponent: int
    invariant: str
    wall_time: float
    jobs: int


def fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class InputError(Exception):
    pass


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def _load_input(source: str) -> tuple[KwbDiagram | None, CrossedModulePresentation | None]:
    """A corpus name gives both forms; a path gives the one its suffix names."""
    if source in {ex.name for ex in CATALOG}:
        diagram = parse_diagram(_read(example_path(source, "kwb")))
        cmp_path = example_path(source, "cmp")
        pres = parse_presentation(_read(cmp_path)) if cmp_path.exists() else extract_presentation(diagram)
        return diagram, pres
    path = Path(source)
    if path.suffix == ".kwb":
        diagram = parse_diagram(_read(path))
        return diagram, extract_presentation(diagram)
    if path.suffix == ".cmp":
        return None, parse_presentation(_read(path))
    raise InputError(f"{source}: not a corpus name, .kwb or .cmp file")


def _run(input_name, cm_name, cm, via, diagram, pres, jobs) -> RunReport:
    t0 = time.perf_counter()
    if via == "diagram":
        n, k = count_colorings(diagram, cm, jobs), diagram.circles
    else:
        n, k = count_homs(pres, cm, jobs), pres.rank_b1
    value = Fraction(n, cm.principal.order**k)
    return RunReport(input_name, cm_name, via, n, k, fraction_text(value), time.perf_counter() - t0, jobs)


def cmd_invariant(args) -> int:
    diagram, pres = _load_input(args.input)
    cm = coefficient(args.cm)
    vias = ["diagram", "presentation"] if args.via == "both" else [args.via or ("diagram" if diagram else "presentation")]
    if "diagram" in vias and diagram is None:
        raise InputError("a diagram path needs a .kwb input")
    reports = [_run(args.input, args.cm, cm, v, diagram, pres, args.jobs) for v in vias]
    if args.format == "json":
        payload = [asdict(r) for r in reports]
        print(json.dumps(payload if len(payload) > 1 else payload[0], indent=2))
    else:
        for r in reports:
            value = Fraction(r.invariant)
            shown = str(value.numerator) if value.denominator == 1 else r.invariant
            print(
                f"{r.input} [{r.coefficient}] via {r.via}: I = {shown}"
                f"  (count {r.count} / #E^{r.exponent}, {r.wall_time:.3f}s, jobs={r.jobs})"
            )
    if len({r.invariant for r in reports}) > 1:
        print("error: diagram and presentation invariants disagree", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def cmd_validate(args) -> int:
    path = Path(args.path)
    text = _read(path)
    kinds = {".kwb": "kwb", ".cmp": "cmp", ".xmod": "xmod"}
    kind = kinds.get(path.suffix)
    if kind is None:
        first = text.split(maxsplit=1)[:1]
        kind = {"kwb": "kwb", "presentation": "cmp", "crossed_module": "xmod"}.get(first[0] if first else "")
    if kind is None:
        raise InputError(f"{path}: cannot tell the file format (empty file or unknown header)")
    if kind == "kwb":
        d = parse_diagram(text)
        if args.cm:
            report = check_consistency(d, coefficient(args.cm))
            for band, witness in report.violations:
                print(f"{path}: last end of band {band!r} violated by {witness}", file=sys.stderr)
            if not report.clean:
                return EXIT_INPUT
        summary = f"kwb: {d.circles} circles, {len(d.arcs)} arcs, {len(d.bands)} bands"
    elif kind == "cmp":
        p = parse_presentation(text)
        summary = f"presentation: {p.n_base} base, {p.n_principal} principal, {len(p.two_relations)} 2-relations"
    else:
        cm = parse_crossed_module(text, path.stem)
        summary = f"crossed module: #G={cm.base.order}, #E={cm.principal.order}"
    print(f"{path}: ok ({summary})")
    return EXIT_OK


def cmd_extract(args) -> int:
    if args.input in {ex.name for ex in CATALOG}:
        text = _read(example_path(args.input, "kwb"))
    else:
        text = _read(Path(args.input))
    out = serialize(extract_presentation(parse_diagram(text)))
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_examples(args) -> int:
    found = list_examples(args.filter or "")
    if args.format == "json":
        print(json.dumps([asdict(ex) for ex in found], indent=2))
    else:
        width = max((len(ex.name) for ex in found), default=0)
        for ex in found:
            print(f"{ex.name:<{width}}  {ex.description}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="crossmod", description="Crossed-module invariants of knotted surfaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a .kwb, .cmp or .xmod file")
    p.add_argument("path")
    p.add_argument("--cm", help="also check band last-end consistency against this coefficient")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("invariant", help="compute the invariant of a corpus example or file")
    p.add_argument("input", help="corpus name, .kwb or .cmp path")
    p.add_argument("--cm", default="A", help="coefficient name or crossed_module file (default: A)")
    p.add_argument("--via", choices=["diagram", "presentation", "both"])
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("extract", help="write the presentation read off a diagram")
    p.add_argument("input", help="corpus name or .kwb path")
    p.add_argument("--out")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("examples", help="list the corpus")
    p.add_argument("filter", nargs="?", help="substring to filter names by")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_examples)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, ParseError, UnknownExample, GroupTableError, CrossedModuleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PresentationInconsistency as exc:
        print(f"error: inconsistent presentation: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
