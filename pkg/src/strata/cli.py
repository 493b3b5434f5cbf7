"""Command line front end: problem files in, JSON reports out.

Problem files are ``key: value`` lines; ``#`` starts a comment::

    vars: x y z t
    order: revlex
    mode: homogeneous
    ideal: x^2*y, x*y^2
    exclude: y^3, z^3

Other keys: ``tails: [x], []`` (allowed tail monomials, one list per
generator), ``segment: lex a_q ... a_1`` or ``segment: revlex mu`` instead of
``ideal``, and ``options: no-level-opt, all-pairs``.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .errors import (
    EmptyStratum,
    InvalidOrder,
    InvalidSegment,
    NotReliable,
    ParseError,
    SemanticError,
    StrataError,
    VariableMismatch,
)
from .exact_poly import Monomial, mono_str
from .groebner import MonomialIdeal
from .segments import (
    LexSegmentSpec,
    RevLexSegmentSpec,
    lex_dimension_formula,
    lex_segment_ideal,
    revlex_dimension_formula,
    revlex_params,
    revlex_segment_ideal,
)
from .stratum import analyze
from .term_orders import GENERAL, HOMOGENEOUS, Allowed, TailSpec, TermOrder, parse_order

EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC, EXIT_NOT_RELIABLE, EXIT_EMPTY = 0, 1, 2, 3, 4

KEYS = ("vars", "order", "mode", "ideal", "segment", "tails", "exclude", "options")
OPTION_NAMES = {"no-level-opt": "level_by_level", "all-pairs": "all_pairs"}
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class ProblemSpec:
    variables: Tuple[str, ...]
    order: str = "revlex"
    mode: str = GENERAL
    ideal: Optional[Tuple[Monomial, ...]] = None
    segment: Optional[Tuple] = None
    tails: Optional[Tuple[Tuple[Monomial, ...], ...]] = None
    exclude: Optional[Tuple[Monomial, ...]] = None
    level_by_level: bool = True
    all_pairs: bool = False

    def term_order(self) -> TermOrder:
        return parse_order(self.order, self.variables)

    def monomial_ideal(self) -> MonomialIdeal:
        if self.segment is not None:
            return segment_ideal(self.segment, len(self.variables))
        return MonomialIdeal(self.ideal, len(self.variables))

    def tail_spec(self) -> TailSpec:
        nv = len(self.variables)
        ex = MonomialIdeal(self.exclude, nv) if self.exclude else None
        per = None
        if self.tails is not None:
            per = tuple(Allowed(t) for t in self.tails)
        return TailSpec(self.mode, ex, per)


def segment_ideal(segment: Tuple, nvars: int) -> MonomialIdeal:
    kind, args = segment[0], segment[1:]
    if kind == "lex":
        return lex_segment_ideal(LexSegmentSpec(nvars - 1, args))
    return revlex_segment_ideal(RevLexSegmentSpec(args[0], nvars - 1))


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


class _Line:
    def __init__(self, text: str, lineno: int, offset: int):
        self.text = text
        self.lineno = lineno
        self.offset = offset  # column of text[0], 1-based

    def error(self, msg: str, pos: int = 0) -> ParseError:
        return ParseError(msg, self.lineno, self.offset + pos)


def _split_items(line: _Line, text: str, base: int) -> List[Tuple[str, int]]:
    """Comma separated items with their offsets into ``line.text``."""
    out = []
    start = 0
    for piece in text.split(","):
        stripped = piece.strip()
        lead = len(piece) - len(piece.lstrip())
        out.append((stripped, base + start + lead))
        start += len(piece) + 1
    return out


def _parse_monomial(text: str, names: Sequence[str], line: _Line, pos: int) -> Monomial:
    if not text:
        raise line.error("empty monomial", pos)
    if any(ch in text for ch in "+-/()"):
        raise SemanticError(f"line {line.lineno}: {text!r} is not a monomial")
    exps = [0] * len(names)
    if text == "1":
        return tuple(exps)
    cur = pos
    for factor in text.split("*"):
        f = factor.strip()
        fpos = cur + len(factor) - len(factor.lstrip())
        cur += len(factor) + 1
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?", f)
        if not m:
            raise line.error(f"bad factor {f!r}; expected name or name^k", fpos)
        name, e = m.group(1), int(m.group(2) or 1)
        if name not in names:
            raise SemanticError(f"line {line.lineno}: unknown variable {name!r}")
        exps[names.index(name)] += e
    return tuple(exps)


def _monomial_list(line: _Line, text: str, base: int, names) -> Tuple[Monomial, ...]:
    if not text.strip():
        return ()
    return tuple(_parse_monomial(t, names, line, p) for t, p in _split_items(line, text, base))


def _parse_tails(line: _Line, text: str, base: int, names) -> Tuple[Tuple[Monomial, ...], ...]:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in " \t,":
            i += 1
            continue
        if ch != "[":
            raise line.error("expected '['", base + i)
        j = text.find("]", i)
        if j < 0:
            raise line.error("unclosed '['", base + i)
        out.append(_monomial_list(line, text[i + 1:j], base + i + 1, names))
        i = j + 1
    return tuple(out)


def parse(text: str) -> ProblemSpec:
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if ":" not in body:
            col = len(body) - len(body.lstrip()) + 1
            raise ParseError("expected 'key: value'", lineno, col)
        key_part, value = body.split(":", 1)
        key = key_part.strip().lower()
        kcol = len(key_part) - len(key_part.lstrip()) + 1
        if key not in KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, kcol)
        if key in fields:
            raise ParseError(f"duplicate key {key!r}", lineno, kcol)
        vcol = len(key_part) + 2
        fields[key] = (_Line(raw, lineno, 1), value, vcol - 1)

    if "vars" not in fields:
        raise ParseError("missing 'vars:' line", 1, 1)
    line, value, base = fields["vars"]
    names = tuple(value.split())
    if not names:
        raise line.error("no variables given", base)
    for nm in names:
        if not _NAME.match(nm):
            raise line.error(f"bad variable name {nm!r}", base + value.find(nm))
    if len(set(names)) != len(names):
        raise SemanticError(f"line {line.lineno}: repeated variable")

    kw = {"variables": names}
    if "order" in fields:
        line, value, base = fields["order"]
        kw["order"] = value.strip()
        try:
            parse_order(kw["order"], names)
        except InvalidOrder as exc:
            raise SemanticError(f"line {line.lineno}: {exc}") from None
    if "mode" in fields:
        line, value, base = fields["mode"]
        mode = value.strip().lower()
        if mode not in (GENERAL, HOMOGENEOUS):
            raise line.error(f"mode must be general or homogeneous, not {mode!r}", base + 1)
        kw["mode"] = mode

    if ("ideal" in fields) == ("segment" in fields):
        raise ParseError("give exactly one of 'ideal:' or 'segment:'", 1, 1)
    if "ideal" in fields:
        line, value, base = fields["ideal"]
        gens = _monomial_list(line, value, base, names)
        if not gens:
            raise SemanticError(f"line {line.lineno}: the ideal needs generators")
        kw["ideal"] = gens
    else:
        line, value, base = fields["segment"]
        kw["segment"] = _parse_segment(line, value, base, len(names))

    if "tails" in fields:
        line, value, base = fields["tails"]
        kw["tails"] = _parse_tails(line, value, base, names)
    if "exclude" in fields:
        line, value, base = fields["exclude"]
        kw["exclude"] = _monomial_list(line, value, base, names)
    if "options" in fields:
        line, value, base = fields["options"]
        for item, pos in _split_items(line, value, base):
            if not item:
                continue
            if item not in OPTION_NAMES:
                raise line.error(f"unknown option {item!r}", pos)
            attr = OPTION_NAMES[item]
            kw[attr] = attr == "all_pairs"

    spec = ProblemSpec(**kw)
    if spec.tails is not None and len(spec.tails) != len(spec.monomial_ideal().gens):
        raise SemanticError("tails: need one list per minimal generator")
    return spec


def _parse_segment(line: _Line, value: str, base: int, nvars: int) -> Tuple:
    parts = value.split()
    if not parts or parts[0] not in ("lex", "revlex"):
        raise line.error("segment must be 'lex a_q ... a_1' or 'revlex mu'", base + 1)
    try:
        nums = tuple(int(p) for p in parts[1:])
    except ValueError:
        raise line.error("segment arguments must be integers", base + 1) from None
    try:
        if parts[0] == "lex":
            LexSegmentSpec(nvars - 1, nums)
        else:
            if len(nums) != 1:
                raise line.error("revlex segment takes one argument", base + 1)
            RevLexSegmentSpec(nums[0], nvars - 1)
    except InvalidSegment as exc:
        raise SemanticError(f"line {line.lineno}: {exc}") from None
    return (parts[0],) + nums


def render(spec: ProblemSpec) -> str:
    names = spec.variables

    def mlist(ms):
        return ", ".join(mono_str(m, names) for m in ms)

    lines = [f"vars: {' '.join(names)}", f"order: {spec.order}", f"mode: {spec.mode}"]
    if spec.segment is not None:
        lines.append("segment: " + " ".join(str(x) for x in spec.segment))
    else:
        lines.append(f"ideal: {mlist(spec.ideal)}")
    if spec.tails is not None:
        lines.append("tails: " + ", ".join(f"[{mlist(t)}]" for t in spec.tails))
    if spec.exclude is not None:
        lines.append(f"exclude: {mlist(spec.exclude)}")
    opts = []
    if not spec.level_by_level:
        opts.append("no-level-opt")
    if spec.all_pairs:
        opts.append("all-pairs")
    if opts:
        lines.append("options: " + ", ".join(opts))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------


def run(spec: ProblemSpec) -> dict:
    try:
        J = spec.monomial_ideal()
        order = spec.term_order()
        tails = spec.tail_spec()
    except (InvalidOrder, InvalidSegment, VariableMismatch) as exc:
        raise SemanticError(str(exc)) from None
    try:
        report = analyze(J, tails, order, level_by_level=spec.level_by_level,
                         all_pairs=spec.all_pairs)
    except (VariableMismatch, ValueError) as exc:
        if isinstance(exc, StrataError) and not isinstance(exc, VariableMismatch):
            raise
        raise SemanticError(str(exc)) from None
    return report.as_dict()


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, NotReliable):
        return EXIT_NOT_RELIABLE
    if isinstance(exc, EmptyStratum):
        return EXIT_EMPTY
    return EXIT_SEMANTIC


def run_text(text: str) -> dict:
    """Report for problem text; errors become ``{"error": name, "exit": code}``."""
    try:
        return run(parse(text))
    except StrataError as exc:
        return {"error": type(exc).__name__, "exit": exit_code(exc)}


def pretty(report: dict) -> str:
    out = [
        f"parameters          {report['params']}",
        f"linear rank         {report['rank']}",
        f"embedding dimension {report['ed']}",
        f"Krull dimension     {report['dim']}",
        f"smooth              {'yes' if report['smooth'] else 'no'}",
    ]
    if report["generators"]:
        out.append("generators:")
        out.extend(f"  {g}" for g in report["generators"])
    out.append(f"time                {report['millis']} ms")
    return "\n".join(out)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2)


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------


def _strip_timing(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != "millis"}


def _corpus_job(path: str) -> Tuple[str, dict]:
    return path, run_text(Path(path).read_text(encoding="utf-8"))


@dataclass
class CorpusResult:
    passed: List[str] = field(default_factory=list)
    failed: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed


def corpus(directory, workers: Optional[int] = None, update: bool = False) -> CorpusResult:
    directory = Path(directory)
    problems = sorted(directory.glob("*.problem"))
    result = CorpusResult()
    if not problems:
        warnings.warn(f"no *.problem files in {directory}")
        return result
    with ProcessPoolExecutor(max_workers=workers) as pool:
        outputs = dict(pool.map(_corpus_job, [str(p) for p in problems]))
    for p in problems:
        got = outputs[str(p)]
        golden = p.with_suffix(".json")
        if update:
            golden.write_text(_dump(_strip_timing(got)) + "\n", encoding="utf-8")
        if not golden.exists():
            result.failed.append((p.name, "missing expected report"))
            continue
        want = json.loads(golden.read_text(encoding="utf-8"))
        if _strip_timing(want) == _strip_timing(got):
            result.passed.append(p.name)
        else:
            result.failed.append((p.name, _diff(want, got)))
    return result


def _diff(want: dict, got: dict) -> str:
    keys = [k for k in dict.fromkeys(list(want) + list(got)) if k != "millis"]
    return "; ".join(f"{k}: expected {want.get(k)!r}, got {got.get(k)!r}"
                     for k in keys if want.get(k) != got.get(k))


# ---------------------------------------------------------------------------
# main
# ---------------------------------------------------------------------------


def _segment_command(args) -> dict:
    if args.family == "lex":
        if len(args.values) < 2:
            raise SemanticError("lex segment needs n followed by a_q ... a_1")
        spec = LexSegmentSpec(args.values[0], args.values[1:])
        J = lex_segment_ideal(spec)
        names = spec.variables
        doc = {"family": "lex", "n": spec.n, "a": list(spec.a),
               "formula": lex_dimension_formula(spec)}
        order = TermOrder(args.order or "lex", names)
    else:
        if len(args.values) != 2:
            raise SemanticError("revlex segment needs mu and n")
        mu, n = args.values
        spec = RevLexSegmentSpec(mu, n)
        J = revlex_segment_ideal(spec)
        names = spec.variables
        r, t = revlex_params(mu)
        doc = {"family": "revlex", "mu": mu, "n": n, "r": r, "t": t,
               "formula": revlex_dimension_formula(n, mu)}
        order = TermOrder(args.order or "revlex", names)
    doc["vars"] = list(names)
    doc["ideal"] = [mono_str(g, names) for g in J.gens]
    if not args.no_analyze:
        doc["report"] = analyze(J, TailSpec(args.mode), order).as_dict()
    return doc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="strata", description="Groebner strata of monomial ideals")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze one problem file")
    a.add_argument("file")
    a.add_argument("--pretty", action="store_true", help="human readable output")
    a.add_argument("--no-level-opt", action="store_true", help="reduce pairs without level-wise substitution")
    a.add_argument("--oracle-all-pairs", action="store_true", help="use every S-pair")

    s = sub.add_parser("segment", help="segment ideal families")
    s.add_argument("family", choices=["lex", "revlex"])
    s.add_argument("values", type=int, nargs="+",
                   help="lex: n a_q ... a_1; revlex: mu n")
    s.add_argument("--order", choices=["lex", "revlex", "grlex"])
    s.add_argument("--mode", choices=[GENERAL, HOMOGENEOUS], default=HOMOGENEOUS)
    s.add_argument("--no-analyze", action="store_true", help="only print the ideal and formula")

    c = sub.add_parser("corpus", help="check problem files against expected reports")
    c.add_argument("directory")
    c.add_argument("--jobs", type=int, default=None)
    c.add_argument("--update", action="store_true", help="rewrite expected reports")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            try:
                text = Path(args.file).read_text(encoding="utf-8")
            except OSError as exc:
                print(f"strata: {exc}", file=sys.stderr)
                return EXIT_PARSE
            spec = parse(text)
            if args.no_level_opt:
                spec = replace(spec, level_by_level=False)
            if args.oracle_all_pairs:
                spec = replace(spec, all_pairs=True)
            report = run(spec)
            print(pretty(report) if args.pretty else _dump(report))
        elif args.command == "segment":
            try:
                print(_dump(_segment_command(args)))
            except InvalidSegment as exc:
                raise SemanticError(str(exc)) from None
        else:
            res = corpus(args.directory, args.jobs, args.update)
            for name in res.passed:
                print(f"PASS {name}")
            for name, why in res.failed:
                print(f"FAIL {name}: {why}")
            print(f"{len(res.passed)} passed, {len(res.failed)} failed")
            return 0 if res.ok else 1
    except StrataError as exc:
        print(f"strata: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
