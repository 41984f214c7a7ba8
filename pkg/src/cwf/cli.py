"""``cwf`` command line: check, decompose, term, cwd-oracle, color, gen, probe.

Exit status 0 means success (or a positive verdict), 1 a negative verdict and
2 a usage or input error. Graph files number vertices from 1; everything the
commands print (witnesses, parts, colourings) uses 0-based vertex ids.
``--json`` switches stdout to one JSON document per input file. ``CWF_LOG``
sets the log level (``DEBUG``, ``INFO``, ...).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import kernels
from .cwterm import CwTerm, PeelStuck, TermError, build_term, peel, verify_term
from .decompose import DecompositionReport, NoC6Error, StructureError, build_partition, \
    verify_observations
from .generators import PRESETS, GenerationError, InstanceParams, gen_3ring, gen_instance, \
    gen_random, preset
from .graph import Graph, GraphFormatError, find_c6, is_in_class, read_graph, write_graph
from .oracles import OracleLimitError, StateBudgetExceeded, brute_cwd_at_most, \
    chromatic_number_exact, chromatic_via_simplicial, chromatic_via_term
from .partition import NotMonotoneError

log = logging.getLogger("cwf")

OK, NEGATIVE, USAGE = 0, 1, 2
METHODS = ("exact", "simplicial-exact", "term-dp", "all")


@dataclass
class Outcome:
    status: int
    text: list[str] = field(default_factory=list)
    doc: dict = field(default_factory=dict)


class UsageError(Exception):
    pass


def _load(path) -> Graph:
    try:
        return read_graph(path)
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror or e}") from None
    except GraphFormatError as e:
        raise UsageError(f"{path}: {e}") from None


def _out_path(args, path, suffix) -> Path | None:
    if not args.out:
        return None
    out = Path(args.out)
    if len(args.input) > 1:
        out.mkdir(parents=True, exist_ok=True)
        return out / (Path(path).stem + suffix)
    return out


def _report_path(term_path: Path) -> Path:
    return term_path.with_name(term_path.name.removesuffix(".json") + ".report.json")


def _witness_doc(verdict):
    return {"pattern": verdict.pattern, "witness": list(verdict.witness)}


# -- subcommands -------------------------------------------------------------------

def cmd_check(path, args) -> Outcome:
    g = _load(path)
    verdict = is_in_class(g)
    if not verdict:
        return Outcome(NEGATIVE, [f"not in class: induced {verdict.pattern} on "
                                  f"{list(verdict.witness)}"],
                       {"in_class": False, **_witness_doc(verdict), "c6": None})
    c6 = find_c6(g)
    if c6 is None:
        return Outcome(NEGATIVE, ["in class but no C6"], {"in_class": True, "c6": None})
    return Outcome(OK, [f"in class, C6 found: {list(c6)}"], {"in_class": True, "c6": list(c6)})


def _decompose(g):
    """(report, failure outcome); exactly one is None."""
    try:
        return build_partition(g), None
    except StructureError as e:
        doc = {"error": e.observation, "message": str(e)}
        if e.witness:
            doc["pattern"], doc["witness"] = e.witness[0], list(e.witness[1])
        return None, Outcome(NEGATIVE, [str(e)], doc)
    except NoC6Error as e:
        return None, Outcome(NEGATIVE, [f"in class but {e}"], {"error": "no-c6"})


def _partition_lines(report: DecompositionReport):
    lines = [f"anchor: {list(report.anchor)}"]
    for name, part in zip(report.partition.names, report.partition.parts):
        if part:
            lines.append(f"  {name:8} {sorted(part)}")
    for cfg in report.configurations:
        triple = [t + 1 for t in cfg.triple]
        if cfg.kind == "sparse":
            lines.append(f"triple {triple}: sparse at X3_{cfg.sparse_index + 1}")
        else:
            lines.append(f"triple {triple}: triangle {list(cfg.triangle)}")
    return lines


def cmd_decompose(path, args) -> Outcome:
    g = _load(path)
    report, failed = _decompose(g)
    if failed:
        return failed
    doc = report.to_json()
    out = _out_path(args, path, ".report.json")
    if out:
        out.write_text(json.dumps(doc, indent=1))
    lines = _partition_lines(report)
    bad = report.failures()
    lines.append("all observations hold" if not bad else
                 "failing: " + ", ".join(f"{v.name}[{v.j}]" for v in bad))
    return Outcome(OK if not bad else NEGATIVE, lines, doc)


def cmd_term(path, args) -> Outcome:
    g = _load(path)
    report, failed = _decompose(g)
    if failed:
        return failed
    try:
        term = build_term(g, report.partition, peel(g, report.partition))
    except (PeelStuck, NotMonotoneError, TermError) as e:
        return Outcome(NEGATIVE, [f"term construction failed: {e}"],
                       {"error": type(e).__name__, "message": str(e),
                        "report": report.to_json()})
    doc = {"width": term.width, "budget": term.budget, "ops": len(term.ops),
           "observations_ok": report.ok}
    lines = [f"width {term.width} (budget {term.budget}), {len(term.ops)} operations"]
    status = OK if report.ok else NEGATIVE
    if args.verify:
        check = verify_term(term, g)
        doc["verified"] = check.ok
        lines.append("verified" if check.ok else
                     f"verification FAILED: missing {list(check.missing)[:5]} "
                     f"extra {list(check.extra)[:5]}")
        if not check.ok:
            status = NEGATIVE
    out = _out_path(args, path, ".term.json")
    if out:
        out.write_text(json.dumps(term.to_json()))
        _report_path(out).write_text(json.dumps(report.to_json(), indent=1))
        doc["term_file"] = str(out)
    return Outcome(status, lines, doc)


def cmd_cwd_oracle(path, args) -> Outcome:
    g = _load(path)
    try:
        d = brute_cwd_at_most(g, args.max_width)
    except OracleLimitError as e:
        raise UsageError(f"{path}: {e}") from None
    if not d:
        return Outcome(NEGATIVE, [f"clique-width > {args.max_width}"],
                       {"max_width": args.max_width, "cwd": None})
    out = _out_path(args, path, ".cwd.json")
    if out:
        out.write_text(json.dumps(d.witness.to_json()))
    return Outcome(OK, [f"clique-width = {d.minimum}"],
                   {"max_width": args.max_width, "cwd": d.minimum,
                    "witness": d.witness.to_json()})


def _term_for(g: Graph) -> CwTerm:
    report, failed = _decompose(g)
    if failed:
        raise UsageError("term-dp needs a (4K1, C4, P6)-free graph with a C6: "
                         + failed.text[0])
    return build_term(g, report.partition)


def cmd_color(path, args) -> Outcome:
    g = _load(path)
    methods = ("exact", "simplicial-exact", "term-dp") if args.method == "all" \
        else (args.method,)
    results = {}
    try:
        for m in methods:
            if m == "exact":
                results[m] = chromatic_number_exact(g)
            elif m == "simplicial-exact":
                results[m] = chromatic_via_simplicial(g)
            elif args.method == "all" and (not is_in_class(g) or find_c6(g) is None):
                log.info("%s: skipping term-dp, graph outside the pipeline's scope", path)
            else:
                results[m] = chromatic_via_term(_term_for(g))
    except OracleLimitError as e:
        raise UsageError(f"{path}: {e}; try --method simplicial-exact or a smaller graph") \
            from None
    except StateBudgetExceeded as e:
        raise UsageError(f"{path}: {e}; try --method exact") from None
    counts = {m: c.count for m, c in results.items()}
    proper = {m: c.is_proper(g) for m, c in results.items()}
    agree = len(set(counts.values())) == 1 and all(proper.values())
    first = next(iter(results.values()))
    lines = [f"chi = {first.count}" + ("" if len(results) == 1 else
                                       f" ({', '.join(f'{m}: {c}' for m, c in counts.items())})"),
             "colouring: " + " ".join(f"{v}:{c}" for v, c in enumerate(first.assignment))]
    if not agree:
        lines.append("METHODS DISAGREE or colouring improper")
    return Outcome(OK if agree else NEGATIVE, lines,
                   {"chi": first.count, "methods": counts, "proper": proper,
                    "colouring": list(first.assignment)})


def cmd_probe(path, args) -> Outcome:
    g = _load(path)
    if args.report:
        try:
            prior = DecompositionReport.from_json(json.loads(Path(args.report).read_text()))
        except (OSError, ValueError, KeyError) as e:
            raise UsageError(f"{args.report}: cannot read report ({e})") from None
        if max((max(p, default=-1) for p in prior.partition.parts), default=-1) >= g.n:
            raise UsageError(f"{args.report}: report does not match {path}")
        verdicts = verify_observations(g, prior)
        report = prior
    else:
        report, failed = _decompose(g)
        if failed:
            return failed
        verdicts = list(report.verdicts)
    lines = [f"{'observation':20} {'j':>2}  verdict  witness"]
    for v in verdicts:
        tag = v.name + (f" ({v.part})" if v.part else "")
        lines.append(f"{tag:20} {'' if v.j is None else v.j:>2}  "
                     f"{'pass' if v.passed else 'FAIL':7}  {list(v.witness or ())}")
    for cfg in report.configurations:
        lines.append(f"configuration {[t + 1 for t in cfg.triple]}: {cfg.kind}")
    failed = [v for v in verdicts if not v.passed]
    in_class = is_in_class(g)
    if not in_class:
        lines.append(f"graph leaves the class: induced {in_class.pattern} "
                     f"on {list(in_class.witness)}")
    doc = {"verdicts": [v.to_json() for v in verdicts],
           "configurations": [c.to_json() for c in report.configurations],
           "in_class": bool(in_class), "ok": not failed and bool(in_class)}
    return Outcome(OK if doc["ok"] else NEGATIVE, lines, doc)


def cmd_gen(args) -> Outcome:
    if not args.out:
        raise UsageError("gen needs --out")
    seed = args.seed
    if args.kind == "instance":
        if args.params:
            try:
                params = InstanceParams.from_json(json.loads(Path(args.params).read_text()))
            except (OSError, ValueError, TypeError) as e:
                raise UsageError(f"{args.params}: bad parameters ({e})") from None
            if seed is not None:
                params = InstanceParams.from_json({**params.to_json(), "seed": seed})
        else:
            params = preset(args.preset, 0 if seed is None else seed)
        try:
            g = gen_instance(params).graph
        except GenerationError as e:
            return Outcome(NEGATIVE, [str(e)], {"error": str(e)})
        comment = f"instance {json.dumps(params.to_json())}"
    elif args.kind == "3ring":
        try:
            profiles = json.loads(args.profiles) if args.profiles else [[args.m] * args.m] * 3
            g = gen_3ring(args.m, profiles).graph
        except ValueError as e:
            raise UsageError(str(e)) from None
        comment = f"3-ring m={args.m} profiles={json.dumps(profiles)}"
    else:
        if args.n is None or args.n < 0:
            raise UsageError("random graphs need --n >= 0")
        try:
            g = gen_random(args.n, args.p, 0 if seed is None else seed)
        except ValueError as e:
            raise UsageError(str(e)) from None
        comment = f"random n={args.n} p={args.p} seed={seed}"
    write_graph(g, args.out, comment)
    return Outcome(OK, [f"wrote {args.out} (n={g.n}, m={g.m})"],
                   {"out": args.out, "n": g.n, "m": g.m})


COMMANDS = {
    "check": cmd_check,
    "decompose": cmd_decompose,
    "term": cmd_term,
    "cwd-oracle": cmd_cwd_oracle,
    "color": cmd_color,
    "probe": cmd_probe,
}


def _run_one(command, path, args) -> Outcome:
    try:
        return COMMANDS[command](path, args)
    except UsageError as e:
        return Outcome(USAGE, [f"error: {e}"], {"error": str(e)})


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON on stdout")
    common.add_argument("--out", help="output file (a directory for several inputs)")

    files = argparse.ArgumentParser(add_help=False)
    files.add_argument("--input", "-i", action="append", required=True,
                       help="graph file in 'p edge' format; repeatable")
    files.add_argument("--jobs", "-j", type=int, default=1,
                       help="process input files in parallel")

    ap = argparse.ArgumentParser(prog="cwf", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"cwf ({kernels.BACKEND} kernels)")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common, files], help="class membership and C6 anchor")
    sub.add_parser("decompose", parents=[common, files], help="26-part partition report")
    t = sub.add_parser("term", parents=[common, files], help="build a clique-width term")
    t.add_argument("--verify", action="store_true", help="evaluate the term against the input")
    c = sub.add_parser("cwd-oracle", parents=[common, files], help="exact clique-width (small n)")
    c.add_argument("--max-width", type=int, default=4)
    col = sub.add_parser("color", parents=[common, files], help="chromatic number")
    col.add_argument("--method", choices=METHODS, default="exact")
    pr = sub.add_parser("probe", parents=[common, files], help="observation verdict table")
    pr.add_argument("--report", help="check against a saved decomposition report")
    g = sub.add_parser("gen", parents=[common], help="write a generated graph")
    g.add_argument("--kind", choices=("instance", "3ring", "random"), default="instance")
    g.add_argument("--preset", choices=PRESETS, default="mixed")
    g.add_argument("--params", help="InstanceParams JSON file (overrides --preset)")
    g.add_argument("--seed", type=int)
    g.add_argument("--n", type=int, help="vertices for --kind random")
    g.add_argument("--p", type=float, default=0.5, help="edge probability for --kind random")
    g.add_argument("--m", type=int, default=2, help="clique size for --kind 3ring")
    g.add_argument("--profiles", help="3-ring staircase profiles as JSON, e.g. [[1,1],[1,1],[1,1]]")
    return ap


def _emit(outcome: Outcome, path, as_json: bool, stream=None):
    stream = stream or sys.stdout
    if as_json:
        doc = {"status": outcome.status, **outcome.doc}
        if path is not None:
            doc["input"] = str(path)
        stream.write(json.dumps(doc) + "\n")
        return
    prefix = f"{path}: " if path is not None else ""
    target = sys.stderr if outcome.status == USAGE else stream
    for i, line in enumerate(outcome.text):
        target.write((prefix if i == 0 else "") + line + "\n")


def main(argv=None) -> int:
    level = os.environ.get("CWF_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code not in (0, None) else 0
    log.debug("kernels backend: %s", kernels.BACKEND)
    if args.command == "gen":
        try:
            outcome = cmd_gen(args)
        except UsageError as e:
            outcome = Outcome(USAGE, [f"error: {e}"], {"error": str(e)})
        _emit(outcome, None, args.json)
        return outcome.status
    paths = args.input
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_run_one, [args.command] * len(paths), paths,
                                     [args] * len(paths)))
    else:
        outcomes = [_run_one(args.command, p, args) for p in paths]
    for p, o in zip(paths, outcomes):
        _emit(o, p if len(paths) > 1 or args.json else None, args.json)
    return max(o.status for o in outcomes)


if __name__ == "__main__":
    sys.exit(main())
