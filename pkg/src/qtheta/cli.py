"""Command-line front end: ``qtheta list|show|verify|verify-all|eval``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .corpus.harness import (ERROR, FAIL, MODES, PASS, Corpus, VerificationReport, _check_once,
                             compare, _space, verify_all, verify_entry)
from .dsl.evaluator import Evaluator
from .dsl.parser import parse
from .dsl.printer import pretty_file
from .errors import PrecisionError, QThetaError
from .qseries import render_series

EXIT = {PASS: 0, FAIL: 1, ERROR: 2}
USAGE_ERROR = 3
SEED_MAX = 2 ** 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2, which collides with the ERROR verdict
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class CliConfig:
    command: str
    ids: list = field(default_factory=list)
    order: Optional[int] = None
    window: Optional[int] = None
    mode: Optional[str] = None
    seed: int = 0
    json: bool = False
    corpus: Optional[str] = None
    jobs: Optional[int] = None
    file: Optional[str] = None

    def validate(self):
        if self.order is not None and self.order < 1:
            raise UsageError("--order must be at least 1")
        if self.window is not None and self.window < 1:
            raise UsageError("--window must be at least 1")
        if not 0 <= self.seed < SEED_MAX:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        if self.jobs is not None and self.jobs < 1:
            raise UsageError("--jobs must be at least 1")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", "-n", type=int, help="q-truncation order N")
    common.add_argument("--window", "-d", type=int, help="parameter window D")
    common.add_argument("--mode", choices=MODES)
    common.add_argument("--seed", type=int, default=0, help="seed for point mode")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--corpus", help="corpus directory (default: $QTHETA_CORPUS or shipped)")

    p = _Parser(prog="qtheta", description="Verify q-series identities by exact truncated expansion.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    sub.add_parser("list", parents=[common], help="list corpus ids with anchors")
    s = sub.add_parser("show", parents=[common], help="pretty-print an identity file")
    s.add_argument("ids", nargs=1, metavar="id")
    v = sub.add_parser("verify", parents=[common], help="verify the given ids")
    v.add_argument("ids", nargs="+", metavar="id")
    a = sub.add_parser("verify-all", parents=[common], help="verify every manifest entry")
    a.add_argument("--jobs", type=int, default=None, help="worker processes")
    e = sub.add_parser("eval", parents=[common], help="evaluate both sides of an identity file")
    e.add_argument("file")
    return p


def parse_args(argv) -> CliConfig:
    ns = build_parser().parse_args(argv)
    cfg = CliConfig(command=ns.command, ids=list(getattr(ns, "ids", None) or []), order=ns.order,
                    window=ns.window, mode=ns.mode, seed=ns.seed, json=ns.json, corpus=ns.corpus,
                    jobs=getattr(ns, "jobs", None), file=getattr(ns, "file", None))
    cfg.validate()
    return cfg


# --- output ---------------------------------------------------------------------

def _mismatch_text(r: VerificationReport) -> str:
    if r.error:
        return r.error
    m = r.first_mismatch
    if m is None:
        return ""
    where = f"q^{m.q_exp} * {m.monomial}"
    out = f"{m.identity}: {where}: lhs {m.lhs}, rhs {m.rhs}" if m.identity else f"{where}: lhs {m.lhs}, rhs {m.rhs}"
    if m.point:
        out += " at " + ", ".join(f"{k}={v}" for k, v in m.point.items())
    return out


def emit_report(reports, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps([r.to_json() for r in reports], indent=2)
    rows = [("id", "verdict", "modulus", "time", "first mismatch")]
    for r in reports:
        rows.append((r.id, r.verdict, f"O(q^{r.order}), |e|<={r.window}", f"{r.millis / 1000:.2f}s",
                     _mismatch_text(r)))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = []
    for row in rows:
        cells = [c.ljust(w) for c, w in zip(row[:4], widths)]
        lines.append("  ".join(cells + [row[4]]).rstrip())
    return "\n".join(lines)


def _exit_code(reports) -> int:
    return max((EXIT[r.verdict] for r in reports), default=0)


# --- commands -------------------------------------------------------------------

def _list(cfg, corpus, out):
    if cfg.json:
        rows = [{"id": i, "anchor": corpus.meta(i)["anchor"]} for i in corpus.ids]
        print(json.dumps(rows, indent=2), file=out)
    else:
        w = max(len(i) for i in corpus.ids)
        for i in corpus.ids:
            print(f"{i.ljust(w)}  {corpus.meta(i)['anchor']}", file=out)
    return 0


def _show(cfg, corpus, out):
    ident = cfg.ids[0]
    entry = corpus.entry(ident)
    print(pretty_file(entry.decls), file=out, end="")
    return 0


def _verify(cfg, corpus, out):
    reports = [verify_entry(i, cfg.mode, cfg.order, cfg.window, cfg.seed, corpus) for i in cfg.ids]
    print(emit_report(reports, "json" if cfg.json else "text"), file=out)
    return _exit_code(reports)


def _verify_all(cfg, corpus, out):
    jobs = cfg.jobs or os.cpu_count() or 1
    reports = verify_all(cfg.mode, cfg.order, cfg.window, cfg.seed, corpus, jobs)
    print(emit_report(reports, "json" if cfg.json else "text"), file=out)
    return _exit_code(reports)


def _eval(cfg, corpus, out):
    decls = parse(Path(cfg.file).read_text(encoding="utf-8"))
    results = []
    code = 0
    for d in decls:
        order = cfg.order or d.order or 20
        window = cfg.window or d.window or 8
        space, target = _space(d, set(d.param_names), order, window)
        ev = Evaluator(space)
        lhs, rhs = ev.eval(d.lhs), ev.eval(d.rhs)
        try:
            try:
                mm = compare(lhs, rhs, order, target)
            except PrecisionError:
                # the retry loop widens the working region
                mm, _ = _check_once(d, set(d.param_names), None, order, window)
            verdict = PASS if mm is None else FAIL
        except QThetaError as err:
            verdict = f"{ERROR} ({err})"
        code = max(code, EXIT[verdict.split()[0]])
        results.append({"id": d.name, "order": order, "window": window, "lhs": render_series(lhs),
                        "rhs": render_series(rhs), "verdict": verdict})
    if cfg.json:
        print(json.dumps(results, indent=2), file=out)
    else:
        for r in results:
            print(f"{r['id']}  (O(q^{r['order']}), window {r['window']})", file=out)
            print(f"  lhs = {r['lhs']}", file=out)
            print(f"  rhs = {r['rhs']}", file=out)
            print(f"  {r['verdict']}", file=out)
    return code


COMMANDS = {"list": _list, "show": _show, "verify": _verify, "verify-all": _verify_all,
            "eval": _eval}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(exc, file=err)
        return USAGE_ERROR
    except SystemExit as exc:  # --help
        return 0 if not exc.code else USAGE_ERROR
    try:
        corpus = Corpus(cfg.corpus) if cfg.corpus or cfg.command != "eval" else None
        return COMMANDS[cfg.command](cfg, corpus, out)
    except (QThetaError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return EXIT[ERROR]


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
