"""Verification of corpus identities within a truncation modulus."""

from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from ..coeffring import INF, CoeffRing, ParamSet, Window, render_monomial
from ..errors import (EvaluationError, NotInvertible, PrecisionError, QThetaError,
                      UnknownIdentity)
from ..qseries import QSeries, SeriesSpace
from ..dsl import ast as A
from ..dsl.evaluator import Evaluator, graded_params
from ..dsl.parser import parse
from .mutate import mutations

PASS, FAIL, ERROR = "PASS", "FAIL", "ERROR"
MODES = ("symbolic", "point", "both")
DEFAULT_ORDER = 20
DEFAULT_WINDOW = 8
POINTS = 3
RESAMPLES = 10
MAX_ATTEMPTS = 4


@dataclass
class Mismatch:
    q_exp: int
    monomial: str
    lhs: str
    rhs: str
    identity: str = ""
    point: Optional[dict] = None

    def to_json(self):
        out = {"qExp": self.q_exp, "monomial": self.monomial, "lhs": self.lhs, "rhs": self.rhs}
        if self.point:
            out["point"] = self.point
        return out


@dataclass
class VerificationReport:
    id: str
    verdict: str
    order: int
    window: int
    mode: str
    first_mismatch: Optional[Mismatch] = None
    clipped: bool = False
    millis: int = 0
    error: Optional[str] = None
    details: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict == PASS

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "verdict": self.verdict,
            "order": self.order,
            "window": self.window,
            "mode": self.mode,
            "firstMismatch": self.first_mismatch.to_json() if self.first_mismatch else None,
            "clipped": self.clipped,
            "millis": self.millis,
        }
        if self.error:
            out["error"] = self.error
        return out


# --- corpus loading -------------------------------------------------------------

@dataclass(frozen=True)
class CorpusEntry:
    id: str
    file: str
    anchor: str
    order: int
    window: int
    modes: str
    mutation: bool
    decls: tuple

    @property
    def point_allowed(self) -> bool:
        return self.modes in ("point", "both")


def default_corpus_dir() -> Path:
    env = os.environ.get("QTHETA_CORPUS")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent


class Corpus:
    def __init__(self, directory=None):
        self.dir = Path(directory) if directory else default_corpus_dir()
        manifest = self.dir / "manifest.json"
        if not manifest.exists():
            raise UnknownIdentity(f"no manifest.json in {self.dir}")
        with open(manifest, encoding="utf-8") as fh:
            self.manifest = json.load(fh)
        self.ids = [e["id"] for e in self.manifest["entries"]]
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("duplicate ids in manifest")
        self._by_id = {e["id"]: e for e in self.manifest["entries"]}
        self._cache = {}

    def meta(self, ident: str) -> dict:
        try:
            return self._by_id[ident]
        except KeyError:
            raise UnknownIdentity(f"unknown identity '{ident}'") from None

    def source(self, ident: str) -> str:
        return (self.dir / self.meta(ident)["file"]).read_text(encoding="utf-8")

    def entry(self, ident: str) -> CorpusEntry:
        if ident in self._cache:
            return self._cache[ident]
        m = self.meta(ident)
        decls = tuple(parse(self.source(ident)))
        e = CorpusEntry(ident, m["file"], m["anchor"], m.get("order", DEFAULT_ORDER),
                        m.get("window", DEFAULT_WINDOW), m.get("modes", "symbolic"),
                        bool(m.get("mutation", False)), decls)
        self._cache[ident] = e
        return e

    def __iter__(self):
        return iter(self.ids)


# --- comparison -----------------------------------------------------------------

def _fmt(v) -> str:
    return str(Fraction(v)) if v is not None else "0"


def compare(lhs: QSeries, rhs: QSeries, order: int, window: Window):
    """Return the first mismatch of ``lhs - rhs`` inside the modulus, or None.

    Raises ``PrecisionError`` (with ``q_deficit`` / ``w_deficit``) when the
    difference is not known exactly on the whole region.
    """
    diff = lhs - rhs
    params = diff.ring.params
    q_deficit = max(0, order - diff.order) if diff.order != INF else 0
    need = window.cap
    w_deficit = [0] * len(need)
    for k, c in diff.coeffs.items():
        if k < order:
            for i, (cap, n) in enumerate(zip(c.cap, need)):
                if cap < n:
                    w_deficit[i] = max(w_deficit[i], n - cap)
    if q_deficit or any(w_deficit):
        short = {p: d for p, d in zip(params.names, w_deficit) if d}
        err = PrecisionError(
            f"exact region too small: q-order {diff.order} (need {order}), "
            f"parameter precision short by {short or 0}")
        err.q_deficit, err.w_deficit = q_deficit, w_deficit
        raise err
    for k in sorted(diff.coeffs):
        if k >= order:
            break
        c = diff.coeffs[k]
        for raw, v in c.items_raw():
            o = params.orient(raw)
            if all(lo <= e <= hi for e, lo, hi in zip(o, window.lower, window.upper)) and v:
                lv = lhs.coeffs.get(k)
                rv = rhs.coeffs.get(k)
                return Mismatch(k, render_monomial(params.names, raw) or "1",
                                _fmt(lv.terms.get(o) if lv else None),
                                _fmt(rv.terms.get(o) if rv else None))
    return None


def _space(decl: A.IdentityDecl, symbolic, order, window, q_slack=0, w_slack=None):
    names = tuple(n for n in decl.param_names if n in symbolic)
    params = ParamSet(names, frozenset(decl.inverted & set(names)))
    k = len(names)
    w_slack = w_slack or [0] * k
    win = Window(tuple(window + w for w in w_slack), (-window,) * k)
    return SeriesSpace(CoeffRing(params, win), order + q_slack), Window((window,) * k, (-window,) * k)


def _check_once(decl, symbolic, point, order, window):
    q_slack = 0
    w_slack = [0] * len([n for n in decl.param_names if n in symbolic])
    last = None
    for _ in range(MAX_ATTEMPTS):
        space, target = _space(decl, symbolic, order, window, q_slack, w_slack)
        ev = Evaluator(space, point)
        lhs = ev.eval(decl.lhs)
        rhs = ev.eval(decl.rhs)
        try:
            mm = compare(lhs, rhs, order, target)
            return mm, lhs.clipped or rhs.clipped
        except PrecisionError as err:
            last = err
            if err.q_deficit:
                q_slack += err.q_deficit + 2
            w_slack = [w + d + 1 if d else w for w, d in zip(w_slack, err.w_deficit)]
    raise last


def random_point(rng: random.Random, names) -> dict:
    out = {}
    for n in names:
        den = rng.randint(2, 9)
        out[n] = Fraction(rng.randint(1, den - 1), den)
    return out


def check_decl(decl: A.IdentityDecl, mode: str, order: int, window: int, seed: int = 0):
    """Verify one declaration; returns ``(mismatch | None, clipped)``."""
    params = set(decl.param_names)
    if mode == "symbolic":
        return _check_once(decl, params, None, order, window)
    graded = graded_params(decl)
    free = sorted(params - graded)
    rng = random.Random(seed)
    clipped = False
    for _ in range(POINTS):
        for attempt in range(RESAMPLES + 1):
            point = random_point(rng, free)
            try:
                mm, cl = _check_once(decl, graded, point, order, window)
                break
            except (EvaluationError, NotInvertible):
                if attempt == RESAMPLES:
                    raise
        clipped = clipped or cl
        if mm is not None:
            mm.point = {k: str(v) for k, v in point.items()}
            return mm, clipped
    return None, clipped


def verify_decls(ident, decls, mode, order, window, seed=0) -> VerificationReport:
    t0 = time.perf_counter()
    rep = VerificationReport(ident, PASS, order, window, mode)
    modes = ("symbolic", "point") if mode == "both" else (mode,)
    try:
        for decl in decls:
            for m in modes:
                mm, cl = check_decl(decl, m, order, window, seed)
                rep.clipped = rep.clipped or cl
                if mm is not None and rep.first_mismatch is None:
                    mm.identity = decl.name
                    rep.verdict = FAIL
                    rep.first_mismatch = mm
                    rep.details.append(f"{decl.name} [{m}]: FAIL")
                else:
                    rep.details.append(f"{decl.name} [{m}]: {'FAIL' if mm else 'PASS'}")
                if mm is not None:
                    rep.verdict = FAIL
    except QThetaError as err:
        rep.verdict = ERROR
        rep.error = f"{type(err).__name__}: {err}"
    rep.millis = int(1000 * (time.perf_counter() - t0))
    return rep


MUTANT_SUFFIX = "-mutated-"


def resolve(corpus: Corpus, ident: str):
    """Corpus id or mutation fixture id ``<id>-mutated-sign`` / ``-mutated-exp`` / ``-mutated-<k>``."""
    if MUTANT_SUFFIX in ident and ident not in corpus.ids:
        base, _, which = ident.rpartition(MUTANT_SUFFIX)
        entry = corpus.entry(base)
        decl = entry.decls[0]
        muts = list(mutations(decl))
        if which in ("sign", "exp"):
            chosen = [d for kind, d in muts if kind == which]
        elif which.isdigit():
            chosen = [d for _, d in muts][int(which):int(which) + 1]
        else:
            chosen = []
        if not chosen:
            raise UnknownIdentity(f"unknown mutation fixture '{ident}'")
        return entry, (chosen[0],) + entry.decls[1:]
    entry = corpus.entry(ident)
    return entry, entry.decls


def verify_entry(ident: str, mode: Optional[str] = None, order: Optional[int] = None,
                 window: Optional[int] = None, seed: int = 0, corpus: Optional[Corpus] = None
                 ) -> VerificationReport:
    corpus = corpus or Corpus()
    try:
        entry, decls = resolve(corpus, ident)
    except UnknownIdentity as err:
        return VerificationReport(ident, ERROR, order or 0, window or 0, mode or "symbolic",
                                  error=f"UnknownIdentity: {err}")
    except QThetaError as err:
        return VerificationReport(ident, ERROR, order or 0, window or 0, mode or "symbolic",
                                  error=f"{type(err).__name__}: {err}")
    order = entry.order if order is None else order
    window = entry.window if window is None else window
    mode = mode or ("both" if entry.point_allowed else "symbolic")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode in ("point", "both") and not entry.point_allowed:
        mode = "symbolic" if mode == "both" else mode
        if mode == "point":
            return VerificationReport(ident, ERROR, order, window, mode,
                                      error="ConfigurationError: point mode not permitted")
    return verify_decls(ident, decls, mode, order, window, seed)


def _verify_job(args):
    ident, mode, order, window, seed, directory = args
    return verify_entry(ident, mode, order, window, seed, Corpus(directory))


def verify_all(mode: Optional[str] = None, order: Optional[int] = None,
               window: Optional[int] = None, seed: int = 0, corpus: Optional[Corpus] = None,
               jobs: int = 1, ids=None) -> list:
    corpus = corpus or Corpus()
    ids = list(ids) if ids is not None else list(corpus.ids)
    args = [(i, mode, order, window, seed, str(corpus.dir)) for i in ids]
    if jobs and jobs > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_verify_job, args))
    else:
        reports = [verify_entry(i, mode, order, window, seed, corpus) for i in ids]
    return sorted(reports, key=lambda r: ids.index(r.id))
