"""Curve parsing, the analysis pipeline, and JSON/text report rendering."""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from typing import Iterable, Optional

from sympy import factorint

from .local import classify_prime, local_root_number_3
from .padic import INF
from .sym3 import UnsupportedPrime, assemble_global
from .weierstrass import IDENTITY, Curve, SingularCurve, invariants, is_minimal_at, minimize

STATUSES = ("ok", "refused-unsupported-2", "refused-singular", "refused-nonminimal", "error-malformed")


class CurveParseError(ValueError):
    def __init__(self, message: str, offset: int, text: str):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset
        self.text = text
        self.reason = message


@dataclass(frozen=True)
class CurveSpec:
    raw: str
    coefficients: tuple
    label: Optional[str] = None

    @property
    def curve(self) -> Curve:
        return Curve(*self.coefficients)


_TOKEN = re.compile(r"\s*(?:(?P<int>[+-]?\d+)|(?P<punct>[\[\],])|(?P<junk>[^\s\[\],]+))")


def parse_curve(text: str, label: Optional[str] = None) -> CurveSpec:
    """Parse ``[a1,a2,a3,a4,a6]``; whitespace is ignored between tokens."""

    def offset(i):
        return len(text[:i].encode())

    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:  # only trailing whitespace left
            break
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()

    def expect(i, what):
        if i >= len(tokens):
            raise CurveParseError(f"expected {what}, found end of input", offset(len(text)), text)
        kind, val, start = tokens[i]
        return kind, val, start

    kind, val, start = expect(0, "'['")
    if val != "[":
        raise CurveParseError(f"expected '[', found {val!r}", offset(start), text)
    coeffs = []
    i = 1
    while True:
        kind, val, start = expect(i, "an integer")
        if kind != "int":
            if val == "]":
                raise CurveParseError(
                    f"expected 5 coefficients, got {len(coeffs)}", offset(start), text
                )
            raise CurveParseError(f"expected an integer, found {val!r}", offset(start), text)
        coeffs.append(int(val))
        kind, val, start = expect(i + 1, "',' or ']'")
        i += 2
        if val == "]":
            if len(coeffs) != 5:
                raise CurveParseError(
                    f"expected 5 coefficients, got {len(coeffs)}", offset(start), text
                )
            break
        if val != ",":
            raise CurveParseError(f"expected ',' or ']', found {val!r}", offset(start), text)
        if len(coeffs) == 5:
            raise CurveParseError("expected ']' after 5 coefficients", offset(start), text)
    if i < len(tokens):
        _, val, start = tokens[i]
        raise CurveParseError(f"unexpected trailing {val!r}", offset(start), text)
    return CurveSpec(text, tuple(coeffs), label)


@dataclass
class AnalyzeOptions:
    minimize: bool = False
    assume_minimal: bool = False
    root_number_3: Optional[int] = None


@dataclass
class ReportEnvelope:
    input: dict
    status: str
    curve: Optional[list] = None
    minimality: Optional[dict] = None
    report: Optional[dict] = None
    partial: Optional[dict] = None
    error: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "input": self.input,
            "status": self.status,
            "curve": self.curve,
            "minimality": self.minimality,
            "report": self.report,
            "partial": self.partial,
            "error": self.error,
        }


def dumps(obj) -> str:
    """Stable single-line JSON: sorted keys, integers rendered exactly."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _val(v):
    return "inf" if v == INF else v


def _prime_json(pr) -> dict:
    c = pr.local
    out = {
        "p": c.p,
        "reduction_type": c.reduction.value,
        "v_disc": c.v_disc,
        "v_c4": _val(c.v_c4),
        "v_c6": _val(c.v_c6),
        "j_integral": c.j_integral,
        "gl2": c.gl2.to_json(),
        "sym3": pr.sym3.to_json() if pr.sym3 is not None else None,
    }
    if c.q3_condition is not None:
        out["q3_condition"] = c.q3_condition.value
        out["kodaira_type"] = c.kodaira
        out["legendre_disc_unit"] = c.legendre_disc_unit
    if c.e is not None:
        out["e"] = c.e
    return out


def _invariants_json(inv) -> dict:
    return {
        "discriminant": inv.disc,
        "c4": inv.c4,
        "c6": inv.c6,
        "j_invariant": str(inv.j),
    }


def analyze(spec: CurveSpec, options: Optional[AnalyzeOptions] = None) -> ReportEnvelope:
    options = options or AnalyzeOptions()
    echo = {"raw": spec.raw, "label": spec.label, "coefficients": list(spec.coefficients)}
    curve = spec.curve
    try:
        inv = invariants(curve)
    except SingularCurve as exc:
        return ReportEnvelope(echo, "refused-singular", error=str(exc))

    minimality = {"checked": not options.assume_minimal, "transformation": None}
    if options.minimize:
        curve, tr = minimize(curve)
        if not tr.is_identity:
            minimality["transformation"] = tr.to_json()
            inv = invariants(curve)
        minimality["input_minimal"] = tr == IDENTITY
    factors = factorint(abs(inv.disc))
    if not options.minimize and not options.assume_minimal:
        bad = [p for p, e in sorted(factors.items()) if e >= 12 and not is_minimal_at(curve, p)]
        minimality["input_minimal"] = not bad
        if bad:
            return ReportEnvelope(
                echo,
                "refused-nonminimal",
                curve=list(curve.ainvs),
                minimality=minimality,
                error=f"model is not minimal at {bad}; rerun with --minimize",
            )
    if options.assume_minimal:
        minimality["input_minimal"] = None

    classes = [classify_prime(inv, p) for p in sorted(factors)]
    w3 = local_root_number_3(curve, options.root_number_3)
    base = {"invariants": _invariants_json(inv)}
    try:
        g = assemble_global(classes, inv.j, w3)
    except UnsupportedPrime as exc:
        partial = dict(base, cm=exc.cm_flag, primes=[_prime_json(pr) for pr in exc.partial])
        return ReportEnvelope(
            echo,
            "refused-unsupported-2",
            curve=list(curve.ainvs),
            minimality=minimality,
            partial=partial,
            error=str(exc),
        )
    report = dict(
        base,
        conductor_N=g.conductor_N,
        level_M=g.level_M,
        cm=g.cm_flag,
        gamma_factor=g.gamma_factor_note,
        primes=[_prime_json(pr) for pr in g.per_prime],
        atkin_lehner=[{"p": p, "eta": s.render()} for p, s in g.atkin_lehner],
        warnings=list(g.warnings),
    )
    return ReportEnvelope(echo, "ok", curve=list(curve.ainvs), minimality=minimality, report=report)


# ---------------------------------------------------------------------------
# batch input


_CSV_HEADER = ["label", "a1", "a2", "a3", "a4", "a6"]


@dataclass
class BatchItem:
    line: int
    text: str
    spec: Optional[CurveSpec] = None
    error: Optional[str] = None


def _split_label(line: str):
    i = line.find("[")
    if i > 0 and line[:i].strip():
        return line[i:], line[:i].strip()
    return line, None


def read_batch(lines: Iterable[str]) -> list[BatchItem]:
    """Newline-delimited ``[a1,...,a6]`` specs (optionally prefixed by a
    label), or CSV with a ``label,a1,a2,a3,a4,a6`` header."""
    lines = [ln.rstrip("\r\n") for ln in lines]
    numbered = [(i + 1, ln) for i, ln in enumerate(lines) if ln.strip()]
    if not numbered:
        return []
    first = [c.strip().lower() for c in numbered[0][1].split(",")]
    items = []
    if first == _CSV_HEADER:
        for lineno, text in numbered[1:]:
            row = next(csv.reader(io.StringIO(text)))
            if len(row) != 6:
                items.append(BatchItem(lineno, text, error=f"expected 6 CSV fields, got {len(row)}"))
                continue
            raw = "[" + ",".join(f.strip() for f in row[1:]) + "]"
            try:
                items.append(BatchItem(lineno, text, parse_curve(raw, row[0].strip() or None)))
            except CurveParseError as exc:
                items.append(BatchItem(lineno, text, error=f"{exc.reason} in {raw!r}"))
        return items
    for lineno, text in numbered:
        raw, label = _split_label(text.strip())
        try:
            items.append(BatchItem(lineno, text, parse_curve(raw, label)))
        except CurveParseError as exc:
            items.append(BatchItem(lineno, text, error=str(exc)))
    return items


def analyze_item(item: BatchItem, options: AnalyzeOptions) -> ReportEnvelope:
    if item.spec is None:
        return ReportEnvelope(
            {"raw": item.text, "label": None, "coefficients": None, "line": item.line},
            "error-malformed",
            error=item.error,
        )
    env = analyze(item.spec, options)
    env.input["line"] = item.line
    return env


def _analyze_packed(args):
    item, options = args
    return analyze_item(item, options)


def batch(lines: Iterable[str], options: Optional[AnalyzeOptions] = None, jobs: int = 1):
    """Analyse every line; envelopes come back in input order for any ``jobs``."""
    options = options or AnalyzeOptions()
    items = read_batch(lines)
    if jobs <= 1 or len(items) <= 1:
        return [analyze_item(it, options) for it in items]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_analyze_packed, [(it, options) for it in items], chunksize=4))


def summarize(envelopes) -> dict:
    counts = {s: 0 for s in STATUSES}
    for env in envelopes:
        counts[env.status] += 1
    counts["total"] = len(envelopes)
    return counts


# ---------------------------------------------------------------------------
# text rendering


def render_text(env: ReportEnvelope) -> str:
    label = env.input.get("label")
    head = f"{label}: " if label else ""
    head += env.input["raw"]
    lines = [head, f"  status: {env.status}"]
    if env.error:
        lines.append(f"  error: {env.error}")
    if env.minimality and env.minimality.get("transformation"):
        tr = env.minimality["transformation"]
        model = "[" + ",".join(str(a) for a in env.curve) + "]"
        lines.append(f"  minimal model {model} via (u,r,s,t) = ({tr['u']},{tr['r']},{tr['s']},{tr['t']})")
    rep = env.report
    if rep is None:
        if env.partial:
            for pr in env.partial["primes"]:
                lines.append(f"  p={pr['p']}: {pr['reduction_type']} ({pr['gl2']['kind']})")
        return "\n".join(lines)
    lines.append(f"  discriminant: {rep['invariants']['discriminant']}  j: {rep['invariants']['j_invariant']}")
    lines.append(f"  conductor N = {rep['conductor_N']}")
    lines.append(f"  paramodular level M = {rep['level_M']}")
    for pr in rep["primes"]:
        s = pr["sym3"]
        extra = f" [{pr['q3_condition']}]" if "q3_condition" in pr else ""
        lines.append(
            f"  p={pr['p']}: {pr['reduction_type']}{extra}, a(pi)={pr['gl2']['conductor_exponent']}, "
            f"k={s['conductor_exponent_k']}, type {s['rep_type']}, eta={s['epsilon']}, L_p={s['l_factor']}"
        )
    lines.append(f"  gamma factor: {rep['gamma_factor']}")
    for w in rep["warnings"]:
        lines.append(f"  warning: {w}")
    return "\n".join(lines)
