"""Serializers and emitters for solutions and alternate-feature reports.

JSON numbers use Python's shortest round-trip ``repr`` so documents reload
to identical floats and re-emit byte for byte.

DOT layout (one statement per line, two-space indent)::

    graph alternates {
      rankdir=LR;
      { rank=same; "orig1"; "orig2"; }
      { rank=same; "alt1"; "alt2"; }
      "orig1" -- "alt1" [label="0.01230"];
    }

Originals on the left rank, alternates on the right, one undirected edge per
pair labelled with the score to 4 significant digits.  An empty report is
``graph alternates {`` followed by ``}``.
"""

from __future__ import annotations

import json
import logging

from .alternates import AlternatePair, AlternateReport, FailedSolve, rank_alternates
from .solver import LassoSolution

logger = logging.getLogger(__name__)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def solution_json(solution: LassoSolution) -> str:
    return dumps(solution.to_dict())


def report_to_dict(report: AlternateReport) -> dict:
    def side(i, j):
        return {"original": report.label(i), "original_index": i,
                "alternate": report.label(j), "alternate_index": j}

    return {
        "naive_solves": report.naive_solve_count,
        "actual_solves": report.actual_solve_count,
        "pairs": [{**side(pr.original, pr.alternate), "coefficient": pr.coefficient, "score": pr.score}
                  for pr in report.pairs],
        "failures": [{**side(f.original, f.alternate), "last_iterate": f.last_iterate}
                     for f in report.failures],
    }


def report_json(report: AlternateReport) -> str:
    return dumps(report_to_dict(report))


def report_from_dict(doc: dict) -> AlternateReport:
    names: dict[int, str] = {}

    def take(entry):
        i, j = int(entry["original_index"]), int(entry["alternate_index"])
        for idx, label in ((i, entry["original"]), (j, entry["alternate"])):
            if isinstance(label, str):
                names[idx] = label
        return i, j

    pairs, failures = [], []
    for entry in doc["pairs"]:
        i, j = take(entry)
        pairs.append(AlternatePair(i, j, float(entry["coefficient"]), float(entry["score"])))
    for entry in doc.get("failures", []):
        i, j = take(entry)
        failures.append(FailedSolve(i, j, float(entry["last_iterate"])))
    return AlternateReport(tuple(pairs), int(doc["naive_solves"]), int(doc["actual_solves"]),
                           tuple(failures), dict(sorted(names.items())))


def report_from_json(text: str) -> AlternateReport:
    return report_from_dict(json.loads(text))


# -- DOT ------------------------------------------------------------------------


def dot_quote(name) -> str:
    s = str(name).replace("\\", "\\\\").replace('"', '\\"')
    s = s.replace("\r", "").replace("\n", "\\n")
    return f'"{s}"'


def format_score(x: float) -> str:
    return f"{x:#.4g}"


def emit_dot(report: AlternateReport) -> str:
    if not report.pairs:
        return "graph alternates {\n}\n"
    originals = sorted({pr.original for pr in report.pairs})
    alternates = sorted({pr.alternate for pr in report.pairs})
    node = {j: dot_quote(report.label(j)) for j in originals + alternates}
    lines = ["graph alternates {", "  rankdir=LR;"]
    lines.append("  { rank=same; " + " ".join(f"{node[i]};" for i in originals) + " }")
    lines.append("  { rank=same; " + " ".join(f"{node[j]};" for j in alternates) + " }")
    for pr in report.pairs:
        lines.append(f'  {node[pr.original]} -- {node[pr.alternate]} [label="{format_score(pr.score)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- TSV ------------------------------------------------------------------------


def _g6(x: float) -> str:
    return f"{x:.6g}"


def emit_table(report: AlternateReport, origin: int, top_k: int | None = None) -> str:
    """Rows ``alternate<TAB>coefficient<TAB>score`` for one origin, closest first."""
    if origin not in {pr.original for pr in report.pairs}:
        logger.warning("feature %s has no alternates in this report", report.label(origin))
        return ""
    rows = rank_alternates(report, origin, top_k)
    return "".join(f"{report.label(pr.alternate)}\t{_g6(pr.coefficient)}\t{_g6(pr.score)}\n" for pr in rows)


def emit_full_table(report: AlternateReport, top_k: int | None = None) -> str:
    """Every origin's ranked alternates with a leading ``original`` column."""
    out = []
    for i in report.origins():
        for pr in rank_alternates(report, i, top_k):
            out.append(f"{report.label(i)}\t{report.label(pr.alternate)}\t"
                       f"{_g6(pr.coefficient)}\t{_g6(pr.score)}\n")
    return "".join(out)


def counts_line(report: AlternateReport) -> str:
    pct = 100.0 * report.reduction
    return f"solves: {report.actual_solve_count} / {report.naive_solve_count} ({pct:.3f}%)"
