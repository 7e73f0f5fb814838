"""Package reports: assembly from trees or published counts, and rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from . import metrics as m
from .scanner import SourceTree, count_entities, prune_trivial

FORMATS = ("text", "json", "csv")

JSON_KEYS = (
    "package",
    "language",
    "status",
    "error",
    "loc",
    "kloc",
    "functions",
    "files",
    "dirs_raw",
    "dirs_pruned",
    "loc_per_function",
    "functions_per_file",
    "items_per_dir_raw",
    "items_per_dir_pruned",
    "denominator_mode",
    "avg_dir_depth",
    "exp_depth_raw",
    "exp_depth_pruned",
    "corrected_depth",
    "reconstructed_kloc",
    "range_labels",
    "depth_histogram",
)

CSV_COLUMNS = (
    "package",
    "language",
    "status",
    "kloc",
    "functions",
    "files",
    "dirs_raw",
    "dirs_pruned",
    "loc_per_function",
    "functions_per_file",
    "items_per_dir_raw",
    "items_per_dir_pruned",
    "denominator_mode",
    "avg_dir_depth",
    "exp_depth_raw",
    "exp_depth_pruned",
    "corrected_depth",
    "reconstructed_kloc",
    "range_items_per_dir_raw",
    "range_items_per_dir_pruned",
    "depth_histogram",
)

NA = "n/a"


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class PackageReport:
    package: str
    language: str
    status: str = "ok"
    error: Optional[str] = None
    loc: Optional[int] = None
    functions: Optional[int] = None
    files: Optional[int] = None
    dirs_raw: Optional[int] = None
    dirs_pruned: Optional[int] = None
    loc_per_function: Optional[float] = None
    functions_per_file: Optional[float] = None
    items_per_dir_raw: Optional[float] = None
    items_per_dir_pruned: Optional[float] = None
    denominator_mode: str = m.PAPER_TABLES
    avg_dir_depth: Optional[float] = None
    exp_depth_raw: Optional[float] = None
    exp_depth_pruned: Optional[float] = None
    corrected_depth: Optional[float] = None
    reconstructed_kloc: Optional[float] = None
    range_labels: dict = field(default_factory=dict)
    depth_histogram: dict = field(default_factory=dict)

    @property
    def kloc(self) -> Optional[float]:
        return None if self.loc is None else self.loc / 1000

    def as_dict(self) -> dict:
        out = {}
        for key in JSON_KEYS:
            value = getattr(self, key)
            if key == "depth_histogram":
                value = {str(k): v for k, v in value.items()}
            out[key] = value
        return out


def failed_report(package: str, language: str, error: str, mode: str = m.PAPER_TABLES) -> PackageReport:
    return PackageReport(package, language, status="failed", error=error, denominator_mode=m.normalize_mode(mode))


def report_from_counts(
    package: str,
    language: str,
    loc: int,
    functions: int,
    files: int,
    dirs: int,
    dirs_pruned: Optional[int] = None,
    histogram: Optional[Mapping[int, int]] = None,
    mode: str = m.PAPER_TABLES,
) -> PackageReport:
    """Build a report from bare counts, e.g. figures taken from a published table.

    Depth is corrected from the pruned exponential depth when pruned counts
    are given, otherwise from the raw one.
    """
    mode = m.normalize_mode(mode)
    histogram = dict(histogram or {})
    raw = m.tree_metrics(files, dirs, histogram, mode)
    pruned = m.tree_metrics(files, dirs_pruned, histogram, mode) if dirs_pruned is not None else None

    a_used = pruned.items_per_dir_a if pruned else raw.items_per_dir_a
    d_used = pruned.corrected_depth_d if pruned else raw.corrected_depth_d
    levels = m.level_complexity(loc, functions, files, a_used, d_used)

    labels = {
        "loc_per_function": levels.range_labels["loc_per_function"],
        "functions_per_file": levels.range_labels["functions_per_file"],
        "items_per_dir_raw": _label(raw.items_per_dir_a),
        "items_per_dir_pruned": _label(pruned.items_per_dir_a) if pruned else None,
    }
    size = levels.reconstructed_size_S
    return PackageReport(
        package=package,
        language=language,
        loc=loc,
        functions=functions,
        files=files,
        dirs_raw=dirs,
        dirs_pruned=dirs_pruned,
        loc_per_function=levels.c0_loc_per_function,
        functions_per_file=levels.c1_functions_per_file,
        items_per_dir_raw=raw.items_per_dir_a,
        items_per_dir_pruned=pruned.items_per_dir_a if pruned else None,
        denominator_mode=mode,
        avg_dir_depth=raw.avg_dir_depth,
        exp_depth_raw=raw.exp_depth_l,
        exp_depth_pruned=pruned.exp_depth_l if pruned else None,
        corrected_depth=d_used,
        reconstructed_kloc=None if size is None else size / 1000,
        range_labels=labels,
        depth_histogram=histogram,
    )


def _label(value: Optional[float]) -> Optional[str]:
    return None if value is None else m.classify_magic_range(value)


def analyze_tree(tree: SourceTree, package: str = "", mode: str = m.PAPER_TABLES, prune: bool = True) -> PackageReport:
    loc = functions = 0
    for f, _ in tree.files():
        loc += f.metrics.loc
        functions += f.metrics.functions
    pruned_tree = prune_trivial(tree) if prune else None
    counts = count_entities(tree, pruned_tree) if prune else None
    T = sum(1 for _ in tree.files())
    D = sum(1 for _ in tree.directories())
    return report_from_counts(
        package or tree.root.name,
        tree.language,
        loc,
        functions,
        T,
        D,
        dirs_pruned=counts.pruned_dirs if counts else None,
        histogram=m.depth_distribution(tree),
        mode=mode,
    )


def _fmt(value, places: Optional[int] = None) -> str:
    if value is None:
        return NA
    if places is None:
        return str(value)
    return f"{m.round_half_up(value, places):.{places}f}"


# (header, attribute, decimals) per text column
_TEXT_COLUMNS = (
    ("package", "package", None),
    ("language", "language", None),
    ("kLOC", "kloc", 0),
    ("functions", "functions", None),
    ("files", "files", None),
    ("dirs", "dirs_raw", None),
    ("pruned dirs", "dirs_pruned", None),
    ("LOC/function", "loc_per_function", 1),
    ("functions/file", "functions_per_file", 1),
    ("items/dir", "items_per_dir_raw", 2),
    ("pruned items/dir", "items_per_dir_pruned", 2),
    ("dir depth", "avg_dir_depth", 1),
    ("exp depth", "exp_depth_raw", 1),
    ("pruned depth", "exp_depth_pruned", 2),
    ("depth", "corrected_depth", 2),
)


def _text_cells(r: PackageReport) -> list[str]:
    if r.status != "ok":
        return [r.package, r.language or NA, f"FAILED: {r.error}"]
    return [_fmt(getattr(r, attr), places) for _, attr, places in _TEXT_COLUMNS]


def _render_text(reports: Sequence[PackageReport]) -> str:
    headers = [h for h, _, _ in _TEXT_COLUMNS]
    rows = [_text_cells(r) for r in reports]
    widths = [len(h) for h in headers]
    for row in rows:
        if len(row) == len(headers):
            widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = ["  ".join(h.rjust(w) if i > 1 else h.ljust(w) for i, (h, w) in enumerate(zip(headers, widths)))]
    lines.append("-" * len(lines[0]))
    for row in rows:
        if len(row) != len(headers):
            lines.append("  ".join(row))
            continue
        lines.append("  ".join(c.rjust(w) if i > 1 else c.ljust(w) for i, (c, w) in enumerate(zip(row, widths))))
    return "\n".join(lines) + "\n"


def _csv_value(r: PackageReport, column: str) -> str:
    if column.startswith("range_"):
        return r.range_labels.get(column[len("range_"):]) or NA
    if column == "depth_histogram":
        if not r.depth_histogram:
            return NA
        return ";".join(f"{k}:{v}" for k, v in sorted(r.depth_histogram.items()))
    value = getattr(r, column)
    if value is None:
        return NA
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_csv(reports: Sequence[PackageReport]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in reports:
        lines.append(",".join(_csv_value(r, c).replace(",", ";") for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def render(report: Union[PackageReport, Iterable[PackageReport]], fmt: str = "text") -> str:
    """Render one report or a sequence; row order always follows the input.

    A single report renders as a JSON object, a sequence as a JSON array.
    """
    if fmt not in FORMATS:
        raise UsageError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    single = isinstance(report, PackageReport)
    reports = [report] if single else list(report)
    if fmt == "json":
        payload = reports[0].as_dict() if single else [r.as_dict() for r in reports]
        return json.dumps(payload, indent=2, allow_nan=False) + "\n"
    if fmt == "csv":
        return _render_csv(reports)
    return _render_text(reports)


def histogram_export(histogram: Mapping[int, int], fit: Optional[m.NormalFit] = None) -> str:
    """Tab-separated depth/count rows with the fitted normal scaled to file counts.

    Rows span every depth between the shallowest and deepest populated level.
    """
    lines = ["depth\tcount\tfitted"]
    populated = [d for d, n in histogram.items() if n > 0]
    if not populated:
        return lines[0] + "\n"
    total = sum(histogram.values())
    if fit is None:
        try:
            fit = m.normal_fit(histogram)
        except m.UndefinedMetricError:
            fit = None
    for depth in range(min(populated), max(populated) + 1):
        n = histogram.get(depth, 0)
        if fit is None or fit.degenerate:
            fitted = NA if fit is None else f"{float(total if depth == fit.mean else 0):.6f}"
        else:
            fitted = f"{total * fit.pdf(depth):.6f}"
        lines.append(f"{depth}\t{n}\t{fitted}")
    return "\n".join(lines) + "\n"
