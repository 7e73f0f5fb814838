"""Modularity metrics over file and directory counts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_FLOOR, ROUND_HALF_UP, Decimal
from typing import Mapping, Optional

from .scanner import SourceTree

EQ2 = "eq2"
PAPER_TABLES = "paper-tables"
DENOMINATOR_MODES = (EQ2, PAPER_TABLES)
_MODE_ALIASES = {"paper": PAPER_TABLES, "tables": PAPER_TABLES}

MAGIC_LOW = 5
MAGIC_HIGH = 9


class UndefinedMetricError(ValueError):
    """A metric is mathematically undefined for the given counts."""


def normalize_mode(mode: str) -> str:
    mode = _MODE_ALIASES.get(mode, mode)
    if mode not in DENOMINATOR_MODES:
        raise ValueError(f"unknown denominator mode {mode!r}")
    return mode


def round_half_up(value: float, places: int) -> float:
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def items_per_directory(T: int, D: int, mode: str = PAPER_TABLES) -> float:
    """Average items (files plus subdirectories) per directory.

    ``eq2`` counts the root in the denominator, (T+D)/(D+1); ``paper-tables``
    uses (T+D)/D, which is what the published tables were computed with.
    """
    mode = normalize_mode(mode)
    if T < 1:
        raise UndefinedMetricError("items per directory needs at least one file")
    if D < 0:
        raise ValueError("negative directory count")
    if mode == EQ2:
        return (T + D) / (D + 1)
    if D == 0:
        raise UndefinedMetricError("paper-tables denominator is zero when D = 0")
    return (T + D) / D


def exponential_depth(T: int, a: float) -> float:
    """Depth of the exponential tree holding ``T`` files at ``a`` items per directory."""
    if T < 1:
        raise UndefinedMetricError("exponential depth needs at least one file")
    if a <= 1:
        raise UndefinedMetricError(f"exponential depth undefined for a={a} <= 1")
    return math.log(T) / math.log(a)


def corrected_depth(l: float) -> float:
    # one extra level for functions inside files
    return l + 1


def depth_distribution(tree: SourceTree) -> dict[int, int]:
    """Files per depth; a file directly in the root has depth 1."""
    hist: dict[int, int] = {}
    for _, depth in tree.files():
        hist[depth] = hist.get(depth, 0) + 1
    return dict(sorted(hist.items()))


def _check_hist(hist: Mapping[int, int]) -> int:
    total = 0
    for depth, n in hist.items():
        if n < 0:
            raise ValueError(f"negative count at depth {depth}")
        total += n
    return total


def average_directory_depth(hist: Mapping[int, int]) -> float:
    total = _check_hist(hist)
    if total == 0:
        raise UndefinedMetricError("average depth of an empty histogram")
    return sum(d * n for d, n in hist.items()) / total


@dataclass(frozen=True)
class NormalFit:
    mean: float
    sd: float

    @property
    def degenerate(self) -> bool:
        return self.sd == 0

    def pdf(self, x: float) -> float:
        if self.degenerate:
            return math.inf if x == self.mean else 0.0
        z = (x - self.mean) / self.sd
        return math.exp(-0.5 * z * z) / (self.sd * math.sqrt(2 * math.pi))


def normal_fit(hist: Mapping[int, int]) -> NormalFit:
    """Weighted sample mean and standard deviation (n - 1) of the depth histogram."""
    total = _check_hist(hist)
    if total < 2:
        raise UndefinedMetricError("normal fit needs at least two files")
    mean = sum(d * n for d, n in hist.items()) / total
    ss = sum(n * (d - mean) ** 2 for d, n in hist.items())
    return NormalFit(mean, math.sqrt(ss / (total - 1)))


def reconstruct_size(c0: float, c1: float, T: int) -> float:
    if min(c0, c1, T) < 0:
        raise ValueError("negative input to size reconstruction")
    return c0 * c1 * T


def approximate_size(c0: float, c1: float, a: float, d: float) -> float:
    """Size with the file count replaced by its exponential-tree estimate a**(d-1)."""
    return c0 * c1 * math.exp((d - 1) * math.log(a))


def classify_magic_range(value: float) -> str:
    if value < 0 or math.isnan(value):
        raise ValueError(f"cannot classify {value}")
    if value < MAGIC_LOW:
        return "below"
    if value > MAGIC_HIGH:
        return "above"
    return "within"


@dataclass(frozen=True)
class TheoryTable:
    branching_b: int
    rows: tuple[tuple[int, int], ...]

    def size(self, depth: int) -> int:
        return dict(self.rows)[depth]


def theory_table(branching_b: int, max_depth: int, min_depth: int = 3) -> TheoryTable:
    """Sizes in LOC of a hierarchy where every level holds ``branching_b`` items.

    Level 0 (LOC per function) is included, so depth ``d`` gives b**(d+1).
    """
    if branching_b < 1:
        raise ValueError("branching must be >= 1")
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    start = min(min_depth, max_depth)
    return TheoryTable(branching_b, tuple((d, branching_b ** (d + 1)) for d in range(start, max_depth + 1)))


def format_size(loc: int) -> str:
    """Render a LOC count with kLOC/MLOC scaling in the style of the theory table.

    Under 20 kLOC one decimal is kept; up to 10 MLOC whole kLOC (half-up);
    beyond that whole MLOC, truncated.
    """
    kloc = Decimal(loc) / 1000
    if loc < 20_000:
        text = str(kloc.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))
        if text.endswith(".0"):
            text = text[:-2]
        return f"{text} kLOC"
    if loc < 10_000_000:
        return f"{kloc.quantize(Decimal(1), rounding=ROUND_HALF_UP)} kLOC"
    mloc = Decimal(loc) / 1_000_000
    return f"{mloc.quantize(Decimal(1), rounding=ROUND_FLOOR)} MLOC"


@dataclass(frozen=True)
class TreeMetrics:
    items_per_dir_a: Optional[float]
    exp_depth_l: Optional[float]
    corrected_depth_d: Optional[float]
    avg_dir_depth: Optional[float]
    depth_histogram: dict = field(default_factory=dict)
    denominator_mode: str = PAPER_TABLES


def _defined(fn, *args):
    try:
        return fn(*args)
    except UndefinedMetricError:
        return None


def tree_metrics(T: int, D: int, histogram: Mapping[int, int], mode: str = PAPER_TABLES) -> TreeMetrics:
    """Bundle a, l, d and directory depth; undefined values become None."""
    mode = normalize_mode(mode)
    a = _defined(items_per_directory, T, D, mode)
    l = _defined(exponential_depth, T, a) if a is not None else None
    return TreeMetrics(
        items_per_dir_a=a,
        exp_depth_l=l,
        corrected_depth_d=None if l is None else corrected_depth(l),
        avg_dir_depth=_defined(average_directory_depth, histogram),
        depth_histogram=dict(histogram),
        denominator_mode=mode,
    )


@dataclass(frozen=True)
class LevelComplexityReport:
    c0_loc_per_function: Optional[float]
    c1_functions_per_file: Optional[float]
    c_high_items_per_dir: Optional[float]
    depth_d: Optional[float]
    reconstructed_size_S: Optional[float]
    approximate_size: Optional[float]
    range_labels: dict


def level_complexity(loc: int, functions: int, T: int, a: Optional[float], d: Optional[float]) -> LevelComplexityReport:
    c0 = loc / functions if functions else None
    c1 = functions / T if T else None
    size = reconstruct_size(c0, c1, T) if c0 is not None and c1 is not None else None
    approx = None
    if size is not None and a is not None and a > 0 and d is not None:
        approx = approximate_size(c0, c1, a, d)
    labels = {}
    for key, value in (("loc_per_function", c0), ("functions_per_file", c1), ("items_per_dir", a)):
        labels[key] = None if value is None else classify_magic_range(value)
    return LevelComplexityReport(c0, c1, a, d, size, approx, labels)
