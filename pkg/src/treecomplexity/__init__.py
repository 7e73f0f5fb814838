"""Hierarchical complexity metrics for source code trees."""

from .language import (
    FileMetrics,
    LanguageProfile,
    ProfileError,
    builtin_profiles,
    classify_lines,
    count_functions,
    get_profile,
)
from .metrics import (
    LevelComplexityReport,
    NormalFit,
    TheoryTable,
    TreeMetrics,
    UndefinedMetricError,
    average_directory_depth,
    classify_magic_range,
    corrected_depth,
    depth_distribution,
    exponential_depth,
    items_per_directory,
    normal_fit,
    reconstruct_size,
    theory_table,
)
from .report import PackageReport, analyze_tree, histogram_export, render, report_from_counts
from .scanner import SourceTree, TreeCounts, build_tree, count_entities, prune_trivial, scan_tree

__version__ = "0.1.0"
