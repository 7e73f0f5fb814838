"""Command-line interface: analyze, batch and theory subcommands."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import metrics as m
from .language import CLASSIFIER_MODES, LanguageProfile, ProfileError, get_profile
from .report import FORMATS, PackageReport, analyze_tree, failed_report, histogram_export, render
from .scanner import DEFAULT_IGNORE, InputError, scan_tree

log = logging.getLogger("treecomplexity")

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2
EXIT_INPUT = 3

CONFIG_ENV = "TREECOMPLEXITY_CONFIG"
CONFIG_NAME = ".treecomplexity.json"

THEORY_BRANCHING = (1, 99)
THEORY_DEPTH = (3, 12)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    paths: list = field(default_factory=list)
    manifest: Optional[str] = None
    language: str = "c"
    denominator: str = m.PAPER_TABLES
    classifier: str = "accurate"
    prune: bool = True
    fmt: str = "text"
    ignore: tuple = DEFAULT_IGNORE
    profiles: dict = field(default_factory=dict)
    case_insensitive: bool = False
    jobs: int = 1

    def __post_init__(self):
        if bool(self.paths) == bool(self.manifest):
            raise ConfigError("give exactly one of a target path or a batch manifest")

    def profile(self, language: Optional[str] = None) -> LanguageProfile:
        return get_profile(language or self.language, self.profiles)


def load_config(path: Optional[str]) -> dict:
    """Read the optional JSON config: ``{"ignore": [...], "profiles": {id: {...}}}``."""
    explicit = path or os.environ.get(CONFIG_ENV)
    candidate = explicit or CONFIG_NAME
    if not os.path.exists(candidate):
        if explicit:
            raise ConfigError(f"config file not found: {candidate}")
        return {}
    try:
        with open(candidate, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {candidate}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


_PROFILE_FIELDS = ("extensions", "line_comment_markers", "block_comment_delimiters", "function_pattern")


def profiles_from_config(config: dict) -> dict[str, LanguageProfile]:
    profiles = {}
    for name, entry in (config.get("profiles") or {}).items():
        unknown = set(entry) - set(_PROFILE_FIELDS)
        if unknown:
            raise ConfigError(f"profile {name}: unknown keys {sorted(unknown)}")
        changes = {k: tuple(v) if isinstance(v, list) else v for k, v in entry.items()}
        try:
            try:
                base = get_profile(name)
            except ProfileError:
                base = None
            if base is None:
                profiles[name.lower()] = LanguageProfile(name=name.lower(), **changes)
            else:
                profiles[base.name] = base.with_overrides(**changes)
        except (ProfileError, TypeError) as exc:
            raise ConfigError(f"profile {name}: {exc}") from exc
    return profiles


def _analyze_one(config: RunConfig, path: str, package: str, language: str) -> PackageReport:
    profile = config.profile(language)
    tree = scan_tree(
        path,
        profile,
        ignore=config.ignore,
        classifier_mode=config.classifier,
        case_insensitive=config.case_insensitive,
        jobs=config.jobs,
    )
    if tree.is_empty:
        log.warning("%s: no %s source files found", path, profile.name)
    return analyze_tree(tree, package or os.path.basename(os.path.abspath(path)), config.denominator, config.prune)


def cmd_analyze(config: RunConfig, out=None, histogram_path: Optional[str] = None) -> int:
    out = out or sys.stdout
    path = config.paths[0]
    try:
        report = _analyze_one(config, path, "", config.language)
    except ProfileError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    out.write(render(report, config.fmt))
    if histogram_path:
        with open(histogram_path, "w", encoding="utf-8") as fh:
            fh.write(histogram_export(report.depth_histogram))
    return EXIT_OK


def read_manifest(path: str) -> list[tuple[str, str, str]]:
    """Parse ``name<TAB>path<TAB>language`` lines; relative paths resolve against the manifest."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read manifest {path}: {exc}") from exc
    base = os.path.dirname(os.path.abspath(path))
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ConfigError(f"{path}:{lineno}: expected name<TAB>path<TAB>language")
        name, target, language = (p.strip() for p in parts)
        entries.append((name, os.path.join(base, os.path.expanduser(target)), language))
    return entries


def cmd_batch(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        entries = read_manifest(config.manifest)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_USAGE

    def run(entry):
        name, path, language = entry
        try:
            return _analyze_one(config, path, name, language)
        except (InputError, ProfileError) as exc:
            log.error("%s: %s", name, exc)
            return failed_report(name, language, str(exc), config.denominator)

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            reports = list(pool.map(run, entries))
    else:
        reports = [run(e) for e in entries]
    out.write(render(reports, config.fmt))
    return EXIT_PARTIAL if any(r.status != "ok" for r in reports) else EXIT_OK


def render_theory(branchings: Sequence[int], max_depth: int, exact: bool = False, fmt: str = "text") -> str:
    tables = [m.theory_table(b, max_depth) for b in branchings]
    depths = [d for d, _ in tables[0].rows]
    if fmt == "json":
        payload = [
            {"branching": t.branching_b, "rows": [{"depth": d, "loc": s, "display": m.format_size(s)} for d, s in t.rows]}
            for t in tables
        ]
        return json.dumps(payload, indent=2) + "\n"
    cell = (lambda s: str(s)) if exact else m.format_size
    if fmt == "csv":
        lines = [",".join(["depth"] + [f"b{t.branching_b}" for t in tables])]
        lines += [",".join([str(d)] + [cell(t.size(d)) for t in tables]) for d in depths]
        return "\n".join(lines) + "\n"
    headers = ["depth"] + [f"b={t.branching_b}" for t in tables]
    rows = [[str(d)] + [cell(t.size(d)) for t in tables] for d in depths]
    widths = [max(len(r[i]) for r in rows + [headers]) for i in range(len(headers))]
    lines = ["  ".join(h.rjust(w) for h, w in zip(headers, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(lines) + "\n"


def cmd_theory(branchings: Sequence[int], max_depth: int, exact: bool = False, fmt: str = "text", out=None) -> int:
    out = out or sys.stdout
    lo, hi = THEORY_BRANCHING
    if any(not lo <= b <= hi for b in branchings):
        log.error("branching must be in [%d, %d]", lo, hi)
        return EXIT_USAGE
    lo, hi = THEORY_DEPTH
    if not lo <= max_depth <= hi:
        log.error("max depth must be in [%d, %d]", lo, hi)
        return EXIT_USAGE
    out.write(render_theory(branchings, max_depth, exact, fmt))
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, with_lang: bool = True) -> None:
    if with_lang:
        p.add_argument("--lang", default="c", help="language id (c, c++, java, lisp, perl or a config profile)")
    p.add_argument("--denominator", choices=("eq2", "paper"), default="paper",
                   help="items/dir denominator: eq2 = (T+D)/(D+1), paper = (T+D)/D")
    p.add_argument("--classifier", choices=CLASSIFIER_MODES, default="accurate")
    p.add_argument("--no-prune", dest="prune", action="store_false", help="skip trivial-directory pruning")
    p.add_argument("--format", dest="fmt", choices=FORMATS, default="text")
    p.add_argument("--ignore", action="append", default=[], metavar="GLOB",
                   help="extra file/directory name pattern to skip (repeatable)")
    p.add_argument("--no-default-ignore", action="store_true", help="also scan VCS metadata directories")
    p.add_argument("--case-insensitive", action="store_true", help="match extensions case-insensitively")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV} or ./{CONFIG_NAME})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treecomplexity", description="Hierarchical complexity of source trees.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one source tree")
    p.add_argument("path")
    p.add_argument("--histogram", metavar="FILE", help="write depth histogram plot data (TSV)")
    _add_common(p)

    p = sub.add_parser("batch", help="analyze every entry of a manifest")
    p.add_argument("manifest")
    _add_common(p, with_lang=False)

    p = sub.add_parser("theory", help="print LOC sizes for uniform branching per level")
    p.add_argument("--branching", type=int, nargs="+", default=[5, 7, 9])
    p.add_argument("--max-depth", type=int, default=9)
    p.add_argument("--exact", action="store_true", help="print exact LOC instead of kLOC/MLOC")
    p.add_argument("--format", dest="fmt", choices=FORMATS, default="text")
    return parser


def _run_config(args) -> RunConfig:
    config = load_config(args.config)
    ignore = () if args.no_default_ignore else DEFAULT_IGNORE
    ignore = tuple(ignore) + tuple(config.get("ignore", ())) + tuple(args.ignore)
    return RunConfig(
        paths=[args.path] if args.command == "analyze" else [],
        manifest=args.manifest if args.command == "batch" else None,
        language=getattr(args, "lang", "c"),
        denominator=m.normalize_mode(args.denominator),
        classifier=args.classifier,
        prune=args.prune,
        fmt=args.fmt,
        ignore=ignore,
        profiles=profiles_from_config(config),
        case_insensitive=args.case_insensitive,
        jobs=max(1, args.jobs),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    if args.command == "theory":
        return cmd_theory(args.branching, args.max_depth, args.exact, args.fmt)
    try:
        config = _run_config(args)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    if args.command == "analyze":
        return cmd_analyze(config, histogram_path=args.histogram)
    return cmd_batch(config)


if __name__ == "__main__":
    sys.exit(main())
