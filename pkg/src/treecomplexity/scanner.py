"""Source tree construction and trivial-directory pruning."""

from __future__ import annotations

import fnmatch
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

from .language import FileMetrics, LanguageProfile, analyze_source, read_source

DEFAULT_IGNORE = (".git", ".hg", ".svn", ".bzr", "CVS", "_darcs")


class InputError(OSError):
    """The analysis root is missing or unreadable."""


@dataclass(frozen=True)
class SourceFile:
    name: str
    path: str  # relative to the tree root, "/"-separated
    metrics: FileMetrics = FileMetrics()


@dataclass(frozen=True)
class DirectoryNode:
    name: str
    path: str
    dirs: tuple["DirectoryNode", ...] = ()
    files: tuple[SourceFile, ...] = ()

    @property
    def item_count(self) -> int:
        return len(self.dirs) + len(self.files)

    def walk(self, depth: int = 0) -> Iterator[tuple["DirectoryNode", int]]:
        yield self, depth
        for child in self.dirs:
            yield from child.walk(depth + 1)


@dataclass(frozen=True)
class SourceTree:
    root: DirectoryNode
    language: str = ""
    pruned: bool = False

    def directories(self) -> Iterator[DirectoryNode]:
        """All directory nodes except the root."""
        for node, depth in self.root.walk():
            if depth:
                yield node

    def files(self) -> Iterator[tuple[SourceFile, int]]:
        """Every source file with its depth; the root counts as one containing directory."""
        for node, depth in self.root.walk():
            for f in node.files:
                yield f, depth + 1

    @property
    def is_empty(self) -> bool:
        return not self.root.files and not self.root.dirs


@dataclass(frozen=True)
class TreeCounts:
    files_T: int
    dirs_D: int
    pruned_dirs: int


def _ignored(name: str, patterns: Sequence[str]) -> bool:
    return any(fnmatch.fnmatchcase(name, pat) for pat in patterns)


def _list_tree(
    abs_dir: str,
    rel: str,
    profile: LanguageProfile,
    ignore: Sequence[str],
    case_insensitive: bool,
    found: list,
) -> Optional[tuple]:
    try:
        entries = sorted(os.scandir(abs_dir), key=lambda e: e.name)
    except OSError as exc:
        raise InputError(f"cannot read directory {abs_dir}: {exc}") from exc
    subdirs, files = [], []
    for entry in entries:
        if _ignored(entry.name, ignore):
            continue
        if entry.is_symlink():
            continue
        child_rel = f"{rel}/{entry.name}" if rel else entry.name
        if entry.is_dir(follow_symlinks=False):
            sub = _list_tree(entry.path, child_rel, profile, ignore, case_insensitive, found)
            if sub is not None:
                subdirs.append(sub)
        elif entry.is_file(follow_symlinks=False) and profile.matches(entry.name, case_insensitive):
            files.append((entry.name, child_rel))
            found.append((child_rel, entry.path))
    if not subdirs and not files and rel:
        return None
    return (os.path.basename(abs_dir) if rel else "", rel, subdirs, files)


def _freeze(raw: tuple, metrics: Mapping[str, FileMetrics]) -> DirectoryNode:
    name, rel, subdirs, files = raw
    return DirectoryNode(
        name=name,
        path=rel,
        dirs=tuple(_freeze(s, metrics) for s in subdirs),
        files=tuple(SourceFile(n, p, metrics.get(p, FileMetrics())) for n, p in files),
    )


def scan_tree(
    root_path,
    profile: LanguageProfile,
    ignore: Sequence[str] = DEFAULT_IGNORE,
    classifier_mode: Optional[str] = None,
    case_insensitive: bool = False,
    count: bool = True,
    jobs: int = 1,
) -> SourceTree:
    """Walk ``root_path`` keeping only files of ``profile``'s language.

    Directories with no matching file at any depth are dropped in the same
    bottom-up pass. Symlinks are never followed. Entries are visited in
    name order, so results do not depend on the OS enumeration order.
    """
    root_path = os.fspath(root_path)
    if not os.path.isdir(root_path):
        raise InputError(f"not a directory: {root_path}")
    found: list[tuple[str, str]] = []
    raw = _list_tree(root_path, "", profile, ignore, case_insensitive, found)

    metrics: dict[str, FileMetrics] = {}
    if count and found:
        def work(item):
            rel, abs_path = item
            try:
                content = read_source(abs_path)
            except OSError as exc:
                raise InputError(f"cannot read {abs_path}: {exc}") from exc
            return rel, analyze_source(content, profile, classifier_mode)

        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                metrics.update(pool.map(work, found))
        else:
            metrics.update(map(work, found))
    return SourceTree(_freeze(raw, metrics), language=profile.name)


def build_tree(spec: Mapping, language: str = "") -> SourceTree:
    """Build a tree from nested mappings without touching the filesystem.

    A mapping value is a subdirectory; anything else is a file, whose value may
    be a ``FileMetrics`` (or None for zeroed counts). Empty directories vanish
    just as they do in ``scan_tree``.
    """

    def build(name: str, rel: str, mapping: Mapping) -> Optional[DirectoryNode]:
        dirs, files = [], []
        for key in sorted(mapping):
            value = mapping[key]
            child_rel = f"{rel}/{key}" if rel else key
            if isinstance(value, Mapping):
                sub = build(key, child_rel, value)
                if sub is not None:
                    dirs.append(sub)
            else:
                files.append(SourceFile(key, child_rel, value or FileMetrics()))
        if not dirs and not files and rel:
            return None
        return DirectoryNode(name, rel, tuple(dirs), tuple(files))

    return SourceTree(build("", "", spec), language=language)


def count_entities(tree: SourceTree, pruned: Optional[SourceTree] = None) -> TreeCounts:
    """Count files (T) and non-root directories (D).

    ``pruned_dirs`` comes from ``pruned`` if given, else from pruning ``tree``.
    """
    files_T = sum(1 for _ in tree.files())
    dirs_D = sum(1 for _ in tree.directories())
    if pruned is None:
        pruned = tree if tree.pruned else prune_trivial(tree)
    pruned_dirs = sum(1 for _ in pruned.directories())
    return TreeCounts(files_T, dirs_D, pruned_dirs)


def _node(template: DirectoryNode, dirs: list, files: list) -> DirectoryNode:
    by_path = lambda item: item.path
    return DirectoryNode(
        template.name, template.path, tuple(sorted(dirs, key=by_path)), tuple(sorted(files, key=by_path))
    )


def _collapse(node: DirectoryNode) -> list:
    dirs: list[DirectoryNode] = []
    files: list[SourceFile] = list(node.files)
    for child in node.dirs:
        for item in _collapse(child):
            (dirs if isinstance(item, DirectoryNode) else files).append(item)
    # triviality is judged on the original item count; splicing preserves it
    if node.item_count == 1:
        return dirs + files
    return [_node(node, dirs, files)]


def prune_trivial(tree: SourceTree) -> SourceTree:
    """Return a derived tree with every trivial directory collapsed into its parent.

    A directory is trivial when it holds exactly one meaningful item, either
    one source file or one subdirectory with source below it. The root is
    never collapsed. The input tree is left untouched.
    """
    root = tree.root
    dirs: list[DirectoryNode] = []
    files: list[SourceFile] = list(root.files)
    for child in root.dirs:
        for item in _collapse(child):
            (dirs if isinstance(item, DirectoryNode) else files).append(item)
    return SourceTree(_node(root, dirs, files), language=tree.language, pruned=True)
