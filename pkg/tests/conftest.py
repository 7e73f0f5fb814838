import os
from pathlib import Path

import pytest

ACCEPTANCE_LINES: list[str] = []


def write_tree(root: Path, spec: dict) -> Path:
    """Materialize nested dicts as directories; string values become file contents."""
    root.mkdir(parents=True, exist_ok=True)
    for name, value in spec.items():
        path = root / name
        if isinstance(value, dict):
            write_tree(path, value)
        else:
            path.write_text(value or "", encoding="utf-8")
    return root


def exponential_spec(branching: int, levels: int, content=None, ext=".c") -> dict:
    """Exact exponential tree: ``branching`` items per directory, files only at the bottom."""
    if levels == 1:
        return {f"f{i}{ext}": content for i in range(branching)}
    return {f"d{i}": exponential_spec(branching, levels - 1, content, ext) for i in range(branching)}


@pytest.fixture
def tree_factory(tmp_path):
    def make(spec, name="pkg"):
        return write_tree(tmp_path / name, spec)

    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
