"""Per-language lexical rules: extensions, line classification, function counting."""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Optional

ACCURATE = "accurate"
PAPER_GREP = "paper-grep"
CLASSIFIER_MODES = (ACCURATE, PAPER_GREP)

# grep's [[:space:]] class; Python's \s would also accept unicode spaces.
_SPACE = " \t\n\r\f\v"


class ProfileError(ValueError):
    """Raised for an invalid or unknown language profile."""


@dataclass(frozen=True)
class LanguageProfile:
    name: str
    extensions: tuple[str, ...]
    line_comment_markers: tuple[str, ...] = ()
    block_comment_delimiters: Optional[tuple[str, str]] = None
    function_pattern: str = ""
    classifier_mode: str = ACCURATE
    _regex: re.Pattern = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "extensions", tuple(self.extensions))
        object.__setattr__(self, "line_comment_markers", tuple(self.line_comment_markers))
        if self.block_comment_delimiters is not None:
            opening, closing = self.block_comment_delimiters
            if not opening or not closing:
                raise ProfileError(f"{self.name}: empty block comment delimiter")
            object.__setattr__(self, "block_comment_delimiters", (opening, closing))
        if not self.extensions:
            raise ProfileError(f"{self.name}: no extensions")
        for ext in self.extensions:
            if not ext.startswith(".") or len(ext) < 2:
                raise ProfileError(f"{self.name}: bad extension {ext!r}")
        if self.classifier_mode not in CLASSIFIER_MODES:
            raise ProfileError(f"{self.name}: unknown classifier mode {self.classifier_mode!r}")
        try:
            regex = re.compile(self.function_pattern, re.MULTILINE)
        except re.error as exc:
            raise ProfileError(f"{self.name}: invalid function pattern: {exc}") from exc
        object.__setattr__(self, "_regex", regex)

    def matches(self, filename: str, case_insensitive: bool = False) -> bool:
        if case_insensitive:
            lowered = filename.lower()
            return any(lowered.endswith(ext.lower()) for ext in self.extensions)
        return filename.endswith(self.extensions)

    def with_overrides(self, **changes) -> "LanguageProfile":
        return replace(self, **changes)


@dataclass(frozen=True)
class FileMetrics:
    total_lines: int = 0
    loc: int = 0
    blank_lines: int = 0
    comment_lines: int = 0
    brace_only_lines: int = 0
    functions: int = 0


# Definition form: identifier, parameter list, opening brace.
_C_FAMILY_FUNCTION = r"(\w+)\s*\([\w\s,\[\]&*]*\)\s*\{"
_JAVA_FUNCTION = (
    r"(\w+)\s*\([\w.\s,\[\]]*\)\s*"
    r"(?:throws\s*\w+(?:\s*,\s*\w+)*)?\s*\{"
)
_LISP_FUNCTION = r"\(\s*def(?:un|macro|subst|alias)\s+'?([^\s()]+)"
_PERL_FUNCTION = r"(?<=sub\s)\s*(\w+)\s*\{"

# Historical published patterns, verbatim, for comparison runs.
# The C one ends in ";" and therefore matches prototypes; Lisp was unreadable.
PUBLISHED_PATTERNS = {
    "c": r"(\w+)\s*\([\w\s,\[\]&*]*\)\s*;",
    "c++": _C_FAMILY_FUNCTION,
    "java": r"(\w+)\s*\([\w.\s,\[\]]*\)\s*(?:throws\s*\w+(?:\s*,\s*\w+)*)\s*\{",
    "perl": _PERL_FUNCTION,
}

_C_COMMENTS = dict(line_comment_markers=("//",), block_comment_delimiters=("/*", "*/"))

_BUILTIN = (
    LanguageProfile("c", (".c",), function_pattern=_C_FAMILY_FUNCTION, **_C_COMMENTS),
    LanguageProfile(
        "c++", (".cpp", ".cxx", ".cc"), function_pattern=_C_FAMILY_FUNCTION, **_C_COMMENTS
    ),
    LanguageProfile("java", (".java",), function_pattern=_JAVA_FUNCTION, **_C_COMMENTS),
    LanguageProfile("lisp", (".el",), line_comment_markers=(";",), function_pattern=_LISP_FUNCTION),
    LanguageProfile(
        "perl", (".pl", ".plx", ".pm"), line_comment_markers=("#",), function_pattern=_PERL_FUNCTION
    ),
)

_ALIASES = {"cpp": "c++", "cxx": "c++", "elisp": "lisp", "emacs-lisp": "lisp"}


def builtin_profiles() -> list[LanguageProfile]:
    return list(_BUILTIN)


def get_profile(name: str, extra: Optional[dict[str, LanguageProfile]] = None) -> LanguageProfile:
    """Look up a profile by id; user-defined profiles in ``extra`` shadow built-ins."""
    key = name.lower()
    key = _ALIASES.get(key, key)
    if extra and key in extra:
        return extra[key]
    for profile in _BUILTIN:
        if profile.name == key:
            return profile
    raise ProfileError(f"unknown language: {name!r}")


def split_lines(content: str) -> list[str]:
    # Same line notion as `wc -l`/grep: newline-terminated, last line may lack one.
    if not content:
        return []
    lines = content.split("\n")
    if lines[-1] == "":
        lines.pop()
    return lines


def _is_brace_only(text: str) -> bool:
    return text.strip(_SPACE) in ("{", "}")


def _classify_paper_grep(lines: list[str], profile: LanguageProfile) -> FileMetrics:
    prefixes = list(profile.line_comment_markers)
    if profile.block_comment_delimiters is not None:
        # the chain drops any line whose first non-space char is "*"
        prefixes.append(profile.block_comment_delimiters[1][0])
    blank = comment = brace = code = 0
    for line in lines:
        stripped = line.lstrip(_SPACE)
        if not stripped:
            blank += 1
        elif any(stripped.startswith(p) for p in prefixes):
            comment += 1
        elif _is_brace_only(stripped):
            brace += 1
        else:
            code += 1
    return FileMetrics(len(lines), code, blank, comment, brace)


def _strip_comments(line: str, in_block: bool, profile: LanguageProfile) -> tuple[str, bool, bool]:
    """Return (code text, saw comment, still inside block comment) for one line."""
    opening, closing = profile.block_comment_delimiters or (None, None)
    code = []
    saw_comment = in_block
    i = 0
    while True:
        if in_block:
            end = line.find(closing, i)
            if end < 0:
                return "".join(code), True, True
            i = end + len(closing)
            in_block = False
        # earliest comment start at or after i
        best, best_is_block = -1, False
        for marker in profile.line_comment_markers:
            pos = line.find(marker, i)
            if pos >= 0 and (best < 0 or pos < best):
                best = pos
        if opening is not None:
            pos = line.find(opening, i)
            if pos >= 0 and (best < 0 or pos <= best):
                best, best_is_block = pos, True
        if best < 0:
            code.append(line[i:])
            return "".join(code), saw_comment, False
        code.append(line[i:best])
        saw_comment = True
        if not best_is_block:
            return "".join(code), True, False
        in_block = True
        i = best + len(opening)


def _classify_accurate(lines: list[str], profile: LanguageProfile) -> FileMetrics:
    blank = comment = brace = code = 0
    in_block = False
    for line in lines:
        if not line.strip(_SPACE):
            blank += 1
            continue
        text, saw_comment, in_block = _strip_comments(line, in_block, profile)
        text = text.strip(_SPACE)
        if not text:
            comment += 1
        elif _is_brace_only(text):
            brace += 1
        else:
            code += 1
    return FileMetrics(len(lines), code, blank, comment, brace)


def classify_lines(content: str, profile: LanguageProfile, mode: Optional[str] = None) -> FileMetrics:
    """Assign every line exactly one class: blank, comment, brace-only or code.

    ``mode`` overrides ``profile.classifier_mode``. In accurate mode a line
    holding code plus a comment is code; string literals are not special-cased,
    so a ``/*`` inside a string opens a block comment.
    """
    mode = mode or profile.classifier_mode
    lines = split_lines(content)
    if mode == PAPER_GREP:
        return _classify_paper_grep(lines, profile)
    if mode == ACCURATE:
        return _classify_accurate(lines, profile)
    raise ProfileError(f"unknown classifier mode {mode!r}")


def count_functions(content: str, profile: LanguageProfile) -> int:
    return sum(1 for _ in profile._regex.finditer(content))


def analyze_source(content: str, profile: LanguageProfile, mode: Optional[str] = None) -> FileMetrics:
    return replace(classify_lines(content, profile, mode), functions=count_functions(content, profile))


def read_source(path) -> str:
    with open(path, "rb") as fh:
        raw = fh.read()
    # Undecodable bytes survive as replacement chars, so those lines count as code.
    return raw.decode("utf-8", errors="replace")
