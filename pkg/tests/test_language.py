import pytest
from hypothesis import given
from hypothesis import strategies as st

from treecomplexity.language import (
    PUBLISHED_PATTERNS,
    FileMetrics,
    LanguageProfile,
    ProfileError,
    builtin_profiles,
    classify_lines,
    count_functions,
    get_profile,
    split_lines,
)
from line_fixtures import C_FAMILY_CASES, LISP_CASES, PERL_CASES, grep_chain_classes

C = get_profile("c")
LISP = get_profile("lisp")
PERL = get_profile("perl")


def counts(fm: FileMetrics):
    return fm.blank_lines, fm.comment_lines, fm.brace_only_lines, fm.loc


FAMILY_CASES = [
    pytest.param(profile, src, expected, id=f"{profile.name}-{i}")
    for profile, cases in ((C, C_FAMILY_CASES), (LISP, LISP_CASES), (PERL, PERL_CASES))
    for i, (src, expected) in enumerate(cases)
]


@pytest.mark.parametrize("profile, source, expected", FAMILY_CASES)
def test_accurate_hand_classification(profile, source, expected):
    assert counts(classify_lines(source, profile)) == expected


@pytest.mark.parametrize("name", ["c++", "java"])
@pytest.mark.parametrize("source, expected", C_FAMILY_CASES)
def test_c_derivatives_share_comment_rules(name, source, expected):
    assert counts(classify_lines(source, get_profile(name))) == expected


def per_line_paper_grep(content: str) -> list[str]:
    out = []
    for line in split_lines(content):
        fm = classify_lines(line + "\n", C, mode="paper-grep")
        out.append(
            "blank" if fm.blank_lines else "comment" if fm.comment_lines else "brace" if fm.brace_only_lines else "code"
        )
    return out


GREP_FIXTURES = [src for src, _ in C_FAMILY_CASES] + [
    "/*\n * body\n */\n}\n",
    "  *ptr = 3;\n\t// c\n{\n  }  \nint a;\n",
    "\r\n{\r\n}\r\n// x\r\n",
    "a // b\n  /* c */\n",
]


@pytest.mark.parametrize("source", GREP_FIXTURES)
def test_paper_grep_matches_literal_chain(source):
    expected = grep_chain_classes(source)
    assert per_line_paper_grep(source) == expected
    fm = classify_lines(source, C, mode="paper-grep")
    assert fm.loc == expected.count("code")
    assert fm.blank_lines == expected.count("blank")
    assert fm.comment_lines == expected.count("comment")
    assert fm.brace_only_lines == expected.count("brace")


def test_paper_grep_block_comment_example():
    fm = classify_lines("/*\n * body\n */\n}\n", C, mode="paper-grep")
    assert (fm.comment_lines, fm.brace_only_lines, fm.loc) == (2, 1, 1)


def test_spec_three_line_example():
    fm = classify_lines("\n  // x\na = 1;\n", C)
    assert (fm.blank_lines, fm.comment_lines, fm.loc, fm.total_lines) == (1, 1, 1, 3)


def test_undecodable_bytes_count_as_code(tmp_path):
    from treecomplexity.language import read_source

    p = tmp_path / "bin.c"
    p.write_bytes(b"\xff\xfe\x00junk\n\n")
    fm = classify_lines(read_source(p), C)
    assert (fm.loc, fm.blank_lines) == (1, 1)


text_lines = st.lists(st.text(alphabet=" \t{}/*#;abc()=\"", max_size=12), max_size=15)


@given(text_lines, st.sampled_from(["accurate", "paper-grep"]), st.sampled_from([C, LISP, PERL]))
def test_partition(lines, mode, profile):
    fm = classify_lines("\n".join(lines), profile, mode)
    assert fm.loc + fm.blank_lines + fm.comment_lines + fm.brace_only_lines == fm.total_lines
    assert min(counts(fm)) >= 0


@given(text_lines, st.sampled_from(["accurate", "paper-grep"]))
def test_appending_blank_line_only_bumps_blank(lines, mode):
    content = "".join(line + "\n" for line in lines)
    before = classify_lines(content, C, mode)
    after = classify_lines(content + "\n", C, mode)
    assert after.blank_lines == before.blank_lines + 1
    assert (after.loc, after.comment_lines, after.brace_only_lines) == (
        before.loc,
        before.comment_lines,
        before.brace_only_lines,
    )


@given(st.lists(st.text(alphabet=" \t{}abc();=", max_size=12), max_size=20))
def test_modes_agree_without_comments(lines):
    content = "\n".join(lines)
    assert classify_lines(content, C, "accurate") == classify_lines(content, C, "paper-grep")


@given(
    st.text(alphabet="abc (){};,\n\t*&[]", max_size=80),
    st.lists(st.text(alphabet="abc xyz", max_size=10), min_size=1, max_size=5),
)
def test_function_count_ignores_appended_comments(source, comments):
    extra = "".join("\n// " + c for c in comments)
    assert count_functions(source + extra, C) == count_functions(source, C)


def test_count_functions_examples():
    assert count_functions("", C) == 0
    assert count_functions("int f(int a) {...}\nvoid g() {...}", C) == 2
    java = "public void run(String[] args) throws IOException, InterruptedException\n{\n  go();\n}\n"
    assert count_functions(java, get_profile("java")) == 1
    assert count_functions("int f(int a);\nfoo(a);\n", C) == 0


def test_count_functions_multiline_definition():
    src = "static int\nadd(int a,\n    int b)\n{\n  return a + b;\n}\n"
    assert count_functions(src, C) == 1


def test_lisp_and_perl_patterns():
    lisp = "(defun f (x) x)\n(defmacro m () nil)\n(defvar v 1)\n(defalias 'g 'f)\n"
    assert count_functions(lisp, LISP) == 3
    assert count_functions("sub foo {\n}\nsub bar{ }\n&foo();\n", PERL) == 2


def test_published_c_pattern_matches_prototypes():
    proto = C.with_overrides(function_pattern=PUBLISHED_PATTERNS["c"])
    assert count_functions("int f(int a);\nint f(int a) { }\n", proto) == 1


def test_builtin_extensions():
    exts = {p.name: p.extensions for p in builtin_profiles()}
    assert exts == {
        "c": (".c",),
        "c++": (".cpp", ".cxx", ".cc"),
        "java": (".java",),
        "lisp": (".el",),
        "perl": (".pl", ".plx", ".pm"),
    }
    assert get_profile("C").extensions == (".c",)
    assert ".h" not in get_profile("c++").extensions


def test_unknown_language():
    with pytest.raises(ProfileError):
        get_profile("fortran")


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(extensions=()),
        dict(extensions=("c",)),
        dict(extensions=(".c",), function_pattern="(unclosed"),
        dict(extensions=(".c",), classifier_mode="fuzzy"),
    ],
)
def test_invalid_profiles_fail_at_load(kwargs):
    with pytest.raises(ProfileError):
        LanguageProfile("x", **kwargs)


def test_extension_matching_is_case_sensitive_by_default():
    assert C.matches("a.c")
    assert not C.matches("A.C")
    assert C.matches("A.C", case_insensitive=True)
