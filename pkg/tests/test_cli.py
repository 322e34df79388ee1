import gzip

import pytest

from filtergrade.errors import SessionSyntaxError
from filtergrade.filtergrade import DEMO_SESSIONS, EXIT_ERROR, EXIT_FAIL, EXIT_OK, FilterGradeApplication, main, make_argument_parser
from filtergrade.session_reading import DemoSessionSource, FileSessionSource, GzipSessionSource, SessionSource
from tests.filtergrade_testing import FilterGradeTestApp

NOT_FILTER_REGULAR = """\
ring R = Q[x,y] graded fine;
module M = cyclic (x*y);
ns-verify a=(x, y) xs=[y] M=R N=M window=[0..1];
"""


def test_single_fgrad_session():
    app = FilterGradeTestApp("tests/fgrad_one.fg")
    reports = app.json_reports()

    assert app.exit_code == EXIT_OK
    assert len(reports) == 1
    assert reports[0]["command"] == "fgrad"
    assert reports[0]["value"] == 1
    assert reports[0]["verdict"] == "PASS"


def test_att_top_session():
    app = FilterGradeTestApp("tests/example_att.fg")
    reports = app.json_reports()

    assert app.exit_code == EXIT_OK
    assert [r["command"] for r in reports] == ["att-top", "att-top-local"]
    assert reports[0]["att"] == ["(x)"]
    assert sorted(reports[1]["att"]) == ["(x)", "(y)"]


def test_fail_verdict_exit_code(tmp_path):
    session = tmp_path / "nfr.fg"
    session.write_text(NOT_FILTER_REGULAR)
    app = FilterGradeTestApp(str(session))
    reports = app.json_reports()

    assert app.exit_code == EXIT_FAIL
    assert reports[0]["verdict"] == "FAIL"
    assert "not filter regular" in reports[0]["failure"]


@pytest.mark.parametrize("session_file", ["tests/broken_matrix.fg", "tests/no_such_session.fg"])
def test_error_exit_code(session_file):
    app = FilterGradeTestApp(session_file)
    output = app()

    assert app.exit_code == EXIT_ERROR
    assert output == ""


def test_error_stops_later_sessions():
    app = FilterGradeTestApp(["tests/broken_matrix.fg", "tests/fgrad_one.fg"])
    assert app() == ""
    assert app.exit_code == EXIT_ERROR


def test_out_directory(tmp_path):
    app = FilterGradeTestApp("tests/example_att.fg", out=str(tmp_path / "reports"))
    assert app() == ""
    assert app.exit_code == EXIT_OK

    names = sorted(p.name for p in (tmp_path / "reports").iterdir())
    assert names == ["001_att-top.json", "002_att-top-local.json"]


def test_out_directory_prefixes_multiple_sessions(tmp_path):
    app = FilterGradeTestApp(["tests/fgrad_one.fg", "tests/example_att.fg"], out=str(tmp_path), format="text")
    app()

    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["example_att_001_att-top.txt", "example_att_002_att-top-local.txt", "fgrad_one_001_fgrad.txt"]


def test_text_format():
    output = FilterGradeTestApp("tests/fgrad_one.fg", format="text")()
    assert "fgrad: PASS" in output


def test_demo_sessions():
    app = FilterGradeTestApp(DEMO_SESSIONS, demo=True)
    reports = app.json_reports()

    assert app.exit_code == EXIT_OK
    assert reports
    assert all(r["verdict"] in ("PASS", "INFO") for r in reports)


def test_invalid_run_options():
    with pytest.raises(ValueError):
        FilterGradeApplication(FilterGradeTestApp("tests/fgrad_one.fg", max_candidates=0).args)
    with pytest.raises(ValueError):
        FilterGradeApplication(FilterGradeTestApp("tests/fgrad_one.fg", window_margin_extra=-1).args)


def test_argument_parser_defaults():
    args = make_argument_parser().parse_args(["a.fg", "b.fg.gz"])
    assert args.sessions == ["a.fg", "b.fg.gz"]
    assert args.format == "text"
    assert args.out is None


def test_main_requires_sessions(monkeypatch, capsys):
    monkeypatch.setattr("sys.argv", ["filtergrade"])
    with pytest.raises(SystemExit) as exc_info:
        main()
    assert exc_info.value.code == EXIT_ERROR
    assert "One or more session files required" in capsys.readouterr().out


@pytest.mark.parametrize(
    "name, source_class, stem",
    [
        ("tests/fgrad_one.fg", FileSessionSource, "fgrad_one"),
        ("tests/fgrad_one.fg.gz", GzipSessionSource, "fgrad_one"),
        ("fgrade_fixtures.demo", DemoSessionSource, "fgrade_fixtures"),
    ],
)
def test_source_selection(name, source_class, stem):
    source = SessionSource.for_name(name)
    assert isinstance(source, source_class)
    assert source.stem == stem


def test_demo_source_parses():
    session = SessionSource.for_name("fgrade_fixtures.demo").parse()
    assert session.ring_name == "R"
    assert [c.name for c in session.commands][:2] == ["fgrad", "fgrad"]


def test_file_source_keeps_line_numbers():
    statements = list(SessionSource.for_name("tests/fgrad_one.fg").statements())
    assert [s.where(0) for s in statements] == [(1, 1), (2, 1)]


def _gzip_copy(source_name, tmp_path):
    compressed = tmp_path / (source_name.rpartition("/")[2] + ".gz")
    with open(source_name, "rb") as source, gzip.open(compressed, "wb") as target:
        target.write(source.read())
    return str(compressed)


def test_gzip_source(tmp_path):
    compressed = _gzip_copy("tests/fgrad_one.fg", tmp_path)

    source = SessionSource.for_name(compressed)
    assert isinstance(source, GzipSessionSource)
    plain = SessionSource.for_name("tests/fgrad_one.fg")
    assert list(source.lines()) == list(plain.lines())
    assert str(source.parse()) == str(plain.parse())

    app = FilterGradeTestApp(compressed)
    assert app.json_reports()[0]["value"] == 1


def test_gzip_source_reports_original_line_numbers(tmp_path):
    compressed = _gzip_copy("tests/broken_matrix.fg", tmp_path)
    with pytest.raises(SessionSyntaxError) as exc_info:
        SessionSource.for_name(compressed).parse()
    assert exc_info.value.line == 2


def test_unknown_demo_session():
    with pytest.raises(ValueError):
        SessionSource.for_name("nothing_here.demo")


def test_missing_session_file():
    with pytest.raises(OSError):
        SessionSource.for_name("tests/no_such_session.fg").parse()
