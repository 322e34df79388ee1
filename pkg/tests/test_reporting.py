import json
import math

import pytest

from filtergrade.commands import RunConfig, run
from filtergrade.reporting import InvariantReport, emit, parse_tsv, plain_value
from filtergrade.statements import parse_session

GRADES = """\
ring R = Q[x,y] graded fine;
fgrad a=(x) b=(y) M=R;
fgrad a=(x) b=(x, y) M=R;
cech-table a=(x) N=R window=[-1..0];
"""


@pytest.fixture(scope="module")
def reports():
    return run(parse_session(GRADES), RunConfig())


def test_fgrad_json(reports):
    body = json.loads(emit(reports[0], "json"))
    assert body["schema_version"] == 1
    assert body["index"] == 1
    assert body["command"] == "fgrad"
    assert body["verdict"] == "PASS"
    assert body["value"] == 1
    assert body["ext_certificate"] == 1
    assert body["lc_certificate"] == 1
    assert body["sequence"] == ["y"]
    assert body["tables"] == {}


def test_infinity_is_a_string(reports):
    body = json.loads(emit(reports[1], "json"))
    assert body["value"] == "infinity"
    assert body["constructive_value"] == "infinity"


def test_plain_value():
    assert plain_value(math.inf) == "infinity"
    assert plain_value({"a": [1, math.inf]}) == {"a": [1, "infinity"]}
    assert plain_value((True, None)) == [True, None]


def test_tsv_round_trip(reports):
    report = reports[2]
    (table,) = report.cohomology_tables().values()
    parsed = parse_tsv(emit(report, "tsv").decode())
    assert parsed == {table.label: table.entries}
    assert parsed["H"] == {(1, (-1, 0)): 1}


def test_tsv_without_tables_is_empty(reports):
    assert emit(reports[0], "tsv") == b""


def test_table_json_carries_metadata(reports):
    body = json.loads(emit(reports[2], "json"))
    table = body["tables"]["H"]
    assert table["columns"] == ["i", "d1", "d2", "dim"]
    assert table["rows"] == [[1, -1, 0, 1]]
    assert table["window"] == "[-1..0]"
    assert table["ideal"] == ["x"]


def test_text_output(reports):
    text = emit(reports[0], "text", width=120).decode()
    assert "[1] fgrad: PASS" in text
    assert "ext_certificate" in text


def test_unknown_format(reports):
    with pytest.raises(ValueError):
        emit(reports[0], "xml")


def test_invalid_verdict():
    with pytest.raises(ValueError):
        InvariantReport(1, "fgrad", "MAYBE")


def test_parse_tsv_rejects_bad_header():
    with pytest.raises(ValueError):
        parse_tsv("a\tb\n1\t2\n")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("# H\ni\td1\td2\tdim\n", {"H": {}}),
        ("# H\ni\td1\tdim\n0\t-2\t1\n1\t3\t2\n", {"H": {(0, (-2,)): 1, (1, (3,)): 2}}),
        ("i\td1\tdim\n2\t0\t5\n", {"": {(2, (0,)): 5}}),
    ],
)
def test_parse_tsv_sections(text, expected):
    assert parse_tsv(text) == expected
