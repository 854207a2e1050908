import json

import pytest

from nfg.cli import EXIT_OK, EXIT_UNEQUAL, EXIT_USAGE, EXIT_VALIDATION, main

TRACE_DOC = """
tensor A [2,2] = 1, 2, 3, 4
graph tr { vertex a: A  edge loop(a.1, a.2) }
"""

SKEW_DOC = """
tensor S [4,4] = 0, 1, 2, 3, -1, 0, 4, 5, -2, -4, 0, 6, -3, -5, -6, 0
"""

MAT_DOC = """
tensor M [3,3] = 2, 0, 1, 1, 3, 0, 0, 1, 4
"""

EQ_DOC = """
tensor u [3] = 1, 2, 3
graph g1 { vertex a: u  dangling x(a.1) }
let g2 = 1*g1
let g3 = 2*g1
"""


@pytest.fixture
def doc(tmp_path):
    def write(text, name="doc.nfg"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def test_contract_scalar(doc, capsys):
    assert main(["contract", doc(TRACE_DOC), "tr"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out == {"shape": [], "values": ["5"]}


def test_contract_engines_agree(doc, capsys):
    path = doc(TRACE_DOC)
    assert main(["contract", path, "tr", "--engine", "brute"]) == EXIT_OK
    brute = capsys.readouterr().out
    assert main(["contract", path, "tr", "--engine", "planned"]) == EXIT_OK
    assert capsys.readouterr().out == brute


def test_contract_plan_out(doc, tmp_path, capsys):
    plan_file = tmp_path / "plan.txt"
    assert main(["contract", doc(TRACE_DOC), "tr", "--engine", "planned",
                 "--plan-out", str(plan_file)]) == EXIT_OK
    assert plan_file.exists()
    capsys.readouterr()


def test_equal_exit_codes(doc, capsys):
    path = doc(EQ_DOC)
    assert main(["equal", path, "g1", "g2"]) == EXIT_OK
    assert "equal" in capsys.readouterr().out
    assert main(["equal", path, "g1", "g3"]) == EXIT_UNEQUAL
    assert "unequal" in capsys.readouterr().out


def test_pfaffian(doc, capsys):
    assert main(["pfaffian", doc(SKEW_DOC), "S"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "pfaffian(diagram) = 8" in out
    assert "pfaffian(oracle)  = 8" in out


def test_det(doc, capsys):
    assert main(["det", doc(MAT_DOC), "M"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "det(diagram) = 25" in out
    assert "det(oracle)  = 25" in out


def test_trace(doc, capsys):
    assert main(["trace", doc(MAT_DOC), "M"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "trace(diagram) = 9" in out


def test_plan(doc, capsys):
    assert main(["plan", doc(TRACE_DOC), "tr"]) == EXIT_OK
    assert "estimated cost" in capsys.readouterr().out


def test_verify_suite(capsys):
    assert main(["verify", "lemma3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "lemma3-n=10 PASS" in out


def test_verify_unknown_suite(capsys):
    assert main(["verify", "nosuchsuite"]) == EXIT_USAGE
    capsys.readouterr()


def test_missing_file(capsys):
    assert main(["contract", "/nonexistent/file.nfg", "g"]) == EXIT_USAGE
    capsys.readouterr()


def test_parse_error_is_usage(doc, capsys):
    path = doc("tensor A [2] = 1\n", name="bad.nfg")
    assert main(["contract", path, "g"]) == EXIT_USAGE
    assert "parse error" in capsys.readouterr().err


def test_unknown_graph_is_validation(doc, capsys):
    assert main(["contract", doc(TRACE_DOC), "nope"]) == EXIT_VALIDATION
    capsys.readouterr()


def test_no_arguments_is_usage(capsys):
    assert main([]) == EXIT_USAGE
    capsys.readouterr()


def test_det_rejects_non_square(doc, capsys):
    path = doc("tensor R [2,3] = 1, 2, 3, 4, 5, 6\n", name="rect.nfg")
    assert main(["det", path, "R"]) == EXIT_VALIDATION
    capsys.readouterr()


def test_pfaffian_rejects_non_skew(doc, capsys):
    assert main(["pfaffian", doc(MAT_DOC), "M"]) == EXIT_VALIDATION
    capsys.readouterr()
