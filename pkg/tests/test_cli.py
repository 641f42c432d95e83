import pytest

from bhr.cli import main

EX_FILE = """#BHR v1 U=2,4,5 case=1,4,3
abc=1,8,3 m=-,3,6 path=6 10 5 1 9 11 2 7 3 12 8 4 0
"""


@pytest.fixture
def ex_file(tmp_path):
    p = tmp_path / "ex.bhr"
    p.write_text(EX_FILE)
    return p


def test_verify_ok(ex_file, capsys):
    assert main(["verify", str(ex_file)]) == 0
    assert "1 passed, 0 failed" in capsys.readouterr().out


def test_verify_failure_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.bhr"
    p.write_text(EX_FILE.replace("m=-,3,6", "m=-,3,7"))
    assert main(["verify", str(p)]) == 1
    assert "5-growable at 7" in capsys.readouterr().out


def test_parse_error_is_usage(tmp_path, capsys):
    p = tmp_path / "bad.bhr"
    p.write_text("#BHR v1 U=2,4,5 case=1,4,3\nabc=1,8,3 m=-,3,6\n")
    assert main(["verify", str(p)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_shipped_cover(capsys):
    assert main(["cover", "--shipped", "3,4,5"]) == 0
    assert "60 cases, 0 uncovered, 0 absent" in capsys.readouterr().out


def test_grow(ex_file, capsys):
    assert main(["grow", str(ex_file), "--schedule", "4,5"]) == 0
    out = capsys.readouterr().out
    assert "path=10 15 19 14 9 5 1 18 20 2 6 11 16 12 7 3 21 17 13 8 4 0" in out


def test_grow_unsupported_schedule(ex_file, capsys):
    assert main(["grow", str(ex_file), "--schedule", "2"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_search_and_budget(tmp_path, capsys):
    assert main(["search", "--U", "2,4,5", "--abc", "1,8,3", "--growable", "4,5"]) == 0
    assert capsys.readouterr().out.startswith("found")
    ck = tmp_path / "ck.txt"
    assert main(["search", "--U", "2,4,5", "--abc", "1,8,3", "--all", "--budget", "500",
                 "--checkpoint", str(ck)]) == 3
    capsys.readouterr()
    assert main(["search", "--U", "2,4,5", "--abc", "1,8,3", "--all", "--resume", str(ck)]) == 0
    assert "count=" in capsys.readouterr().out


def test_case_emits_certificates(tmp_path, capsys):
    out = tmp_path / "case.bhr"
    assert main(["case", "--U", "2,4,5", "--case", "2,4,5", "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["verify", str(out)]) == 0
    assert main(["cover", str(out)]) == 0  # absent cases are reported, not failed
    assert "39 absent" in capsys.readouterr().out


def test_construct_and_oracle(capsys):
    assert main(["construct-12x", "--v", "16", "--x", "7", "--a", "10"]) == 0
    assert capsys.readouterr().out.strip() == "15 14 13 12 11 10 9 8 7 0 1 3 5 6 4 2"
    assert main(["oracle", "--U", "1,2", "--abc", "1,3"]) == 0
    assert capsys.readouterr().out.startswith("5 orbit(s)")
    assert main(["construct-12x", "--v", "16", "--x", "8", "--a", "10"]) == 2


def test_prove_12x(capsys):
    assert main(["prove-12x", "--x", "4"]) == 0
    assert "realized=3" in capsys.readouterr().out


def test_table(capsys):
    assert main(["table", "4"]) == 0
    assert capsys.readouterr().out.count("abc=") == 22
