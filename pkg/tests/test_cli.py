"""Command-line driver: flags, exit codes, and stream formats."""

import json
import re
from pathlib import Path

from scasp.cli import main

PROGRAMS = Path(__file__).parent / "programs"


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def mask_time(s):
    return re.sub(r"\(in [0-9.]+ ms\)", "(in _ ms)", s)


def test_query_echo_answers_and_exhaustion(tmp_path, capsys):
    path = write(tmp_path, "p.pl", "p(a). p(b).")
    rc, out, err = run(capsys, path, "-q", "?- p(X).")
    assert rc == 0 and err == ""
    lines = out.splitlines()
    assert lines[0] == "?- p(X)."
    assert lines[1] == ""
    assert out.count("Answer") == 2
    assert lines[-1] == "no"  # the search space was exhausted


def test_stopping_early_suppresses_the_no(tmp_path, capsys):
    path = write(tmp_path, "p.pl", "p(a). p(b).")
    rc, out, _ = run(capsys, path, "-q", "?- p(X).", "-n", "1")
    assert rc == 0
    assert out.count("Answer") == 1
    assert not out.rstrip().endswith("no")


def test_embedded_query_and_override(tmp_path, capsys):
    path = write(tmp_path, "p.pl", "p(a). q(b). ?- p(X).")
    rc, out, _ = run(capsys, path)
    assert rc == 0 and out.splitlines()[0] == "?- p(X)."
    rc, out, _ = run(capsys, path, "-q", "?- q(X).")
    assert rc == 0 and out.splitlines()[0] == "?- q(X)."


def test_multiple_files_merge(tmp_path, capsys):
    first = write(tmp_path, "facts.pl", "p(a).")
    second = write(tmp_path, "rules.pl", "q(X) :- p(X). ?- q(X).")
    rc, out, _ = run(capsys, first, second)
    assert rc == 0
    assert "X = a" in out


def test_exit_one_when_requested_answers_are_missing(tmp_path, capsys):
    path = write(tmp_path, "p.pl", "p(a).")
    rc, out, _ = run(capsys, path, "-q", "?- p(b).", "-n", "1")
    assert rc == 1
    assert out.rstrip().endswith("no")


def test_exit_zero_on_empty_unlimited_search(tmp_path, capsys):
    path = write(tmp_path, "p.pl", "p(a).")
    rc, out, _ = run(capsys, path, "-q", "?- p(b).")
    assert rc == 0
    assert out.rstrip().endswith("no")


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "--answers")[0] == 2  # missing value and files
    path = write(tmp_path, "p.pl", "p(a).")
    assert run(capsys, path, "-q", "?- p(a).", "-n", "-3")[0] == 2
    rc, _, err = run(capsys, str(tmp_path / "absent.pl"))
    assert rc == 2 and "absent.pl" in err


def test_help_exits_cleanly(capsys):
    assert run(capsys, "--help")[0] == 0


def test_missing_query_is_an_error(tmp_path, capsys):
    path = write(tmp_path, "p.pl", "p(a).")
    rc, _, err = run(capsys, path)
    assert rc == 2 and "query" in err


def test_parse_error_location(tmp_path, capsys):
    path = write(tmp_path, "bad.pl", "p(a).\nq(b)\nr(c).")
    rc, _, err = run(capsys, path)
    assert rc == 2
    assert err.startswith(f"{path}:3:")


def test_reserved_name_error_location(tmp_path, capsys):
    path = write(tmp_path, "bad.pl", "not_p(a).")
    rc, _, err = run(capsys, path, "-q", "?- q.")
    assert rc == 2
    assert err.startswith(f"{path}:1:1:")
    assert "reserved" in err


def test_solver_restriction_reports_its_code(tmp_path, capsys):
    path = write(tmp_path, "p.pl", "p(a).")
    rc, _, err = run(capsys, path, "-q", "?- X \\= f(Y).")
    assert rc == 2
    assert "nonground_disequality" in err


def test_json_lines_stream(capsys):
    rc, out, err = run(capsys, str(PROGRAMS / "stream.pl"), "--json-lines")
    assert rc == 0 and err == ""
    lines = out.strip().splitlines()
    assert len(lines) == 3  # one record per answer, nothing else
    records = [json.loads(line) for line in lines]
    assert [r["answer"] for r in records] == [1, 2, 3]
    assert all("model" in r and "justification" in r for r in records)


def test_json_lines_respects_section_flags(tmp_path, capsys):
    path = write(tmp_path, "p.pl", "p(a).")
    rc, out, _ = run(
        capsys, path, "-q", "?- p(X).", "--json-lines", "--no-just", "--no-model"
    )
    assert rc == 0
    (record,) = [json.loads(line) for line in out.strip().splitlines()]
    assert record["bindings"] == {"X": "a"}
    assert "model" not in record and "justification" not in record


def test_text_section_flags(tmp_path, capsys):
    path = write(tmp_path, "p.pl", "p(a) :- q(a). q(a).")
    rc, out, _ = run(capsys, path, "-q", "?- p(a).", "--no-just")
    assert rc == 0
    assert ":-" not in out and "[ p(a), q(a), nmr_check ]" in out


def test_dump_compiled_is_a_fixed_point(tmp_path, capsys):
    path = write(tmp_path, "p.pl", "p(0). p(X) :- q(X), not t(X,Y). q(1). t(1,2).")
    rc, dump1, _ = run(capsys, path, "--dump-compiled", "-q", "?- p.")
    assert rc == 0
    assert "% dual rules:" in dump1 and "not p__1(A) :- A\\=0." in dump1
    again = write(tmp_path, "dump.pl", dump1)
    rc, dump2, _ = run(capsys, again, "--dump-compiled", "-q", "?- p.")
    assert rc == 0
    assert dump1 == dump2


def test_oracle_lists_stable_models(tmp_path, capsys):
    path = write(tmp_path, "p.pl", "a :- not b. b :- not a.")
    rc, out, _ = run(capsys, path, "--oracle")
    assert rc == 0
    assert sorted(out.strip().splitlines()) == ["{ a }", "{ b }"]


def test_oracle_reports_no_models(tmp_path, capsys):
    path = write(tmp_path, "p.pl", "p :- q(a), not p. q(a).")
    rc, out, _ = run(capsys, path, "--oracle")
    assert rc == 1
    assert out.strip() == "no"


def test_oracle_rejects_constraints(tmp_path, capsys):
    path = write(tmp_path, "p.pl", "p(X) :- X .<. 3.")
    rc, _, err = run(capsys, path, "--oracle")
    assert rc == 2
    assert "unsupported_constraint" in err


def test_runs_are_deterministic(capsys):
    rc1, out1, _ = run(capsys, str(PROGRAMS / "stream.pl"))
    rc2, out2, _ = run(capsys, str(PROGRAMS / "stream.pl"))
    assert rc1 == rc2 == 0
    assert mask_time(out1) == mask_time(out2)
