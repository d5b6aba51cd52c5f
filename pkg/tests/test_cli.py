import json

import pytest

from rtlab.cli import main, parse_unary, parse_word


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_parse_helpers():
    assert parse_unary("a^12") == 12
    assert parse_unary("aaa") == 3
    assert parse_unary("5") == 5
    assert parse_word("a^4b") == "aaaab"


def test_run_examples(capsys):
    code, out = run(capsys, "run", "ms.rtm", "aaaab")
    assert code == 0 and out.out.startswith("accept steps=5")
    code, out = run(capsys, "run", "ms.rtm", "aab")
    assert out.out.startswith("reject")
    code, out = run(capsys, "run", "--machine", "ms", "--input", "")
    assert out.out.startswith("reject steps=0")


def test_run_trace_and_mode(capsys, tmp_path):
    trace = tmp_path / "t.jsonl"
    run(capsys, "run", "ms.rtm", "a^4b", "--trace", str(trace))
    recs = [json.loads(line) for line in trace.read_text().splitlines()]
    assert recs[-1]["event"] == "accept"
    code, out = run(capsys, "run", "ms.rtm", "a^4bab", "--mode", "final-empty")
    assert out.out.startswith("reject")


def test_run_machine_file_errors(capsys, tmp_path):
    bad = tmp_path / "bad.rtm"
    bad.write_text("machine x\ntapes 1\nstates q0\ninitial q0\nwork-alphabet #\n"
                   "rule q0 a # -> q0 R\n")
    code, out = run(capsys, "run", str(bad), "a")
    assert code == 2 and "line 6" in out.err


def test_pad(capsys):
    assert run(capsys, "pad", "101")[1].out.strip() == "a^5"
    assert run(capsys, "pad", "101", "--literal")[1].out.strip() == "aaaaa"
    assert run(capsys, "pad", "--inverse", "8")[1].out.strip() == "1000"
    assert run(capsys, "pad", "0101")[0] == 2
    assert run(capsys, "pad", "--inverse", "0")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys, "verify", "nonsense")[0] == 2
    assert run(capsys, "recognize", "--decider", "bogus", "--n", "4")[0] == 2
    assert run(capsys, "counter", "run")[0] == 2


def test_counter_verbs(capsys, tmp_path):
    code, out = run(capsys, "counter", "run", "--n", "8", "--strategy", "exhaustive")
    assert code == 0 and json.loads(out.out)["exists_correct"]
    trace = tmp_path / "c.jsonl"
    run(capsys, "counter", "run", "--n", "a^20", "--trace", str(trace))
    events = [json.loads(line)["event"] for line in trace.read_text().splitlines()]
    assert {"cell-guess", "phase-trigger", "msb-guess", "special"} <= set(events)
    code, _ = run(capsys, "counter", "run", "--n", "30", "--strategy", "exhaustive",
                  "--max-branches", "100")
    assert code == 3
    code, out = run(capsys, "counter", "verify", "--max-n", "8")
    assert code == 0 and "measured_n0=1" in out.out


def test_verify_and_report_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for path in (a, b):
        code, out = run(capsys, "verify", "lemma1", "--max-n", "10", "--strategy",
                        "random", "--seed", "4", "--report", str(path))
    assert a.read_bytes() == b.read_bytes()
    lines = [json.loads(line) for line in a.read_text().splitlines()]
    assert lines[0]["record"] == "header" and lines[-1]["record"] == "summary"
    assert any(line["record"] == "deviation" for line in lines)
    assert run(capsys, "verify", "squares", "--max-n", "50")[0] == 0
    assert run(capsys, "verify", "md", "--max-v", "64", "--max-t", "2000")[0] == 0
    assert run(capsys, "verify", "pad")[0] == 0


def test_random_lemma1_can_fail_honestly(capsys):
    # one random branch per n rarely finds the witness: exit code 1, not an error
    code, out = run(capsys, "verify", "lemma1", "--max-n", "6", "--strategy", "random")
    assert code in (0, 1) and "status=" in out.out


@pytest.mark.parametrize("argv, want", [
    (["recognize", "--n", "97"], "accept"),
    (["recognize", "--n", "a^9"], "reject"),
    (["recognize", "--decider", "singleton:1000", "--n", "8"], "accept"),
    (["recognize", "--decider", "always", "--n", "5", "--strategy", "exhaustive"], "accept"),
])
def test_recognize(capsys, argv, want):
    code, out = run(capsys, *argv)
    assert code == 0 and out.out.split()[0] == want


def test_oracle_and_primes(capsys):
    out = json.loads(run(capsys, "oracle", "pratt", "--n", "97")[1].out)
    assert out["verified"] and out["certificate"]["p"] == 97
    assert json.loads(run(capsys, "oracle", "squares", "--n", "a^16")[1].out)["square"]
    assert json.loads(run(capsys, "oracle", "nerode", "--max-n", "100")[1].out)["verified"]
    code, out = run(capsys, "primes", "--max-n", "30", "--strategy", "oracle-guided")
    assert code == 0 and "status=pass" in out.out


def test_run_clocks_input_free_machine(capsys):
    code, out = run(capsys, "run", "md.rtm", "a^14")
    assert code == 0 and "tapes=['100']" in out.out
