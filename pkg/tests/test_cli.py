import json

import pytest

from padicdyn.cli import main, parse_spec, serialize_spec
from padicdyn.errors import ParseError, ValidationError

DECIDE = """\
[field]
prime = 5

[operator]
kind = lambda-mu
lambda = 5/1
mu = 1/5
domain = N

[params]
property = hypercyclic
u_center = "1:1/1"
v_center = "2:1/1"
"""

MINIMAL = """\
[field]
prime = 5
[operator]
kind = unilateral-shift
period_v = [-1]
[params]
property = hypercyclic
"""


def test_minimal_spec_round_trips():
    spec = parse_spec(MINIMAL)
    assert spec.operator["period_v"] == [-1]
    again = parse_spec(serialize_spec(spec))
    assert again == spec
    assert serialize_spec(again) == serialize_spec(spec)


def test_composite_prime_rejected():
    with pytest.raises(ValidationError, match="not prime"):
        parse_spec(MINIMAL.replace("prime = 5", "prime = 4"))


def test_zero_weight_rejected():
    with pytest.raises(ValidationError, match="zero weight") as info:
        parse_spec(MINIMAL.replace("period_v = [-1]", "period = [3/2, 0/1]"))
    assert info.value.line == 5


def test_unknown_key_has_position():
    with pytest.raises(ParseError) as info:
        parse_spec(MINIMAL + "colour = red\n")
    assert info.value.line == 8 and info.value.column == 1


def test_all_diagnostics_collected():
    with pytest.raises(ParseError) as info:
        parse_spec("[field]\nprime = x\n[bogus]\n")
    assert len(info.value.diagnostics) == 2


def _run(tmp_path, text, *argv):
    path = tmp_path / "exp.spec"
    path.write_text(text)
    return main([argv[0], "--spec", str(path), *argv[1:]])


def test_decide_prints_rule(tmp_path, capsys):
    assert _run(tmp_path, DECIDE, "decide") == 0
    out = capsys.readouterr().out
    assert "Yes" in out and "lambda-mu-n-hc" in out


def test_witness_exits_zero_and_verifies(tmp_path, capsys):
    assert _run(tmp_path, DECIDE, "witness", "--format", "records") == 0
    rec = json.loads(capsys.readouterr().out.splitlines()[0])
    assert rec["in_U"] and rec["in_V"]


def test_witness_budget_inconclusive(tmp_path, capsys):
    text = DECIDE + 'u_radius = -4\nv_radius = -4\n'
    assert _run(tmp_path, text, "witness", "--budget", "1") == 2


def test_error_exit_code(tmp_path, capsys):
    assert _run(tmp_path, MINIMAL.replace("prime = 5", "prime = 9"), "decide") == 1
    assert "not prime" in capsys.readouterr().err


def test_reports_are_deterministic(tmp_path):
    text = DECIDE + "seed = 3\n"
    outs = []
    for name in ("a", "b"):
        rep = tmp_path / f"{name}.jsonl"
        assert _run(tmp_path, text, "verify-criterion", "--report", str(rep), "--format", "records") == 0
        outs.append(rep.read_bytes())
    assert outs[0] == outs[1]
    for line in outs[0].decode().splitlines():
        rec = json.loads(line)
        for v in rec.get("norm_exponents", []):
            assert isinstance(v, int) or v in ("zero", "inf")


def test_obstruct_and_orbit(tmp_path, capsys):
    text = "[field]\nprime = 5\n[operator]\nkind = lambda-mu\nlambda = 1/1\nmu = 1/5\n[params]\n"
    assert _run(tmp_path, text, "obstruct") == 0
    assert "holds = True" in capsys.readouterr().out
    assert _run(tmp_path, text + 'vector = "2:1/1"\nn_max = 4\n', "orbit") == 0
    assert "n=4" in capsys.readouterr().out


def test_command_mismatch(tmp_path):
    assert _run(tmp_path, DECIDE + "command = orbit\n", "decide") == 1
