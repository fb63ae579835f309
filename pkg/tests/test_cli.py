import json

import pytest

from regasync.cli import main

WS = """\
genfn follow { n=1 m=1 ; x1' = u1 }
genfn ident { n=1 m=1 ; x1' = x1 }
genfn osc { n=1 m=1 ; x1' = !x1 }
signal one = init 1
signal zero = init 0
signal up = init 0 ; 1:1
sched r = sched n=1 prefix[1:{1}] tail anchor=2 period=1 [0:{1}]
system f { one -> { up, one } ; zero -> { zero } }
system g { one -> { one } }
system bad { zero -> { up } }
system h { one -> { zero } }
"""


@pytest.fixture
def ws(tmp_path):
    p = tmp_path / "w.ars"
    p.write_text(WS)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_follower_csv(ws, capsys):
    code, out, _ = run(capsys, "solve", ws, "--genfn", "follow", "--mu", "0",
                       "--input", "one", "--sched", "r")
    assert code == 0
    assert out.splitlines() == ["time,x1", "-inf,0", "1,1"]


def test_solve_identity_single_row(ws, capsys):
    code, out, _ = run(capsys, "solve", ws, "--genfn", "ident", "--mu", "0",
                       "--input", "one", "--sched", "r")
    assert code == 0 and out.splitlines() == ["time,x1", "-inf,0"]


def test_solve_vcd_to_file(ws, capsys, tmp_path):
    dest = tmp_path / "x.vcd"
    code, _, _ = run(capsys, "solve", ws, "--genfn", "follow", "--mu", "0", "--input", "one",
                     "--sched", "r", "--format", "vcd", "--out", str(dest))
    assert code == 0 and "#1" in dest.read_text()


def test_solve_oscillator_exit_3(ws, capsys):
    code, _, err = run(capsys, "solve", ws, "--genfn", "osc", "--mu", "0",
                       "--input", "one", "--sched", "r")
    assert code == 3 and "cycle entered at t=2: 1 -> 0" in err


def test_solve_errors_exit_2(ws, capsys):
    assert run(capsys, "solve", ws, "--genfn", "nope", "--mu", "0",
               "--input", "one", "--sched", "r")[0] == 2
    assert run(capsys, "solve", ws, "--genfn", "follow", "--mu", "00",
               "--input", "one", "--sched", "r")[0] == 2
    assert run(capsys, "solve", "/nonexistent/file")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_member(ws, capsys):
    code, out, _ = run(capsys, "member", ws, "--genfn", "follow", "--state", "up",
                       "--input", "one")
    assert code == 0 and out.startswith("member: witness sched n=1 prefix[1:{1}]")
    code, out, _ = run(capsys, "member", ws, "--genfn", "follow", "--state", "up",
                       "--input", "zero")
    assert code == 1 and "not a member" in out


def test_check_emits_pi(ws, capsys, tmp_path):
    code, out, _ = run(capsys, "check", ws, "--system", "f", "--genfn", "follow")
    assert code == 0 and "pi pi_f {" in out
    # the emitted block is valid workspace syntax
    (tmp_path / "w2.ars").write_text(WS + out)
    assert run(capsys, "verify", str(tmp_path / "w2.ars"), "--theorem", "union", "f", "f",
               "--genfn", "follow", "--pi", "pi_f", "--pi", "pi_f")[0] == 0
    code, out, _ = run(capsys, "check", ws, "--system", "bad", "--genfn", "follow")
    assert code == 1 and "not generated" in out


def test_synth(ws, capsys):
    code, out, _ = run(capsys, "synth", ws, "--system", "f")
    assert code == 0 and out.startswith("genfn synth_f {")
    code, out, _ = run(capsys, "synth", ws, "--system", "h", "--name", "S")
    assert code == 0 and out.startswith("genfn S {")


def test_combine(ws, capsys):
    code, out, _ = run(capsys, "combine", ws, "--op", "union", "f", "g")
    assert code == 0 and out.startswith("system union_f_g {")
    code, out, _ = run(capsys, "combine", ws, "--op", "dual", "f", "--derived",
                       "--genfn", "follow")
    assert code == 0 and "# i(init 0) = {0, 1}" in out and "pi pi_dual_f {" in out
    assert run(capsys, "combine", ws, "--op", "intersect", "g", "h")[0] == 2
    assert run(capsys, "combine", ws, "--op", "dual", "f", "g")[0] == 2


def test_verify(ws, capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", ws, "--theorem", "union", "f", "f",
                       "--genfn", "follow", "--report", str(report))
    assert code == 0 and "HOLDS" in out
    assert json.loads(report.read_text())["holds"] is True
    assert run(capsys, "verify", ws, "--theorem", "union", "f", "bad",
               "--genfn", "follow")[0] == 2
    assert run(capsys, "verify", ws, "--theorem", "dual", "f", "g", "--genfn", "follow")[0] == 2
