"""Command-line interface: golden outputs and exit codes."""

import io
import json

import pytest

from fermiselect.cli import main, parse_hamiltonian
from fermiselect.pauli import Lower, Number, Raise


def run(argv, capsys):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


# --- Hamiltonian parsing ---------------------------------------------------------


def test_parse_basic():
    terms = parse_hamiltonian("0.5 -0.25 : adag 0 a 2 +hc\n# comment\n1 0 : n 1\n")
    assert len(terms) == 2
    assert terms[0].coefficient == 0.5 - 0.25j
    assert terms[0].factors == (Raise(0), Lower(2))
    assert terms[0].include_hc
    assert terms[1].factors == (Number(1),) and not terms[1].include_hc


@pytest.mark.parametrize("text,msg", [
    ("1 0 n 0", "expected"),
    ("1 : n 0", "two floats"),
    ("x y : n 0", "bad coefficient"),
    ("1 0 : n", "pairs"),
    ("1 0 : b 0", "unknown factor"),
    ("1 0 : n zero", "bad orbital"),
])
def test_parse_errors(text, msg):
    with pytest.raises(ValueError, match=msg):
        parse_hamiltonian(text)


def test_parse_empty_is_empty():
    assert parse_hamiltonian("") == []
    assert parse_hamiltonian("# only comments\n\n") == []


def test_parse_error_carries_line_number():
    with pytest.raises(ValueError, match="line 2"):
        parse_hamiltonian("1 0 : n 0\nbroken\n")


# --- transform -------------------------------------------------------------------


def test_transform_number_operator(tmp_path, capsys):
    src = tmp_path / "h.txt"
    src.write_text("1 0 : n 0\n")
    rc, out, _ = run(["transform", str(src), "--n", "1"], capsys)
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "# n=1 k=2 selection_width=7 terms=2"
    assert lines[1] == "# total_alpha=1.0"
    assert lines[2] == "0000000 0.5 +I"
    assert lines[3] == "1000010 0.5 -Z"


def test_transform_stdin_and_hopping(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("1 0 : adag 0 a 1 +hc\n"))
    rc, out, _ = run(["transform", "-", "--n", "2"], capsys)
    assert rc == 0
    body = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert sorted(ln.split()[-1] for ln in body) == ["+XX", "+YY"]
    assert all(ln.split()[1] == "0.5" for ln in body)


def test_transform_infers_k(capsys, monkeypatch):
    # a 4-operator term occupies four slots (two endpoints per pair)
    monkeypatch.setattr("sys.stdin", io.StringIO("1 0 : adag 0 a 1 adag 2 a 3 +hc\n"))
    rc, out, _ = run(["transform", "-", "--n", "4"], capsys)
    assert rc == 0
    assert out.splitlines()[0] == "# n=4 k=4 selection_width=21 terms=8"


def test_transform_empty_file(tmp_path, capsys):
    src = tmp_path / "empty.txt"
    src.write_text("# nothing here\n")
    rc, out, _ = run(["transform", str(src), "--n", "2"], capsys)
    assert rc == 0
    assert [ln for ln in out.splitlines() if not ln.startswith("#")] == []
    assert "terms=0" in out.splitlines()[0]


def test_transform_parse_error_exit_code(tmp_path, capsys):
    src = tmp_path / "h.txt"
    src.write_text("nonsense\n")
    rc, _, err = run(["transform", str(src), "--n", "2"], capsys)
    assert rc == 2
    assert "line 1" in err


def test_transform_missing_file(capsys):
    rc, _, err = run(["transform", "/no/such/file", "--n", "2"], capsys)
    assert rc == 2 and "error:" in err


# --- synth -----------------------------------------------------------------------


def test_synth_header_and_registers(capsys):
    rc, out, _ = run(["synth", "--n", "4", "--k", "2"], capsys)
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "qubits 11;"
    regs = [ln for ln in lines if ln.startswith("#")]
    assert any("system" in ln for ln in regs)
    # lowered output contains only terminal gates (a/adg are the star
    # variant's basis-change rotations)
    ops = {ln.split()[0] for ln in lines[1:] if not ln.startswith("#")}
    assert ops <= {"x", "y", "z", "h", "s", "sdg", "t", "tdg", "a", "adg", "cx", "cy", "cz"}
    assert "a" in ops and "cx" in ops


def test_synth_plain_variant_uses_t_gates(capsys):
    rc, out, _ = run(["synth", "--n", "4", "--variant", "plain"], capsys)
    assert rc == 0
    ops = {ln.split()[0] for ln in out.splitlines()[1:] if not ln.startswith("#")}
    assert "t" in ops and "tdg" in ops and "a" not in ops


def test_synth_controls_add_qubits(capsys):
    rc, out, _ = run(["synth", "--n", "4", "--controls", "1"], capsys)
    assert rc == 0
    assert out.splitlines()[0] == "qubits 12;"


def test_synth_output_file(tmp_path, capsys):
    dest = tmp_path / "circ.txt"
    rc, out, _ = run(["synth", "--n", "2", "--output", str(dest)], capsys)
    assert rc == 0 and out == ""
    assert dest.read_text().startswith("qubits 7;")


# --- resources -------------------------------------------------------------------


def test_resources_single_n(capsys):
    rc, out, _ = run(["resources", "--n", "8"], capsys)
    assert rc == 0
    assert out.splitlines()[0] == "component,n,metric,measured,expected,status"
    assert "SwapUp,8,t_count,98,98,ok" in out
    assert ",FAIL" not in out


def test_resources_n_list(capsys):
    rc, out, _ = run(["resources", "--n-list", "4,8"], capsys)
    assert rc == 0
    sizes = {ln.split(",")[1] for ln in out.splitlines()[1:]}
    assert sizes == {"4", "8"}


# --- verify ----------------------------------------------------------------------


def test_verify_passes(capsys):
    rc, out, _ = run(["verify", "--n", "2", "--trials", "2", "--seed", "4"], capsys)
    assert rc == 0
    report = json.loads(out)
    assert report["pass"] and report["states_checked"] == 8
    assert report["max_error"] < 1e-9


def test_verify_capacity_guard(capsys):
    rc, _, err = run(["verify", "--n", "16"], capsys)
    assert rc == 2 and "at most" in err
    rc, _, err = run(["verify", "--n", "6", "--k", "4"], capsys)
    assert rc == 2 and "at most" in err
