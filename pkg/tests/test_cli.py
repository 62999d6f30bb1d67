import pytest

from finreg.cli import main
from finreg.polymaps import MapTable
from finreg import textio as tio


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def swap_file(tmp_path):
    ring = tio.parse_ring("GF(2)^[B(atoms=2)]")
    S = ring.factors[0]
    table = MapTable.from_function(ring, lambda x: ring.element(
        [S.from_values([x.parts[0].value_at(1), x.parts[0].value_at(0)])]))
    ws = tio.Workspace()
    ws.bind("swap", "map", table, ring)
    path = tmp_path / "swap.ws"
    ws.save(path)
    return str(path)


@pytest.fixture
def square_file(tmp_path):
    ring = tio.parse_ring("GF(4)^[B(atoms=1)]")
    table = MapTable.from_function(ring, lambda x: x * x)
    ws = tio.Workspace()
    ws.bind("sq", "map", table, ring)
    path = tmp_path / "sq.ws"
    ws.save(path)
    return str(path)


def test_ring_new_and_quotients(capsys):
    code, out, _ = run(capsys, "ring", "new", "GF(2)^[B(atoms=3)]")
    assert code == 0 and "size 8" in out and "---SUMMARY---" in out
    code, out, _ = run(capsys, "ring", "check", "GF(2)^[B(atoms=3)]", "quotients")
    assert code == 0 and out.count("GF(2)") >= 3


def test_ring_decompose_and_gens(capsys):
    code, out, _ = run(capsys, "ring", "decompose", "GF(3)^[B(atoms=2)]")
    assert code == 0 and "sig{GF(3):2}" in out
    code, out, _ = run(capsys, "ring", "decompose", "GF(4)^[B(atoms=2)]",
                       "--gens", "{[all]->1}")
    assert code == 0 and "sig{GF(2):2}" in out  # only the prime field is generated


def test_ring_check_cfg_exit_codes(capsys):
    code, out, _ = run(capsys, "ring", "check", "GF(3)^[B(atoms=2)]", "cfg",
                       "--gens", "0,1,2")
    assert code == 0 and "cover holds" in out
    code, out, _ = run(capsys, "ring", "check", "GF(4)^[B(atoms=1)]", "cfg",
                       "--gens", "0,1")
    assert code == 1 and "missing" in out


def test_ring_iso(capsys):
    code, out, _ = run(capsys, "ring", "iso", "GF(2)^[B(atoms=2)]",
                       "GF(2)^[B(atoms=1)] x GF(2)^[B(atoms=1)]")
    assert code == 0 and "isomorphic" in out
    code, out, _ = run(capsys, "ring", "iso", "GF(2)^[B(atoms=2)]", "GF(4)^[B(atoms=2)]")
    assert code == 1 and "not isomorphic" in out


def test_map_check_contractive_witness(capsys, swap_file):
    code, out, _ = run(capsys, "map", "check", swap_file, "contractive")
    assert code == 1
    assert "not contractive" in out and "witness x" in out


def test_map_check_polynomial_and_topoly(capsys, square_file):
    code, out, _ = run(capsys, "map", "check", square_file, "polynomial")
    assert code == 0 and "poly[" in out
    code, out, _ = run(capsys, "map", "topoly", square_file)
    assert code == 0 and "degree 2" in out


def test_map_conv_check(capsys, swap_file, square_file):
    code, out, _ = run(capsys, "map", "check", swap_file, "conv")
    assert code == 1
    code, out, _ = run(capsys, "map", "check", square_file, "conv")
    assert code == 0


def test_map_orbit(capsys, square_file):
    code, out, _ = run(capsys, "map", "orbit", square_file, "--gens", "0,1,g,g+1")
    assert code == 0 and "orbit size 2" in out and "methods agree: True" in out


def test_demo_commands(capsys):
    code, out, _ = run(capsys, "demo", "vraciu", "--fields", "GF(2),GF(2),GF(4)")
    assert code == 0 and "sig{GF(2):2, GF(4):1}" in out
    code, out, _ = run(capsys, "demo", "gf4-kernel")
    assert code == 0 and "rejected 16/16" in out
    code, out, _ = run(capsys, "demo", "tower", "--q", "2", "--n", "2", "--samples", "200")
    assert code == 0 and "quotients 4-16" in out
    code, out, _ = run(capsys, "demo", "gf4-sequence", "--n", "3", "--k", "1")
    assert code == 0 and "bound pass" in out


def test_exit_code_input_error(capsys):
    code, _, err = run(capsys, "ring", "new", "GF(6)^[B(atoms=1)]")
    assert code == 2 and "input error" in err
    code, _, err = run(capsys, "ring", "check", "GF(2)^[B(atoms=1)]", "cfg")
    assert code == 2  # cfg without --gens


def test_exit_code_cap_exceeded(capsys):
    code, _, err = run(capsys, "ring", "new", "GF(2)^[B(atoms=2000000)]")
    assert code == 3 and "cap exceeded" in err
    code, _, err = run(capsys, "--atom-cap", "4", "ring", "new", "GF(2)^[B(atoms=8)]")
    assert code == 3


def test_deterministic_output(capsys):
    first = run(capsys, "ring", "decompose", "GF(4)^[B(atoms=2)] x GF(2)^[B(atoms=1)]")
    second = run(capsys, "ring", "decompose", "GF(4)^[B(atoms=2)] x GF(2)^[B(atoms=1)]")
    assert first == second
    t1 = run(capsys, "--seed", "7", "demo", "tower", "--q", "2", "--n", "3",
             "--samples", "50")
    t2 = run(capsys, "--seed", "7", "demo", "tower", "--q", "2", "--n", "3",
             "--samples", "50")
    assert t1 == t2


def test_installed_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "finreg.cli", "demo", "gf4-kernel"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "rejected 16/16" in proc.stdout
