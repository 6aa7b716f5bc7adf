import io
import json
import pathlib
import subprocess
import sys

import pytest

from corrfunctor.algfunctor import algebra_FT, dump_algebra, product_algebra
from corrfunctor.cli import run
from corrfunctor.lattices import chain, diamond, format_lattice

from cli_cases import CASES

GOLDEN = pathlib.Path(__file__).parent / "golden"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    code, out, _ = call(*CASES[name])
    assert f"exit {code}\n" + out == (GOLDEN / f"{name}.txt").read_text()


def test_output_is_byte_stable():
    argv = ["--json", "verify", "pairing", "--bound", "2", "--samples", "3", "--seed", "7"]
    assert call(*argv) == call(*argv)


def test_spec_examples():
    code, out, _ = call("verify", "tau", "--lattice", "chain1", "--lattice", "chain1", "--bound", "3")
    assert code == 0 and out.startswith("THEOREM tau PASS")
    code, out, _ = call("ft-dims", "--lattice", "chain2", "--bound", "3")
    assert out.strip() == "1, 3, 9, 27"
    code, out, _ = call("reconstruct", "--algebra", "ft:diamond", "--bound", "3")
    assert code == 0 and "isomorphic to diamond: yes" in out


def test_json_reports_parse():
    code, out, _ = call("verify", "idempotents", "--lattice", "m3", "--bound", "2", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["theorem"] == "idempotents" and rec["status"] == "PASS" and rec["cases"] > 0


def test_compose_file(tmp_path):
    f = tmp_path / "c.txt"
    # V after U: listed in composition order V, U
    f.write_text("corr 1 2\n11\ncorr 2 1\n1\n0\n")
    code, out, _ = call("compose", str(f))
    assert code == 0 and out == "corr 1 1\n1\n"


def test_lattice_file_and_errors(tmp_path):
    good = tmp_path / "d.lat"
    good.write_text(format_lattice(diamond()))
    assert call("lattice-check", str(good))[0] == 0
    bad = tmp_path / "bad.lat"
    bad.write_text("lattice 3\ncover 0 1\ncover 0 x\n")
    code, _, err = call("lattice", "check", str(bad))
    assert code == 2 and "line 3" in err
    notlat = tmp_path / "v.lat"
    notlat.write_text("lattice 3\ncover 0 1\ncover 0 2\n")
    code, _, err = call("lattice-check", str(notlat))
    assert code == 2 and err.startswith("error:")


def test_malformed_correspondence_file(tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("corr 2 2\n10\n1\n")
    code, _, err = call("compose", str(f))
    assert code == 2 and "line 3" in err


def test_input_errors():
    assert call("verify", "no-such-theorem")[0] == 2
    assert call("ft-dims", "--lattice", "no-such-lattice")[0] == 2
    assert call("hom-dims", "k", "weird")[0] == 2
    assert call("compose", "/nonexistent/file")[0] == 2
    assert call("--bound", "-1", "ft-dims")[0] == 2
    assert call("not-a-verb")[0] == 2
    assert call("reconstruct", "--algebra", "ft:chain1", "--bound", "1")[0] == 2


def test_bound_four_warns():
    code, out, err = call("ft-dims", "--lattice", "chain1", "--bound", "4")
    assert code == 0 and "warning" in err and out.strip() == "1, 2, 4, 8, 16"


def test_failing_verification_exit_one(tmp_path):
    a = algebra_FT(chain(1), 2)
    f = tmp_path / "prod.alg"
    f.write_text(dump_algebra(product_algebra(a, a)))
    code, out, _ = call("verify", "exponential", "--algebra", str(f))
    assert code == 1 and "FAIL" in out and "witness=dim A(0) = 2" in out
    code, out, _ = call("reconstruct", "--algebra", str(f))
    assert code == 1 and "step 0" in out


def test_algebra_file_round_trip(tmp_path):
    f = tmp_path / "d.alg"
    f.write_text(dump_algebra(algebra_FT(diamond(), 2)))
    code, out, _ = call("reconstruct", "--algebra", str(f))
    assert code == 0 and out.startswith("lattice 4\n")


def test_reconstruct_lattice_flag_matches_algebra_flag():
    by_lattice = call("reconstruct", "--lattice", "n5", "--bound", "2")
    by_algebra = call("reconstruct", "--algebra", "ft:n5", "--bound", "2")
    assert by_lattice == by_algebra
    assert by_lattice[1].endswith("isomorphic to n5: yes relabeling [0, 1, 2, 3, 4]\n")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "corrfunctor", "ft-dims", "--lattice", "chain3", "--bound", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1, 4, 16\n"
