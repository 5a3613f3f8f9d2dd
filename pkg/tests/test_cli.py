from __future__ import annotations

import pytest

from infactor.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestRado:
    def test_adj(self, capsys):
        assert run(capsys, "rado", "adj", "--q", "2", "--set", "1", "--edge", "1,3")[:2] == (0, "true\n")

    def test_witness(self, capsys):
        code, out, _ = run(capsys, "rado", "witness", "--q", "2", "--set", "1", "--U", "1,3", "--W", "0,2", "--min", "3")
        assert (code, out) == (0, "10\n")

    def test_undominated(self, capsys):
        assert run(capsys, "rado", "undominated", "--D", "0,1", "--min", "1")[:2] == (0, "4\n")

    def test_bad_base(self, capsys):
        assert run(capsys, "rado", "adj", "--q", "1", "--set", "0", "--edge", "0,1")[0] == 2

    def test_star_check(self, capsys):
        code, out, _ = run(capsys, "rado", "star-check", "--trials", "20", "--seed", "5")
        assert code == 0 and out.startswith("# seed 5\nPASS 20/20")

    def test_unknown_command(self, capsys):
        assert run(capsys, "rado", "frobnicate")[0] == 2


class TestFactorize:
    def test_digits(self, capsys, tmp_path):
        out = tmp_path / "d.txt"
        assert run(capsys, "factorize", "digits", "--q", "3", "--edges", "1000", "--out", str(out))[0] == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 1000
        assert {ln.split()[2] for ln in lines} == {"0", "1", "2"}
        assert lines[8] == "E 8 0"  # {2, 4}: 4 = 11 in base 3, digit 2 is 0

    def test_engine_and_replay(self, capsys, tmp_path):
        m = tmp_path / "m.txt"
        code, out, _ = run(capsys, "factorize", "engine", "--host", "complete", "--family", "rado:2:1",
                           "--stages", "60", "--out", str(m))
        assert code == 0 and "exact-cover OK" in out
        code, out, _ = run(capsys, "factorize", "replay", "--in", str(m))
        assert code == 0 and out.startswith("replay identical")

    def test_tampered_manifest(self, capsys, tmp_path):
        m = tmp_path / "m.txt"
        run(capsys, "factorize", "engine", "--family", "path", "--stages", "10", "--out", str(m))
        m.write_text(m.read_text().replace("S 9\n", "S 10\n"))
        code, out, _ = run(capsys, "factorize", "replay", "--in", str(m))
        assert code == 1

    @pytest.mark.parametrize("fam", [["star:1"], ["path", "star:3"]])
    def test_star_pattern_exit_3(self, capsys, fam):
        args = [a for f in fam for a in ("--family", f)]
        code, _, err = run(capsys, "factorize", "engine", *args, "--stages", "5")
        assert code == 3
        assert "dominating set" in err

    def test_split(self, capsys, tmp_path):
        code, out, _ = run(capsys, "factorize", "split", "--family", "path", "--family", "tree:3",
                           "--stages", "20", "--out", str(tmp_path / "s"))
        assert code == 0 and "disjoint OK" in out
        assert (tmp_path / "s.even").exists() and (tmp_path / "s.odd").exists()

    def test_finite_tail(self, capsys):
        code, out, _ = run(capsys, "factorize", "finite-tail", "--host", "rado:2:1", "--family", "path",
                           "--family", "rado:2:1", "--stages", "15", "--out", "/dev/null", "--trials", "10")
        assert code == 0 and "PASS 10/10" in out

    def test_unknown_family(self, capsys):
        assert run(capsys, "factorize", "engine", "--family", "hexagon")[0] == 2

    def test_missing_input(self, capsys):
        assert run(capsys, "factorize", "replay")[0] == 2


class TestStars:
    def test_verify(self, capsys):
        assert run(capsys, "stars", "verify", "--k", "4", "--window", "20")[:2] == (0, "PASS 0 violations\n")

    def test_verify_k7(self, capsys):
        code, out, _ = run(capsys, "stars", "verify", "--k", "7", "--window", "30")
        assert code == 0 and out.startswith("PASS")

    def test_assign(self, capsys):
        assert run(capsys, "stars", "assign", "--k", "4", "--edge", "2:1,5:1")[:2] == (0, "d=3\n")

    def test_k3(self, capsys):
        code, _, err = run(capsys, "stars", "verify", "--k", "3")
        assert code == 2 and "open problem" in err

    def test_diffset(self, capsys):
        assert run(capsys, "stars", "diffset", "--edges", "0,3", "1,4")[:2] == (0, "3x2\n")
        code, out, _ = run(capsys, "stars", "diffset", "--star", "prime:2", "--range", "1000")
        assert code == 0 and out.startswith("PASS")

    def test_emit(self, capsys, tmp_path):
        out = tmp_path / "w.txt"
        assert run(capsys, "stars", "emit", "--k", "5", "--window", "3", "--out", str(out))[0] == 0
        assert len(out.read_text().splitlines()) == 14 * 13 // 2
        code, dot, _ = run(capsys, "stars", "emit", "--k", "4", "--window", "3", "--dot", "1")
        assert code == 0 and dot.startswith("graph")


class TestResolve:
    def test_fixture_and_checks(self, capsys, tmp_path):
        k3, fix = tmp_path / "k3.dec", tmp_path / "pathfix.dec"
        assert run(capsys, "resolve", "fixture", "single-edge", "--n", "2", "--out", str(k3))[0] == 0
        assert run(capsys, "resolve", "fixture", "path-extension", "--base", str(k3), "--x", "0",
                   "--out", str(fix))[0] == 0
        code, out, _ = run(capsys, "resolve", "check-n2", "--in", str(fix), "--window", "0..8")
        assert code == 1 and out.startswith("FAIL triple (x,y,z)=(0,3,4)")
        assert run(capsys, "resolve", "run", "--in", str(fix), "--stages", "5")[0] == 4

    def test_run_matchings(self, capsys, tmp_path):
        edges = tmp_path / "edges.dec"
        run(capsys, "resolve", "fixture", "single-edge", "--n", "250", "--out", str(edges))
        code, out, _ = run(capsys, "resolve", "run", "--in", str(edges), "--stages", "100",
                           "--out", str(tmp_path / "a.txt"))
        assert code == 0 and "classes: matchings OK" in out
        assert (tmp_path / "a.txt").read_text().startswith("A 0 0 0\n")

    def test_check_r_and_n1(self, capsys, tmp_path):
        f = tmp_path / "t.dec"
        run(capsys, "resolve", "fixture", "triangles", "--groups", "2", "--out", str(f))
        assert run(capsys, "resolve", "check-r", "--in", str(f), "--bound", "3")[0] == 0
        assert run(capsys, "resolve", "check-r", "--in", str(f), "--bound", "2")[0] == 1
        assert run(capsys, "resolve", "check-n1", "--in", str(f), "--block", "0", "--complement", "1")[0] == 1
        assert run(capsys, "resolve", "check-n1", "--in", str(f))[0] == 0

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "resolve", "run", "--in", str(tmp_path / "nope.dec"))[0] == 2
