import json

import pytest

from bundle_forge.bundles import WeightedProjector, projector_from_ket
from bundle_forge.cli import build_projector, run
from bundle_forge.kets import monopole_ket


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestChernCommand:
    def test_exact_positive_charge(self, capsys):
        code, out, _ = invoke(capsys, "chern", "--family", "monopole", "--charge", "3")
        assert code == 0
        assert "c1 = 3" in out
        assert "representation label -3" in out

    def test_exact_negative_charge(self, capsys):
        code, out, _ = invoke(capsys, "chern", "--family", "monopole", "--charge", "-3")
        assert code == 0
        assert "c1 = -3" in out
        assert "representation label +3" in out

    def test_tilde(self, capsys):
        code, out, _ = invoke(capsys, "chern", "--family", "tilde")
        assert code == 0
        assert "c1 = 2" in out

    def test_quad_backend(self, capsys):
        code, out, _ = invoke(
            capsys, "chern", "--family", "monopole", "--charge", "1",
            "--backend", "quad", "--grid", "16x32", "--json",
        )
        assert code == 0
        data = json.loads(out)
        assert data["backend"] == "quad"
        assert abs(data["c1"] - 1.0) < 1e-9

    def test_charge_guard(self, capsys):
        code, _, err = invoke(capsys, "chern", "--family", "monopole", "--charge", "99")
        assert code == 2
        assert "charge out of range" in err

    def test_bad_grid(self, capsys):
        code, _, err = invoke(
            capsys, "chern", "--family", "monopole", "--charge", "1",
            "--backend", "quad", "--grid", "huge",
        )
        assert code == 2
        assert "grid" in err

    def test_unknown_flag(self, capsys):
        code, _, _ = invoke(capsys, "chern", "--family", "monopole", "--wat")
        assert code == 2


class TestBuildCommand:
    def test_json_round_trip(self, capsys):
        code, out, _ = invoke(
            capsys, "build", "--family", "monopole", "--charge", "2", "--json"
        )
        assert code == 0
        loaded = WeightedProjector.from_json(json.loads(out))
        reference = projector_from_ket(monopole_ket("minus", 2))
        assert loaded.weights == reference.weights
        assert loaded.core == reference.core

    def test_text_output(self, capsys):
        code, out, _ = invoke(capsys, "build", "--family", "tangent")
        assert code == 0
        assert "p_tan: 3x3" in out
        assert "core[0][0]" in out

    def test_all_families(self, capsys):
        for family in ("monopole", "tilde", "normal", "tangent", "realform"):
            code, out, _ = invoke(capsys, "build", "--family", family)
            assert code == 0, (family, out)


class TestVerifyCommand:
    def test_isometry_suite(self, capsys):
        code, out, _ = invoke(capsys, "verify", "--suite", "isometry")
        assert code == 0
        assert "u+u = p_tan: PASS" in out
        assert "uu+ = (p~[-2])^R: PASS" in out
        assert "ALL PASS" in out

    def test_axioms_suite(self, capsys):
        code, out, _ = invoke(capsys, "verify", "--suite", "axioms", "--max-charge", "2")
        assert code == 0
        assert "FAIL" not in out

    def test_tangent_suite(self, capsys):
        code, out, _ = invoke(capsys, "verify", "--suite", "tangent")
        assert code == 0
        assert "Chern form of p_tan is 0: PASS" in out

    def test_gauge_suite(self, capsys):
        code, out, _ = invoke(capsys, "verify", "--suite", "gauge", "--seed", "1")
        assert code == 0
        assert "signed-permutation" in out

    def test_max_charge_guard(self, capsys):
        code, _, err = invoke(capsys, "verify", "--suite", "axioms", "--max-charge", "99")
        assert code == 2
        assert "charge out of range" in err


class TestConnectionCommand:
    def test_charge_one(self, capsys):
        code, out, _ = invoke(capsys, "connection", "--charge", "1")
        assert code == 0
        assert "A = " in out
        assert "dzb0" in out and "dzb1" in out


class TestGaugeCommand:
    def test_diagonal_gauge(self, capsys, tmp_path):
        g_file = tmp_path / "g.json"
        g_file.write_text(json.dumps({
            "n": 2,
            "entries": [
                [{"re": 2.0, "im": 0.0}, {"re": 0.0, "im": 0.0}],
                [{"re": 0.0, "im": 0.0}, {"re": 1.0, "im": 0.0}],
            ],
        }))
        code, out, _ = invoke(
            capsys, "gauge", "--charge", "1", "--g-file", str(g_file),
            "--grid", "16x16",
        )
        assert code == 0
        line = [l for l in out.splitlines() if l.startswith("c1(quad, gauged)")][0]
        assert abs(float(line.split("=")[1]) - 1.0) < 1e-4

    def test_malformed_file(self, capsys, tmp_path):
        g_file = tmp_path / "g.json"
        g_file.write_text("{not json")
        code, _, err = invoke(capsys, "gauge", "--charge", "1", "--g-file", str(g_file))
        assert code == 2
        assert "malformed" in err

    def test_dimension_mismatch(self, capsys, tmp_path):
        g_file = tmp_path / "g.json"
        g_file.write_text(json.dumps({
            "n": 2,
            "entries": [[{"re": 1.0}, {"re": 0.0}], [{"re": 0.0}, {"re": 1.0}]],
        }))
        code, _, err = invoke(capsys, "gauge", "--charge", "2", "--g-file", str(g_file))
        assert code == 2
        assert "3x3" in err


class TestIntegrateCommand:
    def test_even_monomial(self, capsys):
        code, out, _ = invoke(capsys, "integrate", "--monomial", "2,0,0",
                              "--mc-samples", "100000")
        assert code == 0
        assert "exact: (1/3)*4pi" in out
        assert "monte-carlo" in out

    def test_bad_monomial(self, capsys):
        code, _, err = invoke(capsys, "integrate", "--monomial", "2,-1,0")
        assert code == 2
        assert "monomial" in err

    def test_deterministic_output(self, capsys):
        args = ("integrate", "--monomial", "2,2,0", "--mc-samples", "50000",
                "--seed", "9")
        code1, out1, _ = invoke(capsys, *args)
        code2, out2, _ = invoke(capsys, *args)
        assert code1 == code2 == 0
        assert out1 == out2


class TestBuildProjectorHelper:
    def test_labels(self):
        assert build_projector("monopole", 2).label == "p[-2]"
        assert build_projector("monopole", -2).label == "p[+2]"
        assert build_projector("monopole", 0).label == "p[0]"
        assert build_projector("realform", 0).label == "(p~[-2])^R"
