"""CLI behaviour: flags, payloads, exit codes, config handling."""

import json
import math

import pytest

from dehnscope.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestHolonomyCommand:
    def test_cusp_generator_is_parabolic_translation(self, capsys):
        code, out = run(capsys, "holonomy", "--a", "0,0", "--b", "0,1", "--m", "1", "--n", "0")
        assert code == 0
        payload = json.loads(out)
        assert payload["classification"]["kind"] == "parabolic"
        assert payload["matrix"] == [[1.0, 0.0], [1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]

    def test_half_turn_is_elliptic(self, capsys):
        code, out = run(
            capsys, "holonomy", "--a", "0,3.14159265358979", "--b", "0,1", "--m", "1", "--n", "0"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["classification"]["kind"] == "elliptic"
        assert abs(payload["classification"]["angle"] - math.pi) < 1e-9

    def test_missing_flag_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["holonomy", "--a", "0,0", "--m", "1", "--n", "0"])
        assert err.value.code == 2

    def test_bad_complex_exits_2(self, capsys):
        code, _ = run(capsys, "holonomy", "--a", "zap", "--b", "0,1", "--m", "1", "--n", "0")
        assert code == 2


class TestFillCommand:
    def test_smooth_filling(self, capsys):
        code, out = run(
            capsys, "fill", "--a", "0,6.28318530717959", "--b", "0,1", "--classify"
        )
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["coordinates"]["x"] - 1.0) < 1e-9
        assert abs(payload["coordinates"]["y"]) < 1e-9
        assert payload["completion"]["kind"] == "smooth"

    def test_cusp(self, capsys):
        code, out = run(capsys, "fill", "--a", "0,0", "--b", "0,1")
        assert code == 0
        assert json.loads(out)["coordinates"] == {"type": "infinity"}

    def test_diagonal_class(self, capsys):
        code, out = run(capsys, "fill", "--a", "3.14159265358979,3.14159265358979", "--b", "0,1")
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["coordinates"]["x"] - 1.0) < 1e-8
        assert abs(payload["coordinates"]["y"] - 1.0) < 1e-8


class TestSequenceCommand:
    def test_csv_rows(self, capsys):
        code, out = run(
            capsys, "sequence", "--b", "0,1", "--p", "1", "--q", "0", "--n", "1..10",
            "--format", "csv",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,a_re,a_im,cusp_residual"
        assert len(lines) == 11
        first = lines[1].split(",")
        assert abs(float(first[1]) - math.pi) < 1e-12
        assert abs(float(first[2]) - math.pi) < 1e-12

    def test_csv_json_payload_equality(self, capsys):
        _, csv_out = run(
            capsys, "sequence", "--b", "0,1", "--p", "1", "--q", "0", "--n", "1..4",
            "--format", "csv",
        )
        _, json_out = run(
            capsys, "sequence", "--b", "0,1", "--p", "1", "--q", "0", "--n", "1..4",
            "--format", "json",
        )
        rows = json.loads(json_out)
        lines = csv_out.strip().splitlines()[1:]
        for row, line in zip(rows, lines):
            vals = line.split(",")
            assert int(vals[0]) == row["n"]
            assert float(vals[1]) == row["a_re"]
            assert float(vals[2]) == row["a_im"]
            assert float(vals[3]) == row["cusp_residual"]


class TestSolveCommand:
    PATH = json.dumps(
        {"a_coeffs": [[0, 0], [1, 0]], "b_coeffs": [[0, 1]], "center": [0, 3], "radius": 5}
    )

    def test_converged_inline_path(self, capsys):
        code, out = run(
            capsys, "solve", "--path", self.PATH, "--x", "1", "--y", "1", "--w0", "0,3"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["converged"] is True
        assert abs(payload["w"][0] - math.pi) < 1e-9
        assert abs(payload["w"][1] - math.pi) < 1e-9

    def test_path_from_file(self, capsys, tmp_path):
        path_file = tmp_path / "path.json"
        path_file.write_text(self.PATH)
        code, out = run(
            capsys, "solve", "--path", str(path_file), "--x", "1", "--y", "1", "--w0", "0,3"
        )
        assert code == 0 and json.loads(out)["converged"]

    def test_nonconvergence_exits_1_with_payload(self, capsys):
        path = json.dumps(
            {
                "a_coeffs": [[0, 0], [1, 0]],
                "b_coeffs": [[0, 1], [0, 0], [0.01, 0]],
                "center": [0, 6],
                "radius": 2,
            }
        )
        code, out = run(
            capsys, "solve", "--path", path, "--x", "1", "--y", "0.1", "--w0", "1.5,6",
            "--max-iter", "1",
        )
        assert code == 1
        assert json.loads(out)["converged"] is False

    def test_zero_target_exits_2(self, capsys):
        code, _ = run(capsys, "solve", "--path", self.PATH, "--x", "0", "--y", "0", "--w0", "0,3")
        assert code == 2

    def test_domain_exit_exits_1_with_payload(self, capsys):
        tight = json.dumps(
            {"a_coeffs": [[0, 0], [1, 0]], "b_coeffs": [[0, 1]], "center": [0, 20], "radius": 0.5}
        )
        code, out = run(
            capsys, "solve", "--path", tight, "--x", "1", "--y", "0", "--w0", "0,20"
        )
        assert code == 1
        payload = json.loads(out)
        assert payload["converged"] is False and "error" in payload


class TestCrosssectionCommand:
    def test_single_value(self, capsys):
        code, out = run(
            capsys, "crosssection", "--a", "1,0", "--b", "0,1", "--x", "1", "--y", "0",
            "--eps", "0.7",
        )
        assert code == 0
        assert abs(json.loads(out)["length"] - math.cosh(0.7)) < 1e-12

    def test_grid_sweep(self, capsys):
        code, out = run(
            capsys, "crosssection", "--a", "1,0", "--b", "0,1", "--x", "0", "--y", "1",
            "--eps-grid", "0.5:1.5:3", "--format", "csv",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "eps,length"
        eps, length = (float(v) for v in lines[2].split(","))
        assert abs(length - math.sinh(eps)) < 1e-12


class TestSchwarzianCommand:
    def test_log_at_i(self, capsys):
        code, out = run(capsys, "schwarzian", "--f", "log", "--z", "0,1")
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["sc"][0] + 0.5) < 1e-12
        assert abs(payload["sc"][1]) < 1e-12
        assert abs(payload["norm"] - 0.5) < 1e-12

    def test_depth_over_grid(self, capsys):
        code, out = run(
            capsys, "schwarzian", "--f", "square", "--depth", "--grid=-0.5:0.5:21,0.25:3:40"
        )
        assert code == 0
        assert abs(json.loads(out)["injectivity_depth"] - math.acosh(1.5)) < 1e-6

    def test_grid_rows(self, capsys):
        code, out = run(
            capsys, "schwarzian", "--f", "square", "--grid", "0:1:2,1:2:2", "--format", "csv"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "z_re,z_im,sc_re,sc_im,norm"
        assert len(lines) == 5


class TestThetaCheckCommand:
    def test_square_report(self, capsys):
        code, out = run(
            capsys, "theta-check", "--f", "square", "--point", "0,0.96402758,0.26580222",
            "--h", "1e-4",
        )
        assert code == 0
        payload = json.loads(out)
        assert len(payload["measured"]) == 3
        assert len(payload["predicted"]) == 3
        assert abs(payload["depth"] - 2.0) < 1e-6

    def test_mobius_identity_values(self, capsys):
        code, out = run(
            capsys, "theta-check", "--f", "mobius:2,0,1,0,1,0,1,0",
            "--point", "0.3,0.7,0.5", "--h", "1e-4",
        )
        assert code == 0
        payload = json.loads(out)
        assert max(abs(v - 1.0) for v in payload["measured"]) < 1e-8


class TestCocycleCommand:
    def test_dimensions_and_values(self, capsys, tmp_path):
        ea = math.exp(0.5)
        rep_payload = {
            "generators": [
                [[ea, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0 / ea, 0.0]],
                [[math.cos(0.5), math.sin(0.5)], [0.0, 0.0], [0.0, 0.0], [math.cos(0.5), -math.sin(0.5)]],
            ],
            "relators": [[1, 2, -1, -2]],
        }
        rep_file = tmp_path / "rep.json"
        rep_file.write_text(json.dumps(rep_payload))
        values_payload = {
            "values": [
                [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [-1.0, 0.0]],
                [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
            ]
        }
        val_file = tmp_path / "values.json"
        val_file.write_text(json.dumps(values_payload))
        code, out = run(capsys, "cocycle", "--rep", str(rep_file), "--values", str(val_file))
        assert code == 0
        payload = json.loads(out)
        assert (payload["dim_z1"], payload["dim_b1"], payload["dim_h1"]) == (4, 2, 2)
        assert payload["is_cocycle"] is True

    def test_bad_file_exits_2(self, capsys, tmp_path):
        missing = tmp_path / "nope.json"
        code, _ = run(capsys, "cocycle", "--rep", str(missing))
        assert code == 2


class TestBilipschitzCommand:
    def test_reflexive_value(self, capsys):
        code, out = run(
            capsys, "bilipschitz", "--a1", "0.5,0.5", "--b1", "0,1", "--a2", "0.5,0.5",
            "--b2", "0,1", "--region", "0:1,0:1,1:2", "--samples", "64", "--seed", "3",
        )
        assert code == 0
        assert json.loads(out)["khat"] == 1.0


class TestConfig:
    def test_config_controls_output_format(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"output": "csv", "seed": 5}))
        code, out = run(
            capsys, "--config", str(cfg), "sequence", "--b", "0,1", "--p", "1", "--q", "0",
            "--n", "1..2",
        )
        assert code == 0
        assert out.splitlines()[0] == "n,a_re,a_im,cusp_residual"

    def test_unknown_config_key_exits_2(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"tolerances": {}}))
        code, _ = run(
            capsys, "--config", str(cfg), "fill", "--a", "0,0", "--b", "0,1"
        )
        assert code == 2

    def test_bad_config_value_exits_2(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"output": "xml"}))
        code, _ = run(capsys, "--config", str(cfg), "fill", "--a", "0,0", "--b", "0,1")
        assert code == 2
