import math
import subprocess
import sys

import numpy as np
import pytest

from etcma.cli import main, read_config_file
from etcma.harness import CSV_COLUMNS
from etcma.trellis import TWO_STATE, build_trellis


def run_cli(capsys, argv):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


class TestConfigFile:
    def test_parses_values_comments_and_blanks(self, tmp_path):
        p = tmp_path / "sim.cfg"
        p.write_text(
            "# comment\n"
            "\n"
            "num_streams = 3\n"
            "snr_start=1.5\n"
            "noiseless = yes\n"
            "interleaver_design = random\n")
        values = read_config_file(str(p))
        assert values == {"num_streams": 3, "snr_start": 1.5,
                          "noiseless": True, "interleaver_design": "random"}

    @pytest.mark.parametrize("text,flag", [
        ("true", True), ("TRUE", True), ("1", True), ("yes", True),
        ("false", False), ("0", False), ("no", False),
    ])
    def test_noiseless_spellings(self, tmp_path, text, flag):
        p = tmp_path / "sim.cfg"
        p.write_text(f"num_streams = 1\nnoiseless = {text}\n")
        assert read_config_file(str(p))["noiseless"] is flag

    def test_unknown_key_points_at_line(self, tmp_path):
        p = tmp_path / "bad.cfg"
        p.write_text("num_streams = 2\nbogus = 1\n")
        with pytest.raises(ValueError, match=r"bad\.cfg:2: unknown key 'bogus'"):
            read_config_file(str(p))

    def test_missing_equals_points_at_line(self, tmp_path):
        p = tmp_path / "bad.cfg"
        p.write_text("num_streams 2\n")
        with pytest.raises(ValueError, match=r"bad\.cfg:1: expected key=value"):
            read_config_file(str(p))


class TestTrellisCommand:
    def test_two_state_table(self, capsys):
        rc, out, err = run_cli(capsys, ["trellis", "--code", "two_state"])
        assert rc == 0 and err == ""
        assert out.splitlines() == [
            "code=(2,3)_8 states=2 memory=1",
            "state,input,next_state,coded_first,coded_second,symbol_index",
            "0,0,0,0,0,0",
            "0,1,1,1,1,3",
            "1,0,0,0,1,1",
            "1,1,1,1,0,2",
        ]

    def test_four_state_matches_builder(self, capsys):
        rc, out, _ = run_cli(capsys, ["trellis", "--code", "four_state"])
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "code=(5,7)_8 states=4 memory=2"
        assert len(lines) == 2 + 8
        trellis = build_trellis(TWO_STATE)  # cheap import check only
        assert trellis.next_state.shape == (2, 2)
        for row in lines[2:]:
            s, u, ns, c1, c2, n = (int(v) for v in row.split(","))
            assert 0 <= s < 4 and u in (0, 1) and 0 <= ns < 4
            assert n == 2 * c1 + c2


class TestSignaturesCommand:
    def test_uniform_phases(self, capsys):
        rc, out, _ = run_cli(capsys, ["signatures", "--num-streams", "3",
                                      "--design", "uniform"])
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "design=uniform K=3 length=240"
        assert lines[1].startswith("d_min=")
        for k, line in enumerate(lines[2:]):
            _, c_part = line.split(" c=")
            c = complex(c_part.replace("j", "j").strip())
            expect = np.exp(1j * np.pi * k / 6)
            assert abs(c - expect) < 1e-9

    def test_auto_design_two_streams(self, capsys):
        rc, out, _ = run_cli(capsys, ["signatures", "--num-streams", "2"])
        assert rc == 0
        lines = out.splitlines()
        assert lines[0].startswith("design=max_dmin K=2")
        d = float(lines[1].split("=")[1])
        assert d == pytest.approx(math.sqrt(3) - 1, abs=1e-5)

    def test_zadoff_chu_reports_per_position_range(self, capsys):
        rc, out, _ = run_cli(capsys, ["signatures", "--num-streams", "6",
                                      "--length", "48"])
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "design=zadoff_chu K=6 length=48"
        assert lines[1].startswith("d_min_l0=")
        assert "d_min_worst=" in lines[1] and "d_min_best=" in lines[1]
        assert all("time-varying" in line for line in lines[2:])


class TestSimulateCommand:
    def test_stdout_sweep(self, capsys):
        rc, out, err = run_cli(capsys, [
            "simulate", "--num-streams", "2", "--noiseless",
            "--snr-start", "10", "--snr-stop", "11", "--snr-step", "1",
            "--max-blocks", "2"])
        assert rc == 0 and err == ""
        lines = out.strip().split("\n")
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 3
        for row in lines[1:]:
            cells = dict(zip(CSV_COLUMNS, row.split(",")))
            assert cells["K"] == "2"
            assert cells["blocks"] == "2"
            assert float(cells["se"]) == 2.0

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "sim.cfg"
        cfg.write_text(
            "num_streams = 1\n"
            "noiseless = true\n"
            "snr_start = 0\n"
            "snr_stop = 0\n"
            "snr_step = 1\n"
            "max_blocks = 4\n")
        rc, out, _ = run_cli(capsys, ["simulate", "--config", str(cfg)])
        assert rc == 0
        assert out.strip().split("\n")[1].split(",")[3] == "4"
        rc, out, _ = run_cli(capsys, ["simulate", "--config", str(cfg),
                                      "--max-blocks", "2"])
        assert rc == 0
        assert out.strip().split("\n")[1].split(",")[3] == "2"

    def test_output_file_matches_stdout(self, tmp_path, capsys):
        argv = ["simulate", "--num-streams", "1", "--noiseless",
                "--snr-start", "3", "--snr-stop", "4", "--snr-step", "1",
                "--max-blocks", "2", "--master-seed", "6"]
        rc, out, _ = run_cli(capsys, argv)
        assert rc == 0
        path = tmp_path / "sweep.csv"
        rc2 = main(argv + ["-o", str(path)])
        capsys.readouterr()
        assert rc2 == 0
        assert path.read_text() == out

    def test_missing_num_streams(self, capsys):
        rc, _, err = run_cli(capsys, ["simulate", "--snr-start", "0",
                                      "--snr-stop", "1"])
        assert rc == 2
        assert "num_streams is required" in err

    def test_unknown_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("num_streams = 2\nbogus = 1\n")
        rc, _, err = run_cli(capsys, ["simulate", "--config", str(cfg)])
        assert rc == 2
        assert "unknown key 'bogus'" in err

    def test_nonexistent_config(self, tmp_path, capsys):
        rc, _, err = run_cli(capsys, ["simulate", "--num-streams", "1",
                                      "--config", str(tmp_path / "none.cfg")])
        assert rc == 2
        assert "error:" in err

    def test_unwritable_output(self, tmp_path, capsys):
        rc, _, err = run_cli(capsys, [
            "simulate", "--num-streams", "1", "--noiseless",
            "--snr-start", "0", "--snr-stop", "0", "--snr-step", "1",
            "--max-blocks", "1", "-o", str(tmp_path)])
        assert rc == 1
        assert "cannot open" in err


class TestExitCommand:
    def test_curve_csv(self, tmp_path, capsys):
        path = tmp_path / "exit.csv"
        rc = main(["exit", "-k", "1", "--snr-db", "3.0", "--points", "3",
                   "--length", "400", "--num-blocks", "1", "-o", str(path)])
        capsys.readouterr()
        assert rc == 0
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "component,K,snr_db,i_in,i_out"
        assert len(lines) == 1 + 2 * 3
        comps = [line.split(",")[0] for line in lines[1:]]
        assert comps == ["emsd"] * 3 + ["etcmd"] * 3
        for line in lines[1:]:
            _, k, snr, i_in, i_out = line.split(",")
            assert k == "1" and float(snr) == 3.0
            assert 0.0 <= float(i_in) <= 2.0
            assert 0.0 <= float(i_out) <= 2.0
        emsd_in = [float(l.split(",")[3]) for l in lines[1:4]]
        assert emsd_in == [0.0, 1.0, 2.0]

    def test_rejects_degenerate_grid(self, capsys):
        rc, _, err = run_cli(capsys, ["exit", "-k", "1", "--snr-db", "3",
                                      "--points", "1"])
        assert rc == 2
        assert "two grid points" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "etcma.cli", "trellis", "--code", "two_state"],
        capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "code=(2,3)_8 states=2 memory=1"
