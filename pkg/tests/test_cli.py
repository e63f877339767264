import csv
import re

import numpy as np
import pytest

from polyedge import read_pgm, write_pgm
from polyedge.cli import main, parse_sweep_grid
from polyedge.synthetic import quadrant_scene


@pytest.fixture()
def scene_path(tmp_path):
    img, _ = quadrant_scene(32, 32)
    path = tmp_path / "scene.pgm"
    write_pgm(path, img)
    return path


def run_args(scene_path, out_dir, *extra):
    return [
        "run",
        "--input", str(scene_path),
        "--out-dir", str(out_dir),
        "--degree", "1",
        "--sigma", "10",
        "--seed", "9",
        "--delta", "350",
        "--iters", "40",
    ] + list(extra)


class TestParseSweepGrid:
    def test_range_form(self):
        grid = parse_sweep_grid("0:0.01:1")
        assert len(grid) == 101
        assert grid[0] == 0.0
        assert grid[-1] == 1.0

    def test_comma_form(self):
        assert parse_sweep_grid("0.1, 0.25,0.5") == (0.1, 0.25, 0.5)

    def test_rejects_garbage(self):
        from polyedge.errors import ConfigurationError

        with pytest.raises(ConfigurationError):
            parse_sweep_grid("0:-1:1")
        with pytest.raises(ConfigurationError):
            parse_sweep_grid("abc")


class TestRun:
    def test_full_run_emits_all_artifacts(self, scene_path, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(run_args(scene_path, out)) == 0
        expected = {
            "noisy.pgm", "denoised.pgm", "mosaic.pgm",
            "grad_sobel.pgm", "grad_synthesis.pgm", "grad_parameter_maps.pgm",
            "edges_gt.pgm", "edges_sobel.pgm", "edges_synthesis.pgm",
            "edges_parameter_maps.pgm", "scores.csv", "history.csv",
        }
        assert {p.name for p in out.iterdir()} == expected
        with open(out / "scores.csv") as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "method"
        assert [r[0] for r in rows[1:]] == ["sobel", "synthesis", "parameter_maps"]
        stdout = capsys.readouterr().out
        assert "parameter_maps" in stdout
        assert "feasibility_gap=" in stdout

    def test_emit_subset(self, scene_path, tmp_path):
        out = tmp_path / "out"
        assert main(run_args(scene_path, out, "--emit", "csv")) == 0
        assert {p.name for p in out.iterdir()} == {"scores.csv", "history.csv"}

    def test_history_rows_match_iterations(self, scene_path, tmp_path):
        out = tmp_path / "out"
        main(run_args(scene_path, out, "--emit", "csv"))
        with open(out / "history.csv") as fh:
            rows = list(csv.reader(fh))
        assert len(rows) == 41

    def test_config_file_with_flag_override(self, scene_path, tmp_path):
        cfg = tmp_path / "run.conf"
        cfg.write_text(
            "\n".join(
                [
                    f"input = {scene_path}",
                    "degree = 1",
                    "sigma = 25  # overridden below",
                    "seed = 9",
                    "delta = 350",
                    "iters = 5",
                    "emit = denoised,csv",
                ]
            )
        )
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out-dir", str(out), "--sigma", "0"]) == 0
        # sigma=0 must win over the file's 25: noisy equals the input scene
        noisy = read_pgm(out / "noisy.pgm")
        assert np.array_equal(noisy, read_pgm(scene_path))

    def test_repeat_run_is_byte_identical(self, scene_path, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(run_args(scene_path, out1)) == 0
        assert main(run_args(scene_path, out2)) == 0
        for name in ("scores.csv", "history.csv", "edges_parameter_maps.pgm", "denoised.pgm"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


class TestSweep:
    def test_sweep_csv_row_counts_and_best_flags(self, scene_path, tmp_path, capsys):
        out = tmp_path / "out"
        args = ["sweep"] + run_args(scene_path, out)[1:] + ["--sweep-grid", "0:0.1:1"]
        assert main(args) == 0
        with open(out / "sweep.csv") as fh:
            rows = list(csv.reader(fh))
        header, body = rows[0], rows[1:]
        assert header[-1] == "best"
        assert len(body) == 3 * 11
        for method in ("sobel", "synthesis", "parameter_maps"):
            flags = [int(r[-1]) for r in body if r[0] == method]
            assert sum(flags) == 1
        assert "best threshold" in capsys.readouterr().out

    def test_default_grid_has_101_thresholds_per_method(self, scene_path, tmp_path):
        out = tmp_path / "out"
        args = ["sweep"] + run_args(scene_path, out)[1:]
        assert main(args) == 0
        with open(out / "sweep.csv") as fh:
            body = list(csv.reader(fh))[1:]
        assert len(body) == 3 * 101


class TestErrorPaths:
    def _assert_single_error_line(self, capsys, kind):
        err = capsys.readouterr().err
        lines = err.strip().splitlines()
        assert len(lines) == 1
        assert re.fullmatch(rf'error kind={kind} message=".*"', lines[0])

    def test_missing_input_file(self, tmp_path, capsys):
        code = main(
            ["run", "--input", str(tmp_path / "nope.pgm"), "--out-dir", str(tmp_path), "--delta", "1"]
        )
        assert code == 2
        self._assert_single_error_line(capsys, "config")

    def test_missing_required_delta(self, scene_path, tmp_path, capsys):
        code = main(["run", "--input", str(scene_path), "--out-dir", str(tmp_path / "o")])
        assert code == 2
        self._assert_single_error_line(capsys, "config")

    def test_unknown_flag_value(self, scene_path, tmp_path, capsys):
        code = main(
            ["run", "--input", str(scene_path), "--out-dir", str(tmp_path),
             "--delta", "1", "--basis", "wavelet"]
        )
        assert code == 2
        self._assert_single_error_line(capsys, "config")

    def test_corrupt_image_is_io_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.pgm"
        bad.write_bytes(b"P5\n4 4\n255\n..")
        code = main(["run", "--input", str(bad), "--out-dir", str(tmp_path / "o"), "--delta", "1"])
        assert code == 3
        self._assert_single_error_line(capsys, "io")

    def test_bad_config_file_key(self, scene_path, tmp_path, capsys):
        cfg = tmp_path / "bad.conf"
        cfg.write_text("inputs = whatever\n")
        code = main(["run", "--config", str(cfg), "--out-dir", str(tmp_path), "--delta", "1"])
        assert code == 2
        self._assert_single_error_line(capsys, "config")
