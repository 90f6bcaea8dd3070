import csv
import json

import numpy as np
import pytest

from slassess.cli import main
from slassess.config import load_config, parse_config
from slassess.errors import ConfigError
from slassess.faults import inject_freeze
from slassess.report import PLOT_COLUMNS, RECORD_COLUMNS, read_report
from slassess.trajectory import load_trajectory

SHORT = """
seed = 3
out_dir = "out"

[synth]
duration = {duration}
speed = 20.0
heading_deg = 45.0

[[systems]]
id = "GNSS"

[[systems]]
id = "SLAM"
{slam_faults}

[[systems]]
id = "ODO"
kind = "relative"
"""

FREEZE = """
[[systems.faults]]
kind = "freeze"
t_from = 5.0
t_to = 15.0
"""


@pytest.fixture
def config_file(tmp_path):
    def _make(duration=30.0, slam_faults="", name="run.toml"):
        p = tmp_path / name
        p.write_text(SHORT.format(duration=duration, slam_faults=slam_faults), encoding="utf-8")
        return p

    return _make


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def tree_bytes(root):
    return {p.relative_to(root): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


class TestConfig:
    def test_defaults_filled(self, config_file):
        cfg = load_config(config_file())
        assert cfg.system_ids == ["GNSS", "SLAM", "ODO"]
        assert cfg.params.st_length == 10
        assert cfg.domain.k == 100
        assert cfg.out_dir.name == "out"

    def test_echo_round_trips(self, config_file):
        cfg = load_config(config_file(slam_faults=FREEZE))
        again = parse_config(cfg.to_dict())
        assert again.to_dict() == cfg.to_dict()

    @pytest.mark.parametrize(
        "data",
        [
            {"systems": [{"id": "a", "path": "a.csv"}, {"id": "b", "path": "b.csv"}], "colour": 1},
            {"systems": [{"id": "a", "path": "a.csv", "weight": 2}, {"id": "b", "path": "b.csv"}]},
            {"systems": [{"id": "a", "path": "a.csv"}], "assessor": {"st_length": 3}},
            {"systems": [{"id": "a", "path": "a.csv"}, {"id": "a", "path": "b.csv"}]},
            {"systems": [{"id": "a"}, {"id": "b"}]},
            {"systems": [{"id": "a", "path": "a"}, {"id": "b", "path": "b"}],
             "assessor": {"window": 3}},
            {"systems": [{"id": "a", "path": "a"}, {"id": "b", "path": "b"}], "seed": 1.5},
        ],
    )
    def test_rejects_bad_config(self, data):
        with pytest.raises(ConfigError):
            parse_config(data)


class TestSynth:
    def test_full_length(self, tmp_path, config_file):
        assert main(["synth", "--config", str(config_file(300.0)), "--out", str(tmp_path / "s")]) == 0
        gnss = load_trajectory(tmp_path / "s" / "GNSS.csv", "GNSS")
        assert len(gnss) == 3001
        assert (tmp_path / "s" / "GNSS.csv").read_bytes() == (tmp_path / "s" / "SLAM.csv").read_bytes()
        odo = load_trajectory(tmp_path / "s" / "ODO.csv", "ODO", "relative")
        # displacements keep the t0 sample, which moves nowhere
        assert len(odo) == 3001
        assert odo.x[0] == 0.0 and odo.y[0] == 0.0

    def test_faulted_file_matches_injector(self, tmp_path, config_file):
        out = tmp_path / "s"
        assert main(["synth", "--config", str(config_file(slam_faults=FREEZE)), "--out", str(out)]) == 0
        clean = load_trajectory(out / "GNSS.csv", "GNSS")
        slam = load_trajectory(out / "SLAM.csv", "SLAM")
        np.testing.assert_allclose(slam.x, inject_freeze(clean, 5.0, 15.0).x, atol=1e-6)

    def test_without_synth_table(self, tmp_path):
        p = tmp_path / "c.toml"
        p.write_text('[[systems]]\nid="a"\npath="a.csv"\n[[systems]]\nid="b"\npath="b.csv"\n')
        assert main(["synth", "--config", str(p), "--out", str(tmp_path / "o")]) == 1


class TestAssess:
    def test_full_run_outputs(self, tmp_path, config_file):
        out = tmp_path / "r"
        assert main(["assess", "--config", str(config_file(300.0)), "--out", str(out)]) == 0
        pair_files = sorted((out / "pairs").glob("*.csv"))
        assert len(pair_files) == 6
        for f in pair_files:
            rows = read_rows(f)
            assert tuple(rows[0]) == RECORD_COLUMNS
            assert len(rows) == 3001
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["steps"] == 3000
        assert manifest["seed"] == 3

    def test_plotdata_from_report(self, tmp_path, config_file):
        out = tmp_path / "r"
        assert main(["assess", "--config", str(config_file(slam_faults=FREEZE)), "--out", str(out)]) == 0
        assert main(["plotdata", "--report", str(out)]) == 0
        files = sorted((out / "plotdata").glob("*.csv"))
        assert len(files) == 6
        for f in files:
            rows = read_rows(f)
            assert tuple(rows[0]) == PLOT_COLUMNS
            body = np.array(rows[1:], dtype=float)
            assert body.shape[1] == 6
            assert np.all(body[:, 4] == 0.5)
            np.testing.assert_array_equal(body[:, 5] == 1, body[:, 2] > body[:, 4])

    def test_plotdata_from_config_matches_report(self, tmp_path, config_file):
        cfg = str(config_file(slam_faults=FREEZE))
        assert main(["assess", "--config", cfg, "--out", str(tmp_path / "r")]) == 0
        assert main(["plotdata", "--report", str(tmp_path / "r"), "--out", str(tmp_path / "p1")]) == 0
        assert main(["plotdata", "--config", cfg, "--out", str(tmp_path / "p2")]) == 0
        assert tree_bytes(tmp_path / "p1") == tree_bytes(tmp_path / "p2")

    def test_byte_identical_reruns(self, tmp_path, config_file):
        cfg = str(config_file(slam_faults=FREEZE))
        assert main(["assess", "--config", cfg, "--out", str(tmp_path / "a")]) == 0
        first = tree_bytes(tmp_path / "a")
        assert main(["assess", "--config", cfg, "--out", str(tmp_path / "a")]) == 0
        assert tree_bytes(tmp_path / "a") == first

    def test_rerun_from_manifest(self, tmp_path, config_file):
        cfg = str(config_file(slam_faults=FREEZE))
        assert main(["assess", "--config", cfg, "--out", str(tmp_path / "a")]) == 0
        manifest = str(tmp_path / "a" / "manifest.json")
        assert main(["assess", "--config", manifest, "--out", str(tmp_path / "b")]) == 0
        a, b = tree_bytes(tmp_path / "a"), tree_bytes(tmp_path / "b")
        assert {k: v for k, v in a.items() if k.name != "manifest.json"} == {
            k: v for k, v in b.items() if k.name != "manifest.json"
        }
        ma = json.loads((tmp_path / "a" / "manifest.json").read_text())
        mb = json.loads((tmp_path / "b" / "manifest.json").read_text())
        ma["config"].pop("out_dir")
        mb["config"].pop("out_dir")
        assert ma == mb

    def test_seed_override(self, tmp_path, config_file):
        noise = '[[systems.faults]]\nkind = "noise"\nt_from = 0.0\ndx = 2.0\ndy = 2.0\n'
        cfg = str(config_file(slam_faults=noise))
        for name, seed in [("a", "1"), ("b", "1"), ("c", "2")]:
            assert main(["assess", "--config", cfg, "--seed", seed, "--out", str(tmp_path / name)]) == 0
        pair = "pairs/SLAM__vs__GNSS.csv"
        assert (tmp_path / "a" / pair).read_bytes() == (tmp_path / "b" / pair).read_bytes()
        assert (tmp_path / "a" / pair).read_bytes() != (tmp_path / "c" / pair).read_bytes()
        assert json.loads((tmp_path / "c" / "manifest.json").read_text())["seed"] == 2

    def test_read_report_round_trip(self, tmp_path, config_file):
        out = tmp_path / "r"
        assert main(["assess", "--config", str(config_file(slam_faults=FREEZE)), "--out", str(out)]) == 0
        report = read_report(out)
        assert len(report.pairs) == 6
        series = report.pair("SLAM", "GNSS")
        assert len(series) == 300
        assert series.flagged.any()


class TestExitCodes:
    def test_usage_error(self, capsys):
        assert_exit(["assess"], 1)
        assert_exit(["frobnicate"], 1)
        assert "usage" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path):
        assert main(["assess", "--config", str(tmp_path / "nope.toml")]) == 1

    def test_invalid_toml(self, tmp_path):
        p = tmp_path / "bad.toml"
        p.write_text("seed = = 2\n")
        assert main(["assess", "--config", str(p)]) == 1

    def test_missing_data_file(self, tmp_path):
        p = tmp_path / "c.toml"
        p.write_text('out_dir="o"\n[[systems]]\nid="a"\npath="a.csv"\n[[systems]]\nid="b"\npath="b.csv"\n')
        assert main(["assess", "--config", str(p)]) == 2

    def test_malformed_data_file(self, tmp_path, capsys):
        (tmp_path / "a.csv").write_text("t,x,y\n0,0,0\n0.1,1,0\n0.2,2,0\n")
        (tmp_path / "b.csv").write_text("t,x,y\n0,0,0\n0.1,oops,0\n")
        p = tmp_path / "c.toml"
        p.write_text('out_dir="o"\n[[systems]]\nid="a"\npath="a.csv"\n[[systems]]\nid="b"\npath="b.csv"\n')
        assert main(["assess", "--config", str(p)]) == 2
        assert "b.csv" in capsys.readouterr().err

    def test_no_overlap(self, tmp_path):
        (tmp_path / "a.csv").write_text("t,x,y\n0,0,0\n1,1,0\n")
        (tmp_path / "b.csv").write_text("t,x,y\n5,0,0\n6,1,0\n")
        p = tmp_path / "c.toml"
        p.write_text('out_dir="o"\n[[systems]]\nid="a"\npath="a.csv"\n[[systems]]\nid="b"\npath="b.csv"\n')
        assert main(["assess", "--config", str(p)]) == 2

    def test_plotdata_needs_source(self):
        assert main(["plotdata"]) == 1

    def test_plotdata_missing_report(self, tmp_path):
        assert main(["plotdata", "--report", str(tmp_path / "none")]) == 2


def assert_exit(argv, code):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == code
