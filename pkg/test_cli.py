"""
Tests for the command-line entry point, configuration and artifacts
"""
import csv
import json
from fractions import Fraction

import pytest
from loguru import logger

from config import Config, parse_box
from main import EXIT_IO, EXIT_OK, EXIT_VALIDATION, main
from src import __version__
from src.region_lab import RunConfig, SpikeRegionsLab, detect_period
from src.snn_core import load_network
from src.temporal import shift_trajectory


@pytest.fixture
def results(tmp_path, monkeypatch):
    """Output directory and log file inside tmp_path"""
    monkeypatch.setenv("SPIKE_REGIONS_OUTPUT_DIR", str(tmp_path / "results"))
    monkeypatch.setenv("LOG_FILE", str(tmp_path / "run.log"))
    monkeypatch.setenv("SPIKE_REGIONS_MODE", "exact")
    monkeypatch.setenv("SPIKE_REGIONS_SEED", "0")
    yield tmp_path / "results"
    logger.remove()


def run(*args):
    return main(["--quiet", *args])


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# ")
    return json.loads(lines[0][2:]), list(csv.DictReader(lines[1:]))


# ---------------------------------------------------------------- configuration

def test_parse_box():
    assert parse_box("-1,1x0,1/2") == [(-1, 1), (0, Fraction(1, 2))]
    assert parse_box("0,3") == [(0, 3)]
    for text in ("0,1x", "1,0", "0;1", ""):
        with pytest.raises(ValueError):
            parse_box(text)


def test_config_reads_environment(monkeypatch):
    monkeypatch.setenv("SPIKE_REGIONS_MODE", "FLOAT")
    monkeypatch.setenv("SPIKE_REGIONS_SAMPLES", "500")
    config = Config()
    assert config.mode == "float"
    assert config.samples == 500
    assert config.validate_config() == []


def test_config_reports_every_problem():
    config = Config(mode="decimal", tolerance=0, seed=-1, box="1,0", samples=0)
    errors = config.validate_config()
    assert len(errors) == 5
    assert any("SPIKE_REGIONS_MODE" in error for error in errors)


def test_run_config_overrides():
    config = Config(mode="exact", seed=3)
    run_config = RunConfig.from_config(config, "regions", mode="float", layer=None, box="0,1x0,1")
    assert run_config.mode == "float"
    assert run_config.box == "0,1x0,1"
    manifest = run_config.manifest()
    assert manifest["command"] == "regions"
    assert manifest["seed"] == 3
    assert manifest["version"] == __version__
    assert manifest["overrides"] == {"box": "0,1x0,1", "mode": "float"}


def test_lab_rejects_invalid_config():
    with pytest.raises(ValueError):
        SpikeRegionsLab(Config(mode="decimal"))


# ---------------------------------------------------------------- build

def test_build_lipschitz_square(results):
    assert run("build", "lipschitz", "--gamma", "4", "--eps", "1", "--box", "0,1x0,1") == EXIT_OK
    path = results / "lipschitz.json"
    net = load_network(path)
    assert net.widths == (10, 16)
    metadata = json.loads(path.read_text())["metadata"]
    assert metadata["approximation"]["sup_error"] == "1/2"
    assert metadata["command"] == "build"


def test_build_identity_and_simulate(results, capsys):
    assert run("build", "identity", "--n", "2", "--T", "3", "--L", "2") == EXIT_OK
    path = results / "identity.json"
    net = load_network(path)
    assert net.widths == (2, 2)
    assert net.layers[0].W.tolist() == [[Fraction(7, 6), 0], [0, Fraction(7, 6)]]

    capsys.readouterr()
    assert run("simulate", str(path), "--x", "1,0") == EXIT_OK
    printed = capsys.readouterr().out
    assert "111 000" in printed


def test_simulate_returns_trains_and_output(results):
    assert run("build", "identity", "--n", "2", "--T", "3", "--L", "2") == EXIT_OK
    lab = SpikeRegionsLab(Config())
    result = lab.cmd_simulate(results / "identity.json", ["1", "0"])
    assert result == {"trains": [["111", "000"], ["111", "000"]], "output": ["3", "0"]}


def test_build_indicator(results):
    assert run("build", "indicator", "--A", "1,0;-1,0;0,1;0,-1", "--b", "1,0,1,0") == EXIT_OK
    assert load_network(results / "indicator.json").widths == (4, 1)


def test_build_general_position_counts_regions(results):
    assert run("build", "general-position", "--n1", "3", "--T", "2") == EXIT_OK
    metadata = json.loads((results / "general-position.json").read_text())["metadata"]
    assert metadata["regions"] == metadata["bound"] == 37


def test_build_reports_missing_parameters(results):
    assert run("build", "identity", "--n", "2") == EXIT_VALIDATION
    assert not (results / "identity.json").exists()


def test_build_rejects_invalid_margin(results):
    assert run("build", "identity", "--n", "1", "--T", "3", "--L", "1", "--epsilon", "1/2") == EXIT_VALIDATION


# ---------------------------------------------------------------- regions

def test_regions_exact(results):
    assert run("build", "general-position", "--n1", "2", "--T", "2") == EXIT_OK
    assert run("regions", str(results / "general-position.json"), "--exact2d") == EXIT_OK
    report = json.loads((results / "regions_general-position.json").read_text())
    assert report["manifest"]["command"] == "regions"
    assert report["report"]["layer_counts"] == [16]
    assert report["report"]["method"] == "exact2d"
    manifest, rows = read_csv(results / "regions_general-position.csv")
    assert manifest == report["manifest"]
    assert len(rows) == 16
    assert len({row["pattern"] for row in rows}) == 16


def test_regions_sampled(results, monkeypatch):
    monkeypatch.setenv("SPIKE_REGIONS_SEED", "7")
    assert run("build", "general-position", "--n1", "2", "--T", "1") == EXIT_OK
    assert run("regions", str(results / "general-position.json"), "--sample", "2000",
               "--box=-3,3x-3,3") == EXIT_OK
    report = json.loads((results / "regions_general-position.json").read_text())["report"]
    assert report["method"] == "sampled"
    assert report["samples"] == 2000
    assert report["seed"] == 7
    assert report["layer_counts"] == [4]
    _, rows = read_csv(results / "regions_general-position.csv")
    assert rows == [{"layer": "1", "patterns": "4"}]


def test_regions_missing_file_is_an_io_error(results):
    assert run("regions", str(results / "nowhere.json")) == EXIT_IO


def test_regions_rejects_three_inputs(results):
    assert run("build", "indicator", "--A", "1,1,1", "--b", "1") == EXIT_OK
    assert run("regions", str(results / "indicator.json")) == EXIT_VALIDATION


# ---------------------------------------------------------------- temporal

def test_shifts_single_step(results):
    assert run("shifts", "--beta", "1", "--z", "7/10", "--T", "1") == EXIT_OK
    manifest, rows = read_csv(results / "shifts.csv")
    assert manifest["command"] == "shifts"
    assert len(rows) == 1
    assert rows[0]["bit"] == "0"


def test_shifts_csv_marks_exact_repeats(results):
    assert run("shifts", "--beta", "4/5", "--z", "7/10", "--T", "64") == EXIT_OK
    _, rows = read_csv(results / "shifts.csv")
    assert len(rows) == 64
    assert rows[3]["repeat"] == "1"
    assert rows[3]["z_star"] == rows[1]["z_star"]



def test_partition_csv(results):
    assert run("partition", "--beta", "1", "--u0", "1/10", "--T", "2") == EXIT_OK
    _, rows = read_csv(results / "partition.csv")
    assert [row["pattern"] for row in rows] == ["00", "01", "10", "11"]
    assert [row["interval_lo"] for row in rows] == ["-inf", "9/20", "9/10", "19/20"]


def test_invalid_leak_exits_with_validation_code(results):
    assert run("partition", "--beta", "3/2", "--T", "2") == EXIT_VALIDATION


def test_detect_period():
    assert detect_period(shift_trajectory(Fraction(7, 10), Fraction(4, 5), 1, 0, 64), tolerance=1e-4) == 5
    assert detect_period(shift_trajectory(Fraction(1, 2), 0, 1, 0, 16)) == 1


# ---------------------------------------------------------------- approximation

def test_approx_ramp(results):
    assert run("approx", "--target", "ramp", "--gamma", "4", "--eps", "1") == EXIT_OK
    report = json.loads((results / "approx_ramp.json").read_text())["report"]
    assert report["sup_error"] == "1/2"
    assert report["widths"] == [5, 4]
    assert report["sup_is_exact"] is True


def test_approx_constant_ramp(results):
    assert run("approx", "--target", "ramp", "--gamma", "0", "--eps", "1") == EXIT_OK
    report = json.loads((results / "approx_ramp.json").read_text())["report"]
    assert report["sup_error"] == "0"
    assert report["widths"] == [2, 1]


def test_approx_staircase(results):
    assert run("approx", "--target", "staircase", "--K", "4", "--eps", "1/10") == EXIT_OK
    report = json.loads((results / "approx_staircase.json").read_text())["report"]
    assert report["l2_error_sq"] == "1/50000"
    assert report["sup_error"] == "1/20"


def test_approx_needs_its_parameters(results):
    assert run("approx", "--target", "staircase", "--eps", "1/10") == EXIT_VALIDATION


# ---------------------------------------------------------------- experiments

def test_table1_theory_and_construction(results):
    assert run("table1", "--random-nets", "2") == EXIT_OK
    manifest, rows = read_csv(results / "table1.csv")
    assert manifest["command"] == "table1"
    assert [row["theory"] for row in rows] == ["4", "7", "11", "16", "37", "67"]
    assert all(row["general_position"] == row["theory"] for row in rows)
    for row in rows:
        assert all(int(count) <= int(row["theory"]) for count in row["random_counts"].split())


def test_runs_are_reproducible(results):
    outputs = []
    for _ in range(2):
        assert run("--seed", "3", "table1", "--random-nets", "3") == EXIT_OK
        assert run("shifts", "--beta", "4/5", "--z", "7/10", "--T", "20") == EXIT_OK
        outputs.append(((results / "table1.csv").read_bytes(), (results / "shifts.csv").read_bytes()))
    assert outputs[0] == outputs[1]


def test_invalid_environment_exits_with_validation_code(results, monkeypatch):
    monkeypatch.setenv("SPIKE_REGIONS_TOLERANCE", "-1")
    assert run("partition", "--beta", "1", "--T", "2") == EXIT_VALIDATION
