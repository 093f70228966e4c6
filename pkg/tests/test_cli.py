"""CLI surface: config handling, exit codes, CSV shape, determinism."""

import json
import os

import pytest

from logmeans.cli import (
    EXIT_IO,
    EXIT_OK,
    EXIT_TOLERANCE,
    EXIT_USAGE,
    ConfigError,
    RunConfig,
    main,
    quasi_random_points,
)


def read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


# ------------------------------------------------------------------- config

def test_config_round_trip_default():
    cfg = RunConfig()
    assert RunConfig.from_text(cfg.to_text()) == cfg


def test_config_round_trip_custom():
    cfg = RunConfig(
        grid_size=128,
        n_list=(3, 5, 7),
        samples_per_rect=5,
        tol_tail=1e-10,
        tol_quadrature=2e-6,
        tol_bisection=1e-8,
        tol_kernel=1e-7,
        output_dir="results",
        seed=42,
    )
    assert RunConfig.from_text(cfg.to_text()) == cfg


def test_config_rejects_unknown_key():
    with pytest.raises(ConfigError):
        RunConfig.from_text("grid_size=64\nbogus=1\n")


def test_config_rejects_bad_values():
    with pytest.raises(ConfigError):
        RunConfig.from_text("grid_size=not-a-number\n")
    with pytest.raises(ConfigError):
        RunConfig.from_text("n_list=3,x\n")


def test_config_tolerances_map():
    cfg = RunConfig()
    assert set(cfg.tolerances) == {"tail", "quadrature", "bisection", "kernel"}


def test_quasi_random_points_avoid_tubes():
    pts = quasi_random_points(500)
    assert len(pts) == 500
    import math

    for x, y in pts:
        for u in (x, y, x + y, x - y):
            assert abs(math.remainder(u, 2 * math.pi)) >= 0.02


# ---------------------------------------------------------------- exit codes

def test_missing_output_dir_is_io_error(tmp_path):
    missing = tmp_path / "does-not-exist"
    assert main(["lemma", "--out", str(missing)]) == EXIT_IO


def test_bad_config_is_usage_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nope=1\n")
    assert main(["lemma", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_USAGE
    assert main(["lemma", "--config", str(tmp_path / "missing.cfg")]) == EXIT_USAGE


def test_unknown_command_is_usage_error(tmp_path):
    assert main(["frobnicate", "--out", str(tmp_path)]) == EXIT_USAGE


def test_zero_tolerance_fails_kernel_verify(tmp_path):
    cfg = tmp_path / "zero.cfg"
    cfg.write_text("tol_tail=0.0\ntol_kernel=0.0\n")
    code = main([
        "kernel-verify", "--config", str(cfg), "--out", str(tmp_path), "--samples", "3",
    ])
    assert code == EXIT_TOLERANCE


def test_kernel_verify_default_passes(tmp_path):
    assert main(["kernel-verify", "--out", str(tmp_path), "--samples", "4"]) == EXIT_OK
    body = read(tmp_path / "kernel_verify.csv")
    data_rows = [l for l in body.splitlines() if l and not l.startswith("#")][1:]
    assert len(data_rows) >= 7  # one row per verified N


# --------------------------------------------------------------- csv output

def test_lemma_csv_columns_and_n0(tmp_path):
    assert main(["lemma", "--out", str(tmp_path), "--n", "3", "--samples", "5"]) == EXIT_OK
    body = read(tmp_path / "lemma.csv")
    assert "# paper_display=lemma-main" in body
    assert "# n0_estimate=3" in body
    header = [l for l in body.splitlines() if not l.startswith("#")][0]
    assert header == "n,kind,min_ratio,argmin_x,argmin_y,samples"


def test_lemma_empty_region_is_graceful(tmp_path):
    assert main(["lemma", "--out", str(tmp_path), "--n", "2"]) == EXIT_OK
    lines = read(tmp_path / "lemma.csv").splitlines()
    assert any("skipped_empty_region_n=2" in l for l in lines)
    data_rows = [l for l in lines if l and not l.startswith("#")][1:]
    assert data_rows == []


def test_growth_csv(tmp_path):
    assert main(["growth", "--out", str(tmp_path), "--n", "3,4", "--samples", "5"]) == EXIT_OK
    body = read(tmp_path / "growth.csv")
    assert body.startswith("# paper_display=(b)\n")
    header = [l for l in body.splitlines() if not l.startswith("#")][0]
    assert header == "n,geometric_sum,gs_over_n2,l1_lower"


def test_growth_ratio_stays_under_factor_two_on_small_scales(tmp_path):
    assert main(["growth", "--out", str(tmp_path), "--n", "3,4,5", "--samples", "5"]) == EXIT_OK
    rows = [
        l.split(",") for l in read(tmp_path / "growth.csv").splitlines()
        if l and not l.startswith("#")
    ][1:]
    ratios = [float(r[2]) for r in rows]
    assert max(ratios) / min(ratios) < 2.0


def test_measure_csv(tmp_path):
    assert main(["measure", "--out", str(tmp_path), "--n", "6,7", "--samples", "5"]) == EXIT_OK
    body = read(tmp_path / "measure.csv")
    assert body.startswith("# paper_display=est1\n")
    rows = [l.split(",") for l in body.splitlines() if l and not l.startswith("#")][1:]
    assert all(float(r[3]) > 0.0 for r in rows)


def test_converge_csv_final_errors_decrease(tmp_path):
    assert main(["converge", "--out", str(tmp_path)]) == EXIT_OK
    rows = [
        l.split(",") for l in read(tmp_path / "converge.csv").splitlines()
        if l and not l.startswith("#")
    ][1:]
    assert rows[0][0] == "norlund-log"
    norlund = [float(r[2]) for r in rows if r[0] == "norlund-log"]
    tail = norlund[-3:]
    assert tail[0] >= tail[1] >= tail[2]


def test_orlicz_csv(tmp_path):
    assert main(["orlicz", "--out", str(tmp_path), "--grid-size", "128"]) == EXIT_OK
    body = read(tmp_path / "orlicz.csv")
    header = [l for l in body.splitlines() if not l.startswith("#")][0]
    assert header == "function,young,norm,modular_at_norm"
    rows = [l.split(",") for l in body.splitlines() if l and not l.startswith("#")][1:]
    for row in rows:
        if float(row[2]) > 0.0:
            assert abs(float(row[3]) - 1.0) <= 1e-6
    assert os.path.exists(tmp_path / "orlicz_deficit.csv")


def test_json_mirror(tmp_path):
    assert main(["lemma", "--out", str(tmp_path), "--n", "3", "--samples", "5", "--json"]) == EXIT_OK
    payload = json.loads(read(tmp_path / "lemma.json"))
    assert payload["header"] == ["n", "kind", "min_ratio", "argmin_x", "argmin_y", "samples"]
    assert len(payload["rows"]) == 2


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(RunConfig(n_list=(4,), samples_per_rect=5).to_text())
    assert main([
        "lemma", "--config", str(cfg), "--out", str(tmp_path), "--n", "3",
    ]) == EXIT_OK
    rows = [
        l.split(",") for l in read(tmp_path / "lemma.csv").splitlines()
        if l and not l.startswith("#")
    ][1:]
    assert {r[0] for r in rows} == {"3"}


# -------------------------------------------------------------- determinism

@pytest.mark.parametrize(
    "argv",
    [
        ["kernel-verify", "--samples", "4"],
        ["lemma", "--n", "3", "--samples", "5"],
        ["growth", "--n", "3,4", "--samples", "5"],
        ["measure", "--n", "6", "--samples", "5"],
        ["converge", "--n", "4,8,16"],
        ["orlicz", "--grid-size", "64"],
    ],
)
def test_commands_are_byte_reproducible(tmp_path, argv):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    out_a.mkdir()
    out_b.mkdir()
    assert main(argv + ["--out", str(out_a), "--json"]) in (EXIT_OK, EXIT_TOLERANCE)
    assert main(argv + ["--out", str(out_b), "--json"]) in (EXIT_OK, EXIT_TOLERANCE)
    names = sorted(os.listdir(out_a))
    assert names == sorted(os.listdir(out_b))
    for name in names:
        assert read(out_a / name) == read(out_b / name), name


def test_thread_cap_does_not_change_output(tmp_path, monkeypatch):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    out_a.mkdir()
    out_b.mkdir()
    monkeypatch.setenv("LOGMEANS_THREADS", "1")
    assert main(["kernel-verify", "--out", str(out_a), "--samples", "4"]) == EXIT_OK
    monkeypatch.setenv("LOGMEANS_THREADS", "4")
    assert main(["kernel-verify", "--out", str(out_b), "--samples", "4"]) == EXIT_OK
    assert read(out_a / "kernel_verify.csv") == read(out_b / "kernel_verify.csv")
