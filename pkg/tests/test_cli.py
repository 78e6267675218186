"""End-to-end tests of the command-line front end, run in process."""
import hashlib
import math
import os

import numpy as np
import pytest

from tunneltimes.cli import ConfigError, main, parse_config, run_scenario
from tunneltimes.presets import PRESETS, preset_names, preset_text
from tunneltimes.units import ATTOSECONDS_PER_AU, C_RYDBERG


def _read_stats(path):
    out = {}
    with open(path) as fh:
        for line in fh:
            if line.startswith("#") or "=" not in line:
                continue
            key, val = line.rstrip("\n").split("=", 1)
            out[key] = val
    return out


def _data_rows(path):
    with open(path) as fh:
        return [ln.rstrip("\n") for ln in fh if not ln.startswith("#")]


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def test_preset_fig1_top_parses_to_documented_parameters():
    config = parse_config(preset_text("fig1-top"))
    assert config.kind == "barrier"
    assert config.barrier.V0 == 7.0
    assert config.barrier.width == 2.0
    assert config.packet.k0 == 1.5
    assert config.packet.sigma == 5.0
    assert config.packet.x0 == -40.0  # defaults to -8 sigma
    assert config.n_samples == 1_000_000 and config.seed == 12345


def test_preset_fig3_parses_to_ground_state_well():
    config = parse_config(preset_text("fig3"))
    assert config.kind == "ionization"
    assert (config.well.V0, config.well.a, config.well.b) == (7.0, 1.0, 3.0)
    assert config.initial.kind == "ground_state"


def test_all_presets_parse():
    for name in preset_names():
        config = parse_config(preset_text(name))
        assert config.kind in ("barrier", "ionization"), name


def test_empty_document_reports_missing_model():
    with pytest.raises(ConfigError, match="missing model"):
        parse_config("")


def test_unknown_sections_and_keys_are_listed_by_name():
    with pytest.raises(ConfigError, match="lasers"):
        parse_config("[lasers]\npower = 1\n")
    doc = preset_text("fig1-top").replace(
        "sigma = 5", "sigma = 5\nvelocity = 3\nspin = 1")
    with pytest.raises(ConfigError) as err:
        parse_config(doc)
    assert "velocity" in str(err.value) and "spin" in str(err.value)


def test_cross_model_sections_are_rejected():
    doc = preset_text("fig1-top") + "\n[well]\nv0 = 7\na = 1\nb = 3\n"
    with pytest.raises(ConfigError, match="do not apply"):
        parse_config(doc)


def test_bin_width_and_n_bins_are_mutually_exclusive():
    doc = preset_text("fig3").replace("seed = 12345",
                                      "seed = 12345\nn_bins = 40")
    with pytest.raises(ConfigError, match="mutually exclusive"):
        parse_config(doc)


def test_support_bounds_must_come_together():
    doc = preset_text("fig1-top").replace("seed = 12345",
                                          "seed = 12345\nsupport_lo = 0.1")
    with pytest.raises(ConfigError, match="together"):
        parse_config(doc)


def test_malformed_numbers_name_the_field():
    doc = preset_text("fig1-top").replace("sigma = 5", "sigma = five")
    with pytest.raises(ConfigError, match="sigma"):
        parse_config(doc)
    doc = preset_text("fig1-top").replace("n_samples = 1000000",
                                          "n_samples = 2.5")
    with pytest.raises(ConfigError, match="integer"):
        parse_config(doc)


def test_invalid_physics_is_reported_as_config_error():
    doc = preset_text("fig3").replace("b = 3", "b = 0.5")  # b <= a
    with pytest.raises(ConfigError):
        parse_config(doc)


def test_output_selection_preserves_order_and_rejects_unknown():
    doc = preset_text("fig1-top").replace(
        "outputs = density_k clock_curve time_histogram time_cdf stats",
        "outputs = stats, density_k")
    config = parse_config(doc)
    assert config.outputs == ("stats", "density_k")
    doc = preset_text("fig1-top").replace(
        "outputs = density_k clock_curve time_histogram time_cdf stats",
        "outputs = plots")
    with pytest.raises(ConfigError, match="plots"):
        parse_config(doc)


# ---------------------------------------------------------------------------
# run subcommand
# ---------------------------------------------------------------------------

def test_run_writes_all_outputs_and_manifest(tmp_path, capsys):
    rc = main(["run", "fig1-top", "--samples", "2000", "--seed", "7",
               "--out-dir", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    lines = [ln for ln in out.splitlines() if ln.startswith("wrote ")]
    assert len(lines) == 5
    expected = {"density_k.csv", "clock_curve.csv", "time_hist.csv",
                "time_cdf.csv", "stats.txt"}
    assert {os.path.basename(ln.split()[1]) for ln in lines} == expected
    for ln in lines:
        path, digest = ln.split()[1], ln.split("sha256=")[1]
        with open(path, "rb") as fh:
            assert hashlib.sha256(fh.read()).hexdigest() == digest


def test_run_round_trips_written_tables_bit_exactly(tmp_path):
    config = parse_config(preset_text("fig1-top"))
    from dataclasses import replace
    config = replace(config, n_samples=500, seed=3)
    run_scenario(config, out_dir=str(tmp_path))

    from tunneltimes.cli import build_bundle
    bundle = build_bundle(config)
    rows = _data_rows(tmp_path / "density_k.csv")
    ks = np.array([float(r.split(",")[0]) for r in rows])
    rhos = np.array([float(r.split(",")[1]) for r in rows])
    assert np.array_equal(ks, bundle.rho.grid)
    assert np.array_equal(rhos, bundle.rho.density)

    rows = _data_rows(tmp_path / "clock_curve.csv")
    taus = np.array([float(r.split(",")[1]) for r in rows])
    assert np.array_equal(taus, bundle.clock.tau_table)
    tau_as = np.array([float(r.split(",")[2]) for r in rows])
    assert np.array_equal(tau_as, bundle.clock.tau_table * ATTOSECONDS_PER_AU)


def test_run_histogram_file_accounts_for_every_sample(tmp_path):
    rc = main(["run", "fig7-top", "--samples", "5000", "--out-dir",
               str(tmp_path)])
    assert rc == 0
    rows = _data_rows(tmp_path / "time_hist.csv")
    counts = sum(int(r.split(",")[2]) for r in rows)
    with open(tmp_path / "time_hist.csv") as fh:
        tally_line = next(ln for ln in fh if ln.startswith("# underflow"))
    under = int(tally_line.split("underflow = ")[1].split(",")[0])
    over = int(tally_line.split("overflow = ")[1])
    assert counts + under + over == 5000
    # the fig7-top window is a close view below 0.5 a.u.; edges snap to
    # bin-width multiples, so the last edge may overshoot by one bin
    last_hi = float(rows[-1].split(",")[1])
    assert last_hi <= 0.5 + 0.0031 + 1e-12


def test_run_is_deterministic_per_seed(tmp_path):
    # same preset, seed and sample count must reproduce every file
    d1, d2 = tmp_path / "one", tmp_path / "two"
    for d in (d1, d2):
        rc = main(["run", "fig2-top", "--samples", "1000000", "--seed", "42",
                   "--out-dir", str(d)])
        assert rc == 0
    for name in ("density_k.csv", "clock_curve.csv", "time_hist.csv",
                 "time_cdf.csv", "stats.txt"):
        with open(d1 / name, "rb") as f1, open(d2 / name, "rb") as f2:
            assert f1.read() == f2.read(), name


def test_run_fig5_top_reports_light_time(tmp_path):
    rc = main(["run", "fig5-top", "--samples", "20000", "--out-dir",
               str(tmp_path)])
    assert rc == 0
    stats = _read_stats(tmp_path / "stats.txt")
    light = float(stats["light_time"])
    assert light == pytest.approx(2.0 / C_RYDBERG, rel=1e-12)
    assert light == pytest.approx(7.30e-3, rel=2e-3)
    assert float(stats["light_time_as"]) == pytest.approx(
        light * ATTOSECONDS_PER_AU, rel=1e-15)
    assert "superluminal_prob" in stats and "superluminal_prob_exact" in stats
    assert stats["seed"] == "12345" and stats["n_samples"] == "20000"
    for key in ("mean", "median", "q1", "q3", "p1", "p50", "p99"):
        assert key in stats and key + "_as" in stats


def test_run_fig8_reports_above_barrier_weight(tmp_path):
    rc = main(["run", "fig8", "--samples", "20000", "--out-dir",
               str(tmp_path)])
    assert rc == 0
    stats = _read_stats(tmp_path / "stats.txt")
    weight = float(stats["above_barrier_weight"])
    assert 0.0 < weight < 1.0
    # barrier runs have no decomposition weight to report
    rc = main(["run", "fig1-top", "--samples", "2000", "--out-dir",
               str(tmp_path)])
    assert rc == 0
    assert "above_barrier_weight" not in _read_stats(tmp_path / "stats.txt")


def test_run_bins_flag_overrides_histogram_width(tmp_path):
    rc = main(["run", "fig1-top", "--samples", "2000", "--bins", "0.5",
               "--out-dir", str(tmp_path)])
    assert rc == 0
    rows = _data_rows(tmp_path / "time_hist.csv")
    widths = {float(r.split(",")[1]) - float(r.split(",")[0]) for r in rows}
    assert all(abs(w - 0.5) < 1e-12 for w in widths)


def test_run_cdf_file_is_monotone_and_normalized(tmp_path):
    rc = main(["run", "fig1-top", "--samples", "2000", "--out-dir",
               str(tmp_path)])
    assert rc == 0
    rows = _data_rows(tmp_path / "time_cdf.csv")
    F = np.array([float(r.split(",")[1]) for r in rows])
    assert np.all(np.diff(F) >= -1e-9)
    assert np.all((F >= 0.0) & (F <= 1.0))
    assert np.all(np.isfinite(F))
    assert F[-1] > 0.999


def test_run_unknown_target_exits_with_config_code(tmp_path, capsys):
    rc = main(["run", "no-such-preset", "--out-dir", str(tmp_path)])
    assert rc == 2
    err = capsys.readouterr().err
    assert "fig1-top" in err  # the preset list helps recovery


def test_run_invalid_config_file_exits_with_config_code(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[model]\nkind = barrier\n[barrier]\nv0 = 7\n")
    rc = main(["run", str(bad), "--out-dir", str(tmp_path)])
    assert rc == 2
    assert "width" in capsys.readouterr().err


def test_run_computation_failure_exits_with_compute_code(tmp_path, capsys):
    # shallow well: parsing succeeds but no bound state exists
    doc = preset_text("fig3").replace("v0 = 7", "v0 = 2")
    cfg = tmp_path / "shallow.ini"
    cfg.write_text(doc)
    rc = main(["run", str(cfg), "--out-dir", str(tmp_path)])
    assert rc == 3
    assert "computation error" in capsys.readouterr().err


def test_run_unwritable_out_dir_exits_with_io_code(tmp_path, capsys):
    blocker = tmp_path / "not_a_dir"
    blocker.write_text("occupied")
    rc = main(["run", "fig1-top", "--samples", "200",
               "--out-dir", str(blocker)])
    assert rc == 4
    assert "i/o error" in capsys.readouterr().err


def test_run_rejects_nonpositive_flag_values(tmp_path, capsys):
    assert main(["run", "fig1-top", "--samples", "0",
                 "--out-dir", str(tmp_path)]) == 2
    capsys.readouterr()
    assert main(["run", "fig1-top", "--samples", "100", "--bins", "-1",
                 "--out-dir", str(tmp_path)]) == 2


# ---------------------------------------------------------------------------
# presets, stats and convert subcommands
# ---------------------------------------------------------------------------

def test_presets_listing_names_all_presets(capsys):
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    for name in preset_names():
        assert name in out
    assert len(PRESETS) == 12


def test_presets_show_prints_a_runnable_document(capsys):
    assert main(["presets", "--show", "fig3"]) == 0
    shown = capsys.readouterr().out
    config = parse_config(shown)
    assert config.kind == "ionization"
    assert main(["presets", "--show", "fig99"]) == 2


def test_stats_subcommand_matches_run_statistics(tmp_path, capsys):
    doc = preset_text("fig1-top").replace(
        "outputs = density_k clock_curve time_histogram time_cdf stats",
        "outputs = stats time_samples")
    cfg = tmp_path / "cfg.ini"
    cfg.write_text(doc)
    rc = main(["run", str(cfg), "--samples", "4000", "--seed", "5",
               "--out-dir", str(tmp_path)])
    assert rc == 0
    capsys.readouterr()
    stats_file = _read_stats(tmp_path / "stats.txt")
    rc = main(["stats", str(tmp_path / "time_samples.csv")])
    assert rc == 0
    out = dict(ln.split("=", 1) for ln in capsys.readouterr().out.splitlines())
    # written samples carry 17 significant digits, so the re-summarized
    # moments agree bit for bit
    assert out["mean"] == stats_file["mean"]
    assert out["p95"] == stats_file["p95"]
    assert out["n_samples"] == "4000"


def test_stats_subcommand_rejects_bad_files(tmp_path, capsys):
    empty = tmp_path / "empty.txt"
    empty.write_text("# only a comment\n")
    assert main(["stats", str(empty)]) == 2
    capsys.readouterr()
    bad = tmp_path / "bad.txt"
    bad.write_text("1.0\nnot-a-number\n")
    assert main(["stats", str(bad)]) == 2
    capsys.readouterr()
    assert main(["stats", str(tmp_path / "missing.txt")]) == 4


def test_convert_round_trips_between_units(capsys):
    assert main(["convert", "0.105"]) == 0
    as_val = float(capsys.readouterr().out)
    assert as_val == pytest.approx(0.105 * ATTOSECONDS_PER_AU, rel=1e-15)
    assert as_val == pytest.approx(5.08, abs=0.03)
    assert main(["convert", str(as_val), "--to", "au"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(0.105, rel=1e-14)
