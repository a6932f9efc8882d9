import dataclasses

import numpy as np
import pytest

from rislink.channel import ArrayGeometry
from rislink.cli import emit_csv, main, parse_config, parse_csv
from rislink.montecarlo import run_experiment
from rislink.scenarios import PRESETS, ConfigError


def tiny_fig3(**overrides):
    cfg = PRESETS["fig3"]()
    base = dict(ris_sweep=(ArrayGeometry.upa(4, 4), ArrayGeometry.upa(4, 8)),
                nb_geometry=ArrayGeometry.ula(4), trials=20)
    base.update(overrides)
    return dataclasses.replace(cfg, **base)


def data_lines(blob: bytes):
    return [l for l in blob.decode().splitlines() if l and not l.startswith("#")]


class TestParseConfig:
    def test_empty_document_with_preset(self):
        cfg = parse_config("", preset="fig3")
        assert cfg.scenario == "comp-jt"
        assert all(g.n_x == 20 for g in cfg.ris_sweep)
        assert tuple(g.n_y for g in cfg.ris_sweep) == (8, 16, 32, 64)
        assert (cfg.nb_geometry.n_x, cfg.nb_geometry.n_y) == (8, 4)
        assert cfg.carrier_freq == 28e9
        assert cfg.budget.noise_var == pytest.approx(3.16e-11)

    def test_preset_key_inside_document(self):
        cfg = parse_config("preset = fig4\ntrials = 7\n")
        assert cfg.scenario == "multi-ue-pa"
        assert cfg.trials == 7

    def test_preset_conflict(self):
        with pytest.raises(ConfigError, match="conflict"):
            parse_config("preset = fig4", preset="fig3")

    def test_zero_trials_rejected(self):
        with pytest.raises(ConfigError, match="trials"):
            parse_config("trials = 0", preset="fig3")

    def test_unknown_key_named(self):
        with pytest.raises(ConfigError, match="foo"):
            parse_config("foo = 1", preset="fig3")

    def test_parse_error_reports_line(self):
        with pytest.raises(ConfigError, match="line 2"):
            parse_config("trials = 5\nnot a key value\n", preset="fig3")

    def test_duplicate_key(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config("trials = 5\ntrials = 6", preset="fig3")

    def test_geometry_syntax(self):
        cfg = parse_config(
            "scenario = comp-jt\n"
            "ris_sweep = upa:10x4, upa:10x8\n"
            "nb_geometry = ula:16:0.25\n")
        assert cfg.ris_sweep == (ArrayGeometry.upa(10, 4), ArrayGeometry.upa(10, 8))
        assert cfg.nb_geometry == ArrayGeometry.ula(16, 0.25)

    def test_bad_geometry(self):
        with pytest.raises(ConfigError, match="geometry"):
            parse_config("nb_geometry = hex:7", preset="fig3")

    def test_scenario_without_preset_uses_defaults(self):
        cfg = parse_config("scenario = multi-cell\ntrials = 3\n")
        assert cfg.scenario == "multi-cell"
        assert cfg.preset is None
        assert cfg.trials == 3

    def test_budget_and_interference_keys(self):
        cfg = parse_config(
            "preset = fig8\n"
            "power = 2.0\n"
            "noise_var = 1e-9\n"
            "interference_s0 = 123.0\n"
            "interference_width_table = 0.5:0.2, 3.2:0.1\n")
        assert cfg.budget.power == 2.0
        assert cfg.budget.noise_var == 1e-9
        assert cfg.interference_geometry.s0 == 123.0
        assert cfg.interference_geometry.width_table == ((0.5, 0.2), (3.2, 0.1))

    def test_validation_failure_names_invariant(self):
        with pytest.raises(ConfigError, match="beta_values"):
            parse_config("preset = fig5\nbeta_values = 1.7\n")

    def test_missing_scenario(self):
        with pytest.raises(ConfigError, match="scenario"):
            parse_config("trials = 5")

    def test_comments_ignored(self):
        cfg = parse_config("# a comment\ntrials = 9  # trailing\n", preset="fig3")
        assert cfg.trials == 9


class TestCsvRoundTrip:
    def test_single_point_row_count(self):
        cfg = tiny_fig3(ris_sweep=(ArrayGeometry.upa(4, 4),),
                        jt_variants=("coherent",), trials=3)
        blob = emit_csv(run_experiment(cfg))
        lines = data_lines(blob)
        assert len(lines) == 2  # header + one row
        assert lines[0] == "scenario,curve,x,mean_rate,stderr,trials,seed"

    def test_round_trip_exact(self):
        cs = run_experiment(tiny_fig3())
        for fmt in ("csv", "tsv"):
            assert parse_csv(emit_csv(cs, fmt=fmt), fmt=fmt) == cs

    def test_fig3_shape(self):
        # the bundled joint-transmission preset: 2 curves x 4 sweep points
        cfg = dataclasses.replace(PRESETS["fig3"](), trials=2)
        blob = emit_csv(run_experiment(cfg))
        lines = data_lines(blob)
        assert len(lines) == 1 + 8

    def test_deterministic_row_order(self):
        cs = run_experiment(tiny_fig3())
        rows = data_lines(emit_csv(cs))[1:]
        labels = [r.split(",")[1] for r in rows]
        assert labels == sorted(labels)

    def test_writes_destination(self, tmp_path):
        cs = run_experiment(tiny_fig3(trials=2))
        out = tmp_path / "curves.csv"
        blob = emit_csv(cs, out)
        assert out.read_bytes() == blob

    def test_bad_format(self):
        cs = run_experiment(tiny_fig3(trials=2))
        with pytest.raises(ValueError):
            emit_csv(cs, fmt="json")

    def test_parse_rejects_bad_header(self):
        with pytest.raises(ValueError, match="header"):
            parse_csv("a,b,c\n1,2,3\n")


class TestMain:
    def test_preset_run_to_file(self, tmp_path):
        out = tmp_path / "fig3.csv"
        code = main(["preset", "fig3", "--trials", "3", "--seed", "7", "--out", str(out)])
        assert code == 0
        cs = parse_csv(out.read_bytes())
        assert cs.scenario == "comp-jt"
        assert cs.seed == 7
        assert len(cs.curves) == 2

    def test_seed_determines_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["preset", "fig3", "--trials", "3", "--seed", "11", "--out", str(a)]) == 0
        assert main(["preset", "fig3", "--trials", "3", "--seed", "11", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_workers_identical_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        base = ["preset", "fig3", "--trials", "6", "--seed", "3"]
        assert main(base + ["--out", str(a), "--workers", "1"]) == 0
        assert main(base + ["--out", str(b), "--workers", "4"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_scenario_subcommand_defaults(self, tmp_path):
        out = tmp_path / "jt.csv"
        code = main(["comp-jt", "--trials", "2", "--out", str(out)])
        assert code == 0
        assert parse_csv(out.read_bytes()).scenario == "comp-jt"

    def test_config_file(self, tmp_path):
        cfg_path = tmp_path / "run.cfg"
        cfg_path.write_text("preset = fig6\ntrials = 2\nseed = 5\n")
        out = tmp_path / "out.csv"
        code = main(["preset", "fig6", "--config", str(cfg_path), "--out", str(out)])
        assert code == 0
        cs = parse_csv(out.read_bytes())
        assert cs.scenario == "multi-ue-blocking"
        assert {c.label for c in cs.curves} == {"sum half-block (ncm)", "sum normal-ris (sam)"}

    def test_mode_filter(self, tmp_path):
        out = tmp_path / "sam.csv"
        code = main(["preset", "fig3", "--trials", "2", "--mode", "sam", "--out", str(out)])
        assert code == 0
        cs = parse_csv(out.read_bytes())
        assert [c.label for c in cs.curves] == ["noncoherent-jt (sam)"]

    def test_ofdma_flag(self, tmp_path):
        out = tmp_path / "pa.csv"
        cfg_path = tmp_path / "run.cfg"
        cfg_path.write_text("ris_sweep = ula:16\nnb_geometry = ula:4\ntrials = 2\n")
        code = main(["multi-ue-pa", "--config", str(cfg_path), "--ofdma", "off",
                     "--out", str(out)])
        assert code == 0

    def test_bad_config_exit_code(self, tmp_path, capsys):
        cfg_path = tmp_path / "bad.cfg"
        cfg_path.write_text("foo = 1\n")
        code = main(["preset", "fig3", "--config", str(cfg_path)])
        assert code == 3
        assert "config" in capsys.readouterr().err

    def test_missing_config_file_exit_code(self, capsys):
        code = main(["preset", "fig3", "--config", "/nonexistent/x.cfg"])
        assert code == 4
        assert "io" in capsys.readouterr().err

    def test_scenario_mismatch_rejected(self, tmp_path, capsys):
        code = main(["multi-cell", "--preset", "fig3"])
        assert code == 3
        assert "scenario" in capsys.readouterr().err

    def test_tsv_output(self, tmp_path):
        out = tmp_path / "x.tsv"
        assert main(["preset", "fig3", "--trials", "2", "--format", "tsv",
                     "--out", str(out)]) == 0
        assert b"\t" in out.read_bytes()

    def test_stdout_default(self, capsysbinary):
        assert main(["preset", "fig3", "--trials", "2"]) == 0
        out = capsysbinary.readouterr().out
        assert out.startswith(b"# config_digest=")
