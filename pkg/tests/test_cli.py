"""CLI layer: config parsing, exit codes, artifact emission, determinism."""

import csv
import json
import os

import pytest

import frns.cli as cli
from frns.cli import (
    EXIT_INVALID,
    EXIT_NUMERICAL,
    EXIT_PARSE,
    EXIT_PASS,
    build_config,
    config_hash,
    load_config,
    main,
)


REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CFG_2D = os.path.join(REPO, "configs", "double_well_2d.cfg")
CFG_1D = os.path.join(REPO, "configs", "single_well_1d.cfg")


def write_cfg(tmp_path, text, name="test.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def read_rows(path):
    with open(path, newline="") as f:
        first = f.readline()
        assert first.startswith("# config-hash: ")
        return list(csv.reader(f))


class TestConfigParsing:
    def test_shipped_configs_load(self):
        for path in (CFG_2D, CFG_1D):
            raw = load_config(path)
            cfg, settings = build_config(raw)
            assert cfg.eps > 0
            assert settings.points_per_dim >= 32

    def test_unknown_key_rejected(self, tmp_path):
        p = write_cfg(tmp_path, "frac.s = 0.5\nnope = 1\n")
        with pytest.raises(cli.ConfigError):
            load_config(p)

    def test_duplicate_key_rejected(self, tmp_path):
        p = write_cfg(tmp_path, "frac.s = 0.5\nfrac.s = 0.5\n")
        with pytest.raises(cli.ConfigError):
            load_config(p)

    def test_missing_required_key_rejected(self, tmp_path):
        p = write_cfg(tmp_path, "frac.s = 0.5\n")
        with pytest.raises(cli.ConfigError):
            load_config(p)

    def test_bad_number_rejected(self, tmp_path):
        base = open(CFG_2D).read().replace("frac.s = 0.5", "frac.s = half")
        p = write_cfg(tmp_path, base)
        with pytest.raises(cli.ConfigError):
            load_config(p)

    def test_hash_ignores_comments_and_order(self, tmp_path):
        raw1 = load_config(CFG_2D)
        lines = [
            line for line in open(CFG_2D).read().splitlines()
            if line.split("#", 1)[0].strip()
        ]
        p = write_cfg(tmp_path, "# rearranged\n" + "\n".join(reversed(lines)) + "\n")
        raw2 = load_config(p)
        assert config_hash(raw1) == config_hash(raw2)


class TestExitCodes:
    def test_validate_shipped_config(self, capsys):
        assert main(["validate", "--config", CFG_2D]) == EXIT_PASS
        out = capsys.readouterr().out
        for name in ("(V1)", "(V2)", "(f2)", "kappa bound", "threshold a"):
            assert name in out

    def test_validate_v1_too_large(self, tmp_path, capsys):
        bad = open(CFG_2D).read().replace("potential.V1 = 0.2", "potential.V1 = 1.5")
        p = write_cfg(tmp_path, bad)
        assert main(["validate", "--config", p]) == EXIT_INVALID
        assert "(V1)" in capsys.readouterr().err

    def test_validate_kappa_too_small(self, tmp_path, capsys):
        bad = open(CFG_2D).read().replace("pen.kappa = 10.0", "pen.kappa = 1.0")
        p = write_cfg(tmp_path, bad)
        assert main(["validate", "--config", p]) == EXIT_INVALID
        assert "kappa" in capsys.readouterr().err

    def test_parse_error_exit_code(self, tmp_path, capsys):
        p = write_cfg(tmp_path, "what is this\n")
        assert main(["validate", "--config", p]) == EXIT_PARSE
        assert "line 1" in capsys.readouterr().err

    def test_sstar_rejects_inadmissible_dimension(self, tmp_path, capsys):
        bad = open(CFG_1D).read().replace("frac.s = 0.25", "frac.s = 0.6")
        p = write_cfg(tmp_path, bad)
        assert main(["sstar", "--config", p, "--out", str(tmp_path / "o")]) == EXIT_INVALID

    def test_sweep_needs_three_eps(self, tmp_path):
        code = main([
            "sweep", "--config", CFG_2D, "--out", str(tmp_path / "o"),
            "--eps", "0.5", "0.25",
        ])
        assert code == EXIT_INVALID


class TestKernels:
    def test_kernels_pass_and_emit_csv(self, tmp_path, capsys):
        out = str(tmp_path / "k")
        assert main(["kernels", "--config", CFG_2D, "--out", out]) == EXIT_PASS
        rows = read_rows(os.path.join(out, "kernels.csv"))
        header, body = rows[0], rows[1:]
        assert header == ["check", "computed", "expected", "tolerance", "pass"]
        assert len(body) >= 6
        assert all(r[-1] == "true" for r in body)

    def test_corrupted_sigma_fails(self, tmp_path, monkeypatch):
        monkeypatch.setattr(cli, "_sigma_override", 0.5)
        out = str(tmp_path / "k")
        assert main(["kernels", "--config", CFG_2D, "--out", out]) == EXIT_NUMERICAL


@pytest.fixture(scope="module")
def solve_out(tmp_path_factory):
    out = str(tmp_path_factory.mktemp("solve"))
    code = main(["solve", "--config", CFG_2D, "--out", out, "--seed", "0"])
    return code, out


class TestSolve:
    def test_exit_and_artifacts(self, solve_out):
        code, out = solve_out
        assert code == EXIT_PASS
        for name in ("solution.csv", "diagnostics.csv", "profile.svg", "manifest.json"):
            assert os.path.exists(os.path.join(out, name))

    def test_diagnostics_content(self, solve_out):
        _, out = solve_out
        rows = read_rows(os.path.join(out, "diagnostics.csv"))
        rec = dict(zip(rows[0], rows[1]))
        assert rec["converged"] == "true"
        assert 0.0 < float(rec["energy"]) < float(rec["c_star"])
        assert float(rec["nehari_residual"]) <= 1e-10
        assert rec["below_threshold"] == "true"

    def test_solution_rows_cover_grid(self, solve_out):
        _, out = solve_out
        rows = read_rows(os.path.join(out, "solution.csv"))
        assert rows[0] == ["x", "y", "u"]
        assert len(rows) - 1 == 128 * 128

    def test_manifest_fields(self, solve_out):
        _, out = solve_out
        with open(os.path.join(out, "manifest.json")) as f:
            man = json.load(f)
        assert set(man) == {"config_hash", "seed", "version", "outputs"}
        assert man["seed"] == 0
        assert len(man["config_hash"]) == 64

    def test_determinism_bit_identical(self, solve_out, tmp_path):
        _, out1 = solve_out
        out2 = str(tmp_path / "again")
        assert main(["solve", "--config", CFG_2D, "--out", out2, "--seed", "0"]) == EXIT_PASS
        for name in ("solution.csv", "diagnostics.csv"):
            b1 = open(os.path.join(out1, name), "rb").read()
            b2 = open(os.path.join(out2, name), "rb").read()
            assert b1 == b2

    def test_svg_is_wellformed(self, solve_out):
        import xml.etree.ElementTree as ET

        _, out = solve_out
        root = ET.parse(os.path.join(out, "profile.svg")).getroot()
        assert root.tag.endswith("svg")
        assert root.attrib["version"] == "1.1"
