import copy
import hashlib
import json
import math
from pathlib import Path

import pytest

from oscpair.cli import (
    EXIT_CONFIG,
    EXIT_NONCONVERGED,
    EXIT_OK,
    EXIT_ORACLE,
    main,
)

W01 = 1e13
BASE_CONFIG = {
    "units": "cgs",
    "system": {
        "oscillator1": {"mass": 1e-23, "eigenfrequency": W01, "damping": 0.05 * W01},
        "oscillator2": {
            "mass": 1e-23,
            "eigenfrequency": 1.3 * W01,
            "damping": 0.05 * 1.3 * W01,
        },
        "bath1": {"model": "debye", "temperature": 300.0, "cutoff": 30.0 * W01},
        "bath2": {"model": "debye", "temperature": 700.0, "cutoff": 30.0 * W01},
        "coupling": 100.0,
    },
}


def write_config(tmp_path: Path, payload: dict, name: str = "run.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return path


def with_block(block_name: str, block: dict, base: dict | None = None) -> dict:
    cfg = copy.deepcopy(base if base is not None else BASE_CONFIG)
    cfg[block_name] = block
    return cfg


def read_csv(path: Path) -> tuple[list[str], str, list[list[str]]]:
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    hash_line = lines[1]
    rows = [line.split(",") for line in lines[2:]]
    return header, hash_line, rows


class TestEnergyCommand:
    def test_writes_report_and_exits_zero(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path, BASE_CONFIG)
        code = main(["energy", "--config", str(cfg_path), "--out", str(tmp_path)])
        assert code == EXIT_OK
        payload = json.loads((tmp_path / "energy.json").read_text())
        assert payload["config_sha256"] == hashlib.sha256(cfg_path.read_bytes()).hexdigest()
        assert payload["units"] == "cgs"
        assert payload["lambda_ref"] == 1000.0
        assert payload["critical_coupling"] == pytest.approx(1300.0, rel=1e-15)
        assert payload["converged"] is True
        assert payload["unstable"] is False
        for key in ("u1", "u2", "u_int"):
            block = payload[key]
            assert block["converged"] is True
            assert block["value_reduced"] == pytest.approx(
                block["value"] / (1.054571817e-27 * W01), rel=1e-12
            )
        out = capsys.readouterr().out
        assert "u_int" in out and "energy.json" in out

    def test_zero_coupling_interaction_is_exactly_zero(self, tmp_path):
        cfg = copy.deepcopy(BASE_CONFIG)
        cfg["system"]["coupling"] = 0.0
        cfg_path = write_config(tmp_path, cfg)
        assert main(["energy", "--config", str(cfg_path), "--out", str(tmp_path)]) == EXIT_OK
        payload = json.loads((tmp_path / "energy.json").read_text())
        assert payload["u_int"]["value"] == 0.0
        assert payload["u_int"]["evaluations"] == 0
        assert payload["normalized_u_int"] == 0.0

    def test_unstable_system_still_reports(self, tmp_path):
        cfg = copy.deepcopy(BASE_CONFIG)
        cfg["system"]["coupling"] = 1500.0  # above the 1300 critical value
        cfg_path = write_config(tmp_path, cfg)
        assert main(["energy", "--config", str(cfg_path), "--out", str(tmp_path)]) == EXIT_OK
        payload = json.loads((tmp_path / "energy.json").read_text())
        assert payload["unstable"] is True

    def test_reduced_units_config_round_trips_the_cgs_values(self, tmp_path):
        cfg_path = write_config(tmp_path, BASE_CONFIG, "cgs.json")
        reduced = {
            "units": "reduced",
            "system": {
                "oscillator1": {"mass": 1.0, "eigenfrequency": 1.0, "damping": 0.05},
                "oscillator2": {
                    "mass": 1.0,
                    "eigenfrequency": 1.3,
                    "damping": 0.05 * 1.3,
                },
                "bath1": {
                    "model": "debye",
                    "temperature": 300.0 * 1.380649e-16 / (1.054571817e-27 * W01),
                    "cutoff": 30.0,
                },
                "bath2": {
                    "model": "debye",
                    "temperature": 700.0 * 1.380649e-16 / (1.054571817e-27 * W01),
                    "cutoff": 30.0,
                },
                "coupling": 0.1,
            },
        }
        red_path = write_config(tmp_path, reduced, "reduced.json")
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["energy", "--config", str(cfg_path), "--out", str(out_a)]) == EXIT_OK
        assert main(["energy", "--config", str(red_path), "--out", str(out_b)]) == EXIT_OK
        cgs = json.loads((out_a / "energy.json").read_text())
        red = json.loads((out_b / "energy.json").read_text())
        for key in ("u1", "u2", "u_int"):
            assert cgs[key]["value_reduced"] == pytest.approx(
                red[key]["value"], rel=1e-10
            )
        assert red["u1"]["value"] == red["u1"]["value_reduced"]

    def test_rejects_command_blocks(self, tmp_path, capsys):
        cfg_path = write_config(
            tmp_path, with_block("sweep", {"start": 0.1, "stop": 0.5, "count": 3})
        )
        assert main(["energy", "--config", str(cfg_path), "--out", str(tmp_path)]) == EXIT_CONFIG
        assert "$.sweep: block not allowed" in capsys.readouterr().err


class TestConfigErrors:
    def test_missing_file(self, tmp_path, capsys):
        code = main(["energy", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)])
        assert code == EXIT_CONFIG
        assert "config error" in capsys.readouterr().err

    def test_invalid_json_reports_line_and_column(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "units": "cgs",,\n}\n', encoding="utf-8")
        assert main(["energy", "--config", str(path), "--out", str(tmp_path)]) == EXIT_CONFIG
        err = capsys.readouterr().err
        assert f"{path}:2:" in err
        assert "invalid JSON" in err

    def test_missing_field_reports_dotted_path(self, tmp_path, capsys):
        cfg = copy.deepcopy(BASE_CONFIG)
        del cfg["system"]["bath1"]["temperature"]
        cfg_path = write_config(tmp_path, cfg)
        assert main(["energy", "--config", str(cfg_path), "--out", str(tmp_path)]) == EXIT_CONFIG
        assert "$.system.bath1.temperature: missing required field" in capsys.readouterr().err

    def test_wrong_type_reports_dotted_path(self, tmp_path, capsys):
        cfg = copy.deepcopy(BASE_CONFIG)
        cfg["system"]["coupling"] = "strong"
        cfg_path = write_config(tmp_path, cfg)
        assert main(["energy", "--config", str(cfg_path), "--out", str(tmp_path)]) == EXIT_CONFIG
        assert "$.system.coupling" in capsys.readouterr().err

    def test_semantic_validation_surfaces_field_names(self, tmp_path, capsys):
        cfg = copy.deepcopy(BASE_CONFIG)
        cfg["system"]["oscillator1"]["damping"] = -1.0
        cfg_path = write_config(tmp_path, cfg)
        assert main(["energy", "--config", str(cfg_path), "--out", str(tmp_path)]) == EXIT_CONFIG
        err = capsys.readouterr().err
        assert "$.system:" in err and "damping" in err

    def test_bad_tol_flag(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path, BASE_CONFIG)
        code = main(
            ["energy", "--config", str(cfg_path), "--out", str(tmp_path), "--tol=-1e-6"]
        )
        assert code == EXIT_CONFIG
        assert "--tol must be positive" in capsys.readouterr().err


class TestSpectrumCommand:
    def test_csv_shape_and_hash_comment(self, tmp_path):
        cfg_path = write_config(
            tmp_path,
            with_block("spectrum", {"omega_min": 0.2, "omega_max": 2.0, "samples": 41}),
        )
        assert main(["spectrum", "--config", str(cfg_path), "--out", str(tmp_path)]) == EXIT_OK
        header, hash_line, rows = read_csv(tmp_path / "spectrum.csv")
        assert header == ["omega_over_omega01", "u_int_spectral_density"]
        digest = hashlib.sha256(cfg_path.read_bytes()).hexdigest()
        assert hash_line == f"# config_sha256={digest}"
        assert len(rows) == 41
        assert float(rows[0][0]) == 0.2
        assert float(rows[-1][0]) == 2.0
        # every value parses back as a float
        assert all(math.isfinite(float(v)) for _, v in rows)

    def test_svg_rendering(self, tmp_path):
        cfg_path = write_config(
            tmp_path,
            with_block("spectrum", {"omega_min": 0.2, "omega_max": 2.0, "samples": 64}),
        )
        code = main(
            ["spectrum", "--config", str(cfg_path), "--out", str(tmp_path), "--svg"]
        )
        assert code == EXIT_OK
        svg = (tmp_path / "spectrum.svg").read_text(encoding="utf-8")
        assert svg.lstrip().startswith("<?xml")
        assert "<svg" in svg

    @pytest.mark.parametrize(
        "block, needle",
        [
            ({"omega_min": 0.0, "omega_max": 2.0, "samples": 10}, "omega_min"),
            ({"omega_min": 0.5, "omega_max": 0.4, "samples": 10}, "omega_max"),
            ({"omega_min": 0.5, "omega_max": 2.0, "samples": 0}, "samples"),
            ({"omega_max": 2.0, "samples": 10}, "omega_min"),
        ],
    )
    def test_grid_validation(self, tmp_path, capsys, block, needle):
        cfg_path = write_config(tmp_path, with_block("spectrum", block))
        assert main(["spectrum", "--config", str(cfg_path), "--out", str(tmp_path)]) == EXIT_CONFIG
        assert needle in capsys.readouterr().err

    def test_missing_block(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path, BASE_CONFIG)
        assert main(["spectrum", "--config", str(cfg_path), "--out", str(tmp_path)]) == EXIT_CONFIG
        assert "$.spectrum: missing command block" in capsys.readouterr().err


class TestSweepCommands:
    def test_coupling_sweep_rows_and_columns(self, tmp_path):
        cfg_path = write_config(
            tmp_path, with_block("sweep", {"start": 0.1, "stop": 0.5, "count": 5})
        )
        assert main(
            ["sweep-coupling", "--config", str(cfg_path), "--out", str(tmp_path)]
        ) == EXIT_OK
        header, _, rows = read_csv(tmp_path / "sweep_coupling.csv")
        assert header == [
            "coupling_over_lambda0",
            "u1",
            "u2",
            "u_int",
            "normalized_u_int",
            "converged",
            "unstable",
        ]
        assert len(rows) == 5
        assert [float(r[0]) for r in rows] == pytest.approx(
            [0.1, 0.2, 0.3, 0.4, 0.5], rel=1e-15
        )
        assert all(r[5] == "true" for r in rows)
        assert all(r[6] == "false" for r in rows)

    def test_single_point_sweep(self, tmp_path):
        cfg_path = write_config(
            tmp_path, with_block("sweep", {"start": 0.25, "stop": 0.25, "count": 1})
        )
        assert main(
            ["sweep-coupling", "--config", str(cfg_path), "--out", str(tmp_path)]
        ) == EXIT_OK
        _, _, rows = read_csv(tmp_path / "sweep_coupling.csv")
        assert len(rows) == 1

    def test_ratio_sweep_writes_its_own_file(self, tmp_path):
        cfg_path = write_config(
            tmp_path, with_block("sweep", {"start": 0.8, "stop": 1.2, "count": 3})
        )
        assert main(
            ["sweep-ratio", "--config", str(cfg_path), "--out", str(tmp_path)]
        ) == EXIT_OK
        header, _, rows = read_csv(tmp_path / "sweep_ratio.csv")
        assert header[0] == "omega02_over_omega01"
        assert len(rows) == 3

    def test_near_critical_rows_flip_the_exit_code(self, tmp_path, capsys):
        cfg = copy.deepcopy(BASE_CONFIG)
        cfg["system"]["oscillator2"] = {
            "mass": 1e-23,
            "eigenfrequency": W01,
            "damping": 0.01 * W01,
        }
        cfg["system"]["oscillator1"]["damping"] = 0.01 * W01
        cfg["system"]["bath2"]["temperature"] = 1000.0
        cfg["sweep"] = {"start": 0.99985, "stop": 0.99995, "count": 3}
        cfg_path = write_config(tmp_path, cfg)
        code = main(["sweep-coupling", "--config", str(cfg_path), "--out", str(tmp_path)])
        assert code == EXIT_NONCONVERGED
        err = capsys.readouterr().err
        assert "did not converge" in err
        _, _, rows = read_csv(tmp_path / "sweep_coupling.csv")
        assert any(r[5] == "false" for r in rows)

    def test_negative_coupling_start_rejected(self, tmp_path, capsys):
        cfg_path = write_config(
            tmp_path, with_block("sweep", {"start": -0.1, "stop": 0.5, "count": 3})
        )
        assert main(
            ["sweep-coupling", "--config", str(cfg_path), "--out", str(tmp_path)]
        ) == EXIT_CONFIG
        assert "coupling must be non-negative" in capsys.readouterr().err

    def test_ratio_rows_violating_model_bounds_become_config_errors(self, tmp_path, capsys):
        cfg = copy.deepcopy(BASE_CONFIG)
        cfg["system"]["bath2"]["cutoff"] = 1.5 * W01
        cfg["sweep"] = {"start": 1.0, "stop": 1.8, "count": 3}
        cfg_path = write_config(tmp_path, cfg)
        assert main(
            ["sweep-ratio", "--config", str(cfg_path), "--out", str(tmp_path)]
        ) == EXIT_CONFIG
        assert "$.sweep:" in capsys.readouterr().err

    def test_sweep_svg(self, tmp_path):
        cfg_path = write_config(
            tmp_path, with_block("sweep", {"start": 0.1, "stop": 0.5, "count": 4})
        )
        assert main(
            ["sweep-coupling", "--config", str(cfg_path), "--out", str(tmp_path), "--svg"]
        ) == EXIT_OK
        assert (tmp_path / "sweep_coupling.svg").exists()


class TestOracleCommand:
    def test_passing_oracle(self, tmp_path):
        cfg = copy.deepcopy(BASE_CONFIG)
        cfg["system"]["oscillator1"]["damping"] = 0.1 * W01
        cfg["system"]["oscillator2"]["damping"] = 0.13 * W01
        cfg["oracle"] = {"size": 20000, "threshold": 0.005}
        cfg_path = write_config(tmp_path, cfg)
        code = main(["validate-oracle", "--config", str(cfg_path), "--out", str(tmp_path)])
        assert code == EXIT_OK
        payload = json.loads((tmp_path / "oracle.json").read_text())
        assert payload["pass"] is True
        assert payload["size"] == 20000
        for key in ("u1", "u2", "u_int"):
            assert payload[key]["relative_deviation"] <= 0.005

    def test_starved_oracle_exits_three(self, tmp_path, capsys):
        cfg = with_block("oracle", {"size": 10, "threshold": 0.005})
        cfg_path = write_config(tmp_path, cfg)
        code = main(["validate-oracle", "--config", str(cfg_path), "--out", str(tmp_path)])
        assert code == EXIT_ORACLE
        assert "MISMATCH" in capsys.readouterr().out
        payload = json.loads((tmp_path / "oracle.json").read_text())
        assert payload["pass"] is False

    def test_size_floor(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path, with_block("oracle", {"size": 1}))
        assert main(
            ["validate-oracle", "--config", str(cfg_path), "--out", str(tmp_path)]
        ) == EXIT_CONFIG
        assert "$.oracle.size" in capsys.readouterr().err


class TestDeterminism:
    def test_identical_runs_produce_identical_bytes(self, tmp_path):
        cfg_path = write_config(
            tmp_path,
            with_block("spectrum", {"omega_min": 0.2, "omega_max": 2.0, "samples": 201}),
        )
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            assert main(
                ["spectrum", "--config", str(cfg_path), "--out", str(out), "--svg"]
            ) == EXIT_OK
        assert (out_a / "spectrum.csv").read_bytes() == (out_b / "spectrum.csv").read_bytes()
        assert (out_a / "spectrum.svg").read_bytes() == (out_b / "spectrum.svg").read_bytes()

    def test_tol_flag_changes_effort_not_shape(self, tmp_path):
        cfg_path = write_config(tmp_path, BASE_CONFIG)
        out_a, out_b = tmp_path / "loose", tmp_path / "tight"
        assert main(
            ["energy", "--config", str(cfg_path), "--out", str(out_a), "--tol", "1e-4"]
        ) == EXIT_OK
        assert main(
            ["energy", "--config", str(cfg_path), "--out", str(out_b), "--tol", "1e-11"]
        ) == EXIT_OK
        loose = json.loads((out_a / "energy.json").read_text())
        tight = json.loads((out_b / "energy.json").read_text())
        assert tight["u1"]["evaluations"] > loose["u1"]["evaluations"]
        assert tight["u1"]["value"] == pytest.approx(loose["u1"]["value"], rel=1e-3)
