import pytest
from click.testing import CliRunner

from graphene_casimir.cli import cli

METALS = """
title = "gold plates"
T_K = 300.0
side1.type = "bare_plate"
side1.material = "Au"
side2.type = "bare_plate"
side2.material = "Au"
grid.start_nm = 400
grid.stop_nm = 600
grid.count = 3
entropy.temperatures_K = [300]
experiment.sphere.radius_um = 60.0
experiment.sphere.delta_s_nm = 1.0
experiment.sample.delta_eV = 0.1
experiment.sample.mu_eV = 0.05
"""


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def metals(tmp_path):
    path = tmp_path / "metals.toml"
    path.write_text(METALS, encoding="utf-8")
    return str(path)


def _table(output: str) -> tuple[list[str], list[list[str]]]:
    lines = [line for line in output.splitlines() if line and not line.startswith("#")]
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


def test_pressure_sweep(runner, metals):
    result = runner.invoke(cli, ["--config", metals, "pressure"])
    assert result.exit_code == 0, result.output
    assert "# config sha256 " in result.output
    assert "# tolerance 1e-06" in result.output
    header, rows = _table(result.output)
    assert header == ["a_nm", "P_Pa", "P_over_B", "l_terms", "trunc_err"]
    assert [float(row[0]) for row in rows] == pytest.approx([400, 500, 600])
    magnitudes = [abs(float(row[1])) for row in rows]
    assert magnitudes[0] > magnitudes[1] > magnitudes[2]


def test_zero_temperature_pressure(runner, metals):
    result = runner.invoke(cli, ["--config", metals, "--t-zero", "pressure"])
    assert result.exit_code == 0, result.output
    _, rows = _table(result.output)
    assert len(rows) == 3
    assert all(int(row[3]) > 0 for row in rows)


def test_output_file_is_deterministic(runner, metals, tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (first, second):
        result = runner.invoke(cli, ["--config", metals, "--out", str(path), "pressure"])
        assert result.exit_code == 0, result.output
    assert first.read_bytes() == second.read_bytes()


def test_threads_do_not_change_results(runner, metals):
    serial = runner.invoke(cli, ["--config", metals, "pressure"])
    threaded = runner.invoke(cli, ["--config", metals, "--threads", "3", "pressure"])
    assert threaded.exit_code == 0, threaded.output
    assert threaded.output == serial.output


def test_thermal_correction_single_point(runner, tmp_path):
    path = tmp_path / "one.toml"
    path.write_text(METALS.replace("grid.count = 3", "grid.count = 1"), encoding="utf-8")
    result = runner.invoke(cli, ["--config", str(path), "thermal-correction"])
    assert result.exit_code == 0, result.output
    header, rows = _table(result.output)
    assert header == ["a_nm", "delta_T_total", "delta_T_implicit"]
    assert len(rows) == 1
    assert rows[0][1] == rows[0][2]


def test_thermal_correction_rejects_zero_temperature(runner, metals):
    result = runner.invoke(cli, ["--config", metals, "--t-zero", "thermal-correction"])
    assert result.exit_code == 2
    assert "T > 0" in result.output


def test_thermal_correction_against_vacuum_is_undefined(runner, tmp_path):
    path = tmp_path / "vacuum.toml"
    text = METALS.replace("grid.count = 3", "grid.count = 1")
    text = text.replace('side2.material = "Au"', 'side2.material = "vacuum"')
    path.write_text(text, encoding="utf-8")
    result = runner.invoke(cli, ["--config", str(path), "thermal-correction"])
    assert result.exit_code == 2
    assert "vanishes" in result.output


def test_entropy(runner, metals):
    result = runner.invoke(cli, ["--config", metals, "entropy"])
    assert result.exit_code == 0, result.output
    header, rows = _table(result.output)
    assert header == ["T_K", "S_J_per_m2K", "err_est"]
    assert [row[0] for row in rows] == ["300"]


def test_band(runner, metals):
    result = runner.invoke(cli, ["--config", metals, "band"])
    assert result.exit_code == 0, result.output
    header, rows = _table(result.output)
    assert header == ["a_nm", "lower_uN_per_m", "upper_uN_per_m"]
    assert all(float(lo) <= float(hi) for _, lo, hi in rows)


def test_compare(runner, metals, write_measurements):
    data = write_measurements([(400, 1.0, 0.2), (500, 0.5, 0.2)])
    result = runner.invoke(cli, ["--config", metals, "compare", str(data)])
    assert result.exit_code == 0, result.output
    header, rows = _table(result.output)
    assert header[:4] == ["a_nm", "measured", "err", "inside_T_band"]
    assert len(rows) == 2
    assert "# measurements: " in result.output


def test_compare_with_empty_measurements(runner, metals, write_measurements):
    result = runner.invoke(cli, ["--config", metals, "compare", str(write_measurements([]))])
    assert result.exit_code == 2
    assert "no measurements" in result.output


def test_compare_needs_a_measurement_file(runner, metals):
    result = runner.invoke(cli, ["--config", metals, "compare"])
    assert result.exit_code == 2


def test_missing_config(runner):
    result = runner.invoke(cli, ["pressure"])
    assert result.exit_code == 2
    assert "--config is required" in result.output


def test_unreadable_config(runner, tmp_path):
    result = runner.invoke(cli, ["--config", str(tmp_path / "nope.toml"), "pressure"])
    assert result.exit_code == 4


def test_unknown_material_in_config(runner, tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text(METALS.replace('side2.material = "Au"', 'side2.material = "Pt"'), encoding="utf-8")
    result = runner.invoke(cli, ["--config", str(path), "pressure"])
    assert result.exit_code == 2
    assert "unknown material" in result.output


def test_tolerance_must_be_relative(runner, metals):
    result = runner.invoke(cli, ["--config", metals, "--tolerance", "2", "pressure"])
    assert result.exit_code == 2


def test_tolerance_override_is_echoed(runner, metals):
    result = runner.invoke(cli, ["--config", metals, "--tolerance", "1e-5", "pressure"])
    assert result.exit_code == 0, result.output
    assert "# tolerance 1e-05" in result.output


def test_materials_list(runner):
    result = runner.invoke(cli, ["materials", "list"])
    assert result.exit_code == 0, result.output
    header, rows = _table(result.output)
    assert header == ["name", "kind", "provenance", "eps_1e+14", "eps_1e+15", "eps_1e+16"]
    names = {row[0]: row[1] for row in rows}
    assert names["Au"] == "drude"
    assert names["vacuum"] == "vacuum"


def test_materials_check(runner, tmp_path):
    good = tmp_path / "good.txt"
    good.write_text("1e14 5.0\n1e15 3.0\n", encoding="utf-8")
    result = runner.invoke(cli, ["materials", "check", str(good)])
    assert result.exit_code == 0, result.output
    assert "xi_rad_per_s,epsilon" in result.output
    bad = tmp_path / "bad.txt"
    bad.write_text("1e14 5.0\n1e13 3.0\n", encoding="utf-8")
    result = runner.invoke(cli, ["materials", "check", str(bad)])
    assert result.exit_code == 4
    assert "row 2" in result.output


def test_materials_check_needs_a_path(runner):
    result = runner.invoke(cli, ["materials", "check"])
    assert result.exit_code == 2
