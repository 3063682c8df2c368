import numpy as np
import pytest

from graphene_casimir.constants import C
from graphene_casimir.errors import (
    ConfigError,
    DomainError,
    MaterialFormatError,
    MaterialValidationError,
)
from graphene_casimir.materials import (
    DIVERGENT,
    SI_PLASMA_RANGE,
    DopedSemiconductor,
    Drude,
    Oscillator,
    OscillatorTerm,
    Plasma,
    Tabulated,
    Vacuum,
    eps_xi_squared,
    eval_permittivity,
    load_material_table,
    permittivity,
    wavenumber,
    zero_frequency_tail,
)


def test_vacuum_is_unity():
    np.testing.assert_array_equal(permittivity(Vacuum(), np.array([0.0, 1e15])), [1.0, 1.0])


def test_drude_diverges_at_zero_frequency():
    gold = Drude(omega_p=1.37e16, gamma=5.3e13)
    assert eval_permittivity(gold, 0.0) == DIVERGENT
    assert eval_permittivity(gold, 1e15) == pytest.approx(1 + 1.37e16**2 / (1e15 * 1.053e15))


def test_eps_xi_squared_is_finite_at_zero():
    plasma = Plasma(omega_p=1.37e16)
    drude = Drude(omega_p=1.37e16, gamma=5.3e13)
    assert float(eps_xi_squared(plasma, 0.0)) == pytest.approx(1.37e16**2)
    assert float(eps_xi_squared(drude, 0.0)) == 0.0


def test_wavenumber_static_limits():
    k = 1e7
    plasma = Plasma(omega_p=1.37e16)
    assert float(wavenumber(plasma, 0.0, k)) == pytest.approx(np.hypot(k, 1.37e16 / C))
    assert float(wavenumber(Drude(omega_p=1.37e16, gamma=5.3e13), 0.0, k)) == pytest.approx(k)


def test_oscillator_static_value(library):
    assert eval_permittivity(library.get("SiO2"), 0.0) == pytest.approx(3.801)
    assert eval_permittivity(library.get("Si"), 0.0) == pytest.approx(11.87)


@pytest.mark.parametrize("name", ["SiO2", "Si", "Au", "Si_doped_low"])
def test_permittivity_decreases_along_imaginary_axis(library, name):
    values = permittivity(library.get(name), np.geomspace(1e13, 1e17, 40))
    assert np.all(np.diff(values) < 0)
    assert np.all(values >= 1)


def test_negative_frequency_rejected():
    with pytest.raises(DomainError):
        permittivity(Vacuum(), -1.0)


def test_zero_frequency_tails(library):
    assert zero_frequency_tail(library.get("Au")) == "drude"
    assert zero_frequency_tail(library.get("Au_plasma")) == "plasma"
    assert zero_frequency_tail(library.get("Si_doped_high")) == "plasma"
    assert zero_frequency_tail(library.get("SiO2")) is None


def test_doped_silicon_range(library):
    low = library.get("Si_doped_low")
    high = library.get("Si_doped_high")
    assert isinstance(low, DopedSemiconductor)
    assert (low.omega_p, high.omega_p) == SI_PLASMA_RANGE
    assert eval_permittivity(high, 1e14) > eval_permittivity(low, 1e14)


def test_tabulated_interpolates_in_log_frequency():
    table = Tabulated(xi=(1e14, 1e16), epsilon=(4.0, 2.0))
    assert eval_permittivity(table, 1e15) == pytest.approx(3.0)
    assert eval_permittivity(table, 0.0) == 4.0
    assert eval_permittivity(table, 1e18) == 2.0


def test_tabulated_rejects_increasing_permittivity():
    with pytest.raises(ValueError):
        Tabulated(xi=(1e14, 1e16), epsilon=(2.0, 4.0))


def test_oscillator_needs_a_term():
    with pytest.raises(ValueError):
        Oscillator(terms=())
    assert eval_permittivity(Oscillator(terms=(OscillatorTerm(strength=2.0, omega=1e15),)), 0.0) == 3.0


def test_load_table(tmp_path):
    path = tmp_path / "eps.txt"
    path.write_text("# xi eps\n1e14 5.0\n\n1e15 3.0  # comment\n1e16 1.5\n", encoding="utf-8")
    table = load_material_table(path)
    assert table.xi == (1e14, 1e15, 1e16)
    assert table.epsilon == (5.0, 3.0, 1.5)


@pytest.mark.parametrize(
    ("content", "error", "row"),
    [
        ("1e14 5.0\n1e15\n", MaterialFormatError, 2),
        ("1e14 5.0\n1e13 3.0\n", MaterialFormatError, 2),
        ("1e14 5.0\n1e15 abc\n", MaterialFormatError, 2),
        ("# header\n1e14 5.0\n1e15 0.5\n", MaterialValidationError, 3),
        ("1e14 3.0\n1e15 4.0\n", MaterialValidationError, 2),
    ],
)
def test_table_errors_name_the_row(tmp_path, content, error, row):
    path = tmp_path / "bad.txt"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(error) as info:
        load_material_table(path)
    assert info.value.row == row
    assert f"row {row}" in str(info.value)


def test_missing_table_is_an_io_error(tmp_path):
    with pytest.raises(MaterialFormatError) as info:
        load_material_table(tmp_path / "missing.txt")
    assert info.value.exit_code == 4


def test_library_lookup(library, tmp_path):
    assert "Au" in library.names()
    with pytest.raises(ConfigError, match="unknown material"):
        library.get("unobtainium")
    path = tmp_path / "film.txt"
    path.write_text("1e14 5.0\n1e16 2.0\n", encoding="utf-8")
    extended = library.with_table("film", path)
    assert isinstance(extended.get("film"), Tabulated)
    assert "film" not in library.names()
