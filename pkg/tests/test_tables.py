import pytest

from graphene_casimir.errors import OutputError
from graphene_casimir.tables import CsvTable, format_cell


@pytest.mark.parametrize(
    ("value", "text"),
    [
        (True, "true"),
        (False, "false"),
        (42, "42"),
        (1 / 3, "0.333333333333"),
        (-1.25e-7, "-1.25e-07"),
        (float("inf"), "inf"),
        ("Au", "Au"),
    ],
)
def test_format_cell(value, text):
    assert format_cell(value) == text


def test_render_is_deterministic():
    table = CsvTable(columns=["a_nm", "P_Pa"], comments=["config sha256 0123"])
    table.add_row(a_nm=100.0, P_Pa=-1.0 / 3)
    table.add_row(a_nm=200.0, P_Pa=-0.125)
    expected = "# config sha256 0123\na_nm,P_Pa\n100,-0.333333333333\n200,-0.125\n"
    assert table.render() == expected
    assert table.render() == expected


def test_rows_need_every_column():
    table = CsvTable(columns=["a_nm", "P_Pa"])
    with pytest.raises(ValueError, match="P_Pa"):
        table.add_row(a_nm=1.0)


def test_write_creates_directories(tmp_path):
    table = CsvTable(columns=["x"])
    table.add_row(x=1)
    path = table.write(tmp_path / "out" / "table.csv")
    assert path.read_text(encoding="utf-8") == "x\n1\n"


def test_write_failure_is_an_output_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("", encoding="utf-8")
    table = CsvTable(columns=["x"])
    with pytest.raises(OutputError) as info:
        table.write(blocker / "table.csv")
    assert info.value.exit_code == 4
