from dataclasses import dataclass

import pytest

from bec_entanglement.utils.export import emit_csv


@dataclass
class _Row:
    name: str
    value: float
    flag: bool


def test_empty_table_keeps_header():
    assert emit_csv([], columns=["name", "value", "flag"]) == "name,value,flag\n"
    with pytest.raises(ValueError, match="columns"):
        emit_csv([])


def test_single_row_format():
    text = emit_csv([_Row("a", 1 / 3, True)])
    assert text.splitlines() == ["name,value,flag", "a,0.333333333333,True"]


def test_nan_and_file_output(tmp_path):
    out = tmp_path / "nested" / "rows.csv"
    text = emit_csv([_Row("b", float("nan"), False)], out=out)
    assert text.splitlines()[1] == "b,nan,False"
    assert out.read_text() == text
