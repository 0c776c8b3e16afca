"""Unit tests for wavecascade.snapshot."""

import io
import math

import pytest
from numpy.testing import assert_array_equal

from wavecascade.errors import InvalidInputError
from wavecascade.snapshot import (
    DIAGNOSTIC_COLUMNS,
    MAGIC,
    DiagnosticsWriter,
    decode_field,
    encode_field,
    fmt_float,
    read_field,
    write_field,
    write_table,
)
from wavecascade.spectral import PeriodicGrid


class TestFmtFloat:
    def test_shortest_repr(self):
        assert fmt_float(1.0) == "1.0"
        assert fmt_float(0.1) == "0.1"
        assert float(fmt_float(1 / 3)) == 1 / 3

    def test_special_values(self):
        assert fmt_float(math.nan) == "nan"
        assert fmt_float(math.inf) == "inf"
        assert fmt_float(-math.inf) == "-inf"
        assert fmt_float(None) == ""


class TestFieldSnapshots:
    def test_file_round_trip_is_bitwise(self, tmp_path, rng):
        grid = PeriodicGrid(16, 8, 10.0, 3.0)
        field = grid.field(lambda x, y: rng.standard_normal(x.shape))
        path = write_field(tmp_path / "snapshots" / "zeta_0000.f64", field)
        back = read_field(path)
        assert back.grid == grid
        assert_array_equal(back.values, field.values)

    def test_layout(self):
        grid = PeriodicGrid(8, 8)
        data = encode_field(grid.zeros())
        assert data.startswith(MAGIC)
        assert len(data) == len(MAGIC) + 24 + 8 * 64

    def test_bad_magic(self):
        with pytest.raises(InvalidInputError, match="bad magic"):
            decode_field(b"NOT-A-SNAPSHOT" + bytes(64))

    def test_truncated_payload(self):
        data = encode_field(PeriodicGrid(8, 8).zeros())
        with pytest.raises(InvalidInputError, match="expected 512"):
            decode_field(data[:-8])


class TestDiagnosticsWriter:
    def test_header_and_rows(self):
        buf = io.StringIO()
        writer = DiagnosticsWriter(buf, "green_naghdi")
        writer.write(0.5, 1.25, None, 0.1, 0.9)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "# model=green_naghdi"
        assert lines[1] == ",".join(DIAGNOSTIC_COLUMNS)
        assert lines[2] == "0.5,1.25,,0.1,0.9"


class TestWriteTable:
    def test_metadata_lines_precede_columns(self, tmp_path):
        path = write_table(
            tmp_path / "report.csv",
            ["param", "err"],
            [[0.1, 1e-3], [0.05, math.nan]],
            header_lines=["kind=compare"],
        )
        lines = path.read_text().splitlines()
        assert lines == ["# kind=compare", "param,err", "0.1,0.001", "0.05,nan"]

    def test_non_float_cells_pass_through(self, tmp_path):
        path = write_table(tmp_path / "t.csv", ["a", "b"], [["x", 3]])
        assert path.read_text().splitlines()[-1] == "x,3"
