"""Binary field snapshots and CSV diagnostics streams."""

from __future__ import annotations

import csv
import math
import struct
from pathlib import Path
from typing import IO, Iterable, Optional, Sequence, Union

import numpy as np

from wavecascade.errors import InvalidInputError
from wavecascade.spectral import PeriodicGrid, ScalarField

MAGIC = b"WAVECASCADE-F64\0"
_HEADER = struct.Struct("<IIdd")

DIAGNOSTIC_COLUMNS = ("t", "mass", "hamiltonian", "linf_zeta", "min_depth")


def fmt_float(value: float) -> str:
    """Shortest exact text for a float; nan/inf spelled the way csv readers expect."""
    if value is None:
        return ""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(float(value))


def encode_field(field: ScalarField) -> bytes:
    grid = field.grid
    header = MAGIC + _HEADER.pack(grid.nx, grid.ny, grid.lx, grid.ly)
    return header + np.ascontiguousarray(field.values, dtype="<f8").tobytes(order="C")


def decode_field(data: bytes) -> ScalarField:
    if data[: len(MAGIC)] != MAGIC:
        raise InvalidInputError("not a wavecascade field snapshot (bad magic)")
    offset = len(MAGIC)
    nx, ny, lx, ly = _HEADER.unpack_from(data, offset)
    offset += _HEADER.size
    expected = nx * ny * 8
    payload = data[offset:]
    if len(payload) != expected:
        raise InvalidInputError(
            f"snapshot payload has {len(payload)} bytes, expected {expected} for {nx}x{ny}"
        )
    grid = PeriodicGrid(nx, ny, lx, ly)
    values = np.frombuffer(payload, dtype="<f8").reshape((nx, ny)).astype(float)
    return ScalarField(grid, values)


def write_field(path: Union[str, Path], field: ScalarField) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_field(field))
    return path


def read_field(path: Union[str, Path]) -> ScalarField:
    return decode_field(Path(path).read_bytes())


class DiagnosticsWriter:
    """CSV stream `t,mass,hamiltonian,linf_zeta,min_depth` tagged with the model name."""

    def __init__(self, handle: IO[str], model: str) -> None:
        self._handle = handle
        self._writer = csv.writer(handle, lineterminator="\n")
        handle.write(f"# model={model}\n")
        self._writer.writerow(DIAGNOSTIC_COLUMNS)

    def write(self, t: float, mass: float, hamiltonian: Optional[float], linf_zeta: float, min_depth: float) -> None:
        self._writer.writerow(
            [fmt_float(t), fmt_float(mass), fmt_float(hamiltonian), fmt_float(linf_zeta), fmt_float(min_depth)]
        )


def write_table(
    path: Union[str, Path],
    columns: Sequence[str],
    rows: Iterable[Sequence[object]],
    header_lines: Sequence[str] = (),
) -> Path:
    """CSV with `#`-prefixed metadata lines ahead of the column header."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        for line in header_lines:
            f.write(f"# {line}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt_float(c) if isinstance(c, float) else c for c in row])
    return path
