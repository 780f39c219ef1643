import csv
import os
import tempfile
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from open_system_pt.config import settings
from open_system_pt.domain.system import hermiticity_defect
from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()

Cell = float | int | str | None


def format_number(value: Cell) -> str:
    """Floats with the configured significant digits; ints and strings unchanged."""
    if value is None:
        return ""
    if isinstance(value, bool | int | str):
        return str(value)
    return f"{value:.{settings.output.csv_significant_digits}g}"


def write_csv_atomic(path: str | Path, header: Sequence[str], rows: Sequence[Sequence[Cell]]) -> Path:
    """
    Write a comma-separated table with a header row, moved into place when complete.
    Args:
        path: Destination file.
        header: Column names.
        rows: One sequence per row, same length as the header.
    Returns:
        Path: The written file.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                if len(row) != len(header):
                    raise ValueError(f"row of length {len(row)} for {len(header)} columns")
                writer.writerow([format_number(cell) for cell in row])
        os.replace(tmp_name, target)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    logger.info(f"Wrote {len(rows)} rows to {target}")
    return target


def write_time_series(
    path: str | Path,
    times: Sequence[float],
    states: Sequence[ComplexMatrix],
    observables: dict[str, ComplexMatrix],
    bond_dims: Sequence[int],
) -> Path:
    """
    Time series with columns t, <obs>_re, <obs>_im, trace, hermiticity_defect, bond_dim.
    """
    if not len(times) == len(states) == len(bond_dims):
        raise ValueError(f"{len(times)} times, {len(states)} states, {len(bond_dims)} bond dims")
    header = ["t"]
    for name in observables:
        header += [f"{name}_re", f"{name}_im"]
    header += ["trace", "hermiticity_defect", "bond_dim"]

    rows: list[list[Cell]] = []
    for t, rho, d in zip(times, states, bond_dims, strict=True):
        row: list[Cell] = [float(t)]
        for op in observables.values():
            value = complex(np.trace(op @ rho))
            row += [value.real, value.imag]
        row += [float(np.real(np.trace(rho))), hermiticity_defect(rho), int(d)]
        rows.append(row)
    return write_csv_atomic(path, header, rows)


def write_model_table(path: str | Path, records: Sequence[BaseModel]) -> Path:
    """One row per pydantic record, columns in field order."""
    if not records:
        raise ValueError("no records to write")
    header = list(type(records[0]).model_fields)
    rows = [[getattr(record, name) for name in header] for record in records]
    return write_csv_atomic(path, header, rows)
