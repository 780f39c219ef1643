"""Binary snapshots of process tensors.

Layout (little-endian):
    header  magic b"OSPT", version u16, dtype code u16 (1 = complex128, 2 = complex64),
            n_steps u32, sys_dim u32, dt f64, build key 32 bytes (sha256 of the run settings
            that shaped the tensor, zero when unkeyed)
    bonds   (n_steps + 1) x u32, d_0..d_n
    payload site tensors of steps 1..n in C order, each (d_l, d_{l-1}, N^2, N^2)
    trunc   n_steps x f64 truncation diagnostics
"""

import os
import struct
import tempfile
from pathlib import Path
from typing import Any, Literal

import numpy as np

from open_system_pt.config import settings
from open_system_pt.domain.process_tensor import ProcessTensor
from open_system_pt.exceptions import ArgumentError
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()

MAGIC = b"OSPT"
VERSION = 2
_HEADER = struct.Struct("<4sHHIId32s")
_KEY_BYTES = 32
_DTYPES: dict[int, np.dtype] = {1: np.dtype("<c16"), 2: np.dtype("<c8")}
_CODES = {"complex128": 1, "complex64": 2}

Precision = Literal["complex128", "complex64"]


def save_pt(
    pt: ProcessTensor, path: str | Path, precision: Precision | None = None, key: str | None = None
) -> Path:
    """
    Write a process tensor snapshot atomically.
    Args:
        pt: Process tensor; closures are not stored.
        path: Destination file.
        precision: Payload precision; the configured default when None.
        key: Hex sha256 digest identifying the build inputs, see snapshot_key.
    Returns:
        Path: The written file.
    """
    precision = precision or settings.output.pt_cache_precision
    code = _CODES[precision]
    dtype = _DTYPES[code]
    raw_key = bytes.fromhex(key) if key else bytes(_KEY_BYTES)
    if len(raw_key) != _KEY_BYTES:
        raise ArgumentError(f"snapshot key must be a sha256 hex digest, got {key!r}")
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(_HEADER.pack(MAGIC, VERSION, code, pt.n_steps, pt.sys_dim, pt.dt, raw_key))
            f.write(np.asarray(pt.bond_dims, dtype="<u4").tobytes())
            for site in pt.q:
                f.write(np.ascontiguousarray(site, dtype=dtype).tobytes())
            truncation = pt.truncation or (0.0,) * pt.n_steps
            f.write(np.asarray(truncation, dtype="<f8").tobytes())
        os.replace(tmp_name, target)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    logger.info(f"Saved process tensor ({pt.n_steps} steps, d_max={pt.d_max}, {precision}) to {target}")
    return target


def load_pt(path: str | Path) -> ProcessTensor:
    """
    Read a snapshot written by save_pt.
    Raises:
        ArgumentError: Bad magic, unknown version or dtype, or a truncated file.
    """
    data = Path(path).read_bytes()
    _, _, code, n_steps, sys_dim, dt, _ = _read_header(data, path)
    if code not in _DTYPES:
        raise ArgumentError(f"{path}: unknown dtype code {code}")
    dtype = _DTYPES[code]

    offset = _HEADER.size
    bonds_end = offset + 4 * (n_steps + 1)
    if len(data) < bonds_end:
        raise ArgumentError(f"{path}: truncated bond table")
    bonds = np.frombuffer(data, dtype="<u4", count=n_steps + 1, offset=offset).astype(int)
    offset = bonds_end

    n2 = sys_dim * sys_dim
    sites = []
    for l in range(1, n_steps + 1):
        shape = (int(bonds[l]), int(bonds[l - 1]), n2, n2)
        count = int(np.prod(shape))
        if len(data) < offset + count * dtype.itemsize:
            raise ArgumentError(f"{path}: truncated payload at step {l}")
        site = np.frombuffer(data, dtype=dtype, count=count, offset=offset).reshape(shape)
        sites.append(site.astype(np.complex128))
        offset += count * dtype.itemsize

    if len(data) != offset + 8 * n_steps:
        raise ArgumentError(f"{path}: unexpected trailing size for truncation diagnostics")
    truncation = tuple(float(x) for x in np.frombuffer(data, dtype="<f8", count=n_steps, offset=offset))

    try:
        pt = ProcessTensor(
            n_steps=n_steps, sys_dim=sys_dim, dt=dt, q=tuple(sites), truncation=truncation
        )
    except ValueError as e:
        raise ArgumentError(f"{path}: inconsistent snapshot: {e}") from e
    logger.info(f"Loaded process tensor ({n_steps} steps, d_max={pt.d_max}) from {path}")
    return pt


def _read_header(data: bytes, path: str | Path) -> tuple[Any, ...]:
    if len(data) < _HEADER.size:
        raise ArgumentError(f"{path}: file too short for a process tensor header")
    header = _HEADER.unpack_from(data, 0)
    magic, version = header[0], header[1]
    if magic != MAGIC:
        raise ArgumentError(f"{path}: not a process tensor snapshot (magic {magic!r})")
    if version != VERSION:
        raise ArgumentError(f"{path}: unsupported snapshot version {version}")
    return header


def snapshot_key(path: str | Path) -> str | None:
    """Build key stored with a snapshot, None for an unkeyed one."""
    with Path(path).open("rb") as f:
        data = f.read(_HEADER.size)
    raw_key = _read_header(data, path)[-1]
    return None if raw_key == bytes(_KEY_BYTES) else raw_key.hex()
