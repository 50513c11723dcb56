"""CSV / JSON / PGM writers with all-or-nothing output directories."""

from __future__ import annotations

import csv
import io
import json
import os
import shutil
import tempfile
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from .pulses import PulseSchedule
from .wigner import WignerField


def fmt(x) -> str:
    """6 significant digits; empty cell for missing values."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.6g}"
    return str(x)


def rows_to_csv(rows: list[dict], columns: list[str] | None = None) -> str:
    if columns is None:
        columns = list(rows[0]) if rows else []
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def rows_to_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=1) + "\n"


def field_csv(fld: WignerField) -> str:
    buf = io.StringIO()
    buf.write("re,im,w\n")
    for i, y in enumerate(fld.im):
        for j, x in enumerate(fld.re):
            buf.write(f"{fmt(x)},{fmt(y)},{fmt(fld.values[i, j])}\n")
    return buf.getvalue()


def field_pgm(fld: WignerField) -> bytes:
    """Binary PGM, [-2/pi, 2/pi] mapped linearly to [0, 255], top row = max im."""
    lim = 2 / np.pi
    v = np.clip((fld.values + lim) / (2 * lim), 0.0, 1.0)
    img = np.rint(v[::-1] * 255).astype(np.uint8)
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + img.tobytes()


def read_pgm(data: bytes) -> np.ndarray:
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)


def schedule_rows(schedule: PulseSchedule) -> list[dict]:
    return [{"index": p.index, "kind": p.kind, "phase_rad": p.phase, "duration_s": p.duration}
            for p in schedule]


SCHEDULE_COLUMNS = ["index", "kind", "phase_rad", "duration_s"]


def schedule_csv(schedule: PulseSchedule) -> str:
    return rows_to_csv(schedule_rows(schedule), SCHEDULE_COLUMNS)


def parse_schedule_csv(text: str) -> list[dict]:
    out = []
    for r in csv.DictReader(io.StringIO(text)):
        out.append({"index": int(r["index"]), "kind": r["kind"],
                    "phase_rad": float(r["phase_rad"]), "duration_s": float(r["duration_s"])})
    return out


class OutputSet:
    """Files staged in a scratch directory and moved into place together."""

    def __init__(self, staging: Path):
        self._staging = staging
        self.names: list[str] = []

    def write(self, name: str, data: str | bytes):
        mode = "wb" if isinstance(data, bytes) else "w"
        with open(self._staging / name, mode) as fh:
            fh.write(data)
        self.names.append(name)


@contextmanager
def atomic_outputs(output_dir: str | os.PathLike):
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise PermissionError(f"output directory {out} is not writable")
    staging = Path(tempfile.mkdtemp(prefix=".kerr-forge-", dir=out))
    try:
        files = OutputSet(staging)
        yield files
        for name in files.names:
            os.replace(staging / name, out / name)
    finally:
        shutil.rmtree(staging, ignore_errors=True)
