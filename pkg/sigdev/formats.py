"""Path files (CSV, JSON Lines) and result tables (CSV, JSON)."""

import csv
import io
import json
import sys
from collections.abc import Sequence
from pathlib import Path as FilePath
from typing import Any

import numpy as np

from sigdev.errors import DomainError
from sigdev.paths import Path


def _fmt(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float | np.floating):
        return repr(float(value))
    return str(value)


def _read_text(file: FilePath) -> str:
    try:
        return file.read_text(encoding="utf-8")
    except OSError as e:
        raise DomainError(f"cannot read {file}: {e.strerror or e}") from None


def write_text(file: FilePath, text: str) -> None:
    try:
        file.write_text(text, encoding="utf-8")
    except OSError as e:
        raise DomainError(f"cannot write {file}: {e.strerror or e}") from None


def read_path_csv(file: FilePath) -> Path:
    """Header ``t,x1,...,xd`` then one sample per row."""
    rows = list(csv.reader(io.StringIO(_read_text(file))))
    if not rows:
        raise DomainError(f"{file}: empty file")
    header = [h.strip() for h in rows[0]]
    expected = ["t"] + [f"x{j}" for j in range(1, len(header))]
    if len(header) < 2 or header != expected:
        raise DomainError(f"{file}: header must be t,x1,...,xd, got {','.join(header)}")
    body = [r for r in rows[1:] if any(c.strip() for c in r)]
    if not body:
        raise DomainError(f"{file}: no samples")
    try:
        table = np.array([[float(c) for c in r] for r in body])
    except ValueError as e:
        raise DomainError(f"{file}: {e}") from None
    if table.ndim != 2 or table.shape[1] != len(header):
        raise DomainError(f"{file}: every row needs {len(header)} columns")
    try:
        return Path(table[:, 0], table[:, 1:])
    except DomainError as e:
        raise DomainError(f"{file}: {e}") from None


def path_csv_text(path: Path) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t"] + [f"x{j}" for j in range(1, path.dim + 1)])
    for t, x in zip(path.times, path.points, strict=True):
        w.writerow([_fmt(t)] + [_fmt(v) for v in x])
    return buf.getvalue()


def write_path_csv(file: FilePath, path: Path) -> None:
    write_text(file, path_csv_text(path))


def read_paths_jsonl(file: FilePath) -> list[tuple[str, Path]]:
    """One ``{"id", "t", "x"}`` object per line."""
    out: list[tuple[str, Path]] = []
    for lineno, line in enumerate(_read_text(file).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            out.append((str(obj["id"]), Path(np.array(obj["t"], dtype=float), np.array(obj["x"], dtype=float))))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise DomainError(f"{file}:{lineno}: malformed path record ({e})") from None
    if not out:
        raise DomainError(f"{file}: no paths")
    return out


def paths_jsonl_text(paths: Sequence[tuple[str, Path]]) -> str:
    lines = [
        json.dumps({"id": pid, "t": p.times.tolist(), "x": p.points.tolist()}, separators=(",", ":"))
        for pid, p in paths
    ]
    return "".join(line + "\n" for line in lines)


def write_paths_jsonl(file: FilePath, paths: Sequence[tuple[str, Path]]) -> None:
    write_text(file, paths_jsonl_text(paths))


def table_text(rows: Sequence[dict[str, Any]], fmt: str) -> str:
    """CSV with the first row's keys as header, or a JSON array of objects."""
    if fmt == "json":
        return json.dumps(list(rows), indent=2, default=_fmt) + "\n"
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(rows[0].keys())
    for row in rows:
        w.writerow([_fmt(v) for v in row.values()])
    return buf.getvalue()


def emit(rows: Sequence[dict[str, Any]], fmt: str, out: FilePath | None = None) -> None:
    """Write a result table to ``out``, or to stdout."""
    text = table_text(rows, fmt)
    if out is None:
        sys.stdout.write(text)
    else:
        write_text(out, text)
