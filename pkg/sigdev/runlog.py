"""JSON Lines run log, one record per CLI command when a log path is configured."""

import json
from pathlib import Path
from typing import Any

from sigdev.timing import now_iso


def log_run(
    log_path: Path | None,
    command: str,
    params: dict[str, Any],
    status: int,
    result: dict[str, Any] | None = None,
) -> None:
    if log_path is None:
        return
    try:
        entry = {"ts": now_iso(), "command": command, "params": params, "status": status, "result": result or {}}
        with open(log_path, "a", encoding="utf-8") as f:
            f.write(json.dumps(entry, default=str) + "\n")
    except Exception:
        pass
