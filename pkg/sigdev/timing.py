"""Time utilities."""

import time
from datetime import UTC, datetime


def now() -> datetime:
    return datetime.now(UTC)


def now_iso() -> str:
    return now().isoformat()


class Stopwatch:
    """Monotonic wall-clock timer; ``elapsed`` keeps counting until ``stop``."""

    def __init__(self) -> None:
        self._start = time.perf_counter()
        self._stop: float | None = None

    def stop(self) -> float:
        self._stop = time.perf_counter()
        return self.elapsed

    @property
    def elapsed(self) -> float:
        end = self._stop if self._stop is not None else time.perf_counter()
        return end - self._start


def fmt_elapsed(secs: float) -> str:
    if secs < 0:
        return "?"
    if secs < 1:
        return f"{secs * 1000:.0f}ms"
    if secs < 60:
        return f"{secs:.2f}s"
    if secs < 3600:
        return f"{int(secs) // 60}m {int(secs) % 60}s"
    return f"{int(secs) // 3600}h {(int(secs) % 3600) // 60}m"
