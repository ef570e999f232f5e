"""Tests for sigdev.timing."""

from datetime import UTC, datetime
from unittest.mock import patch

from sigdev.timing import Stopwatch, fmt_elapsed, now, now_iso


class TestNow:
    def test_returns_utc(self) -> None:
        assert now().tzinfo is UTC

    def test_iso_parseable(self) -> None:
        assert datetime.fromisoformat(now_iso()).tzinfo is not None


class TestStopwatch:
    @patch("sigdev.timing.time.perf_counter")
    def test_stop_freezes_elapsed(self, mock_clock: object) -> None:
        mock_clock.side_effect = [10.0, 12.5, 99.0]  # type: ignore[union-attr]
        sw = Stopwatch()
        assert sw.stop() == 2.5
        assert sw.elapsed == 2.5

    @patch("sigdev.timing.time.perf_counter")
    def test_running(self, mock_clock: object) -> None:
        mock_clock.side_effect = [1.0, 1.25, 2.0]  # type: ignore[union-attr]
        sw = Stopwatch()
        assert sw.elapsed == 0.25
        assert sw.elapsed == 1.0


class TestFmtElapsed:
    def test_negative(self) -> None:
        assert fmt_elapsed(-1.0) == "?"

    def test_milliseconds(self) -> None:
        assert fmt_elapsed(0.042) == "42ms"

    def test_seconds(self) -> None:
        assert fmt_elapsed(3.14159) == "3.14s"

    def test_minutes(self) -> None:
        assert fmt_elapsed(125.0) == "2m 5s"

    def test_hours(self) -> None:
        assert fmt_elapsed(3 * 3600 + 15 * 60 + 7) == "3h 15m"
