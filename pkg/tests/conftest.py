"""Shared test configuration: report suite wall time against the budget."""

import time

BUDGET_SECONDS = 60.0


def pytest_configure(config):
    config._suite_clock_start = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    elapsed = time.perf_counter() - config._suite_clock_start
    terminalreporter.write_line(
        f"suite wall time: {elapsed:.1f}s (budget {BUDGET_SECONDS:.0f}s)"
    )
    if elapsed > BUDGET_SECONDS:
        terminalreporter.write_line(
            "WARNING: suite exceeded its wall-time budget", red=True
        )
