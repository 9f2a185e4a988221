"""JSON reports: fixed keys, integers as decimal strings, stable ordering."""

from __future__ import annotations

import json
import sys
import time
from contextlib import contextmanager

from .serial import jsonable

REPORT_KEYS = ("command", "inputs", "results", "passed", "witnesses", "timings")


class Timer:
    def __init__(self):
        self.sections = {}

    @contextmanager
    def section(self, name):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.sections[name] = round(time.perf_counter() - t0, 6)


def make_report(command: str, inputs: dict, results: dict, passed: bool,
                witnesses: list | None = None, timings: dict | None = None) -> dict:
    rep = {"command": command, "inputs": jsonable(inputs), "results": jsonable(results),
           "passed": bool(passed), "witnesses": jsonable(witnesses or [])}
    if timings is not None:
        rep["timings"] = timings
    return rep


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True)


def emit(report: dict, stream=None):
    """Write the whole report in one call."""
    out = stream or sys.stdout
    out.write(dumps(report) + "\n")
    out.flush()
