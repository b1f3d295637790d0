"""Running scenarios and writing reports (JSON, CSV)."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError
from .metric import MetricContext, _solve, diameter_bound
from .scenario import SCHEMA_VERSION, Scenario, load_scenario, parse_scenario
from .seminorms import LengthLipschitzSeminorm
from .suite import verify_suite

CSV_DIGITS = 12


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if x is None or isinstance(x, (int, str)):
        return x
    return str(x)


@dataclass
class Report:
    data: dict

    @property
    def passed(self) -> bool:
        return bool(self.data["passed"])

    @property
    def state_names(self) -> list[str]:
        return list(self.data["states"])

    def matrix(self, which: str = "value") -> np.ndarray:
        names = self.state_names
        idx = {s: i for i, s in enumerate(names)}
        out = np.zeros((len(names), len(names)))
        for rec in self.data["distances"]:
            i, j = idx[rec["mu"]], idx[rec["nu"]]
            out[i, j] = out[j, i] = rec[which]
        return out

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2, allow_nan=False) + "\n"

    def to_csv(self, which: str = "value") -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.state_names)
        for row in self.matrix(which):
            w.writerow([format(v, f".{CSV_DIGITS}g") for v in row])
        return buf.getvalue()


def run_scenario(source, *, seed: int | None = None, tolerance: float | None = None,
                 max_iterations: int | None = None, mode: str = "matrix", pair=(0, 1),
                 suite: bool | None = None) -> Report:
    """Build the scenario's instance and compute the requested distances and checks.

    ``source`` is a path, scenario text, or a parsed :class:`Scenario`. ``mode`` is
    ``"matrix"`` (all pairs), ``"distance"`` (the states ``pair``) or ``"verify"``
    (suite only). Keyword overrides replace the scenario's own values.
    """
    overrides = {"seed": seed, "tolerance": tolerance, "max_iterations": max_iterations}
    if isinstance(source, Scenario):
        sc = source
    elif isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
        sc = load_scenario(source, overrides)
    else:
        sc = parse_scenario(source, "", overrides)
    if mode not in ("matrix", "distance", "verify"):
        raise InputError(f"unknown mode {mode!r}")

    states = sc.states
    pairs: list[tuple[int, int]] = []
    if mode == "distance":
        i, j = (int(p) for p in pair)
        if not (0 <= i < len(states) and 0 <= j < len(states)) or i == j:
            raise InputError(f"pair {pair} must name two distinct states among {len(states)}")
        states = [states[i], states[j]]
        pairs = [(0, 1)]
    elif mode == "matrix":
        pairs = [(i, j) for i in range(len(states)) for j in range(i + 1, len(states))]

    records = []
    passed = True
    if pairs:
        ctx = MetricContext(sc.seminorm)
        for i, j in pairs:
            r = _solve(ctx, states[i], states[j], sc.tolerance, sc.max_iterations)
            passed &= r.converged
            records.append({"i": i, "j": j, "mu": states[i].name, "nu": states[j].name,
                            "value": r.value, **r.to_dict()})

    run_suite = suite if suite is not None else (mode == "verify" or bool(sc.suite.get("run", False)))
    suite_out = None
    if run_suite:
        res = verify_suite(sc.instance, seed=sc.seed, pairs=int(sc.suite.get("pairs", 3)),
                           tolerance=sc.tolerance)
        suite_out = res.to_dict()
        passed &= res.passed

    bound = None
    if isinstance(sc.seminorm, LengthLipschitzSeminorm) and sc.seminorm.r == 1.0:
        bound = diameter_bound(sc.instance.action, sc.instance.length)

    data = {
        "schema_version": SCHEMA_VERSION,
        "mode": mode,
        "scenario": sc.raw,
        "seeds": {"seed": sc.seed},
        "instance": {"kind": sc.instance.kind, "dim": sc.instance.dim, "params": sc.instance.params},
        "seminorm": sc.seminorm.describe() | {"exact": bool(sc.seminorm.exact)},
        "tolerance": sc.tolerance,
        "max_iterations": sc.max_iterations,
        "states": [s.name for s in states],
        "distances": records,
        "diameter_bound": bound,
        "suite": suite_out,
        "passed": bool(passed),
    }
    return Report(_jsonable(data))


def export(report: Report, fmt: str, path=None) -> str:
    """Render ``report`` as ``json`` or ``csv``; write it to ``path`` when given."""
    if fmt == "json":
        text = report.to_json()
    elif fmt == "csv":
        text = report.to_csv()
    else:
        raise InputError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


def load_report(path) -> Report:
    return Report(json.loads(Path(path).read_text()))
