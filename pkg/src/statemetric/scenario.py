"""Declarative scenario files (TOML) describing an instance, a seminorm and states.

Example::

    schema_version = 1
    seed = 0
    tolerance = 1e-6

    [instance]
    kind = "fuzzy_torus"
    q = 3

    [seminorm]
    kind = "length_lipschitz"

    [[states]]
    kind = "basis"
    index = 0

    [[states]]
    kind = "random"
    count = 2

Every table is checked against a fixed set of keys; anything else is rejected
with the offending key path and its line in the file.
"""
from __future__ import annotations

import re
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .algebra import Algebra, DensityState, basis_state, maximally_mixed, random_state
from .errors import ConstructionError, InputError, KernelError
from .groups import (FiniteGroup, LengthFunction, LieGenerators, UnitaryImplementedAction,
                     cyclic_group, product_group, symmetric_group, word_length)
from .instances import Instance, commutative, fuzzy_sphere, fuzzy_torus
from .seminorms import (DiracSeminorm, LengthLipschitzSeminorm, LieSeminorm, ScaledSeminorm, Seminorm,
                        dirac_data)

SCHEMA_VERSION = 1

TOP_KEYS = {"schema_version", "seed", "tolerance", "max_iterations", "instance", "seminorm", "states",
            "output", "suite", "name"}
INSTANCE_KEYS = {
    "fuzzy_torus": {"kind", "q", "length", "weights"},
    "fuzzy_sphere": {"kind", "n", "metric"},
    "commutative": {"kind", "group", "length"},
    "custom": {"kind", "group", "length", "implementers_real", "implementers_imag", "blocks",
               "generators_real", "generators_imag", "metric"},
}
GROUP_KEYS = {"cyclic": {"kind", "n"}, "product": {"kind", "factors"}, "symmetric": {"kind", "k"},
              "table": {"kind", "table"}}
LENGTH_KEYS = {"word": {"kind", "generators"}, "values": {"kind", "values"}}
SEMINORM_KEYS = {"length_lipschitz": {"kind"}, "holder": {"kind", "r"}, "lie": {"kind", "budget"},
                 "dirac": {"kind"}, "scaled": {"kind", "t", "inner", "r", "budget"}}
STATE_KEYS = {"basis": {"kind", "index", "name"}, "maximally_mixed": {"kind", "name"},
              "random": {"kind", "seed", "count", "name"},
              "density": {"kind", "real", "imag", "name"}}
OUTPUT_KEYS = {"json", "csv"}
SUITE_KEYS = {"run", "pairs"}


class ScenarioError(InputError):
    """Invalid scenario; ``key`` is the dotted key path and ``line`` its 1-based line (if known)."""

    def __init__(self, message: str, key: str = "", line: int | None = None):
        self.key = key
        self.line = line
        where = ""
        if key:
            where += f"key '{key}'"
        if line is not None:
            where += f"{' ' if where else ''}(line {line})"
        super().__init__(f"{where}: {message}" if where else message)


@dataclass
class Scenario:
    raw: dict
    instance: Instance
    seminorm: Seminorm
    states: list[DensityState]
    seed: int = 0
    tolerance: float = 1e-6
    max_iterations: int = 500
    outputs: dict = field(default_factory=dict)
    suite: dict = field(default_factory=dict)
    name: str = ""
    source: str = ""


# ---- line lookup -------------------------------------------------------------------

_HEADER = re.compile(r"^\s*(\[\[?)\s*([A-Za-z0-9_.\-\"' ]+?)\s*\]\]?\s*(#.*)?$")
_KEY = re.compile(r"^\s*([A-Za-z0-9_\-]+)\s*=")


def _line_of(text: str, path: str) -> int | None:
    """Best-effort line number of a dotted key path such as ``states[1].seed``."""
    arr = re.match(r"^([A-Za-z0-9_]+)\[(\d+)\]$", path)
    if arr:
        # the i-th [[name]] header
        count = -1
        for no, line in enumerate(text.splitlines(), 1):
            h = _HEADER.match(line)
            if h and h.group(1) == "[[" and h.group(2).strip() == arr.group(1):
                count += 1
                if count == int(arr.group(2)):
                    return no
        return None
    parts = path.split(".")
    key = parts[-1]
    table = ".".join(parts[:-1])
    m = re.match(r"^(.*)\[(\d+)\]$", table)
    table, index = (m.group(1), int(m.group(2))) if m else (table, None)
    current, seen = "", {}
    inline_parent = None
    for no, line in enumerate(text.splitlines(), 1):
        h = _HEADER.match(line)
        if h:
            current = h.group(2).strip()
            if h.group(1) == "[[":
                seen[current] = seen.get(current, -1) + 1
            continue
        k = _KEY.match(line)
        if not k:
            continue
        here_ok = current == table and (index is None or seen.get(current) == index)
        if here_ok and k.group(1) == key:
            return no
        if table and current == ".".join(table.split(".")[:-1]) and k.group(1) == table.split(".")[-1]:
            inline_parent = no
    return inline_parent


def _check_keys(text: str, data: dict, allowed: set, prefix: str):
    for k in data:
        if k not in allowed:
            path = f"{prefix}.{k}" if prefix else k
            raise ScenarioError(f"unknown key (allowed: {', '.join(sorted(allowed))})", path,
                                _line_of(text, path))


def _need(text, data, key, prefix, kind=None):
    path = f"{prefix}.{key}" if prefix else key
    if key not in data:
        raise ScenarioError("missing required key", path, _line_of(text, prefix + ".kind") if prefix else None)
    value = data[key]
    if kind is not None and (not isinstance(value, kind) or isinstance(value, bool)):
        raise ScenarioError(f"expected {getattr(kind, '__name__', kind)}", path, _line_of(text, path))
    return value


def _kind(text, data, table, prefix) -> str:
    kind = _need(text, data, "kind", prefix, str)
    if kind not in table:
        raise ScenarioError(f"unknown kind {kind!r} (allowed: {', '.join(sorted(table))})",
                            f"{prefix}.kind", _line_of(text, f"{prefix}.kind"))
    _check_keys(text, data, table[kind], prefix)
    return kind


@contextmanager
def _wrap(path: str, text: str):
    """Turn construction/input errors raised while building ``path`` into scenario errors."""
    try:
        yield
    except ScenarioError:
        raise
    except (ConstructionError, InputError, KernelError) as exc:
        raise ScenarioError(str(exc), path, _line_of(text, path)) from exc


# ---- builders ------------------------------------------------------------------------

def _matrix(value, path, text) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ScenarioError("expected a numeric array", path, _line_of(text, path)) from None
    return arr


def _group(text, data, prefix) -> FiniteGroup:
    if not isinstance(data, dict):
        raise ScenarioError("expected a table", prefix, _line_of(text, prefix))
    kind = _kind(text, data, GROUP_KEYS, prefix)
    with _wrap(prefix, text):
        if kind == "cyclic":
            return cyclic_group(_need(text, data, "n", prefix, int))
        if kind == "symmetric":
            return symmetric_group(_need(text, data, "k", prefix, int))
        if kind == "product":
            factors = _need(text, data, "factors", prefix, list)
            if not factors or not all(isinstance(f, int) and f >= 1 for f in factors):
                raise ScenarioError("factors must be positive integers", f"{prefix}.factors",
                                    _line_of(text, f"{prefix}.factors"))
            g = cyclic_group(factors[0])
            for f in factors[1:]:
                g = product_group(g, cyclic_group(f))
            return g
        table = _matrix(_need(text, data, "table", prefix, list), f"{prefix}.table", text)
        return FiniteGroup(table, name="table")


def _length(text, data, group, prefix) -> LengthFunction:
    if not isinstance(data, dict):
        raise ScenarioError("expected a table", prefix, _line_of(text, prefix))
    kind = _kind(text, data, LENGTH_KEYS, prefix)
    with _wrap(prefix, text):
        if kind == "word":
            gens = _need(text, data, "generators", prefix, list)
            return word_length(group, [int(x) for x in gens])
        return LengthFunction(group, _matrix(_need(text, data, "values", prefix, list),
                                             f"{prefix}.values", text))


def _complex(data, real_key, imag_key, prefix, text) -> np.ndarray:
    re_ = _matrix(_need(text, data, real_key, prefix, list), f"{prefix}.{real_key}", text)
    im = _matrix(data.get(imag_key, np.zeros_like(re_).tolist()), f"{prefix}.{imag_key}", text)
    if re_.shape != im.shape:
        raise ScenarioError("real and imaginary parts have different shapes", f"{prefix}.{imag_key}",
                            _line_of(text, f"{prefix}.{imag_key}"))
    return re_ + 1j * im


def _instance(text, data) -> Instance:
    prefix = "instance"
    if not isinstance(data, dict):
        raise ScenarioError("expected a table", prefix)
    kind = _kind(text, data, INSTANCE_KEYS, prefix)
    with _wrap(prefix, text):
        if kind == "fuzzy_torus":
            q = _need(text, data, "q", prefix, int)
            if q < 2:
                raise ScenarioError("q must be >= 2", "instance.q", _line_of(text, "instance.q"))
            length = data.get("length", "word")
            if length not in ("word", "torus"):
                raise ScenarioError("length must be 'word' or 'torus'", "instance.length",
                                    _line_of(text, "instance.length"))
            return fuzzy_torus(q, length, tuple(data.get("weights", (1.0, 1.0))))
        if kind == "fuzzy_sphere":
            n = _need(text, data, "n", prefix, int)
            if n < 2:
                raise ScenarioError("n must be >= 2", "instance.n", _line_of(text, "instance.n"))
            metric = data.get("metric")
            return fuzzy_sphere(n, None if metric is None else _matrix(metric, "instance.metric", text))
        group = _group(text, _need(text, data, "group", prefix), "instance.group")
        length = _length(text, _need(text, data, "length", prefix), group, "instance.length")
        if kind == "commutative":
            return commutative(group, length)
        # custom: explicit implementers and, optionally, Lie generators
        u = _complex(data, "implementers_real", "implementers_imag", prefix, text)
        if u.ndim != 3:
            raise ScenarioError("implementers must be a list of square matrices", "instance.implementers_real",
                                _line_of(text, "instance.implementers_real"))
        blocks = data.get("blocks", [u.shape[1]])
        algebra = Algebra(tuple(int(b) for b in blocks))
        action = UnitaryImplementedAction(group, algebra, u)
        lie = dd = None
        if "generators_real" in data:
            gens = _complex(data, "generators_real", "generators_imag", prefix, text)
            metric = data.get("metric")
            lie = LieGenerators(gens, None if metric is None else _matrix(metric, "instance.metric", text),
                                algebra)
            dd = dirac_data(lie)
        return Instance("custom", algebra, action=action, length=length, lie=lie, dirac=dd,
                        params={"order": group.order})


def _seminorm(text, data, instance: Instance) -> Seminorm:
    prefix = "seminorm"
    if not isinstance(data, dict):
        raise ScenarioError("expected a table", prefix)
    kind = _kind(text, data, SEMINORM_KEYS, prefix)
    with _wrap(prefix, text):
        if kind == "scaled":
            t = _need(text, data, "t", prefix, (int, float))
            inner = {k: v for k, v in data.items() if k not in ("t", "inner", "kind")}
            inner["kind"] = data.get("inner", "length_lipschitz")
            if inner["kind"] == "scaled":
                raise ScenarioError("nested scaling is not supported", "seminorm.inner",
                                    _line_of(text, "seminorm.inner"))
            if inner["kind"] not in SEMINORM_KEYS:
                raise ScenarioError(f"unknown kind {inner['kind']!r}", "seminorm.inner",
                                    _line_of(text, "seminorm.inner"))
            return ScaledSeminorm(_build_seminorm(inner, instance, text), float(t))
        return _build_seminorm(data, instance, text)


def _build_seminorm(data, instance, text) -> Seminorm:
    kind = data["kind"]
    if kind in ("length_lipschitz", "holder"):
        if instance.action is None:
            raise ScenarioError(f"{kind} needs a group action", "seminorm.kind", _line_of(text, "seminorm.kind"))
        r = float(data.get("r", 1.0)) if kind == "holder" else 1.0
        if kind == "holder" and "r" not in data:
            raise ScenarioError("missing required key", "seminorm.r", _line_of(text, "seminorm.kind"))
        return LengthLipschitzSeminorm(instance.action, instance.length, r=r, warn=False)
    if instance.lie is None:
        raise ScenarioError(f"{kind} needs Lie generators", "seminorm.kind", _line_of(text, "seminorm.kind"))
    if kind == "lie":
        return LieSeminorm(instance.lie, budget=data.get("budget"))
    return DiracSeminorm(instance.dirac)


def _states(text, data, instance: Instance, seed: int) -> list[DensityState]:
    if not isinstance(data, list) or not data:
        raise ScenarioError("expected a non-empty array of tables [[states]]", "states",
                            _line_of(text, "states"))
    n = instance.dim
    out = []
    for i, spec in enumerate(data):
        prefix = f"states[{i}]"
        if not isinstance(spec, dict):
            raise ScenarioError("expected a table", prefix)
        kind = _kind(text, spec, STATE_KEYS, prefix)
        name = spec.get("name")
        with _wrap(prefix, text):
            if kind == "basis":
                idx = _need(text, spec, "index", prefix, int)
                if not 0 <= idx < n:
                    raise ScenarioError(f"index must lie in [0, {n})", f"{prefix}.index",
                                        _line_of(text, f"{prefix}.index"))
                out.append(_named(basis_state(n, idx), name or f"basis{idx}"))
            elif kind == "maximally_mixed":
                out.append(_named(maximally_mixed(n), name or "mixed"))
            elif kind == "random":
                count = spec.get("count", 1)
                s = spec.get("seed", seed)
                if not isinstance(count, int) or count < 1:
                    raise ScenarioError("count must be a positive integer", f"{prefix}.count",
                                        _line_of(text, f"{prefix}.count"))
                if not isinstance(s, int) or s < 0:
                    raise ScenarioError("seed must be a nonnegative integer", f"{prefix}.seed",
                                        _line_of(text, f"{prefix}.seed"))
                base = name or f"random{i}"
                for j in range(count):
                    out.append(_named(random_state(n, [s, i, j], instance.algebra), f"{base}_{j}"))
            else:
                rho = _complex(spec, "real", "imag", prefix, text)
                if rho.shape != (n, n):
                    raise ScenarioError(f"density matrix must be {n} x {n}", f"{prefix}.real",
                                        _line_of(text, f"{prefix}.real"))
                if not instance.algebra.contains(rho):
                    raise ScenarioError("density matrix is not in the algebra", f"{prefix}.real",
                                        _line_of(text, f"{prefix}.real"))
                out.append(DensityState(rho, name or f"density{i}"))
    names = [s.name for s in out]
    if len(set(names)) != len(names):
        raise ScenarioError("state names must be unique", "states", _line_of(text, "states"))
    return out


def _named(state: DensityState, name: str) -> DensityState:
    return DensityState(state.rho, name)


def parse_scenario(text: str, source: str = "", overrides: dict | None = None) -> Scenario:
    """Parse and validate scenario text; ``overrides`` replace top-level keys after parsing."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ScenarioError(f"malformed TOML: {exc}", "", int(m.group(1)) if m else None) from None
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    _check_keys(text, data, TOP_KEYS, "")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported schema_version {version!r}", "schema_version",
                            _line_of(text, "schema_version"))
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ScenarioError("seed must be a nonnegative integer", "seed", _line_of(text, "seed"))
    tol = data.get("tolerance", 1e-6)
    if isinstance(tol, bool) or not isinstance(tol, (int, float)) or not tol > 0:
        raise ScenarioError("tolerance must be a positive number", "tolerance", _line_of(text, "tolerance"))
    iters = data.get("max_iterations", 500)
    if isinstance(iters, bool) or not isinstance(iters, int) or iters < 1:
        raise ScenarioError("max_iterations must be a positive integer", "max_iterations",
                            _line_of(text, "max_iterations"))
    instance = _instance(text, _need(text, data, "instance", ""))
    seminorm = _seminorm(text, data.get("seminorm", {"kind": _default_seminorm(instance)}), instance)
    states = _states(text, _need(text, data, "states", ""), instance, seed)
    outputs = data.get("output", {})
    if not isinstance(outputs, dict):
        raise ScenarioError("expected a table", "output", _line_of(text, "output"))
    _check_keys(text, outputs, OUTPUT_KEYS, "output")
    suite = data.get("suite", {})
    if not isinstance(suite, dict):
        raise ScenarioError("expected a table", "suite", _line_of(text, "suite"))
    _check_keys(text, suite, SUITE_KEYS, "suite")
    return Scenario(data, instance, seminorm, states, seed, float(tol), iters, dict(outputs), dict(suite),
                    str(data.get("name", "")), source)


def _default_seminorm(instance: Instance) -> str:
    return "length_lipschitz" if instance.action is not None else "dirac"


def load_scenario(path, overrides: dict | None = None) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc}") from None
    return parse_scenario(text, str(path), overrides)
