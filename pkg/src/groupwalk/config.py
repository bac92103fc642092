"""Declarative analysis configs (JSON).

Layout (see ``docs/config.md``)::

    {
      "group": {"preset": "cyclic(3)"},            # or cayley_file / cayley / permutations
      "distribution": [[1, "1/2"], [2, "1/2"]],    # (element label or index, probability)
      "options": {"n_max": 200, "seed": 0, ...}
    }

or, for compact matrix groups, ``"matrix_measure": {...}`` in place of
``group`` and ``distribution``.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError, GroupWalkError, InvalidDistribution, InvalidGroup, OrderCapExceeded
from .group import (
    DEFAULT_LATTICE_CAP,
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    build_from_cayley,
    build_from_permutations,
    parse_preset,
    read_cayley_file,
)
from .matrix_walk import MatrixMeasure
from .measure import Distribution
from .spectral import DEFAULT_EIG_CAP

__all__ = ["Options", "AnalysisConfig", "load_config", "parse_config"]


@dataclass(frozen=True)
class Options:
    n_max: int = 200
    tol: float = 1e-9
    atom_threshold: float = 0.0
    order_cap: int = DEFAULT_ORDER_CAP
    lattice_cap: int = DEFAULT_LATTICE_CAP
    eig_cap: int = DEFAULT_EIG_CAP
    seed: int = 0
    backend: str = "float"
    trace_out: str | None = None
    steps: int = 10
    walk_length: int = 1
    samples: int = 10000
    tensor_degree: int = 2
    orbit_cap: int = 1024
    orbit_tol: float = 1e-8
    window: int = 20


_INT_OPTIONS = {"n_max", "order_cap", "lattice_cap", "eig_cap", "steps", "walk_length",
                "samples", "tensor_degree", "orbit_cap", "window"}
_FLOAT_OPTIONS = {"tol", "atom_threshold", "orbit_tol"}


@dataclass(frozen=True, eq=False)
class AnalysisConfig:
    raw: dict
    options: Options
    group: FiniteGroup | None = None
    distribution: Distribution | None = None
    measure: MatrixMeasure | None = None
    base_dir: Path = Path(".")

    @property
    def exact(self) -> bool:
        return self.options.backend == "rational"


def _parse_options(raw) -> Options:
    if raw is None:
        return Options()
    if not isinstance(raw, dict):
        raise ConfigError("options: expected an object")
    known = {f.name for f in fields(Options)}
    values = {}
    for key, val in raw.items():
        where = f"options.{key}"
        if key not in known:
            raise ConfigError(f"{where}: unknown option")
        if key in _INT_OPTIONS:
            if isinstance(val, bool) or not isinstance(val, int) or val < 1:
                raise ConfigError(f"{where}: expected a positive integer, got {val!r}")
        elif key in _FLOAT_OPTIONS:
            if isinstance(val, bool) or not isinstance(val, (int, float)) or val < 0:
                raise ConfigError(f"{where}: expected a non-negative number, got {val!r}")
            val = float(val)
        elif key == "seed":
            if isinstance(val, bool) or not isinstance(val, int) or val < 0:
                raise ConfigError(f"{where}: expected a non-negative integer, got {val!r}")
        elif key == "backend":
            if val not in ("float", "rational"):
                raise ConfigError(f"{where}: expected 'float' or 'rational', got {val!r}")
        elif key == "trace_out":
            if val is not None and not isinstance(val, str):
                raise ConfigError(f"{where}: expected a path string")
        values[key] = val
    return Options(**values)


def _parse_group(raw, options: Options, base_dir: Path) -> FiniteGroup:
    if not isinstance(raw, dict):
        raise ConfigError("group: expected an object")
    sources = [k for k in ("preset", "cayley_file", "cayley", "permutations") if k in raw]
    if len(sources) != 1:
        raise ConfigError(f"group: expected exactly one of preset, cayley_file, cayley, permutations; got {sources}")
    src = sources[0]
    where = f"group.{src}"
    try:
        if src == "preset":
            if not isinstance(raw["preset"], str):
                raise ConfigError(f"{where}: expected a string such as 'cyclic(4)'")
            return parse_preset(raw["preset"], order_cap=options.order_cap)
        if src == "cayley_file":
            path = Path(raw["cayley_file"])
            if not path.is_absolute():
                path = base_dir / path
            try:
                return read_cayley_file(path)
            except OSError as exc:
                raise ConfigError(f"{where}: cannot read {path}: {exc.strerror}") from None
        if src == "cayley":
            return build_from_cayley(raw["cayley"], raw.get("labels"))
        gens = raw["permutations"]
        if not isinstance(gens, list):
            raise ConfigError(f"{where}: expected a list of generators")
        return build_from_permutations(gens, raw.get("degree"), order_cap=options.order_cap)
    except ConfigError:
        raise
    except (InvalidGroup, ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _parse_pairs(raw) -> list:
    if isinstance(raw, dict):
        raw = raw.get("pairs")
    if not isinstance(raw, list) or not raw:
        raise ConfigError("distribution: expected a non-empty list of [element, probability] pairs")
    pairs = []
    for i, item in enumerate(raw):
        if isinstance(item, dict) and {"element", "probability"} <= item.keys():
            pairs.append((item["element"], item["probability"]))
        elif isinstance(item, list) and len(item) == 2:
            pairs.append(tuple(item))
        else:
            raise ConfigError(f"distribution[{i}]: expected [element, probability]")
    return pairs


def parse_config(raw: dict, base_dir=".") -> AnalysisConfig:
    """Validate a config object and resolve its group and distribution."""
    if not isinstance(raw, dict):
        raise ConfigError("config: expected a JSON object at top level")
    unknown = set(raw) - {"group", "distribution", "matrix_measure", "options", "description"}
    if unknown:
        raise ConfigError(f"config: unknown top-level field(s) {sorted(unknown)}")
    base_dir = Path(base_dir)
    options = _parse_options(raw.get("options"))
    has_group, has_matrix = "group" in raw, "matrix_measure" in raw
    if has_group == has_matrix:
        raise ConfigError("config: expected exactly one of 'group' or 'matrix_measure'")
    if has_matrix:
        if "distribution" in raw:
            raise ConfigError("distribution: not allowed with matrix_measure (atoms carry the law)")
        try:
            measure = MatrixMeasure.from_dict(raw["matrix_measure"])
        except InvalidDistribution as exc:
            raise ConfigError(str(exc)) from exc
        return AnalysisConfig(raw, options, measure=measure, base_dir=base_dir)
    group = _parse_group(raw["group"], options, base_dir)
    if "distribution" not in raw:
        raise ConfigError("distribution: required with 'group'")
    pairs = _parse_pairs(raw["distribution"])
    try:
        dist = Distribution.from_pairs(group, pairs, exact=options.backend == "rational")
    except InvalidDistribution as exc:
        raise ConfigError(f"distribution: {exc}") from exc
    return AnalysisConfig(raw, options, group=group, distribution=dist, base_dir=base_dir)


def load_config(path, overrides: dict | None = None) -> AnalysisConfig:
    """Read a JSON config file, apply option overrides, and validate it.

    The returned ``raw`` dict is the effective config (overrides merged), so
    echoing it back reproduces the same analysis.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if overrides:
        raw = copy.deepcopy(raw)
        if not isinstance(raw, dict):
            raise ConfigError("config: expected a JSON object at top level")
        opts = raw.setdefault("options", {})
        if not isinstance(opts, dict):
            raise ConfigError("options: expected an object")
        opts.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return parse_config(raw, base_dir=path.parent)
    except (ConfigError, OrderCapExceeded):
        raise
    except GroupWalkError as exc:
        raise ConfigError(str(exc)) from exc
