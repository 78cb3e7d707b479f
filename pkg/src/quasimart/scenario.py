"""Scenario files: a filtered space, named processes and optional named
subfiltrations, stored as JSON with rationals written as strings.

    {
      "outcomes": ["a", "b"],
      "prob": ["1/2", "1/2"],
      "indices": ["1", "2"],
      "filtration": [[["a", "b"]], [["a"], ["b"]]],
      "processes": {"X": [["1", "1"], ["2", "0"]]},
      "subfiltrations": {"G": [[["a", "b"]], [["a", "b"]]]}
    }
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .errors import QuasimartError, SpaceError
from .process import AdaptedProcess
from .rational import format_rational, parse_rational
from .space import FilteredSpace


class ScenarioError(QuasimartError, ValueError):
    """The scenario file could not be parsed."""


@dataclass(frozen=True)
class Scenario:
    space: FilteredSpace
    processes: dict = field(default_factory=dict)
    subfiltrations: dict = field(default_factory=dict)

    def process(self, name):
        try:
            return self.processes[name]
        except KeyError:
            raise ScenarioError(
                f"unknown process {name!r}; available: {sorted(self.processes)}"
            ) from None

    def subfiltration(self, name):
        try:
            return self.subfiltrations[name]
        except KeyError:
            raise ScenarioError(
                f"unknown subfiltration {name!r}; available: {sorted(self.subfiltrations)}"
            ) from None


def _expect(obj, kind, where):
    if not isinstance(obj, kind):
        raise ScenarioError(f"{where}: expected {kind.__name__}, got {type(obj).__name__}")
    return obj


def _strings(obj, where):
    return [_expect(s, str, f"{where}[{i}]") for i, s in enumerate(_expect(obj, list, where))]


def _rationals(obj, where):
    out = []
    for i, s in enumerate(_expect(obj, list, where)):
        try:
            out.append(parse_rational(s))
        except ValueError as exc:
            raise ScenarioError(f"{where}[{i}]: {exc}") from None
    return out


def _filtration(obj, where):
    parts = []
    for t, part in enumerate(_expect(obj, list, where)):
        parts.append(
            [_strings(block, f"{where}[{t}][{k}]") for k, block in enumerate(_expect(part, list, f"{where}[{t}]"))]
        )
    return parts


def parse_scenario(data):
    """Build a validated :class:`Scenario` from decoded JSON.

    Raises :class:`ScenarioError` on malformed fields and
    :class:`~quasimart.errors.SpaceError` /
    :class:`~quasimart.errors.NotAdaptedError` on invariant violations.
    """
    _expect(data, dict, "scenario")
    for key in ("outcomes", "prob", "indices", "filtration"):
        if key not in data:
            raise ScenarioError(f"missing field {key!r}")
    outcomes = _strings(data["outcomes"], "outcomes")
    prob = _rationals(data["prob"], "prob")
    indices = _strings(data["indices"], "indices")
    space = FilteredSpace(outcomes, prob, indices, _filtration(data["filtration"], "filtration"))

    processes = {}
    for name, rows in _expect(data.get("processes", {}), dict, "processes").items():
        where = f"processes.{name}"
        values = [_rationals(r, f"{where}[{t}]") for t, r in enumerate(_expect(rows, list, where))]
        processes[name] = AdaptedProcess(space, values)

    subs = {}
    for name, filt in _expect(data.get("subfiltrations", {}), dict, "subfiltrations").items():
        try:
            sub = FilteredSpace(outcomes, prob, indices, _filtration(filt, f"subfiltrations.{name}"))
        except SpaceError as exc:
            raise SpaceError([f"subfiltration {name!r}: {v}" for v in exc.violations]) from None
        if not sub.is_coarsening_of(space):
            raise SpaceError([f"subfiltration {name!r} is not coarser than the filtration"])
        subs[name] = sub
    return Scenario(space, processes, subs)


def load_scenario(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_scenario(data)


def dump_space(space):
    return {
        "outcomes": list(space.outcomes),
        "prob": [format_rational(p) for p in space.prob],
        "indices": list(space.indices),
        "filtration": [[list(b) for b in part] for part in space.filtration],
    }


def dump_process(X):
    return [[format_rational(v) for v in row] for row in X.values]


def dump_scenario(scenario):
    """Canonical JSON-ready form; processes and subfiltrations sorted by name."""
    out = dump_space(scenario.space)
    out["processes"] = {n: dump_process(scenario.processes[n]) for n in sorted(scenario.processes)}
    if scenario.subfiltrations:
        out["subfiltrations"] = {
            n: dump_space(scenario.subfiltrations[n])["filtration"]
            for n in sorted(scenario.subfiltrations)
        }
    return out


def scenario_text(scenario):
    return json.dumps(dump_scenario(scenario), indent=2, ensure_ascii=False) + "\n"


def digest(scenario):
    """SHA-256 of the compact canonical serialization."""
    blob = json.dumps(dump_scenario(scenario), separators=(",", ":"), sort_keys=True)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def save_scenario(scenario, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(scenario_text(scenario))
