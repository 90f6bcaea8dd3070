"""Run configuration: TOML files and their fully-resolved echo.

Grammar (all tables optional except ``systems``)::

    seed = 0                  # run seed, used by noise faults without a seed
    rate_hz = 10.0            # common assessment rate
    out_dir = "out"           # relative to the config file; --out overrides

    [assessor]
    st_length = 10
    trust_discount_p = 0.99
    gate_threshold = 0.5
    event_threshold = 0.5

    [domain.x]                # same keys for [domain.y]
    min = -5.0
    max = 5.0
    bins = 10
    base_rate = [...]         # optional, defaults to uniform

    [synth]                   # ground truth for systems without a path
    duration = 300.0
    shape = "straight"        # straight | arc | sine
    speed = 14.0
    heading_deg = 45.0

    [[systems]]
    id = "GNSS"
    kind = "absolute"         # absolute | relative
    path = "gnss.csv"         # optional when [synth] is present

    [[systems.faults]]        # applied in order
    kind = "jump"             # freeze | jump | drift | noise
    t_from = 240.0
    dx = 20.0

A ``manifest.json`` written by a run is also accepted: its ``config`` entry
is the resolved echo of the configuration that produced it.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import tomli

from .assessor import AssessorParams
from .errors import ConfigError
from .faults import FaultSpec
from .histogram import DomainConfig, HistogramSpec
from .synth import SynthSpec
from .trajectory import KINDS


@dataclass(frozen=True)
class SystemConfig:
    id: str
    kind: str = "absolute"
    path: Path | None = None
    faults: tuple[FaultSpec, ...] = ()


@dataclass
class RunConfig:
    systems: list[SystemConfig]
    domain: DomainConfig = field(default_factory=DomainConfig)
    params: AssessorParams = field(default_factory=AssessorParams)
    rate_hz: float = 10.0
    seed: int = 0
    out_dir: Path | None = None
    synth: SynthSpec | None = None

    def __post_init__(self):
        if len(self.systems) < 2:
            raise ConfigError("at least 2 systems are required")
        ids = [s.id for s in self.systems]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"system ids must be unique: {ids}")
        if not (math.isfinite(self.rate_hz) and self.rate_hz > 0):
            raise ConfigError(f"rate_hz must be positive, got {self.rate_hz}")
        for s in self.systems:
            if s.path is None and self.synth is None:
                raise ConfigError(f"systems.{s.id}: no path and no [synth] table")

    @property
    def system_ids(self) -> list[str]:
        return [s.id for s in self.systems]

    def to_dict(self) -> dict:
        """Echo with every default filled in; round-trips through :func:`parse_config`."""

        def spec(h: HistogramSpec, a):
            return {"min": h.min, "max": h.max, "bins": h.bins, "base_rate": a.tolist()}

        out = {
            "seed": self.seed,
            "rate_hz": self.rate_hz,
            "assessor": asdict(self.params),
            "domain": {
                "x": spec(self.domain.x_spec, self.domain.base_rate_x),
                "y": spec(self.domain.y_spec, self.domain.base_rate_y),
            },
            "systems": [],
        }
        if self.out_dir is not None:
            out["out_dir"] = str(self.out_dir)
        if self.synth is not None:
            out["synth"] = self.synth.to_dict()
        for s in self.systems:
            entry = {"id": s.id, "kind": s.kind}
            if s.path is not None:
                entry["path"] = str(s.path)
            entry["faults"] = [_fault_dict(f) for f in s.faults]
            out["systems"].append(entry)
        return out


def _fault_dict(f: FaultSpec) -> dict:
    d = asdict(f)
    if math.isinf(d["t_to"]):
        del d["t_to"]
    if d["seed"] is None:
        del d["seed"]
    return d


def _take(table: dict, cls, where: str, **extra):
    """Build dataclass ``cls`` from ``table``, rejecting unknown keys."""
    names = {f.name for f in fields(cls)}
    unknown = set(table) - names
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    try:
        return cls(**{**table, **extra})
    except ConfigError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _histogram(table: dict, where: str):
    table = dict(table)
    base_rate = table.pop("base_rate", None)
    return _take(table, HistogramSpec, where), base_rate


def parse_config(data: dict, base_dir: Path | None = None) -> RunConfig:
    base_dir = Path(".") if base_dir is None else Path(base_dir)
    data = dict(data)
    known = {"seed", "rate_hz", "out_dir", "assessor", "domain", "synth", "systems"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown top-level key(s) {sorted(unknown)}")

    params = _take(data.get("assessor", {}), AssessorParams, "assessor")

    domain_tbl = dict(data.get("domain", {}))
    unknown = set(domain_tbl) - {"x", "y"}
    if unknown:
        raise ConfigError(f"domain: unknown key(s) {sorted(unknown)}")
    x_spec, a_x = _histogram(domain_tbl.get("x", {}), "domain.x")
    y_spec, a_y = _histogram(domain_tbl.get("y", {}), "domain.y")
    try:
        domain = DomainConfig(x_spec, y_spec, a_x, a_y)
    except ConfigError as exc:
        raise ConfigError(f"domain: {exc}") from None

    rate_hz = float(data.get("rate_hz", 10.0))
    synth = None
    if "synth" in data:
        synth_tbl = dict(data["synth"])
        synth_tbl.setdefault("rate_hz", rate_hz)
        synth = _take(synth_tbl, SynthSpec, "synth")

    systems = []
    raw_systems = data.get("systems")
    if not isinstance(raw_systems, list):
        raise ConfigError("systems: expected an array of tables ([[systems]])")
    for i, entry in enumerate(raw_systems):
        entry = dict(entry)
        where = f"systems[{i}]"
        if "id" not in entry:
            raise ConfigError(f"{where}: missing id")
        sid = str(entry.pop("id"))
        where = f"systems.{sid}"
        kind = entry.pop("kind", "absolute")
        if kind not in KINDS:
            raise ConfigError(f"{where}.kind: expected one of {KINDS}, got {kind!r}")
        path = entry.pop("path", None)
        if path is not None:
            path = Path(path)
            if not path.is_absolute():
                path = (base_dir / path).resolve()
        faults = []
        for j, ftbl in enumerate(entry.pop("faults", [])):
            faults.append(_take(dict(ftbl), FaultSpec, f"{where}.faults[{j}]"))
        if entry:
            raise ConfigError(f"{where}: unknown key(s) {sorted(entry)}")
        systems.append(SystemConfig(sid, kind, path, tuple(faults)))

    out_dir = data.get("out_dir")
    if out_dir is not None:
        out_dir = Path(out_dir)
        if not out_dir.is_absolute():
            out_dir = (base_dir / out_dir).resolve()

    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    return RunConfig(systems, domain, params, rate_hz, seed, out_dir, synth)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
    try:
        if path.suffix == ".json":
            data = json.loads(raw.decode("utf-8"))
            data = data.get("config", data)
        else:
            data = tomli.loads(raw.decode("utf-8"))
    except (tomli.TOMLDecodeError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    try:
        return parse_config(data, path.parent)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
