"""Scenario configuration: YAML parsing, validation, sweep expansion.

A scenario file mirrors the parameter dataclasses section by section. Unknown
keys anywhere are rejected (typo safety) and all violations are reported in
one aggregated error, not just the first.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable

import yaml

from .antenna import AntennaConfig
from .channel import ChannelParams
from .exceptions import ConfigError
from .mac import MacConfig
from .metrics import default_kappa_grid, default_theta_grid
from .mobility import KraussParams
from .road import RoadConfig

MOBILITY_MODELS = ("off", "trace", "redraw")


@dataclass(frozen=True)
class AntennaSettings:
    """Beam pattern inputs; the AntennaConfig itself is derived per sweep
    point since the sweep may change the beamwidth."""

    psi_deg: float = 45.0
    sidelobe_rel_db: float | None = 20.0  # None = idealized zero sidelobe

    def __post_init__(self):
        self.build()  # fail fast on a bad beamwidth

    def build(self, psi_deg: float | None = None) -> AntennaConfig:
        return AntennaConfig.from_beamwidth_deg(
            self.psi_deg if psi_deg is None else psi_deg, self.sidelobe_rel_db
        )


@dataclass(frozen=True)
class MobilitySettings:
    model: str = "trace"
    snapshot_spacing: float = 5.0
    krauss: KraussParams = field(default_factory=KraussParams)

    def __post_init__(self):
        errors = []
        if self.model not in MOBILITY_MODELS:
            errors.append(f"mobility model must be one of {MOBILITY_MODELS}, got {self.model!r}")
        steps = round(self.snapshot_spacing / self.krauss.time_step)
        if (
            self.snapshot_spacing <= 0
            or steps < 1
            or abs(self.snapshot_spacing - steps * self.krauss.time_step) > 1e-9
        ):
            errors.append(
                f"snapshot_spacing must be a positive multiple of time_step, got "
                f"{self.snapshot_spacing} vs {self.krauss.time_step}"
            )
        if errors:
            raise ConfigError(errors)

    @property
    def steps_between_snapshots(self) -> int:
        return round(self.snapshot_spacing / self.krauss.time_step)


@dataclass(frozen=True)
class MetricsSettings:
    theta_grid: tuple[float, ...] = tuple(default_theta_grid())
    kappa_grid: tuple[float, ...] = tuple(default_kappa_grid())

    def __post_init__(self):
        errors = []
        for name in ("theta_grid", "kappa_grid"):
            grid = tuple(float(v) for v in getattr(self, name))
            if len(grid) == 0 or any(b <= a for a, b in zip(grid, grid[1:])):
                errors.append(f"{name} must be non-empty and strictly increasing")
            if grid and grid[0] <= 0:
                errors.append(f"{name} values must be positive")
            object.__setattr__(self, name, grid)
        if errors:
            raise ConfigError(errors)


@dataclass(frozen=True)
class Flags:
    subslot_rate_scaling: bool = False
    cars_block: bool = False
    empty_cluster_as_outage: bool = False
    receiver_lane: int = 2

    def __post_init__(self):
        if self.receiver_lane < 1:
            raise ConfigError([f"receiver_lane must be >= 1, got {self.receiver_lane}"])


@dataclass(frozen=True)
class SweepSettings:
    """Parameter lists expanded to the cartesian product of sweep points.

    A swept lambda or epsilon applies the same value to every lane; an absent
    list keeps the base road values as the single point.
    """

    lambdas: tuple[float, ...] | None = None
    psi_deg: tuple[float, ...] | None = None
    epsilons: tuple[float, ...] | None = None

    def __post_init__(self):
        errors = []
        for name in ("lambdas", "psi_deg", "epsilons"):
            vals = getattr(self, name)
            if vals is None:
                continue
            vals = tuple(float(v) for v in vals)
            if len(vals) == 0:
                errors.append(f"sweep.{name} must be non-empty when given")
            if len(set(vals)) != len(vals):
                errors.append(f"sweep.{name} has duplicate values")
            object.__setattr__(self, name, vals)
        if self.lambdas and any(v <= 0 for v in self.lambdas):
            errors.append(f"sweep.lambdas must be positive, got {self.lambdas}")
        if self.epsilons and any(not 0 <= v <= 1 for v in self.epsilons):
            errors.append(f"sweep.epsilons must be in [0, 1], got {self.epsilons}")
        if errors:
            raise ConfigError(errors)


@dataclass(frozen=True)
class SweepPoint:
    index: int
    lam: float | None
    psi_deg: float
    epsilon: float | None

    @property
    def sweep_id(self) -> str:
        parts = [f"{self.index:02d}", f"psi{self.psi_deg:g}"]
        if self.lam is not None:
            parts.append(f"lam{self.lam:g}")
        if self.epsilon is not None:
            parts.append(f"eps{self.epsilon:g}")
        return "-".join(parts)

    def road_for(self, config: "ScenarioConfig") -> RoadConfig:
        road = config.road
        kwargs: dict[str, Any] = {}
        if self.lam is not None:
            kwargs["lane_intensities"] = (self.lam,) * road.num_lanes
        if self.epsilon is not None:
            kwargs["truck_fractions"] = (self.epsilon,) * road.num_lanes
        return dataclasses.replace(road, **kwargs) if kwargs else road

    def antenna_for(self, config: "ScenarioConfig") -> AntennaConfig:
        return config.antenna.build(self.psi_deg)

    def lambda_value(self, config: "ScenarioConfig") -> float:
        """The lambda recorded in output rows: the swept per-lane intensity,
        or the receiver lane's base intensity when lambda is not swept."""
        if self.lam is not None:
            return self.lam
        return config.road.lane_intensities[config.flags.receiver_lane - 1]


@dataclass(frozen=True)
class ScenarioConfig:
    road: RoadConfig = field(default_factory=RoadConfig)
    mobility: MobilitySettings = field(default_factory=MobilitySettings)
    channel: ChannelParams = field(default_factory=ChannelParams)
    antenna: AntennaSettings = field(default_factory=AntennaSettings)
    mac: MacConfig = field(default_factory=MacConfig)
    metrics: MetricsSettings = field(default_factory=MetricsSettings)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    flags: Flags = field(default_factory=Flags)
    num_snapshots: int = 5000
    master_seed: int = 1
    p_rx: float = 0.5
    output_dir: str | None = None

    def __post_init__(self):
        errors = []
        if self.num_snapshots < 1:
            errors.append(f"num_snapshots must be >= 1, got {self.num_snapshots}")
        if not isinstance(self.master_seed, int) or self.master_seed < 0:
            errors.append(f"master_seed must be a nonnegative integer, got {self.master_seed}")
        if not 0.0 <= self.p_rx <= 1.0:
            errors.append(f"p_rx must be in [0, 1], got {self.p_rx}")
        if self.flags.receiver_lane > self.road.num_lanes:
            errors.append(
                f"receiver_lane {self.flags.receiver_lane} exceeds num_lanes {self.road.num_lanes}"
            )
        for psi in self.sweep.psi_deg or ():
            try:
                self.antenna.build(psi)
            except ConfigError as err:
                errors.extend(err.errors)
        if errors:
            raise ConfigError(errors)

    def sweep_points(self) -> tuple[SweepPoint, ...]:
        lams: Iterable[float | None] = self.sweep.lambdas or (None,)
        psis = self.sweep.psi_deg or (self.antenna.psi_deg,)
        epss: Iterable[float | None] = self.sweep.epsilons or (None,)
        points = []
        index = 0
        for lam in lams:
            for eps in epss:
                for psi in psis:
                    points.append(SweepPoint(index=index, lam=lam, psi_deg=psi, epsilon=eps))
                    index += 1
        return tuple(points)


_SECTION_TYPES: dict[str, type] = {
    "road": RoadConfig,
    "channel": ChannelParams,
    "antenna": AntennaSettings,
    "mac": MacConfig,
    "metrics": MetricsSettings,
    "sweep": SweepSettings,
    "flags": Flags,
}
_RUN_KEYS = ("num_snapshots", "master_seed", "p_rx", "output_dir")


def _field_names(cls) -> set[str]:
    return {f.name for f in dataclasses.fields(cls)}


def _coerce_intercept(value, errors: list[str]):
    """pathloss_intercept forms: null or "fspl@1m" derive from the carrier;
    a positive number is the linear gain; a negative number is read in dB."""
    if value is None or value == "fspl@1m":
        return None
    if isinstance(value, str):
        errors.append(f"channel.pathloss_intercept: unrecognized form {value!r}")
        return None
    if value < 0:
        return 10.0 ** (value / 10.0)
    return float(value)


def _build_section(name: str, cls, raw: dict, errors: list[str]):
    allowed = _field_names(cls)
    unknown = set(raw) - allowed
    if unknown:
        errors.append(f"{name}: unknown keys {sorted(unknown)}")
    kwargs = {k: v for k, v in raw.items() if k in allowed}
    for key in ("lane_intensities", "truck_fractions", "theta_grid", "kappa_grid",
                "lambdas", "psi_deg", "epsilons"):
        if key in kwargs and isinstance(kwargs[key], list):
            kwargs[key] = tuple(kwargs[key])
    try:
        return cls(**kwargs)
    except ConfigError as err:
        errors.extend(f"{name}: {msg}" for msg in err.errors)
    except (TypeError, ValueError) as err:
        errors.append(f"{name}: {err}")
    return None


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a YAML scenario; raises ConfigError listing every
    violation found."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise ConfigError([f"not valid YAML: {err}"]) from None
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError([f"top level must be a mapping, got {type(raw).__name__}"])

    errors: list[str] = []
    known_sections = set(_SECTION_TYPES) | {"mobility", "run"}
    unknown = set(raw) - known_sections
    if unknown:
        errors.append(f"unknown top-level sections {sorted(unknown)}")

    sections: dict[str, Any] = {}
    for name, cls in _SECTION_TYPES.items():
        section_raw = raw.get(name, {})
        if not isinstance(section_raw, dict):
            errors.append(f"{name}: must be a mapping")
            section_raw = {}
        if name == "channel" and "pathloss_intercept" in section_raw:
            section_raw = dict(section_raw)
            section_raw["pathloss_intercept"] = _coerce_intercept(
                section_raw["pathloss_intercept"], errors
            )
        built = _build_section(name, cls, section_raw, errors)
        if built is not None:
            sections[name] = built

    mob_raw = raw.get("mobility", {})
    if not isinstance(mob_raw, dict):
        errors.append("mobility: must be a mapping")
        mob_raw = {}
    mob_own = {"model", "snapshot_spacing"}
    krauss_fields = _field_names(KraussParams)
    unknown = set(mob_raw) - mob_own - krauss_fields
    if unknown:
        errors.append(f"mobility: unknown keys {sorted(unknown)}")
    try:
        krauss = KraussParams(**{k: v for k, v in mob_raw.items() if k in krauss_fields})
        sections["mobility"] = MobilitySettings(
            krauss=krauss, **{k: v for k, v in mob_raw.items() if k in mob_own}
        )
    except ConfigError as err:
        errors.extend(f"mobility: {msg}" for msg in err.errors)
    except (TypeError, ValueError) as err:
        errors.append(f"mobility: {err}")

    run_raw = raw.get("run", {})
    if not isinstance(run_raw, dict):
        errors.append("run: must be a mapping")
        run_raw = {}
    unknown = set(run_raw) - set(_RUN_KEYS)
    if unknown:
        errors.append(f"run: unknown keys {sorted(unknown)}")
    run_kwargs = {k: v for k, v in run_raw.items() if k in _RUN_KEYS}

    try:
        built = ScenarioConfig(**sections, **run_kwargs)
    except ConfigError as err:
        # failed sections fall back to defaults here, so cross-section and
        # run-level violations still surface in the same report
        errors.extend(err.errors)
        built = None
    if errors:
        raise ConfigError(errors)
    assert built is not None
    return built


def load_config(path) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _plain(value):
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: _plain(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return value


def config_to_dict(config: ScenarioConfig) -> dict:
    """Plain nested dict form of a validated config (manifest echo)."""
    return _plain(config)


def config_digest(config: ScenarioConfig) -> str:
    """Stable hash of the full parameter set. Excludes output_dir, which is
    deployment plumbing rather than physics."""
    data = config_to_dict(config)
    data.pop("output_dir", None)
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()
