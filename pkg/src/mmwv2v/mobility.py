"""Krauss car-following evolution on the ring.

The model shapes spatial statistics only: metrics are computed on frozen
snapshots, so speeds are transient state that never leaves this module
unless a trajectory dump is requested.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO

import numpy as np

from .exceptions import ConfigError, InternalConsistencyError
from .road import Snapshot

KMH = 1 / 3.6


@dataclass(frozen=True)
class KraussParams:
    """Safe-speed car-following parameters (SUMO-style defaults)."""

    max_speed_car: float = 112 * KMH
    max_speed_truck: float = 96 * KMH
    max_accel: float = 2.5
    max_decel: float = 4.5
    driver_imperfection: float = 0.5
    reaction_time: float = 1.0
    time_step: float = 1.0
    warmup_duration: float = 600.0

    def __post_init__(self):
        errors = []
        for name in (
            "max_speed_car",
            "max_speed_truck",
            "max_accel",
            "max_decel",
            "reaction_time",
            "time_step",
        ):
            if getattr(self, name) <= 0:
                errors.append(f"{name} must be > 0")
        if not 0.0 <= self.driver_imperfection <= 1.0:
            errors.append(f"driver_imperfection must be in [0, 1], got {self.driver_imperfection}")
        if self.warmup_duration < 0:
            errors.append(f"warmup_duration must be >= 0, got {self.warmup_duration}")
        if errors:
            raise ConfigError(errors)


@dataclass
class KineticState:
    """Per-vehicle speeds aligned with the snapshot's column order."""

    speeds: np.ndarray

    @classmethod
    def at_rest(cls, snapshot: Snapshot) -> "KineticState":
        return cls(speeds=np.zeros(len(snapshot)))


def _lane_step(
    x: np.ndarray,
    v: np.ndarray,
    lengths: np.ndarray,
    vmax: np.ndarray,
    ring: float,
    min_gap: float,
    p: KraussParams,
    noise: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """One Krauss update for a single lane in driving-direction coordinates.

    `x` ascending along the travel direction; leader of i is i+1 (ring wrap).
    """
    n = len(x)
    dt = p.time_step
    if n == 1:
        gap = ring - lengths - min_gap
        v_leader = v
    else:
        x_next = np.roll(x, -1)
        bumper_gap = (x_next - x) % ring - (lengths + np.roll(lengths, -1)) / 2.0
        v_leader = np.roll(v, -1)
        if np.any(bumper_gap < -1e-9):
            raise InternalConsistencyError("overlapping footprints before Krauss step")
        # free driving space keeps a min_gap reserve at standstill
        gap = np.maximum(bumper_gap - min_gap, 0.0)

    v_mean = (v + v_leader) / 2.0
    v_safe = v_leader + (gap - v_leader * p.reaction_time) / (
        v_mean / p.max_decel + p.reaction_time
    )
    v_des = np.minimum(np.minimum(vmax, v + p.max_accel * dt), v_safe)
    v_new = np.maximum(0.0, v_des - p.driver_imperfection * p.max_accel * dt * noise)
    x_new = (x + v_new * dt) % ring
    return x_new, v_new


def krauss_step(
    snapshot: Snapshot,
    state: KineticState,
    params: KraussParams,
    rng: np.random.Generator,
) -> tuple[Snapshot, KineticState]:
    """Advance every lane by one time step; marks and counts are conserved."""
    road = snapshot.road
    x = snapshot.x.copy()
    v = state.speeds.copy()
    lengths = snapshot.lengths
    vmax = np.where(snapshot.is_truck, params.max_speed_truck, params.max_speed_car)
    noise = rng.random(len(snapshot))

    for lane_idx in range(1, road.num_lanes + 1):
        sel = snapshot.lane == lane_idx
        if not np.any(sel):
            continue
        direction = road.lane_direction(lane_idx)
        lx = x[sel] if direction == 1 else (road.road_length - x[sel])
        order = np.argsort(lx, kind="stable")
        lx, lv = lx[order], v[sel][order]
        lx, lv = _lane_step(
            lx, lv, lengths[sel][order], vmax[sel][order],
            road.road_length, road.min_gap, params, noise[sel][order],
        )
        unorder = np.empty_like(order)
        unorder[order] = np.arange(len(order))
        nx = lx if direction == 1 else (road.road_length - lx) % road.road_length
        idx = np.flatnonzero(sel)
        x[idx] = nx[unorder]
        v[idx] = lv[unorder]

    order = np.lexsort((x, snapshot.lane))
    new_snapshot = Snapshot(
        road=road,
        realization_seed=snapshot.realization_seed,
        ids=snapshot.ids[order],
        lane=snapshot.lane[order],
        x=x[order],
        is_truck=snapshot.is_truck[order],
        mode=snapshot.mode[order],
        boresight=snapshot.boresight[order],
    )
    return new_snapshot, KineticState(speeds=v[order])


def evolve(
    snapshot: Snapshot,
    state: KineticState,
    params: KraussParams,
    rng: np.random.Generator,
    num_steps: int,
    trajectory_writer: "csv._writer | None" = None,
    t0: float = 0.0,
) -> tuple[Snapshot, KineticState]:
    """Run `num_steps` Krauss updates, optionally dumping a trajectory CSV."""
    for k in range(num_steps):
        snapshot, state = krauss_step(snapshot, state, params, rng)
        if trajectory_writer is not None:
            t = t0 + (k + 1) * params.time_step
            for i in range(len(snapshot)):
                trajectory_writer.writerow(
                    [
                        f"{t:.3f}",
                        int(snapshot.ids[i]),
                        int(snapshot.lane[i]),
                        f"{snapshot.x[i]:.3f}",
                        f"{state.speeds[i]:.4f}",
                    ]
                )
    return snapshot, state


def open_trajectory_writer(stream: IO[str]) -> "csv._writer":
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["time_s", "vehicle_id", "lane", "position_m", "speed_mps"])
    return writer


def warmup(
    snapshot: Snapshot,
    params: KraussParams,
    rng: np.random.Generator,
    trajectory_writer: "csv._writer | None" = None,
) -> Snapshot:
    """Evolve from rest for warmup_duration and drop the speeds.

    Brings raw placements to car-following steady state before measurement;
    the channel model is snapshot-based so the kinetic state is discarded.
    """
    steps = int(round(params.warmup_duration / params.time_step))
    if steps == 0:
        return snapshot
    snapshot, _ = evolve(
        snapshot, KineticState.at_rest(snapshot), params, rng, steps, trajectory_writer
    )
    return snapshot
