"""Highway geometry and per-lane vehicle placement.

Vehicles live on lane centerlines of a multi-lane straight highway section.
The section is treated as a ring (positions modulo road_length) so that the
tagged receiver never sits near an edge. Placement is homogeneous Poisson per
lane, followed by a hard-core correction that pushes overlapping footprints
apart while preserving Poisson statistics at realistic densities.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .exceptions import ConfigError, InternalConsistencyError, InvalidArgument


class VehicleKind(enum.Enum):
    CAR = "car"
    TRUCK = "truck"


class Mode(enum.IntEnum):
    TX = 0
    RX = 1
    INACTIVE = 2


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle, closed on its boundary."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    @property
    def width_x(self) -> float:
        return self.x_max - self.x_min

    @property
    def width_y(self) -> float:
        return self.y_max - self.y_min


@dataclass(frozen=True)
class RoadConfig:
    """Static highway layout plus per-lane traffic marks.

    Lanes are indexed 1..num_lanes. Lanes 1..L/2 drive East-to-West,
    lanes L/2+1..L drive West-to-East (left-hand traffic). Intensities are
    linear densities in vehicles per meter.
    """

    road_length: float = 20_000.0
    num_lanes: int = 4
    lane_width: float = 3.7
    lane_intensities: tuple[float, ...] = (6e-2, 6e-2, 6e-2, 6e-2)
    truck_fractions: tuple[float, ...] = (0.1, 0.05, 0.05, 0.1)
    car_length: float = 4.0
    car_width: float = 2.52
    truck_length: float = 11.2
    truck_width: float = 2.52
    min_gap: float = 1.0

    def __post_init__(self):
        errors = []
        if self.road_length <= 0:
            errors.append(f"road_length must be > 0, got {self.road_length}")
        if self.num_lanes < 2 or self.num_lanes % 2 != 0:
            errors.append(f"num_lanes must be a positive even number, got {self.num_lanes}")
        if self.lane_width <= 0:
            errors.append(f"lane_width must be > 0, got {self.lane_width}")
        if len(self.lane_intensities) != self.num_lanes:
            errors.append(
                f"lane_intensities has {len(self.lane_intensities)} entries, expected {self.num_lanes}"
            )
        if len(self.truck_fractions) != self.num_lanes:
            errors.append(
                f"truck_fractions has {len(self.truck_fractions)} entries, expected {self.num_lanes}"
            )
        if any(lam <= 0 for lam in self.lane_intensities):
            errors.append(f"every lane intensity must be > 0, got {self.lane_intensities}")
        if any(not 0.0 <= eps <= 1.0 for eps in self.truck_fractions):
            errors.append(f"every truck fraction must be in [0, 1], got {self.truck_fractions}")
        for name in ("car_length", "car_width", "truck_length", "truck_width"):
            if getattr(self, name) <= 0:
                errors.append(f"{name} must be > 0")
        if self.min_gap < 0:
            errors.append(f"min_gap must be >= 0, got {self.min_gap}")
        if errors:
            raise ConfigError(errors)
        # normalize sequence fields so configs hash and compare by value
        object.__setattr__(self, "lane_intensities", tuple(float(v) for v in self.lane_intensities))
        object.__setattr__(self, "truck_fractions", tuple(float(v) for v in self.truck_fractions))

    def lane_center_y(self, lane_index: int) -> float:
        """Lateral coordinate of a lane centerline; lane 1 starts at y=0."""
        if not 1 <= lane_index <= self.num_lanes:
            raise InvalidArgument(f"lane_index {lane_index} outside 1..{self.num_lanes}")
        return (lane_index - 0.5) * self.lane_width

    def lane_direction(self, lane_index: int) -> int:
        """+1 for West-to-East travel (increasing x), -1 for East-to-West."""
        if not 1 <= lane_index <= self.num_lanes:
            raise InvalidArgument(f"lane_index {lane_index} outside 1..{self.num_lanes}")
        return -1 if lane_index <= self.num_lanes // 2 else 1

    def kind_length(self, is_truck) -> np.ndarray | float:
        return np.where(is_truck, self.truck_length, self.car_length)

    def kind_width(self, is_truck) -> np.ndarray | float:
        return np.where(is_truck, self.truck_width, self.car_width)


@dataclass(frozen=True)
class Vehicle:
    """One marked point of the road process.

    Trucks carry no radio: their mode is always INACTIVE and they have no
    boresight sector.
    """

    id: int
    lane_index: int
    longitudinal_position: float
    kind: VehicleKind
    mode: Mode
    boresight_sector: int | None

    @property
    def is_truck(self) -> bool:
        return self.kind is VehicleKind.TRUCK


@dataclass(frozen=True)
class Snapshot:
    """One frozen spatial realization of all vehicles at a slot boundary.

    Canonical storage is columnar (one numpy array per attribute, sorted by
    (lane, position)) so the Monte Carlo hot path never materializes per-
    vehicle objects; the `vehicles` view exists for tests and small-scale
    inspection. Immutable after construction.
    """

    road: RoadConfig
    realization_seed: int
    ids: np.ndarray
    lane: np.ndarray
    x: np.ndarray
    is_truck: np.ndarray
    mode: np.ndarray
    boresight: np.ndarray

    def __post_init__(self):
        n = len(self.ids)
        for name in ("lane", "x", "is_truck", "mode", "boresight"):
            if len(getattr(self, name)) != n:
                raise InvalidArgument(f"column {name} length mismatch")
        for name in ("ids", "lane", "x", "is_truck", "mode", "boresight"):
            getattr(self, name).setflags(write=False)

    def __len__(self) -> int:
        return len(self.ids)

    @cached_property
    def vehicles(self) -> tuple[Vehicle, ...]:
        out = []
        for i in range(len(self.ids)):
            truck = bool(self.is_truck[i])
            out.append(
                Vehicle(
                    id=int(self.ids[i]),
                    lane_index=int(self.lane[i]),
                    longitudinal_position=float(self.x[i]),
                    kind=VehicleKind.TRUCK if truck else VehicleKind.CAR,
                    mode=Mode(int(self.mode[i])),
                    boresight_sector=None if truck else int(self.boresight[i]),
                )
            )
        return tuple(out)

    @cached_property
    def index_of_id(self) -> dict[int, int]:
        return {int(v): i for i, v in enumerate(self.ids)}

    def vehicle_by_id(self, vehicle_id: int) -> Vehicle:
        return self.vehicles[self.index_of_id[int(vehicle_id)]]

    def vehicle_at(self, index: int) -> Vehicle:
        """Materialize a single row as a Vehicle without building the full
        tuple view."""
        truck = bool(self.is_truck[index])
        return Vehicle(
            id=int(self.ids[index]),
            lane_index=int(self.lane[index]),
            longitudinal_position=float(self.x[index]),
            kind=VehicleKind.TRUCK if truck else VehicleKind.CAR,
            mode=Mode(int(self.mode[index])),
            boresight_sector=None if truck else int(self.boresight[index]),
        )

    @property
    def lengths(self) -> np.ndarray:
        return np.where(self.is_truck, self.road.truck_length, self.road.car_length)

    @property
    def y(self) -> np.ndarray:
        return (self.lane - 0.5) * self.road.lane_width

    @classmethod
    def from_vehicles(
        cls, vehicles: Sequence[Vehicle], road: RoadConfig, realization_seed: int = 0
    ) -> "Snapshot":
        vs = sorted(vehicles, key=lambda v: (v.lane_index, v.longitudinal_position))
        return cls(
            road=road,
            realization_seed=realization_seed,
            ids=np.array([v.id for v in vs], dtype=np.int64),
            lane=np.array([v.lane_index for v in vs], dtype=np.int64),
            x=np.array([v.longitudinal_position for v in vs], dtype=np.float64),
            is_truck=np.array([v.is_truck for v in vs], dtype=bool),
            mode=np.array([int(v.mode) for v in vs], dtype=np.int64),
            boresight=np.array(
                [-1 if v.boresight_sector is None else v.boresight_sector for v in vs],
                dtype=np.int64,
            ),
        )


def sample_lane_positions(length: float, intensity: float, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous Poisson placement on one lane: sorted centers in [0, length)."""
    if length <= 0:
        raise ConfigError(f"length must be > 0, got {length}")
    if intensity <= 0:
        raise ConfigError(f"intensity must be > 0, got {intensity}")
    count = rng.poisson(length * intensity)
    return np.sort(rng.uniform(0.0, length, size=count))


def mark_vehicles(
    positions: Sequence[np.ndarray],
    road: RoadConfig,
    kinds_rng: np.random.Generator,
    mode_rng: np.random.Generator,
    steer_rng: np.random.Generator,
    p_rx: float,
    num_sectors: int,
    realization_seed: int = 0,
) -> Snapshot:
    """Attach marks to per-lane positions: kind, TX/RX mode, boresight sector.

    Kind is truck with the lane's truck fraction; each car independently gets
    mode RX with probability p_rx (TX otherwise) and a uniform boresight among
    num_sectors directions. Trucks are INACTIVE with no boresight.
    """
    if not 0.0 <= p_rx <= 1.0:
        raise ConfigError(f"p_rx must be in [0, 1], got {p_rx}")
    if num_sectors < 1:
        raise ConfigError(f"num_sectors must be >= 1, got {num_sectors}")
    if len(positions) != road.num_lanes:
        raise ConfigError(
            f"got position lists for {len(positions)} lanes, road has {road.num_lanes}"
        )

    lanes, xs, trucks = [], [], []
    for lane_idx, lane_positions in enumerate(positions, start=1):
        pos = np.asarray(lane_positions, dtype=np.float64)
        order = np.argsort(pos, kind="stable")
        pos = pos[order]
        eps = road.truck_fractions[lane_idx - 1]
        lanes.append(np.full(pos.shape, lane_idx, dtype=np.int64))
        xs.append(pos)
        trucks.append(kinds_rng.random(pos.shape) < eps)

    lane = np.concatenate(lanes) if lanes else np.empty(0, dtype=np.int64)
    x = np.concatenate(xs) if xs else np.empty(0, dtype=np.float64)
    is_truck = np.concatenate(trucks) if trucks else np.empty(0, dtype=bool)
    n = len(x)

    mode = np.full(n, int(Mode.INACTIVE), dtype=np.int64)
    cars = ~is_truck
    rx = mode_rng.random(n) < p_rx
    mode[cars & rx] = int(Mode.RX)
    mode[cars & ~rx] = int(Mode.TX)

    boresight = np.full(n, -1, dtype=np.int64)
    boresight[cars] = steer_rng.integers(0, num_sectors, size=int(cars.sum()))

    return Snapshot(
        road=road,
        realization_seed=realization_seed,
        ids=np.arange(n, dtype=np.int64),
        lane=lane,
        x=x,
        is_truck=is_truck,
        mode=mode,
        boresight=boresight,
    )


def footprint(vehicle: Vehicle, road: RoadConfig) -> Rect:
    """Axis-aligned footprint rectangle of a vehicle, centered on its lane."""
    length = road.truck_length if vehicle.is_truck else road.car_length
    width = road.truck_width if vehicle.is_truck else road.car_width
    cy = road.lane_center_y(vehicle.lane_index)
    cx = vehicle.longitudinal_position
    return Rect(cx - length / 2, cx + length / 2, cy - width / 2, cy + width / 2)


def _space_out_ring(x: np.ndarray, lengths: np.ndarray, ring_length: float, gap: float) -> np.ndarray:
    """Push-right displacement enforcing center spacing on a ring.

    Consecutive centers must be at least (len_i + len_next)/2 + gap apart.
    The vehicle following the largest sampled gap is anchored and everything
    else is displaced forward (never backward), so low-density realizations
    are left untouched almost surely.
    """
    n = len(x)
    if n <= 1:
        return x
    required = (lengths + np.roll(lengths, -1)) / 2.0 + gap  # i -> i+1 spacing
    if required.sum() > ring_length:
        raise ConfigError(
            f"cannot fit {n} vehicles with min gap {gap} on a {ring_length} m ring"
        )
    sampled_gaps = (np.roll(x, -1) - x) % ring_length
    anchor = (int(np.argmax(sampled_gaps - required)) + 1) % n

    order = (np.arange(n) + anchor) % n
    xs = x[order].copy()
    xs[1:] += ring_length * np.cumsum(np.diff(xs) < 0)  # unwrap to a monotone line
    req = required[order]

    for _ in range(n + 2):
        # x'_k = max(x_k, x'_{k-1} + req_{k-1}) via cummax in gap-reduced coords
        offsets = np.concatenate(([0.0], np.cumsum(req[:-1])))
        xs = np.maximum.accumulate(xs - offsets) + offsets
        wrap_deficit = (xs[-1] + req[-1]) - (xs[0] + ring_length)
        if wrap_deficit <= 0:
            out = np.empty(n)
            out[order] = xs % ring_length
            return out
        xs[0] += wrap_deficit
    raise InternalConsistencyError("ring spacing did not converge")


def enforce_min_spacing(snapshot: Snapshot) -> Snapshot:
    """Hard-core correction: displace same-lane vehicles so footprints never
    overlap and bumper gaps stay >= road.min_gap (ring topology)."""
    road = snapshot.road
    x = snapshot.x.copy()
    lengths = snapshot.lengths
    for lane_idx in range(1, road.num_lanes + 1):
        sel = snapshot.lane == lane_idx
        if sel.sum() > 1:
            x[sel] = _space_out_ring(x[sel], lengths[sel], road.road_length, road.min_gap)
    # displacement may reorder positions within a lane only via ring wrap
    order = np.lexsort((x, snapshot.lane))
    return Snapshot(
        road=road,
        realization_seed=snapshot.realization_seed,
        ids=snapshot.ids[order],
        lane=snapshot.lane[order],
        x=x[order],
        is_truck=snapshot.is_truck[order],
        mode=snapshot.mode[order],
        boresight=snapshot.boresight[order],
    )


def sample_snapshot(
    road: RoadConfig,
    p_rx: float,
    num_sectors: int,
    seed_seq: np.random.SeedSequence,
) -> Snapshot:
    """Draw one valid snapshot: Poisson lanes, marks, hard-core correction."""
    pos_ss, kinds_ss, mode_ss, steer_ss = seed_seq.spawn(4)
    pos_rng = np.random.Generator(np.random.PCG64(pos_ss))
    positions = [
        sample_lane_positions(road.road_length, lam, pos_rng) for lam in road.lane_intensities
    ]
    snap = mark_vehicles(
        positions,
        road,
        kinds_rng=np.random.Generator(np.random.PCG64(kinds_ss)),
        mode_rng=np.random.Generator(np.random.PCG64(mode_ss)),
        steer_rng=np.random.Generator(np.random.PCG64(steer_ss)),
        p_rx=p_rx,
        num_sectors=num_sectors,
        # entropy may be an int or a sequence of ints; keep a scalar tag
        realization_seed=(
            int(seed_seq.entropy)
            if isinstance(seed_seq.entropy, (int, np.integer))
            else hash(tuple(np.ravel(seed_seq.entropy))) if seed_seq.entropy is not None
            else 0
        ),
    )
    return enforce_min_spacing(snap)


def remark_modes_and_beams(
    snapshot: Snapshot,
    mode_rng: np.random.Generator,
    steer_rng: np.random.Generator,
    p_rx: float,
    num_sectors: int,
) -> Snapshot:
    """Re-draw TX/RX modes and boresights in place of the old marks.

    Used at slot boundaries: positions and kinds persist, the MAC re-randomizes
    everything radio-related.
    """
    n = len(snapshot)
    cars = ~snapshot.is_truck
    mode = np.full(n, int(Mode.INACTIVE), dtype=np.int64)
    rx = mode_rng.random(n) < p_rx
    mode[cars & rx] = int(Mode.RX)
    mode[cars & ~rx] = int(Mode.TX)
    boresight = np.full(n, -1, dtype=np.int64)
    boresight[cars] = steer_rng.integers(0, num_sectors, size=int(cars.sum()))
    return Snapshot(
        road=snapshot.road,
        realization_seed=snapshot.realization_seed,
        ids=snapshot.ids,
        lane=snapshot.lane,
        x=snapshot.x,
        is_truck=snapshot.is_truck,
        mode=mode,
        boresight=boresight,
    )


def tagged_receiver_index(snapshot: Snapshot, lane_index: int = 2) -> int | None:
    """Index of the RX car in `lane_index` closest to the road midpoint."""
    candidates = (
        (snapshot.lane == lane_index)
        & (snapshot.mode == int(Mode.RX))
        & ~snapshot.is_truck
    )
    idx = np.flatnonzero(candidates)
    if len(idx) == 0:
        return None
    mid = snapshot.road.road_length / 2.0
    return int(idx[np.argmin(np.abs(snapshot.x[idx] - mid))])


def wrap_delta(dx, ring_length: float):
    """Signed displacement along the shorter arc of the ring, in [-L/2, L/2)."""
    return (np.asarray(dx) + ring_length / 2.0) % ring_length - ring_length / 2.0
