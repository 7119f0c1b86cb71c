import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mmwv2v.road import Mode, RoadConfig, Snapshot, Vehicle, VehicleKind


def make_vehicle(
    vid: int,
    lane: int,
    x: float,
    kind: str = "car",
    mode: str = "tx",
    boresight: int | None = 0,
) -> Vehicle:
    is_truck = kind == "truck"
    return Vehicle(
        id=vid,
        lane_index=lane,
        longitudinal_position=x,
        kind=VehicleKind.TRUCK if is_truck else VehicleKind.CAR,
        mode=Mode.INACTIVE if is_truck else
        {"tx": Mode.TX, "rx": Mode.RX, "off": Mode.INACTIVE}[mode],
        boresight_sector=None if is_truck else boresight,
    )


def make_snapshot(rows, road: RoadConfig | None = None) -> Snapshot:
    """rows: (id, lane, x, kind, mode, boresight) tuples; kind/mode as strings."""
    road = road or RoadConfig()
    vehicles = [make_vehicle(*row) for row in rows]
    return Snapshot.from_vehicles(vehicles, road)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def small_road():
    return RoadConfig(
        road_length=1000.0,
        lane_intensities=(0.02, 0.02, 0.02, 0.02),
    )
