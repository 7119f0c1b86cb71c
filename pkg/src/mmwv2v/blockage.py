"""Line-of-sight decisions with trucks as impenetrable blockages.

A link exists only if the straight segment between the two car antennas
(footprint centers on the lane centerlines) misses every truck footprint.
Blockage is binary: an obstructed link carries zero power, there is no
diffraction or partial attenuation. Geometry is evaluated on the shorter
arc of the ring by unwrapping coordinates around the receiver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidArgument
from .road import Rect, RoadConfig, Snapshot, Vehicle, wrap_delta


@dataclass(frozen=True)
class Segment2D:
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if self.x0 == self.x1 and self.y0 == self.y1:
            raise InvalidArgument("degenerate segment: endpoints coincide")


def segment_intersects_rect(seg: Segment2D, rect: Rect) -> bool:
    """Exact segment vs axis-aligned rectangle test (slab clipping).

    The rectangle is closed: touching the boundary, including a corner graze,
    counts as intersecting.
    """
    if rect.x_min >= rect.x_max or rect.y_min >= rect.y_max:
        raise InvalidArgument("rectangle must have positive area")
    dx = seg.x1 - seg.x0
    dy = seg.y1 - seg.y0

    t_enter, t_exit = 0.0, 1.0
    for p0, d, lo, hi in ((seg.x0, dx, rect.x_min, rect.x_max), (seg.y0, dy, rect.y_min, rect.y_max)):
        if d == 0.0:
            if not lo <= p0 <= hi:
                return False
            continue
        t1 = (lo - p0) / d
        t2 = (hi - p0) / d
        if t1 > t2:
            t1, t2 = t2, t1
        t_enter = max(t_enter, t1)
        t_exit = min(t_exit, t2)
        if t_enter > t_exit:
            return False
    return True


def _band_window(dx: np.ndarray, dy: np.ndarray, band_lo: float, band_hi: float):
    """Clip origin-anchored segments to a horizontal band.

    Returns (valid, x_lo, x_hi): whether each segment enters the band and the
    x-interval it covers while inside. Exact because segments are linear, so
    the in-band part is a single sub-segment with monotone x.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = band_lo / dy
        t2 = band_hi / dy
    raw_lo = np.minimum(t1, t2)
    raw_hi = np.maximum(t1, t2)
    level = dy == 0.0
    inside = (band_lo <= 0.0) & (0.0 <= band_hi)
    # the window must be judged before clipping: a band the segment never
    # reaches would otherwise collapse onto a phantom point at an endpoint
    valid = np.where(level, inside, (raw_hi >= 0.0) & (raw_lo <= 1.0))
    t_lo = np.where(level, 0.0, np.clip(raw_lo, 0.0, 1.0))
    t_hi = np.where(level, 1.0, np.clip(raw_hi, 0.0, 1.0))
    xa = dx * t_lo
    xb = dx * t_hi
    return valid, np.minimum(xa, xb), np.maximum(xa, xb)


def _count_overlaps(
    starts_sorted: np.ndarray, ends_sorted: np.ndarray, x_lo: np.ndarray, x_hi: np.ndarray
) -> np.ndarray:
    """Per query interval [x_lo, x_hi]: how many of the sorted footprint
    intervals it touches (closed boundaries)."""
    return np.searchsorted(starts_sorted, x_hi, side="right") - np.searchsorted(
        ends_sorted, x_lo, side="left"
    )


def los_mask(
    snapshot: Snapshot,
    rx_index: int,
    peer_indices: np.ndarray,
    cars_block: bool = False,
) -> np.ndarray:
    """LOS flags from the receiver (by row index) to each peer (by row index).

    Lane by lane, the tx-rx segment is clipped to the lane's footprint band
    and checked for x-overlap against the lane's sorted footprints, which is
    equivalent to the rectangle slab test because every footprint in a lane
    spans exactly the band's height.
    """
    road = snapshot.road
    peer_indices = np.asarray(peer_indices)
    x0 = float(snapshot.x[rx_index])
    y0 = float(snapshot.y[rx_index])
    dx = wrap_delta(snapshot.x[peer_indices] - x0, road.road_length)
    dy = snapshot.y[peer_indices] - y0
    rel_x = wrap_delta(snapshot.x - x0, road.road_length)

    blocked = np.zeros(len(peer_indices), dtype=bool)
    for lane_idx in range(1, road.num_lanes + 1):
        lane_y = road.lane_center_y(lane_idx)
        in_lane = snapshot.lane == lane_idx
        for is_truck_kind in (True, False):
            if not is_truck_kind and not cars_block:
                continue
            half_l = (road.truck_length if is_truck_kind else road.car_length) / 2.0
            half_w = (road.truck_width if is_truck_kind else road.car_width) / 2.0
            rows = np.flatnonzero(in_lane & (snapshot.is_truck == is_truck_kind))
            if len(rows) == 0:
                continue
            valid, x_lo, x_hi = _band_window(
                dx, dy, lane_y - half_w - y0, lane_y + half_w - y0
            )
            centers = np.sort(rel_x[rows])
            count = _count_overlaps(centers - half_l, centers + half_l, x_lo, x_hi)
            if not is_truck_kind:
                # the endpoint cars themselves do not shadow their own link
                self_hit = np.zeros(len(peer_indices), dtype=np.int64)
                if bool(in_lane[rx_index]) and not bool(snapshot.is_truck[rx_index]):
                    self_hit += (rel_x[rx_index] - half_l <= x_hi) & (
                        rel_x[rx_index] + half_l >= x_lo
                    )
                peer_in_lane = in_lane[peer_indices] & ~snapshot.is_truck[peer_indices]
                peer_rel = rel_x[peer_indices]
                self_hit += (
                    peer_in_lane
                    & (peer_rel - half_l <= x_hi)
                    & (peer_rel + half_l >= x_lo)
                )
                count = count - self_hit
            blocked |= valid & (count > 0)
    return ~blocked


def is_los(tx: Vehicle, rx: Vehicle, snapshot: Snapshot, cars_block: bool = False) -> bool:
    """True iff no truck footprint cuts the tx-rx segment (shorter ring arc).

    Car bodies sit below antenna height and do not block unless `cars_block`
    is set for sensitivity studies. Symmetric in tx and rx.
    """
    if tx.is_truck or rx.is_truck:
        raise InvalidArgument("LOS is defined between cars; trucks carry no radio")
    if tx.id == rx.id:
        raise InvalidArgument("tx and rx must differ")
    rx_index = snapshot.index_of_id[rx.id]
    tx_index = snapshot.index_of_id[tx.id]
    return bool(los_mask(snapshot, rx_index, np.array([tx_index]), cars_block=cars_block)[0])
