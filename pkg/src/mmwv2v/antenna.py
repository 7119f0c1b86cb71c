"""Sectored beam pattern: the azimuth circle is split into R = 2pi/psi sectors
and a beam is a two-level gain, G_main inside the steered sector and g_side
elsewhere.

Gains are normalized to unit average over the azimuth,
G_main psi + g_side (2pi - psi) = 2pi, so narrower beams are proportionally
stronger instead of hand-tuned. Sector 0 is centered on the East direction
(+x); sector k covers bearings [k psi - psi/2, (k+1) psi - psi/2) and a
boundary bearing belongs to the lower-indexed sector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError, InvalidArgument
from .road import RoadConfig, Snapshot, Vehicle, wrap_delta

TWO_PI = 2.0 * math.pi
SIDELOBE_DEFAULT_DB = 20.0


@dataclass(frozen=True)
class AntennaConfig:
    beamwidth: float
    num_sectors: int
    mainlobe_gain: float
    sidelobe_gain: float

    def __post_init__(self):
        errors = []
        if self.num_sectors < 1:
            errors.append(f"num_sectors must be >= 1, got {self.num_sectors}")
        elif not math.isclose(self.beamwidth * self.num_sectors, TWO_PI, rel_tol=1e-12):
            errors.append(
                f"beamwidth {self.beamwidth} times {self.num_sectors} sectors must equal 2pi"
            )
        if self.sidelobe_gain < 0:
            errors.append(f"sidelobe_gain must be >= 0, got {self.sidelobe_gain}")
        if self.mainlobe_gain < self.sidelobe_gain:
            errors.append(
                f"mainlobe_gain {self.mainlobe_gain} must be >= sidelobe_gain {self.sidelobe_gain}"
            )
        if errors:
            raise ConfigError(errors)

    @classmethod
    def from_beamwidth_deg(
        cls, psi_deg: float, sidelobe_rel_db: float | None = SIDELOBE_DEFAULT_DB
    ) -> "AntennaConfig":
        """Build a unit-average pattern from a beamwidth in degrees.

        The beamwidth must divide 360 evenly. `sidelobe_rel_db` places the
        sidelobe that many dB under the mainlobe before normalization; None
        (or infinity) means the idealized zero-sidelobe pattern, where
        G_main = 2pi/psi exactly.
        """
        if psi_deg <= 0 or psi_deg > 360:
            raise ConfigError(f"beamwidth must be in (0, 360] degrees, got {psi_deg}")
        sectors = 360.0 / psi_deg
        if abs(sectors - round(sectors)) > 1e-9:
            raise ConfigError(f"beamwidth {psi_deg} deg does not divide 360 deg evenly")
        num_sectors = int(round(sectors))
        psi = TWO_PI / num_sectors

        if sidelobe_rel_db is None or math.isinf(sidelobe_rel_db):
            g_side = 0.0
            g_main = TWO_PI / psi
        else:
            if sidelobe_rel_db < 0:
                raise ConfigError(
                    f"sidelobe_rel_db is a positive suppression in dB, got {sidelobe_rel_db}"
                )
            # unit average with g_side = G_main / 10^(d/10)
            ratio = 10.0 ** (-sidelobe_rel_db / 10.0)
            g_main = TWO_PI / (psi + ratio * (TWO_PI - psi))
            g_side = g_main * ratio
        return cls(
            beamwidth=psi, num_sectors=num_sectors, mainlobe_gain=g_main, sidelobe_gain=g_side
        )

    @property
    def is_normalized(self) -> bool:
        avg = (
            self.mainlobe_gain * self.beamwidth
            + self.sidelobe_gain * (TWO_PI - self.beamwidth)
        ) / TWO_PI
        return math.isclose(avg, 1.0, rel_tol=1e-9)


def sector_of_bearing(bearing, cfg: AntennaConfig):
    """Sector index owning a bearing (radians, any real): floor into the
    sector grid after shifting by psi/2 so sector 0 is centered on East."""
    shifted = np.mod(np.asarray(bearing) + cfg.beamwidth / 2.0, TWO_PI)
    idx = np.floor_divide(shifted, cfg.beamwidth).astype(np.int64)
    # guard the half-open convention against float roundup at the seam
    idx = np.minimum(idx, cfg.num_sectors - 1)
    return idx if idx.ndim else int(idx)


def sector_gain(boresight_sector, angle_to_peer, cfg: AntennaConfig):
    """G_main when the peer bearing falls in the steered sector, else g_side."""
    hit = sector_of_bearing(angle_to_peer, cfg) == np.asarray(boresight_sector)
    out = np.where(hit, cfg.mainlobe_gain, cfg.sidelobe_gain)
    return float(out) if out.ndim == 0 else out


def bearing(dx, dy):
    """Bearing of (dx, dy) in [0, 2pi), measured from East, counterclockwise."""
    return np.mod(np.arctan2(dy, dx), TWO_PI)


def combined_gain(tx: Vehicle, rx: Vehicle, cfg: AntennaConfig, road: RoadConfig) -> float:
    """Delta for one link: TX gain toward RX times RX gain toward TX.

    Bearings use the shorter ring arc; the reverse bearing is the forward one
    plus pi.
    """
    if tx.is_truck or rx.is_truck:
        raise InvalidArgument("combined gain is defined between cars")
    dx = float(wrap_delta(rx.longitudinal_position - tx.longitudinal_position, road.road_length))
    dy = road.lane_center_y(rx.lane_index) - road.lane_center_y(tx.lane_index)
    if dx == 0.0 and dy == 0.0:
        raise InvalidArgument("coincident positions have no bearing")
    fwd = bearing(dx, dy)
    g_tx = sector_gain(tx.boresight_sector, fwd, cfg)
    g_rx = sector_gain(rx.boresight_sector, np.mod(fwd + math.pi, TWO_PI), cfg)
    return float(g_tx * g_rx)


def gains_toward(
    snapshot: Snapshot, rx_index: int, peer_indices: np.ndarray, cfg: AntennaConfig
) -> np.ndarray:
    """Vectorized Delta from each peer (as TX) to one receiver row."""
    road = snapshot.road
    dx = wrap_delta(snapshot.x[peer_indices] - snapshot.x[rx_index], road.road_length)
    dy = snapshot.y[peer_indices] - snapshot.y[rx_index]
    # bearing rx -> peer; the peer sees the opposite bearing
    fwd = bearing(dx, dy)
    g_rx = sector_gain(int(snapshot.boresight[rx_index]), fwd, cfg)
    g_tx = sector_gain(
        snapshot.boresight[peer_indices], np.mod(fwd + math.pi, TWO_PI), cfg
    )
    return np.asarray(g_tx * g_rx, dtype=np.float64)
