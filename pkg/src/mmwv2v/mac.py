"""Slotted MAC: transmitting-cluster detection and subslot assignment.

Each slot the tagged receiver detects every LOS TX car whose mean received
power (combined sector gains times path loss, transmit power normalized to 1)
reaches the threshold T_bar. Detected cars form the transmitting cluster and
get distinct subslots; every other TX car is an interferer for the whole slot.
T_bar is set so a perfectly aligned LOS link at the design range is exactly
detectable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .antenna import AntennaConfig, gains_toward
from .blockage import los_mask
from .channel import ChannelParams, path_loss, sample_fading
from .exceptions import ConfigError, InvalidArgument
from .road import Mode, Snapshot, Vehicle, wrap_delta


@dataclass(frozen=True)
class MacConfig:
    slot_duration: float = 0.01
    num_subslots: int = 32
    coverage_design_range: float = 100.0
    detection_threshold: float | None = None  # derived from design range when None
    fading_in_detection: bool = False

    def __post_init__(self):
        errors = []
        if self.slot_duration <= 0:
            errors.append(f"slot_duration must be > 0, got {self.slot_duration}")
        if self.num_subslots < 1:
            errors.append(f"num_subslots must be >= 1, got {self.num_subslots}")
        if self.coverage_design_range <= 0:
            errors.append(
                f"coverage_design_range must be > 0, got {self.coverage_design_range}"
            )
        if self.detection_threshold is not None and self.detection_threshold <= 0:
            errors.append(
                f"detection_threshold must be > 0, got {self.detection_threshold}"
            )
        if errors:
            raise ConfigError(errors)

    def threshold(self, channel: ChannelParams, antenna: AntennaConfig) -> float:
        if self.detection_threshold is not None:
            return self.detection_threshold
        return derive_threshold(self.coverage_design_range, channel, antenna)


def derive_threshold(
    design_range: float, channel: ChannelParams, antenna: AntennaConfig
) -> float:
    """Mean received power of an aligned LOS link at the design range:
    T_bar = G_main^2 * path_loss(range)."""
    if design_range <= 0:
        raise InvalidArgument(f"design range must be > 0, got {design_range}")
    return antenna.mainlobe_gain**2 * path_loss(design_range, channel)


@dataclass(frozen=True)
class MemberAssignment:
    vehicle_id: int
    subslot: int
    sinr: float | None = None


@dataclass(frozen=True)
class _ClusterGeometry:
    """Row indices and link factors cached at detection time so the SINR
    evaluation never re-derives geometry. Interferer arrays hold LOS
    interferers only; NLOS ones carry zero power by the blockage model."""

    member_indices: np.ndarray
    member_distances: np.ndarray
    member_gains: np.ndarray
    interferer_indices: np.ndarray
    interferer_distances: np.ndarray
    interferer_gains: np.ndarray


@dataclass(frozen=True)
class ClusterResult:
    receiver_id: int
    members: tuple[MemberAssignment, ...]
    interferer_ids: tuple[int, ...]
    truncated: bool
    geometry: _ClusterGeometry = field(repr=False, compare=False)
    # filled by the SINR evaluation: slot-wide interference power and noise
    interference: float | None = None
    noise: float | None = None

    def __len__(self) -> int:
        return len(self.members)

    @property
    def is_empty(self) -> bool:
        return len(self.members) == 0

    @property
    def has_sinr(self) -> bool:
        return all(m.sinr is not None for m in self.members) and not self.is_empty

    def _extreme(self, pick) -> MemberAssignment:
        if not self.has_sinr:
            raise InvalidArgument("cluster has no SINR values yet")
        return pick(self.members, key=lambda m: (m.sinr, -m.vehicle_id))

    @property
    def best_member(self) -> MemberAssignment:
        return self._extreme(max)

    @property
    def worst_member(self) -> MemberAssignment:
        return self._extreme(min)


def link_distances(snapshot: Snapshot, rx_index: int, peer_indices: np.ndarray) -> np.ndarray:
    """Euclidean distances from the receiver row to peer rows, along the
    shorter ring arc."""
    dx = wrap_delta(snapshot.x[peer_indices] - snapshot.x[rx_index], snapshot.road.road_length)
    dy = snapshot.y[peer_indices] - snapshot.y[rx_index]
    return np.hypot(dx, dy)


def form_cluster(
    receiver: Vehicle,
    snapshot: Snapshot,
    mac: MacConfig,
    channel: ChannelParams,
    antenna: AntennaConfig,
    rng: np.random.Generator | None = None,
    cars_block: bool = False,
) -> ClusterResult:
    """Detect the transmitting cluster for one receiver in one slot.

    Detection power is Delta * path_loss(r) on LOS links, zero on NLOS; with
    `fading_in_detection` a fading factor (independent of the data phase) is
    drawn per candidate, requiring `rng`. When more cars clear the threshold
    than there are subslots, the strongest `num_subslots` stay members, the
    rest fall back to interferers, and the result is flagged truncated.
    Subslots are assigned in descending detection power.
    """
    if receiver.is_truck or receiver.mode is not Mode.RX:
        raise InvalidArgument("receiver must be an RX car")
    rx_index = snapshot.index_of_id[receiver.id]

    tx_indices = np.flatnonzero((snapshot.mode == int(Mode.TX)) & ~snapshot.is_truck)
    tx_indices = tx_indices[tx_indices != rx_index]
    if len(tx_indices) == 0:
        empty = _ClusterGeometry(*(np.empty(0) for _ in range(6)))
        return ClusterResult(receiver.id, (), (), False, empty)

    los = los_mask(snapshot, rx_index, tx_indices, cars_block=cars_block)
    r = link_distances(snapshot, rx_index, tx_indices)
    gains = gains_toward(snapshot, rx_index, tx_indices, antenna)
    det_power = np.where(los, gains * path_loss(r, channel), 0.0)
    if mac.fading_in_detection:
        if rng is None:
            raise InvalidArgument("fading_in_detection requires a random stream")
        det_power = det_power * sample_fading(channel.nakagami_m, rng, size=len(tx_indices))

    detected = np.flatnonzero(det_power >= mac.threshold(channel, antenna))
    # strongest first; ties broken by id for a stable subslot order
    order = detected[np.lexsort((snapshot.ids[tx_indices[detected]], -det_power[detected]))]
    truncated = len(order) > mac.num_subslots
    member_sel = order[: mac.num_subslots]

    member_mask = np.zeros(len(tx_indices), dtype=bool)
    member_mask[member_sel] = True
    interferer_mask = ~member_mask
    interferer_los = interferer_mask & los

    geometry = _ClusterGeometry(
        member_indices=tx_indices[member_sel],
        member_distances=r[member_sel],
        member_gains=gains[member_sel],
        interferer_indices=tx_indices[interferer_los],
        interferer_distances=r[interferer_los],
        interferer_gains=gains[interferer_los],
    )
    members = tuple(
        MemberAssignment(vehicle_id=int(snapshot.ids[tx_indices[k]]), subslot=slot)
        for slot, k in enumerate(member_sel)
    )
    interferer_ids = tuple(int(v) for v in snapshot.ids[tx_indices[interferer_mask]])
    return ClusterResult(receiver.id, members, interferer_ids, truncated, geometry)
