"""Per-slot SINR evaluation and Monte Carlo accumulation of the two target
statistics: SINR outage probability P_T(theta) = P(SINR < theta) and rate
coverage probability R_C(kappa) = P(rate >= kappa), tracked separately for the
cluster members with the best (M) and worst (m) SINR of each slot.

The SINR of member i is |h_i|^2 Delta_i l(r_i) / (sigma + I), where I sums
|h_j|^2 Delta_j l(r_j) over all LOS transmitting cars outside the cluster.
The same interference realization applies to every member of the slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from .antenna import AntennaConfig
from .channel import ChannelParams, path_loss, sample_fading
from .exceptions import InvalidArgument
from .mac import ClusterResult, MemberAssignment
from .road import Snapshot, Vehicle

Z_95 = 1.959963984540054  # two-sided 95% normal quantile


@dataclass(frozen=True)
class LinkSample:
    """One member link of an evaluated slot, with every Eq-level factor."""

    member_id: int
    distance: float
    fading: float
    gain: float
    sinr: float


def _fading_for(
    ids: np.ndarray,
    channel: ChannelParams,
    rng: np.random.Generator | None,
    pinned: Mapping[int, float] | None,
) -> np.ndarray:
    if pinned is not None:
        try:
            return np.array([float(pinned[int(i)]) for i in ids], dtype=np.float64)
        except KeyError as missing:
            raise InvalidArgument(f"pinned fading missing vehicle id {missing}") from None
    if rng is None:
        raise InvalidArgument("fading evaluation needs a random stream or pinned values")
    return np.asarray(
        sample_fading(
            channel.nakagami_m, rng, size=len(ids), unit_mean=channel.normalize_fading_power
        ),
        dtype=np.float64,
    ).reshape(len(ids))


def evaluate_snapshot(
    receiver: Vehicle,
    cluster: ClusterResult,
    snapshot: Snapshot,
    channel: ChannelParams,
    antenna: AntennaConfig,
    rng: np.random.Generator | None,
    pinned_fading: Mapping[int, float] | None = None,
) -> tuple[ClusterResult, tuple[LinkSample, ...]]:
    """Draw fading and fill per-member SINR values for one slot.

    One fading draw per member and one per LOS interferer, members first, in
    stored order. `pinned_fading` (vehicle id to power gain) replaces the
    draws entirely for deterministic checks. Empty clusters pass through
    unchanged; the caller decides whether that slot is skipped or counted as
    outage.
    """
    if receiver.id != cluster.receiver_id:
        raise InvalidArgument("cluster was formed for a different receiver")
    if cluster.is_empty:
        return cluster, ()

    geom = cluster.geometry
    member_ids = np.array([m.vehicle_id for m in cluster.members], dtype=np.int64)
    h_members = _fading_for(member_ids, channel, rng, pinned_fading)
    h_interf = _fading_for(
        snapshot.ids[geom.interferer_indices], channel, rng, pinned_fading
    )

    sigma = channel.normalized_noise
    interference = float(
        np.sum(h_interf * geom.interferer_gains * path_loss(geom.interferer_distances, channel))
    ) if len(h_interf) else 0.0
    numerators = h_members * geom.member_gains * path_loss(geom.member_distances, channel)
    sinr = numerators / (sigma + interference)

    members = tuple(
        replace(m, sinr=float(s)) for m, s in zip(cluster.members, sinr)
    )
    samples = tuple(
        LinkSample(
            member_id=int(member_ids[k]),
            distance=float(geom.member_distances[k]),
            fading=float(h_members[k]),
            gain=float(geom.member_gains[k]),
            sinr=float(sinr[k]),
        )
        for k in range(len(members))
    )
    evaluated = replace(cluster, members=members, interference=interference, noise=sigma)
    return evaluated, samples


def rate_of(sinr, bandwidth: float, num_subslots: int = 1):
    """Shannon rate W log2(1 + SINR) in bit/s, split across subslots when the
    slotted sharing is charged to throughput (num_subslots > 1)."""
    if bandwidth <= 0:
        raise InvalidArgument(f"bandwidth must be > 0, got {bandwidth}")
    if num_subslots < 1:
        raise InvalidArgument(f"num_subslots must be >= 1, got {num_subslots}")
    s = np.asarray(sinr, dtype=np.float64)
    if np.any(s < 0):
        raise InvalidArgument("sinr must be >= 0")
    out = bandwidth * np.log1p(s) / math.log(2.0) / num_subslots
    return float(out) if out.ndim == 0 else out


def sinr_for_rate(rate: float, bandwidth: float, num_subslots: int = 1) -> float:
    """Inverse of rate_of: the SINR needed for a target rate."""
    return 2.0 ** (rate * num_subslots / bandwidth) - 1.0


def default_theta_grid() -> np.ndarray:
    return np.logspace(-1.0, 3.0, 41)


def default_kappa_grid() -> np.ndarray:
    return 0.5e9 + 0.25e9 * np.arange(47)


def wilson_interval(successes: int, trials: int, z: float = Z_95) -> tuple[float, float]:
    """95% score interval for a binomial proportion; (nan, nan) when empty."""
    if trials == 0:
        return (math.nan, math.nan)
    k, n = float(successes), float(trials)
    denom = n + z * z
    center = (k + z * z / 2.0) / denom
    half = z * math.sqrt(k * (n - k) / n + z * z / 4.0) / denom
    return (max(0.0, center - half), min(1.0, center + half))


MEMBER_KEYS = ("M", "m")


@dataclass
class MetricAccumulator:
    """Counting state for P_T and R_C curves over one sweep point.

    Counts are additive, so accumulators built on disjoint slot sets merge
    into exactly the accumulator of the union, whatever the order.
    """

    theta_grid: np.ndarray = field(default_factory=default_theta_grid)
    kappa_grid: np.ndarray = field(default_factory=default_kappa_grid)
    bandwidth: float = 2.16e9
    rate_subslot_divisor: int = 1
    empty_as_outage: bool = False
    outage_counts: dict = field(init=False)
    rate_counts: dict = field(init=False)
    n_effective: int = 0
    n_empty: int = 0
    n_truncated: int = 0
    n_offered: int = 0

    def __post_init__(self):
        self.theta_grid = np.asarray(self.theta_grid, dtype=np.float64)
        self.kappa_grid = np.asarray(self.kappa_grid, dtype=np.float64)
        if np.any(np.diff(self.theta_grid) <= 0) or len(self.theta_grid) == 0:
            raise InvalidArgument("theta_grid must be non-empty and strictly increasing")
        if np.any(np.diff(self.kappa_grid) <= 0) or len(self.kappa_grid) == 0:
            raise InvalidArgument("kappa_grid must be non-empty and strictly increasing")
        self.outage_counts = {
            key: np.zeros(len(self.theta_grid), dtype=np.int64) for key in MEMBER_KEYS
        }
        self.rate_counts = {
            key: np.zeros(len(self.kappa_grid), dtype=np.int64) for key in MEMBER_KEYS
        }

    def record_unserved(self) -> None:
        """One slot with nothing to measure: no receiver, or an empty cluster."""
        self.n_offered += 1
        self.n_empty += 1
        if self.empty_as_outage:
            # an unserved slot fails every threshold and every rate target
            self.n_effective += 1
            for key in MEMBER_KEYS:
                self.outage_counts[key] += 1

    def record(self, result: ClusterResult) -> None:
        """Fold one evaluated slot into the counts."""
        if result.is_empty:
            self.record_unserved()
            return
        self.n_offered += 1
        if result.truncated:
            self.n_truncated += 1
        if not result.has_sinr:
            raise InvalidArgument("record needs an evaluated cluster (run the SINR step)")
        self.n_effective += 1
        for key, sinr in (
            ("M", result.best_member.sinr),
            ("m", result.worst_member.sinr),
        ):
            rate = rate_of(sinr, self.bandwidth, self.rate_subslot_divisor)
            self.outage_counts[key] += sinr < self.theta_grid
            self.rate_counts[key] += rate >= self.kappa_grid

    def merge(self, other: "MetricAccumulator") -> "MetricAccumulator":
        if (
            not np.array_equal(self.theta_grid, other.theta_grid)
            or not np.array_equal(self.kappa_grid, other.kappa_grid)
            or self.bandwidth != other.bandwidth
            or self.rate_subslot_divisor != other.rate_subslot_divisor
            or self.empty_as_outage != other.empty_as_outage
        ):
            raise InvalidArgument("cannot merge accumulators with different settings")
        for key in MEMBER_KEYS:
            self.outage_counts[key] += other.outage_counts[key]
            self.rate_counts[key] += other.rate_counts[key]
        self.n_effective += other.n_effective
        self.n_empty += other.n_empty
        self.n_truncated += other.n_truncated
        self.n_offered += other.n_offered
        return self

    def curve(self, member: str, kind: str):
        """(grid, estimate, ci_low, ci_high) for kind 'theta' (P_T) or
        'kappa' (R_C) and member 'M' or 'm'."""
        if member not in MEMBER_KEYS:
            raise InvalidArgument(f"member must be one of {MEMBER_KEYS}, got {member!r}")
        if kind == "theta":
            grid, counts = self.theta_grid, self.outage_counts[member]
        elif kind == "kappa":
            grid, counts = self.kappa_grid, self.rate_counts[member]
        else:
            raise InvalidArgument(f"kind must be 'theta' or 'kappa', got {kind!r}")
        n = self.n_effective
        est = counts / n if n else np.full(len(grid), math.nan)
        lo = np.empty(len(grid))
        hi = np.empty(len(grid))
        for i, k in enumerate(counts):
            lo[i], hi[i] = wilson_interval(int(k), n)
        return grid, est, lo, hi
