"""Monte Carlo simulator of mmWave vehicle-to-vehicle communication on a
multi-lane highway: truck blockage, sectored beams, a slotted cluster MAC,
and Krauss car-following mobility, measured through SINR outage and rate
coverage curves."""

from ._version import __version__
from .antenna import AntennaConfig, combined_gain, sector_gain
from .blockage import Segment2D, is_los, segment_intersects_rect
from .channel import ChannelParams, normalized_noise, path_loss, sample_fading
from .config import ScenarioConfig, load_config, parse_config
from .exceptions import ConfigError, InternalConsistencyError, InvalidArgument
from .mac import ClusterResult, MacConfig, derive_threshold, form_cluster
from .metrics import (
    LinkSample,
    MetricAccumulator,
    evaluate_snapshot,
    rate_of,
    sinr_for_rate,
)
from .mobility import KraussParams, krauss_step, warmup
from .road import (
    Mode,
    RoadConfig,
    Snapshot,
    Vehicle,
    VehicleKind,
    enforce_min_spacing,
    mark_vehicles,
    sample_lane_positions,
    sample_snapshot,
)
from .runner import RunManifest, run_sweep

__all__ = [
    "__version__",
    "AntennaConfig",
    "ChannelParams",
    "ClusterResult",
    "ConfigError",
    "InternalConsistencyError",
    "InvalidArgument",
    "KraussParams",
    "LinkSample",
    "MacConfig",
    "MetricAccumulator",
    "Mode",
    "RoadConfig",
    "RunManifest",
    "ScenarioConfig",
    "Segment2D",
    "Snapshot",
    "Vehicle",
    "VehicleKind",
    "combined_gain",
    "derive_threshold",
    "enforce_min_spacing",
    "evaluate_snapshot",
    "form_cluster",
    "is_los",
    "krauss_step",
    "load_config",
    "mark_vehicles",
    "normalized_noise",
    "parse_config",
    "path_loss",
    "rate_of",
    "run_sweep",
    "sample_fading",
    "sample_lane_positions",
    "sample_snapshot",
    "sector_gain",
    "segment_intersects_rect",
    "sinr_for_rate",
    "warmup",
]
