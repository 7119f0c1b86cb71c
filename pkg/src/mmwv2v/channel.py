"""Link-level channel: power-law path loss, Nakagami fading, thermal noise.

All gains are linear and normalized so the transmit power is 1: path loss and
antenna gains multiply directly and the noise term is sigma = N0 W F / P_t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError, InvalidArgument

SPEED_OF_LIGHT = 299_792_458.0
BOLTZMANN = 1.380649e-23
NOISE_TEMPERATURE = 290.0


def fspl_intercept(carrier_frequency: float) -> float:
    """Free-space gain at 1 m: (c / 4 pi f)^2."""
    if carrier_frequency <= 0:
        raise InvalidArgument(f"carrier_frequency must be > 0, got {carrier_frequency}")
    return (SPEED_OF_LIGHT / (4.0 * math.pi * carrier_frequency)) ** 2


@dataclass(frozen=True)
class ChannelParams:
    """Propagation and receiver-noise parameters.

    `pathloss_intercept` defaults to free space at 1 m for the carrier; pass a
    value explicitly to decouple it from the frequency.
    """

    carrier_frequency: float = 28e9
    bandwidth: float = 2.16e9
    pathloss_exponent: float = 2.6
    nakagami_m: float = 3.0
    tx_power: float = 1.0
    noise_figure_db: float = 9.0
    pathloss_intercept: float | None = None
    normalize_fading_power: bool = False

    def __post_init__(self):
        errors = []
        if self.carrier_frequency <= 0:
            errors.append(f"carrier_frequency must be > 0, got {self.carrier_frequency}")
        if self.bandwidth <= 0:
            errors.append(f"bandwidth must be > 0, got {self.bandwidth}")
        if self.pathloss_exponent <= 2:
            errors.append(f"pathloss_exponent must be > 2, got {self.pathloss_exponent}")
        if self.nakagami_m < 0.5:
            errors.append(f"nakagami_m must be >= 0.5, got {self.nakagami_m}")
        if self.tx_power <= 0:
            errors.append(f"tx_power must be > 0, got {self.tx_power}")
        if self.pathloss_intercept is None and self.carrier_frequency > 0:
            object.__setattr__(self, "pathloss_intercept", fspl_intercept(self.carrier_frequency))
        if self.pathloss_intercept is not None and not 0.0 < self.pathloss_intercept <= 1.0:
            errors.append(
                f"pathloss_intercept must be in (0, 1], got {self.pathloss_intercept}"
            )
        if errors:
            raise ConfigError(errors)

    @property
    def normalized_noise(self) -> float:
        """Thermal noise power over transmit power: k_B 290 W 10^(NF/10) / P_t."""
        return (
            BOLTZMANN
            * NOISE_TEMPERATURE
            * self.bandwidth
            * 10.0 ** (self.noise_figure_db / 10.0)
            / self.tx_power
        )


def path_loss(r, params: ChannelParams):
    """min(1, C r^-alpha); scalar or elementwise on arrays. Requires r > 0."""
    r_arr = np.asarray(r, dtype=np.float64)
    if np.any(r_arr <= 0):
        raise InvalidArgument("path_loss requires r > 0")
    out = np.minimum(1.0, params.pathloss_intercept * r_arr ** -params.pathloss_exponent)
    return float(out) if np.isscalar(r) or r_arr.ndim == 0 else out


def sample_fading(m: float, rng: np.random.Generator, size=None, unit_mean: bool = False):
    """Fading power gain draws: Gamma with shape m and rate 1 (mean m).

    `unit_mean` rescales the rate to m so the mean power is 1, the usual
    Nakagami normalization; the default keeps the mean at m.
    """
    if m < 0.5:
        raise InvalidArgument(f"nakagami shape must be >= 0.5, got {m}")
    scale = 1.0 / m if unit_mean else 1.0
    return rng.gamma(shape=m, scale=scale, size=size)


def normalized_noise(params: ChannelParams) -> float:
    return params.normalized_noise
