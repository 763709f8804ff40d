"""Physical-layer math: large-scale gain, thermal noise, Rayleigh fading draws,
SINR thresholds, and per-slot decode rules for orthogonal and overlapping access.

Small-scale fading is block fading with a coherence time of one slot: each
user's channel coefficient is circularly-symmetric complex Gaussian with unit
variance, so the per-slot power gain is exponentially distributed with mean
equal to the large-scale gain. Within a slot the same power-gain realization
feeds both the direct SINR check and any post-cancellation SNR check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

SPEED_OF_LIGHT = 2.998e8
BOLTZMANN = 1.380649e-23


@dataclass(frozen=True)
class LinkGeometry:
    """Link-budget inputs for one user-to-base-station link."""

    distance_m: float
    carrier_hz: float = 2e9
    pathloss_exp: float = 2.6
    antenna_gain_product: float = 10.0
    light_speed: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if self.distance_m <= 0:
            raise ValueError(f"distance_m must be > 0, got {self.distance_m}")
        if self.carrier_hz <= 0:
            raise ValueError(f"carrier_hz must be > 0, got {self.carrier_hz}")
        if self.pathloss_exp < 2:
            raise ValueError(f"pathloss_exp must be >= 2, got {self.pathloss_exp}")
        if self.antenna_gain_product <= 0:
            raise ValueError("antenna_gain_product must be > 0")


@dataclass(frozen=True)
class NoiseModel:
    """Thermal noise description: temperature in Kelvin plus noise figure in dB."""

    noise_temp_k: float = 190.0
    noise_figure_db: float = 5.0
    boltzmann: float = BOLTZMANN

    def __post_init__(self):
        if self.noise_temp_k <= 0:
            raise ValueError("noise_temp_k must be > 0")


@dataclass(frozen=True)
class BandPlan:
    """Split of the system bandwidth into reserved and shared sub-bands.

    FDMA reserves b1 for the broadband user and b2 for the intermittent user
    (b3 = 0). NOMA assigns the full band to both users (b1 = b2 = 0, b3 = B).
    """

    total_hz: float
    b1_hz: float
    b2_hz: float
    b3_hz: float

    def __post_init__(self):
        if self.total_hz <= 0:
            raise ValueError("total_hz must be > 0")
        for name in ("b1_hz", "b2_hz", "b3_hz"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not math.isclose(self.b1_hz + self.b2_hz + self.b3_hz, self.total_hz,
                            rel_tol=1e-9):
            raise ValueError("sub-bands must sum to the total bandwidth")
        if self.b3_hz > 0 and (self.b1_hz > 0 or self.b2_hz > 0):
            raise ValueError("a shared band excludes reserved sub-bands")

    @classmethod
    def fdma(cls, total_hz: float, b2_hz: float) -> "BandPlan":
        if not 0 <= b2_hz <= total_hz:
            raise ValueError("b2_hz must lie in [0, total_hz]")
        return cls(total_hz, total_hz - b2_hz, b2_hz, 0.0)

    @classmethod
    def noma(cls, total_hz: float) -> "BandPlan":
        return cls(total_hz, 0.0, 0.0, total_hz)

    @property
    def is_noma(self) -> bool:
        return self.b3_hz > 0

    @property
    def assignment(self):
        """Per-user sub-band flags, rows = (broadband, intermittent)."""
        if self.is_noma:
            return ((0, 0, 1), (0, 0, 1))
        return ((1, 0, 0), (0, 1, 0))


class DecodeStatus(Enum):
    DIRECT = "decoded_direct"
    AFTER_SIC = "decoded_after_sic"
    FAILED = "failed"


@dataclass(frozen=True)
class DecodeOutcome:
    status: DecodeStatus

    @property
    def decoded(self) -> bool:
        return self.status is not DecodeStatus.FAILED

    @property
    def outcome_class(self) -> str:
        """'I' when the signal was extracted from the slot, 'E' otherwise."""
        return "I" if self.decoded else "E"


def large_scale_gain(geom: LinkGeometry) -> float:
    """Mean linear power gain of the link.

    G * c^2 / ((4 pi f_c)^2 * d^eta): strictly decreasing in distance and
    path-loss exponent.
    """
    num = geom.antenna_gain_product * geom.light_speed**2
    den = (4.0 * math.pi * geom.carrier_hz) ** 2 * geom.distance_m**geom.pathloss_exp
    return num / den


def noise_power(noise: NoiseModel, subband_hz: float) -> float:
    """Noise variance in watts over a sub-band: B * k * T_w * 10^(N_f/10)."""
    if subband_hz < 0:
        raise ValueError("subband_hz must be >= 0")
    return subband_hz * noise.boltzmann * noise.noise_temp_k * 10.0 ** (noise.noise_figure_db / 10.0)


def decode_threshold(rate_bps: float, subband_hz: float) -> float:
    """Minimum SINR for decoding a rate over a sub-band: 2^(r/B) - 1."""
    if rate_bps < 0:
        raise ValueError("rate_bps must be >= 0")
    if rate_bps == 0:
        return 0.0
    if subband_hz <= 0:
        raise ValueError("cannot carry a positive rate over a zero-width sub-band")
    return 2.0 ** (rate_bps / subband_hz) - 1.0


def draw_fading_power(beta: float, rng: np.random.Generator) -> float:
    """One per-slot power-gain realization: exponential with mean beta."""
    if beta <= 0:
        raise ValueError("beta must be > 0")
    return rng.exponential(beta)


def sinr(own_gain: float, own_power_w: float, sigma2_w: float,
         other_gain: float = 0.0, other_power_w: float = 0.0) -> float:
    """SINR of one signal; interference term is zero when the other user is
    absent or assigned to a different sub-band."""
    if sigma2_w <= 0:
        raise ValueError("sigma2_w must be > 0")
    return own_gain * own_power_w / (other_gain * other_power_w + sigma2_w)


def closed_form_success_prob(beta: float, power_w: float, sigma2_w: float,
                             gamma_min: float) -> float:
    """Interference-free decode probability under Rayleigh fading.

    P(gamma >= gamma_min) = exp(-gamma_min * sigma^2 / (beta * P)); this is
    one minus the link erasure probability.
    """
    if gamma_min < 0:
        raise ValueError("gamma_min must be >= 0")
    if gamma_min == 0:
        return 1.0
    if power_w == 0:
        return 0.0
    return math.exp(-gamma_min * sigma2_w / (beta * power_w))


def decode_fdma_slot(gain: float, power_w: float, threshold: float,
                     sigma2_w: float) -> DecodeOutcome:
    """Decode one user's slot on its reserved sub-band (no interference).

    Success at exactly the threshold counts as decoded.
    """
    snr = sinr(gain, power_w, sigma2_w)
    status = DecodeStatus.DIRECT if snr >= threshold else DecodeStatus.FAILED
    return DecodeOutcome(status)


def decode_noma_slot(gain1: float, power1_w: float, threshold1: float,
                     gain2: float, power2_w: float, threshold2: float,
                     sigma2_w: float, tx1: bool = True, tx2: bool = True):
    """Joint decode of the shared band with SIC and the capture effect.

    Returns a pair of outcomes (broadband, intermittent); a silent user has no
    outcome (None). Procedure with both users transmitting:
      1. evaluate each SINR treating the other signal as noise; any user at or
         above its threshold is decoded directly,
      2. if exactly one user decoded directly, cancel its signal and decode
         the other against noise only (same gain realizations),
      3. a user is in class I exactly when its signal was decoded.
    A lone transmitter reduces to the reserved-band rule over the full band.
    """
    if not tx1 and not tx2:
        return None, None
    if tx1 and not tx2:
        return decode_fdma_slot(gain1, power1_w, threshold1, sigma2_w), None
    if tx2 and not tx1:
        return None, decode_fdma_slot(gain2, power2_w, threshold2, sigma2_w)

    gamma1 = sinr(gain1, power1_w, sigma2_w, gain2, power2_w)
    gamma2 = sinr(gain2, power2_w, sigma2_w, gain1, power1_w)
    direct1 = gamma1 >= threshold1
    direct2 = gamma2 >= threshold2

    if direct1 and direct2:
        return DecodeOutcome(DecodeStatus.DIRECT), DecodeOutcome(DecodeStatus.DIRECT)
    if direct1 and not direct2:
        snr2 = sinr(gain2, power2_w, sigma2_w)
        status2 = DecodeStatus.AFTER_SIC if snr2 >= threshold2 else DecodeStatus.FAILED
        return DecodeOutcome(DecodeStatus.DIRECT), DecodeOutcome(status2)
    if direct2 and not direct1:
        snr1 = sinr(gain1, power1_w, sigma2_w)
        status1 = DecodeStatus.AFTER_SIC if snr1 >= threshold1 else DecodeStatus.FAILED
        return DecodeOutcome(status1), DecodeOutcome(DecodeStatus.DIRECT)
    return DecodeOutcome(DecodeStatus.FAILED), DecodeOutcome(DecodeStatus.FAILED)
