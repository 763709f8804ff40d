"""Broadband user: rate/power selection from channel statistics, rateless
block bookkeeping, throughput, and energy efficiency.

The user is backlogged and sends one encoded packet in every uplink slot. An
ideal rateless code turns a block of K source packets into a stream of
encoded packets; the block decodes once any K of them arrive. Completion is
acknowledged at frame end, and surplus receptions within the finishing frame
are discarded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional


class InfeasibleLinkError(ValueError):
    """The link budget cannot carry any positive rate."""


@dataclass(frozen=True)
class BroadbandPolicy:
    """Static transmission policy derived from statistical channel knowledge.

    mean_gain is the expected channel power gain; when None the caller is
    expected to derive it from the link geometry.
    """

    target_error: float = 0.1
    max_rate_bps: float = 5e6
    max_power_w: float = 0.2
    mean_gain: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.target_error < 1:
            raise ValueError("target_error must lie in (0, 1)")
        if self.max_rate_bps <= 0 or self.max_power_w <= 0:
            raise ValueError("rate and power limits must be > 0")


def _log_inv_survival(target_error: float) -> float:
    # ln(1/(1-eps)): the Rayleigh exponent that realizes the target error.
    return math.log(1.0 / (1.0 - target_error))


def select_rate(policy: BroadbandPolicy, subband_hz: float, sigma2_w: float) -> float:
    """Transmission rate: the rate cap, or the highest rate the maximum power
    can support at the target error probability, whichever is smaller."""
    if policy.mean_gain is None:
        raise ValueError("policy.mean_gain is required to select a rate")
    if subband_hz <= 0:
        raise InfeasibleLinkError("no bandwidth allocated to the broadband user")
    peak_snr = policy.max_power_w * policy.mean_gain * _log_inv_survival(policy.target_error) / sigma2_w
    achievable = subband_hz * math.log2(1.0 + peak_snr)
    if achievable <= 0:
        raise InfeasibleLinkError(
            f"achievable rate is non-positive (peak SNR {peak_snr:.3g})")
    return min(policy.max_rate_bps, achievable)


def select_power(policy: BroadbandPolicy, rate_bps: float, subband_hz: float,
                 sigma2_w: float) -> float:
    """Power that meets the target error at the chosen rate, clamped to the
    maximum. When the clamp binds, the realized error exceeds the target."""
    if policy.mean_gain is None:
        raise ValueError("policy.mean_gain is required to select a power")
    threshold = 2.0 ** (rate_bps / subband_hz) - 1.0
    required = threshold * sigma2_w / (policy.mean_gain * _log_inv_survival(policy.target_error))
    return min(required, policy.max_power_w)


@dataclass(frozen=True)
class BlockState:
    """Progress of the current source block."""

    block_size: int
    received: int = 0
    frames_elapsed: int = 0

    def __post_init__(self):
        if self.block_size < 1:
            raise ValueError("block_size must be >= 1")
        if not 0 <= self.received <= self.block_size:
            raise ValueError("received must lie in [0, block_size]")


def block_advance(state: BlockState, slot_successes: int,
                  frame_ended: bool) -> tuple[BlockState, bool]:
    """Accumulate packet receptions and, at frame end, check for completion.

    Receptions are capped at the block size (surplus is discarded). Completion
    is only recognized at frame end, matching the feedback timing; a finished
    block is replaced by a fresh one for the next frame.
    """
    if slot_successes < 0:
        raise ValueError("slot_successes must be >= 0")
    received = min(state.block_size, state.received + slot_successes)
    state = replace(state, received=received)
    if not frame_ended:
        return state, False
    state = replace(state, frames_elapsed=state.frames_elapsed + 1)
    if state.received >= state.block_size:
        return BlockState(state.block_size), True
    return state, False


def throughput(blocks_done: int, frames_total: int, rate_bps: float,
               block_size: int, frame_slots: int) -> float:
    """Delivered source bits per second of elapsed frame time.

    Each packet carries one slot at the transmission rate, so a completed
    block is worth rate * block_size slot-units against frames_total * T_F
    elapsed slots.
    """
    if frames_total <= 0:
        raise ValueError("frames_total must be > 0")
    return rate_bps * block_size * blocks_done / (frames_total * frame_slots)


def energy_efficiency(throughput_bps: float, power_w: float) -> float:
    """Delivered bits per joule spent transmitting."""
    if power_w <= 0:
        raise ValueError("power_w must be > 0 for an energy-efficiency ratio")
    return throughput_bps / power_w
