"""Slot/frame scheduler wiring the physical layer, the source model, and the
broadband pipeline into the frame-based and idealistic models.

Frame-based model: each frame has slots_per_frame slots, the last of which is
a downlink feedback slot. The intermittent user holds a one-packet queue that
any new sample overwrites, transmits a queued packet once at the next uplink
opportunity, and then waits for frame-end feedback. Feedback covers only the
latest packet transmitted within the frame; a NACK makes the user sample the
current source state afresh and retransmit it in the first uplink slot of the
next frame.

Idealistic model: the intermittent user transmits a triggered sample in the
same slot, every slot, with instantaneous error-free feedback. Since every
transmission is acknowledged immediately, the transmitter can track the
receiver estimate exactly and stops retransmitting as soon as the estimate
matches the source again. The broadband pipeline keeps the frame cadence in
both models; the idealistic relaxation applies to the intermittent user only.

Update-delivery cost accounting: a transmission counts as a retransmission
when the transmitted sample was generated by the desynchronization trigger
(instant feedback, or a consumed NACK). The reported cost is retransmissions
per delivered update.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np

from . import broadband as bb
from . import phy
from .phy import BandPlan, LinkGeometry, NoiseModel
from .source import CostMatrix, DtmcParams, SamplingPolicy, sampling_decision


class ConfigError(ValueError):
    pass


class Model(Enum):
    FRAME_BASED = "frame_based"
    IDEALISTIC = "idealistic"


class Scheme(Enum):
    FDMA = "fdma"
    NOMA = "noma"


@dataclass(frozen=True)
class FrameConfig:
    slots_per_frame: int = 10
    slot_seconds: float = 1e-3
    horizon_frames: int = 100_000

    def __post_init__(self):
        if self.slots_per_frame < 2:
            raise ConfigError("need at least one uplink and one feedback slot per frame")
        if self.horizon_frames < 1:
            raise ConfigError("horizon_frames must be >= 1")
        if self.slot_seconds <= 0:
            raise ConfigError("slot_seconds must be > 0")


@dataclass(frozen=True)
class SimConfig:
    """Complete description of one run."""

    band_plan: BandPlan
    bb_geometry: LinkGeometry
    int_geometry: LinkGeometry
    noise: NoiseModel
    dtmc: DtmcParams
    policy: SamplingPolicy
    costs: CostMatrix
    bb_policy: bb.BroadbandPolicy
    frame: FrameConfig
    model: Model = Model.FRAME_BASED
    scheme: Scheme = Scheme.FDMA
    packet_bytes: int = 128
    int_power_w: float = 0.2
    block_size: int = 32
    success_override: Optional[float] = None
    bb_success_override: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if self.scheme is Scheme.FDMA and self.band_plan.is_noma:
            raise ConfigError("FDMA runs need a reserved-band plan")
        if self.scheme is Scheme.NOMA and not self.band_plan.is_noma:
            raise ConfigError("NOMA runs need a shared-band plan")
        for name in ("success_override", "bb_success_override"):
            v = getattr(self, name)
            if v is not None and not 0 <= v <= 1:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if self.bb_success_override is not None and self.scheme is Scheme.NOMA:
            raise ConfigError("broadband success override is limited to FDMA runs")
        if self.packet_bytes < 1 or self.int_power_w <= 0:
            raise ConfigError("packet_bytes and int_power_w must be positive")

    @property
    def intermittent_rate_bps(self) -> float:
        """One packet per slot: 8 L / T_s."""
        return 8.0 * self.packet_bytes / self.frame.slot_seconds


@dataclass(frozen=True)
class IntermittentMetrics:
    tare: float
    tacae: float
    udc: Optional[float]
    attempts: int
    deliveries: int
    retransmissions: int


@dataclass(frozen=True)
class BroadbandMetrics:
    rate_bps: float
    power_w: float
    throughput_bps: float
    energy_efficiency_bpj: float
    blocks_done: int
    mean_frames_per_block: Optional[float]


@dataclass(frozen=True)
class SlotTraces:
    """Optional per-slot record for recount-style verification."""

    x: np.ndarray
    x_hat: np.ndarray
    transmitted: np.ndarray
    delivered: np.ndarray
    measured_from: int


@dataclass(frozen=True)
class RunResult:
    intermittent: IntermittentMetrics
    broadband: BroadbandMetrics
    config: SimConfig
    seed: int
    traces: Optional[SlotTraces] = None


def warmup_frames(horizon_frames: int) -> int:
    """Frames discarded from all time averages: 1% of the horizon, at least 100."""
    return max(100, -(-horizon_frames // 100))


def compute_udc(attempts: int, deliveries: int) -> Optional[float]:
    """Retransmissions per delivered update, absent when nothing was delivered."""
    if deliveries < 0 or attempts < deliveries:
        raise ValueError("need attempts >= deliveries >= 0")
    if deliveries == 0:
        return None
    return (attempts - deliveries) / deliveries


def accumulate(x: np.ndarray, x_hat: np.ndarray, costs: CostMatrix,
               measured_from: int = 0) -> tuple[float, float, int, int]:
    """Time-averaged error and cost of a (source, estimate) trace.

    Returns (tare, tacae, mismatch01, mismatch10) over slots at or after
    measured_from, using exact integer counts so an independent recount
    reproduces the averages bit for bit.
    """
    xs = np.asarray(x)[measured_from:]
    hs = np.asarray(x_hat)[measured_from:]
    if xs.size == 0:
        raise ValueError("empty measurement window")
    n01 = int(np.count_nonzero((xs == 0) & (hs == 1)))
    n10 = int(np.count_nonzero((xs == 1) & (hs == 0)))
    n = xs.size
    tare = (n01 + n10) / n
    tacae = (n01 * costs.c01 + n10 * costs.c10) / n
    return tare, tacae, n01, n10


@dataclass
class _LinkTables:
    """Per-slot decode indicators for every context the slot loop can hit."""

    int_with_bb: np.ndarray      # intermittent decodes, broadband also on the air
    int_alone: np.ndarray        # intermittent decodes, broadband silent
    bb_alone: Optional[np.ndarray]      # broadband decodes, intermittent silent
    bb_with_int: Optional[np.ndarray]   # broadband decodes under overlap
    bb_rate_bps: float
    bb_power_w: float
    bb_active: bool


def _build_link_tables(config: SimConfig, total_slots: int,
                       rng_int: np.random.Generator,
                       rng_bb: np.random.Generator) -> _LinkTables:
    band = config.band_plan
    noma = config.scheme is Scheme.NOMA
    r2 = config.intermittent_rate_bps
    p2 = config.int_power_w
    beta2 = phy.large_scale_gain(config.int_geometry)

    bb_band = band.b3_hz if noma else band.b1_hz
    bb_active = bb_band > 0
    rate1 = power1 = 0.0
    th1 = sigma_bb = None
    if bb_active:
        sigma_bb = phy.noise_power(config.noise, bb_band)
        policy = config.bb_policy
        if policy.mean_gain is None:
            policy = replace(policy, mean_gain=phy.large_scale_gain(config.bb_geometry))
        rate1 = bb.select_rate(policy, bb_band, sigma_bb)
        power1 = bb.select_power(policy, rate1, bb_band, sigma_bb)
        th1 = phy.decode_threshold(rate1, bb_band)

    g1 = rng_bb.exponential(phy.large_scale_gain(config.bb_geometry), total_slots) \
        if bb_active else None
    g2 = rng_int.exponential(beta2, total_slots) if (noma or band.b2_hz > 0) else None

    if noma:
        sigma3 = phy.noise_power(config.noise, band.total_hz)
        th2 = phy.decode_threshold(r2, band.total_hz)
        int_direct = g2 * p2 / (g1 * power1 + sigma3) >= th2
        snr2_ok = g2 * p2 / sigma3 >= th2
        bb_direct = g1 * power1 / (g2 * p2 + sigma3) >= th1
        snr1_ok = g1 * power1 / sigma3 >= th1
        int_with_bb = int_direct | (bb_direct & snr2_ok)
        int_alone = snr2_ok
        bb_with_int = bb_direct | (int_direct & snr1_ok)
        bb_alone = snr1_ok
    else:
        if band.b2_hz > 0:
            sigma2 = phy.noise_power(config.noise, band.b2_hz)
            th2 = phy.decode_threshold(r2, band.b2_hz)
            int_alone = g2 * p2 / sigma2 >= th2
        else:
            int_alone = np.zeros(total_slots, dtype=bool)
        int_with_bb = int_alone
        if bb_active:
            bb_alone = g1 * power1 / sigma_bb >= th1
        else:
            bb_alone = None
        bb_with_int = bb_alone

    if config.success_override is not None:
        forced = rng_int.random(total_slots) < config.success_override
        int_with_bb = int_alone = forced
    if config.bb_success_override is not None and bb_active:
        forced_bb = rng_bb.random(total_slots) < config.bb_success_override
        bb_alone = bb_with_int = forced_bb

    return _LinkTables(int_with_bb=int_with_bb, int_alone=int_alone,
                       bb_alone=bb_alone, bb_with_int=bb_with_int,
                       bb_rate_bps=rate1, bb_power_w=power1, bb_active=bb_active)


def run(config: SimConfig, record_traces: bool = False) -> RunResult:
    if config.model is Model.FRAME_BASED:
        return run_frame_based(config, record_traces)
    return run_idealistic(config, record_traces)


def run_frame_based(config: SimConfig, record_traces: bool = False) -> RunResult:
    if config.model is not Model.FRAME_BASED:
        raise ConfigError("config.model must be FRAME_BASED")
    return _simulate(config, idealistic=False, record_traces=record_traces)


def run_idealistic(config: SimConfig, record_traces: bool = False) -> RunResult:
    if config.model is not Model.IDEALISTIC:
        raise ConfigError("config.model must be IDEALISTIC")
    return _simulate(config, idealistic=True, record_traces=record_traces)


def _simulate(config: SimConfig, idealistic: bool, record_traces: bool) -> RunResult:
    fc = config.frame
    t_f = fc.slots_per_frame
    horizon = fc.horizon_frames
    warm_f = warmup_frames(horizon)
    if horizon <= warm_f:
        raise ConfigError(
            f"horizon of {horizon} frames leaves nothing after the "
            f"{warm_f}-frame warm-up discard")
    total_slots = horizon * t_f
    warm_slots = warm_f * t_f

    ss = np.random.SeedSequence(config.seed)
    rng_src, rng_int, rng_bb = (np.random.default_rng(s) for s in ss.spawn(3))
    u_src = rng_src.random(total_slots)
    tables = _build_link_tables(config, total_slots, rng_int, rng_bb)

    p_s, q_s = config.dtmc.p_s, config.dtmc.q_s
    policy = config.policy
    uses_feedback = policy.uses_feedback
    int_with_bb = tables.int_with_bb
    int_alone = tables.int_alone
    bb_alone = tables.bb_alone
    bb_with_int = tables.bb_with_int
    bb_active = tables.bb_active
    noma = config.scheme is Scheme.NOMA

    if record_traces:
        tr_x = np.zeros(total_slots, dtype=np.int8)
        tr_xh = np.zeros(total_slots, dtype=np.int8)
        tr_tx = np.zeros(total_slots, dtype=bool)
        tr_dl = np.zeros(total_slots, dtype=bool)

    # synced start: source 0, estimate 0
    x = 0
    x_hat = 0
    err_known = False          # exact estimate tracking (idealistic only)
    q_val = 0
    q_pending = False          # queue holds a not-yet-transmitted packet
    q_retx = False
    nack_pending = False
    frame_had_tx = False
    frame_last_ok = False

    n01 = n10 = 0
    attempts = deliveries = retx = 0
    bb_frame_succ = 0
    block = bb.BlockState(config.block_size)
    blocks_done = 0
    block_frames_sum = 0

    last_uplink = t_f - 1      # slots [0, t_f-2] are uplink
    for t in range(total_slots):
        sif = t % t_f
        uplink = sif != last_uplink
        if t == warm_slots:
            block = bb.BlockState(config.block_size)
            blocks_done = 0
            block_frames_sum = 0

        x_prev = x
        if u_src[t] < (p_s if x == 0 else q_s):
            x = 1 - x

        if idealistic:
            error_trigger = err_known
        else:
            error_trigger = nack_pending and sif == 0
            if error_trigger:
                nack_pending = False
        if sampling_decision(policy, x, x_prev, error_trigger, t):
            q_val = x
            q_pending = True
            q_retx = error_trigger and uses_feedback

        int_tx = False
        ok = False
        if q_pending and (idealistic or uplink):
            q_pending = False
            int_tx = True
            bb_on_air = bb_active and uplink
            ok = bool(int_with_bb[t]) if bb_on_air else bool(int_alone[t])
            if t >= warm_slots:
                attempts += 1
                if q_retx:
                    retx += 1
                if ok:
                    deliveries += 1
            if ok:
                x_hat = q_val
            if not idealistic:
                frame_had_tx = True
                frame_last_ok = ok

        err = x != x_hat
        if t >= warm_slots and err:
            if x == 0:
                n01 += 1
            else:
                n10 += 1
        if idealistic:
            err_known = err

        if record_traces:
            tr_x[t] = x
            tr_xh[t] = x_hat
            tr_tx[t] = int_tx
            tr_dl[t] = int_tx and ok

        if bb_active and uplink:
            if noma and int_tx:
                if bb_with_int[t]:
                    bb_frame_succ += 1
            elif bb_alone[t]:
                bb_frame_succ += 1

        if sif == last_uplink:
            if not idealistic and frame_had_tx:
                nack_pending = not frame_last_ok
                frame_had_tx = False
            if bb_active:
                frames_in_block = block.frames_elapsed + 1
                block, done = bb.block_advance(block, bb_frame_succ, frame_ended=True)
                bb_frame_succ = 0
                if done and t >= warm_slots:
                    blocks_done += 1
                    block_frames_sum += frames_in_block

    measured_slots = total_slots - warm_slots
    measured_frames = horizon - warm_f
    tare = (n01 + n10) / measured_slots
    tacae = (n01 * config.costs.c01 + n10 * config.costs.c10) / measured_slots
    udc = compute_udc(deliveries + retx, deliveries)
    intermittent = IntermittentMetrics(
        tare=tare, tacae=tacae, udc=udc,
        attempts=attempts, deliveries=deliveries, retransmissions=retx)

    if bb_active:
        s_b = bb.throughput(blocks_done, measured_frames, tables.bb_rate_bps,
                            config.block_size, t_f)
        ee = bb.energy_efficiency(s_b, tables.bb_power_w) if tables.bb_power_w > 0 else 0.0
        mean_f = block_frames_sum / blocks_done if blocks_done else None
    else:
        s_b = ee = 0.0
        mean_f = None
    broadband = BroadbandMetrics(
        rate_bps=tables.bb_rate_bps, power_w=tables.bb_power_w,
        throughput_bps=s_b, energy_efficiency_bpj=ee,
        blocks_done=blocks_done, mean_frames_per_block=mean_f)

    traces = None
    if record_traces:
        traces = SlotTraces(x=tr_x, x_hat=tr_xh, transmitted=tr_tx,
                            delivered=tr_dl, measured_from=warm_slots)
    return RunResult(intermittent=intermittent, broadband=broadband,
                     config=config, seed=config.seed, traces=traces)
