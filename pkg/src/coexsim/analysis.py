"""Closed-form and semi-analytical oracles used to verify the simulator.

Covers the instant-feedback reconstruction-error closed form, the joint
(source, sync) four-state chain built from sampling/transmission/decoding
event probabilities, the exact expected number of frames to finish a rateless
block, and the composed reserved-band decode probability of the intermittent
link.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import phy
from .phy import LinkGeometry, NoiseModel
from .source import CostMatrix, DtmcParams


class ReducibleChainError(ValueError):
    """The chain has no unique stationary distribution."""


def tare_idealistic_closed_form(p_s: float, q_s: float, p: float) -> float:
    """Long-run reconstruction-error fraction for the instant-feedback model
    under semantics-aware sampling with per-attempt success probability p.

    This is the stationary error mass of the joint (source, sync) chain:

        2 p_s q_s (1-p) / (p (p_s+q_s) + (p_s+q_s)^2 (1-p))

    For symmetric sources the second denominator term equals 4 p_s q_s, the
    form usually quoted; the squared-sum form is the one that matches the
    exact chain (and the simulator) for asymmetric sources as well.
    """
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    s = p_s + q_s
    num = 2.0 * p_s * q_s * (1.0 - p)
    den = p * s + s * s * (1.0 - p)
    return num / den


@dataclass(frozen=True)
class SamplingEvents:
    """Joint sampling/transmission/decoding probabilities in a slot where the
    policy is triggered (by a state change or by known desynchronization).

    p_stx1 is the probability that a sample is generated and transmitted,
    p_stx0 that a sample is generated but not transmitted; p_stx_d1/p_stx_d0
    split p_stx1 by decode outcome.
    """

    p_stx0: float
    p_stx1: float
    p_stx_d0: float
    p_stx_d1: float

    def __post_init__(self):
        vals = (self.p_stx0, self.p_stx1, self.p_stx_d0, self.p_stx_d1)
        if any(v < 0 or v > 1 for v in vals):
            raise ValueError("event probabilities must lie in [0, 1]")
        if abs(self.p_stx_d0 + self.p_stx_d1 - self.p_stx1) > 1e-12:
            raise ValueError("decode split must sum to the transmit probability")
        if self.p_stx0 + self.p_stx1 > 1 + 1e-12:
            raise ValueError("sampling event probabilities exceed 1")

    @classmethod
    def idealistic(cls, p: float) -> "SamplingEvents":
        """Instant-feedback instantiation: a triggered sample is always
        transmitted in the same slot and decodes with probability p."""
        return cls(p_stx0=0.0, p_stx1=1.0, p_stx_d0=1.0 - p, p_stx_d1=p)


# State order of the joint chain: (X, E) over {(0,0), (1,0), (0,1), (1,1)}.
JOINT_STATES = ((0, 0), (1, 0), (0, 1), (1, 1))


@dataclass(frozen=True)
class JointChain:
    matrix: np.ndarray
    events: SamplingEvents


@dataclass(frozen=True)
class ChainMetrics:
    tare: float
    tacae: float
    stationary: np.ndarray


def build_joint_chain(params: DtmcParams, events: SamplingEvents) -> JointChain:
    """Transition matrix of the joint (source state, sync error) chain.

    Rows follow the conditional structure of the per-state error transitions:
    a synced state leaves sync only on a source flip whose triggered update is
    not delivered; a desynced state resyncs on a source flip (the stale
    estimate matches again) or on a delivered corrective update.
    """
    ps, qs = params.p_s, params.q_s
    d1 = events.p_stx_d1
    m = np.zeros((4, 4))
    # from (0,0)
    m[0, 0] = 1 - ps
    m[0, 1] = ps * d1
    m[0, 3] = ps * (1 - d1)
    # from (1,0)
    m[1, 1] = 1 - qs
    m[1, 0] = qs * d1
    m[1, 2] = qs * (1 - d1)
    # from (0,1): estimate holds 1
    m[2, 1] = ps
    m[2, 0] = (1 - ps) * d1
    m[2, 2] = (1 - ps) * (1 - d1)
    # from (1,1): estimate holds 0
    m[3, 0] = qs
    m[3, 1] = (1 - qs) * d1
    m[3, 3] = (1 - qs) * (1 - d1)
    return JointChain(matrix=m, events=events)


def _closed_class_count(matrix: np.ndarray) -> int:
    """Number of closed communicating classes; the stationary distribution is
    unique exactly when there is one (transient states are fine)."""
    n = matrix.shape[0]
    reach = matrix > 0
    reach = reach | np.eye(n, dtype=bool)
    for k in range(n):
        reach = reach | (reach[:, k:k + 1] & reach[k:k + 1, :])
    classes = set()
    for i in range(n):
        if all(reach[j, i] for j in range(n) if reach[i, j]):
            classes.add(frozenset(j for j in range(n) if reach[i, j] and reach[j, i]))
    return len(classes)


def stationary_distribution(matrix: np.ndarray) -> np.ndarray:
    """Stationary row vector of a stochastic matrix with a single closed
    communicating class, by direct linear solve of the balance equations plus
    normalization."""
    n = matrix.shape[0]
    if _closed_class_count(matrix) != 1:
        raise ReducibleChainError("chain is reducible; stationary distribution is not unique")
    a = matrix.T - np.eye(n)
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    pi = np.linalg.solve(a, b)
    residual = np.max(np.abs(pi @ matrix - pi))
    if residual > 1e-12:
        raise ArithmeticError(f"stationary solve residual {residual:.3e} too large")
    return pi


def chain_metrics(chain: JointChain, costs: CostMatrix) -> ChainMetrics:
    """Stationary error fraction and cost of the joint chain.

    The desynced states are (X=0, estimate 1) and (X=1, estimate 0); each
    carries its directional mismatch cost.
    """
    pi = stationary_distribution(chain.matrix)
    tare = pi[2] + pi[3]
    tacae = pi[2] * costs.c01 + pi[3] * costs.c10
    return ChainMetrics(tare=tare, tacae=tacae, stationary=pi)


def expected_frames(block_size: int, p: float, slots_per_frame: int) -> float:
    """Exact expected number of frames to accumulate `block_size` packet
    receptions at per-slot success probability p with slots_per_frame - 1
    uplink slots per frame.

    Dynamic program over the remaining-packet count with binomial per-frame
    progress.
    """
    if block_size < 1:
        raise ValueError("block_size must be >= 1")
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]; p = 0 never finishes")
    n = slots_per_frame - 1
    if n < 1:
        raise ValueError("need at least one uplink slot per frame")
    q = 1.0 - p
    pmf = [math.comb(n, j) * p**j * q ** (n - j) for j in range(n + 1)]
    f = [0.0] * (block_size + 1)
    for k in range(1, block_size + 1):
        acc = 1.0
        for j in range(1, n + 1):
            acc += pmf[j] * f[max(k - j, 0)]
        f[k] = acc / (1.0 - pmf[0])
    return f[block_size]


def fdma_intermittent_success(geom: LinkGeometry, noise: NoiseModel,
                              b2_hz: float, rate_bps: float,
                              power_w: float) -> float:
    """Decode probability of the intermittent link on its reserved sub-band,
    composed from the threshold, noise power, and Rayleigh closed form."""
    beta = phy.large_scale_gain(geom)
    sigma2 = phy.noise_power(noise, b2_hz)
    gamma_min = phy.decode_threshold(rate_bps, b2_hz)
    return phy.closed_form_success_prob(beta, power_w, sigma2, gamma_min)


def idealistic_chain_metrics(params: DtmcParams, p: float,
                             costs: CostMatrix) -> ChainMetrics:
    """Convenience wrapper: joint-chain metrics for the instant-feedback
    semantics-aware instantiation."""
    chain = build_joint_chain(params, SamplingEvents.idealistic(p))
    return chain_metrics(chain, costs)


def stationary_error_split(params: DtmcParams, p: float) -> tuple[float, float]:
    """Stationary mass of the two desynced states (source 0, source 1); the
    instant-feedback chain splits them equally."""
    metrics = idealistic_chain_metrics(params, p, CostMatrix(1.0, 1.0))
    return metrics.stationary[2], metrics.stationary[3]
