"""Two-state Markov source, remote estimator, sampling policies, and the
per-slot mismatch cost."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class DtmcParams:
    """Flip probabilities of the binary source: p_s out of state 0, q_s out of 1.

    Both must lie strictly inside (0, 1) so the chain is ergodic.
    """

    p_s: float
    q_s: float

    def __post_init__(self):
        if not (0 < self.p_s < 1 and 0 < self.q_s < 1):
            raise ValueError(
                f"flip probabilities must lie in (0, 1), got ({self.p_s}, {self.q_s})")


class PolicyKind(Enum):
    SEMANTICS_AWARE = "semantics_aware"
    CHANGE_AWARE = "change_aware"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class SamplingPolicy:
    kind: PolicyKind
    period: int = 1

    def __post_init__(self):
        if self.kind is PolicyKind.UNIFORM and self.period < 1:
            raise ValueError("uniform period must be >= 1")

    @classmethod
    def semantics_aware(cls) -> "SamplingPolicy":
        return cls(PolicyKind.SEMANTICS_AWARE)

    @classmethod
    def change_aware(cls) -> "SamplingPolicy":
        return cls(PolicyKind.CHANGE_AWARE)

    @classmethod
    def uniform(cls, period: int) -> "SamplingPolicy":
        return cls(PolicyKind.UNIFORM, period)

    @property
    def uses_feedback(self) -> bool:
        return self.kind is PolicyKind.SEMANTICS_AWARE


@dataclass(frozen=True)
class CostMatrix:
    """Mismatch costs: c01 applies when (source=0, estimate=1), c10 when
    (source=1, estimate=0). Matching states cost nothing."""

    c01: float = 5.0
    c10: float = 1.0

    def __post_init__(self):
        if self.c01 < 0 or self.c10 < 0:
            raise ValueError("costs must be >= 0")


def dtmc_step(x: int, params: DtmcParams, rng: np.random.Generator) -> int:
    """Advance the source one slot: flip with p_s from 0, with q_s from 1."""
    flip_prob = params.p_s if x == 0 else params.q_s
    return 1 - x if rng.random() < flip_prob else x


def dtmc_stationary(params: DtmcParams) -> tuple[float, float]:
    """Long-run occupancy (P(X=0), P(X=1)) = (q_s, p_s) / (p_s + q_s)."""
    total = params.p_s + params.q_s
    return params.q_s / total, params.p_s / total


def sampling_decision(policy: SamplingPolicy, x_now: int, x_prev: int,
                      known_error: bool = False, slot_index: int = 0) -> bool:
    """Whether the device generates a sample this slot.

    Semantics-aware: on a state change or when feedback has flagged the
    receiver as out of sync. Change-aware: on a state change only. Uniform:
    every `period` slots starting at slot 0; both feedback-free policies
    ignore `known_error`.
    """
    if policy.kind is PolicyKind.SEMANTICS_AWARE:
        return x_now != x_prev or known_error
    if policy.kind is PolicyKind.CHANGE_AWARE:
        return x_now != x_prev
    return slot_index % policy.period == 0


def estimator_update(x_hat_prev: int, delivered: Optional[int] = None) -> int:
    """Receiver estimate: the delivered sample value if any, else hold."""
    return x_hat_prev if delivered is None else delivered


def slot_cost(x: int, x_hat: int, costs: CostMatrix) -> float:
    """Actuation cost of the current (source, estimate) pair."""
    if x == x_hat:
        return 0.0
    return costs.c01 if x == 0 else costs.c10
