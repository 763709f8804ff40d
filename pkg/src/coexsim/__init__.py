"""Slot-level coexistence simulator: a grant-free intermittent user tracking a
two-state Markov source and a backlogged broadband user share frame-based
wireless resources under FDMA or NOMA."""

from .engine import (FrameConfig, IntermittentMetrics, Model, RunResult,
                     Scheme, SimConfig, run, run_frame_based, run_idealistic)
from .phy import BandPlan, LinkGeometry, NoiseModel
from .source import CostMatrix, DtmcParams, PolicyKind, SamplingPolicy

__version__ = "0.1.0"

__all__ = [
    "BandPlan", "CostMatrix", "DtmcParams", "FrameConfig",
    "IntermittentMetrics", "LinkGeometry", "Model", "NoiseModel",
    "PolicyKind", "RunResult", "SamplingPolicy", "Scheme", "SimConfig",
    "run", "run_frame_based", "run_idealistic", "__version__",
]
