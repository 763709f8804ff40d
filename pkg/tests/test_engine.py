import dataclasses
import math

import numpy as np
import pytest

from coexsim import analysis, broadband, engine, phy
from coexsim.engine import (ConfigError, Model, Scheme, accumulate,
                            compute_udc, warmup_frames)
from coexsim.source import CostMatrix, DtmcParams


def chain_udc_oracle(p_s: float, q_s: float, p: float) -> float:
    """Retransmissions per delivery predicted from the joint-chain stationary
    distribution, independently of the slot loop.

    Retransmission rate equals the stationary error mass (every desynced slot
    triggers one under instant feedback); transmissions happen on a change or
    a standing error, minus the overlap; deliveries are p times that.
    """
    err0, err1 = analysis.stationary_error_split(DtmcParams(p_s, q_s), p)
    err = err0 + err1
    change = 2 * p_s * q_s / (p_s + q_s)
    overlap = err0 * p_s + err1 * q_s
    tx_rate = change + err - overlap
    return err / (p * tx_rate)


class TestComputeUdc:
    def test_all_delivered_first_try(self):
        assert compute_udc(100, 100) == 0.0

    def test_double_attempts(self):
        assert compute_udc(200, 100) == pytest.approx(1.0)

    def test_absent_without_deliveries(self):
        assert compute_udc(0, 0) is None

    def test_rejects_impossible_counts(self):
        with pytest.raises(ValueError):
            compute_udc(5, 10)

    def test_geometric_retry_oracle(self):
        # every failed attempt is retried until success: the cost converges to
        # the mean number of extra attempts of a geometric trial
        rng = np.random.default_rng(21)
        p = 0.35
        n = 10**6
        successes = int((rng.random(n) < p).sum())
        udc = compute_udc(n, successes)
        assert udc == pytest.approx((1 - p) / p, rel=0.01)


class TestAccumulate:
    def test_all_synced_trace(self):
        x = np.zeros(10, dtype=np.int8)
        tare, tacae, n01, n10 = accumulate(x, x, CostMatrix())
        assert tare == 0.0 and tacae == 0.0 and n01 == 0 and n10 == 0

    def test_alternating_trace_unit_costs(self):
        x = np.array([0, 1] * 50, dtype=np.int8)
        xh = np.zeros(100, dtype=np.int8)
        tare, tacae, *_ = accumulate(x, xh, CostMatrix(1.0, 1.0))
        assert tare == 0.5 and tacae == 0.5

    def test_recount_matches_naive_second_pass(self):
        rng = np.random.default_rng(5)
        x = rng.integers(0, 2, 5000).astype(np.int8)
        xh = rng.integers(0, 2, 5000).astype(np.int8)
        costs = CostMatrix(5.0, 1.0)
        tare, tacae, n01, n10 = accumulate(x, xh, costs, measured_from=123)
        m01 = m10 = 0
        for a, b in zip(x[123:], xh[123:]):
            if a == 0 and b == 1:
                m01 += 1
            elif a == 1 and b == 0:
                m10 += 1
        n = len(x) - 123
        assert (n01, n10) == (m01, m10)
        assert tare == (m01 + m10) / n
        assert tacae == (m01 * 5.0 + m10 * 1.0) / n


class TestWarmup:
    def test_minimum_hundred_frames(self):
        assert warmup_frames(1000) == 100

    def test_one_percent_of_long_horizons(self):
        assert warmup_frames(100_000) == 1000
        assert warmup_frames(100_001) == 1001

    def test_horizon_must_exceed_warmup(self, make_config):
        cfg = make_config(horizon_frames=100)
        with pytest.raises(ConfigError):
            engine.run(cfg)
        engine.run(make_config(horizon_frames=101, success_override=1.0))


class TestDeterminism:
    def test_identical_config_identical_result(self, make_config):
        cfg = make_config(horizon_frames=400, seed=99)
        a = engine.run(cfg, record_traces=True)
        b = engine.run(cfg, record_traces=True)
        assert a.intermittent == b.intermittent
        assert a.broadband == b.broadband
        assert (a.traces.x == b.traces.x).all()
        assert (a.traces.delivered == b.traces.delivered).all()

    def test_engine_metrics_equal_trace_accumulate(self, make_config):
        cfg = make_config(horizon_frames=500, seed=17, success_override=0.6)
        res = engine.run(cfg, record_traces=True)
        tare, tacae, *_ = accumulate(res.traces.x, res.traces.x_hat,
                                     cfg.costs, res.traces.measured_from)
        assert res.intermittent.tare == tare
        assert res.intermittent.tacae == tacae

    def test_model_mismatch_rejected(self, make_config):
        cfg = make_config(model=Model.IDEALISTIC, horizon_frames=200)
        with pytest.raises(ConfigError):
            engine.run_frame_based(cfg)
        with pytest.raises(ConfigError):
            engine.run_idealistic(make_config(horizon_frames=200))


class TestFrameBased:
    def test_perfect_channel_no_retransmissions(self, make_config):
        cfg = make_config(horizon_frames=2000, success_override=1.0, seed=1)
        res = engine.run(cfg)
        im = res.intermittent
        assert im.udc == 0.0
        assert im.retransmissions == 0
        assert im.deliveries == im.attempts > 0

    def test_dead_channel_error_settles_at_occupancy(self, make_config):
        cfg = make_config(horizon_frames=20_000, success_override=0.0, seed=2)
        res = engine.run(cfg)
        im = res.intermittent
        # estimate frozen at 0: error fraction is the source's time in state 1
        assert im.tare == pytest.approx(0.4, abs=0.01)
        assert im.deliveries == 0
        assert im.udc is None

    def test_calibrated_error_levels(self, make_config):
        cfg = make_config(horizon_frames=30_000, success_override=0.62, seed=3)
        res = engine.run(cfg)
        assert res.intermittent.tare == pytest.approx(0.223, rel=0.15)
        assert res.intermittent.tacae == pytest.approx(0.638, rel=0.15)

    def test_unit_costs_make_cost_equal_error(self, make_config):
        cfg = make_config(horizon_frames=500, success_override=0.5,
                          c01=1.0, c10=1.0, seed=4)
        res = engine.run(cfg)
        assert res.intermittent.tacae == res.intermittent.tare

    def test_perfect_channel_error_shrinks_with_longer_frames(self, make_config):
        # with no losses, errors only cover the wait between a change in the
        # feedback slot and the next uplink slot, a ~1/T_F fraction of slots
        tare = {}
        for tf in (10, 100):
            cfg = make_config(horizon_frames=4000, success_override=1.0,
                              slots_per_frame=tf, seed=5)
            tare[tf] = engine.run(cfg).intermittent.tare
        assert tare[10] > tare[100] > 0

    def test_change_aware_never_retransmits(self, make_config):
        cfg = make_config(horizon_frames=3000, success_override=0.5,
                          policy_kind="change_aware", seed=6)
        res = engine.run(cfg)
        assert res.intermittent.retransmissions == 0
        assert res.intermittent.udc == 0.0

    def test_uniform_policy_attempt_rate(self, make_config):
        # period 2 on a 10-slot frame: 5 of the 9 uplink slots carry a packet
        cfg = make_config(horizon_frames=2000, success_override=1.0,
                          policy_kind="uniform", uniform_period=2, seed=7)
        res = engine.run(cfg)
        measured = 1900 * 10
        assert res.intermittent.attempts == pytest.approx(measured * 0.5, rel=0.01)


class TestIdealistic:
    def test_perfect_channel_zero_error(self, make_config):
        cfg = make_config(model=Model.IDEALISTIC, horizon_frames=2000,
                          success_override=1.0, seed=8)
        res = engine.run(cfg)
        assert res.intermittent.tare == 0.0

    def test_matches_closed_form(self, make_config):
        cfg = make_config(model=Model.IDEALISTIC, horizon_frames=20_000,
                          success_override=0.6, seed=9)
        res = engine.run(cfg)
        expected = analysis.tare_idealistic_closed_form(0.1, 0.15, 0.6)
        assert res.intermittent.tare == pytest.approx(expected, abs=0.005)
        assert res.intermittent.tare == pytest.approx(0.0690, abs=0.005)

    def test_udc_matches_chain_oracle(self, make_config):
        cfg = make_config(model=Model.IDEALISTIC, horizon_frames=30_000,
                          success_override=0.6196, seed=10)
        res = engine.run(cfg)
        assert res.intermittent.udc == pytest.approx(
            chain_udc_oracle(0.1, 0.15, 0.6196), rel=0.03)

    def test_broadband_keeps_frame_cadence(self, make_config):
        cfg = make_config(model=Model.IDEALISTIC, horizon_frames=2000, seed=11)
        res = engine.run(cfg)
        bound = res.broadband.rate_bps * 9 / 10
        assert 0 < res.broadband.throughput_bps <= bound + 1e-9


class TestBroadbandPath:
    def test_perfect_channel_exact_throughput(self, make_config):
        # horizon 10000 leaves 9900 measured frames, a whole number of
        # 4-frame block cycles, so the ratio is exact
        cfg = make_config(horizon_frames=10_000, bb_success_override=1.0, seed=12)
        res = engine.run(cfg)
        assert res.broadband.throughput_bps == 0.8 * res.broadband.rate_bps
        assert res.broadband.mean_frames_per_block == 4.0

    def test_throughput_bounded_by_uplink_fraction(self, make_config):
        for seed in range(3):
            cfg = make_config(horizon_frames=2000, seed=seed)
            res = engine.run(cfg)
            assert res.broadband.throughput_bps <= res.broadband.rate_bps * 0.9 + 1e-9

    def test_full_band_to_intermittent_disables_broadband(self, make_config):
        cfg = make_config(horizon_frames=500, b2_fraction=1.0, seed=13)
        res = engine.run(cfg)
        assert res.broadband.rate_bps == 0.0
        assert res.broadband.throughput_bps == 0.0
        assert res.broadband.energy_efficiency_bpj == 0.0
        assert res.intermittent.deliveries > 0

    def test_simulated_matches_predicted_expected_frames(self, make_config):
        cfg = make_config(horizon_frames=30_000, bb_success_override=0.9, seed=14)
        res = engine.run(cfg)
        ef = analysis.expected_frames(32, 0.9, 10)
        predicted = res.broadband.rate_bps * 32 / (ef * 10)
        assert res.broadband.throughput_bps == pytest.approx(predicted, rel=0.01)
        assert res.broadband.mean_frames_per_block == pytest.approx(ef, rel=0.01)

    def test_noma_forbids_broadband_override(self, make_config):
        with pytest.raises(ConfigError):
            make_config(scheme=Scheme.NOMA, bb_success_override=0.9)


class TestNomaPath:
    def test_engine_tables_match_scalar_decode(self, default_spec):
        from coexsim import cli
        from coexsim.engine import _build_link_tables

        cfg = cli.build_sim_config(default_spec, scheme=Scheme.NOMA,
                                   horizon_frames=200, seed=42)
        n = 2000
        ss = np.random.SeedSequence(7)
        rng_int, rng_bb = (np.random.default_rng(s) for s in ss.spawn(2))
        tables = _build_link_tables(cfg, n, rng_int, rng_bb)

        # replay the identical draws and check every slot against the scalar rule
        ss2 = np.random.SeedSequence(7)
        rng_int2, rng_bb2 = (np.random.default_rng(s) for s in ss2.spawn(2))
        beta1 = phy.large_scale_gain(cfg.bb_geometry)
        beta2 = phy.large_scale_gain(cfg.int_geometry)
        g1 = rng_bb2.exponential(beta1, n)
        g2 = rng_int2.exponential(beta2, n)
        sigma3 = phy.noise_power(cfg.noise, cfg.band_plan.total_hz)
        pol = dataclasses.replace(cfg.bb_policy, mean_gain=beta1)
        r1 = broadband.select_rate(pol, cfg.band_plan.total_hz, sigma3)
        p1 = broadband.select_power(pol, r1, cfg.band_plan.total_hz, sigma3)
        th1 = phy.decode_threshold(r1, cfg.band_plan.total_hz)
        th2 = phy.decode_threshold(cfg.intermittent_rate_bps, cfg.band_plan.total_hz)

        for t in range(n):
            out1, out2 = phy.decode_noma_slot(g1[t], p1, th1, g2[t],
                                              cfg.int_power_w, th2, sigma3)
            assert tables.bb_with_int[t] == out1.decoded
            assert tables.int_with_bb[t] == out2.decoded
            _, lone2 = phy.decode_noma_slot(0.0, 0.0, th1, g2[t],
                                            cfg.int_power_w, th2, sigma3,
                                            tx1=False)
            assert tables.int_alone[t] == lone2.decoded
            lone1, _ = phy.decode_noma_slot(g1[t], p1, th1, 0.0, 0.0, th2,
                                            sigma3, tx2=False)
            assert tables.bb_alone[t] == lone1.decoded

    def test_noma_run_produces_metrics(self, make_config):
        res = engine.run(make_config(scheme=Scheme.NOMA, horizon_frames=2000, seed=15))
        assert 0 <= res.intermittent.tare <= 1
        assert res.broadband.throughput_bps > 0
        assert res.broadband.energy_efficiency_bpj > 0
