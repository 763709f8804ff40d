"""Experiment front end: INI configuration, sweep orchestration, CSV output,
and table-style summaries.

Config grammar: INI sections with key = value pairs (see DEFAULTS for every
section, key, and default). An empty or missing-section file runs with the
defaults. Unknown sections or keys are rejected. The [sweep] section defines
the grid axes; every other section describes the base run.

CSV contract: UTF-8, one header row, one record per (grid point, replication)
in canonical sort order, floats rendered with 9 significant digits, and an
empty field for an absent update-delivery cost.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import configparser
import hashlib
import sys
from dataclasses import dataclass, field, fields, replace
from typing import Optional

import numpy as np

from . import analysis, engine
from . import broadband as bb
from .engine import ConfigError, Model, Scheme, SimConfig
from .phy import BandPlan, LinkGeometry, NoiseModel
from .source import CostMatrix, DtmcParams, PolicyKind, SamplingPolicy

# Base-run defaults (system parameter table of the study this reproduces).
DEFAULTS = {
    "run": {
        "model": "frame_based",
        "scheme": "fdma",
        "seed": "12345",
        "horizon_frames": "100000",
        "success_override": "",
        "bb_success_override": "",
    },
    "frame": {
        "slots_per_frame": "10",
        "slot_seconds": "0.001",
    },
    "band": {
        "total_hz": "1e6",
        "b2_fraction": "0.4",
    },
    "source": {
        "p_s": "0.1",
        "q_s": "0.15",
    },
    "policy": {
        "kind": "semantics_aware",
        "uniform_period": "1",
    },
    "costs": {
        "c01": "5",
        "c10": "1",
    },
    "links": {
        "broadband_distance_m": "50",
        "intermittent_distance_m": "400",
        "carrier_hz": "2e9",
        "pathloss_exp": "2.6",
        "antenna_gain_product": "10",
    },
    "noise": {
        "temperature_k": "190",
        "figure_db": "5",
    },
    "broadband": {
        "target_error": "0.1",
        "max_rate_bps": "5e6",
        "block_size": "32",
    },
    "power": {
        "max_power_w": "0.2",
    },
    "intermittent": {
        "packet_bytes": "128",
    },
    "sweep": {
        "b2_fractions": "0.1 0.2 0.3 0.4 0.5 0.6 0.7 0.8 0.9 1.0",
        "distances_m": "100 200 400",
        "schemes": "fdma",
        "models": "frame_based idealistic",
        "replications": "10",
        "output": "",
    },
}

CSV_COLUMNS = [
    "scheme", "model", "distance_m", "b2_fraction", "replication", "seed",
    "p_s", "q_s", "success_override", "horizon_frames",
    "tare", "tacae", "udc", "attempts", "deliveries", "retransmissions",
    "rate_bps", "power_w", "throughput_bps", "energy_efficiency_bpj",
    "blocks_done",
]


@dataclass(frozen=True)
class ExperimentSpec:
    """Validated experiment description: a base run plus sweep axes."""

    model: Model
    scheme: Scheme
    seed: int
    horizon_frames: int
    success_override: Optional[float]
    bb_success_override: Optional[float]
    slots_per_frame: int
    slot_seconds: float
    total_hz: float
    b2_fraction: float
    p_s: float
    q_s: float
    policy_kind: PolicyKind
    uniform_period: int
    c01: float
    c10: float
    broadband_distance_m: float
    intermittent_distance_m: float
    carrier_hz: float
    pathloss_exp: float
    antenna_gain_product: float
    temperature_k: float
    figure_db: float
    target_error: float
    max_rate_bps: float
    block_size: int
    max_power_w: float
    packet_bytes: int
    sweep_b2_fractions: tuple[float, ...] = (0.4,)
    sweep_distances_m: tuple[float, ...] = (400.0,)
    sweep_schemes: tuple[Scheme, ...] = (Scheme.FDMA,)
    sweep_models: tuple[Model, ...] = (Model.FRAME_BASED,)
    replications: int = 10
    output: str = ""


@dataclass(frozen=True)
class ResultRow:
    """One flattened record per (grid point, replication)."""

    scheme: str
    model: str
    distance_m: float
    b2_fraction: float
    replication: int
    seed: int
    p_s: float
    q_s: float
    success_override: Optional[float]
    horizon_frames: int
    tare: float
    tacae: float
    udc: Optional[float]
    attempts: int
    deliveries: int
    retransmissions: int
    rate_bps: float
    power_w: float
    throughput_bps: float
    energy_efficiency_bpj: float
    blocks_done: int

    def sort_key(self):
        return (self.scheme, self.model, self.distance_m, self.b2_fraction,
                self.replication)


def _parse_value(section: str, key: str, raw: str):
    raw = raw.strip()
    where = f"[{section}] {key}"
    try:
        if key in ("seed", "horizon_frames", "slots_per_frame", "block_size",
                   "packet_bytes", "uniform_period", "replications"):
            return int(float(raw))
        if key in ("model", "models"):
            if key == "models":
                return tuple(Model(v) for v in raw.split())
            return Model(raw)
        if key in ("scheme", "schemes"):
            if key == "schemes":
                return tuple(Scheme(v) for v in raw.split())
            return Scheme(raw)
        if key == "kind":
            return PolicyKind(raw)
        if key in ("success_override", "bb_success_override"):
            return None if raw == "" else float(raw)
        if key in ("b2_fractions", "distances_m"):
            vals = tuple(float(v) for v in raw.split())
            if not vals:
                raise ValueError("empty grid axis")
            return vals
        if key == "output":
            return raw
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: cannot parse {raw!r} ({exc})") from None


def parse_config(path: Optional[str]) -> ExperimentSpec:
    """Load and validate an experiment description; None means all defaults."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                parser.read_file(fh, source=path)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except configparser.Error as exc:
            raise ConfigError(f"config parse error: {exc}") from None

    explicit: set[tuple[str, str]] = set()
    values: dict[tuple[str, str], object] = {}
    for section in parser.sections():
        if section not in DEFAULTS:
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in DEFAULTS[section]:
                raise ConfigError(f"unknown key '{key}' in section [{section}]")
            explicit.add((section, key))
            values[(section, key)] = _parse_value(section, key, raw)
    for section, keys in DEFAULTS.items():
        for key, default in keys.items():
            values.setdefault((section, key), _parse_value(section, key, default))

    scheme = values[("run", "scheme")]
    if scheme is Scheme.NOMA and ("band", "b2_fraction") in explicit:
        raise ConfigError("[band] b2_fraction: a shared-band (noma) run admits no sub-band split")

    spec = ExperimentSpec(
        model=values[("run", "model")],
        scheme=scheme,
        seed=values[("run", "seed")],
        horizon_frames=values[("run", "horizon_frames")],
        success_override=values[("run", "success_override")],
        bb_success_override=values[("run", "bb_success_override")],
        slots_per_frame=values[("frame", "slots_per_frame")],
        slot_seconds=values[("frame", "slot_seconds")],
        total_hz=values[("band", "total_hz")],
        b2_fraction=values[("band", "b2_fraction")],
        p_s=values[("source", "p_s")],
        q_s=values[("source", "q_s")],
        policy_kind=values[("policy", "kind")],
        uniform_period=values[("policy", "uniform_period")],
        c01=values[("costs", "c01")],
        c10=values[("costs", "c10")],
        broadband_distance_m=values[("links", "broadband_distance_m")],
        intermittent_distance_m=values[("links", "intermittent_distance_m")],
        carrier_hz=values[("links", "carrier_hz")],
        pathloss_exp=values[("links", "pathloss_exp")],
        antenna_gain_product=values[("links", "antenna_gain_product")],
        temperature_k=values[("noise", "temperature_k")],
        figure_db=values[("noise", "figure_db")],
        target_error=values[("broadband", "target_error")],
        max_rate_bps=values[("broadband", "max_rate_bps")],
        block_size=values[("broadband", "block_size")],
        max_power_w=values[("power", "max_power_w")],
        packet_bytes=values[("intermittent", "packet_bytes")],
        sweep_b2_fractions=values[("sweep", "b2_fractions")],
        sweep_distances_m=values[("sweep", "distances_m")],
        sweep_schemes=values[("sweep", "schemes")],
        sweep_models=values[("sweep", "models")],
        replications=values[("sweep", "replications")],
        output=values[("sweep", "output")],
    )
    _validate_spec(spec)
    return spec


def _validate_spec(spec: ExperimentSpec) -> None:
    if not 0 < spec.b2_fraction <= 1:
        raise ConfigError("[band] b2_fraction must lie in (0, 1]")
    if spec.replications < 1:
        raise ConfigError("[sweep] replications must be >= 1")
    for frac in spec.sweep_b2_fractions:
        if not 0 < frac <= 1:
            raise ConfigError("[sweep] b2_fractions must lie in (0, 1]")
    for d in spec.sweep_distances_m:
        if d <= 0:
            raise ConfigError("[sweep] distances_m must be > 0")
    # Eagerly build the base run so constraint violations surface at parse time.
    build_sim_config(spec)


def emit_config(spec: ExperimentSpec, path: str) -> None:
    """Write a spec back out in canonical INI form (parse round-trips)."""
    parser = configparser.ConfigParser()

    def fmt(value) -> str:
        if value is None:
            return ""
        if isinstance(value, (Model, Scheme, PolicyKind)):
            return value.value
        if isinstance(value, tuple):
            return " ".join(fmt(v) for v in value)
        if isinstance(value, float):
            return f"{value:.9g}"
        return str(value)

    mapping = {
        "run": dict(model=spec.model, scheme=spec.scheme, seed=spec.seed,
                    horizon_frames=spec.horizon_frames,
                    success_override=spec.success_override,
                    bb_success_override=spec.bb_success_override),
        "frame": dict(slots_per_frame=spec.slots_per_frame,
                      slot_seconds=spec.slot_seconds),
        "band": dict(total_hz=spec.total_hz),
        "source": dict(p_s=spec.p_s, q_s=spec.q_s),
        "policy": dict(kind=spec.policy_kind, uniform_period=spec.uniform_period),
        "costs": dict(c01=spec.c01, c10=spec.c10),
        "links": dict(broadband_distance_m=spec.broadband_distance_m,
                      intermittent_distance_m=spec.intermittent_distance_m,
                      carrier_hz=spec.carrier_hz, pathloss_exp=spec.pathloss_exp,
                      antenna_gain_product=spec.antenna_gain_product),
        "noise": dict(temperature_k=spec.temperature_k, figure_db=spec.figure_db),
        "broadband": dict(target_error=spec.target_error,
                          max_rate_bps=spec.max_rate_bps,
                          block_size=spec.block_size),
        "power": dict(max_power_w=spec.max_power_w),
        "intermittent": dict(packet_bytes=spec.packet_bytes),
        "sweep": dict(b2_fractions=spec.sweep_b2_fractions,
                      distances_m=spec.sweep_distances_m,
                      schemes=spec.sweep_schemes, models=spec.sweep_models,
                      replications=spec.replications, output=spec.output),
    }
    if spec.scheme is not Scheme.NOMA:
        mapping["band"]["b2_fraction"] = spec.b2_fraction
    for section, keys in mapping.items():
        parser[section] = {k: fmt(v) for k, v in keys.items()}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        parser.write(fh)


def build_sim_config(spec: ExperimentSpec, scheme: Optional[Scheme] = None,
                     model: Optional[Model] = None,
                     distance_m: Optional[float] = None,
                     b2_fraction: Optional[float] = None,
                     seed: Optional[int] = None,
                     horizon_frames: Optional[int] = None) -> SimConfig:
    """Materialize one runnable configuration from the spec, with optional
    per-grid-point overrides."""
    scheme = scheme or spec.scheme
    model = model or spec.model
    distance_m = spec.intermittent_distance_m if distance_m is None else distance_m
    b2_fraction = spec.b2_fraction if b2_fraction is None else b2_fraction
    if scheme is Scheme.NOMA:
        band = BandPlan.noma(spec.total_hz)
    else:
        band = BandPlan.fdma(spec.total_hz, b2_fraction * spec.total_hz)
    policy = SamplingPolicy(spec.policy_kind, spec.uniform_period)
    return SimConfig(
        band_plan=band,
        bb_geometry=LinkGeometry(spec.broadband_distance_m, spec.carrier_hz,
                                 spec.pathloss_exp, spec.antenna_gain_product),
        int_geometry=LinkGeometry(distance_m, spec.carrier_hz,
                                  spec.pathloss_exp, spec.antenna_gain_product),
        noise=NoiseModel(spec.temperature_k, spec.figure_db),
        dtmc=DtmcParams(spec.p_s, spec.q_s),
        policy=policy,
        costs=CostMatrix(spec.c01, spec.c10),
        bb_policy=bb.BroadbandPolicy(spec.target_error, spec.max_rate_bps,
                                     spec.max_power_w),
        frame=engine.FrameConfig(spec.slots_per_frame, spec.slot_seconds,
                                 horizon_frames or spec.horizon_frames),
        model=model,
        scheme=scheme,
        packet_bytes=spec.packet_bytes,
        int_power_w=spec.max_power_w,
        block_size=spec.block_size,
        success_override=spec.success_override,
        bb_success_override=spec.bb_success_override,
        seed=spec.seed if seed is None else seed,
    )


def derive_run_seed(master_seed: int, scheme: Scheme, model: Model,
                    distance_m: float, b2_fraction: float, replication: int) -> int:
    """Stable per-run seed from the grid coordinates, independent of grid
    enumeration order."""
    tag = f"{scheme.value}|{model.value}|{distance_m:.9g}|{b2_fraction:.9g}|{replication}"
    digest = hashlib.sha256(tag.encode()).digest()
    coord_entropy = int.from_bytes(digest[:8], "big")
    mixed = np.random.SeedSequence([master_seed, coord_entropy])
    return int(mixed.generate_state(1, np.uint64)[0])


def _grid(spec: ExperimentSpec):
    for scheme in spec.sweep_schemes:
        fracs = spec.sweep_b2_fractions if scheme is Scheme.FDMA else (1.0,)
        for model in spec.sweep_models:
            for distance in spec.sweep_distances_m:
                for frac in fracs:
                    for rep in range(spec.replications):
                        yield scheme, model, distance, frac, rep


def _run_point(args) -> ResultRow:
    spec, scheme, model, distance, frac, rep, horizon = args
    seed = derive_run_seed(spec.seed, scheme, model, distance, frac, rep)
    config = build_sim_config(spec, scheme=scheme, model=model,
                              distance_m=distance, b2_fraction=frac,
                              seed=seed, horizon_frames=horizon)
    result = engine.run(config)
    return result_to_row(result, replication=rep, b2_fraction=frac)


def result_to_row(result: engine.RunResult, replication: int,
                  b2_fraction: float) -> ResultRow:
    cfg = result.config
    return ResultRow(
        scheme=cfg.scheme.value,
        model=cfg.model.value,
        distance_m=cfg.int_geometry.distance_m,
        b2_fraction=b2_fraction,
        replication=replication,
        seed=result.seed,
        p_s=cfg.dtmc.p_s,
        q_s=cfg.dtmc.q_s,
        success_override=cfg.success_override,
        horizon_frames=cfg.frame.horizon_frames,
        tare=result.intermittent.tare,
        tacae=result.intermittent.tacae,
        udc=result.intermittent.udc,
        attempts=result.intermittent.attempts,
        deliveries=result.intermittent.deliveries,
        retransmissions=result.intermittent.retransmissions,
        rate_bps=result.broadband.rate_bps,
        power_w=result.broadband.power_w,
        throughput_bps=result.broadband.throughput_bps,
        energy_efficiency_bpj=result.broadband.energy_efficiency_bpj,
        blocks_done=result.broadband.blocks_done,
    )


def run_experiment(spec: ExperimentSpec, parallel: int = 1,
                   horizon_frames: Optional[int] = None) -> list[ResultRow]:
    """Run every (grid point, replication) and return canonically sorted rows."""
    jobs = [(spec, scheme, model, distance, frac, rep, horizon_frames)
            for scheme, model, distance, frac, rep in _grid(spec)]
    if not jobs:
        raise ConfigError("sweep grid is empty")
    if parallel > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=parallel) as pool:
            rows = list(pool.map(_run_point, jobs, chunksize=4))
    else:
        rows = [_run_point(job) for job in jobs]
    rows.sort(key=ResultRow.sort_key)
    return rows


def _format_field(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def emit_csv(rows: list[ResultRow], path: str) -> None:
    """Write rows in the documented column order; floats get 9 significant
    digits and an absent UDC becomes an empty field."""
    if not rows:
        raise ConfigError("refusing to write an empty result set")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(_format_field(getattr(row, col))
                              for col in CSV_COLUMNS) + "\n")


def _print_result(result: engine.RunResult) -> None:
    im, bm = result.intermittent, result.broadband
    udc = "n/a" if im.udc is None else f"{im.udc:.4f}"
    print(f"model={result.config.model.value} scheme={result.config.scheme.value} "
          f"seed={result.seed}")
    print(f"  TARE={im.tare:.5f}  TACAE={im.tacae:.5f}  UDC={udc}  "
          f"(attempts={im.attempts} deliveries={im.deliveries} "
          f"retransmissions={im.retransmissions})")
    print(f"  broadband: rate={bm.rate_bps:.4g} b/s power={bm.power_w:.4g} W "
          f"throughput={bm.throughput_bps:.4g} b/s "
          f"EE={bm.energy_efficiency_bpj:.4g} b/J blocks={bm.blocks_done}")


def _cmd_simulate(args) -> int:
    spec = parse_config(args.config)
    config = build_sim_config(spec, seed=args.seed,
                              horizon_frames=args.frames)
    result = engine.run(config)
    _print_result(result)
    if args.out:
        frac = spec.b2_fraction if config.scheme is Scheme.FDMA else 1.0
        emit_csv([result_to_row(result, replication=0, b2_fraction=frac)], args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    spec = parse_config(args.config)
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    rows = run_experiment(spec, parallel=args.parallel,
                          horizon_frames=args.frames)
    out = args.out or spec.output
    if not out:
        raise ConfigError("no output path: pass --out or set [sweep] output")
    emit_csv(rows, out)
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def _cmd_analyze(args) -> int:
    spec = parse_config(args.config)
    config = build_sim_config(spec)
    band = config.band_plan
    lines: list[tuple[str, float]] = []
    beta1 = analysis.phy.large_scale_gain(config.bb_geometry)
    beta2 = analysis.phy.large_scale_gain(config.int_geometry)
    lines.append(("broadband_mean_gain", beta1))
    lines.append(("intermittent_mean_gain", beta2))
    bb_band = band.b3_hz if band.is_noma else band.b1_hz
    int_band = band.b3_hz if band.is_noma else band.b2_hz
    r2 = config.intermittent_rate_bps
    lines.append(("intermittent_rate_bps", r2))
    if bb_band > 0:
        sigma_bb = analysis.phy.noise_power(config.noise, bb_band)
        policy = replace(config.bb_policy, mean_gain=beta1)
        r1 = bb.select_rate(policy, bb_band, sigma_bb)
        p1 = bb.select_power(policy, r1, bb_band, sigma_bb)
        ef = analysis.expected_frames(config.block_size, 1 - config.bb_policy.target_error,
                                      config.frame.slots_per_frame)
        s_pred = r1 * config.block_size / (ef * config.frame.slots_per_frame)
        lines.append(("broadband_rate_bps", r1))
        lines.append(("broadband_power_w", p1))
        lines.append(("expected_frames_per_block", ef))
        lines.append(("predicted_throughput_bps", s_pred))
        lines.append(("predicted_energy_efficiency_bpj", s_pred / p1))
    if not band.is_noma and int_band > 0:
        p2 = analysis.fdma_intermittent_success(config.int_geometry, config.noise,
                                                int_band, r2, config.int_power_w)
        lines.append(("intermittent_success_prob", p2))
        p_eff = config.success_override if config.success_override is not None else p2
        tare = analysis.tare_idealistic_closed_form(spec.p_s, spec.q_s, p_eff)
        metrics = analysis.idealistic_chain_metrics(config.dtmc, p_eff, config.costs)
        lines.append(("idealistic_tare_closed_form", tare))
        lines.append(("idealistic_chain_tare", metrics.tare))
        lines.append(("idealistic_chain_tacae", metrics.tacae))
    for name, value in lines:
        print(f"{name} = {value:.9g}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("quantity,value\n")
            for name, value in lines:
                fh.write(f"{name},{value:.9g}\n")
        print(f"wrote {args.out}")
    return 0


# Calibrated per-slot decode probability used by the table summaries: inside
# the 0.62 +/- 0.01 band that reproduces the reference operating point.
CALIBRATED_OVERRIDE = 0.61


def _metrics_at(spec: ExperimentSpec, model: Model, p_s: float, q_s: float,
                override: float, horizon: int, seed: int):
    spec = replace(spec, p_s=p_s, q_s=q_s, success_override=override)
    config = build_sim_config(spec, model=model, horizon_frames=horizon, seed=seed)
    return engine.run(config).intermittent


def _cmd_tables(args) -> int:
    spec = parse_config(args.config)
    horizon = args.frames or spec.horizon_frames
    seed = args.seed if args.seed is not None else spec.seed
    override = spec.success_override if spec.success_override is not None \
        else CALIBRATED_OVERRIDE

    def fmt_udc(value):
        return "n/a" if value is None else f"{value:.3f}"

    if args.which == 2:
        ideal = _metrics_at(spec, Model.IDEALISTIC, spec.p_s, spec.q_s,
                            override, horizon, seed)
        frame = _metrics_at(spec, Model.FRAME_BASED, spec.p_s, spec.q_s,
                            override, horizon, seed)
        print(f"calibrated comparison (override={override}, "
              f"source=({spec.p_s}, {spec.q_s}))")
        print(f"{'metric':<8}{'Idealistic':>12}{'Frame-Based':>13}")
        print(f"{'TARE':<8}{ideal.tare:>12.3f}{frame.tare:>13.3f}")
        print(f"{'TACAE':<8}{ideal.tacae:>12.3f}{frame.tacae:>13.3f}")
        print(f"{'UDC':<8}{fmt_udc(ideal.udc):>12}{fmt_udc(frame.udc):>13}")
    elif args.which == 3:
        slow = (0.1, 0.15)
        fast = (0.2, 0.7)
        cells = {}
        for model in (Model.IDEALISTIC, Model.FRAME_BASED):
            for name, (ps, qs) in (("slow", slow), ("fast", fast)):
                cells[(model, name)] = _metrics_at(spec, model, ps, qs,
                                                   override, horizon, seed)
        print(f"source-variability comparison (override={override})")
        print(f"{'metric':<8}{'Ideal/slow':>12}{'Ideal/fast':>12}"
              f"{'Frame/slow':>12}{'Frame/fast':>12}")
        for metric in ("tare", "tacae", "udc"):
            row = [cells[(m, s)] for m in (Model.IDEALISTIC, Model.FRAME_BASED)
                   for s in ("slow", "fast")]
            if metric == "udc":
                vals = [fmt_udc(c.udc) for c in row]
            else:
                vals = [f"{getattr(c, metric):.3f}" for c in row]
            print(f"{metric.upper():<8}" + "".join(f"{v:>12}" for v in vals))
    else:
        print("scheme comparison, physical-layer driven (frame-based)")
        print(f"{'distance':<10}{'TACAE fdma':>12}{'TACAE noma':>12}"
              f"{'UDC fdma':>12}{'UDC noma':>12}")
        base = replace(spec, success_override=None)
        for d in spec.sweep_distances_m:
            per_scheme = {}
            for scheme in (Scheme.FDMA, Scheme.NOMA):
                config = build_sim_config(base, scheme=scheme, distance_m=d,
                                          horizon_frames=horizon, seed=seed)
                per_scheme[scheme] = engine.run(config).intermittent
            f, n = per_scheme[Scheme.FDMA], per_scheme[Scheme.NOMA]
            print(f"{d:<10g}{f.tacae:>12.4f}{n.tacae:>12.4f}"
                  f"{fmt_udc(f.udc):>12}{fmt_udc(n.udc):>12}")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="coexsim",
        description="Simulate an intermittent source-tracking user and a "
                    "broadband user sharing frame-based wireless resources.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, out_required=False):
        p.add_argument("--config", default=None, help="INI config file")
        p.add_argument("--seed", type=int, default=None, help="seed override")
        p.add_argument("--frames", type=int, default=None,
                       help="horizon override in frames")

    p_sim = sub.add_parser("simulate", help="run the base configuration once")
    add_common(p_sim)
    p_sim.add_argument("--out", default=None, help="CSV output path")
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="run the configured grid")
    add_common(p_sweep)
    p_sweep.add_argument("--out", default=None, help="CSV output path")
    p_sweep.add_argument("--parallel", type=int, default=1,
                         help="worker processes for grid points")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_an = sub.add_parser("analyze", help="closed-form quantities, no simulation")
    p_an.add_argument("--config", default=None)
    p_an.add_argument("--out", default=None, help="CSV output path")
    p_an.set_defaults(func=_cmd_analyze)

    p_tab = sub.add_parser("tables", help="reference table layouts from runs")
    add_common(p_tab)
    p_tab.add_argument("--which", type=int, choices=(2, 3, 4), default=2)
    p_tab.set_defaults(func=_cmd_tables)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, bb.InfeasibleLinkError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
