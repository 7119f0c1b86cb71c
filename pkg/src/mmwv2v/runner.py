"""Sweep orchestration: snapshots in, curve CSVs and a run manifest out.

Every sweep point is an independent Monte Carlo experiment. All random
streams derive from SeedSequence(master_seed, spawn_key=(point, snapshot,
role)), so results do not depend on execution order or worker count, and a
re-run with the same config and seed is byte-identical.

Three snapshot regimes (mobility model):
  off     independent hard-core Poisson placements, no motion;
  trace   one placement per point, car-following warmup once, then captures
          every snapshot_spacing seconds of simulated driving, with TX/RX
          modes and boresights re-randomized each capture (per-slot MAC);
  redraw  fresh placement plus full warmup per snapshot (slow, validation).
"""

from __future__ import annotations

import concurrent.futures
import csv
import dataclasses
import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._version import __version__
from .config import ScenarioConfig, SweepPoint, config_digest, config_to_dict
from .exceptions import ConfigError
from .mac import form_cluster
from .metrics import MetricAccumulator, evaluate_snapshot
from .mobility import KineticState, evolve
from .road import remark_modes_and_beams, sample_snapshot, tagged_receiver_index

ROLE_PLACEMENT, ROLE_EVAL, ROLE_REMARK, ROLE_MOBILITY = 0, 1, 2, 3
MAX_RECEIVER_RETRIES = 100

CSV_COLUMNS = (
    "sweep_id",
    "lambda",
    "psi_deg",
    "member",
    "grid_kind",
    "grid_value",
    "estimate",
    "ci_low",
    "ci_high",
    "n_effective",
)

REFERENCE_RATE = 4.6e9  # summary reports R_C(M) at the grid point nearest this


def _seed_seq(
    master_seed: int, point: int, snapshot: int, role: int, attempt: int = 0
) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(point, snapshot, role, attempt))


def _stream(
    master_seed: int, point: int, snapshot: int, role: int, attempt: int = 0
) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(_seed_seq(master_seed, point, snapshot, role, attempt))
    )


@dataclass
class PointOutcome:
    point: SweepPoint
    accumulator: MetricAccumulator
    n_no_receiver: int
    duration_seconds: float


def _fresh_accumulator(config: ScenarioConfig) -> MetricAccumulator:
    return MetricAccumulator(
        theta_grid=np.array(config.metrics.theta_grid),
        kappa_grid=np.array(config.metrics.kappa_grid),
        bandwidth=config.channel.bandwidth,
        rate_subslot_divisor=(
            config.mac.num_subslots if config.flags.subslot_rate_scaling else 1
        ),
        empty_as_outage=config.flags.empty_cluster_as_outage,
    )


def _measure_slot(
    snapshot,
    config: ScenarioConfig,
    antenna,
    acc: MetricAccumulator,
    eval_rng: np.random.Generator,
) -> bool:
    """Cluster formation and SINR evaluation for one captured slot.

    Returns False when no tagged receiver exists in the receiver lane.
    """
    rx_index = tagged_receiver_index(snapshot, config.flags.receiver_lane)
    if rx_index is None:
        acc.record_unserved()
        return False
    receiver = snapshot.vehicle_at(rx_index)
    cluster = form_cluster(
        receiver,
        snapshot,
        config.mac,
        config.channel,
        antenna,
        rng=eval_rng if config.mac.fading_in_detection else None,
        cars_block=config.flags.cars_block,
    )
    if cluster.is_empty:
        acc.record(cluster)
        return True
    evaluated, _ = evaluate_snapshot(
        receiver, cluster, snapshot, config.channel, antenna, eval_rng
    )
    acc.record(evaluated)
    return True


def run_point(config: ScenarioConfig, point: SweepPoint) -> PointOutcome:
    """Run the full snapshot budget of one sweep point."""
    started = time.perf_counter()
    road = point.road_for(config)
    antenna = point.antenna_for(config)
    acc = _fresh_accumulator(config)
    seed = config.master_seed
    n_snapshots = config.num_snapshots
    sectors = antenna.num_sectors
    no_receiver = 0
    mode = config.mobility.model

    if mode in ("off", "redraw"):
        krauss = config.mobility.krauss
        warm_steps = round(krauss.warmup_duration / krauss.time_step)
        for i in range(n_snapshots):
            # a slot without a receiver in the tagged lane is resampled, with
            # the attempt index folded into the seed so retries stay reproducible
            for attempt in range(MAX_RECEIVER_RETRIES):
                snapshot = sample_snapshot(
                    road,
                    config.p_rx,
                    sectors,
                    _seed_seq(seed, point.index, i, ROLE_PLACEMENT, attempt),
                )
                if mode == "redraw":
                    snapshot, _ = evolve(
                        snapshot,
                        KineticState.at_rest(snapshot),
                        krauss,
                        _stream(seed, point.index, i, ROLE_MOBILITY, attempt),
                        warm_steps,
                    )
                if tagged_receiver_index(snapshot, config.flags.receiver_lane) is not None:
                    break
            eval_rng = _stream(seed, point.index, i, ROLE_EVAL)
            if not _measure_slot(snapshot, config, antenna, acc, eval_rng):
                no_receiver += 1
    else:  # trace
        krauss = config.mobility.krauss
        snapshot = sample_snapshot(
            road, config.p_rx, sectors, _seed_seq(seed, point.index, 0, ROLE_PLACEMENT)
        )
        mob_rng = _stream(seed, point.index, 0, ROLE_MOBILITY)
        state = KineticState.at_rest(snapshot)
        warm_steps = round(krauss.warmup_duration / krauss.time_step)
        snapshot, state = evolve(snapshot, state, krauss, mob_rng, warm_steps)
        spacing = config.mobility.steps_between_snapshots
        for i in range(n_snapshots):
            if i > 0:
                snapshot, state = evolve(snapshot, state, krauss, mob_rng, spacing)
            # no receiver: re-draw the slot marks (positions are the trace's)
            for attempt in range(MAX_RECEIVER_RETRIES):
                mode_ss, steer_ss = _seed_seq(
                    seed, point.index, i, ROLE_REMARK, attempt
                ).spawn(2)
                slot = remark_modes_and_beams(
                    snapshot,
                    mode_rng=np.random.Generator(np.random.PCG64(mode_ss)),
                    steer_rng=np.random.Generator(np.random.PCG64(steer_ss)),
                    p_rx=config.p_rx,
                    num_sectors=sectors,
                )
                if tagged_receiver_index(slot, config.flags.receiver_lane) is not None:
                    break
            eval_rng = _stream(seed, point.index, i, ROLE_EVAL)
            if not _measure_slot(slot, config, antenna, acc, eval_rng):
                no_receiver += 1

    return PointOutcome(
        point=point,
        accumulator=acc,
        n_no_receiver=no_receiver,
        duration_seconds=time.perf_counter() - started,
    )


def _run_point_payload(payload: tuple[ScenarioConfig, SweepPoint]) -> PointOutcome:
    return run_point(*payload)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _curve_rows(config: ScenarioConfig, outcome: PointOutcome, kind: str):
    point = outcome.point
    lam = point.lambda_value(config)
    for member in ("M", "m"):
        grid, est, lo, hi = outcome.accumulator.curve(member, kind)
        for g, e, l, h in zip(grid, est, lo, hi):
            yield (
                point.sweep_id,
                _fmt(float(lam)),
                _fmt(float(point.psi_deg)),
                member,
                kind,
                _fmt(float(g)),
                _fmt(float(e)),
                _fmt(float(l)),
                _fmt(float(h)),
                str(outcome.accumulator.n_effective),
            )


def reference_rate_index(kappa_grid) -> int:
    return int(np.argmin(np.abs(np.asarray(kappa_grid) - REFERENCE_RATE)))


def _summary_row(config: ScenarioConfig, outcome: PointOutcome):
    acc = outcome.accumulator
    point = outcome.point
    k_idx = reference_rate_index(acc.kappa_grid)
    _, est, _, _ = acc.curve("M", "kappa")
    return (
        point.sweep_id,
        _fmt(float(point.lambda_value(config))),
        _fmt(float(point.psi_deg)),
        "" if point.epsilon is None else _fmt(float(point.epsilon)),
        str(acc.n_offered),
        str(acc.n_effective),
        str(acc.n_empty),
        str(acc.n_truncated),
        str(outcome.n_no_receiver),
        _fmt(float(acc.kappa_grid[k_idx])),
        _fmt(float(est[k_idx])),
    )


SUMMARY_COLUMNS = (
    "sweep_id",
    "lambda",
    "psi_deg",
    "epsilon",
    "n_offered",
    "n_effective",
    "n_empty",
    "n_truncated",
    "n_no_receiver",
    "reference_kappa",
    "rc_reference_M",
)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


@dataclass
class RunManifest:
    version: str
    config_digest: str
    config: dict
    master_seed: int
    num_snapshots: int
    workers: int
    duration_seconds: float
    points: list[dict]
    files: dict

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def run_sweep(
    config: ScenarioConfig,
    output_dir: str | Path | None = None,
    workers: int = 1,
    echo=None,
) -> RunManifest:
    """Execute every sweep point and write rc_curve.csv, pt_curve.csv,
    summary.csv, and manifest.json under output_dir.

    `echo`, when given, receives one progress line per finished point.
    """
    out = Path(output_dir if output_dir is not None else config.output_dir or "")
    if str(out) in ("", "."):
        raise ConfigError(["no output directory: pass --out or set run.output_dir"])
    out.mkdir(parents=True, exist_ok=True)
    probe = out / ".write_probe"
    probe.write_text("")  # fail before any computation if not writable
    probe.unlink()

    started = time.perf_counter()
    points = config.sweep_points()
    if workers > 1 and len(points) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=min(workers, len(points))) as pool:
            outcomes = list(pool.map(_run_point_payload, [(config, p) for p in points]))
    else:
        outcomes = []
        for p in points:
            outcome = run_point(config, p)
            outcomes.append(outcome)
            if echo is not None:
                echo(_progress_line(config, outcome))
    if workers > 1 and echo is not None:
        for outcome in outcomes:
            echo(_progress_line(config, outcome))

    rc_rows, pt_rows, summary_rows = [], [], []
    for outcome in outcomes:
        rc_rows.extend(_curve_rows(config, outcome, "kappa"))
        pt_rows.extend(_curve_rows(config, outcome, "theta"))
        summary_rows.append(_summary_row(config, outcome))

    _write_csv(out / "rc_curve.csv", CSV_COLUMNS, rc_rows)
    _write_csv(out / "pt_curve.csv", CSV_COLUMNS, pt_rows)
    _write_csv(out / "summary.csv", SUMMARY_COLUMNS, summary_rows)

    manifest = RunManifest(
        version=__version__,
        config_digest=config_digest(config),
        config=config_to_dict(config),
        master_seed=config.master_seed,
        num_snapshots=config.num_snapshots,
        workers=workers,
        duration_seconds=time.perf_counter() - started,
        points=[
            {
                "sweep_id": oc.point.sweep_id,
                "point_index": oc.point.index,
                "seed_spawn_key_prefix": [oc.point.index],
                "lambda": oc.point.lambda_value(config),
                "psi_deg": oc.point.psi_deg,
                "epsilon": oc.point.epsilon,
                "n_offered": oc.accumulator.n_offered,
                "n_effective": oc.accumulator.n_effective,
                "n_empty_cluster": oc.accumulator.n_empty,
                "n_truncated": oc.accumulator.n_truncated,
                "n_no_receiver": oc.n_no_receiver,
                "duration_seconds": oc.duration_seconds,
            }
            for oc in outcomes
        ],
        files={
            "rc_curve": str(out / "rc_curve.csv"),
            "pt_curve": str(out / "pt_curve.csv"),
            "summary": str(out / "summary.csv"),
        },
    )
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def _progress_line(config: ScenarioConfig, outcome: PointOutcome) -> str:
    acc = outcome.accumulator
    k_idx = reference_rate_index(acc.kappa_grid)
    _, est, _, _ = acc.curve("M", "kappa")
    return (
        f"[{outcome.point.sweep_id}] {acc.n_offered} snapshots in "
        f"{outcome.duration_seconds:.1f}s; served {acc.n_effective}, "
        f"empty {acc.n_empty}, truncated {acc.n_truncated}; "
        f"R_C(M) at {acc.kappa_grid[k_idx] / 1e9:.2f} Gbps = {est[k_idx]:.4f}"
    )
