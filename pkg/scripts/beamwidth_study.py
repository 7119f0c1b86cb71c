"""Rate coverage for narrow vs wide beams at the reference traffic density.

Runs the 45/90 degree cut at 0.06 vehicles/m/lane, writes the usual CSV set,
and prints headline numbers: coverage of the best and worst cluster member at
a few rates plus the best-worst gap averaged over the rate grid.
"""

import argparse
import csv
import dataclasses
from collections import defaultdict
from pathlib import Path

from mmwv2v.config import ScenarioConfig, SweepSettings
from mmwv2v.runner import run_sweep

HEADLINE_RATES = (3.0e9, 4.5e9, 9.0e9)


def curves_by_series(path: Path):
    """rc_curve.csv rows -> {(psi, member): [(kappa, estimate), ...]}."""
    series = defaultdict(list)
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["grid_kind"] != "kappa":
                continue
            key = (float(row["psi_deg"]), row["member"])
            series[key].append((float(row["grid_value"]), float(row["estimate"])))
    return {k: sorted(v) for k, v in series.items()}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/beamwidth", help="output directory")
    ap.add_argument("--snapshots", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    config = dataclasses.replace(
        ScenarioConfig(),
        sweep=SweepSettings(psi_deg=(45.0, 90.0)),
        num_snapshots=args.snapshots,
        master_seed=args.seed,
    )
    run_sweep(config, output_dir=args.out, workers=args.workers, echo=print)

    series = curves_by_series(Path(args.out) / "rc_curve.csv")
    for psi in (45.0, 90.0):
        for member, label in (("M", "best"), ("m", "worst")):
            curve = dict(series[(psi, member)])
            cells = "  ".join(
                f"R_C({k / 1e9:.1f}G)={curve[k]:.3f}" for k in HEADLINE_RATES
            )
            print(f"psi={psi:>4.0f}  {label} member   {cells}")
        gap = sum(
            b - w
            for (_, b), (_, w) in zip(series[(psi, "M")], series[(psi, "m")])
        ) / len(series[(psi, "M")])
        print(f"psi={psi:>4.0f}  mean best-worst gap over the rate grid: {gap:.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
