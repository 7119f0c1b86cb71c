"""Print the headline table for a finished run directory.

Consumes only the public CSV contract (rc_curve.csv, summary.csv), so it
works on any output produced by `mmwv2v simulate`, local or copied from
elsewhere. No simulation happens here.
"""

import argparse
import csv
import json
from pathlib import Path

ANCHOR_RATE = 4.6e9


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("run_dir", help="directory holding rc_curve.csv and friends")
    args = ap.parse_args()
    run_dir = Path(args.run_dir)

    manifest = json.loads((run_dir / "manifest.json").read_text())
    print(
        f"run {manifest['config_digest'][:16]}  seed {manifest['master_seed']}  "
        f"{manifest['num_snapshots']} snapshots/point  "
        f"{manifest['duration_seconds']:.0f}s"
    )

    # best-member coverage at the knot nearest the anchor rate, per point
    nearest = {}
    with open(run_dir / "rc_curve.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            if row["grid_kind"] != "kappa" or row["member"] != "M":
                continue
            key = row["sweep_id"]
            dist = abs(float(row["grid_value"]) - ANCHOR_RATE)
            if key not in nearest or dist < nearest[key][0]:
                nearest[key] = (dist, row)

    print(f"{'sweep point':>24} {'n_eff':>6} {'empty':>6} "
          f"{'R_C near 4.6 Gb/s (best member)':>33}")
    with open(run_dir / "summary.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            _, rc_row = nearest[row["sweep_id"]]
            knot = float(rc_row["grid_value"]) / 1e9
            print(
                f"{row['sweep_id']:>24} {row['n_effective']:>6} {row['n_empty']:>6} "
                f"{float(rc_row['estimate']):>12.3f} at {knot:.2f} Gb/s "
                f"[{float(rc_row['ci_low']):.3f}, {float(rc_row['ci_high']):.3f}]"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
