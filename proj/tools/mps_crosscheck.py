#!/usr/bin/env python3
"""Solve each config with dcflex, export the same LP as MPS, solve it with
HiGHS and compare objectives."""

import argparse
import json
import pathlib
import subprocess
import sys

import highspy


def highs_objective(mps_path):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(mps_path))
    h.run()
    status = h.getModelStatus()
    if status != highspy.HighsModelStatus.kOptimal:
        raise RuntimeError(f"HiGHS status {h.modelStatusToString(status)} for {mps_path}")
    return h.getInfo().objective_function_value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", required=True)
    ap.add_argument("--work", required=True)
    ap.add_argument("--rel", type=float, default=1e-6)
    ap.add_argument("configs", nargs="+")
    args = ap.parse_args()

    work = pathlib.Path(args.work)
    work.mkdir(parents=True, exist_ok=True)
    failed = False
    for cfg in args.configs:
        name = pathlib.Path(cfg).stem
        out = work / name
        mps = work / f"{name}.mps"
        # Shedding is pinned off so both sides solve the same single LP.
        common = ["--config", cfg, "--shed-mode", "allowed"]
        subprocess.run([args.cli, "solve", *common, "--out", str(out)], check=True, capture_output=True)
        subprocess.run([args.cli, "solve", *common, "--out", str(out), "--export-mps", str(mps)],
                       check=True, capture_output=True)
        ours = json.loads((out / "result.json").read_text())["cost"]["total"]
        theirs = highs_objective(mps)
        ok = abs(ours - theirs) <= args.rel * (1 + max(abs(ours), abs(theirs)))
        failed |= not ok
        print(f"{name}: dcflex {ours:.9g} HiGHS {theirs:.9g} {'ok' if ok else 'MISMATCH'}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
