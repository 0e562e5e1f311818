#!/usr/bin/env python3
"""Randomized verification of the special-pair weighted-sum property."""

import argparse
import json

from filtadm.pairs import fuzz_special_pairs


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    report = fuzz_special_pairs(args.trials, args.seed)
    print(json.dumps(report, indent=2, sort_keys=True))
    raise SystemExit(0 if report["failures"] == 0 else 1)


if __name__ == "__main__":
    main()
