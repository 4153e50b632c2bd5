"""Compare the formula with brute force on random staircase systems.

    python scripts/random_equivalence.py --count 500 --seed 7
"""

from __future__ import annotations

import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass

from varcount.counting import count_points
from varcount.oracle import partition_profile
from varcount.parser import serialize
from varcount.random_specs import random_spec


@dataclass
class Config:
    count: int = 200
    seed: int = 0
    qs: tuple[int, ...] = (3, 5, 7, 9, 11, 13)
    max_points: int = 13**6


def run(cfg: Config) -> int:
    rng = random.Random(cfg.seed)
    paths = Counter()
    formula_s = oracle_s = 0.0
    failures = 0
    for i in range(cfg.count):
        spec = random_spec(rng, qs=cfg.qs, max_points=cfg.max_points)
        tic = time.perf_counter()
        report = count_points(spec)
        formula_s += time.perf_counter() - tic
        tic = time.perf_counter()
        profile = partition_profile(spec)
        oracle_s += time.perf_counter() - tic
        paths.update(report.paths)
        if report.total != sum(profile.values()):
            failures += 1
            print(f"MISMATCH #{i}: formula {report.total}, oracle {sum(profile.values())}")
            print(serialize(spec))
    print(f"{cfg.count} specs, {failures} mismatches")
    print(f"level paths: {dict(paths)}")
    print(f"formula {formula_s:.2f} s, oracle {oracle_s:.2f} s")
    return 1 if failures else 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--qs", type=int, nargs="+", default=list(Config.qs))
    ap.add_argument("--max-points", type=int, default=Config.max_points)
    args = ap.parse_args()
    return run(Config(args.count, args.seed, tuple(args.qs), args.max_points))


if __name__ == "__main__":
    raise SystemExit(main())
