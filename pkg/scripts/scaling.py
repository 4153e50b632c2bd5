"""Formula time against brute-force time as the number of variables grows.

Fixes one equation shape over F_q and widens the last block, so the oracle
cost grows like q^{n_t} while the formula cost depends on r_t only.

    python scripts/scaling.py --q 7 --max-vars 8
"""

from __future__ import annotations

import argparse
import random
import time
from dataclasses import dataclass

from varcount.counting import count_points
from varcount.oracle import brute_count
from varcount.random_specs import field_of_order
from varcount.variety import RawSystem, validate


@dataclass
class Config:
    q: int = 7
    max_vars: int = 7
    seed: int = 1
    monomials: int = 3


def make_spec(cfg: Config, nvars: int, rng: random.Random):
    F = field_of_order(cfg.q)
    r = tuple(range(1, cfg.monomials + 1))
    widths = tuple(range(nvars - cfg.monomials + 1, nvars + 1))
    a = [[F.from_code(rng.randrange(1, cfg.q)) for _ in r]]
    e = [[[rng.randint(1, 2 * (cfg.q - 1)) for _ in range(w)] for w in widths]]
    return validate(RawSystem(F, a, [F.one], e, r, widths))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=Config.q)
    ap.add_argument("--max-vars", type=int, default=Config.max_vars)
    ap.add_argument("--seed", type=int, default=Config.seed)
    args = ap.parse_args()
    cfg = Config(args.q, args.max_vars, args.seed)
    rng = random.Random(cfg.seed)
    print(f"{'n_t':>4} {'total':>12} {'formula_ms':>12} {'oracle_ms':>12}")
    for nvars in range(cfg.monomials, cfg.max_vars + 1):
        spec = make_spec(cfg, nvars, rng)
        tic = time.perf_counter()
        total = count_points(spec).total
        f_ms = (time.perf_counter() - tic) * 1e3
        tic = time.perf_counter()
        brute = brute_count(spec)
        o_ms = (time.perf_counter() - tic) * 1e3
        assert brute == total, (nvars, total, brute)
        print(f"{nvars:>4} {total:>12} {f_ms:>12.2f} {o_ms:>12.2f}")


if __name__ == "__main__":
    main()
