"""Build and verify integer exclusion forms for many admissible sets.

Samples random subsets of [1, max_element], closes them under division by
m-th powers, constructs the form and checks the represented set exactly up to
the bound.  Prints rank against the (B+1)(g(m)+1) bound.

    python3 scripts/integer_exclusion_sweep.py --trials 20 --bound 80
"""

import argparse
import random
import time
from dataclasses import dataclass

from higherforms.construct_z import construct_excluding_z, rank_bound_z
from higherforms.repsearch import verify_exact


@dataclass
class SweepConfig:
    trials: int = 10
    m: int = 4
    max_element: int = 40
    max_size: int = 4
    bound: int = 60
    seed: int = 0


def admissible_sample(rng, cfg):
    A = set(rng.sample(range(1, cfg.max_element + 1), rng.randint(0, cfg.max_size)))
    changed = True
    while changed:
        changed = False
        for a in list(A):
            b = 2
            while b**cfg.m <= a:
                if a % b**cfg.m == 0 and a // b**cfg.m not in A:
                    A.add(a // b**cfg.m)
                    changed = True
                b += 1
    return A


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    for name, default in vars(SweepConfig()).items():
        p.add_argument(f"--{name.replace('_', '-')}", dest=name, type=int, default=default)
    cfg = SweepConfig(**vars(p.parse_args()))
    rng = random.Random(cfg.seed)
    failures = 0
    for _ in range(cfg.trials):
        A = admissible_sample(rng, cfg)
        t0 = time.perf_counter()
        Q = construct_excluding_z(A, cfg.m)
        diff = verify_exact(Q, lambda t: t.a not in A, cfg.bound)
        failures += diff.verdict != "pass"
        print(f"A={sorted(A)!s:<22} rank={Q.rank:>5} bound={rank_bound_z(A, cfg.m) if A else '-':>5} "
              f"{diff.verdict} ({time.perf_counter() - t0:.2f}s)")
    print(f"{cfg.trials - failures}/{cfg.trials} verified to {cfg.bound}")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
