"""Empirical Waring data for m-th powers in a real quadratic field.

For every orbit of totally positive elements of the power subring up to a norm
bound, the minimal number of m-th powers is computed; the histogram and the
resulting (G_hat, P_hat) are printed.

    python3 scripts/waring_profile.py --D 5 --norm-bound 100
"""

import argparse
import collections
import json
from dataclasses import asdict, dataclass

from higherforms.ring import make_field
from higherforms.waring import choose_waring_params, waring_profile


@dataclass
class ProfileConfig:
    D: int = 5
    m: int = 4
    norm_bound: int = 100


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--D", type=int, default=5)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--norm-bound", dest="norm_bound", type=int, default=100)
    p.add_argument("--json")
    args = p.parse_args()
    cfg = ProfileConfig(args.D, args.m, args.norm_bound)
    K = make_field(cfg.D)
    profile = waring_profile(K, cfg.m, cfg.norm_bound)
    hist = collections.Counter(w.min_count for w in profile)
    params, exceptions = choose_waring_params(K, cfg.m, cfg.norm_bound)
    print(f"{K}, m={cfg.m}, {len(profile)} orbits with norm <= {cfg.norm_bound}")
    for k in sorted(hist, key=lambda x: (x is None, x)):
        print(f"  min count {k if k is not None else 'none':>4}: {hist[k]}")
    hardest = max((w for w in profile if w.min_count is not None), key=lambda w: w.min_count, default=None)
    if hardest:
        print(f"hardest: {hardest.element} (norm {hardest.norm}) needs {hardest.min_count}")
    print(f"G_hat={params.G_hat} P_hat={params.P_hat}; not sums of m-th powers: {[str(e.element) for e in exceptions]}")
    if args.json:
        doc = {"config": asdict(cfg), "params": params.to_json(),
               "profile": [{"element": w.element.to_json(), "norm": w.norm, "min_count": w.min_count} for w in profile]}
        with open(args.json, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
