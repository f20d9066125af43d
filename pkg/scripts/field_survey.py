"""Tabulate unit, power-subring index, domain constant and thresholds for a range of D.

    python3 scripts/field_survey.py --D 2 3 5 6 7 --m 4 --json survey.json
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from higherforms.construct_nf import universal_threshold
from higherforms.lattice_nf import OrbitShell, compute_domain, power_subring
from higherforms.ring import make_field


@dataclass
class SurveyConfig:
    D: list = field(default_factory=lambda: [2, 3, 5, 6, 7, 13])
    m: int = 4
    layout: str = "centered"
    P_hat: int = 1


def survey_row(D, cfg):
    t0 = time.perf_counter()
    K = make_field(D)
    psr = power_subring(K, cfg.m)
    dom = compute_domain(K, cfg.m, cfg.layout)
    L, M0 = universal_threshold(dom, psr, cfg.P_hat)
    return {
        "D": D,
        "unit": K.fundamental_unit.to_json(),
        "r": psr.r,
        "thetas": [t.to_json() for t in psr.thetas],
        "c": str(dom.c),
        "M0": M0,
        "L": L,
        "orbits_to_L": OrbitShell(dom, 0, L).count(),
        "seconds": round(time.perf_counter() - t0, 3),
    }


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--D", type=int, nargs="+")
    p.add_argument("--m", type=int)
    p.add_argument("--layout", choices=["centered", "arc"])
    p.add_argument("--P-hat", dest="P_hat", type=int)
    p.add_argument("--json")
    args = p.parse_args()
    cfg = SurveyConfig(**{k: v for k, v in vars(args).items() if k != "json" and v is not None})
    rows = []
    print(f"{'D':>4} {'unit':>14} {'r':>4} {'c':>14} {'M0':>10} {'L':>10} {'orbits<=L':>10}")
    for D in cfg.D:
        row = survey_row(D, cfg)
        rows.append(row)
        print(f"{D:>4} {str(row['unit']):>14} {row['r']:>4} {row['c']:>14} {row['M0']:>10} {row['L']:>10} {str(row['orbits_to_L']):>10}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
