"""Sweep random descriptors and compare the three MinAP criteria.

    python scripts/equivalence_sweep.py --count 2000 --seed 1 [--assume-ch] [--out sweep.json]
"""

from __future__ import annotations

import argparse
import json
import time
from collections import Counter
from dataclasses import asdict, dataclass

from minap import cardinal as card
from minap.decide import leading_invariant_criterion, minap_admissible, zariski_connected
from minap.sampling import SamplerConfig, random_descriptors


@dataclass
class SweepConfig:
    seed: int = 1
    count: int = 1000
    assume_ch: bool = False
    max_atoms: int = 5
    max_level: int = 3


def sweep(cfg: SweepConfig) -> dict:
    sampler = SamplerConfig(max_atoms=cfg.max_atoms, max_level=cfg.max_level)
    tally: Counter = Counter()
    mismatches = []
    t0 = time.perf_counter()
    with card.assume_ch(cfg.assume_ch):
        for G in random_descriptors(cfg.seed, cfg.count, sampler):
            z = zariski_connected(G).answer
            m = minap_admissible(G).answer
            lead = leading_invariant_criterion(G) if G.is_bounded else True
            kind = "bounded" if G.is_bounded else "unbounded"
            tally[f"{kind}:{'yes' if m else 'no'}"] += 1
            if not z == m == lead:
                mismatches.append(str(G))
    return {
        "config": asdict(cfg),
        "seconds": round(time.perf_counter() - t0, 3),
        "verdicts": dict(sorted((k, v) for k, v in tally.items() if v)),
        "mismatches": mismatches,
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--count", type=int, default=SweepConfig.count)
    ap.add_argument("--assume-ch", action="store_true")
    ap.add_argument("--out")
    ns = ap.parse_args()
    report = sweep(SweepConfig(seed=ns.seed, count=ns.count, assume_ch=ns.assume_ch))
    for k, v in report["verdicts"].items():
        print(f"{k:>16}  {v}")
    print(f"mismatches: {len(report['mismatches'])}  ({report['seconds']}s)")
    if ns.out:
        with open(ns.out, "w") as fh:
            json.dump(report, fh, indent=2)


if __name__ == "__main__":
    main()
