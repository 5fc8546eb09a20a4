"""Random monomorphism extensions on small finite abelian groups.

    python scripts/extension_sweep.py --cases 500 --max-order 200 --dim 3
"""

from __future__ import annotations

import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import prod

from minap.extend import FinAbGroup, NotAHomomorphism, TorusTupleHom, check_extension, extend_mono, subgroup_of


@dataclass
class ExtensionConfig:
    cases: int = 200
    max_order: int = 200
    dim: int = 3
    seed: int = 0


def _group(rng: random.Random, max_order: int) -> FinAbGroup:
    while True:
        orders = [rng.randint(2, 12) for _ in range(rng.randint(1, 3))]
        if prod(orders) <= max_order:
            return FinAbGroup.from_orders(orders)


def _injective_hom(rng: random.Random, H, dim: int) -> TorusTupleHom:
    while True:
        images = [[Fraction(rng.randrange(f), f) for _ in range(dim)] for f in H.factors]
        try:
            j = TorusTupleHom.on(H, images, dim=dim, gens=H.basis)
        except NotAHomomorphism:
            continue
        if j.is_injective():
            return j


def run(cfg: ExtensionConfig) -> Counter:
    rng = random.Random(cfg.seed)
    stats: Counter = Counter()
    done = 0
    while done < cfg.cases:
        G = _group(rng, cfg.max_order)
        H = subgroup_of(G, [tuple(rng.randrange(d) for d in G.factors) for _ in range(rng.randint(1, 2))])
        if H.order == 1:
            continue
        j = _injective_hom(rng, H, cfg.dim)
        jp = extend_mono(H, j)
        checks = check_extension(H, j, jp)
        stats["ok" if all(checks.values()) else "FAILED"] += 1
        stats[f"extra coordinates {jp.dim - cfg.dim}"] += 1
        done += 1
    return stats


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--cases", type=int, default=ExtensionConfig.cases)
    ap.add_argument("--max-order", type=int, default=ExtensionConfig.max_order)
    ap.add_argument("--dim", type=int, default=ExtensionConfig.dim)
    ap.add_argument("--seed", type=int, default=ExtensionConfig.seed)
    ns = ap.parse_args()
    t0 = time.perf_counter()
    stats = run(ExtensionConfig(ns.cases, ns.max_order, ns.dim, ns.seed))
    for k, v in sorted(stats.items()):
        print(f"{k:>22}  {v}")
    print(f"{time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
