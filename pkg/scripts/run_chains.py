"""Build Pruefer and cyclic-sum chains, re-verify them, and audit density.

Traces are written as JSON so they can be re-checked with ``minap replay``-style
tooling or :func:`minap.hmdense.replay`.

    python scripts/run_chains.py --steps 15 --primes 2,3,5 --orders-upto 40 --cyclic-steps 12 --out traces/
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass
from pathlib import Path

from minap.hmdense import cyclic_sum_chain, density_audit, independent_exhaustive_prefix, prufer_chain, replay
from minap.hmstep import sup_support


@dataclass
class ChainConfig:
    steps: int = 15
    primes: tuple[int, ...] = (2, 3, 5)
    orders_upto: int = 40
    cyclic_steps: int = 12
    out: Path | None = None


def _save(cfg: ChainConfig, name: str, trace) -> None:
    if cfg.out is None:
        return
    cfg.out.mkdir(parents=True, exist_ok=True)
    (cfg.out / f"{name}.json").write_text(json.dumps(trace.to_json(), indent=2))


def run(cfg: ChainConfig) -> None:
    for p in cfg.primes:
        t0 = time.perf_counter()
        trace = prufer_chain(p, cfg.steps)
        checks = trace.verify()
        audit = density_audit(trace, cfg.steps)
        same = replay(trace.to_json()).to_json() == trace.to_json()
        print(
            f"prufer p={p}: {sum(checks.values())}/{len(checks)} checks, audit {audit.summary()}, "
            f"replay {'ok' if same else 'DIFFERS'}, {time.perf_counter() - t0:.2f}s"
        )
        _save(cfg, f"prufer_{p}", trace)

    orders = [n + 2 for n in range(1, cfg.orders_upto + 1)]
    t0 = time.perf_counter()
    trace = cyclic_sum_chain(orders, cfg.cyclic_steps)
    checks = trace.verify()
    prefix = independent_exhaustive_prefix(trace.generators)
    print(
        f"cyclic-sum: {sum(checks.values())}/{len(checks)} checks, exhaustive prefix {prefix}, "
        f"{time.perf_counter() - t0:.2f}s"
    )
    for r in trace.steps:
        print(f"  n={r.n:>2}  a={r.divisor:>2}  sup support {sup_support(r.g)}")
    _save(cfg, "cyclic_sum", trace)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--steps", type=int, default=ChainConfig.steps)
    ap.add_argument("--primes", default="2,3,5")
    ap.add_argument("--orders-upto", type=int, default=ChainConfig.orders_upto)
    ap.add_argument("--cyclic-steps", type=int, default=ChainConfig.cyclic_steps)
    ap.add_argument("--out", type=Path)
    ns = ap.parse_args()
    run(
        ChainConfig(
            steps=ns.steps,
            primes=tuple(int(p) for p in ns.primes.split(",")),
            orders_upto=ns.orders_upto,
            cyclic_steps=ns.cyclic_steps,
            out=ns.out,
        )
    )


if __name__ == "__main__":
    main()
