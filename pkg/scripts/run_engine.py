"""Run the factorization engine over a grid of hosts and families.

Prints one row per configuration with stage count, wall time and the
number of invariant violations found by the checkers.

    python3 scripts/run_engine.py --stages 120
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field

from infactor import engine as eng

GRID = (
    ("complete", ("rado:2:1",)),
    ("complete", ("path", "tree:3")),
    ("rado:2:1", ("path", "tree:3", "rado:2:1", "matching")),
    ("rado:3:0,1", ("rado:2:1", "cliques:3")),
)


@dataclass
class EngineExperiment:
    stages: int = 120
    grid: tuple = GRID
    exhaustive: bool = False
    replay: bool = True
    rows: list = field(default_factory=list)

    def run(self) -> list[tuple]:
        for host, family in self.grid:
            t0 = time.perf_counter()
            e = eng.run_engine(host, family, self.stages)
            run_s = time.perf_counter() - t0
            found = eng.check_invariants(e, exhaustive=self.exhaustive)
            bad = sum(len(v) for v in found.values())
            same = None
            if self.replay:
                text = e.manifest()
                same = eng.replay(text).manifest() == text
            self.rows.append((host, ",".join(family), self.stages, len(e.embeddings), run_s, bad, same))
        return self.rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--stages", type=int, default=120)
    ap.add_argument("--exhaustive", action="store_true", help="pairwise isomorphism check")
    ap.add_argument("--no-replay", action="store_true")
    args = ap.parse_args(argv)
    exp = EngineExperiment(args.stages, exhaustive=args.exhaustive, replay=not args.no_replay)
    print(f"{'host':<12} {'family':<36} {'stages':>6} {'factors':>7} {'secs':>7} {'bad':>4} replay")
    for host, fam, n, k, secs, bad, same in exp.run():
        print(f"{host:<12} {fam:<36} {n:>6} {k:>7} {secs:>7.2f} {bad:>4} {same}")
    return 0 if all(r[5] == 0 and r[6] is not False for r in exp.rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
