"""Sweep k-star window checks and the difference-set criterion.

    python3 scripts/star_windows.py --kmax 8 --window 40 --bound 10000
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from infactor import stars


@dataclass
class WindowSweep:
    kmin: int = 4
    kmax: int = 8
    window: int = 40
    bound: int = 10_000
    hmax: int = 6

    def windows(self):
        for k in range(self.kmin, self.kmax + 1):
            t0 = time.perf_counter()
            rep = stars.verify_window(k, self.window)
            yield k, rep, time.perf_counter() - t0

    def orbits(self):
        yield "gamma1", stars.orbit_cover_check([stars.gamma1_star()], self.bound)
        for h in range(1, self.hmax + 1):
            yield f"level0(h={h})", stars.orbit_cover_check(stars.level0_stars(h), self.bound)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kmin", type=int, default=4)
    ap.add_argument("--kmax", type=int, default=8)
    ap.add_argument("--window", type=int, default=40)
    ap.add_argument("--bound", type=int, default=10_000)
    ap.add_argument("--hmax", type=int, default=6)
    args = ap.parse_args(argv)
    sweep = WindowSweep(args.kmin, args.kmax, args.window, args.bound, args.hmax)
    ok = True
    for k, rep, secs in sweep.windows():
        ok &= rep.ok
        print(f"k={k} W={sweep.window} edges={rep.edges} translates={rep.translates} {rep.summary()} ({secs:.2f}s)")
    for name, rep in sweep.orbits():
        ok &= rep.ok
        print(f"{name:<12} {rep.summary()}")
    for h in range(1, sweep.hmax + 1):
        bad = stars.recursion_partition(h)
        ok &= not bad
        print(f"recursion h={h}: {'PASS' if not bad else 'FAIL ' + str(bad[:10])}")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
