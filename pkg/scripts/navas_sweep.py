"""Sweep the Hölder exponent of the rough bump and watch the sup sequence.

    python3 scripts/navas_sweep.py --alphas 1.1 1.3 1.5 2.0 2.5 --levels 5
"""
import argparse
import json
import time

import numpy as np

from orderlab.navas import (KernelGrid, RoughBump, SmoothCircleMap, boundedness_probe,
                            random_smooth_map)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alphas", type=float, nargs="+", default=[1.1, 1.2, 1.3, 1.5, 1.75, 2.0, 2.5])
    ap.add_argument("--levels", type=int, default=5)
    ap.add_argument("--base-n", type=int, default=256)
    ap.add_argument("--amplitude", type=float, default=0.01)
    ap.add_argument("--width", type=float, default=0.125)
    ap.add_argument("--controls", type=int, default=3, help="smooth random maps as controls")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    a = ap.parse_args()

    grid = KernelGrid.standard(a.levels, a.base_n)
    rows = []
    maps = [(f"alpha={al:g}", SmoothCircleMap(rough=RoughBump(alpha=al, amplitude=a.amplitude,
                                                                width=a.width)))
            for al in a.alphas]
    rng = np.random.default_rng(a.seed)
    maps += [(f"smooth#{i}", random_smooth_map(rng)) for i in range(a.controls)]
    print(f"{'map':12} {'sups':>50}  {'ratio':>6} {'growth':>7} {'l2 ratio':>8}  verdict")
    for name, g in maps:
        t0 = time.perf_counter()
        rep = boundedness_probe(g, grid)
        sups = " ".join(f"{s:.3g}" for s in rep.sups)
        print(f"{name:12} {sups:>50}  {rep.ratio():6.3f} {rep.growth:7.3f} "
              f"{rep.ratio('l2'):8.3f}  {rep.verdict()}")
        rows.append({"map": name, **rep.to_json(), "growth": rep.growth,
                     "secs": time.perf_counter() - t0})
    if a.out:
        with open(a.out, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
