"""Run the hexagon refutation over many oracles and tabulate the certificates.

    python3 scripts/hexagon_sweep.py --ks 1 2 3 --seeds 200 --bound 50
"""
import argparse
import json
import time
from collections import Counter

from orderlab.orders import ConeOrder, GreedyOracle, matrix_lex_cone
from orderlab.witte import Inconclusive, WitteSystem, witte_pipeline


def one(k, oracle, bound, make_replay):
    t0 = time.perf_counter()
    res = witte_pipeline(k, oracle, bound)
    secs = time.perf_counter() - t0
    if isinstance(res, Inconclusive):
        return {"outcome": "inconclusive", "secs": secs}
    group = WitteSystem(k).group()
    return {"outcome": res.kind, "queries": len(res.transcript),
            "verified": res.verify(group), "replayed": res.replay(make_replay()),
            "m": res.notes.get("m"), "triple": res.notes.get("triple"), "secs": secs}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ks", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--bound", type=int, default=50)
    ap.add_argument("--prefix-radius", type=int, default=0,
                    help="greedy oracles pre-answer this ball before the run")
    ap.add_argument("--out")
    a = ap.parse_args()

    rows = []
    for k in a.ks:
        group = WitteSystem(k).group()
        runs = []
        for s in range(a.seeds):
            make = lambda s=s: GreedyOracle(group, seed=s, prefix_radius=a.prefix_radius)
            runs.append(one(k, make(), a.bound, make))
        lex = lambda: ConeOrder(matrix_lex_cone(group))
        runs.append({**one(k, lex(), a.bound, lex), "oracle": "lex-cone"})
        kinds = Counter(r["outcome"] for r in runs)
        q = [r["queries"] for r in runs if "queries" in r]
        bad = sum(1 for r in runs if "queries" in r and not (r["verified"] and r["replayed"]))
        print(f"k={k}: {dict(kinds)}  queries mean {sum(q) / len(q):.1f} max {max(q)}  "
              f"failed replays {bad}  total {sum(r['secs'] for r in runs):.2f}s")
        rows.append({"k": k, "runs": runs})
    if a.out:
        with open(a.out, "w") as fh:
            json.dump(rows, fh, indent=2, default=str)


if __name__ == "__main__":
    main()
