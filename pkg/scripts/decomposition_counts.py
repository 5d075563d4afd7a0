"""Factor counts of the Euclid / Gauss decompositions against bounded BFS minima.

    python3 scripts/decomposition_counts.py --samples 200 --out counts.json
"""
import argparse
import json
import time

from orderlab.decomposition import (SearchBudgetExceeded, decompose, decomposition_stats,
                                    minimal_decomposition, random_special_linear)


def count_table(samples, seed):
    rows = []
    for ring in ("z", "q"):
        for n in (2, 3, 4):
            for length in (5, 20, 50):
                t0 = time.perf_counter()
                st = decomposition_stats(n, samples, length, seed, ring, 3)
                rows.append({"ring": ring, "n": n, "wordLength": length,
                             "mean": st.mean_count, "max": st.max_count,
                             "secs": time.perf_counter() - t0})
    return rows


def versus_minimal(samples, seed, length_bound, node_budget):
    """Short random words in SL(2,Z) and SL(3,Z), where BFS can still finish."""
    rows = []
    for n, wl in ((2, 3), (2, 5), (3, 2), (3, 3)):
        gaps, solved = [], 0
        for k in range(samples):
            m = random_special_linear(n, "z", wl, 1, seed + k)
            ours = decompose(m, "z").count
            try:
                best = minimal_decomposition(m, 1, length_bound, node_budget)
            except SearchBudgetExceeded:
                continue
            if best is None:
                continue
            solved += 1
            gaps.append(ours - best.count)
        rows.append({"n": n, "wordLength": wl, "solved": solved,
                     "meanExcess": sum(gaps) / len(gaps) if gaps else None,
                     "maxExcess": max(gaps, default=None)})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--bfs-samples", type=int, default=30)
    ap.add_argument("--length-bound", type=int, default=6)
    ap.add_argument("--node-budget", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    a = ap.parse_args()

    counts = count_table(a.samples, a.seed)
    print(f"{'ring':4} {'n':>2} {'len':>4} {'mean':>7} {'max':>4}")
    for r in counts:
        print(f"{r['ring']:4} {r['n']:2d} {r['wordLength']:4d} {r['mean']:7.2f} {r['max']:4d}")
    cmp_ = versus_minimal(a.bfs_samples, a.seed, a.length_bound, a.node_budget)
    # negative excess: our factors may use |t| > 1, the BFS alphabet does not
    print("\nexcess over the BFS minimum with |t| <= 1")
    for r in cmp_:
        print(f"n={r['n']} len={r['wordLength']} solved={r['solved']} "
              f"mean={r['meanExcess']} max={r['maxExcess']}")
    if a.out:
        with open(a.out, "w") as fh:
            json.dump({"counts": counts, "versusMinimal": cmp_}, fh, indent=2)


if __name__ == "__main__":
    main()
