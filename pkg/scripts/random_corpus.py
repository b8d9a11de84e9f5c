"""Random soluble equations (lifts of random e^): cross-checks, index routes, reduction chains."""

import argparse
import random
from collections import Counter

from rankone import ConsistencyError, index, index_via_witt, lift, make_params, reduce_comparison
from rankone.invariants import ResidueSeries, equivalent
from rankone.oracle import crosscheck_pipeline


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=200)
    ap.add_argument("--max-degree", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    stats = Counter()
    for _ in range(args.n):
        p = rng.choice((2, 3, 5))
        D = rng.randint(1, args.max_degree)
        pr = make_params(p, D)
        eh = ResidueSeries(p, (1,) + tuple(rng.randrange(p) for _ in range(D)))
        P = lift(eh, pr)
        crosscheck_pipeline(P, pr)
        stats["oracle match"] += 1
        chi = index(P, pr)
        stats["index routes agree"] += chi == index_via_witt(P, pr)
        stats[f"chi={chi}"] += 1
        if P.is_zero():
            continue
        try:
            Pstar, steps = reduce_comparison(P, pr)
        except ConsistencyError:
            stats["reduction: factor not trivial"] += 1
            continue
        stats[f"reduction steps={len(steps)}"] += 1
        stats["reduction equivalent"] += equivalent(P, Pstar, pr)
    for key, n in sorted(stats.items()):
        print(f"{key:<32} {n}")


if __name__ == "__main__":
    main()
