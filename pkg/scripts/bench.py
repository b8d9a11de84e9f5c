"""Ring-multiplication counts and timings of the truncated exponential over a grid of D."""

import argparse

from rankone.bench import run_bench


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--grid", default="8,16,32,64,128")
    args = ap.parse_args()
    res = run_bench(args.p, tuple(int(x) for x in args.grid.split(",")))
    print(f"{'D':>5} {'mults':>7} {'D(D-1)/2+D':>11} {'seconds':>9}")
    for pt in res.points:
        print(f"{pt.D:>5} {pt.mults:>7} {pt.bound:>11} {pt.seconds:>9.4f}")
    print(f"fitted exponent: count {res.count_exponent:.3f}, time {res.time_exponent:.3f}")
    print("(time grows faster than the count: the ring itself grows with D, e and A both O(D))")


if __name__ == "__main__":
    main()
