"""Print e^, v_T and chi for P = pi(0) T at D = 1, p - 1, p, plus the pi-exponentials."""

import argparse

from rankone import index, make_params, parse_poly, residue_invariant, vT
from rankone.oracle import crosscheck_pipeline


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", default="2,3,5,7")
    args = ap.parse_args()
    print(f"{'p':>3} {'D':>3}  {'e^':<28} {'vT':>4} {'chi':>4}  oracle")
    for p in map(int, args.primes.split(",")):
        for D in sorted({1, max(p - 1, 1), p}):
            P, pr = parse_poly("pi(0)*T", p, D), make_params(p, D)
            eh = residue_invariant(P, pr)
            cc = crosscheck_pipeline(P, pr)
            print(f"{p:>3} {D:>3}  {str(eh):<28} {vT(eh):>4} {index(P, pr):>4}  "
                  f"{'match' if cc.soluble_exact else 'insoluble'}")
    print()
    print("pi-exponentials e_k = exp(sum_j pi(k-j) T^(p^j) / p^j):")
    for p, k in [(2, 0), (2, 1), (2, 2), (2, 3), (3, 0), (3, 1), (3, 2), (5, 1)]:
        text = " + ".join(f"1/{p**j}*pi({k - j})*T^{p**j}" for j in range(k + 1))
        D = p**k
        P, pr = parse_poly(text, p, D), make_params(p, D)
        print(f"  p={p} k={k}: e^ = {residue_invariant(P, pr)}, chi = {index(P, pr)} "
              f"(1 - p^k = {1 - p**k})")


if __name__ == "__main__":
    main()
