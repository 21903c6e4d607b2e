"""Abel weights for a_n = 1/n: how slowly the two weighted series separate."""

import argparse

import numpy as np

from logsmooth.counterexamples import abel_epsilon


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=10 ** 6)
    a = ap.parse_args()
    n = np.arange(1, a.N + 1, dtype=float)
    seq = abel_epsilon(1 / n, 2.0, 1.0)
    conv, div = seq.convergent_partials(), seq.divergent_partials()
    print(f"property 1 holds: {seq.property1()}  monotone: {seq.monotone()}")
    print(f"{'N':>9} {'sum eps^2 a':>12} {'sum eps a':>12}")
    k = 10
    while k <= a.N:
        print(f"{k:>9} {conv[k - 1]:>12.6f} {div[k - 1]:>12.6f}")
        k *= 10
    # sum_{n>N} 1/(n H_n^2) is about 1/H_N, so property 2 closes only logarithmically
    print(f"1/H_N at N={a.N}: {seq.eps[-1]:.6f}")


if __name__ == "__main__":
    main()
