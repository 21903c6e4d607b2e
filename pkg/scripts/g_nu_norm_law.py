"""Tabulate ||G_nu||_{p,tau} against (2^nu)^{1/tau} for nu = 0..4 in one variable."""

import argparse

from logsmooth.counterexamples import G_nu_lorentz_norm


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, nargs="+", default=[2.0, 3.0])
    ap.add_argument("--tau", type=float, default=2.0)
    ap.add_argument("--n", type=int, default=1 << 18, help="mesh cells")
    a = ap.parse_args()
    for p in a.p:
        ratios = []
        print(f"p={p:g} tau={a.tau:g}")
        print(f"{'nu':>3} {'norm':>10} {'ratio':>10}")
        for nu in range(5):
            v = G_nu_lorentz_norm(nu, p, a.tau, n=a.n)
            ratios.append(v / 2 ** (nu / a.tau))
            print(f"{nu:>3} {v:>10.5f} {ratios[-1]:>10.5f}")
        print(f"window max/min = {max(ratios) / min(ratios):.4f}\n")


if __name__ == "__main__":
    main()
