"""Symbolic against numeric convergence verdicts over random admissible parameter draws."""

import argparse

from logsmooth.verify import REFEREE_DRAWS, referee_agreement


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--draws", type=int, default=100)
    ap.add_argument("--seed", type=int, default=12345)
    a = ap.parse_args()
    for name in REFEREE_DRAWS:
        r = referee_agreement(name, a.draws, a.seed)
        print(name, " ".join(f"{k}={v}" for k, v in r.items()))


if __name__ == "__main__":
    main()
