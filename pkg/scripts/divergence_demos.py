"""Truncation ladders for the lacunary sharpness functions f0, f4 (sharpness of the v shift) and f5."""

import json

from logsmooth.counterexamples import f0_demo, f4_thm44_demo, f5_demo


def show(rep):
    print(f"== {rep.construction}  {json.dumps(rep.parameters, sort_keys=True)}")
    print(f"{'N':>8} {'source':>12} {'target':>12}")
    for t, s, g in zip(rep.truncations, rep.source, rep.target):
        print(f"{t:>8} {s:>12.6f} {g:>12.6f}")
    print(f"growth exponent {rep.growth_power:.4f} (predicted {rep.parameters['predicted_growth']:.4f}); "
          f"divergence shown: {rep.divergence_shown}\n")


def main():
    show(f0_demo())
    show(f5_demo())
    d = f4_thm44_demo()
    print(f"== f4_thm44  {json.dumps(d['parameters'], sort_keys=True)}")
    print(f"membership converges: {d['membership_converges']} "
          f"(dyadic increments decay like k^{d['membership_increment_power']:.2f})")
    print(f"{'N':>8} {'tail functional':>16} {'minorant':>10}")
    for n, t, m in zip(d["truncations"], d["tail_functional"], d["minorant"]):
        print(f"{n:>8} {t:>16.4f} {m:>10.4f}")
    print(f"minorant growth in log N: {d['minorant_growth']:.4f} (predicted {d['predicted_growth']:.4f})")


if __name__ == "__main__":
    main()
