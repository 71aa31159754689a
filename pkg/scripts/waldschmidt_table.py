"""Waldschmidt intervals for the named configurations, as a CSV table."""

import argparse
import csv
import sys

from fatpoints import analyzer, geometry

CONFIGS = {
    "star4": lambda s: geometry.gen_star(4, s),
    "quasi_star3": lambda s: geometry.gen_quasi_star(3, s),
    "collinear5_plus_one": lambda s: geometry.gen_collinear_plus_point(5, s),
    "prop42": geometry.gen_prop42,
    "generic6": lambda s: geometry.gen_generic(6, s),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--mmax", type=int, default=8)
    args = ap.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["config", "alpha", "lower", "lower_at", "upper", "upper_at", "conjectured"])
    for name, build in CONFIGS.items():
        seq = analyzer.alpha_sequence(build(args.seed), args.mmax, seed=args.seed)
        iv = analyzer.waldschmidt_interval(seq).to_dict()
        w.writerow([name, " ".join(map(str, seq.values)), iv["lower"], iv["lower_at"], iv["upper"], iv["upper_at"], iv["conjectured"] or ""])


if __name__ == "__main__":
    main()
