"""Write the two Bezout fixture files used by the CLI examples and tests."""

import argparse
from pathlib import Path

from fatpoints.bezout import dump_problem
from fatpoints.recipes import collinear_plus_one_gamma, quasi_star_delta


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "fixtures")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, build in (("quasistar_delta.json", quasi_star_delta), ("collinear2_gamma.json", collinear_plus_one_gamma)):
        path = args.out / name
        path.write_text(dump_problem(*build(args.seed)) + "\n")
        print(path)


if __name__ == "__main__":
    main()
