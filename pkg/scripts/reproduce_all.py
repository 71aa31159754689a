"""Run every reproduction recipe at desk scale and print a summary table."""

import argparse
import json
import sys

from fatpoints import recipes


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--policy", choices=("fast", "certified"), default="certified")
    ap.add_argument("--json", action="store_true", help="print the full reports as JSON")
    args = ap.parse_args()

    reports = []
    for name in recipes.RECIPES:
        rep = recipes.run(name, args.seed, args.policy)
        reports.append(rep)
        if not args.json:
            for line in rep.lines():
                print(line)
            print(f"{name}: {'pass' if rep.passed else 'FAIL'} ({rep.elapsed:.2f}s)\n")
    bez = recipes.bezout_fixture_claims(args.seed)
    if args.json:
        print(json.dumps({"seed": args.seed, "reports": [r.to_dict() for r in reports], "bezout": [c.to_dict() for c in bez]}, indent=2))
    else:
        for c in bez:
            print(f"[{'PASS' if c.passed else 'FAIL'}] bezout: {c.name} computed={c.computed}")
    ok = all(r.passed for r in reports) and all(c.passed for c in bez)
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
