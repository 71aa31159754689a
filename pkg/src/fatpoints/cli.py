"""Command-line front end.

Exit codes: 0 success, 1 reproduction mismatch, 2 parse error,
3 precondition violation, 4 genericity failure, 70 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from fatpoints import analyzer, bezout, geometry, interpolation, recipes
from fatpoints.analyzer import frac_str
from fatpoints.linalg import PRIME_BITS

EXIT_MISMATCH = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_GENERICITY = 4
EXIT_INTERNAL = 70

GENERATORS = ("star", "quasi_star", "collinear_plus_point", "generic", "prop42", "conic_example")


class ParseError(Exception):
    pass


def _threads() -> int:
    raw = os.environ.get("FATPOINT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ParseError(f"FATPOINT_THREADS must be an integer, got {raw!r}") from None


def _manifest(args) -> dict:
    out = {"command": args.command, "seed": args.seed, "policy": args.policy, "prime_bits": PRIME_BITS, "threads": args.threads}
    for key in ("config", "input", "mmax", "m", "kmax", "recipe"):
        val = getattr(args, key, None)
        if val is not None:
            out[key] = str(val) if isinstance(val, Path) else val
    return out


def _load_config(path) -> geometry.PointConfiguration:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return geometry.PointConfiguration.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg})") from None
    except geometry.GeometryError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _emit(args, payload: dict, csv_rows: list[dict] | None = None):
    if args.format == "csv":
        if csv_rows is None:
            raise analyzer.PreconditionError(f"--format csv is not available for '{args.command}'")
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(csv_rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(csv_rows)
        text = f"# seed={args.seed},policy={args.policy}\n" + buf.getvalue()
    else:
        doc = {"manifest": _manifest(args), **payload}
        if not args.no_timestamp:
            doc["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        text = json.dumps(doc, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _sequence_rows(seq: analyzer.AlphaSequence) -> list[dict]:
    values = seq.values
    rows = []
    for m, (v, cert) in enumerate(zip(values, seq.certified), 1):
        rows.append({"m": m, "alpha": v, "beta": v - values[m - 2] if m > 1 else v, "certified": int(cert)})
    return rows


# -- commands --------------------------------------------------------------


def cmd_gen(args):
    seed = args.seed
    kind = args.kind
    if kind in ("star", "quasi_star"):
        if args.d is None:
            raise analyzer.PreconditionError(f"gen {kind} needs --d")
        cfg = (geometry.gen_star if kind == "star" else geometry.gen_quasi_star)(args.d, seed)
    elif kind == "collinear_plus_point":
        if args.k is None:
            raise analyzer.PreconditionError("gen collinear_plus_point needs --k")
        cfg = geometry.gen_collinear_plus_point(args.k, seed)
    elif kind == "generic":
        if args.s is None:
            raise analyzer.PreconditionError("gen generic needs --s")
        cfg = geometry.gen_generic(args.s, seed)
    elif kind == "prop42":
        cfg = geometry.gen_prop42(seed)
    else:
        cfg = geometry.gen_conic_example(seed)
    doc = cfg.to_dict()
    doc["seed"] = seed
    text = json.dumps(doc, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_alpha(args):
    cfg = _load_config(args.config)
    scheme = interpolation.FatPointScheme(cfg, args.m)
    if args.m == 1:
        entry = analyzer.alpha_sequence(cfg, 1, args.policy, args.seed).entries[0]
    else:
        entry = analyzer.alpha_sequence(cfg, args.m, args.policy, args.seed).entries[-1]
    witness_ok = entry.witness is not None and interpolation.verify_multiplicity(entry.witness, scheme, entry.value)
    payload = {"m": args.m, "alpha": entry.value, "certified": entry.certified, "witness_verified": witness_ok}
    _emit(args, payload, [{"m": args.m, "alpha": entry.value, "certified": int(entry.certified)}])
    return 0


def _sequence_payload(seq):
    beta = analyzer.beta_sequence(seq) if len(seq) > 1 else None
    return {
        "alpha": seq.values,
        "certified": seq.certified,
        "beta0": seq.values[0],
        "beta": list(beta.betas) if beta else [],
    }


def cmd_sequence(args):
    cfg = _load_config(args.config)
    seq = analyzer.alpha_sequence(cfg, args.mmax, args.policy, args.seed)
    payload = _sequence_payload(seq)
    payload["checks"] = analyzer.sequence_checks(seq)
    _emit(args, payload, _sequence_rows(seq))
    return 0


def cmd_waldschmidt(args):
    cfg = _load_config(args.config)
    seq = analyzer.alpha_sequence(cfg, args.mmax, args.policy, args.seed)
    iv = analyzer.waldschmidt_interval(seq)
    payload = _sequence_payload(seq)
    payload["waldschmidt"] = iv.to_dict()
    rows = [{**r, "lower": frac_str(iv.lower), "upper": frac_str(iv.upper)} for r in _sequence_rows(seq)]
    _emit(args, payload, rows)
    return 0


def cmd_classify(args):
    cfg = _load_config(args.config)
    cls = analyzer.classify(cfg, args.mmax, args.policy, args.seed)
    _emit(args, {"classification": cls.to_dict()})
    return 0


def cmd_bezout(args):
    try:
        data = json.loads(Path(args.input).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {args.input}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{args.input}: invalid JSON ({exc.msg})") from None
    _, D, curves = bezout.load_problem(data)
    dec = bezout.bezout_decompose(D, curves, order=args.order)
    payload = {
        "divisor": D.to_dict(),
        "decomposition": dec.to_dict(curves),
        "residual_inequality": bezout.check_residual_inequality(dec, curves),
    }
    if args.confluence:
        payload["confluence"] = bezout.confluence_test(D, curves, args.confluence, args.seed).to_dict()
    rows = [
        {"curve": i, "tag": c.tag or "", "degree": c.degree, "coeff": a}
        for i, (c, a) in enumerate(zip(curves, dec.coeffs))
    ]
    _emit(args, payload, rows)
    return 0


def cmd_reproduce(args):
    def progress(entry):
        print(f"  m={entry.m} alpha={entry.value} certified={entry.certified} t={time.perf_counter() - t0:.1f}s", file=sys.stderr, flush=True)

    t0 = time.perf_counter()

    rep = recipes.run(
        args.recipe,
        args.seed,
        args.policy,
        m_max=args.mmax,
        k=args.k,
        k_max=args.kmax,
        full=args.full,
        progress=progress if args.verbose else None,
    )
    for line in rep.lines():
        print(line, file=sys.stderr)
    print(f"{args.recipe}: {'pass' if rep.passed else 'FAIL'} ({rep.elapsed:.2f}s)", file=sys.stderr)
    rows = []
    for c in rep.claims:
        d = c.to_dict()
        rows.append({k: d[k] if k in ("claim", "source", "passed") else json.dumps(d[k]) for k in ("claim", "source", "passed", "expected", "computed")})
    _emit(args, {"report": rep.to_dict()}, rows)
    return 0 if rep.passed else EXIT_MISMATCH


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--policy", choices=("fast", "certified"), default="certified")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("-o", "--output", type=Path)
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp so outputs are byte-identical")

    p = argparse.ArgumentParser(prog="fatpoints", description="Initial sequences and Waldschmidt bounds of fat points in P^2.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a seeded configuration")
    g.add_argument("kind", choices=GENERATORS)
    g.add_argument("--d", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--s", type=int)
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("alpha", parents=[common], help="alpha(mZ) for one multiplicity")
    a.add_argument("--config", required=True, type=Path)
    a.add_argument("--m", type=int, default=1)
    a.set_defaults(func=cmd_alpha)

    for name, func, default, helptext in (
        ("sequence", cmd_sequence, 6, "alpha and beta sequences up to --mmax"),
        ("waldschmidt", cmd_waldschmidt, 8, "certified interval for the Waldschmidt constant"),
        ("classify", cmd_classify, 4, "low-Waldschmidt-constant classification"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--config", required=True, type=Path)
        s.add_argument("--mmax", type=int, default=default)
        s.set_defaults(func=func)

    b = sub.add_parser("bezout", parents=[common], help="Bezout decomposition of a numerical divisor")
    b.add_argument("--input", required=True, type=Path)
    b.add_argument("--order", choices=("simultaneous", "single"), default="simultaneous")
    b.add_argument("--confluence", type=int, default=0, metavar="N", help="also compare N random single-step orders")
    b.set_defaults(func=cmd_bezout)

    r = sub.add_parser("reproduce", parents=[common], help="rerun a published computation and compare")
    r.add_argument("recipe", choices=recipes.RECIPES)
    r.add_argument("--mmax", type=int)
    r.add_argument("--k", type=int, help="collinear_k: a single k")
    r.add_argument("--kmax", type=int)
    r.add_argument("--full", action="store_true", help="conic_example: run to k=30")
    r.add_argument("-v", "--verbose", action="store_true")
    r.set_defaults(func=cmd_reproduce)
    return p


def _error(args, kind: str, exc: BaseException, code: int) -> int:
    doc = {"error": {"type": kind, "exception": type(exc).__name__, "message": str(exc)}, "exit_code": code}
    if args is not None:
        doc["seed"] = getattr(args, "seed", None)
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    print(f"fatpoints: {kind}: {exc}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.threads = _threads()
        return args.func(args)
    except (ParseError, bezout.BezoutInputError) as exc:
        return _error(args, "parse", exc, EXIT_PARSE)
    except geometry.GenericityError as exc:
        return _error(args, "genericity", exc, EXIT_GENERICITY)
    except (
        analyzer.InvariantViolation,
        bezout.NonTerminationError,
        interpolation.CertificationError,
    ) as exc:
        return _error(args, "internal", exc, EXIT_INTERNAL)
    except (
        analyzer.PreconditionError,
        geometry.GeometryError,
        interpolation.DegreeMismatchError,
        bezout.BezoutError,
        ValueError,
    ) as exc:
        return _error(args, "precondition", exc, EXIT_PRECONDITION)


if __name__ == "__main__":
    sys.exit(main())
