"""Numerical Bezout decomposition of a divisor against a family of curves.

Everything here is integer bookkeeping on degrees and multiplicity
vectors; whether the curves are really irreducible is the caller's
business.  A curve ``C`` is split off ``D`` whenever
``sum_j mult_j(D) * mult_j(C) > deg(D) * deg(C)``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from fatpoints.geometry import PointConfiguration


class BezoutError(ValueError):
    pass


class BezoutInputError(BezoutError):
    """Malformed divisor/curve file."""


class NonTerminationError(RuntimeError):
    def __init__(self, message, divisor=None, trace=()):
        super().__init__(message)
        self.divisor = divisor
        self.trace = tuple(trace)


@dataclass(frozen=True)
class DivisorClass:
    degree: int
    mults: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mults", tuple(int(v) for v in self.mults))

    @property
    def effective_looking(self) -> bool:
        return self.degree >= 0 and all(v >= 0 for v in self.mults)

    def to_dict(self) -> dict:
        return {"degree": self.degree, "mults": list(self.mults)}


@dataclass(frozen=True)
class CurveClass:
    degree: int
    mults: tuple[int, ...]
    tag: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "mults", tuple(int(v) for v in self.mults))
        if self.degree < 1:
            raise BezoutError(f"curve degree must be >= 1, got {self.degree}")
        if any(v < 0 for v in self.mults):
            raise BezoutError("curve multiplicities must be >= 0")

    def to_dict(self) -> dict:
        out = {"degree": self.degree, "mults": list(self.mults)}
        if self.tag is not None:
            out["tag"] = self.tag
        return out


@dataclass(frozen=True)
class Round:
    subtracted: tuple[int, ...]
    degree_after: int
    non_effective: bool


@dataclass(frozen=True)
class BezoutDecomposition:
    divisor: DivisorClass
    coeffs: tuple[int, ...]
    residual: DivisorClass
    trace: tuple[Round, ...]
    notes: tuple[str, ...] = ()

    @property
    def non_effective(self) -> bool:
        return not self.residual.effective_looking

    def to_dict(self, curves: Sequence[CurveClass] | None = None) -> dict:
        out = {
            "coeffs": list(self.coeffs),
            "residual": self.residual.to_dict(),
            "non_effective": self.non_effective,
            "trace": [
                {"round": n, "subtracted": list(r.subtracted), "degree_after": r.degree_after, "non_effective": r.non_effective}
                for n, r in enumerate(self.trace, 1)
            ],
            "notes": list(self.notes),
        }
        if curves is not None:
            out["tags"] = [c.tag for c in curves]
        return out


def _check_lengths(D: DivisorClass, curves: Sequence[CurveClass]):
    for i, c in enumerate(curves):
        if len(c.mults) != len(D.mults):
            raise BezoutError(f"curve {i} has {len(c.mults)} multiplicities, divisor has {len(D.mults)}")


def bezout_step_scores(D: DivisorClass, curves: Sequence[CurveClass]) -> list[tuple[int, int]]:
    """``(D.C_i, sum_j m_j m^i_j)`` for every curve."""
    _check_lengths(D, curves)
    return [(D.degree * c.degree, sum(a * b for a, b in zip(D.mults, c.mults))) for c in curves]


def _merge(curves: Sequence[CurveClass]):
    """Unique classes, group sizes and for each input curve its class index."""
    classes: list[CurveClass] = []
    sizes: list[int] = []
    owner: list[int] = []
    notes = []
    for i, c in enumerate(curves):
        for k, u in enumerate(classes):
            if (u.degree, u.mults) == (c.degree, c.mults):
                sizes[k] += 1
                owner.append(k)
                notes.append(f"curve {i} has the same class as curve {curves.index(u)}; merged")
                break
        else:
            classes.append(c)
            sizes.append(1)
            owner.append(len(classes) - 1)
    return classes, sizes, owner, notes


def first_violator(violators: list[int]) -> int:
    return violators[0]


def bezout_decompose(
    D: DivisorClass,
    curves: Sequence[CurveClass],
    order: str = "simultaneous",
    choose: Callable[[list[int]], int] = first_violator,
) -> BezoutDecomposition:
    """Split off violating curves until none is left.

    ``order="simultaneous"`` removes every violating curve once per round;
    ``order="single"`` removes one per round, picked by ``choose`` from the
    current violators (indices into ``curves``).
    """
    if order not in ("simultaneous", "single"):
        raise BezoutError(f"unknown reduction order {order!r}")
    _check_lengths(D, curves)
    classes, sizes, owner, notes = _merge(curves)
    # a merged group of g identical curves leaves as a unit of weight g
    degree, mults = D.degree, list(D.mults)
    counts = [0] * len(classes)
    trace = []
    cap = max(D.degree, 0) * len(curves) + 1
    while True:
        current = DivisorClass(degree, mults)
        violators = [
            k for k, (di, ei) in enumerate(bezout_step_scores(current, classes)) if ei > di
        ]
        if not violators:
            break
        if len(trace) >= cap:
            raise NonTerminationError(f"no fixed point after {cap} rounds; last divisor {current}", current, trace)
        if order == "single":
            as_curves = [owner.index(k) for k in violators]
            picked = choose(as_curves)
            if picked not in as_curves:
                raise BezoutError(f"chooser returned {picked}, not a violator")
            violators = [owner[picked]]
        for k in violators:
            c, g = classes[k], sizes[k]
            degree -= g * c.degree
            mults = [a - g * b for a, b in zip(mults, c.mults)]
            counts[k] += 1
        subtracted = tuple(i for i, k in enumerate(owner) if k in violators)
        trace.append(Round(subtracted, degree, not DivisorClass(degree, mults).effective_looking))
    return BezoutDecomposition(
        D,
        tuple(counts[k] for k in owner),
        DivisorClass(degree, mults),
        tuple(trace),
        tuple(notes),
    )


def residual_from(D: DivisorClass, curves: Sequence[CurveClass], coeffs: Sequence[int]) -> DivisorClass:
    degree = D.degree - sum(a * c.degree for a, c in zip(coeffs, curves))
    mults = [m - sum(a * c.mults[j] for a, c in zip(coeffs, curves)) for j, m in enumerate(D.mults)]
    return DivisorClass(degree, mults)


def check_residual_inequality(dec: BezoutDecomposition, curves: Sequence[CurveClass]) -> bool:
    """``B.C_i >= sum_j (m_j - sum_k a_k m^k_j) m^i_j`` for every ``i``.

    ``B`` is recomputed from the divisor and the coefficients, so a tampered
    coefficient vector is caught even if the stored residual is stale.
    """
    residual = residual_from(dec.divisor, curves, dec.coeffs)
    return all(ei <= di for di, ei in bezout_step_scores(residual, curves))


def reconstruction_holds(dec: BezoutDecomposition, curves: Sequence[CurveClass]) -> bool:
    return residual_from(dec.divisor, curves, dec.coeffs) == dec.residual


@dataclass
class ConfluenceReport:
    reference: BezoutDecomposition
    trials: int
    identical: bool
    counterexamples: list[dict]

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "identical": self.identical,
            "coeffs": list(self.reference.coeffs),
            "residual": self.reference.residual.to_dict(),
            "counterexamples": self.counterexamples,
        }


def confluence_test(D: DivisorClass, curves: Sequence[CurveClass], trials: int, seed: int = 0) -> ConfluenceReport:
    """Compare the simultaneous decomposition with ``trials`` random single-step orders."""
    if trials < 1:
        raise BezoutError("need at least one trial")
    reference = bezout_decompose(D, curves)
    bad = []
    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        picks = []

        def choose(violators, rng=rng, picks=picks):
            pick = rng.choice(violators)
            picks.append(pick)
            return pick

        dec = bezout_decompose(D, curves, order="single", choose=choose)
        if dec.coeffs != reference.coeffs or dec.residual != reference.residual:
            bad.append({"trial": t, "order": picks, "coeffs": list(dec.coeffs), "residual": dec.residual.to_dict()})
    return ConfluenceReport(reference, trials, not bad, bad)


# -- file format -----------------------------------------------------------


def load_problem(data: dict) -> tuple[PointConfiguration | None, DivisorClass, list[CurveClass]]:
    try:
        cfg = PointConfiguration.from_dict(data["config"]) if data.get("config") else None
        div = data["divisor"]
        D = DivisorClass(int(div["degree"]), div["mults"])
        curves = [CurveClass(int(c["degree"]), c["mults"], c.get("tag")) for c in data["curves"]]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, BezoutError):
            raise
        raise BezoutInputError(f"malformed bezout input: {exc!r}") from None
    if cfg is not None and len(D.mults) != len(cfg):
        raise BezoutError(f"divisor has {len(D.mults)} multiplicities for {len(cfg)} points")
    return cfg, D, curves


def dump_problem(cfg: PointConfiguration | None, D: DivisorClass, curves: Sequence[CurveClass]) -> str:
    data = {"divisor": D.to_dict(), "curves": [c.to_dict() for c in curves]}
    if cfg is not None:
        data = {"config": cfg.to_dict(), **data}
    return json.dumps(data, indent=2)


def lines_through(cfg: PointConfiguration, index_sets: Sequence[Sequence[int]], tags: Sequence[str] | None = None) -> list[CurveClass]:
    """Line classes: multiplicity 1 at every configuration point on the line
    spanned by the first two indices of each set."""
    from fatpoints.geometry import line_through

    out = []
    for n, idx in enumerate(index_sets):
        ln = line_through(cfg[idx[0]], cfg[idx[1]])
        mults = [int(ln.contains(p)) for p in cfg]
        out.append(CurveClass(1, mults, tags[n] if tags else None))
    return out
