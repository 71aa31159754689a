"""Initial sequences of symbolic powers and Waldschmidt-constant bounds."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from fatpoints import geometry, interpolation
from fatpoints.geometry import PointConfiguration
from fatpoints.interpolation import FatPointScheme, Policy

NINE_QUARTERS = Fraction(9, 4)


class PreconditionError(ValueError):
    pass


class InvariantViolation(AssertionError):
    """A computed sequence broke a theorem: an engine bug, never data."""


@dataclass(frozen=True)
class AlphaEntry:
    m: int
    value: int
    certified: bool
    witness: tuple[int, ...] | None = field(default=None, repr=False)
    # primes at which degree value - 1 had full modular rank; empty when the
    # lower end of the search window was a theorem
    empty_primes: tuple[int, ...] = ()
    search_start: int = 0


@dataclass(frozen=True)
class AlphaSequence:
    config: PointConfiguration
    entries: tuple[AlphaEntry, ...]

    @property
    def values(self) -> list[int]:
        return [e.value for e in self.entries]

    @property
    def certified(self) -> list[bool]:
        return [e.certified for e in self.entries]

    def __getitem__(self, m: int) -> int:
        """``alpha(mZ)``, 1-based like the multiplicity."""
        return self.entries[m - 1].value

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class BetaSequence:
    beta0: int
    betas: tuple[int, ...]

    def full(self) -> list[int]:
        return [self.beta0, *self.betas]


@dataclass(frozen=True)
class WaldschmidtInterval:
    lower: Fraction
    upper: Fraction
    lower_at: int
    upper_at: int
    conjectured: Fraction | None = None
    period: tuple[int, ...] | None = None

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def to_dict(self) -> dict:
        return {
            "lower": frac_str(self.lower),
            "upper": frac_str(self.upper),
            "lower_at": self.lower_at,
            "upper_at": self.upper_at,
            "conjectured": None if self.conjectured is None else frac_str(self.conjectured),
        }


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# -- bounds ----------------------------------------------------------------


def chudnovsky_bound(alpha1: int) -> Fraction:
    if alpha1 < 1:
        raise PreconditionError("alpha(Z) is at least 1")
    return Fraction(alpha1 + 1, 2)


def ev_gap_bound(m: int, k: int, d: int) -> Fraction:
    """Upper bound on ``alpha((m+k)Z)`` when it exceeds ``alpha(mZ)`` by ``d``."""
    if not (d >= k >= 2 and m >= 1):
        raise PreconditionError(f"need d >= k >= 2 and m >= 1, got m={m}, k={k}, d={d}")
    return Fraction((d - 1) * (m + k), k - 1)


def _values(seq) -> list[int]:
    return seq.values if isinstance(seq, AlphaSequence) else list(seq)


def strictly_increasing(values: Sequence[int]) -> bool:
    return all(b > a for a, b in zip(values, values[1:]))


def subadditive(values: Sequence[int]) -> bool:
    n = len(values)
    return all(
        values[a + b - 1] <= values[a - 1] + values[b - 1]
        for a in range(1, n + 1)
        for b in range(a, n + 1 - a)
    )


def chudnovsky_holds(values: Sequence[int]) -> bool:
    if not values:
        return True
    bound = chudnovsky_bound(values[0])
    return all(Fraction(v, m) >= bound for m, v in enumerate(values, 1))


def ev_check(seq) -> bool:
    """Monotonicity, then ``(alpha(nZ)+1)/(n+1) <= alpha(mZ)/m`` for all ``n <= m``."""
    values = _values(seq)
    if not strictly_increasing(values):
        return False
    return all(
        Fraction(values[n - 1] + 1, n + 1) <= Fraction(values[m - 1], m)
        for m in range(1, len(values) + 1)
        for n in range(1, m + 1)
    )


def sequence_checks(seq) -> dict[str, bool]:
    values = _values(seq)
    return {
        "strictly_increasing": strictly_increasing(values),
        "subadditive": subadditive(values),
        "chudnovsky": chudnovsky_holds(values),
        "esnault_viehweg": ev_check(values),
    }


def lower_bound_from(values: Sequence[int], m: int) -> int:
    """Least degree ``alpha(mZ)`` can take given the earlier (certified) values."""
    best = max(m, values[-1] + 1 if values else 1)
    for n, v in enumerate(values, 1):
        best = max(best, math.ceil(Fraction(m * (v + 1), n + 1)))
    return best


def upper_bound_from(values: Sequence[int], m: int) -> int | None:
    """Subadditive cap ``min alpha(aZ) + alpha(bZ)`` over ``a + b = m``."""
    caps = [values[a - 1] + values[m - a - 1] for a in range(1, m) if m - a <= len(values)]
    return min(caps) if caps else None


# -- alpha search -----------------------------------------------------------


def _as_scheme(target, m: int | None) -> FatPointScheme:
    if isinstance(target, FatPointScheme):
        return target
    if m is None:
        raise PreconditionError("a configuration needs a multiplicity")
    return FatPointScheme(target, m)


def _count_cap(s: int, m: int) -> int:
    """Least ``d`` with more monomials than conditions, so the system is nonempty."""
    need = s * m * (m + 1) // 2
    d = 0
    while interpolation.n_monomials(d) <= need:
        d += 1
    return d


def _product_witness(entries: dict[int, AlphaEntry], m: int, d: int, scheme: FatPointScheme):
    for a in range(1, m // 2 + 1):
        ea, eb = entries.get(a), entries.get(m - a)
        if ea is None or eb is None or ea.witness is None or eb.witness is None:
            continue
        if ea.value + eb.value == d:
            form = interpolation.multiply_forms(ea.witness, eb.witness)
            if interpolation.verify_multiplicity(form, scheme, d):
                return form
    return None


def _search(scheme: FatPointScheme, entries: dict[int, AlphaEntry], policy: Policy, seed: int) -> AlphaEntry:
    m = scheme.multiplicity
    known = [entries[n].value for n in range(1, m) if n in entries]
    complete = len(known) == m - 1
    start = lower_bound_from(known, m) if complete else max(m, 1)
    caps = [_count_cap(len(scheme.config), m)]
    if 1 in entries:
        caps.append(m * entries[1].value)
    if complete:
        cap = upper_bound_from(known, m)
        if cap is not None:
            caps.append(cap)
    cap = min(caps)
    if start > cap:
        raise InvariantViolation(f"empty search window [{start}, {cap}] for m={m}")
    certified_lower = complete or start == max(m, 1)
    empty_primes: tuple[int, ...] = ()
    d = start
    while True:
        rng = interpolation.scheme_rng(seed, scheme, d)
        ranks = interpolation.modular_ranks(scheme, d, rng) if d < cap else {}
        n_cols = interpolation.n_monomials(d)
        if n_cols in ranks.values():
            empty_primes = tuple(p for p, r in ranks.items() if r == n_cols)
            d += 1
            continue
        if policy == "fast":
            return AlphaEntry(m, d, False, None, empty_primes, start)
        witness = _product_witness(entries, m, d, scheme)
        if witness is None:
            vectors, used = interpolation.lift_kernel(scheme, d, rng, count=1)
            if not vectors:
                empty_primes = (used[-1],)
                d += 1
                continue
            witness = vectors[0]
        return AlphaEntry(m, d, certified_lower, witness, empty_primes, start)


def alpha(target, m: int | None = None, policy: Policy = "certified", seed: int = 0) -> int:
    """``alpha(mZ)`` for a scheme, or for a configuration and multiplicity.

    Without earlier values the search starts at ``m`` (every nonzero form
    vanishing to order ``m`` has degree at least ``m``).
    """
    scheme = _as_scheme(target, m)
    if scheme.multiplicity == 1:
        return _search(scheme, {}, policy, seed).value
    seq = alpha_sequence(scheme.config, scheme.multiplicity, policy, seed)
    return seq[scheme.multiplicity]


def alpha_sequence(
    cfg: PointConfiguration, m_max: int, policy: Policy = "certified", seed: int = 0, progress=None
) -> AlphaSequence:
    """``alpha(mZ)`` for ``m = 1..m_max``; ``progress(entry)`` is called after each term."""
    if m_max < 1:
        raise PreconditionError("m_max must be >= 1")
    entries: dict[int, AlphaEntry] = {}
    for m in range(1, m_max + 1):
        entries[m] = _search(FatPointScheme(cfg, m), entries, policy, seed)
        if progress is not None:
            progress(entries[m])
    seq = AlphaSequence(cfg, tuple(entries[m] for m in range(1, m_max + 1)))
    failed = [name for name, ok in sequence_checks(seq).items() if not ok]
    if failed:
        raise InvariantViolation(f"alpha sequence {seq.values} violates {failed}")
    return seq


def beta_sequence(seq) -> BetaSequence:
    values = _values(seq)
    if len(values) < 2:
        raise PreconditionError("a beta sequence needs at least two alpha values")
    return BetaSequence(values[0], tuple(b - a for a, b in zip(values, values[1:])))


# -- Waldschmidt constant --------------------------------------------------


def periodic_tails(terms: Sequence[int], min_repeats: int = 2):
    """Yield ``(start, block)`` with ``terms[start:]`` repeating ``block`` at
    least ``min_repeats`` full times; shortest blocks first, then earliest start."""
    n = len(terms)
    for q in range(1, n // min_repeats + 1):
        for start in range(0, n - min_repeats * q + 1):
            tail = terms[start:]
            if all(tail[i] == tail[i - q] for i in range(q, len(tail))):
                yield start, tuple(terms[start:start + q])


def waldschmidt_interval(target, m_max: int | None = None, policy: Policy = "certified", seed: int = 0) -> WaldschmidtInterval:
    """Certified bracket ``max (alpha(mZ)+1)/(m+1) <= waldschmidt <= min alpha(mZ)/m``."""
    seq = target if isinstance(target, AlphaSequence) else alpha_sequence(target, m_max, policy, seed)
    values = seq.values
    lows = [(Fraction(v + 1, m + 1), m) for m, v in enumerate(values, 1)]
    ups = [(Fraction(v, m), m) for m, v in enumerate(values, 1)]
    lower, lower_at = max(lows, key=lambda t: (t[0], -t[1]))
    upper, upper_at = min(ups, key=lambda t: (t[0], t[1]))
    betas = values[:1] + [b - a for a, b in zip(values, values[1:])]
    for _, block in periodic_tails(betas):
        if Fraction(sum(block), len(block)) == upper:
            return WaldschmidtInterval(lower, upper, lower_at, upper_at, upper, block)
    return WaldschmidtInterval(lower, upper, lower_at, upper_at)


# -- classification --------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    tag: str
    evidence: dict
    interval: WaldschmidtInterval | None = None
    k: int | None = None

    def to_dict(self) -> dict:
        out = {"tag": self.tag, "evidence": self.evidence}
        if self.k is not None:
            out["k"] = self.k
        if self.interval is not None:
            out["waldschmidt"] = self.interval.to_dict()
        return out


def classify(cfg: PointConfiguration, m_max: int, policy: Policy = "certified", seed: int = 0) -> Classification:
    """Low-Waldschmidt-constant class of ``cfg``: exact detectors first, then bounds."""
    if m_max < 2:
        raise PreconditionError("classification needs m_max >= 2")
    pts = list(cfg)
    seq = alpha_sequence(cfg, m_max, policy, seed)
    interval = waldschmidt_interval(seq)
    if geometry.collinear(pts):
        return Classification("line", {"detector": "all points collinear"}, interval)
    k = geometry.is_collinear_plus_point(cfg)
    if k is not None:
        return Classification(
            "collinear_plus_one",
            {"detector": f"{k} collinear points and one point off their line"},
            interval,
            k,
        )
    if geometry.on_common_conic(pts):
        return Classification("conic", {"detector": "nonzero quadratic form vanishes on all points"}, interval)
    if geometry.is_star(cfg, 4):
        return Classification("four_star", {"detector": "pairwise intersections of 4 lines"}, interval)
    if geometry.is_quasi_star(cfg, 3):
        return Classification("three_quasi_star", {"detector": "triangle plus one extra point per side"}, interval)
    evidence: dict = {"detector": "none"}
    if interval.lower > NINE_QUARTERS:
        m = interval.lower_at
        a = seq[m]
        recheck = recheck_empty(cfg, m, a - 1, seed)
        evidence.update(
            {
                "lower_bound_exceeds_9/4": True,
                "m": m,
                "alpha": a,
                "lower_bound": frac_str(interval.lower),
                "empty_below_at_primes": list(recheck),
                "witness_verified": seq.entries[m - 1].witness is not None,
            }
        )
    return Classification("unclassified", evidence, interval)


def recheck_empty(cfg: PointConfiguration, m: int, d: int, seed: int = 0, n_primes: int = 2) -> tuple[int, ...]:
    """Primes (distinct, fresh) at which degree ``d`` admits no form in ``mZ``."""
    scheme = FatPointScheme(cfg, m)
    rng = random.Random(f"recheck:{seed}:{m}:{d}")
    n_cols = interpolation.n_monomials(d)
    primes: list[int] = []
    while len(primes) < n_primes:
        p = interpolation.linalg.random_prime(rng, exclude=primes)
        rank = interpolation.linalg.rank_mod(interpolation.condition_matrix_mod(scheme, d, p), p)
        if rank != n_cols:
            raise InvariantViolation(f"degree {d} not empty for m={m} at prime {p}")
        primes.append(p)
    return tuple(primes)
