"""Multiplicity conditions for plane curves through fat points.

A form ``F`` of degree ``d`` vanishes to order ``m`` at ``P`` iff every
partial derivative of order ``m - 1`` vanishes at ``P`` (characteristic 0,
Euler's relation takes care of the lower orders).  One condition row per
point and per exponent triple ``(i, j, k)`` with ``i + j + k = m - 1``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Sequence

import numpy as np

from fatpoints import linalg
from fatpoints.geometry import PointConfiguration

Policy = Literal["fast", "certified"]
MIN_PRIME = 1 << 30
MAX_LIFT_PRIMES = 4000


class DegreeMismatchError(ValueError):
    pass


class PrimeTooSmallError(ValueError):
    pass


class CertificationError(RuntimeError):
    """Modular evidence could not be confirmed over the rationals."""


@dataclass(frozen=True)
class FatPointScheme:
    config: PointConfiguration
    multiplicity: int

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")

    @property
    def n_points(self) -> int:
        return len(self.config)

    @property
    def n_conditions(self) -> int:
        return self.n_points * self.multiplicity * (self.multiplicity + 1) // 2

    def integer_points(self) -> list[tuple[int, int, int]]:
        return [p.integer_coords() for p in self.config]


@lru_cache(maxsize=None)
def monomials(d: int) -> tuple[tuple[int, int, int], ...]:
    """Exponent triples of degree ``d``, ``x^d`` first, then lex descending."""
    return tuple((a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1))


def n_monomials(d: int) -> int:
    return (d + 1) * (d + 2) // 2


def _falling(n: int, k: int) -> int:
    return math.perm(n, k) if k <= n else 0


@dataclass(frozen=True)
class ConditionMatrix:
    degree: int
    multiplicity: int
    n_points: int
    rows: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), n_monomials(self.degree)

    def to_csv(self) -> str:
        head = f"# d={self.degree},m={self.multiplicity},s={self.n_points}"
        return "\n".join([head] + [",".join(map(str, r)) for r in self.rows]) + "\n"


def build_condition_matrix(scheme: FatPointScheme, d: int) -> ConditionMatrix:
    if d < 0:
        raise ValueError("degree must be >= 0")
    m = scheme.multiplicity
    mons = monomials(d)
    derivs = _derivative_orders(d, m)
    rows = []
    for x, y, z in scheme.integer_points():
        px = [x ** e for e in range(d + 1)]
        py = [y ** e for e in range(d + 1)]
        pz = [z ** e for e in range(d + 1)]
        for i, j, k in derivs:
            row = []
            for a, b, c in mons:
                if a < i or b < j or c < k:
                    row.append(0)
                else:
                    row.append(_falling(a, i) * _falling(b, j) * _falling(c, k) * px[a - i] * py[b - j] * pz[c - k])
            g = math.gcd(*row)
            rows.append(tuple(v // g for v in row) if g > 1 else tuple(row))
        rows.extend([(0,) * len(mons)] * (len(monomials(m - 1)) - len(derivs)))
    return ConditionMatrix(d, m, scheme.n_points, tuple(rows))


def _derivative_orders(d: int, m: int):
    # below degree m - 1 the order-(m-1) partials vanish identically; asking
    # for the order-d partials instead forces every coefficient to vanish
    return monomials(min(m - 1, d))


@lru_cache(maxsize=64)
def _derivative_tables(d: int, m: int, p: int):
    """Column index arrays and falling-factorial coefficients mod ``p``."""
    mons = np.array(monomials(d), dtype=np.int64).reshape(-1, 3)
    tables = []
    for i, j, k in _derivative_orders(d, m):
        coef = np.array(
            [_falling(a, i) * _falling(b, j) * _falling(c, k) % p for a, b, c in monomials(d)],
            dtype=np.int64,
        )
        ex = np.clip(mons - np.array([i, j, k]), 0, None)
        tables.append((coef, ex[:, 0], ex[:, 1], ex[:, 2]))
    return tables


def condition_matrix_mod(scheme: FatPointScheme, d: int, p: int) -> np.ndarray:
    """The condition matrix reduced modulo ``p``, built without big integers."""
    tables = _derivative_tables(d, scheme.multiplicity, p)
    out = np.zeros((scheme.n_conditions, n_monomials(d)), dtype=np.int64)
    r = 0
    for pt in scheme.integer_points():
        pows = []
        for v in pt:
            v %= p
            arr = [1] * (d + 1)
            for e in range(1, d + 1):
                arr[e] = arr[e - 1] * v % p
            pows.append(np.array(arr, dtype=np.int64))
        for coef, ea, eb, ec in tables:
            out[r] = coef * pows[0][ea] % p * pows[1][eb] % p * pows[2][ec] % p
            r += 1
        r += len(monomials(scheme.multiplicity - 1)) - len(tables)
    return out


def rank_modular(mat: ConditionMatrix, prime: int) -> int:
    threshold = max(mat.degree, mat.multiplicity, 2)
    if prime <= threshold or not linalg.is_prime(prime) or prime == 2:
        raise PrimeTooSmallError(f"need an odd prime above {threshold}, got {prime}")
    return linalg.rank_mod(mat.rows, prime) if mat.rows else 0


def rank_rational(mat: ConditionMatrix) -> int:
    return linalg.rank_rational(mat.rows)


# -- forms -----------------------------------------------------------------


def form_degree(form: Sequence) -> int:
    n = len(form)
    d = (math.isqrt(8 * n + 1) - 3) // 2
    if n_monomials(d) != n:
        raise DegreeMismatchError(f"{n} coefficients is not the size of any degree")
    return d


def primitive(form: Sequence) -> tuple[int, ...]:
    """Integer multiple of ``form`` with content 1 and positive leading entry."""
    den = math.lcm(*(Fraction(c).denominator for c in form))
    ints = [int(Fraction(c) * den) for c in form]
    g = math.gcd(*ints)
    if g == 0:
        return tuple(ints)
    lead = next(v for v in ints if v)
    if lead < 0:
        g = -g
    return tuple(v // g for v in ints)


def multiply_forms(f: Sequence[int], g: Sequence[int]) -> tuple[int, ...]:
    df, dg = form_degree(f), form_degree(g)
    index = {mon: n for n, mon in enumerate(monomials(df + dg))}
    out = [0] * n_monomials(df + dg)
    for (a, b, c), u in zip(monomials(df), f):
        if not u:
            continue
        for (a2, b2, c2), v in zip(monomials(dg), g):
            if v:
                out[index[(a + a2, b + b2, c + c2)]] += u * v
    return tuple(out)


def linear_form(coeffs: Sequence) -> tuple[int, ...]:
    """Degree-1 form ``a*x + b*y + c*z`` in monomial order."""
    return primitive(coeffs)


def verify_multiplicity(form: Sequence, scheme: FatPointScheme, degree: int | None = None) -> bool:
    """Exact check that every order ``m - 1`` partial of ``form`` vanishes on the scheme."""
    d = form_degree(form)
    if degree is not None and degree != d:
        raise DegreeMismatchError(f"form has degree {d}, expected {degree}")
    coeffs = primitive(form)
    if not any(coeffs):
        raise ValueError("the zero form is not a witness")
    m = scheme.multiplicity
    if d < m:
        return False
    terms = [(mon, c) for mon, c in zip(monomials(d), coeffs) if c]
    for x, y, z in scheme.integer_points():
        px = [x ** e for e in range(d + 1)]
        py = [y ** e for e in range(d + 1)]
        pz = [z ** e for e in range(d + 1)]
        for i, j, k in monomials(m - 1):
            total = 0
            for (a, b, c), v in terms:
                if a >= i and b >= j and c >= k:
                    total += v * _falling(a, i) * _falling(b, j) * _falling(c, k) * px[a - i] * py[b - j] * pz[c - k]
            if total:
                return False
    return True


# -- dimension of linear systems -------------------------------------------


@dataclass(frozen=True)
class LinearSystemResult:
    degree: int
    multiplicity: int
    dimension: int
    witness: tuple[int, ...] | None = None
    certified: bool = False
    primes: tuple[int, ...] = ()

    def __post_init__(self):
        if self.dimension < 0:
            raise ValueError("dimension must be >= 0")
        if self.witness is not None and self.dimension < 1:
            raise ValueError("a witness needs a positive dimension")


def lift_kernel(
    scheme: FatPointScheme,
    d: int,
    rng: random.Random,
    count: int | None = None,
    attempts: int = 6,
):
    """Exact rational kernel vectors of the degree-``d`` condition matrix.

    The pivot structure comes from a modular echelon form; the reduced
    echelon kernel vectors (1 in one free column, 0 in the others) are then
    lifted p-adically and checked with :func:`verify_multiplicity`.  With
    ``count=None`` the whole basis is lifted, otherwise its first ``count``
    vectors.  Returns ``(vectors, primes)``; an empty list means the modular
    rank was already full, which is exact.
    """
    n_cols = n_monomials(d)
    exact = None
    best = None
    used = []
    for _ in range(attempts):
        p = linalg.random_prime(rng, exclude=used)
        used.append(p)
        a = condition_matrix_mod(scheme, d, p)
        pivots = linalg.pivot_columns_mod(a, p)
        if len(pivots) == n_cols:
            return [], used
        key = (len(pivots), [-c for c in pivots])
        if best is not None and key < best:
            continue
        best = key
        pivot_set = set(pivots)
        free = [c for c in range(n_cols) if c not in pivot_set][:count]
        if not pivots:
            vectors = [tuple(int(c == f) for c in range(n_cols)) for f in free]
        else:
            if exact is None:
                exact = build_condition_matrix(scheme, d).rows
            rows = linalg.independent_rows_mod(a[:, pivots], p)
            b_rows = [[exact[i][c] for c in pivots] for i in rows]
            rhs = [[-exact[i][f] for i in rows] for f in free]
            q = linalg.random_prime(rng, exclude=used)
            used.append(q)
            accept = _modular_acceptor(condition_matrix_mod(scheme, d, q), q, pivots, free)
            try:
                # exact rows are content-reduced, so invert their own reduction
                b_inv = linalg.inverse_mod(linalg.reduce_mod(b_rows, p), p)
                sols = linalg.dixon_solve(b_rows, rhs, p, b_inv, accept=accept)
            except (ZeroDivisionError, ArithmeticError):
                continue
            vectors = [_assemble(n_cols, pivots, f, x) for f, x in zip(free, sols)]
        if all(verify_multiplicity(v, scheme, d) for v in vectors):
            return vectors, used
    raise CertificationError(f"could not certify the degree-{d} kernel for m={scheme.multiplicity}")


def _assemble(n_cols, pivots, f, x):
    vec = [Fraction(0)] * n_cols
    vec[f] = Fraction(1)
    for c, v in zip(pivots, x):
        vec[c] = v
    return primitive(vec)


def _modular_acceptor(aq, q, pivots, free):
    def accept(candidate):
        for f, (nums, den) in zip(free, candidate):
            v = np.zeros(aq.shape[1], dtype=np.int64)
            v[f] = den % q
            v[pivots] = [n % q for n in nums]
            if linalg.matvec_mod(aq, v, q).any():
                return False
        return True

    return accept


def scheme_rng(seed: int, scheme: FatPointScheme, d: int) -> random.Random:
    return random.Random(f"{seed}:{len(scheme.config)}:{scheme.multiplicity}:{d}")


def modular_ranks(scheme: FatPointScheme, d: int, rng: random.Random, n_primes: int = 2) -> dict[int, int]:
    """Ranks at up to ``n_primes`` fresh primes, stopping early at full rank."""
    n_cols = n_monomials(d)
    ranks = {}
    for _ in range(n_primes):
        p = linalg.random_prime(rng, exclude=tuple(ranks))
        ranks[p] = linalg.rank_mod(condition_matrix_mod(scheme, d, p), p)
        if ranks[p] == n_cols:
            break
    return ranks


def system_dimension(
    scheme: FatPointScheme,
    d: int,
    policy: Policy = "certified",
    seed: int = 0,
) -> LinearSystemResult:
    """Dimension of the degree-``d`` part of the ``m``-th symbolic power.

    A full modular rank proves the system empty.  Otherwise ``fast``
    reports the modular corank when two primes agree; ``certified`` (and
    ``fast`` on disagreement) lifts the whole reduced echelon kernel basis
    to the rationals and verifies every vector, which pins the dimension
    exactly (modular corank bounds it from above).
    """
    if policy not in ("fast", "certified"):
        raise ValueError(f"unknown policy {policy!r}")
    if d < 0:
        return LinearSystemResult(d, scheme.multiplicity, 0, None, True)
    n_cols = n_monomials(d)
    rng = scheme_rng(seed, scheme, d)
    ranks = modular_ranks(scheme, d, rng)
    primes = tuple(ranks)
    if n_cols in ranks.values():
        return LinearSystemResult(d, scheme.multiplicity, 0, None, True, primes)
    if policy == "fast" and len(set(ranks.values())) == 1:
        return LinearSystemResult(d, scheme.multiplicity, n_cols - max(ranks.values()), None, False, primes)
    basis, used = lift_kernel(scheme, d, rng)
    witness = basis[0] if basis else None
    return LinearSystemResult(d, scheme.multiplicity, len(basis), witness, True, primes + tuple(used))
