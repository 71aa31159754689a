"""Exact and modular linear algebra over integer matrices.

Modular routines work on ``numpy.int64`` arrays with primes below 2**31, so
a product of two residues never overflows before reduction.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

import numpy as np

try:  # optional accelerator for large modular ranks
    import flint
except ImportError:  # pragma: no cover - depends on the environment
    flint = None

PRIME_BITS = 31
# below this size numpy elimination is as fast as the conversion to flint
FLINT_MIN_DIM = 150
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(rng: random.Random, bits: int = PRIME_BITS, exclude: Sequence[int] = ()) -> int:
    if not 3 <= bits <= PRIME_BITS:
        raise ValueError(f"prime size must be between 3 and {PRIME_BITS} bits")
    while True:
        n = rng.randrange(1 << (bits - 1), 1 << bits) | 1
        if n not in exclude and is_prime(n):
            return n


def reduce_mod(rows: Sequence[Sequence[int]], p: int) -> np.ndarray:
    """Entry-wise residues; object dtype for primes too large for int64 products."""
    dtype = np.int64 if p < (1 << PRIME_BITS) else object
    if not len(rows):
        return np.zeros((0, 0), dtype=dtype)
    return np.array([[x % p for x in row] for row in rows], dtype=dtype)


def _echelon_mod(a: np.ndarray, p: int, reduced: bool) -> tuple[np.ndarray, list[int]]:
    """Row echelon form of ``a`` (entries already in [0, p)) in place."""
    n_rows, n_cols = a.shape
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = a[r, c:] * inv % p
        below = a[r + 1:, c]
        if below.any():
            a[r + 1:, c:] = (a[r + 1:, c:] - np.outer(below, a[r, c:])) % p
        if reduced and r:
            above = a[:r, c]
            if above.any():
                a[:r, c:] = (a[:r, c:] - np.outer(above, a[r, c:])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank_mod(rows, p: int, use_flint: bool | None = None) -> int:
    a = rows.copy() if isinstance(rows, np.ndarray) else reduce_mod(rows, p)
    if a.size == 0:
        return 0
    if use_flint is None:
        use_flint = flint is not None and min(a.shape) >= FLINT_MIN_DIM
    if use_flint and a.dtype != object:
        return flint.nmod_mat(a.shape[0], a.shape[1], (a % p).ravel().tolist(), p).rank()
    return len(_echelon_mod(a % p, p, reduced=False)[1])


def pivot_columns_mod(a: np.ndarray, p: int) -> list[int]:
    return _echelon_mod(a.copy() % p, p, reduced=False)[1]


def kernel_mod(rows, p: int) -> tuple[list[int], np.ndarray]:
    """Pivot columns and the reduced-echelon kernel basis modulo ``p``.

    Basis vector ``k`` has a 1 in the ``k``-th free column, zeros in the
    other free columns; this normalization is field-independent, so the
    vectors for different primes reduce from one rational basis.
    """
    a = rows.copy() if isinstance(rows, np.ndarray) else reduce_mod(rows, p)
    n_cols = a.shape[1]
    a, pivots = _echelon_mod(a % p, p, reduced=True)
    free = [c for c in range(n_cols) if c not in set(pivots)]
    basis = np.zeros((len(free), n_cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, c in enumerate(pivots):
            basis[k, c] = (-a[r, f]) % p
    return pivots, basis


def rank_rational(rows: Sequence[Sequence[int]]) -> int:
    """Exact rank by fraction-free (Bareiss) elimination.

    Entries may be ints or Fractions; each row is scaled to integers first.
    The pivot in each column is the nonzero entry of least magnitude.
    """
    m = [_integer_row(r) for r in rows]
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    for c in range(n_cols):
        if rank == n_rows:
            break
        best = None
        for i in range(rank, n_rows):
            v = m[i][c]
            if v and (best is None or abs(v) < abs(m[best][c])):
                best = i
        if best is None:
            continue
        m[rank], m[best] = m[best], m[rank]
        pr = m[rank]
        pv = pr[c]
        for i in range(rank + 1, n_rows):
            row = m[i]
            f = row[c]
            # rows without entry in this column still need the Bareiss rescale
            m[i] = [(pv * row[j] - f * pr[j]) // prev for j in range(n_cols)]
        prev = pv
        rank += 1
    return rank


def _integer_row(row) -> list[int]:
    den = 1
    for x in row:
        d = getattr(x, "denominator", 1)
        if d != 1:
            den = math.lcm(den, d)
    return [int(x * den) for x in row]


def rational_reconstruction(a: int, m: int) -> tuple[int, int] | None:
    """Smallest ``n/d`` with ``n = a*d (mod m)``, |n|, d below sqrt(m/2)."""
    a %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if math.gcd(r1, s1) != 1:
        return None
    return r1, s1


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """Combine residues modulo coprime ``m1`` and ``m2``."""
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return r1 + m1 * t


def matvec_mod(a: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """``a @ v mod p`` without int64 overflow (``v`` split into 16-bit halves)."""
    lo = v & 0xFFFF
    hi = v >> 16
    return ((a @ hi) % p * 65536 + (a @ lo) % p) % p


def inverse_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a square matrix modulo ``p``; raises ZeroDivisionError if singular."""
    n = a.shape[0]
    aug = np.concatenate([a % p, np.eye(n, dtype=np.int64)], axis=1)
    aug, pivots = _echelon_mod(aug, p, reduced=True)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular modulo p")
    return aug[:, n:].copy()


def independent_rows_mod(a: np.ndarray, p: int) -> list[int]:
    """Indices of a maximal set of rows of ``a`` independent modulo ``p``."""
    return _echelon_mod(a.T.copy() % p, p, reduced=False)[1]


def dixon_solve(
    b_rows: Sequence[Sequence[int]],
    rhs: Sequence[Sequence[int]],
    p: int,
    b_inv: np.ndarray | None = None,
    max_steps: int = 20000,
    accept=None,
) -> list[list[Fraction]]:
    """Rational solutions of ``B x = c`` for every vector ``c`` in ``rhs``.

    p-adic (Dixon) lifting: one inverse of ``B`` modulo ``p``, then one
    modular product and one exact residual update per p-adic digit.
    Solutions come from rational reconstruction once two successive
    attempts agree and ``accept`` (if given) approves them.
    """
    if b_inv is None:
        b_inv = inverse_mod(reduce_mod(b_rows, p), p)
    res = [list(c) for c in rhs]
    acc = [[0] * len(b_rows) for _ in rhs]
    pk = 1
    previous = None
    for _ in range(max_steps):
        for j, r in enumerate(res):
            vec = np.array([v % p for v in r], dtype=np.int64)
            x = [int(t) for t in matvec_mod(b_inv, vec, p)]
            acc[j] = [a + pk * t for a, t in zip(acc[j], x)]
            res[j] = [(v - sum(map(_mul, row, x))) // p for v, row in zip(r, b_rows)]
        pk *= p
        candidate = [reconstruct_vector(a, pk) for a in acc]
        if any(c is None for c in candidate):
            previous = None
            continue
        if candidate == previous and (accept is None or accept(candidate)):
            return [[Fraction(num, den) for num in nums] for nums, den in candidate]
        previous = candidate
    raise ArithmeticError(f"p-adic lifting did not converge in {max_steps} steps")


def _mul(a, b):
    return a * b


def reconstruct_vector(residues: Sequence[int], modulus: int):
    """``(numerators, denominator)`` from residues via a shared denominator, or None."""
    half = modulus // 2
    bound = math.isqrt(half)
    den = 1
    nums = []
    for r in residues:
        t = r * den % modulus
        if t > half:
            t -= modulus
        if abs(t) > bound:
            q = rational_reconstruction(t, modulus)
            if q is None or q[1] * den > bound:
                return None
            nums = [v * q[1] for v in nums]
            den *= q[1]
            t = q[0]
        nums.append(t)
    return nums, den
