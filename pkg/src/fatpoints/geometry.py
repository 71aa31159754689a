"""Exact projective-plane primitives and seeded configuration generators.

Points and lines are stored as triples of ``Fraction`` scaled so that the
first nonzero coordinate is 1, which makes equality and hashing exact.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

DEFAULT_BOX = 1000
MAX_RETRIES = 64


class GeometryError(ValueError):
    """Raised for degenerate input such as two equal points."""


class GenericityError(RuntimeError):
    """Raised when a generator exhausts its retry budget."""


def _normalize(coords) -> tuple[Fraction, Fraction, Fraction]:
    fs = tuple(Fraction(c) for c in coords)
    if len(fs) != 3:
        raise GeometryError(f"expected 3 homogeneous coordinates, got {len(fs)}")
    for c in fs:
        if c != 0:
            return tuple(x / c for x in fs)
    raise GeometryError("all homogeneous coordinates are zero")


def _primitive_ints(coords: Sequence[Fraction]) -> tuple[int, int, int]:
    den = math.lcm(*(c.denominator for c in coords))
    ints = [int(c * den) for c in coords]
    g = math.gcd(*ints)
    return tuple(v // g for v in ints)


def _cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def det3(u, v, w):
    return _dot(u, _cross(v, w))


@dataclass(frozen=True)
class ProjectivePoint:
    coords: tuple[Fraction, Fraction, Fraction]

    def __init__(self, *coords):
        if len(coords) == 1:
            coords = tuple(coords[0])
        object.__setattr__(self, "coords", _normalize(coords))

    def integer_coords(self) -> tuple[int, int, int]:
        """Primitive integer representative (gcd 1, first nonzero entry positive)."""
        return _primitive_ints(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __repr__(self):
        return "[" + ":".join(str(c) for c in self.coords) + "]"


@dataclass(frozen=True)
class ProjectiveLine:
    """Line ``a*x + b*y + c*z = 0`` given by its dual coordinates."""

    coeffs: tuple[Fraction, Fraction, Fraction]

    def __init__(self, *coeffs):
        if len(coeffs) == 1:
            coeffs = tuple(coeffs[0])
        object.__setattr__(self, "coeffs", _normalize(coeffs))

    def contains(self, p: ProjectivePoint) -> bool:
        return _dot(self.coeffs, p.coords) == 0

    def integer_coeffs(self) -> tuple[int, int, int]:
        return _primitive_ints(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        return "L(" + ",".join(str(c) for c in self.coeffs) + ")"


@dataclass(frozen=True)
class PointConfiguration:
    points: tuple[ProjectivePoint, ...]
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        pts = tuple(p if isinstance(p, ProjectivePoint) else ProjectivePoint(p) for p in self.points)
        if not pts:
            raise GeometryError("a configuration needs at least one point")
        if len(set(pts)) != len(pts):
            raise GeometryError("configuration points must be pairwise distinct")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def to_dict(self) -> dict:
        out = {}
        if self.label is not None:
            out["label"] = self.label
        out["points"] = [[_frac_str(c) for c in p.coords] for p in self.points]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "PointConfiguration":
        try:
            raw = data["points"]
        except (KeyError, TypeError):
            raise GeometryError("configuration JSON needs a 'points' list") from None
        pts = []
        for row in raw:
            if not isinstance(row, list) or len(row) != 3:
                raise GeometryError(f"bad point entry {row!r}")
            pts.append(ProjectivePoint(*(_parse_frac(c) for c in row)))
        return cls(tuple(pts), data.get("label"))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "PointConfiguration":
        return cls.from_dict(json.loads(text))


def _frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _parse_frac(c) -> Fraction:
    if isinstance(c, bool) or isinstance(c, float):
        raise GeometryError(f"coordinates must be exact fraction strings or integers, got {c!r}")
    if isinstance(c, int):
        return Fraction(c)
    if not isinstance(c, str) or any(ch in c for ch in ".eE"):
        raise GeometryError(f"bad coordinate {c!r}")
    try:
        return Fraction(c)
    except (ValueError, ZeroDivisionError):
        raise GeometryError(f"bad coordinate {c!r}") from None


# -- incidence -------------------------------------------------------------


def line_through(p: ProjectivePoint, q: ProjectivePoint) -> ProjectiveLine:
    if p == q:
        raise GeometryError(f"line_through needs two distinct points, got {p} twice")
    return ProjectiveLine(_cross(p.coords, q.coords))


def meet(l1: ProjectiveLine, l2: ProjectiveLine) -> ProjectivePoint:
    if l1 == l2:
        raise GeometryError(f"meet needs two distinct lines, got {l1} twice")
    return ProjectivePoint(_cross(l1.coeffs, l2.coeffs))


def _rank3(rows) -> int:
    """Rank of a list of exact 3-vectors."""
    rows = [list(r) for r in rows]
    rank = 0
    for col in range(3):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            f = Fraction(rows[i][col]) / rows[rank][col]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def collinear(points: Sequence[ProjectivePoint]) -> bool:
    return _rank3([p.coords for p in points]) <= 2


def conic_monomials(p) -> list:
    x, y, z = p
    return [x * x, x * y, x * z, y * y, y * z, z * z]


def on_common_conic(points: Sequence[ProjectivePoint]) -> bool:
    if len(points) < 6:
        return True
    from fatpoints.linalg import rank_rational

    rows = [conic_monomials(p.integer_coords()) for p in points]
    return rank_rational(rows) < 6


def collinear_subsets(cfg: PointConfiguration | Sequence[ProjectivePoint], min_size: int = 3) -> list[frozenset[int]]:
    """Maximal collinear index sets with at least ``min_size`` members, sorted."""
    pts = list(cfg)
    found = set()
    for i, j in itertools.combinations(range(len(pts)), 2):
        ln = line_through(pts[i], pts[j])
        members = frozenset(k for k, p in enumerate(pts) if ln.contains(p))
        if len(members) >= min_size:
            found.add(members)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


# -- recognition -----------------------------------------------------------


def is_star(cfg: PointConfiguration, d: int) -> bool:
    pts = list(cfg)
    if d < 2 or len(pts) != d * (d - 1) // 2:
        return False
    if d == 2:
        return True
    if d == 3:
        return not collinear(pts)
    candidates = [s for s in collinear_subsets(pts) if len(s) == d - 1]
    for chosen in itertools.combinations(candidates, d):
        if _star_incidences(chosen, len(pts)) is not None:
            return True
    return False


def _star_incidences(lines, n_points):
    """Vertex set if ``lines`` pairwise meet in distinct configuration points."""
    vertices = set()
    for a, b in itertools.combinations(lines, 2):
        common = a & b
        if len(common) != 1:
            return None
        (v,) = common
        if v in vertices:
            return None  # three lines concurrent
        vertices.add(v)
    return vertices


def is_quasi_star(cfg: PointConfiguration, d: int) -> bool:
    pts = list(cfg)
    if d < 2 or len(pts) != d * (d + 1) // 2:
        return False
    if d == 2:
        # one vertex and two extras, the extras off each other's line
        return not collinear(pts)
    candidates = [s for s in collinear_subsets(pts) if len(s) == d]
    everything = set(range(len(pts)))
    for chosen in itertools.combinations(candidates, d):
        vertices = _star_incidences(chosen, len(pts))
        if vertices is None:
            continue
        extras = []
        for ln in chosen:
            rest = ln - vertices
            if len(rest) != 1:
                break
            extras.extend(rest)
        else:
            if len(set(extras)) != d or vertices | set(extras) != everything:
                continue
            if not collinear([pts[i] for i in extras]):
                return True
    return False


def is_collinear_plus_point(cfg: PointConfiguration) -> int | None:
    """``k`` when all but one point lie on a line and the last is off it."""
    pts = list(cfg)
    s = len(pts)
    if s < 3 or collinear(pts):
        return None
    if s == 3:
        return 2
    for subset in collinear_subsets(pts, min_size=s - 1):
        if len(subset) == s - 1:
            return s - 1
    return None


# -- generators ------------------------------------------------------------


def _rand_int_triple(rng: random.Random, box: int) -> tuple[int, int, int]:
    while True:
        v = tuple(rng.randint(-box, box) for _ in range(3))
        if any(v):
            return v


def _random_lines(rng, n, box):
    return [ProjectiveLine(_rand_int_triple(rng, box)) for _ in range(n)]


def _lines_general(lines) -> bool:
    if len(set(lines)) != len(lines):
        return False
    return all(det3(a.coeffs, b.coeffs, c.coeffs) != 0 for a, b, c in itertools.combinations(lines, 3))


def _random_point_on(rng, line: ProjectiveLine, box: int) -> ProjectivePoint:
    # parametrize the line by two independent points in its kernel
    a, b, c = line.integer_coeffs()
    if a != 0:
        u, v = (-b, a, 0), (-c, 0, a)
    elif b != 0:
        u, v = (1, 0, 0), (0, -c, b)
    else:
        u, v = (1, 0, 0), (0, 1, 0)
    while True:
        s, t = rng.randint(-box, box), rng.randint(-box, box)
        if s or t:
            return ProjectivePoint(tuple(s * x + t * y for x, y in zip(u, v)))


def _retry(build, what: str, retries: int):
    for _ in range(retries + 1):
        cfg = build()
        if cfg is not None:
            return cfg
    raise GenericityError(f"{what}: no generic realization after {retries} retries")


def _exact_collinear_structure(pts, expected: Iterable[Iterable[int]]) -> bool:
    return set(collinear_subsets(pts)) == {frozenset(e) for e in expected}


def star_lines(d: int, rng: random.Random, box: int = DEFAULT_BOX):
    lines = _random_lines(rng, d, box)
    return lines if _lines_general(lines) else None


def gen_star(d: int, seed: int, box: int = DEFAULT_BOX, retries: int = MAX_RETRIES) -> PointConfiguration:
    """All pairwise intersection points of ``d`` random lines, in (i, j) order."""
    if d < 2:
        raise GeometryError("a star needs d >= 2 lines")
    rng = random.Random(seed)

    def build():
        lines = star_lines(d, rng, box)
        if lines is None:
            return None
        pts = [meet(lines[i], lines[j]) for i, j in itertools.combinations(range(d), 2)]
        cfg = PointConfiguration(tuple(pts), f"star{d}")
        return cfg if d <= 3 or is_star(cfg, d) else None

    return _retry(build, f"gen_star({d})", retries)


def gen_quasi_star(d: int, seed: int, box: int = DEFAULT_BOX, retries: int = MAX_RETRIES) -> PointConfiguration:
    """A ``d``-star followed by one extra point on each of its lines.

    The extras come last, extra ``i`` on line ``i``; for ``d = 3`` the
    order is A, B, C style vertices then D, E, F style extras.
    """
    if d < 3:
        raise GeometryError("a quasi star needs d >= 3")
    rng = random.Random(seed)
    pairs = list(itertools.combinations(range(d), 2))

    def build():
        lines = star_lines(d, rng, box)
        if lines is None:
            return None
        vertices = [meet(lines[i], lines[j]) for i, j in pairs]
        extras = [_random_point_on(rng, ln, box) for ln in lines]
        pts = vertices + extras
        if len(set(pts)) != len(pts) or collinear(extras):
            return None
        cfg = PointConfiguration(tuple(pts), f"quasi_star{d}")
        n = len(vertices)
        expected = [
            [k for k, (i, j) in enumerate(pairs) if ln in (i, j)] + [n + ln]
            for ln in range(d)
        ]
        return cfg if _exact_collinear_structure(pts, expected) else None

    return _retry(build, f"gen_quasi_star({d})", retries)


def gen_collinear_plus_point(k: int, seed: int, box: int = DEFAULT_BOX, retries: int = MAX_RETRIES) -> PointConfiguration:
    """``k`` points on a random line followed by one point off it."""
    if k < 1:
        raise GeometryError("need k >= 1 collinear points")
    rng = random.Random(seed)

    def build():
        line = ProjectiveLine(_rand_int_triple(rng, box))
        pts = [_random_point_on(rng, line, box) for _ in range(k)]
        q = ProjectivePoint(_rand_int_triple(rng, box))
        if line.contains(q) or len(set(pts)) != k:
            return None
        return PointConfiguration(tuple(pts) + (q,), f"collinear{k}_plus_one")

    return _retry(build, f"gen_collinear_plus_point({k})", retries)


def gen_generic(s: int, seed: int, box: int = DEFAULT_BOX, retries: int = MAX_RETRIES) -> PointConfiguration:
    """``s`` random points with no three collinear and no six on a conic."""
    rng = random.Random(seed)

    def build():
        pts = [ProjectivePoint(_rand_int_triple(rng, box)) for _ in range(s)]
        if len(set(pts)) != s or collinear_subsets(pts):
            return None
        if any(on_common_conic(sub) for sub in itertools.combinations(pts, 6)):
            return None
        return PointConfiguration(tuple(pts), f"generic{s}")

    return _retry(build, f"gen_generic({s})", retries)


def gen_prop42(seed: int, box: int = DEFAULT_BOX, retries: int = MAX_RETRIES, check_alpha: bool = True) -> PointConfiguration:
    """Ten points: a triangle, two extra points on each side, one free point.

    Order: P1 = L1.L2, P2 = L2.L3, P3 = L1.L3, then (P4, P5) on L1,
    (P6, P7) on L2, (P8, P9) on L3 and the free point P10.
    """
    rng = random.Random(seed)
    expected = [[0, 2, 3, 4], [0, 1, 5, 6], [1, 2, 7, 8]]

    def build():
        lines = star_lines(3, rng, box)
        if lines is None:
            return None
        l1, l2, l3 = lines
        pts = [meet(l1, l2), meet(l2, l3), meet(l1, l3)]
        for ln in lines:
            pts += [_random_point_on(rng, ln, box), _random_point_on(rng, ln, box)]
        pts.append(ProjectivePoint(_rand_int_triple(rng, box)))
        if len(set(pts)) != 10 or not _exact_collinear_structure(pts, expected):
            return None
        cfg = PointConfiguration(tuple(pts), "prop42")
        if check_alpha:
            from fatpoints.analyzer import alpha

            if alpha(cfg, 1) != 4:
                return None
        return cfg

    return _retry(build, "gen_prop42", retries)


def _conic_point(t: Fraction) -> ProjectivePoint:
    return ProjectivePoint(t.numerator ** 2, t.numerator * t.denominator, t.denominator ** 2)


def on_standard_conic(p: ProjectivePoint) -> bool:
    x, y, z = p.coords
    return x * z == y * y


def gen_conic_example(seed: int, box: int = DEFAULT_BOX, retries: int = MAX_RETRIES) -> PointConfiguration:
    """Seven points on ``x*z = y^2`` plus three constructed intersection points.

    P8 = L12.L67, P10 = L23.L45, P9 = L1,10.L67 (1-based labels).
    """
    rng = random.Random(seed)
    # 0-based: L(0,1), L(5,6), L(1,2), L(3,4), L(0,9) carry the forced incidences
    expected = [[0, 1, 7], [5, 6, 7, 8], [1, 2, 9], [3, 4, 9], [0, 8, 9]]

    def build():
        ts = []
        while len(ts) < 7:
            t = Fraction(rng.randint(-box, box), rng.randint(1, box))
            if t not in ts:
                ts.append(t)
        p = [_conic_point(t) for t in ts]
        try:
            p8 = meet(line_through(p[0], p[1]), line_through(p[5], p[6]))
            p10 = meet(line_through(p[1], p[2]), line_through(p[3], p[4]))
            p9 = meet(line_through(p[0], p10), line_through(p[5], p[6]))
        except GeometryError:
            return None
        pts = p + [p8, p9, p10]
        if len(set(pts)) != 10 or any(on_standard_conic(q) for q in (p8, p9, p10)):
            return None
        if not _exact_collinear_structure(pts, expected):
            return None
        return PointConfiguration(tuple(pts), "conic_example")

    return _retry(build, "gen_conic_example", retries)
