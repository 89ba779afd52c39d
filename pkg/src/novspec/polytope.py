"""Moment polytopes with exact rational facet data.

A polytope is stored through its facet presentation

    Delta = { lam in R^n : <lam, v_i> - c_i >= 0 }

with primitive integer normals v_i and rational offsets c_i.  The affine
length attached to facet i at an interior point lam is

    l_i(lam) = 2*pi * (<lam, v_i> - c_i),

and every area-like quantity in this package is reported in units of 2*pi:
we only ever store the rational part r_i(lam) = <lam, v_i> - c_i and keep
the 2*pi scale symbolic, so that exact arithmetic survives end to end.

Validation is exact.  Boundedness, nonempty interior and facet redundancy
are decided with a rational simplex solver (no floating-point feasibility
tolerances); vertices are enumerated by exact linear solves, and the
smoothness test at each vertex reduces to an integer determinant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .fields import fraction_str, parse_fraction

Vector = Tuple[int, ...]
Point = Tuple[Fraction, ...]


def _parse_point(text_or_seq) -> Point:
    # Accepts "1/2,1/3" or an iterable of rationals.
    if isinstance(text_or_seq, str):
        parts = [p for p in text_or_seq.split(",") if p.strip()]
        return tuple(parse_fraction(p.strip()) for p in parts)
    return tuple(parse_fraction(p) for p in text_or_seq)


def point_str(point: Sequence[Fraction]) -> str:
    return ",".join(fraction_str(Fraction(c)) for c in point)


def _vec_gcd(vec: Iterable[int]) -> int:
    g = 0
    for entry in vec:
        g = gcd_int(g, abs(entry))
    return g


def gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _frac_rank(rows: List[List[Fraction]]) -> int:
    # Plain fraction Gaussian elimination; inputs are tiny.
    mat = [row[:] for row in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    row = 0
    for col in range(cols):
        pivot = next((r for r in range(row, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        inv = 1 / mat[row][col]
        mat[row] = [x * inv for x in mat[row]]
        for r in range(len(mat)):
            if r != row and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [x - factor * y for x, y in zip(mat[r], mat[row])]
        row += 1
        rank += 1
        if row == len(mat):
            break
    return rank


def _frac_solve(rows: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    # Solve a square rational system; None when singular.
    n = len(rows)
    mat = [rows[r][:] + [rhs[r]] for r in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if mat[r][col] != 0), None)
        if pivot is None:
            return None
        mat[col], mat[pivot] = mat[pivot], mat[col]
        inv = 1 / mat[col][col]
        mat[col] = [x * inv for x in mat[col]]
        for r in range(n):
            if r != col and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [x - factor * y for x, y in zip(mat[r], mat[col])]
    return [mat[r][n] for r in range(n)]


def int_det(rows: Sequence[Sequence[int]]) -> int:
    # Fraction-free expansion is fine at these sizes (n <= 6 or so).
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
        sign = -1 if j % 2 else 1
        total += sign * rows[0][j] * int_det(minor)
    return total


def unimodular_inverse_transpose(a: Sequence[Sequence[int]]) -> Tuple[Vector, ...]:
    """Exact A^{-T} for an integer matrix with det = +-1."""
    n = len(a)
    det = int_det(a)
    if det not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det = {det})")
    rows = [[Fraction(x) for x in row] for row in a]
    cols = []
    for j in range(n):
        rhs = [Fraction(1 if r == j else 0) for r in range(n)]
        sol = _frac_solve(rows, rhs)
        assert sol is not None
        cols.append(sol)
    # Columns of A^{-1} are rows of A^{-T}; entries are integers here.
    out = []
    for j in range(n):
        row = []
        for x in cols[j]:
            if x.denominator != 1:
                raise ValueError("unimodular inverse produced a non-integer entry")
            row.append(int(x))
        out.append(tuple(row))
    return tuple(out)


def apply_matrix(a: Sequence[Sequence[int]], vec: Sequence) -> tuple:
    return tuple(sum(a[r][c] * vec[c] for c in range(len(vec))) for r in range(len(a)))


@dataclass(frozen=True)
class Facet:
    normal: Vector
    offset: Fraction

    def value(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != len(self.normal):
            raise ValueError("point dimension does not match facet normal")
        return sum((Fraction(p) * v for p, v in zip(point, self.normal)), -self.offset)

    def to_json(self) -> dict:
        return {"normal": list(self.normal), "offset": fraction_str(self.offset)}

    @staticmethod
    def from_json(obj: dict) -> "Facet":
        if not isinstance(obj, dict) or "normal" not in obj or "offset" not in obj:
            raise ValueError("facet record needs 'normal' and 'offset'")
        normal = obj["normal"]
        if not isinstance(normal, (list, tuple)) or not normal:
            raise ValueError("facet normal must be a nonempty integer list")
        aligned = []
        for entry in normal:
            if isinstance(entry, bool) or not isinstance(entry, int):
                raise ValueError("facet normals must be integers")
            aligned.append(entry)
        return Facet(tuple(aligned), parse_fraction(obj["offset"]))


@dataclass(frozen=True)
class MomentPolytope:
    dim: int
    facets: Tuple[Facet, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("polytope dimension must be >= 1")
        for f in self.facets:
            if len(f.normal) != self.dim:
                raise ValueError("facet normal length does not match dimension")

    def values(self, point: Sequence[Fraction]) -> List[Fraction]:
        pt = _parse_point(point)
        if len(pt) != self.dim:
            raise ValueError(f"point has dimension {len(pt)}, polytope has {self.dim}")
        return [f.value(pt) for f in self.facets]

    def is_interior(self, point) -> bool:
        try:
            vals = self.values(point)
        except ValueError:
            return False
        return all(v > 0 for v in vals)

    def contains(self, point) -> bool:
        return all(v >= 0 for v in self.values(point))

    def to_json(self) -> dict:
        return {"dim": self.dim, "facets": [f.to_json() for f in self.facets]}

    @staticmethod
    def from_json(obj) -> "MomentPolytope":
        if not isinstance(obj, dict):
            raise ValueError("polytope JSON must be an object")
        if "dim" not in obj or "facets" not in obj:
            raise ValueError("polytope JSON needs 'dim' and 'facets'")
        dim = obj["dim"]
        if isinstance(dim, bool) or not isinstance(dim, int):
            raise ValueError("polytope dim must be an integer")
        facets = tuple(Facet.from_json(f) for f in obj["facets"])
        return MomentPolytope(dim, facets)


def segment(a, b) -> MomentPolytope:
    """The interval [a, b] as a 1-d polytope: lam >= a and b - lam >= 0."""
    lo, hi = parse_fraction(a), parse_fraction(b)
    if lo >= hi:
        raise ValueError("segment needs a < b")
    return MomentPolytope(1, (Facet((1,), lo), Facet((-1,), -hi)))


def simplex(dim: int, size=1) -> MomentPolytope:
    """Standard simplex {lam_i >= 0, sum lam_i <= size} (projective-space polytope)."""
    s = parse_fraction(size)
    if s <= 0:
        raise ValueError("simplex size must be positive")
    facets = [Facet(tuple(1 if j == i else 0 for j in range(dim)), Fraction(0)) for i in range(dim)]
    facets.append(Facet(tuple(-1 for _ in range(dim)), -s))
    return MomentPolytope(dim, tuple(facets))


def box(bounds: Sequence[Tuple]) -> MomentPolytope:
    """Axis-aligned box given per-coordinate (lo, hi) bounds."""
    dim = len(bounds)
    facets = []
    for i, (lo, hi) in enumerate(bounds):
        lo, hi = parse_fraction(lo), parse_fraction(hi)
        if lo >= hi:
            raise ValueError("box needs lo < hi in every coordinate")
        e = tuple(1 if j == i else 0 for j in range(dim))
        facets.append(Facet(e, lo))
        facets.append(Facet(tuple(-x for x in e), -hi))
    return MomentPolytope(dim, tuple(facets))


def product(p0: MomentPolytope, p1: MomentPolytope) -> MomentPolytope:
    """Cartesian product; facet lists concatenate with zero-padded normals."""
    facets = []
    for f in p0.facets:
        facets.append(Facet(f.normal + (0,) * p1.dim, f.offset))
    for f in p1.facets:
        facets.append(Facet((0,) * p0.dim + f.normal, f.offset))
    return MomentPolytope(p0.dim + p1.dim, tuple(facets))


def transform(p: MomentPolytope, a: Sequence[Sequence[int]]) -> MomentPolytope:
    """Apply a GL(n, Z) change of torus coordinates: normals map by A.

    Moment coordinates map by A^{-T} (facet values are preserved:
    <A^{-T} lam, A v> = <lam, v>), and brane coordinates by x -> x^{A^{-T}}.
    """
    if len(a) != p.dim or any(len(row) != p.dim for row in a):
        raise ValueError("transform matrix shape does not match polytope dimension")
    if int_det(a) not in (1, -1):
        raise ValueError("transform matrix must be unimodular")
    facets = tuple(Facet(apply_matrix(a, f.normal), f.offset) for f in p.facets)
    return MomentPolytope(p.dim, facets)


def transform_point(a: Sequence[Sequence[int]], point) -> Point:
    """Image of a moment point under the coordinate change of transform(): A^{-T} lam."""
    inv_t = unimodular_inverse_transpose(a)
    pt = _parse_point(point)
    return tuple(sum(Fraction(inv_t[r][c]) * pt[c] for c in range(len(pt))) for r in range(len(inv_t)))


# ---------------------------------------------------------------------------
# Validation


@dataclass
class PolytopeReport:
    ok: bool
    dim: int
    facet_count: int
    bounded: bool
    interior_nonempty: bool
    interior_point: Optional[Point]
    redundant_facets: List[int]
    vertices: List[Point]
    simple: bool
    delzant: bool
    violations: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "dim": self.dim,
            "facet_count": self.facet_count,
            "bounded": self.bounded,
            "interior_nonempty": self.interior_nonempty,
            "interior_point": point_str(self.interior_point) if self.interior_point else None,
            "redundant_facets": self.redundant_facets,
            "vertices": [point_str(v) for v in self.vertices],
            "simple": self.simple,
            "delzant": self.delzant,
            "violations": self.violations,
        }


def _lp_symbols(n: int):
    import sympy

    return sympy.symbols(f"m0:{n}", real=True)


def _bounded_exact(p: MomentPolytope) -> bool:
    # Bounded iff normals span Q^n and admit a strictly positive dependent
    # combination: the recession cone {d : <v_i, d> >= 0} is then {0}.
    rows = [[Fraction(x) for x in f.normal] for f in p.facets]
    if _frac_rank(rows) < p.dim:
        return False
    import sympy
    from sympy.solvers.simplex import InfeasibleLPError, lpmin

    mu = _lp_symbols(len(p.facets))
    constraints = [m >= 1 for m in mu]
    for j in range(p.dim):
        constraints.append(
            sympy.Eq(sum(sympy.Integer(f.normal[j]) * m for f, m in zip(p.facets, mu)), 0)
        )
    try:
        lpmin(sum(mu), constraints)
    except InfeasibleLPError:
        return False
    return True


def interior_point(p: MomentPolytope) -> Optional[Point]:
    """A rational point maximizing the minimal facet value (None when empty)."""
    import sympy
    from sympy.solvers.simplex import InfeasibleLPError, UnboundedLPError, lpmax

    lam = sympy.symbols(f"l0:{p.dim}", real=True)
    t = sympy.Symbol("t_margin", real=True)
    constraints = [t <= 1]
    for f in p.facets:
        expr = sum(sympy.Integer(v) * x for v, x in zip(f.normal, lam))
        constraints.append(expr - sympy.Rational(f.offset) >= t)
    try:
        best, assignment = lpmax(t, constraints)
    except (InfeasibleLPError, UnboundedLPError):
        return None
    if best <= 0:
        return None
    return tuple(Fraction(str(assignment[x])) for x in lam)


def _facet_redundant(p: MomentPolytope, idx: int) -> bool:
    # Facet i is redundant when its value stays >= 0 over the polytope cut
    # out by the other facets alone.
    import sympy
    from sympy.solvers.simplex import InfeasibleLPError, UnboundedLPError, lpmin

    lam = sympy.symbols(f"l0:{p.dim}", real=True)
    constraints = []
    for j, f in enumerate(p.facets):
        if j == idx:
            continue
        expr = sum(sympy.Integer(v) * x for v, x in zip(f.normal, lam))
        constraints.append(expr - sympy.Rational(f.offset) >= 0)
    target = sum(sympy.Integer(v) * x for v, x in zip(p.facets[idx].normal, lam)) - sympy.Rational(
        p.facets[idx].offset
    )
    try:
        best, _ = lpmin(target, constraints)
    except UnboundedLPError:
        return False
    except InfeasibleLPError:
        # Other facets alone are already infeasible; the facet adds nothing.
        return True
    return best >= 0


def enumerate_vertices(p: MomentPolytope) -> List[Point]:
    """All vertices, exactly: n-subsets of facets with invertible normal matrix
    whose intersection point satisfies every inequality."""
    n = p.dim
    seen = {}
    for subset in itertools.combinations(range(len(p.facets)), n):
        rows = [[Fraction(x) for x in p.facets[i].normal] for i in subset]
        rhs = [p.facets[i].offset for i in subset]
        sol = _frac_solve(rows, rhs)
        if sol is None:
            continue
        pt = tuple(sol)
        if all(f.value(pt) >= 0 for f in p.facets):
            seen[pt] = True
    return sorted(seen.keys())


def active_facets(p: MomentPolytope, vertex: Point) -> List[int]:
    return [i for i, f in enumerate(p.facets) if f.value(vertex) == 0]


def polytope_validate(p: MomentPolytope) -> PolytopeReport:
    """Exact structural validation: primitive integer normals, boundedness,
    nonempty interior, no redundant facets, and the smoothness condition
    (exactly n active facets per vertex forming a Z-basis, |det| = 1)."""
    violations: List[str] = []
    if len(p.facets) < p.dim + 1:
        violations.append(f"needs at least {p.dim + 1} facets, found {len(p.facets)}")
    for i, f in enumerate(p.facets):
        g = _vec_gcd(f.normal)
        if g == 0:
            violations.append(f"facet {i} has zero normal")
        elif g != 1:
            violations.append(f"facet {i} normal is not primitive (content {g})")

    structurally_sane = not violations
    bounded = _bounded_exact(p) if structurally_sane else False
    if structurally_sane and not bounded:
        violations.append("polytope is unbounded")

    interior = interior_point(p) if bounded else None
    interior_nonempty = interior is not None
    if bounded and not interior_nonempty:
        violations.append("polytope has empty interior")

    redundant: List[int] = []
    if interior_nonempty:
        redundant = [i for i in range(len(p.facets)) if _facet_redundant(p, i)]
        for i in redundant:
            violations.append(f"facet {i} is redundant")

    vertices: List[Point] = []
    simple = False
    delzant = False
    if interior_nonempty and not redundant:
        vertices = enumerate_vertices(p)
        simple = True
        delzant = True
        for v in vertices:
            active = active_facets(p, v)
            if len(active) != p.dim:
                simple = False
                delzant = False
                violations.append(
                    f"vertex {point_str(v)} lies on {len(active)} facets, expected {p.dim}"
                )
                continue
            det = int_det([p.facets[i].normal for i in active])
            if abs(det) != 1:
                delzant = False
                violations.append(
                    f"vertex {point_str(v)} has non-unimodular facet normals (det {det})"
                )

    ok = not violations
    return PolytopeReport(
        ok=ok,
        dim=p.dim,
        facet_count=len(p.facets),
        bounded=bounded,
        interior_nonempty=interior_nonempty,
        interior_point=interior,
        redundant_facets=redundant,
        vertices=vertices,
        simple=simple,
        delzant=delzant,
        violations=violations,
    )


# ---------------------------------------------------------------------------
# Fiber data


def facet_values(p: MomentPolytope, fiber) -> List[Fraction]:
    """Rational parts r_i = <lam, v_i> - c_i at an interior point; the affine
    lengths are l_i = 2*pi*r_i.  Errors on boundary or exterior points."""
    vals = p.values(_parse_point(fiber))
    bad = [i for i, v in enumerate(vals) if v <= 0]
    if bad:
        raise ValueError(
            f"fiber is not interior: nonpositive value on facet(s) {bad}"
        )
    return vals


@dataclass(frozen=True)
class FiberRadius:
    facet: int
    radius_sq: Fraction  # exact: radius^2 = l_i / pi = 2 r_i
    radius: float

    def to_json(self) -> dict:
        return {
            "facet": self.facet,
            "radius_sq": fraction_str(self.radius_sq),
            "radius": self.radius,
        }


def fiber_radii(p: MomentPolytope, fiber) -> List[FiberRadius]:
    """Boundary-circle radii of the basic holomorphic disks through each facet:
    radius_i = sqrt(l_i / pi), kept exact as radius^2 = 2 r_i."""
    out = []
    for i, r in enumerate(facet_values(p, fiber)):
        sq = 2 * r
        out.append(FiberRadius(i, sq, float(sq) ** 0.5))
    return out


@dataclass(frozen=True)
class BlaschkeDisk:
    degrees: Tuple[int, ...]
    zeros: Tuple[Tuple[complex, ...], ...]
    winding: Vector  # total boundary class in H_1 of the torus fiber
    maslov: int
    area_weights: Tuple[Fraction, ...]  # d_i * r_i per facet, in 2*pi units
    area: Fraction
    radii: Tuple[FiberRadius, ...]

    def evaluate(self, z: complex) -> List[complex]:
        """Component value through each facet coordinate; boundary points
        (|z| = 1) land on the circle of the fiber radius."""
        if abs(z) > 1 + 1e-12:
            raise ValueError("Blaschke products are defined on the closed unit disk")
        out = []
        for i in range(len(self.degrees)):
            value = complex(self.radii[i].radius)
            for alpha in self.zeros[i]:
                value *= (z - alpha) / (1 - alpha.conjugate() * z)
            out.append(value)
        return out

    def to_json(self) -> dict:
        return {
            "degrees": list(self.degrees),
            "winding": list(self.winding),
            "maslov": self.maslov,
            "area_weights": [fraction_str(w) for w in self.area_weights],
            "area": fraction_str(self.area),
        }


def blaschke_disk(
    p: MomentPolytope,
    fiber,
    degrees: Sequence[int],
    zeros: Sequence[Sequence[complex]],
) -> BlaschkeDisk:
    """Disk class record for the product-of-Blaschke-factors disk with the
    given per-facet degree vector and interior zeros.

    Maslov index is 2 * sum(degrees) and the (2*pi-normalized) area is
    sum_i d_i * r_i(fiber); both are exact integers/rationals.
    """
    if len(degrees) != len(p.facets):
        raise ValueError("need one degree per facet")
    clean_degrees = []
    for d in degrees:
        if isinstance(d, bool) or not isinstance(d, int) or d < 0:
            raise ValueError("degrees must be nonnegative integers")
        clean_degrees.append(d)
    if len(zeros) != len(p.facets):
        raise ValueError("need one zero list per facet")
    clean_zeros = []
    for i, zs in enumerate(zeros):
        if len(zs) != clean_degrees[i]:
            raise ValueError(
                f"facet {i}: got {len(zs)} zeros for degree {clean_degrees[i]}"
            )
        row = []
        for alpha in zs:
            alpha = complex(alpha)
            if abs(alpha) >= 1:
                raise ValueError("Blaschke zeros must lie strictly inside the unit disk")
            row.append(alpha)
        clean_zeros.append(tuple(row))
    values = facet_values(p, fiber)
    radii = tuple(fiber_radii(p, fiber))
    winding = tuple(
        sum(d * f.normal[j] for d, f in zip(clean_degrees, p.facets))
        for j in range(p.dim)
    )
    weights = tuple(d * r for d, r in zip(clean_degrees, values))
    return BlaschkeDisk(
        degrees=tuple(clean_degrees),
        zeros=tuple(clean_zeros),
        winding=winding,
        maslov=2 * sum(clean_degrees),
        area_weights=weights,
        area=sum(weights, Fraction(0)),
        radii=radii,
    )


def parse_fiber(text_or_seq) -> Point:
    return _parse_point(text_or_seq)
