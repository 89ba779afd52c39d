"""Superpotential of a toric fiber over the Novikov field.

For a moment polytope with facets (v_i, c_i) and an interior fiber lam, the
potential is the finite sum

    W(x) = sum_i x^{v_i} * q^{w_i},        w_i = -r_i(lam) = -( <lam, v_i> - c_i ),

in brane coordinates x = (x_1, ..., x_n), each x_j a unit (valuation-zero)
Novikov scalar.  Exponents are in units of 2*pi (the symbolic scale of the
affine lengths), so every weight w_i is an exact negative rational on the
interior.

The logarithmic gradient y_j = x_j dW/dx_j = sum_i v_ij x^{v_i} q^{w_i} and
its logarithmic Hessian M_jk = sum_i v_ij v_ik x^{v_i} q^{w_i} drive the
critical-point machinery; the per-component leading strata (facets whose
weight attains the componentwise maximum) determine whether critical branes
can exist at the fiber at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .fields import NEG_INF, CoefficientField, fraction_str
from .novikov import NovikovScalar
from .polytope import MomentPolytope, Point, Vector, facet_values, parse_fiber, point_str


@dataclass(frozen=True)
class PotentialTerm:
    facet: int
    exponent: Vector
    weight: Fraction

    def to_json(self) -> dict:
        return {
            "facet": self.facet,
            "exponent": list(self.exponent),
            "weight": fraction_str(self.weight),
        }


@dataclass(frozen=True)
class ComponentStratum:
    component: int
    weight: Fraction
    facets: Tuple[int, ...]

    @property
    def dominating(self) -> Optional[int]:
        # A single facet dominating one component forces y_j = unit * x^{v} + lower,
        # which has no unit zero: no critical branes at this fiber.
        return self.facets[0] if len(self.facets) == 1 else None

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "weight": fraction_str(self.weight),
            "facets": list(self.facets),
        }


class PotentialFunction:
    """The potential at one fiber, with exact weights and integer exponents."""

    def __init__(self, polytope: MomentPolytope, fiber) -> None:
        self.polytope = polytope
        self.fiber: Point = parse_fiber(fiber)
        values = facet_values(polytope, self.fiber)  # errors off the interior
        self.dim = polytope.dim
        self.terms: Tuple[PotentialTerm, ...] = tuple(
            PotentialTerm(i, f.normal, -values[i]) for i, f in enumerate(polytope.facets)
        )

    # -- scalar evaluation ---------------------------------------------------

    @staticmethod
    def _check_units(x: Sequence[NovikovScalar]) -> None:
        for j, xj in enumerate(x):
            if xj.valuation() != 0:
                raise ValueError(
                    f"brane coordinate {j} is not a unit (valuation {xj.valuation()})"
                )

    def _power(self, xj: NovikovScalar, k: int, floor) -> NovikovScalar:
        if k >= 0:
            out = xj ** k
        else:
            out = xj.invert(floor if floor != NEG_INF else None) ** (-k)
        return out if floor == NEG_INF else out.truncate(floor)

    def monomial(self, x: Sequence[NovikovScalar], term: PotentialTerm, floor) -> NovikovScalar:
        """x^{v_i} q^{w_i} truncated at the working floor."""
        field = x[0].field
        out = NovikovScalar.one(field)
        for j, k in enumerate(term.exponent):
            if k:
                out = out * self._power(x[j], k, floor)
        out = out.shift(term.weight)
        return out if floor == NEG_INF else out.truncate(floor)

    def evaluate(self, x: Sequence[NovikovScalar], floor=NEG_INF) -> NovikovScalar:
        """W(x) = sum of x^{v_i} q^{w_i}; requires unit coordinates."""
        self._check_x(x)
        field = x[0].field
        total = NovikovScalar.zero(field, floor)
        for term in self.terms:
            total = total + self.monomial(x, term, floor)
        return total

    def gradient(self, x: Sequence[NovikovScalar], floor=NEG_INF) -> List[NovikovScalar]:
        """Logarithmic gradient y_j = sum_i v_ij x^{v_i} q^{w_i}."""
        self._check_x(x)
        field = x[0].field
        out = [NovikovScalar.zero(field, floor) for _ in range(self.dim)]
        for term in self.terms:
            mono = self.monomial(x, term, floor)
            for j, vij in enumerate(term.exponent):
                if vij:
                    out[j] = out[j] + mono.scale(field.coerce(vij))
        return out

    def hessian(self, x: Sequence[NovikovScalar], floor=NEG_INF) -> List[List[NovikovScalar]]:
        """Logarithmic Hessian M_jk = sum_i v_ij v_ik x^{v_i} q^{w_i}."""
        self._check_x(x)
        field = x[0].field
        mat = [[NovikovScalar.zero(field, floor) for _ in range(self.dim)] for _ in range(self.dim)]
        for term in self.terms:
            mono = self.monomial(x, term, floor)
            for j, vij in enumerate(term.exponent):
                if not vij:
                    continue
                for k, vik in enumerate(term.exponent):
                    if vik:
                        mat[j][k] = mat[j][k] + mono.scale(field.coerce(vij * vik))
        return mat

    def _check_x(self, x: Sequence[NovikovScalar]) -> None:
        if len(x) != self.dim:
            raise ValueError(f"expected {self.dim} brane coordinates, got {len(x)}")
        self._check_units(x)

    # -- leading data ----------------------------------------------------

    def leading_strata(self) -> List[ComponentStratum]:
        """Per component j: the facets with v_ij != 0 attaining the maximal
        weight.  These terms dominate y_j; solving the system they cut out
        is the first-order critical-point condition."""
        out = []
        for j in range(self.dim):
            touching = [t for t in self.terms if t.exponent[j] != 0]
            if not touching:
                raise ValueError(f"no facet involves coordinate {j}; polytope is degenerate")
            top = max(t.weight for t in touching)
            facets = tuple(t.facet for t in touching if t.weight == top)
            out.append(ComponentStratum(j, top, facets))
        return out

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "fiber": point_str(self.fiber),
            "polytope": self.polytope.to_json(),
            "terms": [t.to_json() for t in self.terms],
        }


def potential(p: MomentPolytope, fiber) -> PotentialFunction:
    return PotentialFunction(p, fiber)


def brane_from_constants(field: CoefficientField, values: Sequence) -> List[NovikovScalar]:
    """Constant (q-independent) unit brane coordinates from raw coefficients."""
    out = []
    for v in values:
        coeff = field.coerce(v)
        if field.is_zero(coeff):
            raise ValueError("brane coordinates must be nonzero")
        out.append(NovikovScalar.monomial(field, coeff, Fraction(0)))
    return out
