"""Exact homological algebra over the Novikov field.

Everything here is elimination on sparse columns whose entries are
finite Novikov sums.  Two reduction notions coexist:

* structural reduction (smallest nonzero coordinate first), used for
  ranks and membership in the image of the differential, and
* lead reduction, where the lead of a vector is the coordinate
  realizing the largest level (valuation plus action), ties broken by
  the order generators are listed.

Both use cross-multiplication only, so exact modes never leave the
group algebra of finite sums; pivot divisions happen once at the end,
when a witness representative is produced.

The spectral number of a nonzero class is computed by reducing a
representative against an image basis whose leads are pairwise
distinct.  For such a basis the level of any combination splits as
max(valuation of coefficient + level of basis vector), which makes the
terminal level of the reduction the infimum over the class, and the
reduced vector a representative attaining it.  Exact cycles (class
zero) are detected first by structural membership, since lead
reduction need not terminate on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd as int_gcd
from typing import Dict, List, Optional, Tuple

from .complexes import Chain, FilteredComplex, chain_to_json, level
from .fields import (
    NEG_INF,
    CoefficientField,
    GaussianRational,
    floor_str,
    fraction_str,
)
from .novikov import FloorValue, NovikovScalar

Vec = Dict[int, NovikovScalar]

STEP_BUDGET = 200_000
WITNESS_DEPTH = Fraction(16)


# -- vector helpers ------------------------------------------------------


def _to_vec(cx: FilteredComplex, chain: Chain) -> Vec:
    out: Vec = {}
    for gid, coeff in chain.items():
        if gid not in cx.index:
            raise ValueError(f"unknown generator id {gid!r}")
        if not coeff.is_zero():
            out[cx.index[gid]] = coeff
    return out

def _to_chain(cx: FilteredComplex, vec: Vec) -> Chain:
    return {cx.generators[i].id: c for i, c in vec.items() if not c.is_zero()}


def _vec_sub_scaled(v: Vec, b: Vec, s: NovikovScalar, drop: int) -> Vec:
    """v - s*b with coordinate ``drop`` removed explicitly."""
    out = dict(v)
    for i, c in b.items():
        term = c * s
        if i in out:
            out[i] = out[i] - term
        else:
            out[i] = -term
    out.pop(drop, None)
    return {i: c for i, c in out.items() if not c.is_zero()}


def _vec_cross(v: Vec, b: Vec, coord: int) -> Vec:
    """b[coord]*v - v[coord]*b; kills coordinate coord, no division."""
    bc, vc = b[coord], v[coord]
    out: Vec = {}
    for i, c in v.items():
        out[i] = c * bc
    for i, c in b.items():
        term = c * vc
        if i in out:
            out[i] = out[i] - term
        else:
            out[i] = -term
    out.pop(coord, None)
    return {i: c for i, c in out.items() if not c.is_zero()}


def _rational_content(values: List[Fraction]) -> Fraction:
    num = 0
    den = 1
    for f in values:
        num = int_gcd(num, f.numerator)
        den = den * f.denominator // int_gcd(den, f.denominator)
    if num == 0:
        return Fraction(1)
    return Fraction(num, den)


def _vec_normalize(v: Vec, field: CoefficientField) -> Vec:
    """Divide by a unit (content times a monomial); spans are unchanged."""
    if not v:
        return v
    shift = max(c.valuation() for c in v.values())
    if field.mode == "rational":
        fracs = [coeff for s in v.values() for _, coeff in s.terms]
        content = _rational_content(fracs)
        factor = 1 / content
    elif field.mode == "gaussian":
        fracs = [
            part
            for s in v.values()
            for _, coeff in s.terms
            for part in (coeff.re, coeff.im)
            if part != 0
        ]
        content = _rational_content(fracs)
        factor = GaussianRational(1 / content, 0)
    else:
        mags = [field.magnitude(coeff) for s in v.values() for _, coeff in s.terms]
        top = max(mags) if mags else 1.0
        factor = complex(1.0 / top, 0.0) if top > 0 else complex(1.0, 0.0)
    return {i: s.scale(factor).shift(-shift) for i, s in v.items()}


# -- structural echelon ----------------------------------------------------


@dataclass
class Echelon:
    """Column echelon data: pivot coordinate -> vector."""

    field: CoefficientField
    pivots: Dict[int, Vec] = dc_field(default_factory=dict)
    audit: List[dict] = dc_field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: Vec) -> Vec:
        """Structural reduction; result empty iff v lies in the span."""
        v = dict(v)
        while v:
            p = min(v)
            if p not in self.pivots:
                return v
            v = _vec_normalize(_vec_cross(v, self.pivots[p], p), self.field)
        return v

    def insert(self, v: Vec, label: Optional[str] = None) -> bool:
        """Add a column; returns True if it enlarged the span."""
        v = self.reduce(v)
        if not v:
            return False
        p = min(v)
        if self.field.mode == "complex":
            mag = self.field.magnitude(v[p].leading_coefficient())
            scale = max(
                self.field.magnitude(c)
                for s in v.values()
                for _, c in s.terms
            )
            if mag < 10 * self.field.eps * scale:
                self.audit.append(
                    {
                        "coordinate": p,
                        "label": label,
                        "pivot_magnitude": mag,
                        "threshold": 10 * self.field.eps * scale,
                    }
                )
        self.pivots[p] = v
        return True


def echelon_from_columns(
    cx: FilteredComplex, sources: Optional[List[str]] = None
) -> Echelon:
    """Echelon of the differential image restricted to given sources."""
    ech = Echelon(cx.field)
    if sources is None:
        sources = [g.id for g in cx.generators]
    for gid in sources:
        col = cx.column(gid)
        if col:
            ech.insert(_to_vec(cx, col), label=gid)
    return ech


# -- homology ranks ---------------------------------------------------------


def homology_report(cx: FilteredComplex) -> dict:
    """Ranks of homology over the Novikov field, by degree.

    When every differential entry drops degree by exactly one the
    report is integer graded; otherwise degrees only make sense mod 2.
    rank H_k = dim C_k - rank D_k - rank D_{k+1}.
    """
    audit: List[dict] = []
    if cx.degrees_strictly_graded():
        degrees = sorted({g.degree for g in cx.generators})
        dims = {k: 0 for k in degrees}
        for g in cx.generators:
            dims[g.degree] += 1
        rank_d = {}
        for k in degrees:
            ech = echelon_from_columns(
                cx, [g.id for g in cx.generators if g.degree == k]
            )
            rank_d[k] = ech.rank
            audit.extend(ech.audit)
        ranks = {}
        for k in degrees:
            ranks[k] = dims[k] - rank_d.get(k, 0) - rank_d.get(k + 1, 0)
        return {
            "graded": "integer",
            "ranks": {str(k): r for k, r in sorted(ranks.items())},
            "total": sum(ranks.values()),
            "pivot_audit": audit,
        }
    sides = {0: "even", 1: "odd"}
    dims = {0: 0, 1: 0}
    for g in cx.generators:
        dims[g.degree % 2] += 1
    rank_d = {}
    for par in (0, 1):
        ech = echelon_from_columns(
            cx, [g.id for g in cx.generators if g.degree % 2 == par]
        )
        rank_d[par] = ech.rank
        audit.extend(ech.audit)
    ranks = {
        sides[par]: dims[par] - rank_d[par] - rank_d[1 - par] for par in (0, 1)
    }
    return {
        "graded": "mod2",
        "ranks": ranks,
        "total": sum(ranks.values()),
        "pivot_audit": audit,
    }


def homology_rank(cx: FilteredComplex) -> dict:
    """Degree -> rank mapping (keys are ints or 'even'/'odd')."""
    report = homology_report(cx)
    if report["graded"] == "integer":
        return {int(k): v for k, v in report["ranks"].items()}
    return dict(report["ranks"])


# -- spectrum ----------------------------------------------------------------


@dataclass(frozen=True)
class Spectrum:
    """Action spectrum: base action values plus the period group."""

    base_actions: Tuple[Fraction, ...]
    generator: Fraction  # positive generator of omega(Gamma), 0 if trivial

    def contains(self, value) -> bool:
        if value == NEG_INF:
            return False
        value = Fraction(value)
        for base in self.base_actions:
            diff = value - base
            if self.generator == 0:
                if diff == 0:
                    return True
            elif (diff / self.generator).denominator == 1:
                return True
        return False

    def to_json(self) -> dict:
        return {
            "base_actions": [fraction_str(a) for a in self.base_actions],
            "period_group_generator": fraction_str(self.generator),
        }


def spectrum(cx: FilteredComplex) -> Spectrum:
    actions = tuple(sorted({g.action for g in cx.generators}))
    return Spectrum(actions, cx.lattice.group_generator())


# -- spectral numbers ---------------------------------------------------------


@dataclass
class SpectralResult:
    """Outcome of a spectral number computation.

    value is the minimal level over representatives of the class, or
    -inf when the class vanishes (an exact cycle); witness_cycle is a
    representative attaining the value; spectrality names a generator
    and lattice vector with action(generator) - omega(vector) == value.
    """

    value: FloorValue
    witness_cycle: Optional[Chain]
    spectrality: Optional[Tuple[str, Tuple[int, ...]]]

    @property
    def is_boundary(self) -> bool:
        return self.value == NEG_INF

    def to_json(self) -> dict:
        return {
            "value": floor_str(self.value),
            "witness_cycle": None
            if self.witness_cycle is None
            else chain_to_json(self.witness_cycle),
            "spectrality": None
            if self.spectrality is None
            else {
                "generator": self.spectrality[0],
                "lattice_vector": list(self.spectrality[1]),
            },
        }


def _lead(vec: Vec, actions: List[Fraction]) -> Tuple[int, Fraction]:
    """Coordinate realizing the level, smallest index among the argmax."""
    best_level = NEG_INF
    best_coord = -1
    for i in sorted(vec):
        v = vec[i].valuation()
        if v == NEG_INF:
            continue
        lvl = v + actions[i]
        if lvl > best_level:
            best_level = lvl
            best_coord = i
    if best_coord < 0:
        raise ValueError("zero vector has no lead")
    return best_coord, best_level


def _lead_basis(ech: Echelon, actions: List[Fraction], field) -> Dict[int, Vec]:
    """Rebase the image so that lead coordinates are pairwise distinct."""
    basis: Dict[int, Vec] = {}
    for p in sorted(ech.pivots):
        v = ech.pivots[p]
        steps = 0
        while v:
            coord, _ = _lead(v, actions)
            if coord not in basis:
                basis[coord] = v
                break
            v = _vec_normalize(_vec_cross(v, basis[coord], coord), field)
            steps += 1
            if steps > STEP_BUDGET:
                raise RuntimeError("lead disambiguation exceeded step budget")
        # v empty cannot happen: echelon vectors stay independent
    return basis


def spectral_number(cx: FilteredComplex, chain: Chain) -> SpectralResult:
    """Minimal level over all representatives of the class of ``chain``.

    The chain must be closed (differential zero down to the floor).
    Boundaries report value -inf.  In exact modes the value, witness
    and spectrality data are exact.
    """
    boundary = cx.apply_differential(chain)
    if boundary:
        raise ValueError(
            f"chain is not closed: differential hits {sorted(boundary)}"
        )
    z = _to_vec(cx, chain)
    ech = echelon_from_columns(cx)
    if not ech.reduce(z):
        return SpectralResult(NEG_INF, None, None)

    actions = [g.action for g in cx.generators]
    basis = _lead_basis(ech, actions, cx.field)

    field = cx.field
    v = dict(z)
    multiplier = NovikovScalar.one(field)
    steps = 0
    while True:
        coord, _ = _lead(v, actions)
        if coord not in basis:
            break
        b = basis[coord]
        bc = b[coord]
        if bc.is_monomial():
            ratio = v[coord] * bc.invert()
            v = _vec_sub_scaled(v, b, ratio, coord)
        else:
            vc = v[coord]
            v = {i: c * bc for i, c in v.items()}
            v = _vec_sub_scaled(v, b, vc, coord)
            multiplier = multiplier * bc
            if multiplier.is_monomial():
                inv = multiplier.invert()
                v = {i: c * inv for i, c in v.items()}
                multiplier = NovikovScalar.one(field)
        if not v:
            raise RuntimeError(
                "membership said nonzero class but reduction emptied the "
                "representative; complex data is inconsistent"
            )
        steps += 1
        if steps > STEP_BUDGET:
            raise RuntimeError("spectral reduction exceeded step budget")

    _, raw_level = _lead(v, actions)
    mult_val = multiplier.valuation()
    value = raw_level - mult_val

    if multiplier.is_monomial():
        inv = multiplier.invert()
        witness_vec = {i: c * inv for i, c in v.items()}
    else:
        inv = multiplier.invert(floor=-mult_val - WITNESS_DEPTH)
        witness_vec = {i: c * inv for i, c in v.items()}
    witness = _to_chain(cx, witness_vec)

    spectrality = None
    for g in cx.generators:
        sol = cx.lattice.solve(g.action - value)
        if sol is not None:
            spectrality = (g.id, sol)
            break

    return SpectralResult(value, witness, spectrality)


def image_echelon_audit(cx: FilteredComplex) -> List[dict]:
    """Pivot audit of the full image echelon (floating mode only)."""
    return echelon_from_columns(cx).audit
