"""Weierstrass fibrations over P^m and singular points of their total spaces.

The data of a fibration is a tuple of coefficient forms (a1, a2, a3, a4, a6)
of degrees (k, 2k, 3k, 4k, 6k) cutting out, on the affine fiber chart,

    F(x, y) = y^2 + a1*x*y + a3*y - x^3 - a2*x^2 - a4*x - a6.

Which coefficients may be nonzero depends on the characteristic (a completed
model exists in every fiber):

    p = 2:  a2 = 0            (a1, a3, a4, a6 vary)
    p = 3:  a1 = a3 = 0       (a2, a4, a6 vary)
    p > 3:  a1 = a2 = a3 = 0  (a4, a6 vary)

A fiber point over a closed point P is a singular point of the total space
iff F and all m+2 partials (fiber coordinates x, y plus the m base
directions) vanish there; the base-direction conditions only see the
first-order jets of the coefficient forms at P.  Two independent detectors
are provided: a closed-form solver for the candidate (x, y) per
characteristic, and an exhaustive scan over the whole affine fiber.  The
fiber point at infinity (0:1:0) is never singular (the Z-partial there is
Y^2 = 1) and is asserted, never searched.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from .base import ClosedPoint, Jet, closed_points_up_to, jet_at
from .gf import FieldCtx, FieldElem, make_field
from .sections import Section, dim_space, exact_divide, monomials, section_from_slots

WEIER_FORMAT_VERSION = 1

_INDICES = (1, 2, 3, 4, 6)


def varying_indices(p: int) -> tuple[int, ...]:
    """Which of a1, a2, a3, a4, a6 may be nonzero in characteristic p."""
    if p == 2:
        return (1, 3, 4, 6)
    if p == 3:
        return (2, 4, 6)
    return (4, 6)


def section_degrees(p: int, k: int) -> tuple[int, ...]:
    """Degrees i*k of the varying coefficient forms, in index order."""
    return tuple(i * k for i in varying_indices(p))


class WeierstrassData:
    """An immutable fibration datum; the discriminant form is computed at
    construction time and cached."""

    __slots__ = ("m", "k", "field", "a1", "a2", "a3", "a4", "a6", "delta")

    def __init__(self, m: int, k: int, field: FieldCtx,
                 a1: Section, a2: Section, a3: Section, a4: Section, a6: Section):
        if k < 1:
            raise ValueError(f"need k >= 1, got {k}")
        allowed = varying_indices(field.p)
        secs = {1: a1, 2: a2, 3: a3, 4: a4, 6: a6}
        for i, s in secs.items():
            if s.m != m or s.field != field:
                raise ValueError(f"a{i} does not live on P^{m} over the given field")
            if s.d != i * k:
                raise ValueError(f"a{i} must have degree {i * k}, got {s.d}")
            if i not in allowed and not s.is_zero:
                raise ValueError(
                    f"a{i} must vanish identically in characteristic {field.p}"
                )
        self.m, self.k, self.field = m, k, field
        self.a1, self.a2, self.a3, self.a4, self.a6 = a1, a2, a3, a4, a6
        self.delta = discriminant(self)

    def sections(self) -> dict[int, Section]:
        return {1: self.a1, 2: self.a2, 3: self.a3, 4: self.a4, 6: self.a6}

    def __repr__(self):
        return (
            f"WeierstrassData(m={self.m}, k={self.k}, "
            f"F_{self.field.p}^{self.field.n})"
        )


def discriminant(w: WeierstrassData) -> Section:
    """The discriminant form, of degree 12k, via the b-invariants:

    b2 = a1^2 + 4 a2,  b4 = 2 a4 + a1 a3,  b6 = a3^2 + 4 a6,
    b8 = a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2,
    delta = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6.
    """
    a1, a2, a3, a4, a6 = w.a1, w.a2, w.a3, w.a4, w.a6
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * (a3 * a3) - a4 * a4
    delta = -(b2 * b2 * b8) - 8 * (b4 * b4 * b4) - 27 * (b6 * b6) + 9 * (b2 * b4 * b6)
    if delta.d != 12 * w.k and not delta.is_zero:
        raise AssertionError("discriminant degree bookkeeping failed")
    return delta


def discriminant_value(a1v: FieldElem, a2v: FieldElem, a3v: FieldElem,
                       a4v: FieldElem, a6v: FieldElem) -> FieldElem:
    """The discriminant of a single fiber from coefficient values."""
    b2 = a1v * a1v + 4 * a2v
    b4 = 2 * a4v + a1v * a3v
    b6 = a3v * a3v + 4 * a6v
    b8 = a1v * a1v * a6v + 4 * a2v * a6v - a1v * a3v * a4v + a2v * a3v * a3v - a4v * a4v
    return -(b2 * b2 * b8) - 8 * (b4 * b4 * b4) - 27 * (b6 * b6) + 9 * (b2 * b4 * b6)


@dataclass(frozen=True)
class WeierstrassJets:
    """First-order jets of all five coefficient forms at one closed point."""

    field: FieldCtx
    a1: Jet
    a2: Jet
    a3: Jet
    a4: Jet
    a6: Jet

    def values(self):
        return (self.a1.value, self.a2.value, self.a3.value,
                self.a4.value, self.a6.value)


def jets_at(w: WeierstrassData, P: ClosedPoint) -> WeierstrassJets:
    return WeierstrassJets(
        field=P.field,
        a1=jet_at(w.a1, P), a2=jet_at(w.a2, P), a3=jet_at(w.a3, P),
        a4=jet_at(w.a4, P), a6=jet_at(w.a6, P),
    )


def fiber_equation(J: WeierstrassJets, x: FieldElem, y: FieldElem) -> FieldElem:
    """F(x, y) from coefficient values at the point."""
    return (y * y + J.a1.value * x * y + J.a3.value * y
            - x * x * x - J.a2.value * x * x - J.a4.value * x - J.a6.value)


def jacobian_vanishes(J: WeierstrassJets, x: FieldElem, y: FieldElem) -> bool:
    """Whether (x, y) is a singular point of the total space over the point:
    F, dF/dx, dF/dy and the m base-direction partials all vanish."""
    if fiber_equation(J, x, y):
        return False
    # dF/dx = a1*y - 3x^2 - 2*a2*x - a4
    if J.a1.value * y - 3 * (x * x) - 2 * (J.a2.value * x) - J.a4.value:
        return False
    # dF/dy = 2y + a1*x + a3
    if 2 * y + J.a1.value * x + J.a3.value:
        return False
    xy = x * y
    x2 = x * x
    for g1, g2, g3, g4, g6 in zip(J.a1.gradient, J.a2.gradient, J.a3.gradient,
                                  J.a4.gradient, J.a6.gradient):
        if g1 * xy + g3 * y - g2 * x2 - g4 * x - g6:
            return False
    return True


def infinity_partial(J: WeierstrassJets) -> FieldElem:
    """d/dZ of the homogenized fiber cubic at the section point (0:1:0):
    Y^2 + a1 XY + 2 a3 YZ - a2 X^2 - 2 a4 XZ - 3 a6 Z^2 evaluated there."""
    F = J.field
    X, Y, Z = F.zero, F.one, F.zero
    return (Y * Y + J.a1.value * X * Y + 2 * (J.a3.value * Y * Z)
            - J.a2.value * X * X - 2 * (J.a4.value * X * Z)
            - 3 * (J.a6.value * Z * Z))


@dataclass(frozen=True)
class SingularityWitness:
    """A verified singular fiber point (x, y) over a closed point.

    Construction re-checks that the defining equation and all m+2 partials
    vanish at (x, y) for the supplied jets.
    """

    point: ClosedPoint
    x: FieldElem
    y: FieldElem
    jets: WeierstrassJets = dc_field(repr=False, compare=False)

    def __post_init__(self):
        if not jacobian_vanishes(self.jets, self.x, self.y):
            raise ValueError("witness fails re-verification against the jets")


def _sqrt_char2(c: FieldElem) -> FieldElem:
    # squaring is the Frobenius, hence bijective; invert it
    return c ** (c.ctx.size // 2)


def _cbrt_char3(c: FieldElem) -> FieldElem:
    return c ** (c.ctx.size // 3)


def singular_jets_closed_form(J: WeierstrassJets) -> tuple[FieldElem, FieldElem] | None:
    """Solve for the unique singular fiber candidate from the jets.

    Branches by characteristic; every candidate is re-verified against the
    full list of vanishing conditions before being returned.
    """
    F = J.field
    p = F.p
    if p == 2:
        if J.a1.value:
            x = J.a3.value / J.a1.value
            y = (3 * (x * x) + J.a4.value) / J.a1.value
        else:
            if J.a3.value:
                return None
            x = _sqrt_char2(J.a4.value)
            y = _sqrt_char2(J.a6.value)
    elif p == 3:
        y = F.zero
        if J.a2.value:
            x = J.a4.value / J.a2.value
        else:
            if J.a4.value:
                return None
            x = _cbrt_char3(-J.a6.value)
    else:
        y = F.zero
        if J.a4.value:
            x = -(F.from_int(3) / F.from_int(2)) * (J.a6.value / J.a4.value)
        else:
            x = F.zero
    if jacobian_vanishes(J, x, y):
        return (x, y)
    return None


def singular_jets_oracle(J: WeierstrassJets) -> tuple[FieldElem, FieldElem] | None:
    """Exhaustively scan the whole affine fiber (x, y) in the residue field.

    The chart at infinity is not scanned: the Z-partial at (0:1:0) is checked
    to be nonzero instead.
    """
    if not infinity_partial(J):
        raise AssertionError("fiber point at infinity unexpectedly singular")
    F = J.field
    a1v, a2v, a3v, a4v, a6v = J.values()
    elems = [F.from_index(i) for i in range(F.size)]
    for x in elems:
        x2 = x * x
        rhs = x2 * x + a2v * x2 + a4v * x + a6v
        c1 = a1v * x + a3v
        for y in elems:
            # F(x, y) = y*(y + c1) - rhs
            if y * (y + c1) - rhs:
                continue
            if jacobian_vanishes(J, x, y):
                return (x, y)
    return None


def singular_over_closed_form(w: WeierstrassData, P: ClosedPoint) -> SingularityWitness | None:
    J = jets_at(w, P)
    hit = singular_jets_closed_form(J)
    if hit is None:
        return None
    return SingularityWitness(point=P, x=hit[0], y=hit[1], jets=J)


def singular_over_oracle(w: WeierstrassData, P: ClosedPoint) -> SingularityWitness | None:
    J = jets_at(w, P)
    hit = singular_jets_oracle(J)
    if hit is None:
        return None
    return SingularityWitness(point=P, x=hit[0], y=hit[1], jets=J)


def smooth_up_to(w: WeierstrassData, r: int) -> bool:
    """True iff the total space is smooth over every closed point of degree
    <= r (by the closed-form detector)."""
    for P in closed_points_up_to(w.m, w.field.size, r):
        if singular_over_closed_form(w, P) is not None:
            return False
    return True


def in_Mk(w: WeierstrassData) -> bool:
    """Whether some fiber is smooth, i.e. the discriminant form is nonzero."""
    return not w.delta.is_zero


def minimality_witness(w: WeierstrassData, j_max: int) -> Section | None:
    """A form u of degree 1..j_max with u^i | a_i for all nonzero a_i, if any.

    Candidates are scalar-normalized (leading coefficient 1 in descending
    grlex order).  With j_max >= k the search is complete: any common u has
    degree <= k once some a_i is nonzero.
    """
    if j_max < 1:
        raise ValueError(f"need j_max >= 1, got {j_max}")
    F = w.field
    secs = [(i, s) for i, s in w.sections().items() if not s.is_zero]
    for j in range(1, j_max + 1):
        monos = monomials(w.m, j)
        dim = len(monos)
        for lead in range(dim):
            # leading coefficient 1, earlier monomials zero, later ones free
            free = dim - lead - 1
            for idx in range(F.size ** free):
                coeffs = {monos[lead]: F.one}
                rest = idx
                for t in range(free):
                    rest, ci = divmod(rest, F.size)
                    if ci:
                        coeffs[monos[lead + 1 + t]] = F.from_index(ci)
                u = Section(w.m, j, F, coeffs)
                if all(exact_divide(s, u ** i) is not None for i, s in secs):
                    return u
    return None


def is_minimal(w: WeierstrassData, j_max: int) -> bool:
    """True iff no degree-<=j_max form u has u^i dividing every nonzero a_i."""
    return minimality_witness(w, j_max) is None


def random_weierstrass(m: int, k: int, field: FieldCtx, seed: int) -> WeierstrassData:
    """Uniform draw from the coefficient space: one PCG64 stream seeded with
    ``seed`` supplies all F_p slots of the varying forms, in index order."""
    slots = weierstrass_slots(m, k, field, seed)
    return weierstrass_from_slots(m, k, field, slots)


def total_slots(m: int, k: int, field: FieldCtx) -> int:
    return sum(dim_space(m, d) for d in section_degrees(field.p, k)) * field.n


def weierstrass_slots(m: int, k: int, field: FieldCtx, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.integers(0, field.p, size=total_slots(m, k, field), dtype=np.uint8)


def weierstrass_from_slots(m: int, k: int, field: FieldCtx, slots) -> WeierstrassData:
    """Decode a flat F_p slot vector (same layout as the jet matrices:
    varying forms in index order, monomials in descending grlex, base-field
    coordinates innermost) into a WeierstrassData."""
    n = field.n
    secs: dict[int, Section] = {}
    off = 0
    for i in varying_indices(field.p):
        d = i * k
        width = dim_space(m, d) * n
        secs[i] = section_from_slots(m, d, field, slots[off:off + width])
        off += width
    full = {
        i: secs.get(i, Section.zero(m, i * k, field)) for i in _INDICES
    }
    return WeierstrassData(m, k, field,
                           full[1], full[2], full[3], full[4], full[6])


# -- serialization -------------------------------------------------------------


def weier_to_obj(w: WeierstrassData) -> dict:
    return {
        "format_version": WEIER_FORMAT_VERSION,
        "field": {"p": w.field.p, "n": w.field.n, "modulus": list(w.field.modulus)},
        "m": w.m,
        "k": w.k,
        "sections": {f"a{i}": s.to_obj() for i, s in w.sections().items()},
    }


def weier_from_obj(obj: dict) -> WeierstrassData:
    try:
        ver = obj["format_version"]
        if ver != WEIER_FORMAT_VERSION:
            raise ValueError(f"unsupported format_version {ver}")
        fobj = obj["field"]
        field = FieldCtx(int(fobj["p"]), int(fobj["n"]), tuple(fobj["modulus"]))
        m, k = int(obj["m"]), int(obj["k"])
        secs = {}
        for i in _INDICES:
            recs = obj["sections"].get(f"a{i}", [])
            secs[i] = Section.from_obj(m, i * k, field, recs)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed fibration object: {exc}") from exc
    return WeierstrassData(m, k, field,
                           secs[1], secs[2], secs[3], secs[4], secs[6])


def dump_weier(w: WeierstrassData, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(weier_to_obj(w), fh, indent=2)
        fh.write("\n")


def load_weier(path: str) -> WeierstrassData:
    with open(path, encoding="utf-8") as fh:
        return weier_from_obj(json.load(fh))
