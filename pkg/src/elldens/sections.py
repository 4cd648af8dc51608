"""Homogeneous forms on P^m over a finite field, and their affine charts.

A :class:`Section` is a degree-d form in m+1 variables x_0..x_m, stored as a
sparse dict from exponent tuples (summing to d) to nonzero field elements.
Dehomogenizing on the chart x_c = 1 produces an :class:`AffinePoly` in the m
local coordinates (the remaining variables, in index order).

Monomial order used throughout (serialization, matrices, division) is graded
lex with x_0 > x_1 > ... > x_m; for a fixed degree this is plain descending
tuple order.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np

from .gf import Embedding, FieldCtx, FieldElem


class InvalidPointError(ValueError):
    """Raised when evaluating at the all-zero tuple."""


def dim_space(m: int, d: int) -> int:
    """Number of degree-d monomials in m+1 variables: C(d+m, m)."""
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if d < 0:
        raise ValueError(f"need d >= 0, got {d}")
    return comb(d + m, m)


@lru_cache(maxsize=None)
def monomials(m: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All exponent tuples of degree d in m+1 variables, descending grlex."""
    def gen(nvars: int, total: int):
        if nvars == 1:
            yield (total,)
            return
        for e in range(total, -1, -1):
            for rest in gen(nvars - 1, total - e):
                yield (e,) + rest
    out = tuple(gen(m + 1, d))
    assert len(out) == dim_space(m, d)
    return out


def _grlex_key(expo: tuple[int, ...]):
    return (sum(expo), expo)


class Section:
    """A homogeneous form of degree d in m+1 variables over a finite field."""

    __slots__ = ("m", "d", "field", "coeffs")

    def __init__(self, m: int, d: int, field: FieldCtx, coeffs=None):
        if m < 1:
            raise ValueError(f"need m >= 1, got {m}")
        if d < 0:
            raise ValueError(f"need d >= 0, got {d}")
        self.m = m
        self.d = d
        self.field = field
        clean: dict[tuple[int, ...], FieldElem] = {}
        for expo, c in (coeffs or {}).items():
            expo = tuple(expo)
            if len(expo) != m + 1 or any(e < 0 for e in expo) or sum(expo) != d:
                raise ValueError(f"exponent tuple {expo} invalid for (m={m}, d={d})")
            if not (c.ctx is field or c.ctx == field):
                raise ValueError("coefficient from a different field context")
            if c:
                clean[expo] = c
        self.coeffs = clean

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, m: int, d: int, field: FieldCtx) -> "Section":
        return cls(m, d, field, {})

    @classmethod
    def monomial(cls, m: int, expo: tuple[int, ...], coeff: FieldElem) -> "Section":
        return cls(m, sum(expo), coeff.ctx, {tuple(expo): coeff})

    # -- predicates -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, Section):
            return NotImplemented
        return (
            self.m == other.m
            and self.d == other.d
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        terms = sorted(self.coeffs, key=_grlex_key, reverse=True)[:4]
        body = " + ".join(f"{self.coeffs[e].coeffs}*x^{e}" for e in terms)
        more = "..." if len(self.coeffs) > 4 else ""
        return f"Section(m={self.m}, d={self.d}, {body}{more})"

    # -- arithmetic -------------------------------------------------------------

    def _check_ring(self, other: "Section"):
        if self.m != other.m or self.field != other.field:
            raise ValueError("sections live in different ambient rings")

    def __add__(self, other: "Section") -> "Section":
        if not isinstance(other, Section):
            return NotImplemented
        self._check_ring(other)
        if self.d != other.d and not (self.is_zero or other.is_zero):
            raise ValueError(f"cannot add degrees {self.d} and {other.d}")
        d = other.d if self.is_zero and self.d != other.d else self.d
        out = dict(self.coeffs)
        for expo, c in other.coeffs.items():
            s = out.get(expo)
            t = c if s is None else s + c
            if t:
                out[expo] = t
            elif s is not None:
                del out[expo]
        return Section(self.m, d, self.field, out)

    def __neg__(self) -> "Section":
        return Section(
            self.m, self.d, self.field, {e: -c for e, c in self.coeffs.items()}
        )

    def __sub__(self, other: "Section") -> "Section":
        if not isinstance(other, Section):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Section):
            self._check_ring(other)
            out: dict[tuple[int, ...], FieldElem] = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    c = c1 * c2
                    s = out.get(e)
                    t = c if s is None else s + c
                    if t:
                        out[e] = t
                    elif s is not None:
                        del out[e]
            return Section(self.m, self.d + other.d, self.field, out)
        if isinstance(other, (FieldElem, int)):
            c0 = self.field.from_int(other) if isinstance(other, int) else other
            return Section(
                self.m, self.d, self.field,
                {e: c * c0 for e, c in self.coeffs.items()},
            )
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Section":
        if e < 0:
            raise ValueError("negative powers of sections are not defined")
        out = Section(self.m, 0, self.field, {(0,) * (self.m + 1): self.field.one})
        for _ in range(e):
            out = out * self
        return out

    # -- geometry ---------------------------------------------------------------

    def evaluate(self, pt: tuple[FieldElem, ...], emb: Embedding | None = None) -> FieldElem:
        """Value at a coordinate tuple over an extension (via emb) or over the
        base field itself (emb omitted).  Rejects the all-zero tuple."""
        if len(pt) != self.m + 1:
            raise ValueError(f"point needs {self.m + 1} coordinates")
        if not any(pt):
            raise InvalidPointError("all-zero tuple is not a projective point")
        target = emb.dst if emb is not None else self.field
        pows = [_power_table(x, self.d) for x in pt]
        acc = target.zero
        for expo, c in self.coeffs.items():
            term = emb(c) if emb is not None else c
            for x_pows, e in zip(pows, expo):
                if e:
                    term = term * x_pows[e]
            acc = acc + term
        return acc

    def dehomogenize(self, chart: int) -> "AffinePoly":
        """Substitute x_chart = 1; variables are the remaining coordinates in
        index order."""
        if not 0 <= chart <= self.m:
            raise ValueError(f"chart index {chart} out of range")
        out: dict[tuple[int, ...], FieldElem] = {}
        for expo, c in self.coeffs.items():
            beta = expo[:chart] + expo[chart + 1:]
            # distinct homogeneous monomials of equal degree stay distinct
            out[beta] = c
        return AffinePoly(self.m, self.field, out)

    def leading_monomial(self) -> tuple[int, ...] | None:
        if not self.coeffs:
            return None
        return max(self.coeffs, key=_grlex_key)

    # -- serialization -----------------------------------------------------------

    def to_obj(self) -> list:
        """A list of [exponents, coefficient-int-vector] records, in descending
        monomial order."""
        return [
            [list(e), list(self.coeffs[e].coeffs)]
            for e in sorted(self.coeffs, key=_grlex_key, reverse=True)
        ]

    @classmethod
    def from_obj(cls, m: int, d: int, field: FieldCtx, obj: list) -> "Section":
        coeffs = {}
        for rec in obj:
            if len(rec) != 2:
                raise ValueError(f"malformed section record {rec!r}")
            expo, vec = rec
            coeffs[tuple(expo)] = field.elem(tuple(vec))
        return cls(m, d, field, coeffs)


def _power_table(x: FieldElem, top: int) -> list[FieldElem]:
    pows = [x.ctx.one]
    for _ in range(top):
        pows.append(pows[-1] * x)
    return pows


class AffinePoly:
    """A polynomial in m affine coordinates t_1..t_m over a finite field."""

    __slots__ = ("m", "field", "coeffs")

    def __init__(self, m: int, field: FieldCtx, coeffs=None):
        self.m = m
        self.field = field
        clean: dict[tuple[int, ...], FieldElem] = {}
        for expo, c in (coeffs or {}).items():
            expo = tuple(expo)
            if len(expo) != m or any(e < 0 for e in expo):
                raise ValueError(f"exponent tuple {expo} invalid for m={m}")
            if c:
                clean[expo] = c
        self.coeffs = clean

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, AffinePoly):
            return NotImplemented
        return (
            self.m == other.m
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"AffinePoly(m={self.m}, {len(self.coeffs)} terms)"

    def __add__(self, other: "AffinePoly") -> "AffinePoly":
        if not isinstance(other, AffinePoly):
            return NotImplemented
        out = dict(self.coeffs)
        for expo, c in other.coeffs.items():
            s = out.get(expo)
            t = c if s is None else s + c
            if t:
                out[expo] = t
            elif s is not None:
                del out[expo]
        return AffinePoly(self.m, self.field, out)

    def __mul__(self, other):
        if isinstance(other, AffinePoly):
            out: dict[tuple[int, ...], FieldElem] = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    c = c1 * c2
                    s = out.get(e)
                    t = c if s is None else s + c
                    if t:
                        out[e] = t
                    elif s is not None:
                        del out[e]
            return AffinePoly(self.m, self.field, out)
        if isinstance(other, (FieldElem, int)):
            c0 = self.field.from_int(other) if isinstance(other, int) else other
            return AffinePoly(
                self.m, self.field, {e: c * c0 for e, c in self.coeffs.items()}
            )
        return NotImplemented

    __rmul__ = __mul__

    def partial(self, j: int) -> "AffinePoly":
        """Formal partial derivative with respect to t_j, 1 <= j <= m."""
        if not 1 <= j <= self.m:
            raise ValueError(f"variable index {j} out of range 1..{self.m}")
        jj = j - 1
        out: dict[tuple[int, ...], FieldElem] = {}
        for expo, c in self.coeffs.items():
            e = expo[jj]
            if e == 0:
                continue
            mult = c * e
            if not mult:
                continue  # exponent divisible by the characteristic
            dexpo = expo[:jj] + (e - 1,) + expo[jj + 1:]
            s = out.get(dexpo)
            t = mult if s is None else s + mult
            if t:
                out[dexpo] = t
            elif s is not None:
                del out[dexpo]
        return AffinePoly(self.m, self.field, out)

    def evaluate(self, pt: tuple[FieldElem, ...], emb: Embedding | None = None) -> FieldElem:
        if len(pt) != self.m:
            raise ValueError(f"point needs {self.m} coordinates")
        target = emb.dst if emb is not None else self.field
        top = max((max(e) for e in self.coeffs), default=0)
        pows = [_power_table(x, top) for x in pt]
        acc = target.zero
        for expo, c in self.coeffs.items():
            term = emb(c) if emb is not None else c
            for x_pows, e in zip(pows, expo):
                if e:
                    term = term * x_pows[e]
            acc = acc + term
        return acc


def partial(f: AffinePoly, j: int) -> AffinePoly:
    return f.partial(j)


def dehomogenize(s: Section, chart: int) -> AffinePoly:
    return s.dehomogenize(chart)


def evaluate(s, pt, emb: Embedding | None = None) -> FieldElem:
    return s.evaluate(pt, emb)


def exact_divide(f: Section, g: Section) -> Section | None:
    """The quotient h with f = g * h, or None when g does not divide f.

    Single-divisor reduction in descending grlex order; the computed quotient
    is re-checked by multiplying back before it is returned.
    """
    if not isinstance(f, Section) or not isinstance(g, Section):
        raise TypeError("exact_divide expects two sections")
    f._check_ring(g)
    if g.is_zero:
        raise ValueError("division by the zero section")
    if f.is_zero:
        return Section.zero(f.m, max(f.d - g.d, 0), f.field)
    if f.d < g.d:
        return None
    lead_g = g.leading_monomial()
    lead_c = g.coeffs[lead_g]
    rem = dict(f.coeffs)
    quot: dict[tuple[int, ...], FieldElem] = {}
    while rem:
        lead_r = max(rem, key=_grlex_key)
        diff = tuple(a - b for a, b in zip(lead_r, lead_g))
        if any(e < 0 for e in diff):
            return None
        c = rem[lead_r] / lead_c
        quot[diff] = c
        for expo, gc in g.coeffs.items():
            e = tuple(a + b for a, b in zip(diff, expo))
            s = rem.get(e)
            t = -(c * gc) if s is None else s - c * gc
            if t:
                rem[e] = t
            elif s is not None:
                del rem[e]
    h = Section(f.m, f.d - g.d, f.field, quot)
    if g * h != f:  # exactness is always re-verified
        return None
    return h


def random_section(m: int, d: int, field: FieldCtx, rng_seed: int) -> Section:
    """A uniform random degree-d form: every monomial coefficient uniform over
    the field, drawn from a PCG64 stream seeded with rng_seed."""
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    n = field.n
    draws = rng.integers(0, field.p, size=dim_space(m, d) * n)
    coeffs = {}
    for i, expo in enumerate(monomials(m, d)):
        vec = tuple(int(v) for v in draws[i * n:(i + 1) * n])
        if any(vec):
            coeffs[expo] = field.elem(vec)
    return Section(m, d, field, coeffs)


def section_from_slots(m: int, d: int, field: FieldCtx, slots) -> Section:
    """Build a section from a flat vector of F_p coordinates: for monomial i
    (descending grlex), entries [i*n, (i+1)*n) are its coefficient vector."""
    n = field.n
    coeffs = {}
    for i, expo in enumerate(monomials(m, d)):
        vec = tuple(int(v) for v in slots[i * n:(i + 1) * n])
        if any(vec):
            coeffs[expo] = field.elem(vec)
    return Section(m, d, field, coeffs)
