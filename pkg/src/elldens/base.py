"""Closed points of P^m over F_q and first-order jets of forms at them.

A closed point of degree e is a Frobenius orbit of size e of points of
P^m(F_{q^e}); it is stored through a normalized representative (first nonzero
coordinate equal to 1, chart = index of that coordinate) chosen canonically
as the orbit's lexicographically smallest coordinate tuple, ordering field
elements by coefficient sequence.

The first-order jet of a form at a closed point is its value together with
the gradient in the chart's local coordinates; vanishing of the pair does not
depend on the chart.  ``jet_space_map`` expresses coefficient vectors ->
jets as a matrix over F_p by restriction of scalars.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import zeta as _zeta
from .errors import FeasibilityError
from .gf import Embedding, FieldCtx, FieldElem, embedding, make_field, prime_power
from .sections import Section, dim_space, monomials

DEFAULT_ENUM_CAP = 1 << 26


@dataclass(frozen=True)
class Jet:
    """Value and local-coordinate gradient of a form at a closed point."""

    value: FieldElem
    gradient: tuple[FieldElem, ...]

    @property
    def vanishes(self) -> bool:
        return not self.value and not any(self.gradient)


@dataclass(frozen=True)
class ClosedPoint:
    """A degree-e closed point of P^m over F_q, via a normalized orbit
    representative with coordinates in the residue field F_{q^e}."""

    m: int
    q: int
    degree: int
    chart: int
    coords: tuple[FieldElem, ...]
    field: FieldCtx = dc_field(repr=False)
    emb: Embedding = dc_field(repr=False)  # base field F_q -> residue field

    def local_coords(self) -> tuple[FieldElem, ...]:
        """The m non-chart coordinates, in index order."""
        return self.coords[:self.chart] + self.coords[self.chart + 1:]

    def __repr__(self):
        pts = ":".join(str(c.idx) for c in self.coords)
        return f"ClosedPoint(deg={self.degree}, ({pts}), chart={self.chart})"


def enumerate_points(m: int, fld: FieldCtx) -> list[tuple[FieldElem, ...]]:
    """All points of P^m(fld) as normalized tuples (leading 1 at the chart)."""
    pts: list[tuple[FieldElem, ...]] = []
    elems = list(fld.elements())
    for chart in range(m + 1):
        free = m - chart

        def rec(prefix):
            if len(prefix) == free:
                pts.append(
                    (fld.zero,) * chart + (fld.one,) + tuple(prefix)
                )
                return
            for e in elems:
                rec(prefix + [e])

        rec([])
    return pts


def _frobenius_point(pt: tuple[FieldElem, ...], q: int) -> tuple[FieldElem, ...]:
    return tuple(c ** q for c in pt)


def _point_key(pt: tuple[FieldElem, ...]):
    return tuple(c.coeffs for c in pt)


def closed_points_up_to(
    m: int, q: int, r: int, cap: int | None = None
) -> list[ClosedPoint]:
    """All closed points of degree <= r, grouped from Frobenius orbits.

    Counts per degree are cross-checked against the Moebius-inverted values;
    enumeration size is guarded by ``cap`` (default 2**26 rational points).
    """
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    p, rr = prime_power(q)
    cap = DEFAULT_ENUM_CAP if cap is None else cap
    table = _zeta.zeta_table(m, q, min(r, _zeta.MAX_TRUNCATION)) if r <= _zeta.MAX_TRUNCATION else None
    total_rational = sum(
        sum(q ** (e * i) for i in range(m + 1)) for e in range(1, r + 1)
    )
    if total_rational > cap:
        raise FeasibilityError(
            f"enumerating P^{m} over F_{q} up to degree {r} needs "
            f"{total_rational} rational points > cap {cap}"
        )
    base = make_field(p, rr)
    out: list[ClosedPoint] = []
    for e in range(1, r + 1):
        res = make_field(p, rr * e)
        emb = embedding(base, res)
        seen: set = set()
        found: list[ClosedPoint] = []
        for pt in enumerate_points(m, res):
            key = _point_key(pt)
            if key in seen:
                continue
            orbit = [pt]
            cur = _frobenius_point(pt, q)
            while _point_key(cur) != key:
                orbit.append(cur)
                cur = _frobenius_point(cur, q)
            for o in orbit:
                seen.add(_point_key(o))
            if len(orbit) != e:
                continue  # defined over a proper subfield; counted earlier
            rep = min(orbit, key=_point_key)
            chart = next(i for i, c in enumerate(rep) if c)
            found.append(
                ClosedPoint(
                    m=m, q=q, degree=e, chart=chart, coords=rep,
                    field=res, emb=emb,
                )
            )
        if table is not None and len(found) != table.a[e - 1]:
            raise AssertionError(
                f"orbit enumeration found {len(found)} degree-{e} points, "
                f"expected {table.a[e - 1]}"
            )
        out.extend(found)
    return out


def jet_at(s: Section, P: ClosedPoint) -> Jet:
    """First-order jet of a form at P, in P's chart coordinates.

    Equals (value, gradient) of the dehomogenized form at the local
    coordinates of the representative; coefficients pass through P.emb.
    """
    if s.m != P.m:
        raise ValueError("form and point live on different projective spaces")
    res = P.field
    chart = P.chart
    local = P.local_coords()
    top = s.d
    pows = [_powers(x, top) for x in local]
    value = res.zero
    grad = [res.zero] * s.m
    for expo, c in s.coeffs.items():
        beta = expo[:chart] + expo[chart + 1:]
        ec = P.emb(c)
        term = ec
        for x_pows, e in zip(pows, beta):
            if e:
                term = term * x_pows[e]
        value = value + term
        for j, e in enumerate(beta):
            if e == 0 or e % res.p == 0:
                continue
            g = ec * e
            for jj, (x_pows, ee) in enumerate(zip(pows, beta)):
                use = ee - 1 if jj == j else ee
                if use:
                    g = g * x_pows[use]
            grad[j] = grad[j] + g
    return Jet(value=value, gradient=tuple(grad))


def _powers(x: FieldElem, top: int) -> list[FieldElem]:
    pows = [x.ctx.one]
    for _ in range(top):
        pows.append(pows[-1] * x)
    return pows


@dataclass(frozen=True)
class JetSpaceMap:
    """Matrix over F_p of (coefficient vectors of forms of the given degrees)
    -> (their jets at one closed point), after restriction of scalars.

    Row layout: section-major, then entry (0 = value, 1..m = gradient), then
    residue-field coordinate; rows = len(degrees)*(m+1)*n_res.  Column
    layout: section-major, then monomial (descending grlex), then base-field
    coordinate; cols = sum_i dim_space(m, d_i) * n_base.
    """

    matrix: np.ndarray
    rows: int
    cols: int
    degrees: tuple[int, ...]
    point: ClosedPoint

    def row_index(self, section_idx: int, entry: int, coord: int) -> int:
        n_res = self.point.field.n
        m = self.point.m
        return (section_idx * (m + 1) + entry) * n_res + coord

    def value_rows(self, section_idx: int) -> range:
        n_res = self.point.field.n
        start = self.row_index(section_idx, 0, 0)
        return range(start, start + n_res)


def jet_space_map(degrees: tuple[int, ...], P: ClosedPoint) -> JetSpaceMap:
    """Assemble the jet evaluation matrix at P for one form per degree."""
    p, r = prime_power(P.q)
    res = P.field
    n_res = res.n
    m = P.m
    rows = len(degrees) * (m + 1) * n_res
    cols = sum(dim_space(m, d) for d in degrees) * r
    mat = np.zeros((rows, cols), dtype=np.uint8)
    base = P.emb.src
    # images of the base-field basis 1, g, g^2, ... under the embedding
    basis_imgs = []
    acc = res.one
    gen_img = P.emb(base.gen)
    for _ in range(r):
        basis_imgs.append(acc)
        acc = acc * gen_img
    chart = P.chart
    local = P.local_coords()
    col = 0
    for s_idx, d in enumerate(degrees):
        pows = [_powers(x, d) for x in local]
        for expo in monomials(m, d):
            beta = expo[:chart] + expo[chart + 1:]
            val = res.one
            for x_pows, e in zip(pows, beta):
                if e:
                    val = val * x_pows[e]
            grads = []
            for j, e in enumerate(beta):
                if e == 0 or e % res.p == 0:
                    grads.append(res.zero)
                    continue
                g = res.from_int(e)
                for jj, (x_pows, ee) in enumerate(zip(pows, beta)):
                    use = ee - 1 if jj == j else ee
                    if use:
                        g = g * x_pows[use]
                grads.append(g)
            jet_entries = [val] + grads
            for t in range(r):
                w = basis_imgs[t]
                for entry, je in enumerate(jet_entries):
                    scaled = je * w
                    base_row = (s_idx * (m + 1) + entry) * n_res
                    for coord, cval in enumerate(scaled.coeffs):
                        if cval:
                            mat[base_row + coord, col] = cval
                col += 1
    assert col == cols
    return JetSpaceMap(matrix=mat, rows=rows, cols=cols, degrees=tuple(degrees), point=P)
