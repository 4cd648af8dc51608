"""Exact arithmetic in finite fields F_{p^n} and embeddings between them.

Each field is F_p[x]/(modulus) with elements stored as coefficient tuples of
length n over F_p (least-significant first).  An extension F_{q^e} of
q = p^r is realised as F_{p^{r*e}}; the inclusion F_q -> F_{q^e} is an
:class:`Embedding` computed once by root-finding and cached.

Moduli are found by a seeded deterministic random search, so a given (p, n)
always yields the same field and serialized artifacts reproduce bit-for-bit.
Small fields (size <= 256) precompute full operation tables, which keeps the
exhaustive enumeration loops elsewhere in the package cheap.
"""
from __future__ import annotations

import random
from array import array
from functools import lru_cache

_TABLE_LIMIT = 256  # fields up to this many elements get full op tables
_INTERN_LIMIT = 4096  # fields up to this many elements intern all elements


class FieldMismatchError(ValueError):
    """Raised when combining elements of two different field contexts."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Decompose a prime power q as (p, r) with q = p**r; reject other q."""
    if q < 2:
        raise ValueError(f"q must be a prime power >= 2, got {q}")
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        p = q
    r = 0
    rest = q
    while rest % p == 0:
        rest //= p
        r += 1
    if rest != 1:
        raise ValueError(f"q={q} is not a prime power")
    return p, r


# ---------------------------------------------------------------------------
# univariate polynomials over F_p: tuples of ints, least-significant first,
# trimmed (no trailing zeros).  Used only for modulus search and reduction.

def _ptrim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pmul(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a: tuple[int, ...], f: tuple[int, ...], p: int) -> tuple[int, ...]:
    # f monic
    r = list(a)
    nf = len(f) - 1
    while len(r) - 1 >= nf and r:
        lead = r[-1] % p
        if lead:
            shift = len(r) - 1 - nf
            for i, fi in enumerate(f):
                r[shift + i] = (r[shift + i] - lead * fi) % p
        r.pop()
    return _ptrim(r)


def _pgcd(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    while b:
        # make b monic before reducing
        inv = pow(b[-1], p - 2, p)
        bm = tuple((c * inv) % p for c in b)
        a, b = bm, _pmod(a, bm, p)
    return a


def _x_pth_power_mod(f: tuple[int, ...], p: int, e: int) -> tuple[int, ...]:
    """x^(p^e) mod f, by iterating the p-power map e times."""
    t = _pmod((0, 1), f, p)
    for _ in range(e):
        # t <- t^p mod f via square-and-multiply on the exponent p
        acc: tuple[int, ...] = (1,)
        base = t
        exp = p
        while exp:
            if exp & 1:
                acc = _pmod(_pmul(acc, base, p), f, p)
            base = _pmod(_pmul(base, base, p), f, p)
            exp >>= 1
        t = acc
    return t


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Irreducibility of a monic degree-n polynomial over F_p.

    f is irreducible iff x^(p^n) == x mod f and, for every prime l | n,
    gcd(x^(p^(n/l)) - x, f) = 1.
    """
    n = len(modulus) - 1
    if n < 1 or modulus[-1] != 1:
        return False
    x = _pmod((0, 1), modulus, p)
    top = _x_pth_power_mod(modulus, p, n)
    if top != x:
        return False
    for ell in _prime_factors(n):
        t = _x_pth_power_mod(modulus, p, n // ell)
        diff = list(t)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(modulus, _ptrim(diff), p)
        if len(g) - 1 >= 1:
            return False
    return True


def _find_modulus(p: int, n: int) -> tuple[int, ...]:
    """Deterministic monic irreducible of degree n over F_p."""
    if n < 1:
        raise ValueError(f"extension degree must be >= 1, got {n}")
    if n == 1:
        return (0, 1)  # x
    rng = random.Random(f"elldens-modulus:{p}:{n}")
    while True:
        coeffs = tuple(rng.randrange(p) for _ in range(n)) + (1,)
        if is_irreducible(coeffs, p):
            return coeffs


# ---------------------------------------------------------------------------


class FieldElem:
    """An element of a :class:`FieldCtx`, stored as a coefficient tuple."""

    __slots__ = ("ctx", "coeffs", "idx")

    def __init__(self, ctx: "FieldCtx", coeffs: tuple[int, ...], idx: int):
        self.ctx = ctx
        self.coeffs = coeffs
        self.idx = idx

    # -- helpers ------------------------------------------------------------

    def _same(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.ctx is self.ctx or other.ctx == self.ctx:
                return other
            raise FieldMismatchError(
                f"cannot combine elements of F_{self.ctx.p}^{self.ctx.n} "
                f"and F_{other.ctx.p}^{other.ctx.n} (distinct contexts)"
            )
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        ctx = self.ctx
        if ctx._addt is not None:
            return ctx._elems[ctx._addt[self.idx * ctx.size + o.idx]]
        p = ctx.p
        return ctx.elem(tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        ctx = self.ctx
        if ctx._negt is not None:
            return ctx._elems[ctx._negt[self.idx]]
        p = ctx.p
        return ctx.elem(tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        ctx = self.ctx
        if ctx._mult is not None:
            return ctx._elems[ctx._mult[self.idx * ctx.size + o.idx]]
        return ctx.elem(ctx._mul_coeffs(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        ctx = self.ctx
        if self.idx == 0 and not any(self.coeffs):
            raise ZeroDivisionError("inverse of zero in finite field")
        if ctx._invt is not None:
            return ctx._elems[ctx._invt[self.idx]]
        return self ** (ctx.size - 2)

    def __truediv__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._same(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparisons & misc ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.coeffs == other.coeffs and (
                self.ctx is other.ctx or self.ctx == other.ctx
            )
        if isinstance(other, int):
            return self == self.ctx.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.ctx.p, self.ctx.n))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"FieldElem({self.coeffs}, F_{self.ctx.p}^{self.ctx.n})"


class FieldCtx:
    """The field F_{p^n} = F_p[x]/(modulus), with interned elements."""

    __slots__ = (
        "p", "n", "modulus", "size",
        "_elems", "_addt", "_mult", "_invt", "_negt", "_red",
        "zero", "one", "gen",
    )

    def __init__(self, p: int, n: int, modulus: tuple[int, ...]):
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if n < 1:
            raise ValueError(f"extension degree must be >= 1, got n={n}")
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree n")
        if not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.n = n
        self.modulus = modulus
        self.size = p ** n
        # reduction table for x^n .. x^(2n-2) mod modulus
        self._red = self._build_reduction()
        self._elems = None
        self._addt = self._mult = self._invt = self._negt = None
        if self.size <= _INTERN_LIMIT:
            self._elems = [
                FieldElem(self, self._decode(i), i) for i in range(self.size)
            ]
        self.zero = self.elem((0,) * n)
        self.one = self.from_int(1)
        self.gen = self.elem_from_poly((0, 1))
        if self.size <= _TABLE_LIMIT:
            self._build_tables()

    # -- representation helpers ---------------------------------------------

    def _decode(self, idx: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            idx, c = divmod(idx, self.p)
            out.append(c)
        return tuple(out)

    def _encode(self, coeffs: tuple[int, ...]) -> int:
        idx = 0
        for c in reversed(coeffs):
            idx = idx * self.p + c
        return idx

    def _build_reduction(self) -> tuple[tuple[int, ...], ...]:
        # x^(n+k) mod modulus for k = 0..n-2, as coefficient tuples
        p, n = self.p, self.n
        rows = []
        cur = tuple((-c) % p for c in self.modulus[:n])  # x^n
        rows.append(cur)
        for _ in range(n - 2):
            shifted = (0,) + cur[:-1]
            carry = cur[-1]
            if carry:
                shifted = tuple(
                    (s + carry * r) % p for s, r in zip(shifted, rows[0])
                )
            cur = shifted
            rows.append(cur)
        return tuple(rows)

    def _mul_coeffs(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p, n = self.p, self.n
        if n == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        out = list(prod[:n])
        for k in range(n - 1):
            c = prod[n + k]
            if c:
                row = self._red[k]
                for t in range(n):
                    out[t] = (out[t] + c * row[t]) % p
        return tuple(out)

    def _build_tables(self):
        size, p = self.size, self.p
        elems = self._elems
        negt = array("H", bytes(2 * size))
        for i in range(size):
            negt[i] = self._encode(tuple((-c) % p for c in elems[i].coeffs))
        addt = array("H", bytes(2 * size * size))
        for i in range(size):
            ci = elems[i].coeffs
            base = i * size
            for j in range(i, size):
                s = self._encode(tuple((a + b) % p for a, b in zip(ci, elems[j].coeffs)))
                addt[base + j] = s
                addt[j * size + i] = s
        mult = array("H", bytes(2 * size * size))
        for i in range(1, size):
            ci = elems[i].coeffs
            base = i * size
            for j in range(i, size):
                s = self._encode(self._mul_coeffs(ci, elems[j].coeffs))
                mult[base + j] = s
                mult[j * size + i] = s
        invt = array("H", bytes(2 * size))
        for i in range(1, size):
            if invt[i]:
                continue
            row = i * size
            for j in range(1, size):
                if mult[row + j] == self.one.idx:
                    invt[i] = j
                    invt[j] = i
                    break
        self._negt, self._addt, self._mult, self._invt = negt, addt, mult, invt

    # -- element constructors -------------------------------------------------

    def elem(self, coeffs: tuple[int, ...]) -> FieldElem:
        if len(coeffs) != self.n:
            raise ValueError(
                f"need {self.n} coefficients for F_{self.p}^{self.n}, got {len(coeffs)}"
            )
        coeffs = tuple(c % self.p for c in coeffs)
        idx = self._encode(coeffs)
        if self._elems is not None:
            return self._elems[idx]
        return FieldElem(self, coeffs, idx)

    def elem_from_poly(self, poly: tuple[int, ...]) -> FieldElem:
        reduced = _pmod(tuple(c % self.p for c in poly), self.modulus, self.p)
        return self.elem(reduced + (0,) * (self.n - len(reduced)))

    def from_int(self, c: int) -> FieldElem:
        return self.elem((c % self.p,) + (0,) * (self.n - 1))

    def from_index(self, idx: int) -> FieldElem:
        if not 0 <= idx < self.size:
            raise ValueError(f"element index {idx} out of range for size {self.size}")
        if self._elems is not None:
            return self._elems[idx]
        return FieldElem(self, self._decode(idx), idx)

    def elements(self):
        """All elements, in index order (coefficient-little-endian counting)."""
        for i in range(self.size):
            yield self.from_index(i)

    # -- misc -----------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, FieldCtx):
            return (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus)
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __repr__(self):
        return f"FieldCtx(p={self.p}, n={self.n}, modulus={self.modulus})"


@lru_cache(maxsize=None)
def make_field(p: int, n: int) -> FieldCtx:
    """The field F_{p^n} with its deterministic seeded-search modulus."""
    return FieldCtx(p, n, _find_modulus(p, n))


def frobenius(a: FieldElem, q: int) -> FieldElem:
    """The power map a -> a^q; q must be a power of the characteristic."""
    p = a.ctx.p
    rest = q
    while rest > 1 and rest % p == 0:
        rest //= p
    if rest != 1:
        raise ValueError(f"q={q} is not a power of the characteristic {p}")
    return a ** q


class Embedding:
    """A ring embedding F_{p^n1} -> F_{p^n2} determined by a root of the
    source modulus in the target; applies coefficientwise via cached powers."""

    __slots__ = ("src", "dst", "gen_image", "_powers")

    def __init__(self, src: FieldCtx, dst: FieldCtx, gen_image: FieldElem):
        if src.p != dst.p:
            raise ValueError("embedding requires equal characteristic")
        if dst.n % src.n != 0:
            raise ValueError(
                f"no embedding: degree {src.n} does not divide {dst.n}"
            )
        # verify the chosen image really is a root of the source modulus
        acc = dst.zero
        for c in reversed(src.modulus):
            acc = acc * gen_image + dst.from_int(c)
        if acc:
            raise ValueError("gen_image is not a root of the source modulus")
        self.src = src
        self.dst = dst
        self.gen_image = gen_image
        pows = [dst.one]
        for _ in range(src.n - 1):
            pows.append(pows[-1] * gen_image)
        self._powers = tuple(pows)

    def apply(self, a: FieldElem) -> FieldElem:
        if not (a.ctx is self.src or a.ctx == self.src):
            raise FieldMismatchError("element does not belong to the source field")
        acc = self.dst.zero
        for c, w in zip(a.coeffs, self._powers):
            if c:
                acc = acc + self.dst.from_int(c) * w
        return acc

    __call__ = apply

    def __repr__(self):
        return (
            f"Embedding(F_{self.src.p}^{self.src.n} -> "
            f"F_{self.dst.p}^{self.dst.n}, x -> {self.gen_image.coeffs})"
        )


def _modulus_roots(src: FieldCtx, dst: FieldCtx):
    consts = [dst.from_int(c) for c in src.modulus]
    for cand in dst.elements():
        acc = dst.zero
        for c in reversed(consts):
            acc = acc * cand + c
        if not acc:
            yield cand


@lru_cache(maxsize=None)
def embedding(src: FieldCtx, dst: FieldCtx, root_index: int | None = None) -> Embedding:
    """The canonical embedding src -> dst (smallest root in coefficient order),
    or the one sending the source generator to dst.from_index(root_index)."""
    if root_index is not None:
        return Embedding(src, dst, dst.from_index(root_index))
    if dst.n % src.n != 0:
        raise ValueError(f"no embedding: degree {src.n} does not divide {dst.n}")
    best = min(_modulus_roots(src, dst), key=lambda e: e.coeffs, default=None)
    if best is None:  # cannot happen for valid degrees; guard anyway
        raise ValueError("source modulus has no root in the target field")
    return Embedding(src, dst, best)


def embed(phi: Embedding, a: FieldElem) -> FieldElem:
    return phi.apply(a)
