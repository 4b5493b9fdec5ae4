"""Exact arithmetic over GF(2^k) and GF(2^k)(t).

Galois field elements are ints interpreted as coefficient bitvectors over
the power basis, reduced modulo a fixed irreducible polynomial (the
lexicographically smallest one of each degree, so two fields with equal k
are the identical field).  Rational function field elements are pairs
(numerator, denominator) of polynomials over the base Galois field, kept
normalized: coprime, denominator monic, zero stored as (0, 1).

Polynomials over the base field are tuples of raw ints, lowest degree
first, with no trailing zeros; the zero polynomial is the empty tuple.
"""

from __future__ import annotations

from typing import Iterator, Optional

from .errors import (
    DivisionByZero,
    FieldMismatch,
    NotASquare,
    ParseError,
    ZeroElement,
)

# ------------------------------------------------------------------
# GF(2)[x] on plain ints (bit i = coefficient of x^i)
# ------------------------------------------------------------------


def _gf2_mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
    return r


def _gf2_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm and a:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _gf2_irreducible(m: int) -> bool:
    deg = m.bit_length() - 1
    for d in range(1, deg // 2 + 1):
        for p in range(1 << d, 1 << (d + 1)):
            if _gf2_mod(m, p) == 0:
                return False
    return True


def _smallest_irreducible(k: int) -> int:
    for m in range(1 << k, 1 << (k + 1)):
        if _gf2_irreducible(m):
            return m
    raise AssertionError("no irreducible polynomial found")


MAX_K = 8
GF_MODULI = {k: _smallest_irreducible(k) for k in range(1, MAX_K + 1)}


# ------------------------------------------------------------------
# Field value wrapper
# ------------------------------------------------------------------


class FieldValue:
    """An immutable element of one of the supported fields (treat as frozen)."""

    __slots__ = ("field", "raw")

    def __init__(self, field, raw):
        self.field = field
        self.raw = raw

    def _coerce(self, other) -> "FieldValue":
        if isinstance(other, FieldValue):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        raise TypeError(f"cannot combine FieldValue with {type(other)!r}")

    def __add__(self, other):
        if type(other) is FieldValue and other.field is self.field:
            return FieldValue(self.field, self.field.raw_add(self.raw, other.raw))
        other = self._coerce(other)
        return FieldValue(self.field, self.field.raw_add(self.raw, other.raw))

    __radd__ = __add__
    __sub__ = __add__  # characteristic 2
    __rsub__ = __add__

    def __mul__(self, other):
        if type(other) is FieldValue and other.field is self.field:
            return FieldValue(self.field, self.field.raw_mul(self.raw, other.raw))
        other = self._coerce(other)
        return FieldValue(self.field, self.field.raw_mul(self.raw, other.raw))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return FieldValue(self.field, self.field.raw_div(self.raw, other.raw))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (self.field.one / self) ** (-n)
        r = self.field.one
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def inverse(self) -> "FieldValue":
        return FieldValue(self.field, self.field.raw_inv(self.raw))

    def __neg__(self):
        return self

    def __bool__(self) -> bool:
        return not self.field.raw_is_zero(self.raw)

    @property
    def is_zero(self) -> bool:
        return self.field.raw_is_zero(self.raw)

    def __eq__(self, other):
        if isinstance(other, int) and other in (0, 1):
            other = self.field.from_int(other)
        if not isinstance(other, FieldValue):
            return NotImplemented
        return self.field == other.field and self.raw == other.raw

    def __hash__(self):
        return hash((self.field.family, self.field.k, self.raw))

    def __str__(self):
        return self.field.format(self.raw)

    def __repr__(self):
        return f"<{self.field.format(self.raw)} in {self.field}>"


class SquareClass:
    """Canonical representative of a class in F^x / F^x2.

    Built by :func:`square_class`; over Galois fields the representative is
    always 1, over GF(2^k)(t) a monic squarefree polynomial (as a field
    element) times nothing else.
    """

    __slots__ = ("rep",)

    def __init__(self, rep: FieldValue):
        object.__setattr__(self, "rep", rep)

    def __setattr__(self, name, value):
        raise AttributeError("SquareClass is immutable")

    @property
    def is_trivial(self) -> bool:
        return self.rep == self.rep.field.one

    def __eq__(self, other):
        if not isinstance(other, SquareClass):
            return NotImplemented
        return self.rep == other.rep

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return square_class(self.rep * other.rep)

    def __hash__(self):
        return hash(("sqclass", self.rep))

    def __str__(self):
        return str(self.rep)

    def __repr__(self):
        return f"SquareClass({self.rep!r})"


# ------------------------------------------------------------------
# GF(2^k)
# ------------------------------------------------------------------


class GaloisField:
    """GF(2^k) with elements as ints below 2^k."""

    family = "galois"

    def __init__(self, k: int):
        if not 1 <= k <= MAX_K:
            raise ValueError(f"extension degree must be in 1..{MAX_K}, got {k}")
        self.k = k
        self.modulus = GF_MODULI[k]
        self.order = 1 << k
        self.zero = FieldValue(self, 0)
        self.one = FieldValue(self, 1)
        self._inv_cache: dict[int, int] = {}
        self._np_tables = None

    # raw operations ----------------------------------------------------

    def raw_is_zero(self, a: int) -> bool:
        return a == 0

    def raw_add(self, a: int, b: int) -> int:
        return a ^ b

    def raw_mul(self, a: int, b: int) -> int:
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a >> self.k:
                a ^= self.modulus
        return r

    def raw_inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        cached = self._inv_cache.get(a)
        if cached is not None:
            return cached
        # a^(2^k - 2)
        r, b, n = 1, a, self.order - 2
        while n:
            if n & 1:
                r = self.raw_mul(r, b)
            b = self.raw_mul(b, b)
            n >>= 1
        self._inv_cache[a] = r
        return r

    def raw_div(self, a: int, b: int) -> int:
        return self.raw_mul(a, self.raw_inv(b))

    def raw_sqrt(self, a: int) -> int:
        # Frobenius is bijective: sqrt(a) = a^(2^(k-1)).
        for _ in range(self.k - 1):
            a = self.raw_mul(a, a)
        return a

    def raw_trace(self, a: int) -> int:
        t, b = 0, a
        for _ in range(self.k):
            t ^= b
            b = self.raw_mul(b, b)
        return t

    # public surface ---------------------------------------------------

    def val(self, x) -> FieldValue:
        if isinstance(x, FieldValue):
            if x.field != self:
                raise FieldMismatch(f"{x.field} vs {self}")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot build a field value from {type(x)!r}")

    def from_int(self, x: int) -> FieldValue:
        if x >> self.k:
            raise ParseError(f"{x} out of range for GF(2^{self.k})")
        return FieldValue(self, x)

    def elements(self) -> Iterator[FieldValue]:
        for raw in range(self.order):
            yield FieldValue(self, raw)

    def sample(self, rng) -> FieldValue:
        return FieldValue(self, rng.randrange(self.order))

    def is_square_raw(self, a: int) -> bool:
        return True

    def parse(self, s: str) -> FieldValue:
        s = s.strip()
        try:
            raw = int(s, 2) if s.startswith("0b") else int(s)
        except ValueError as exc:
            raise ParseError(f"bad Galois element {s!r}") from exc
        if raw >> self.k:
            raise ParseError(f"{s!r} out of range for GF(2^{self.k})")
        return FieldValue(self, raw)

    def format(self, raw: int) -> str:
        return str(raw) if raw < 2 else bin(raw)

    def numpy_tables(self):
        """(mul, inv, sqrt) lookup tables as numpy uint8 arrays."""
        if self._np_tables is None:
            import numpy as np

            q = self.order
            mul = np.zeros((q, q), dtype=np.uint8)
            for a in range(q):
                for b in range(a, q):
                    m = self.raw_mul(a, b)
                    mul[a, b] = m
                    mul[b, a] = m
            inv = np.zeros(q, dtype=np.uint8)
            for a in range(1, q):
                inv[a] = self.raw_inv(a)
            sqrt = np.zeros(q, dtype=np.uint8)
            for a in range(q):
                sqrt[a] = self.raw_sqrt(a)
            self._np_tables = (mul, inv, sqrt)
        return self._np_tables

    def __eq__(self, other):
        return isinstance(other, GaloisField) and other.k == self.k

    def __hash__(self):
        return hash(("galois", self.k))

    def __repr__(self):
        return f"GF(2^{self.k})" if self.k > 1 else "GF(2)"


# ------------------------------------------------------------------
# Polynomials over GF(2^k): tuples of raw ints, low degree first
# ------------------------------------------------------------------

PZERO: tuple = ()
PONE = (1,)


def pnormal(cs) -> tuple:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def pdeg(p: tuple) -> int:
    return len(p) - 1


def padd(gf: GaloisField, a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] ^= c
    return pnormal(out)


def pscale(gf: GaloisField, a: tuple, c: int) -> tuple:
    if c == 0:
        return PZERO
    if c == 1:
        return a
    return tuple(gf.raw_mul(x, c) for x in a)


def pmul(gf: GaloisField, a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return PZERO
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] ^= gf.raw_mul(x, y)
    return tuple(out)


def pdivmod(gf: GaloisField, a: tuple, b: tuple) -> tuple[tuple, tuple]:
    if not b:
        raise DivisionByZero("polynomial division by zero")
    if len(a) < len(b):
        return PZERO, a
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    ilb = gf.raw_inv(lb)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c == 0:
            continue
        f = gf.raw_mul(c, ilb)
        q[i - db] = f
        for j, y in enumerate(b):
            a[i - db + j] ^= gf.raw_mul(f, y)
    return pnormal(q), pnormal(a)


def pgcd(gf: GaloisField, a: tuple, b: tuple) -> tuple:
    while b:
        a, b = b, pdivmod(gf, a, b)[1]
    return pmonic(gf, a)


def pmonic(gf: GaloisField, a: tuple) -> tuple:
    if not a or a[-1] == 1:
        return a
    return pscale(gf, a, gf.raw_inv(a[-1]))


def pderiv(gf: GaloisField, a: tuple) -> tuple:
    # char 2: even-degree terms vanish, odd-degree coefficients shift down.
    out = [0] * max(len(a) - 1, 0)
    for i in range(1, len(a), 2):
        out[i - 1] = a[i]
    return pnormal(out)


def p_is_square(gf: GaloisField, a: tuple) -> bool:
    return all(c == 0 for c in a[1::2])


def psqrt(gf: GaloisField, a: tuple) -> tuple:
    if not p_is_square(gf, a):
        raise NotASquare("polynomial has an odd-degree term")
    return pnormal(gf.raw_sqrt(c) for c in a[0::2])


def psquarefree_class(gf: GaloisField, f: tuple) -> tuple:
    """Monic squarefree part of f modulo squares (1 when f is a square).

    Writing f = u^2 * v with v squarefree, the derivative in characteristic
    2 is f' = u^2 * v', so gcd(f, f') = u^2 and f / gcd gives v.
    """
    if not f:
        raise ZeroElement("square class of zero")
    d = pderiv(gf, f)
    if not d:
        return PONE
    g = pgcd(gf, f, d)
    return pmonic(gf, pdivmod(gf, f, g)[0])


def peval(gf: GaloisField, a: tuple, x: int) -> int:
    r = 0
    for c in reversed(a):
        r = gf.raw_mul(r, x) ^ c
    return r


# polynomial text form -------------------------------------------------


def pformat(gf: GaloisField, a: tuple) -> str:
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(gf.format(c))
        else:
            tpow = "t" if i == 1 else f"t^{i}"
            parts.append(tpow if c == 1 else f"{gf.format(c)}*{tpow}")
    return "+".join(parts)


def pparse(gf: GaloisField, s: str) -> tuple:
    s = s.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial")
    coeffs: dict[int, int] = {}
    for term in s.split("+"):
        if not term:
            raise ParseError(f"empty term in {s!r}")
        coef, power = term, 0
        if "t" in term:
            cpart, _, epart = term.partition("t")
            cpart = cpart.rstrip("*")
            power = 1
            if epart:
                if not epart.startswith("^") or not epart[1:].isdigit():
                    raise ParseError(f"bad exponent in {term!r}")
                power = int(epart[1:])
            coef = cpart if cpart else "1"
        try:
            craw = int(coef, 2) if coef.startswith("0b") else int(coef)
        except ValueError as exc:
            raise ParseError(f"bad coefficient in {term!r}") from exc
        if craw >> gf.k:
            raise ParseError(f"coefficient {coef!r} out of range for {gf}")
        coeffs[power] = coeffs.get(power, 0) ^ craw
    out = [0] * (max(coeffs) + 1)
    for p, c in coeffs.items():
        out[p] = c
    return pnormal(out)


# ------------------------------------------------------------------
# GF(2^k)(t)
# ------------------------------------------------------------------


class RationalFunctionField:
    """GF(2^k)(t) with elements as normalized (numerator, denominator) pairs."""

    family = "rational_function"

    def __init__(self, k: int):
        self.base = GaloisField(k)
        self.k = k
        self.zero = FieldValue(self, (PZERO, PONE))
        self.one = FieldValue(self, (PONE, PONE))
        self.t = FieldValue(self, ((0, 1), PONE))

    def _normal(self, num: tuple, den: tuple):
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            return (PZERO, PONE)
        g = pgcd(self.base, num, den)
        if pdeg(g) > 0 or g != PONE:
            num = pdivmod(self.base, num, g)[0]
            den = pdivmod(self.base, den, g)[0]
        lc = den[-1]
        if lc != 1:
            i = self.base.raw_inv(lc)
            num = pscale(self.base, num, i)
            den = pscale(self.base, den, i)
        return (num, den)

    def raw_is_zero(self, a) -> bool:
        return not a[0]

    def raw_add(self, a, b):
        (n1, d1), (n2, d2) = a, b
        gf = self.base
        return self._normal(
            padd(gf, pmul(gf, n1, d2), pmul(gf, n2, d1)), pmul(gf, d1, d2)
        )

    def raw_mul(self, a, b):
        gf = self.base
        return self._normal(pmul(gf, a[0], b[0]), pmul(gf, a[1], b[1]))

    def raw_inv(self, a):
        n, d = a
        if not n:
            raise DivisionByZero("inverse of zero")
        return self._normal(d, n)

    def raw_div(self, a, b):
        return self.raw_mul(a, self.raw_inv(b))

    def is_square_raw(self, a) -> bool:
        n, d = a
        if not n:
            return True
        return p_is_square(self.base, n) and p_is_square(self.base, d)

    def raw_sqrt(self, a):
        if not self.is_square_raw(a):
            raise NotASquare(f"{self.format(a)} is not a square")
        n, d = a
        if not n:
            return (PZERO, PONE)
        return self._normal(psqrt(self.base, n), psqrt(self.base, d))

    # public surface ---------------------------------------------------

    def val(self, x) -> FieldValue:
        if isinstance(x, FieldValue):
            if x.field != self:
                raise FieldMismatch(f"{x.field} vs {self}")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, tuple) and len(x) == 2:
            return FieldValue(self, self._normal(pnormal(x[0]), pnormal(x[1])))
        raise TypeError(f"cannot build a field value from {type(x)!r}")

    def from_int(self, x: int) -> FieldValue:
        if x >> self.k:
            raise ParseError(f"{x} out of range for GF(2^{self.k}) constants")
        return FieldValue(self, ((x,) if x else PZERO, PONE))

    def poly(self, *coeffs) -> FieldValue:
        """Polynomial with the given constant-first coefficients."""
        return FieldValue(self, self._normal(pnormal(coeffs), PONE))

    def sample(self, rng, max_degree: int = 3) -> FieldValue:
        gf = self.base
        num = pnormal(rng.randrange(gf.order) for _ in range(max_degree + 1))
        den = PZERO
        while not den:
            den = pnormal(rng.randrange(gf.order) for _ in range(max_degree + 1))
        return FieldValue(self, self._normal(num, den))

    def parse(self, s: str) -> FieldValue:
        s = s.strip().replace(" ", "")
        num_s, slash, den_s = s.partition("/")
        num = pparse(self.base, num_s)
        den = pparse(self.base, den_s) if slash else PONE
        return FieldValue(self, self._normal(num, den))

    def format(self, a) -> str:
        n, d = a
        if d == PONE:
            return pformat(self.base, n)
        return f"{pformat(self.base, n)}/{pformat(self.base, d)}"

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and other.k == self.k

    def __hash__(self):
        return hash(("rational_function", self.k))

    def __repr__(self):
        base = f"GF(2^{self.k})" if self.k > 1 else "GF(2)"
        return f"{base}(t)"


# interned constructors -------------------------------------------------

_GF_CACHE: dict[int, GaloisField] = {}
_FF_CACHE: dict[int, RationalFunctionField] = {}


def galois_field(k: int) -> GaloisField:
    if k not in _GF_CACHE:
        _GF_CACHE[k] = GaloisField(k)
    return _GF_CACHE[k]


def rational_function_field(k: int) -> RationalFunctionField:
    if k not in _FF_CACHE:
        _FF_CACHE[k] = RationalFunctionField(k)
    return _FF_CACHE[k]


def field_from_desc(family: str, k: int):
    if family in ("galois", "GaloisField"):
        return galois_field(k)
    if family in ("rational_function", "RationalFunctionField"):
        return rational_function_field(k)
    raise ParseError(f"unknown field family {family!r}")


# ------------------------------------------------------------------
# The operation surface
# ------------------------------------------------------------------


def arith(x: FieldValue, y: FieldValue, op: str) -> FieldValue:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "inv":
        if y is not None and not isinstance(y, FieldValue):
            raise TypeError("inv takes the operand in x")
        return x.inverse()
    raise ValueError(f"unknown op {op!r}")


def is_square(x: FieldValue) -> bool:
    return x.field.is_square_raw(x.raw)


def sqrt(x: FieldValue) -> FieldValue:
    return FieldValue(x.field, x.field.raw_sqrt(x.raw))


def square_class(x: FieldValue) -> SquareClass:
    if x.is_zero:
        raise ZeroElement("square class of zero")
    F = x.field
    if isinstance(F, GaloisField):
        return SquareClass(F.one)
    num, den = x.raw
    gf = F.base
    rep = psquarefree_class(gf, pmul(gf, num, den))
    return SquareClass(FieldValue(F, (rep, PONE)))


def artin_schreier_solve(a: FieldValue, degree_bound: int = 8) -> Optional[FieldValue]:
    """Some x with x^2 + x = a, or None if there is none.

    Exact over both families: over GF(2^k) the trace decides solvability and
    the solution is found by enumeration; over GF(2^k)(t) the denominator of
    a solution must be the square root of den(a) and p -> p^2 + p*q is
    GF(2)-linear in the coefficient bits, so one linear solve decides.
    """
    F = a.field
    if isinstance(F, GaloisField):
        if F.raw_trace(a.raw) != 0:
            return None
        for x in range(F.order):
            if F.raw_mul(x, x) ^ x == a.raw:
                return FieldValue(F, x)
        return None
    gf = F.base
    n, d = a.raw
    if not p_is_square(gf, d):
        return None
    q = psqrt(gf, d)
    dn, dq = pdeg(n), pdeg(q)
    dp = max(dn, dq, (dn + 1) // 2, 0)
    nvars = (dp + 1) * gf.k
    # image degree bound of p^2 + p*q
    dimg = max(2 * dp, dp + dq, dn) + 1
    rows = dimg * gf.k

    def apply(pcoeffs: list[int]) -> list[int]:
        p = pnormal(pcoeffs)
        img = padd(gf, pmul(gf, p, p), pmul(gf, p, q))
        out = list(img) + [0] * (dimg - len(img))
        return out[:dimg]

    # columns of the GF(2) matrix: one per coefficient bit of p
    import itertools

    cols = []
    for ci, bit in itertools.product(range(dp + 1), range(gf.k)):
        e = [0] * (dp + 1)
        e[ci] = 1 << bit
        img = apply(e)
        colbits = 0
        for pos, c in enumerate(img):
            for b in range(gf.k):
                if (c >> b) & 1:
                    colbits |= 1 << (pos * gf.k + b)
        cols.append(colbits)
    target = 0
    npad = list(n) + [0] * (dimg - len(n))
    for pos, c in enumerate(npad[:dimg]):
        for b in range(gf.k):
            if (c >> b) & 1:
                target |= 1 << (pos * gf.k + b)
    sol = _solve_gf2(cols, target, rows, nvars)
    if sol is None:
        return None
    pcoeffs = [0] * (dp + 1)
    for ci in range(dp + 1):
        for bit in range(gf.k):
            if (sol >> (ci * gf.k + bit)) & 1:
                pcoeffs[ci] |= 1 << bit
    x = F.val((pnormal(pcoeffs), q))
    if x * x + x != a:
        return None
    return x


def _solve_gf2(cols: list[int], target: int, nrows: int, nvars: int) -> Optional[int]:
    """Solve the GF(2) system given by column bitmasks; returns a variable bitmask."""
    # Gaussian elimination on the transposed system: rows = (col, varmask)
    rows = [(cols[i], 1 << i) for i in range(nvars)]
    rhs = target
    sol = 0
    used = [False] * nvars
    for bit in range(nrows):
        pivot = None
        for i, (c, _) in enumerate(rows):
            if not used[i] and (c >> bit) & 1:
                pivot = i
                break
        if pivot is None:
            if (rhs >> bit) & 1:
                return None
            continue
        used[pivot] = True
        pc, pv = rows[pivot]
        for i, (c, v) in enumerate(rows):
            if i != pivot and (c >> bit) & 1:
                rows[i] = (c ^ pc, v ^ pv)
        if (rhs >> bit) & 1:
            rhs ^= pc
            sol ^= pv
    return sol if rhs == 0 else None
