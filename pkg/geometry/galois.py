"""
Exact arithmetic in GF(p^h).

Elements are plain integers: the element with coefficient vector
(c0, c1, ..., c_{h-1}) (constant term first) is encoded as sum(c_i * p^i).
Enumerating 0..q-1 therefore walks the coefficient vectors in lexicographic
order (highest-degree coefficient most significant), 0 first, and the prime
field GF(p) keeps its natural labels 0..p-1. This order is the canonical
element order every other module indexes by.

Small fields (q <= TABLE_LIMIT) carry log/antilog tables; fields up to
FULL_TABLE_LIMIT also carry full addition and multiplication tables as numpy
arrays, which the plane builder uses for vectorised coordinate arithmetic.
Larger fields fall back to direct polynomial reduction.

`CubicExtension` models GF(q^3) as triples over GF(q); its multiplication by
the class of X is the linear map behind the Singer cycle of PG(2,q).
"""

from dataclasses import dataclass
from functools import lru_cache
import numpy as np
from sympy import factorint, isprime, primefactors
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_rem, gf_strip

from clilog import log, VERBOSITY_DEBUG, VERBOSITY_TRACE
from .errors import (
    DegreeMismatch,
    DivisionByZero,
    FieldMismatch,
    FieldTooLarge,
    NonPrime,
    NotASquareOrder,
    ReducibleModulus,
)

TABLE_LIMIT = 2 ** 16
FULL_TABLE_LIMIT = 2 ** 10
# q^3 must stay below this for Singer cycles (GF(121^3) ~ 1.77e6 fits, GF(128^3) is the edge)
ARITHMETIC_CEILING = 2 ** 21


# ───────────────────────────────────────────
# INTEGER HELPERS
# ───────────────────────────────────────────

def is_prime(n: int) -> bool:
    return bool(isprime(n))


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    return [int(r) for r in primefactors(n)]


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^h; raises NonPrime when q is not a prime power."""
    factors = factorint(q) if q > 1 else {}
    if len(factors) != 1:
        raise NonPrime(q)
    (p, h), = factors.items()
    return int(p), int(h)


# ───────────────────────────────────────────
# POLYNOMIALS OVER GF(p)
# Callers pass coefficient sequences constant term first; sympy's
# galoistools wants them leading term first.
# ───────────────────────────────────────────

def _descending(c, p: int) -> list[int]:
    return gf_strip([int(x) % p for x in reversed(list(c))])


def _ascending(c) -> list[int]:
    return [int(x) for x in reversed(c)]


def _poly_mod(a, m, p):
    return _ascending(gf_rem(_descending(a, p), _descending(m, p), p, ZZ))


def _poly_mul(a, b, p):
    return _ascending(gf_mul(_descending(a, p), _descending(b, p), p, ZZ))


def is_irreducible(poly, p) -> bool:
    f = _descending(poly, p)
    if len(f) < 2:
        return False
    return bool(gf_irreducible_p(f, p, ZZ))


def smallest_irreducible(p: int, h: int) -> tuple[int, ...]:
    """Monic irreducible of degree h whose lower coefficients encode the smallest integer."""
    for code in range(p ** h):
        tail = [(code // p ** i) % p for i in range(h)]
        candidate = tail + [1]
        if is_irreducible(candidate, p):
            return tuple(candidate)
    raise ReducibleModulus(f"no irreducible polynomial of degree {h} over GF({p})")


# ───────────────────────────────────────────
# FIELD
# ───────────────────────────────────────────

class Field:
    """GF(p^h) with a fixed irreducible modulus. Immutable after construction."""

    def __init__(self, p: int, h: int, modulus: tuple[int, ...]):
        self.p = p
        self.h = h
        self.modulus = tuple(modulus)
        self.order = p ** h
        q = self.order
        self._powers = [p ** i for i in range(h)]
        self.generator = self._find_generator()

        self.exp_table = None
        self.log_table = None
        self.add_table = None
        self.mul_table = None
        if q <= TABLE_LIMIT:
            self._build_log_tables()
        if q <= FULL_TABLE_LIMIT:
            self._build_full_tables()
        log(f"[galois.py.Field] Built GF({p}^{h}) modulus={self.modulus} generator={self.generator}", VERBOSITY_DEBUG)

    # -- representation ---------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        return tuple((a // w) % self.p for w in self._powers)

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.h:
            coeffs = _poly_mod(coeffs, self.modulus, self.p) if self.h else coeffs
        value = 0
        for c, w in zip(coeffs, self._powers):
            value += (c % self.p) * w
        return value

    def elements(self):
        return range(self.order)

    def element(self, value) -> "FieldElement":
        if isinstance(value, (tuple, list)):
            value = self.from_coeffs(value)
        return FieldElement(self, int(value) % self.order)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def descriptor(self) -> dict:
        return {"p": self.p, "h": self.h, "modulus": list(self.modulus)}

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.h, self.modulus) == (other.p, other.h, other.modulus)

    def __hash__(self):
        return hash((self.p, self.h, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.h}, modulus={list(self.modulus)})"

    # -- scalar arithmetic on encoded integers ------------------------------

    def add(self, a: int, b: int) -> int:
        if self._add is not None:
            return self._add[a][b]
        if self.p == 2:
            return a ^ b
        return sum(((x + y) % self.p) * w for x, y, w in zip(self.coeffs(a), self.coeffs(b), self._powers))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return sum(((-x) % self.p) * w for x, w in zip(self.coeffs(a), self._powers))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._mul is not None:
            return self._mul[a][b]
        if self.log_table is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]
        return self._mul_poly(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"inverse of 0 in {self!r}")
        if self.log_table is not None:
            return self._exp[(-self._log[a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a = self.inv(a)
            e = -e
        if a == 0:
            return 1 if e == 0 else 0
        if self.log_table is not None:
            return self._exp[(self._log[a] * e) % (self.order - 1)]
        result = 1
        base = a
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            base = self._mul_poly(base, base)
            e >>= 1
        return result

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no multiplicative order")
        order = self.order - 1
        for r in prime_factors(order):
            while order % r == 0 and self._pow_poly(a, order // r) == 1:
                order //= r
        return order

    # -- vectorised helpers --------------------------------------------------

    def vadd(self, a, b):
        return self.add_table[a, b]

    def vmul(self, a, b):
        return self.mul_table[a, b]

    # -- construction internals ---------------------------------------------

    _add = None
    _mul = None
    _exp = None
    _log = None

    def _mul_poly(self, a: int, b: int) -> int:
        return self.from_coeffs(_poly_mul(self.coeffs(a), self.coeffs(b), self.p))

    def _pow_poly(self, a: int, e: int) -> int:
        result = 1
        base = a
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            base = self._mul_poly(base, base)
            e >>= 1
        return result

    def _find_generator(self) -> int:
        """First element, in canonical order, of multiplicative order q-1."""
        q = self.order
        if q == 2:
            return 1
        factors = prime_factors(q - 1)
        for a in range(1, q):
            if all(self._pow_poly(a, (q - 1) // r) != 1 for r in factors):
                return a
        raise ReducibleModulus(f"{self!r} has no element of order {q - 1}")

    def _build_log_tables(self):
        q = self.order
        exp_table = np.zeros(2 * (q - 1) if q > 1 else 1, dtype=np.int64)
        log_table = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp_table[i] = x
            log_table[x] = i
            x = self._mul_poly(x, self.generator)
        exp_table[q - 1:] = exp_table[:q - 1]
        self.exp_table = exp_table
        self.log_table = log_table
        self._exp = exp_table.tolist()
        self._log = log_table.tolist()
        log(f"[galois.py.Field._build_log_tables] {q - 1} powers of {self.generator} tabulated", VERBOSITY_TRACE)

    def _build_full_tables(self):
        q = self.order
        digits = np.array([self.coeffs(a) for a in range(q)], dtype=np.int64).reshape(q, self.h)
        weights = np.array(self._powers, dtype=np.int64)
        summed = (digits[:, None, :] + digits[None, :, :]) % self.p
        self.add_table = (summed * weights).sum(axis=2)

        logs = self.log_table
        mul_table = self.exp_table[(logs[:, None] + logs[None, :]) % max(q - 1, 1)]
        mul_table[0, :] = 0
        mul_table[:, 0] = 0
        self.mul_table = mul_table

        self.neg_table = np.array([self.neg(a) for a in range(q)], dtype=np.int64)
        inv_table = np.zeros(q, dtype=np.int64)
        inv_table[1:] = [self.inv(a) for a in range(1, q)]
        self.inv_table = inv_table
        self._add = self.add_table.tolist()
        self._mul = self.mul_table.tolist()


@lru_cache(maxsize=None)
def _cached_field(p: int, h: int, modulus: tuple[int, ...]) -> Field:
    return Field(p, h, modulus)


def make_field(p: int, h: int = 1, modulus=None) -> Field:
    """
    Build GF(p^h). Without a modulus the lexicographically smallest monic
    irreducible of degree h is used, so the result is deterministic.
    """
    if not is_prime(p):
        raise NonPrime(p)
    if h < 1:
        raise DegreeMismatch(f"extension degree must be >= 1, got {h}")
    if modulus is None:
        modulus = smallest_irreducible(p, h)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != h + 1 or modulus[-1] != 1:
            raise DegreeMismatch(f"modulus {list(modulus)} is not monic of degree {h}")
        if not is_irreducible(modulus, p):
            raise ReducibleModulus(f"modulus {list(modulus)} is reducible over GF({p})")
    return _cached_field(p, h, tuple(modulus))


def field_of_order(q: int, modulus=None) -> Field:
    p, h = prime_power(q)
    return make_field(p, h, modulus)


def field_from_descriptor(descriptor: dict) -> Field:
    return make_field(int(descriptor["p"]), int(descriptor["h"]), descriptor.get("modulus"))


# ───────────────────────────────────────────
# ELEMENTS
# ───────────────────────────────────────────

@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other.value
        if isinstance(other, int):
            return self.field.element(other % self.field.p).value
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def order(self) -> int:
        return self.field.multiplicative_order(self.value)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"<{self.value} = {list(self.coeffs)} in GF({self.field.order})>"


def primitive_element(field: Field) -> FieldElement:
    """First element in canonical order with multiplicative order q-1."""
    return FieldElement(field, field.generator)


# ───────────────────────────────────────────
# SUBFIELDS
# ───────────────────────────────────────────

@dataclass(frozen=True)
class SubfieldEmbedding:
    big: Field
    small: Field
    image: tuple[int, ...]

    def __call__(self, g: int) -> int:
        return self.image[g]

    def image_set(self) -> frozenset[int]:
        return frozenset(self.image)

    def is_homomorphism(self) -> bool:
        F, G = self.big, self.small
        for a in G.elements():
            for b in G.elements():
                if self.image[G.add(a, b)] != F.add(self.image[a], self.image[b]):
                    return False
                if self.image[G.mul(a, b)] != F.mul(self.image[a], self.image[b]):
                    return False
        return True


def subfield_embedding(big: Field, small: Field) -> SubfieldEmbedding:
    """
    Embed GF(r) into GF(r^2): the image of the generator class X of `small`
    is the smallest root in `big` of small's modulus.
    """
    if big.p != small.p or big.order != small.order ** 2:
        raise NotASquareOrder(f"GF({small.order}) is not the square-root subfield of GF({big.order})")

    def evaluate(x):
        acc = 0
        for c in reversed(small.modulus):
            acc = big.add(big.mul(acc, x), c)
        return acc

    alpha = next(x for x in big.elements() if evaluate(x) == 0)
    image = []
    for g in small.elements():
        acc = 0
        power = 1
        for c in small.coeffs(g):
            if c:
                acc = big.add(acc, big.mul(c, power))
            power = big.mul(power, alpha)
        image.append(acc)
    log(f"[galois.py.subfield_embedding] GF({small.order}) -> GF({big.order}) via root {alpha}", VERBOSITY_DEBUG)
    return SubfieldEmbedding(big, small, tuple(image))


# ───────────────────────────────────────────
# CUBIC EXTENSION (Singer cycles)
# ───────────────────────────────────────────

@dataclass(frozen=True)
class CubicExtension:
    """GF(q^3) = GF(q)[X] / (X^3 + c2 X^2 + c1 X + c0); elements are triples over GF(q)."""
    base: Field
    modulus: tuple[int, int, int, int]

    @property
    def order(self) -> int:
        return self.base.order ** 3

    def mul(self, a, b):
        F = self.base
        prod = [0] * 5
        for i in range(3):
            if a[i]:
                for j in range(3):
                    if b[j]:
                        prod[i + j] = F.add(prod[i + j], F.mul(a[i], b[j]))
        for d in (4, 3):
            top = prod[d]
            if top:
                for k in range(3):
                    prod[d - 3 + k] = F.sub(prod[d - 3 + k], F.mul(top, self.modulus[k]))
                prod[d] = 0
        return tuple(prod[:3])

    def pow(self, a, e: int):
        result = (1, 0, 0)
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def companion_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Matrix of multiplication by X on coordinate triples (a0, a1, a2)."""
        F = self.base
        c0, c1, c2 = (F.neg(c) for c in self.modulus[:3])
        return ((0, 0, c0), (1, 0, c1), (0, 1, c2))


def _has_root(field: Field, cubic) -> bool:
    for x in field.elements():
        acc = 0
        for c in reversed(cubic):
            acc = field.add(field.mul(acc, x), c)
        if acc == 0:
            return True
    return False


def singer_extension(field: Field) -> CubicExtension:
    """
    Smallest monic cubic over GF(q) (lower coefficients encoded base q) that is
    irreducible and has X primitive in GF(q^3).
    """
    q = field.order
    if q ** 3 > ARITHMETIC_CEILING:
        raise FieldTooLarge(f"GF({q}^3) exceeds the arithmetic ceiling {ARITHMETIC_CEILING}")
    big_order = q ** 3 - 1
    factors = prime_factors(big_order)
    for code in range(q, q ** 3):
        cubic = (code % q, (code // q) % q, code // (q * q), 1)
        if _has_root(field, cubic):
            continue
        ext = CubicExtension(field, cubic)
        x = (0, 1, 0)
        if all(ext.pow(x, big_order // r) != (1, 0, 0) for r in factors):
            log(f"[galois.py.singer_extension] GF({q}^3) modulus {list(cubic)}", VERBOSITY_DEBUG)
            return ext
    raise ReducibleModulus(f"no primitive cubic over GF({q})")
