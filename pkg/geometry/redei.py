"""
Polynomials over GF(q) and the Rédei polynomial of an affine point set.

With the line at infinity [0:0:1] and the point (0:1:0) as the vertical
direction, the affine point (x:y:1) gets the factor M*x + B - y in

    R(B, M) = prod (M x_i + B - y_i).

Substituting M = m, the multiplicity of the root b of R(m, B) is the number of
affine points on the line Y = mX + b, and

    k_m = deg gcd(R(m, B), (B^q - B)^2)

counts the lines of slope m that meet the set plus those that meet it twice.
For a direction (m) outside the set this gives k_m = 2q - ind(m).

`szonyi_weiner_check` evaluates both sides of

    sum_y' (k_y' - k_y)^+ <= (deg u - k_y)(deg v - k_y)

for two bivariate polynomials whose main-variable degree survives substitution.
"""

import random
from dataclasses import dataclass, field
from functools import lru_cache

import galois
import numpy as np

from clilog import log, VERBOSITY_DEBUG, VERBOSITY_TRACE
from .errors import DegreeUnstable, FieldMismatch, NonAffinePoint, NoValidFrame, PreconditionUnmet
from .galois import Field
from .plane import Plane, apply_collineation
from .resolve import Frame, choose_frame, is_semi_resolving, point_index

NEG_INF = float("-inf")


# ───────────────────────────────────────────
# UNIVARIATE
# ───────────────────────────────────────────

@lru_cache(maxsize=None)
def galois_field(field: Field):
    """The galois field class on the same modulus, so both libraries agree on integer labels."""
    if field.h == 1:
        return galois.GF(field.p)
    modulus = galois.Poly(list(reversed(field.modulus)), field=galois.GF(field.p))
    return galois.GF(field.order, irreducible_poly=modulus)


class Poly:
    """
    Polynomial in one variable over a `Field`. Arithmetic runs on `galois.Poly`;
    `coeffs` exposes the ascending coefficients without trailing zeros.
    """

    __slots__ = ("field", "poly")

    def __init__(self, field: Field, coeffs=()):
        self.field = field
        self.poly = galois.Poly([int(c) for c in coeffs] or [0], field=galois_field(field), order="asc")

    @classmethod
    def _wrap(cls, field: Field, poly) -> "Poly":
        out = cls.__new__(cls)
        out.field = field
        out.poly = poly
        return out

    @classmethod
    def constant(cls, field: Field, c: int) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field: Field, degree: int, c: int = 1) -> "Poly":
        return cls(field, (0,) * degree + (c,))

    @classmethod
    def field_polynomial(cls, field: Field) -> "Poly":
        """B^q - B, vanishing on every element of the field."""
        q = field.order
        return cls.monomial(field, q) - cls.monomial(field, 1)

    @property
    def coeffs(self) -> tuple[int, ...]:
        if self.is_zero():
            return ()
        return tuple(int(c) for c in self.poly.coeffs[::-1])

    @property
    def degree(self):
        return NEG_INF if self.is_zero() else int(self.poly.degree)

    @property
    def leading(self) -> int:
        return int(self.poly.coeffs[0])

    def is_zero(self) -> bool:
        return self.poly.degree == 0 and int(self.poly.coeffs[0]) == 0

    def _same_field(self, other: "Poly"):
        if self.field != other.field:
            raise FieldMismatch(f"polynomials over {self.field!r} and {other.field!r}")

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = [f"{c}*B^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return f"Poly({' + '.join(reversed(terms))} over GF({self.field.order}))"

    def __add__(self, other: "Poly") -> "Poly":
        self._same_field(other)
        return Poly._wrap(self.field, self.poly + other.poly)

    def __neg__(self) -> "Poly":
        return Poly._wrap(self.field, -self.poly)

    def __sub__(self, other: "Poly") -> "Poly":
        self._same_field(other)
        return Poly._wrap(self.field, self.poly - other.poly)

    def __mul__(self, other: "Poly") -> "Poly":
        self._same_field(other)
        return Poly._wrap(self.field, self.poly * other.poly)

    def __pow__(self, e: int) -> "Poly":
        return Poly._wrap(self.field, self.poly ** e)

    def scale(self, c: int) -> "Poly":
        return self * Poly.constant(self.field, c)

    def __divmod__(self, other: "Poly"):
        self._same_field(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        quot, rem = divmod(self.poly, other.poly)
        return Poly._wrap(self.field, quot), Poly._wrap(self.field, rem)

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def monic(self) -> "Poly":
        return self if self.is_zero() else self.scale(self.field.inv(self.leading))

    def __call__(self, x: int) -> int:
        return int(self.poly(galois_field(self.field)(x)))

    def values(self):
        """Evaluations at every field element, in canonical order."""
        return self.poly(galois_field(self.field).elements)

    def derivative(self) -> "Poly":
        if self.poly.degree == 0:
            return Poly(self.field)
        return Poly._wrap(self.field, self.poly.derivative())


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd; gcd(f, 0) = monic(f)."""
    f._same_field(g)
    if g.is_zero():
        return f.monic()
    if f.is_zero():
        return g.monic()
    return Poly._wrap(f.field, galois.gcd(f.poly, g.poly))


def square_gcd_degree(f: Poly) -> int:
    """
    deg gcd(f, (B^q - B)^2) for nonzero f: distinct roots in the field plus the
    roots of multiplicity at least two (f(b) = f'(b) = 0).
    """
    roots = f.values() == 0
    double = roots & (f.derivative().values() == 0)
    return int(np.count_nonzero(roots) + np.count_nonzero(double))


# ───────────────────────────────────────────
# BIVARIATE
# ───────────────────────────────────────────

class BiPoly:
    """
    Polynomial in B and M: a mapping from M-degree to a Poly in B.
    `specialize(m)` substitutes M = m and returns a Poly in B.
    """

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms=None):
        self.field = field
        self.terms = {j: p for j, p in (terms or {}).items() if not p.is_zero()}

    @classmethod
    def from_b(cls, poly: Poly) -> "BiPoly":
        return cls(poly.field, {0: poly})

    @classmethod
    def linear(cls, field: Field, m_coeff: int, b_coeff: int, const: int) -> "BiPoly":
        """m_coeff*M + b_coeff*B + const."""
        return cls(field, {0: Poly(field, (const, b_coeff)), 1: Poly.constant(field, m_coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree_b(self):
        return max((p.degree for p in self.terms.values()), default=NEG_INF)

    @property
    def degree_m(self):
        return max(self.terms, default=NEG_INF)

    @property
    def degree(self):
        """Total degree."""
        return max((j + p.degree for j, p in self.terms.items()), default=NEG_INF)

    def coefficient(self, b_degree: int, m_degree: int) -> int:
        p = self.terms.get(m_degree)
        if p is None or b_degree >= len(p.coeffs):
            return 0
        return p.coeffs[b_degree]

    def _same_field(self, other: "BiPoly"):
        if self.field != other.field:
            raise FieldMismatch(f"polynomials over {self.field!r} and {other.field!r}")

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.field == other.field and self.terms == other.terms

    def __repr__(self):
        return f"BiPoly(deg_B={self.degree_b}, deg_M={self.degree_m} over GF({self.field.order}))"

    def __add__(self, other: "BiPoly") -> "BiPoly":
        self._same_field(other)
        terms = dict(self.terms)
        for j, p in other.terms.items():
            terms[j] = terms[j] + p if j in terms else p
        return BiPoly(self.field, terms)

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        self._same_field(other)
        terms = {}
        for i, p in self.terms.items():
            for j, r in other.terms.items():
                prod = p * r
                terms[i + j] = terms[i + j] + prod if i + j in terms else prod
        return BiPoly(self.field, terms)

    def specialize(self, m: int) -> Poly:
        F = self.field
        out = Poly(F)
        for j in sorted(self.terms):
            out = out + self.terms[j].scale(F.pow(m, j))
        return out

    def __call__(self, b: int, m: int) -> int:
        return self.specialize(m)(b)


# ───────────────────────────────────────────
# RÉDEI POLYNOMIAL AND PROFILE
# ───────────────────────────────────────────

def _affine_pair(field: Field, point) -> tuple[int, int]:
    if len(point) == 2:
        return int(point[0]), int(point[1])
    x, y, z = (int(c) for c in point)
    if z == 0:
        raise NonAffinePoint(f"point ({x}:{y}:{z}) lies on the line at infinity")
    inv = field.inv(z)
    return field.mul(x, inv), field.mul(y, inv)


def redei_polynomial(points, field: Field) -> BiPoly:
    """R(B, M) for affine points given as (x, y) pairs or homogeneous (x, y, z) triples."""
    R = BiPoly.from_b(Poly.constant(field, 1))
    for point in points:
        x, y = _affine_pair(field, point)
        R = R * BiPoly.linear(field, x, 1, field.neg(y))
    return R


def plane_affine_points(S, plane: Plane) -> list[tuple[int, int]]:
    """(x, y) of the points of S in the standard frame; ideal points raise NonAffinePoint."""
    q = plane.q
    out = []
    for P in sorted(S):
        if P >= q * q:
            raise NonAffinePoint(f"point {P} is on the line at infinity")
        out.append(divmod(P, q))
    return out


def global_frame(S, plane: Plane, secants=None) -> Frame:
    """Smallest s in [2, q-1], then smallest line index; infinity its smallest point outside S."""
    S = set(S)
    if secants is None:
        secants = plane.point_mask(S)[plane.points_on].sum(axis=1)
    candidates = [(int(s), l) for l, s in enumerate(secants.tolist()) if 2 <= s <= plane.q - 1]
    if not candidates:
        raise NoValidFrame(f"no s-secant with 2 <= s <= {plane.q - 1}")
    s, line = min(candidates)
    infinity = next(int(X) for X in plane.points_on[line] if X not in S)
    return Frame(line=line, s=s, infinity=infinity)


@dataclass
class RedeiProfile:
    q: int
    frame: Frame
    affine_points: list
    k: dict
    directions: list
    delta: int
    delta_from_index: int
    t: int
    size: int
    identity_ok: bool
    counting_ok: bool
    euclid_ok: bool | None = None
    moved: frozenset = field(default=frozenset(), repr=False)

    @property
    def ok(self) -> bool:
        return (self.identity_ok and self.counting_ok and self.euclid_ok is not False
                and self.delta == self.delta_from_index
                and self.delta <= self.t and self.delta <= self.size)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "frame": {"linf_index": self.frame.line, "s": self.frame.s, "infinity": self.frame.infinity},
            "k": {str(m): km for m, km in sorted(self.k.items())},
            "directions": self.directions,
            "delta": self.delta,
            "delta_from_index": self.delta_from_index,
            "t": self.t,
            "size": self.size,
            "identity_ok": self.identity_ok,
            "counting_ok": self.counting_ok,
            "euclid_ok": self.euclid_ok,
            "ok": self.ok,
        }


def redei_profile(S, plane: Plane, frame: Frame = None, point: int = None) -> RedeiProfile:
    """
    Moves `frame.line` to [0:0:1] and `frame.infinity` to (0:1:0), then tabulates
    k_m for every slope. Without a frame one is chosen through `point` (when
    given) or globally by `global_frame`.
    """
    S = frozenset(int(P) for P in S)
    q, F = plane.q, plane.field
    if frame is None:
        frame = choose_frame(S, plane, point) if point is not None else global_frame(S, plane)
    g = plane.frame_projectivity(frame.line, frame.infinity)
    moved = apply_collineation(g, S, plane)
    affine = plane_affine_points([P for P in moved if P < q * q], plane)
    R = redei_polynomial(affine, F)

    report = point_index(moved, plane)
    ind, secants = report.ind, report.secants
    square = Poly.field_polynomial(F) ** 2 if q <= 7 else None
    k, counting_ok, euclid_ok = {}, True, (True if square is not None else None)
    for m in range(q):
        Rm = R.specialize(m)
        k[m] = square_gcd_degree(Rm)
        if square is not None and gcd(Rm, square).degree != k[m]:
            euclid_ok = False
        ideal = q * q + m
        on_ideal = 1 if ideal in moved else 0
        lines = [int(l) for l in plane.lines_through[ideal] if l != 0]
        expected = sum(min(int(secants[l]) - on_ideal, 2) for l in lines)
        if expected != k[m]:
            counting_ok = False
            log(f"[redei.py.redei_profile] k_{m}={k[m]} but slope-{m} lines give {expected}", VERBOSITY_DEBUG)

    directions = [m for m in range(q) if q * q + m not in moved]
    identity_ok = all(k[m] == 2 * q - int(ind[q * q + m]) for m in directions)
    profile = RedeiProfile(
        q=q,
        frame=frame,
        affine_points=affine,
        k=k,
        directions=directions,
        delta=sum(2 * q - k[m] for m in directions),
        delta_from_index=sum(int(ind[q * q + m]) for m in directions),
        t=report.t,
        size=len(S),
        identity_ok=identity_ok,
        counting_ok=counting_ok,
        euclid_ok=euclid_ok,
        moved=moved,
    )
    log(f"[redei.py.redei_profile] frame {frame.to_dict()} on {plane}: delta={profile.delta}, ok={profile.ok}",
        VERBOSITY_TRACE)
    return profile


# ───────────────────────────────────────────
# SZŐNYI-WEINER
# ───────────────────────────────────────────

@dataclass
class SzWResult:
    k: list
    y0: int
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    def to_dict(self) -> dict:
        return {"k": self.k, "y0": self.y0, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def szonyi_weiner_check(u: BiPoly, v: BiPoly, y0: int) -> SzWResult:
    """
    k_y = deg gcd(u(B, y), v(B, y)) for every y; compares
    sum (k_y - k_y0)^+ with (deg u - k_y0)(deg v - k_y0).
    """
    u._same_field(v)
    if u.is_zero() or v.is_zero():
        raise DegreeUnstable("zero polynomial has no stable degree")
    d = u.degree
    if u.coefficient(d, 0) == 0:
        raise DegreeUnstable(f"B^{d} has zero coefficient, degree drops under substitution")
    ks = []
    for y in u.field.elements():
        g = gcd(u.specialize(y), v.specialize(y))
        ks.append(0 if g.is_zero() else g.degree)
    k0 = ks[y0]
    lhs = sum(max(0, ky - k0) for ky in ks)
    rhs = (d - k0) * (v.degree - k0)
    return SzWResult(k=ks, y0=y0, lhs=lhs, rhs=rhs)


def szonyi_weiner_trials(field: Field, trials: int, seed: int = 0) -> dict:
    """u = Rédei polynomial of a random affine set, v = (B^q - B)^2, random y0."""
    rng = random.Random(seed)
    q = field.order
    v = BiPoly.from_b(Poly.field_polynomial(field) ** 2)
    failures = []
    for trial in range(trials):
        size = rng.randint(1, min(q * q, 3 * q))
        points = [divmod(P, q) for P in sorted(rng.sample(range(q * q), size))]
        y0 = rng.randrange(q)
        result = szonyi_weiner_check(redei_polynomial(points, field), v, y0)
        if not result.holds:
            failures.append({"trial": trial, "points": [list(p) for p in points], **result.to_dict()})
    log(f"[redei.py.szonyi_weiner_trials] GF({q}): {trials - len(failures)}/{trials} hold", VERBOSITY_DEBUG)
    return {"q": q, "trials": trials, "seed": seed, "holds": trials - len(failures), "failures": failures}


# ───────────────────────────────────────────
# INDEX INEQUALITY WITH THE COMPUTED DELTA
# ───────────────────────────────────────────

@dataclass
class DeltaInequality:
    point: int
    ind: int
    beta: int
    profile: RedeiProfile
    slope: int
    szw_lhs: int
    szw_rhs: int

    @property
    def value(self) -> int:
        q = self.profile.q
        return self.ind * self.ind - (q - self.beta) * self.ind + self.profile.delta

    @property
    def holds(self) -> bool:
        return self.value >= 0 and self.szw_lhs <= self.szw_rhs

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "ind": self.ind,
            "beta": self.beta,
            "slope": self.slope,
            "delta": self.profile.delta,
            "value": self.value,
            "szw_lhs": self.szw_lhs,
            "szw_rhs": self.szw_rhs,
            "holds": self.holds,
        }


def check_delta_inequality(A, plane: Plane, P: int) -> DeltaInequality:
    """
    ind(P)^2 - (q - beta) ind(P) + delta >= 0 for P outside a semi-resolving A,
    with delta from the profile in a frame whose line at infinity passes through P.
    Also records both sides of the Szőnyi-Weiner bound at P's slope.
    """
    A = frozenset(int(X) for X in A)
    q = plane.q
    if P in A:
        raise PreconditionUnmet(f"point {P} is in the set")
    if not is_semi_resolving(A, plane).ok:
        raise PreconditionUnmet("check_delta_inequality needs a semi-resolving set")
    beta = len(A) - 2 * q
    if beta > 2 * q - 4:
        raise PreconditionUnmet(f"check_delta_inequality needs beta <= 2q-4, got {beta}")
    ind = int(point_index(A, plane).ind[P])
    if ind > q - 2:
        raise PreconditionUnmet(f"point {P} has index {ind} > q-2")

    profile = redei_profile(A, plane, point=P)
    g = plane.frame_projectivity(profile.frame.line, profile.frame.infinity)
    slope = next(iter(apply_collineation(g, [P], plane))) - q * q
    kp = profile.k[slope]
    lhs = sum(max(0, km - kp) for km in profile.k.values())
    rhs = (len(A) - profile.frame.s - kp) * (2 * q - kp)
    return DeltaInequality(point=P, ind=ind, beta=beta, profile=profile, slope=slope, szw_lhs=lhs, szw_rhs=rhs)
