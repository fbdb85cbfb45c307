"""
Generators for the explicit resolving, semi-resolving and blocking sets.

Every generator returns a `Construction` (a `MixedSet` that also carries its
name, the parameters it used and whether it passed its verifier). Point-set
objects that are inputs to other constructions (hyperoval, conic, Baer
subplanes) are returned as plain frozensets.

## Completions of the S* frame

S* = P*_S u L*_S with P*_S = [e] \\ {P,R,R'} u [f] \\ {P,Q} and
L*_S = [P] \\ {e,f,l0} u [R] \\ {e,l1}. Each id adds two objects:

| Id | Frame | Added |
| --- | --- | --- |
| 1-4 | any | l1 + (l0, R'Q, point Q, point l0^RQ) |
| 5-6 | Q on l1 | (Q, R'Q), (R', l0) |
| 7-8 | Q off l1 | (l0, R'T), (R'Q, R'T) |
| 9-12 | Q off l1 | R' + (f, UQ, l0, U.l0^RQ) |
| 13-32 | Q off l1 | one line, one point, with an incidence side condition |

U is a point of [e] \\ {P,R,R'}, V a point of [f], Z an extra free point.
"""

from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from clilog import log, VERBOSITY_DEBUG, VERBOSITY_TRACE
from .errors import (
    CollinearPoints,
    InvalidId,
    NotASquare,
    NotDisjointBlockingPair,
    NotDoubleBlocking,
    OddOrder,
    OrderTooSmall,
    SideConditionInfeasible,
    WrongOrder,
)
from .galois import field_of_order, subfield_embedding
from .plane import Plane, orbits
from .resolve import (
    MixedSet,
    is_blocking,
    is_double_blocking,
    is_resolving,
    is_semi_resolving,
    is_split_resolving,
    secant_profile,
    VerifyReport,
    Violation,
)

RESOLVING = "resolving"
SEMI_RESOLVING = "semi_resolving"
SPLIT = "split"
DOUBLE_BLOCKING = "double_blocking"


@dataclass(frozen=True, eq=False)
class Construction(MixedSet):
    name: str = ""
    q: int = 0
    kind: str = RESOLVING
    params: dict = field(default_factory=dict)
    verified: bool = False

    def to_dict(self) -> dict:
        return {
            "construction": self.name,
            "q": self.q,
            "kind": self.kind,
            "params": self.params,
            "points": self.sorted_points(),
            "lines": self.sorted_lines(),
            "verified": self.verified,
        }


def verify_kind(kind: str, S: MixedSet, plane: Plane):
    """The verifier report matching a construction kind."""
    match kind:
        case "resolving":
            return is_resolving(S, plane)
        case "semi_resolving":
            return is_semi_resolving(S.points, plane)
        case "split":
            return is_split_resolving(S.points, S.lines, plane)
        case "double_blocking":
            profile = secant_profile(S.points, plane)
            bad = [l for l in range(plane.n) if profile.secants[l] < 2]
            return VerifyReport.from_violations([Violation("UnderBlockedLine", (l,)) for l in bad[:1]],
                                                histogram=profile.histogram)
    raise ValueError(f"unknown construction kind {kind!r}")


def _finish(name: str, plane: Plane, points, lines=(), kind: str = RESOLVING, **params) -> Construction:
    S = MixedSet(points, lines)
    report = verify_kind(kind, S, plane)
    if not report.ok:
        log(f"[construct.py._finish] {name} on {plane} failed verification: {report.to_dict()['violations']}",
            VERBOSITY_DEBUG)
    log(f"[construct.py._finish] {name} on {plane}: size {len(S)}, verified={report.ok}", VERBOSITY_TRACE)
    return Construction(points=S.points, lines=S.lines, name=name, q=plane.q, kind=kind,
                        params=params, verified=report.ok)


# ───────────────────────────────────────────
# RESOLVING SETS
# ───────────────────────────────────────────

def _first_noncollinear(plane: Plane) -> tuple[int, int, int]:
    P, Q = 0, 1
    R = next(X for X in range(plane.n) if not plane.collinear(P, Q, X))
    return P, Q, R


def canonical_4q4(plane: Plane, P: int = None, Q: int = None, R: int = None) -> Construction:
    """P_S = [PQ] u [PR] \\ {P,Q,R}, L_S = [P] u [R] \\ {PQ,PR,RQ}; size 4q-4."""
    if plane.q < 3:
        raise OrderTooSmall(f"canonical construction needs q >= 3, got {plane.q}")
    if P is None or Q is None or R is None:
        P, Q, R = _first_noncollinear(plane)
    if plane.collinear(P, Q, R):
        raise CollinearPoints(f"points {P}, {Q}, {R} are collinear")
    PQ, PR, RQ = plane.line_through(P, Q), plane.line_through(P, R), plane.line_through(R, Q)
    points = (set(plane.points_on[PQ].tolist()) | set(plane.points_on[PR].tolist())) - {P, Q, R}
    lines = (set(plane.lines_through[P].tolist()) | set(plane.lines_through[R].tolist())) - {PQ, PR, RQ}
    return _finish("canonical", plane, points, lines, P=P, Q=Q, R=R)


def fano_resolving5(plane: Plane) -> Construction:
    """Two lines, a point on each away from their meet, and an uncovered point off the join of those two."""
    if plane.q != 2:
        raise WrongOrder(f"the Fano construction needs q = 2, got {plane.q}")
    l1, l2 = 0, 1
    X = plane.meet(l1, l2)
    A = min(P for P in plane.points_on[l1].tolist() if P != X)
    B = min(P for P in plane.points_on[l2].tolist() if P != X)
    covered = set(plane.points_on[l1].tolist()) | set(plane.points_on[l2].tolist())
    AB = plane.line_through(A, B)
    C = min(P for P in range(plane.n) if P not in covered and not plane.incident(P, AB))
    return _finish("fano5", plane, {A, B, C}, {l1, l2}, l1=l1, l2=l2, A=A, B=B, C=C)


def conic(plane: Plane) -> frozenset[int]:
    """Points of xz = y^2: (y^2 : y : 1) and (1:0:0)."""
    F, q = plane.field, plane.q
    return frozenset([F.mul(y, y) * q + y for y in F.elements()] + [q * q])


def hyperoval(plane: Plane) -> frozenset[int]:
    """Conic xz = y^2 together with its nucleus (0:1:0); q even."""
    if plane.q % 2:
        raise OddOrder(f"hyperovals need even q, got {plane.q}")
    return conic(plane) | {plane.q * plane.q + plane.q}


def hyperoval_resolving10(plane: Plane) -> Construction:
    """O \\ {P} as points and the skew lines of O minus one as lines; q = 4."""
    if plane.q != 4:
        raise WrongOrder(f"the hyperoval construction needs q = 4, got {plane.q}")
    O = hyperoval(plane)
    skew = secant_profile(O, plane).skew_lines
    P, l = min(O), min(skew)
    return _finish("hyperoval10", plane, O - {P}, set(skew) - {l}, dropped_point=P, dropped_line=l)


# ───────────────────────────────────────────
# S* FRAME AND C1-C32
# ───────────────────────────────────────────

@dataclass(frozen=True)
class SStarFrame:
    e: int
    f: int
    P: int
    R: int
    R2: int
    Q: int
    l0: int
    l1: int
    plane: Plane = field(repr=False, compare=False)

    @property
    def q_on_l1(self) -> bool:
        return self.plane.incident(self.Q, self.l1)

    @property
    def T(self) -> int | None:
        return None if self.q_on_l1 else self.plane.meet(self.f, self.l1)

    @property
    def points(self) -> frozenset[int]:
        pl = self.plane
        return frozenset((set(pl.points_on[self.e].tolist()) - {self.P, self.R, self.R2})
                         | (set(pl.points_on[self.f].tolist()) - {self.P, self.Q}))

    @property
    def lines(self) -> frozenset[int]:
        pl = self.plane
        return frozenset((set(pl.lines_through[self.P].tolist()) - {self.e, self.f, self.l0})
                         | (set(pl.lines_through[self.R].tolist()) - {self.e, self.l1}))

    def to_dict(self) -> dict:
        named = {k: getattr(self, k) for k in ("e", "f", "P", "R", "R2", "Q", "l0", "l1")}
        named["T"] = self.T
        return named


def _check_frame(plane: Plane, e, f, R, R2, Q, l0, l1) -> str | None:
    """Reason the assignment is not an S* frame, or None."""
    if e == f:
        return "e and f coincide"
    P = plane.meet(e, f)
    if not plane.incident(R, e) or not plane.incident(R2, e) or len({P, R, R2}) < 3:
        return "R and R' must be distinct points of e other than P"
    if not plane.incident(Q, f) or Q == P:
        return "Q must be a point of f other than P"
    if not plane.incident(P, l0) or l0 in (e, f):
        return "l0 must be a line through P other than e and f"
    if not plane.incident(R, l1) or l1 == e:
        return "l1 must be a line through R other than e"
    return None


def s_star(plane: Plane, e: int = None, f: int = None, R: int = None, R2: int = None,
           Q: int = None, l0: int = None, l1: int = None) -> SStarFrame:
    """The S* frame; unspecified objects take their smallest admissible index."""
    if plane.q < 3:
        raise OrderTooSmall(f"the S* frame needs q >= 3, got {plane.q}")
    e = 0 if e is None else e
    f = next(l for l in range(plane.n) if l != e) if f is None else f
    if e == f:
        raise SideConditionInfeasible(None, "e and f coincide")
    P = plane.meet(e, f)
    on_e = [X for X in plane.points_on[e].tolist() if X != P]
    R = on_e[0] if R is None else R
    R2 = next(X for X in on_e if X != R) if R2 is None else R2
    Q = next(X for X in plane.points_on[f].tolist() if X != P) if Q is None else Q
    l0 = next(l for l in plane.lines_through[P].tolist() if l not in (e, f)) if l0 is None else l0
    l1 = next(l for l in plane.lines_through[R].tolist() if l != e) if l1 is None else l1
    reason = _check_frame(plane, e, f, R, R2, Q, l0, l1)
    if reason:
        raise SideConditionInfeasible(None, reason)
    return SStarFrame(e, f, P, R, R2, Q, l0, l1, plane)


class _Named:
    """Derived points and lines of a frame, computed on first use."""

    def __init__(self, frame: SStarFrame):
        self.frame = frame
        self.plane = frame.plane
        self._cache = {}

    def _get(self, key, compute):
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    def on(self, point, line) -> bool:
        return self.plane.incident(point, line)

    @property
    def T(self):
        return self._get("T", lambda: self.frame.T)

    @property
    def RQ(self):
        return self._get("RQ", lambda: self.plane.line_through(self.frame.R, self.frame.Q))

    @property
    def R2Q(self):
        return self._get("R2Q", lambda: self.plane.line_through(self.frame.R2, self.frame.Q))

    @property
    def R2T(self):
        return self._get("R2T", lambda: self.plane.line_through(self.frame.R2, self.T))

    @property
    def X01(self):
        return self._get("X01", lambda: self.plane.meet(self.frame.l0, self.frame.l1))

    @property
    def X0RQ(self):
        return self._get("X0RQ", lambda: self.plane.meet(self.frame.l0, self.RQ))

    def U_choices(self):
        fr = self.frame
        return [X for X in self.plane.points_on[fr.e].tolist() if X not in (fr.P, fr.R, fr.R2)]

    def points_of(self, line, *excluded):
        return [X for X in self.plane.points_on[line].tolist() if X not in excluded]


# Each recipe yields (extra params, added points, added lines) for every
# admissible choice, in index order.

def _c1(n):
    yield {}, (), (n.frame.l1, n.frame.l0)


def _c2(n):
    yield {}, (), (n.frame.l1, n.R2Q)


def _c3(n):
    yield {}, (n.frame.Q,), (n.frame.l1,)


def _c4(n):
    yield {}, (n.X0RQ,), (n.frame.l1,)


def _c5(n):
    yield {}, (n.frame.Q,), (n.R2Q,)


def _c6(n):
    yield {}, (n.frame.R2,), (n.frame.l0,)


def _c7(n):
    yield {}, (), (n.frame.l0, n.R2T)


def _c8(n):
    yield {}, (), (n.R2Q, n.R2T)


def _c9(n):
    yield {}, (n.frame.R2,), (n.frame.f,)


def _c10(n):
    for U in n.U_choices():
        yield {"U": U}, (n.frame.R2,), (n.plane.line_through(U, n.frame.Q),)


def _c11(n):
    yield {}, (n.frame.R2,), (n.frame.l0,)


def _c12(n):
    for U in n.U_choices():
        yield {"U": U}, (n.frame.R2,), (n.plane.line_through(U, n.X0RQ),)


def _c13(n):
    if n.on(n.X0RQ, n.R2T):
        yield {}, (n.X0RQ,), (n.frame.e,)


def _c14(n):
    if not n.on(n.X01, n.R2Q):
        yield {}, (n.X01,), (n.frame.f,)


def _c15(n):
    for Z in n.points_of(n.frame.l1, n.T):
        yield {"Z": Z}, (Z,), (n.frame.l0,)


def _c16(n):
    for Z in n.points_of(n.R2T, n.T, n.frame.R2):
        yield {"Z": Z}, (Z,), (n.frame.l0,)


def _c17(n):
    if not n.on(n.X0RQ, n.R2T):
        return
    for U in n.U_choices():
        UV = n.plane.line_through(U, n.X01)
        V = n.plane.meet(UV, n.frame.f)
        if V not in (n.frame.P, n.frame.Q):
            yield {"U": U, "V": V}, (n.X0RQ,), (UV,)


def _c18(n):
    if n.on(n.X01, n.R2Q):
        return
    for U in n.U_choices():
        UV = n.plane.line_through(U, n.X0RQ)
        V = n.plane.meet(UV, n.frame.f)
        if V not in (n.frame.P, n.frame.Q):
            yield {"U": U, "V": V}, (n.X01,), (UV,)


def _c19(n):
    if n.on(n.X01, n.R2Q):
        return
    for U in n.U_choices():
        UQ = n.plane.line_through(U, n.frame.Q)
        if not n.on(n.X01, UQ):
            yield {"U": U}, (n.X01,), (UQ,)


def _u_through_x01(n):
    fr = n.frame
    UQ = n.plane.line_through(fr.Q, n.X01)
    U = n.plane.meet(UQ, fr.e)
    return (U, UQ) if U not in (fr.P, fr.R, fr.R2) else (None, None)


def _c20(n):
    U, UQ = _u_through_x01(n)
    if U is not None:
        yield {"U": U}, (n.X01,), (UQ,)


def _c21(n):
    U, UQ = _u_through_x01(n)
    if U is not None:
        yield {"U": U}, (n.plane.meet(n.frame.l0, n.R2T),), (UQ,)


def _c22(n):
    U, UQ = _u_through_x01(n)
    if U is not None:
        yield {"U": U}, (n.plane.meet(n.frame.l1, n.R2Q),), (UQ,)


def _c23(n):
    if n.on(n.X01, n.R2Q):
        yield {}, (n.X01,), (n.R2Q,)


def _c24(n):
    if not n.on(n.X0RQ, n.R2T):
        return
    fr = n.frame
    for V in n.points_of(fr.f, fr.P, n.T, fr.Q):
        R2V = n.plane.line_through(fr.R2, V)
        if not n.on(n.X01, R2V) and not n.on(n.X0RQ, R2V):
            yield {"V": V}, (n.X0RQ,), (R2V,)


def _v_through_x0rq(n):
    fr = n.frame
    R2V = n.plane.line_through(fr.R2, n.X0RQ)
    V = n.plane.meet(R2V, fr.f)
    if V in (fr.P, n.T, fr.Q) or n.on(n.X01, R2V):
        return None, None
    return V, R2V


def _c25(n):
    V, R2V = _v_through_x0rq(n)
    if V is not None:
        yield {"V": V}, (n.plane.meet(n.frame.l0, n.R2T),), (R2V,)


def _c26(n):
    V, R2V = _v_through_x0rq(n)
    if V is not None and not n.on(n.X01, n.R2Q):
        yield {"V": V}, (n.X01,), (R2V,)


def _c27(n):
    V, R2V = _v_through_x0rq(n)
    if V is not None and not n.on(n.X01, n.R2Q):
        yield {"V": V}, (n.plane.meet(n.frame.l1, n.R2Q),), (R2V,)


def _c28(n):
    if not n.on(n.X0RQ, n.R2T):
        yield {}, (n.X0RQ,), (n.R2T,)


def _c29(n):
    if not n.on(n.X0RQ, n.R2T):
        return
    avoid = n.plane.meet(n.frame.l0, n.R2Q)
    for Z in n.points_of(n.frame.l0, avoid):
        yield {"Z": Z}, (Z,), (n.R2T,)


def _c30(n):
    if not n.on(n.X0RQ, n.R2T):
        return
    avoid = n.plane.meet(n.frame.l0, n.R2Q)
    for Z in n.points_of(n.R2Q, avoid, n.frame.R2, n.frame.Q):
        yield {"Z": Z}, (Z,), (n.R2T,)


def _c31(n):
    if n.on(n.X01, n.R2Q):
        return
    for Z in n.points_of(n.frame.l1, n.T):
        yield {"Z": Z}, (Z,), (n.R2Q,)


def _c32(n):
    if n.on(n.X01, n.R2Q):
        return
    for Z in n.points_of(n.R2T, n.T, n.frame.R2):
        yield {"Z": Z}, (Z,), (n.R2Q,)


@dataclass(frozen=True)
class Recipe:
    cid: int
    frame: str               # "any", "on" (Q on l1) or "off" (Q off l1)
    added: tuple[str, str]   # symbolic names of the two added objects
    complete: object


RECIPES = {r.cid: r for r in (
    Recipe(1, "any", ("line l1", "line l0"), _c1),
    Recipe(2, "any", ("line l1", "line R'Q"), _c2),
    Recipe(3, "any", ("line l1", "point Q"), _c3),
    Recipe(4, "any", ("line l1", "point l0^RQ"), _c4),
    Recipe(5, "on", ("point Q", "line R'Q"), _c5),
    Recipe(6, "on", ("point R'", "line l0"), _c6),
    Recipe(7, "off", ("line l0", "line R'T"), _c7),
    Recipe(8, "off", ("line R'Q", "line R'T"), _c8),
    Recipe(9, "off", ("point R'", "line f"), _c9),
    Recipe(10, "off", ("point R'", "line UQ"), _c10),
    Recipe(11, "off", ("point R'", "line l0"), _c11),
    Recipe(12, "off", ("point R'", "line U.(l0^RQ)"), _c12),
    Recipe(13, "off", ("line e", "point l0^RQ"), _c13),
    Recipe(14, "off", ("line f", "point l0^l1"), _c14),
    Recipe(15, "off", ("line l0", "point Z on l1"), _c15),
    Recipe(16, "off", ("line l0", "point Z on R'T"), _c16),
    Recipe(17, "off", ("line UV through l0^l1", "point l0^RQ"), _c17),
    Recipe(18, "off", ("line UV through l0^RQ", "point l0^l1"), _c18),
    Recipe(19, "off", ("line UQ missing l0^l1", "point l0^l1"), _c19),
    Recipe(20, "off", ("line UQ through l0^l1", "point l0^l1"), _c20),
    Recipe(21, "off", ("line UQ through l0^l1", "point l0^R'T"), _c21),
    Recipe(22, "off", ("line UQ through l0^l1", "point l1^R'Q"), _c22),
    Recipe(23, "off", ("line R'Q through l0^l1", "point l0^l1"), _c23),
    Recipe(24, "off", ("line R'V missing l0^RQ", "point l0^RQ"), _c24),
    Recipe(25, "off", ("line R'V through l0^RQ", "point l0^R'T"), _c25),
    Recipe(26, "off", ("line R'V through l0^RQ", "point l0^l1"), _c26),
    Recipe(27, "off", ("line R'V through l0^RQ", "point l1^R'Q"), _c27),
    Recipe(28, "off", ("line R'T missing l0^RQ", "point l0^RQ"), _c28),
    Recipe(29, "off", ("line R'T", "point Z on l0"), _c29),
    Recipe(30, "off", ("line R'T", "point Z on R'Q"), _c30),
    Recipe(31, "off", ("line R'Q missing l0^l1", "point Z on l1"), _c31),
    Recipe(32, "off", ("line R'Q", "point Z on R'T"), _c32),
)}

_FRAME_KEYS = ("e", "f", "R", "R2", "Q", "l0", "l1")
_EXTRA_KEYS = ("U", "V", "Z")


def _frames(plane: Plane, recipe: Recipe, fixed: dict):
    """S* frames compatible with `fixed`, in index order (R', then l0, then l1)."""
    base = s_star(plane, **{k: fixed.get(k) for k in ("e", "f", "R", "Q")})
    P = base.P
    R2s = [fixed["R2"]] if "R2" in fixed else [X for X in plane.points_on[base.e].tolist() if X not in (P, base.R)]
    l0s = [fixed["l0"]] if "l0" in fixed else [l for l in plane.lines_through[P].tolist() if l not in (base.e, base.f)]
    l1s = [fixed["l1"]] if "l1" in fixed else [l for l in plane.lines_through[base.R].tolist() if l != base.e]
    for R2 in R2s:
        for l0 in l0s:
            for l1 in l1s:
                q_on_l1 = plane.incident(base.Q, l1)
                if (recipe.frame == "on" and not q_on_l1) or (recipe.frame == "off" and q_on_l1):
                    continue
                if _check_frame(plane, base.e, base.f, base.R, R2, base.Q, l0, l1):
                    continue
                yield SStarFrame(base.e, base.f, P, base.R, R2, base.Q, l0, l1, plane)


def construction_C(cid: int, plane: Plane, **params) -> Construction:
    """
    S* completed by the two objects of recipe `cid`. Frame objects and extras
    (U, V, Z) not given in `params` are the first ones in index order whose
    completion verifies as resolving.
    """
    if cid not in RECIPES:
        raise InvalidId(f"construction id must be in 1..32, got {cid}")
    if plane.q < 3:
        raise OrderTooSmall(f"C-constructions need q >= 3, got {plane.q}")
    recipe = RECIPES[cid]
    fixed = {k: v for k, v in params.items() if v is not None}
    unknown = set(fixed) - set(_FRAME_KEYS) - set(_EXTRA_KEYS)
    if unknown:
        raise SideConditionInfeasible(cid, f"unknown parameters {sorted(unknown)}")
    admissible = 0
    try:
        frames = _frames(plane, recipe, fixed)
        for frame in frames:
            named = _Named(frame)
            for extras, points, lines in recipe.complete(named):
                if any(k in fixed and fixed[k] != v for k, v in extras.items()):
                    continue
                admissible += 1
                assignment = frame.to_dict()
                assignment.update(extras)
                built = _finish(f"C{cid}", plane, frame.points | set(points), frame.lines | set(lines),
                                id=cid, added=list(recipe.added), **assignment)
                if built.verified:
                    log(f"[construct.py.construction_C] C{cid} on {plane} with {assignment}", VERBOSITY_DEBUG)
                    return built
                log(f"[construct.py.construction_C] C{cid} with {assignment} does not resolve, next frame",
                    VERBOSITY_TRACE)
    except SideConditionInfeasible as exc:
        raise SideConditionInfeasible(cid, exc.reason) from exc
    if admissible:
        raise SideConditionInfeasible(cid, f"none of {admissible} admissible frames on {plane} resolves")
    raise SideConditionInfeasible(cid, f"no admissible frame on {plane} with {fixed}")


DUAL_IDS = (1, 2, 7, 8)


def dual_construction(cid: int, plane: Plane, **params) -> Construction:
    """Dual of C1, C2, C7 or C8: more points than lines."""
    if cid not in DUAL_IDS:
        raise InvalidId(f"dual constructions exist for ids {DUAL_IDS}, got {cid}")
    base = construction_C(cid, plane, **params)
    return _finish(f"C{cid}-dual", plane, base.lines, base.points, **base.params)


# ───────────────────────────────────────────
# BAER SUBPLANES AND SEMI-RESOLVING SETS
# ───────────────────────────────────────────

def _root(plane: Plane) -> int:
    r = isqrt(plane.q)
    if r * r != plane.q:
        raise NotASquare(f"q = {plane.q} is not a square")
    return r


def baer_subplane(plane: Plane) -> frozenset[int]:
    """Points whose canonical coordinates all lie in the subfield GF(sqrt q)."""
    r = _root(plane)
    F = plane.field
    embedding = subfield_embedding(F, field_of_order(r))
    in_subfield = np.zeros(plane.q, dtype=bool)
    in_subfield[list(embedding.image_set())] = True
    return frozenset(np.flatnonzero(in_subfield[plane.coords].all(axis=1)).tolist())


def _permutation_power(perm: np.ndarray, k: int) -> np.ndarray:
    result = np.arange(len(perm))
    base = perm
    while k:
        if k & 1:
            result = base[result]
        base = base[base]
        k >>= 1
    return result


def baer_partition(plane: Plane) -> list[frozenset[int]]:
    """Orbits of the Singer subgroup of order q + sqrt q + 1: q - sqrt q + 1 disjoint Baer subplanes."""
    r = _root(plane)
    sigma = _permutation_power(plane.singer_cycle(), plane.q - r + 1)
    parts = [frozenset(o) for o in orbits([sigma], plane.n)]
    log(f"[construct.py.baer_partition] {len(parts)} parts of size {r * r + r + 1} on {plane}", VERBOSITY_DEBUG)
    return parts


def disjoint_baer_pair(plane: Plane) -> tuple[frozenset[int], frozenset[int]]:
    parts = baer_partition(plane)
    return parts[0], parts[1]


def semi_from_double_blocking(plane: Plane, B=None, drop=None, parts=None) -> Construction:
    """
    With `B` double blocking: B minus one point (default its smallest).
    With `parts` = (B1, B2) disjoint blocking sets: their union minus one
    point from each (default the smallest of each).
    """
    if parts is not None:
        B1, B2 = (frozenset(p) for p in parts)
        if B1 & B2 or not is_blocking(B1, plane) or not is_blocking(B2, plane):
            raise NotDisjointBlockingPair("parts must be two disjoint blocking sets")
        drop = (min(B1), min(B2)) if drop is None else tuple(drop)
        if len(drop) != 2 or not ((drop[0] in B1 and drop[1] in B2) or (drop[0] in B2 and drop[1] in B1)):
            raise NotDisjointBlockingPair(f"drop one point from each part, got {drop}")
        return _finish("semi-from-pair", plane, (B1 | B2) - set(drop), kind=SEMI_RESOLVING, dropped=sorted(drop))
    B = frozenset(B)
    if not is_double_blocking(B, plane):
        raise NotDoubleBlocking(f"set of size {len(B)} is not double blocking")
    drop = min(B) if drop is None else drop
    if isinstance(drop, (tuple, list, set, frozenset)):
        if len(drop) != 1:
            raise NotDisjointBlockingPair("dropping two points needs the two-part structure")
        (drop,) = tuple(drop)
    return _finish("semi-from-2bl", plane, B - {drop}, kind=SEMI_RESOLVING, dropped=[drop])


def baer_pair_semi(plane: Plane) -> Construction:
    """Two disjoint Baer subplanes minus one point each; size 2q + 2 sqrt q."""
    return semi_from_double_blocking(plane, parts=disjoint_baer_pair(plane))


def baer_pair_double_blocking(plane: Plane) -> Construction:
    B1, B2 = disjoint_baer_pair(plane)
    return _finish("baer-pair", plane, B1 | B2, kind=DOUBLE_BLOCKING)


def _triangle(plane: Plane):
    a, b = 0, 1
    c = next(l for l in range(plane.n) if not plane.incident(plane.meet(a, b), l))
    vertices = {plane.meet(a, b), plane.meet(a, c), plane.meet(b, c)}
    points = set()
    for l in (a, b, c):
        points |= set(plane.points_on[l].tolist())
    return (a, b, c), points, vertices


def vertexless_triangle(plane: Plane, drop_extra: bool = False) -> Construction:
    """Points of three non-concurrent lines minus the vertices (3q-3), minus one more point if asked (3q-4)."""
    if plane.q < 3 or (drop_extra and plane.q < 4):
        raise OrderTooSmall(f"vertexless triangle needs q >= {4 if drop_extra else 3}, got {plane.q}")
    sides, points, vertices = _triangle(plane)
    points -= vertices
    extra = min(points) if drop_extra else None
    if drop_extra:
        points.discard(extra)
    return _finish("vertexless-triangle", plane, points, kind=SEMI_RESOLVING,
                   sides=list(sides), dropped=extra)


def three_line_double_blocking(plane: Plane) -> Construction:
    sides, points, _ = _triangle(plane)
    return _finish("three-lines", plane, points, kind=DOUBLE_BLOCKING, sides=list(sides))


def split_from_semi(A, plane: Plane) -> Construction:
    """A together with its dual line set; size 2|A|."""
    A = frozenset(A.points if isinstance(A, MixedSet) else A)
    return _finish("split-from-semi", plane, A, A, kind=SPLIT)
