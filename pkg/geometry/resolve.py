"""
Verifiers for resolving, semi-resolving, split resolving and blocking sets.

Vertices of the incidence graph are numbered points first: point P is vertex P,
line l is vertex n + l. A resolving set is a `MixedSet` of point and line
indices.

## Criteria checked by `is_resolving`

| Kind | Property |
| --- | --- |
| SkewLinePair | at most one outer line skew to the point part |
| UncoveredPointPair | at most one outer point not covered by the line part |
| TangentPairThroughInnerPoint | through an inner point at most one outer tangent |
| OneCoveredPairOnInnerLine | on an inner line at most one outer 1-covered point |

`is_resolving_naive` compares distance lists directly and is the test oracle
for all of the above.
"""

from dataclasses import dataclass, field
from math import ceil

import numpy as np

from clilog import log, VERBOSITY_DEBUG, VERBOSITY_TRACE
from .errors import NoValidFrame, PreconditionUnmet
from .plane import Plane, dualize

SKEW_LINE_PAIR = "SkewLinePair"
UNCOVERED_POINT_PAIR = "UncoveredPointPair"
TANGENT_PAIR = "TangentPairThroughInnerPoint"
ONE_COVERED_PAIR = "OneCoveredPairOnInnerLine"
COLLIDING_VERTEX_PAIR = "CollidingVertexPair"
COLLIDING_LINE_PAIR = "CollidingLinePair"


# ───────────────────────────────────────────
# TYPES
# ───────────────────────────────────────────

@dataclass(frozen=True)
class MixedSet:
    points: frozenset = frozenset()
    lines: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "points", frozenset(int(i) for i in self.points))
        object.__setattr__(self, "lines", frozenset(int(i) for i in self.lines))

    def __len__(self):
        return len(self.points) + len(self.lines)

    @property
    def size(self) -> int:
        return len(self)

    def sorted_points(self) -> list[int]:
        return sorted(self.points)

    def sorted_lines(self) -> list[int]:
        return sorted(self.lines)

    def with_points(self, *points) -> "MixedSet":
        return MixedSet(self.points | set(points), self.lines)

    def with_lines(self, *lines) -> "MixedSet":
        return MixedSet(self.points, self.lines | set(lines))

    def to_dict(self) -> dict:
        return {"points": self.sorted_points(), "lines": self.sorted_lines()}


@dataclass(frozen=True)
class Violation:
    kind: str
    witnesses: tuple

    def to_dict(self) -> dict:
        return {"kind": self.kind, "witnesses": [int(w) for w in self.witnesses]}


@dataclass
class VerifyReport:
    ok: bool
    violations: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @classmethod
    def from_violations(cls, violations, **stats) -> "VerifyReport":
        return cls(ok=not violations, violations=list(violations), stats=stats)

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
            "stats": self.stats,
        }


@dataclass
class SecantProfile:
    secants: np.ndarray          # points of A on each line
    histogram: list[int]         # n_i for i = 0..q+1

    @property
    def is_blocking(self) -> bool:
        return self.histogram[0] == 0

    @property
    def is_double_blocking(self) -> bool:
        return self.histogram[0] == 0 and self.histogram[1] == 0

    @property
    def skew_lines(self) -> list[int]:
        return np.flatnonzero(self.secants == 0).tolist()

    @property
    def tangent_lines(self) -> list[int]:
        return np.flatnonzero(self.secants == 1).tolist()

    def to_dict(self) -> dict:
        return {
            "histogram": self.histogram,
            "is_blocking": self.is_blocking,
            "is_double_blocking": self.is_double_blocking,
        }


@dataclass
class IndexReport:
    ind0: np.ndarray
    ind1: np.ndarray
    secants: np.ndarray
    size: int
    q: int

    @property
    def ind(self) -> np.ndarray:
        return 2 * self.ind0 + self.ind1

    @property
    def t(self) -> int:
        """Tangents plus twice the skew lines."""
        return int((self.secants == 1).sum() + 2 * (self.secants == 0).sum())

    @property
    def beta(self) -> int:
        return self.size - 2 * self.q

    def to_dict(self) -> dict:
        return {
            "ind": self.ind.tolist(),
            "t": self.t,
            "beta": self.beta,
        }


@dataclass(frozen=True)
class Frame:
    """An s-secant through P used as the line at infinity, and its point (infinity) outside the set."""
    line: int
    s: int
    infinity: int

    def to_dict(self) -> dict:
        return {"linf_index": self.line, "s": self.s, "infinity": self.infinity}


@dataclass
class IndexInequality:
    point: int
    ind: int
    frame: Frame
    with_t: int
    with_size: int

    @property
    def holds(self) -> bool:
        return self.with_t >= 0 and self.with_size >= 0

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "ind": self.ind,
            "frame": self.frame.to_dict(),
            "with_t": self.with_t,
            "with_size": self.with_size,
        }


@dataclass
class DichotomyReport:
    small_limit: int
    large_limit: int
    violations: list[int]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "small_limit": self.small_limit,
            "large_limit": self.large_limit,
            "violations": self.violations,
            "ok": self.ok,
        }


@dataclass
class IndexInequalityReport:
    t: int
    beta: int
    evaluations: list[IndexInequality]
    dichotomy: DichotomyReport | None = None

    @property
    def ok(self) -> bool:
        return all(e.holds for e in self.evaluations) and (self.dichotomy is None or self.dichotomy.ok)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "t": self.t,
            "beta": self.beta,
            "evaluations": [e.to_dict() for e in self.evaluations],
            "dichotomy": self.dichotomy.to_dict() if self.dichotomy else None,
        }


@dataclass
class SemiovalReport:
    is_semioval: bool
    is_blocking_semioval: bool
    bound_margin: int

    def to_dict(self) -> dict:
        return {
            "is_semioval": self.is_semioval,
            "is_blocking_semioval": self.is_blocking_semioval,
            "bound_margin": self.bound_margin,
        }


@dataclass
class LargeIndexReport:
    large_points: list[int]
    tangents_blocked: bool
    union_double_blocking: bool
    semioval_bound: bool | None

    @property
    def ok(self) -> bool:
        return (len(self.large_points) <= 2 and self.tangents_blocked
                and self.union_double_blocking and self.semioval_bound is not False)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "large_points": self.large_points,
            "tangents_blocked": self.tangents_blocked,
            "union_double_blocking": self.union_double_blocking,
            "semioval_bound": self.semioval_bound,
        }


# ───────────────────────────────────────────
# DISTANCES
# ───────────────────────────────────────────

def distance(u: int, v: int, plane: Plane) -> int:
    """Distance in the incidence graph; vertex n + l is line l."""
    if u == v:
        return 0
    n = plane.n
    if (u < n) == (v < n):
        return 2
    point, line = (u, v - n) if u < n else (v, u - n)
    return 1 if plane.incident(point, line) else 3


def distance_rows(S: MixedSet, plane: Plane) -> np.ndarray:
    """Distance list of every vertex w.r.t. S (points of S, then lines of S, ascending)."""
    n = plane.n
    inc = plane.incidence_matrix()
    pts, lns = S.sorted_points(), S.sorted_lines()
    pp = np.full((n, len(pts)), 2, dtype=np.int8)
    pp[pts, np.arange(len(pts))] = 0
    ll = np.full((n, len(lns)), 2, dtype=np.int8)
    ll[lns, np.arange(len(lns))] = 0
    pl = np.where(inc[:, lns], 1, 3).astype(np.int8)
    lp = np.where(inc[pts, :].T, 1, 3).astype(np.int8)
    return np.vstack([np.hstack([pp, pl]), np.hstack([lp, ll])])


def _first_collision(rows: np.ndarray):
    seen = {}
    for v, row in enumerate(rows):
        key = row.tobytes()
        if key in seen:
            return seen[key], v
        seen[key] = v
    return None


# ───────────────────────────────────────────
# RESOLVING SETS
# ───────────────────────────────────────────

def _masks(S: MixedSet, plane: Plane):
    return plane.point_mask(S.points), plane.point_mask(S.lines)


def _one_side(adjacency, mask, outer, skew_kind, tangent_kind) -> list[Violation]:
    """
    Skew/tangent violations of `mask` against the rows of `adjacency`
    (points on lines, or dually lines through points). Only rows flagged
    `outer` count.
    """
    hits = mask[adjacency]
    counts = hits.sum(axis=1)
    violations = []
    skew = np.flatnonzero((counts == 0) & outer)
    if len(skew) > 1:
        violations.append(Violation(skew_kind, tuple(skew.tolist())))
    tangents = np.flatnonzero((counts == 1) & outer)
    if len(tangents):
        touch = (hits[tangents] * adjacency[tangents]).sum(axis=1)
        values, multiplicity = np.unique(touch, return_counts=True)
        for centre in values[multiplicity > 1].tolist():
            violations.append(Violation(tangent_kind, (centre, *tangents[touch == centre].tolist())))
    return violations


def is_resolving(S: MixedSet, plane: Plane) -> VerifyReport:
    pmask, lmask = _masks(S, plane)
    violations = _one_side(plane.points_on, pmask, ~lmask, SKEW_LINE_PAIR, TANGENT_PAIR)
    violations += _one_side(plane.lines_through, lmask, ~pmask, UNCOVERED_POINT_PAIR, ONE_COVERED_PAIR)
    log(f"[resolve.py.is_resolving] |S|={len(S)} on {plane}: {len(violations)} violation(s)", VERBOSITY_TRACE)
    return VerifyReport.from_violations(violations, sizes={"points": len(S.points), "lines": len(S.lines)})


def is_resolving_naive(S: MixedSet, plane: Plane) -> VerifyReport:
    stats = {"sizes": {"points": len(S.points), "lines": len(S.lines)}}
    if len(S) == 0:
        return VerifyReport(False, [Violation(COLLIDING_VERTEX_PAIR, (0, 1))], stats)
    pair = _first_collision(distance_rows(S, plane))
    violations = [Violation(COLLIDING_VERTEX_PAIR, pair)] if pair else []
    return VerifyReport.from_violations(violations, **stats)


def is_resolving_local(S: MixedSet, plane: Plane) -> VerifyReport:
    """
    Local form: through any point at most one outer line missing the other
    inner points, and dually on any line at most one outer point missed by the
    other inner lines.
    """
    pmask, lmask = _masks(S, plane)
    violations = []
    # (rows of x, rows of the opposite type, mask of x's type, mask of the opposite type)
    for adjacency, partners, own, other, kind in (
        (plane.lines_through, plane.points_on, pmask, lmask, SKEW_LINE_PAIR),
        (plane.points_on, plane.lines_through, lmask, pmask, UNCOVERED_POINT_PAIR),
    ):
        counts = own[partners].sum(axis=1)
        unblocked = (counts[adjacency] - own[:, None].astype(int) == 0) & ~other[adjacency]
        for x in np.flatnonzero(unblocked.sum(axis=1) > 1).tolist():
            violations.append(Violation(kind, (x, *adjacency[x][unblocked[x]].tolist())))
    return VerifyReport.from_violations(violations, sizes={"points": len(S.points), "lines": len(S.lines)})


def resolved_by_lemma(S: MixedSet, plane: Plane) -> frozenset[int]:
    """Vertices resolved because they meet two elements of S: lines with 2+ inner points, points on 2+ inner lines."""
    pmask, lmask = _masks(S, plane)
    lines = np.flatnonzero(pmask[plane.points_on].sum(axis=1) >= 2) + plane.n
    points = np.flatnonzero(lmask[plane.lines_through].sum(axis=1) >= 2)
    return frozenset(points.tolist()) | frozenset(lines.tolist())


def part_size_bounds(S: MixedSet, plane: Plane) -> dict:
    """2q-5 <= |P_S|, |L_S| <= 2q+1 for a resolving set of size at most 4q-4."""
    q = plane.q
    if len(S) > 4 * q - 4 or not is_resolving(S, plane).ok:
        raise PreconditionUnmet(f"part size bounds need a resolving set of size <= {4 * q - 4}")
    low, high = 2 * q - 5, 2 * q + 1
    return {
        "low": low,
        "high": high,
        "points": len(S.points),
        "lines": len(S.lines),
        "ok": low <= len(S.points) <= high and low <= len(S.lines) <= high,
    }


# ───────────────────────────────────────────
# SEMI-RESOLVING AND SPLIT SETS
# ───────────────────────────────────────────

def is_semi_resolving(A, plane: Plane) -> VerifyReport:
    """At most one skew line and at most one tangent through each point of A."""
    pmask = plane.point_mask(A)
    everything = np.ones(plane.n, dtype=bool)
    violations = _one_side(plane.points_on, pmask, everything, SKEW_LINE_PAIR, TANGENT_PAIR)
    return VerifyReport.from_violations(violations, sizes={"points": int(pmask.sum())},
                                        beta=int(pmask.sum()) - 2 * plane.q)


def is_semi_resolving_naive(A, plane: Plane) -> VerifyReport:
    """Line distance lists w.r.t. A are pairwise distinct."""
    pts = sorted(set(A))
    rows = np.where(plane.incidence_matrix()[pts, :].T, 1, 3).astype(np.int8)
    pair = _first_collision(rows) if pts else (0, 1)
    violations = [Violation(COLLIDING_LINE_PAIR, pair)] if pair else []
    return VerifyReport.from_violations(violations, sizes={"points": len(pts)})


def is_split_resolving(P_S, L_S, plane: Plane) -> VerifyReport:
    """P_S semi-resolves the lines and the line set L_S semi-resolves the points."""
    violations = is_semi_resolving(P_S, plane).violations
    renamed = {SKEW_LINE_PAIR: UNCOVERED_POINT_PAIR, TANGENT_PAIR: ONE_COVERED_PAIR}
    for v in is_semi_resolving(dualize(L_S), plane).violations:
        violations.append(Violation(renamed[v.kind], v.witnesses))
    return VerifyReport.from_violations(violations, sizes={"points": len(set(P_S)), "lines": len(set(L_S))})


# ───────────────────────────────────────────
# BLOCKING, INDICES, SEMIOVALS
# ───────────────────────────────────────────

def secant_profile(A, plane: Plane) -> SecantProfile:
    secants = plane.point_mask(A)[plane.points_on].sum(axis=1)
    histogram = np.bincount(secants, minlength=plane.q + 2).tolist()
    return SecantProfile(secants=secants, histogram=histogram)


def is_blocking(A, plane: Plane) -> bool:
    return secant_profile(A, plane).is_blocking


def is_double_blocking(A, plane: Plane) -> bool:
    return secant_profile(A, plane).is_double_blocking


def point_index(A, plane: Plane) -> IndexReport:
    pmask = plane.point_mask(A)
    secants = pmask[plane.points_on].sum(axis=1)
    around = secants[plane.lines_through]
    return IndexReport(
        ind0=(around == 0).sum(axis=1),
        ind1=(around == 1).sum(axis=1),
        secants=secants,
        size=int(pmask.sum()),
        q=plane.q,
    )


def semioval_check(A, plane: Plane) -> SemiovalReport:
    A = set(A)
    report = point_index(A, plane)
    inner = sorted(A)
    is_semioval = bool(inner) and bool((report.ind1[inner] == 1).all())
    return SemiovalReport(
        is_semioval=is_semioval,
        is_blocking_semioval=is_semioval and not bool((report.secants == 0).any()),
        bound_margin=len(A) - ceil((9 * plane.q - 12) / 4),
    )


# ───────────────────────────────────────────
# INDEX INEQUALITIES
# ───────────────────────────────────────────

def choose_frame(A, plane: Plane, point: int, secants: np.ndarray = None) -> Frame:
    """
    The line through `point` with 2 <= s <= q-1 points of A, smallest s first,
    then smallest index; infinity is its smallest point outside A other than `point`.
    """
    A = set(A)
    if secants is None:
        secants = plane.point_mask(A)[plane.points_on].sum(axis=1)
    candidates = [(int(secants[l]), int(l)) for l in plane.lines_through[point]
                  if 2 <= secants[l] <= plane.q - 1]
    if not candidates:
        raise NoValidFrame(f"no s-secant with 2 <= s <= {plane.q - 1} through point {point}")
    s, line = min(candidates)
    infinity = next(int(X) for X in plane.points_on[line] if X not in A and X != point)
    return Frame(line=line, s=s, infinity=infinity)


def _require_semi(A, plane: Plane, beta_limit, what: str):
    if not is_semi_resolving(A, plane).ok:
        raise PreconditionUnmet(f"{what} needs a semi-resolving set")
    beta = len(set(A)) - 2 * plane.q
    if beta > beta_limit:
        raise PreconditionUnmet(f"{what} needs beta <= {beta_limit}, got {beta}")
    return beta


def check_index_inequalities(A, plane: Plane) -> IndexInequalityReport:
    """
    Evaluates, for every P outside A with ind(P) <= q-2,
        ind^2 - (q - beta) ind + t >= 0   and   ind^2 - (q - beta) ind + 2q + beta >= 0.
    When 4*beta <= q - 10 also checks that every P outside A has
    ind(P) <= 2 or ind(P) >= q - beta - 2.
    """
    A = set(A)
    q = plane.q
    beta = _require_semi(A, plane, 2 * q - 4, "check_index_inequalities")
    report = point_index(A, plane)
    ind = report.ind
    t = report.t
    evaluations = []
    for P in range(plane.n):
        if P in A or ind[P] > q - 2:
            continue
        i = int(ind[P])
        evaluations.append(IndexInequality(
            point=P,
            ind=i,
            frame=choose_frame(A, plane, P, report.secants),
            with_t=i * i - (q - beta) * i + t,
            with_size=i * i - (q - beta) * i + 2 * q + beta,
        ))
    dichotomy = None
    if 4 * beta <= q - 10:
        outside = plane.point_mask(A) == 0
        bad = outside & (ind > 2) & (ind < q - beta - 2)
        dichotomy = DichotomyReport(small_limit=2, large_limit=q - beta - 2,
                                    violations=np.flatnonzero(bad).tolist())
    result = IndexInequalityReport(t=t, beta=beta, evaluations=evaluations, dichotomy=dichotomy)
    log(f"[resolve.py.check_index_inequalities] {len(evaluations)} eligible points on {plane}, ok={result.ok}", VERBOSITY_DEBUG)
    return result


def _large_index_setup(A, plane: Plane, what: str):
    q = plane.q
    if q < 4:
        raise PreconditionUnmet(f"{what} needs q >= 4")
    beta = len(set(A)) - 2 * q
    if 4 * beta > q - 10:
        raise PreconditionUnmet(f"{what} needs beta <= q/4 - 5/2, got beta={beta}")
    _require_semi(A, plane, beta, what)
    report = point_index(A, plane)
    outside = plane.point_mask(A) == 0
    large = outside & (report.ind >= q - beta - 2)
    return report, large


def large_index_extension(A, plane: Plane) -> LargeIndexReport:
    """Points of large index; adding them to A should give a double blocking set."""
    A = set(A)
    report, large = _large_index_setup(A, plane, "large_index_extension")
    large_points = np.flatnonzero(large).tolist()
    tangents = np.flatnonzero(report.secants == 1)
    blocked = bool(large[plane.points_on[tangents]].any(axis=1).all()) if len(tangents) else True
    semioval = semioval_check(A, plane)
    result = LargeIndexReport(
        large_points=large_points,
        tangents_blocked=blocked,
        union_double_blocking=is_double_blocking(A | set(large_points), plane),
        semioval_bound=(semioval.bound_margin >= 0) if semioval.is_blocking_semioval else None,
    )
    log(f"[resolve.py.large_index_extension] large-index points {large_points}", VERBOSITY_DEBUG)
    return result


def check_tangent_large_index(A, plane: Plane) -> dict:
    """Every tangent carries a large-index point, the skew line (if any) carries two."""
    report, large = _large_index_setup(A, plane, "check_tangent_large_index")
    on_line = large[plane.points_on].sum(axis=1)
    tangents_ok = bool((on_line[report.secants == 1] >= 1).all())
    skew_ok = bool((on_line[report.secants == 0] >= 2).all())
    return {"tangents": tangents_ok, "skew": skew_ok, "ok": tangents_ok and skew_ok}
