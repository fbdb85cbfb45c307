"""
Exact minimum-size searches in PG(2,q).

| Search | Elements | Constraint |
| --- | --- | --- |
| `min_resolving` | points and lines | every pair of same-type vertices distinguished |
| `min_semi_resolving` | points | every pair of lines distinguished |
| `min_double_blocking` | points | every line met at least twice |
| `min_split_resolving` | derived | semi-resolving minimum plus its dual |

Each search starts from the best known construction and lowers the target size
one step at a time until a size is refuted. A size is refuted either by plain
lexicographic enumeration (when C(N,k) is at most `search_exhaustive_limit`) or
by branch-and-bound. Branch-and-bound splits the tree into work units at the
root frontier: orbit representatives of the first chosen element under the
group generated by a Singer cycle and the Frobenius map, then orbit
representatives of the second element under the stabiliser of the first.

All states are Python integers used as bitmasks.
"""

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import ceil, comb, isqrt
from pathlib import Path

import numpy as np
from dotenv import load_dotenv

from clilog import log, VERBOSITY_DEBUG, VERBOSITY_INFO, VERBOSITY_TRACE, VERBOSITY_WARNING
from .construct import (
    Construction,
    baer_pair_double_blocking,
    baer_pair_semi,
    canonical_4q4,
    fano_resolving5,
    hyperoval_resolving10,
    semi_from_double_blocking,
    three_line_double_blocking,
    vertexless_triangle,
)
from .errors import BudgetExceeded, PreconditionUnmet
from .plane import Plane, frobenius, orbits
from .resolve import MixedSet, is_double_blocking, is_resolving, is_semi_resolving, is_split_resolving

ENV_PATH = Path(__file__).resolve().parent.parent / '.env'
load_dotenv(dotenv_path=ENV_PATH)

RESOLVING = "resolving"
SEMI_RESOLVING = "semi_resolving"
DOUBLE_BLOCKING = "double_blocking"
KINDS = (RESOLVING, SEMI_RESOLVING, DOUBLE_BLOCKING)

EXHAUSTIVE = "exhaustive"
BRANCH_AND_BOUND = "branch_and_bound"
UPPER_BOUND_ONLY = "upper_bound_only"


def _env_int(name, default):
    try:
        return int(os.getenv(name, default))
    except ValueError:
        log(f"[search.py._env_int] Ignoring non-integer {name}={os.getenv(name)!r}", VERBOSITY_WARNING)
        return default


def _env_float(name, default):
    try:
        return float(os.getenv(name, default))
    except ValueError:
        log(f"[search.py._env_float] Ignoring non-numeric {name}={os.getenv(name)!r}", VERBOSITY_WARNING)
        return default


search_budget_nodes = _env_int("search_budget_nodes", 0)
search_budget_seconds = _env_float("search_budget_seconds", 0.0)
search_symmetry = os.getenv("search_symmetry", "on").lower() in ("on", "true", "1", "yes")
search_workers = max(1, _env_int("search_workers", 1))
search_exhaustive_limit = _env_int("search_exhaustive_limit", 2000000)
checkpoint_every = max(1, _env_int("checkpoint_every", 100000))


# ───────────────────────────────────────────
# BUDGET AND RESULTS
# ───────────────────────────────────────────

@dataclass
class Budget:
    """Node and wall-clock limits; 0 means unlimited."""
    nodes: int = 0
    seconds: float = 0.0
    spent: int = 0
    deadline: float = None

    def __post_init__(self):
        if self.deadline is None and self.seconds:
            self.deadline = time.time() + self.seconds

    @classmethod
    def from_config(cls, nodes=None, seconds=None) -> "Budget":
        return cls(nodes=search_budget_nodes if nodes is None else int(nodes),
                   seconds=search_budget_seconds if seconds is None else float(seconds))

    def charge(self, count: int = 1):
        self.spent += count
        if self.nodes and self.spent > self.nodes:
            raise BudgetExceeded(f"node budget of {self.nodes} exhausted", nodes=self.spent)
        if self.deadline is not None and (self.spent & 1023) < count and time.time() > self.deadline:
            raise BudgetExceeded(f"time budget of {self.seconds}s exhausted", nodes=self.spent)

    def split(self, parts: int) -> list["Budget | None"]:
        """
        Budgets for `parts` work units sharing the deadline. The node slices add
        up to what is left; a unit whose slice is empty gets None.
        """
        if not self.nodes:
            return [Budget(seconds=self.seconds, deadline=self.deadline) for _ in range(parts)]
        each, extra = divmod(max(0, self.nodes - self.spent), parts)
        sizes = [each + (1 if i < extra else 0) for i in range(parts)]
        return [Budget(nodes=size, seconds=self.seconds, deadline=self.deadline) if size else None for size in sizes]


@dataclass(frozen=True)
class SearchResult:
    kind: str
    q: int
    optimum: int
    witness: object
    nodes_explored: int
    proof_mode: str
    upper_bound_source: str = ""
    refuted: int = None

    def to_dict(self) -> dict:
        if isinstance(self.witness, MixedSet):
            points, lines = self.witness.sorted_points(), self.witness.sorted_lines()
        else:
            points, lines = sorted(self.witness), []
        return {
            "kind": self.kind,
            "q": self.q,
            "optimum": self.optimum,
            "points": points,
            "lines": lines,
            "nodes_explored": self.nodes_explored,
            "proof_mode": self.proof_mode,
            "upper_bound_source": self.upper_bound_source,
            "refuted": self.refuted,
        }


@dataclass(frozen=True)
class NoSmallerCertificate:
    kind: str
    q: int
    k: int
    holds: bool
    nodes: int
    witness: object = None

    def to_dict(self) -> dict:
        witness = None
        if isinstance(self.witness, MixedSet):
            witness = self.witness.to_dict()
        elif self.witness is not None:
            witness = {"points": sorted(self.witness), "lines": []}
        return {"kind": self.kind, "q": self.q, "k": self.k, "holds": self.holds,
                "nodes": self.nodes, "witness": witness}


# ───────────────────────────────────────────
# PROBLEMS
# ───────────────────────────────────────────

def _pack(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits.astype(bool), bitorder="little").tobytes(), "little")


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class PairProblem:
    """
    Covering formulation of the resolving and semi-resolving properties.

    Each constraint is a pair of same-type vertices; element x hits the pairs
    it distinguishes. For resolving sets only same-type pairs matter: a point
    and a line always have distances of different parity to any vertex.
    """

    def __init__(self, kind: str, plane: Plane, violation_bound: bool = True):
        self.kind = kind
        self.q = plane.q
        n = plane.n
        self.n = n
        self.violation_bound = violation_bound
        inc = plane.incidence_matrix()
        self.lines_at = [_pack(row) for row in inc]
        self.points_on = [_pack(col) for col in inc.T]
        self.everything = (1 << n) - 1
        ia, ib = np.triu_indices(n, 1)
        # hits of a point on line pairs, of a line on point pairs (same formula by symmetry of inc)
        on_lines = inc[:, ia] ^ inc[:, ib]
        on_points = inc.T[:, ia] ^ inc.T[:, ib]
        if kind == RESOLVING:
            member = (ia[None, :] == np.arange(n)[:, None]) | (ib[None, :] == np.arange(n)[:, None])
            point_rows = np.hstack([member, on_lines])
            line_rows = np.hstack([on_points, member])
            matrix = np.vstack([point_rows, line_rows])
        elif kind == SEMI_RESOLVING:
            matrix = on_lines
        else:
            raise ValueError(f"PairProblem does not handle {kind!r}")
        self.size = matrix.shape[0]
        self.n_constraints = matrix.shape[1]
        self.hits = [_pack(row) for row in matrix]
        self.candidates = [_pack(col) for col in matrix.T]
        self.initial = (1 << self.n_constraints) - 1
        self.full = (1 << self.size) - 1
        # a semi-resolving set has at least 2q - 1 points
        self.floor = 2 * self.q - 1 if kind == SEMI_RESOLVING else 1

    def add(self, state: int, x: int) -> int:
        return state & ~self.hits[x]

    def done(self, state: int) -> bool:
        return state == 0

    def pick(self, state: int, allowed: int) -> int:
        best, best_count = 0, None
        for c in _bits(state):
            cand = self.candidates[c] & allowed
            count = cand.bit_count()
            if best_count is None or count < best_count:
                best, best_count = cand, count
                if count <= 1:
                    break
        return best

    def lower_bound(self, state: int, allowed: int, chosen: int) -> int:
        open_pairs = state.bit_count()
        most = max(((self.hits[x] & state).bit_count() for x in _bits(allowed)), default=0)
        if most == 0:
            return self.size + 1
        bound = max(ceil(open_pairs / most), self.floor - chosen.bit_count())
        if self.violation_bound:
            bound = max(bound, self.repairs_needed(chosen))
        return bound

    def repairs_needed(self, chosen: int) -> int:
        """
        Fewest further elements that leave at most one outer line skew to the
        chosen points and at most one outer point off the chosen lines, both
        necessary for a resolving set (the first alone for semi-resolving).
        A new point meets at most q+1 skew lines and removes one uncovered
        point; a new line does the reverse.
        """
        q = self.q
        points, lines = chosen & self.everything, chosen >> self.n
        met = 0
        for P in _bits(points):
            met |= self.lines_at[P]
        skew = (self.everything & ~met & ~lines).bit_count()
        if self.kind == SEMI_RESOLVING:
            return max(0, ceil((skew - 1) / (q + 1)))
        covered = 0
        for l in _bits(lines):
            covered |= self.points_on[l]
        uncovered = (self.everything & ~covered & ~points).bit_count()
        return max(0, ceil((skew - 1) / (q + 1)), ceil((uncovered - 1) / (q + 1)),
                   ceil((skew + uncovered - 2) / (q + 2)))

    def decode(self, elements):
        if self.kind == RESOLVING:
            return MixedSet([x for x in elements if x < self.n], [x - self.n for x in elements if x >= self.n])
        return frozenset(int(x) for x in elements)

    def encode(self, S) -> list[int]:
        if self.kind == RESOLVING:
            return sorted(S.points) + sorted(self.n + l for l in S.lines)
        return sorted(S.points if isinstance(S, MixedSet) else S)

    def verify(self, witness, plane: Plane) -> bool:
        if self.kind == RESOLVING:
            return is_resolving(witness, plane).ok
        return is_semi_resolving(witness, plane).ok

    def generators(self, plane: Plane) -> list[np.ndarray]:
        gens = []
        sigma = plane.singer_cycle()
        phi = frobenius(plane) if plane.field.h > 1 else None
        if self.kind == RESOLVING:
            gens.append(np.concatenate([sigma, plane.induced_line_permutation(sigma) + self.n]))
            if phi is not None:
                gens.append(np.concatenate([plane.point_permutation(phi), plane.line_permutation(phi) + self.n]))
        else:
            gens.append(np.asarray(sigma))
            if phi is not None:
                gens.append(plane.point_permutation(phi))
        return gens


class DoubleBlockingProblem:
    """Points as elements; the state records which lines are met once and twice."""

    kind = DOUBLE_BLOCKING

    def __init__(self, plane: Plane):
        self.q = plane.q
        self.n = plane.n
        self.size = plane.n
        inc = plane.incidence_matrix()
        self.lines_at = [_pack(row) for row in inc]
        self.points_on = [_pack(col) for col in inc.T]
        self.all_lines = (1 << plane.n) - 1
        self.initial = (0, 0)
        self.full = (1 << plane.n) - 1
        self.floor = 1

    def add(self, state, x):
        once, twice = state
        at = self.lines_at[x]
        return once | at, twice | (once & at)

    def done(self, state) -> bool:
        return state[1] == self.all_lines

    def pick(self, state, allowed: int) -> int:
        once, twice = state
        best, best_key = 0, None
        for l in _bits(self.all_lines & ~twice):
            cand = self.points_on[l] & allowed
            # uncovered lines first, then fewest candidates
            key = (0 if once >> l & 1 == 0 else 1, cand.bit_count())
            if best_key is None or key < best_key:
                best, best_key = cand, key
        return best

    def lower_bound(self, state, allowed: int, chosen: int) -> int:
        once, twice = state
        deficit = 2 * self.n - once.bit_count() - twice.bit_count()
        untouched = self.all_lines & ~once
        bound = ceil(deficit / (self.q + 1))
        if untouched:
            bound = max(bound, 2)
        for l in _bits(self.all_lines & ~twice):
            need = 1 if once >> l & 1 else 2
            if (self.points_on[l] & allowed).bit_count() < need:
                return self.size + 1
        return bound

    def decode(self, elements):
        return frozenset(int(x) for x in elements)

    def encode(self, S) -> list[int]:
        return sorted(S.points if isinstance(S, MixedSet) else S)

    def verify(self, witness, plane: Plane) -> bool:
        return is_double_blocking(witness, plane)

    def generators(self, plane: Plane) -> list[np.ndarray]:
        gens = [np.asarray(plane.singer_cycle())]
        if plane.field.h > 1:
            gens.append(plane.point_permutation(frobenius(plane)))
        return gens


def make_problem(kind: str, plane: Plane):
    match kind:
        case "resolving" | "semi_resolving":
            return PairProblem(kind, plane)
        case "double_blocking":
            return DoubleBlockingProblem(plane)
    raise PreconditionUnmet(f"unknown search kind {kind!r}, expected one of {', '.join(KINDS)}")


# ───────────────────────────────────────────
# ENUMERATION
# ───────────────────────────────────────────

def _enumerate(problem, k: int, budget: Budget, cursor=None, on_progress=None):
    """
    Lexicographic walk over k-subsets of the elements with incremental states.
    Resumes after `cursor` when given. Returns (witness elements or None, last combination).
    """
    N = problem.size
    if k > N:
        return None, None
    if k == 0:
        return ([] if problem.done(problem.initial) else None), []
    combo = list(cursor) if cursor else list(range(k))
    states = [problem.initial] * (k + 1)
    for d in range(k):
        states[d + 1] = problem.add(states[d], combo[d])
    skip = cursor is not None
    leaves = 0
    while True:
        if skip:
            skip = False
        else:
            budget.charge()
            leaves += 1
            if problem.done(states[k]):
                return list(combo), combo
            if on_progress is not None and leaves % checkpoint_every == 0:
                on_progress(combo)
        i = k - 1
        while i >= 0 and combo[i] == N - k + i:
            i -= 1
        if i < 0:
            return None, combo
        combo[i] += 1
        for j in range(i + 1, k):
            combo[j] = combo[j - 1] + 1
        for d in range(i, k):
            states[d + 1] = problem.add(states[d], combo[d])


def _branch_and_bound(problem, k: int, budget: Budget, forced=(), forbidden: int = 0):
    state = problem.initial
    for x in forced:
        state = problem.add(state, x)
    allowed = problem.full & ~forbidden
    for x in forced:
        allowed &= ~(1 << x)
    chosen = list(forced)

    def descend(state, allowed, mask):
        budget.charge()
        if problem.done(state):
            return list(chosen)
        left = k - len(chosen)
        if left <= 0 or problem.lower_bound(state, allowed, mask) > left:
            return None
        candidates = problem.pick(state, allowed)
        for x in _bits(candidates):
            allowed &= ~(1 << x)
            chosen.append(x)
            found = descend(problem.add(state, x), allowed, mask | 1 << x)
            chosen.pop()
            if found is not None:
                return found
        return None

    return descend(state, allowed, sum(1 << x for x in set(forced)))


# ───────────────────────────────────────────
# SYMMETRY
# ───────────────────────────────────────────

def _inverse(perm: np.ndarray) -> np.ndarray:
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm), dtype=perm.dtype)
    return inv


def stabilizer_generators(generators, r: int) -> list[np.ndarray]:
    """Schreier generators of the stabiliser of r."""
    size = len(generators[0])
    transversal = {r: np.arange(size)}
    queue = [r]
    for x in queue:
        for g in generators:
            y = int(g[x])
            if y not in transversal:
                transversal[y] = g[transversal[x]]
                queue.append(y)
    identity = np.arange(size)
    seen, result = set(), []
    for x, u in transversal.items():
        for g in generators:
            s = _inverse(transversal[int(g[x])])[g[u]]
            key = s.tobytes()
            if key not in seen and not np.array_equal(s, identity):
                seen.add(key)
                result.append(s)
    return result


@dataclass(frozen=True)
class WorkUnit:
    forced: tuple
    forbidden: int = 0


def work_units(problem, plane: Plane, symmetry: bool) -> list[WorkUnit]:
    """
    Root-frontier split. Unit (r, s) forces r and s and forbids every element of
    an earlier orbit; any feasible set maps into exactly such a unit.
    """
    if not symmetry:
        return [WorkUnit(())]
    gens = problem.generators(plane)
    units, forbidden = [], 0
    for orbit in orbits(gens, problem.size):
        r = orbit[0]
        units.append(WorkUnit((r,), forbidden | problem.full & ~(1 << r)))
        stab = stabilizer_generators(gens, r) or [np.arange(problem.size)]
        inner = forbidden
        for sub in orbits(stab, problem.size):
            s = sub[0]
            if s == r or forbidden >> s & 1:
                continue
            units.append(WorkUnit((r, s), inner))
            for x in sub:
                inner |= 1 << x
        for x in orbit:
            forbidden |= 1 << x
    log(f"[search.py.work_units] {len(units)} root-frontier units from {len(gens)} generators", VERBOSITY_DEBUG)
    return units


def _solve_unit(problem, k: int, unit: WorkUnit, budget: Budget):
    """Returns (witness or None, nodes explored, exhausted)."""
    if budget is None:
        return None, 0, True
    try:
        found = _branch_and_bound(problem, k, budget, unit.forced, unit.forbidden)
    except BudgetExceeded:
        # the charge that failed did not explore a node
        return None, min(budget.spent, budget.nodes) if budget.nodes else budget.spent, True
    return found, budget.spent, False


def _decide_bnb(problem, plane: Plane, k: int, budget: Budget, symmetry: bool, workers: int):
    units = work_units(problem, plane, symmetry)
    if workers <= 1:
        for unit in units:
            found = _branch_and_bound(problem, k, budget, unit.forced, unit.forbidden)
            if found is not None:
                return sorted(found)
        return None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        shares = budget.split(len(units))
        futures = [pool.submit(_solve_unit, problem, k, unit, share) for unit, share in zip(units, shares)]
        try:
            # results are taken in unit order so the witness does not depend on scheduling
            for index, future in enumerate(futures):
                found, spent, exhausted = future.result()
                budget.spent += spent
                if exhausted:
                    raise BudgetExceeded(f"budget share of work unit {index} exhausted", nodes=budget.spent)
                if found is not None:
                    return sorted(found)
        finally:
            for future in futures:
                future.cancel()
    return None


# ───────────────────────────────────────────
# MINIMISATION
# ───────────────────────────────────────────

def _is_square(q: int) -> bool:
    return isqrt(q) ** 2 == q


def upper_bound_construction(kind: str, plane: Plane) -> Construction:
    """Smallest verified construction of the kind available at this order."""
    q = plane.q
    match kind:
        case "resolving":
            options = [fano_resolving5] if q == 2 else [canonical_4q4]
            if q == 4:
                options.append(hyperoval_resolving10)
        case "semi_resolving":
            if q == 2:
                options = [lambda p: semi_from_double_blocking(p, B=three_line_double_blocking(p).points)]
            elif q == 3:
                options = [vertexless_triangle]
            else:
                options = [lambda p: vertexless_triangle(p, drop_extra=True)]
            if _is_square(q):
                options.append(baer_pair_semi)
        case "double_blocking":
            options = [three_line_double_blocking]
            if _is_square(q):
                options.append(baer_pair_double_blocking)
        case _:
            raise PreconditionUnmet(f"unknown search kind {kind!r}")
    built = [c for c in (make(plane) for make in options) if c.verified]
    if not built:
        return None
    return min(built, key=len)


def _minimise(problem, plane: Plane, budget: Budget = None, symmetry: bool = None,
              workers: int = None, method: str = "auto") -> SearchResult:
    budget = budget if budget is not None else Budget.from_config()
    symmetry = search_symmetry if symmetry is None else symmetry
    workers = search_workers if workers is None else workers

    start = upper_bound_construction(problem.kind, plane)
    if start is not None:
        witness, source = problem.encode(start), start.name
    else:
        witness, source = list(range(problem.size)), "everything"
    log(f"[search.py._minimise] {problem.kind} on {plane}: starting from {source} (size {len(witness)})",
        VERBOSITY_DEBUG)

    proof_mode, refuted = None, None
    k = len(witness) - 1
    try:
        while k >= 0:
            use_enumeration = method == EXHAUSTIVE or (method == "auto" and comb(problem.size, k) <= search_exhaustive_limit)
            mode = EXHAUSTIVE if use_enumeration else BRANCH_AND_BOUND
            log(f"[search.py._minimise] size {k}: {mode}, {comb(problem.size, k)} subsets", VERBOSITY_DEBUG)
            if use_enumeration:
                found, _ = _enumerate(problem, k, budget)
            else:
                found = _decide_bnb(problem, plane, k, budget, symmetry, workers)
            if found is None:
                proof_mode, refuted = mode, k
                break
            witness = sorted(found)
            k = len(witness) - 1
        else:
            proof_mode = EXHAUSTIVE
    except BudgetExceeded as exc:
        partial = _result(problem, plane, witness, budget.spent, UPPER_BOUND_ONLY, source, None)
        log(f"[search.py._minimise] budget exhausted after {budget.spent} nodes, best size {len(witness)}",
            VERBOSITY_WARNING)
        raise BudgetExceeded(str(exc), nodes=budget.spent, partial=partial) from exc

    result = _result(problem, plane, witness, budget.spent, proof_mode, source, refuted)
    log(f"{problem.kind} minimum on {plane} is {result.optimum} ({proof_mode}, {budget.spent} nodes)", VERBOSITY_INFO)
    return result


def _result(problem, plane, elements, nodes, proof_mode, source, refuted) -> SearchResult:
    witness = problem.decode(elements)
    if not problem.verify(witness, plane):
        raise RuntimeError(f"search produced a {problem.kind} witness that fails verification: {elements}")
    return SearchResult(kind=problem.kind, q=plane.q, optimum=len(elements), witness=witness,
                        nodes_explored=nodes, proof_mode=proof_mode, upper_bound_source=source, refuted=refuted)


def min_resolving(plane: Plane, budget: Budget = None, **options) -> SearchResult:
    """Metric dimension of the incidence graph."""
    return _minimise(PairProblem(RESOLVING, plane), plane, budget, **options)


def min_semi_resolving(plane: Plane, budget: Budget = None, **options) -> SearchResult:
    return _minimise(PairProblem(SEMI_RESOLVING, plane), plane, budget, **options)


def min_double_blocking(plane: Plane, budget: Budget = None, **options) -> SearchResult:
    return _minimise(DoubleBlockingProblem(plane), plane, budget, **options)


def min_split_resolving(plane: Plane, budget: Budget = None, **options) -> SearchResult:
    """
    Split resolving sets are a semi-resolving point set together with a line
    set semi-resolving the points, and the two sides are independent. The
    minimum is therefore a minimum semi-resolving set plus its dual.
    """
    semi = min_semi_resolving(plane, budget, **options)
    A = frozenset(semi.witness)
    report = is_split_resolving(A, A, plane)
    if not report.ok:
        raise RuntimeError(f"dual completion of {sorted(A)} is not split resolving")
    return SearchResult(kind="split", q=plane.q, optimum=2 * semi.optimum, witness=MixedSet(A, A),
                        nodes_explored=semi.nodes_explored, proof_mode=semi.proof_mode,
                        upper_bound_source=semi.upper_bound_source,
                        refuted=None if semi.refuted is None else 2 * semi.refuted)


# ───────────────────────────────────────────
# EXHAUSTIVE REFUTATION WITH CHECKPOINTS
# ───────────────────────────────────────────

def _read_checkpoint(path: Path, kind: str, q: int, k: int):
    if path is None or not path.exists():
        return None
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    if (data.get("kind"), data.get("q"), data.get("k")) != (kind, q, k):
        raise PreconditionUnmet(f"checkpoint {path} is for {data.get('kind')} q={data.get('q')} k={data.get('k')}, "
                                f"not {kind} q={q} k={k}")
    return data


def _write_checkpoint(path: Path, data: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as f:
        json.dump(data, f, sort_keys=True, separators=(",", ":"))
    os.replace(tmp, path)


def verify_no_smaller(plane: Plane, k: int, kind: str, checkpoint=None, budget: Budget = None) -> NoSmallerCertificate:
    """
    True iff no set of size k has the property, by plain enumeration. With
    `checkpoint` the cursor is saved every `checkpoint_every` leaves and a later
    call with the same path, kind, q and k resumes after it.
    """
    problem = make_problem(kind, plane)
    budget = budget if budget is not None else Budget.from_config()
    path = Path(checkpoint) if checkpoint else None
    saved = _read_checkpoint(path, kind, plane.q, k)
    base = {"kind": kind, "q": plane.q, "k": k}

    if saved and saved.get("complete"):
        witness = saved.get("witness")
        log(f"[search.py.verify_no_smaller] {path} already complete", VERBOSITY_DEBUG)
        return NoSmallerCertificate(kind, plane.q, k, saved["holds"], saved["nodes"],
                                    None if witness is None else problem.decode(witness))

    cursor = saved["last_combination"] if saved else None
    offset = saved["nodes"] if saved else 0
    if cursor:
        log(f"[search.py.verify_no_smaller] resuming {kind} k={k} after {cursor} ({offset} leaves done)", VERBOSITY_INFO)

    def save(combo):
        if path is not None:
            _write_checkpoint(path, {**base, "last_combination": list(combo), "nodes": offset + budget.spent})
            log(f"[search.py.verify_no_smaller] checkpoint at {list(combo)}", VERBOSITY_TRACE)

    try:
        found, last = _enumerate(problem, k, budget, cursor=cursor, on_progress=save)
    except BudgetExceeded as exc:
        raise BudgetExceeded(str(exc), nodes=offset + budget.spent) from exc

    witness = None
    if found is not None:
        witness = problem.decode(found)
        if not problem.verify(witness, plane):
            raise RuntimeError(f"enumeration produced a {kind} witness that fails verification: {found}")
    nodes = offset + budget.spent
    if path is not None:
        _write_checkpoint(path, {**base, "last_combination": last, "nodes": nodes, "complete": True,
                                 "holds": found is None, "witness": found})
    log(f"[search.py.verify_no_smaller] {kind} k={k} on {plane}: holds={found is None} after {nodes} leaves",
        VERBOSITY_DEBUG)
    return NoSmallerCertificate(kind, plane.q, k, found is None, nodes, witness)
