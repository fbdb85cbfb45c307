"""
PG(2,q) as an indexed incidence structure.

Canonical indexing (points and lines share it, lines read [u:v:w]):

| Coordinates | Index |
| --- | --- |
| (x:y:1) | x*q + y |
| (1:m:0) | q^2 + m |
| (0:1:0) | q^2 + q |

x, y, m are field labels (see `galois`). A point lies on a line when
ux + vy + wz = 0. The line [0:0:1] (index 0) is the line at infinity of the
standard affine frame, (1:m:0) is the direction of slope m and (0:1:0) the
vertical direction.

The plane keeps both adjacency arrays (`points_on`, `lines_through`) and a
packed bit table for O(1) incidence tests.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import lcm

import numpy as np

from clilog import log, VERBOSITY_DEBUG, VERBOSITY_TRACE
from .errors import EqualArguments, SingularMatrix
from .galois import Field, field_of_order, singer_extension

_BLOCK = 64


# ───────────────────────────────────────────
# 3x3 MATRICES OVER GF(q)
# ───────────────────────────────────────────

def identity_matrix():
    return ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def mat_mul(F: Field, a, b):
    return tuple(
        tuple(
            F.add(F.add(F.mul(a[i][0], b[0][j]), F.mul(a[i][1], b[1][j])), F.mul(a[i][2], b[2][j]))
            for j in range(3)
        )
        for i in range(3)
    )


def mat_inv(F: Field, matrix):
    """Gauss-Jordan inverse; raises SingularMatrix."""
    rows = [list(matrix[i]) + [1 if i == j else 0 for j in range(3)] for i in range(3)]
    for col in range(3):
        pivot = next((r for r in range(col, 3) if rows[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrix(f"matrix {matrix} is singular over GF({F.order})")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv_pivot = F.inv(rows[col][col])
        rows[col] = [F.mul(inv_pivot, v) for v in rows[col]]
        for r in range(3):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [F.sub(v, F.mul(factor, w)) for v, w in zip(rows[r], rows[col])]
    return tuple(tuple(row[3:]) for row in rows)


def transpose(matrix):
    return tuple(tuple(matrix[j][i] for j in range(3)) for i in range(3))


@dataclass(frozen=True)
class Collineation:
    """x -> A * x^(p^frobenius) on point coordinates."""
    matrix: tuple = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    frobenius: int = 0


# ───────────────────────────────────────────
# PLANE
# ───────────────────────────────────────────

class Plane:
    def __init__(self, field: Field):
        self.field = field
        q = field.order
        self.q = q
        self.n = q * q + q + 1
        self.coords = self._canonical_coords()
        self._coord_list = self.coords.tolist()
        self.points_on = self._build_points_on()
        order = np.argsort(self.points_on.ravel(), kind="stable")
        self.lines_through = (order // (q + 1)).reshape(self.n, q + 1)
        self._bits = self._build_bits()
        self._singer = None
        log(f"[plane.py.Plane] Built PG(2,{q}) with {self.n} points", VERBOSITY_DEBUG)

    @property
    def n_points(self) -> int:
        return self.n

    @property
    def n_lines(self) -> int:
        return self.n

    @property
    def line_at_infinity(self) -> int:
        return 0

    def __repr__(self):
        return f"PG(2,{self.q})"

    # -- construction ---------------------------------------------------------

    def _canonical_coords(self):
        q = self.q
        coords = np.zeros((self.n, 3), dtype=np.int64)
        affine = np.arange(q * q)
        coords[:q * q, 0] = affine // q
        coords[:q * q, 1] = affine % q
        coords[:q * q, 2] = 1
        coords[q * q:q * q + q, 0] = 1
        coords[q * q:q * q + q, 1] = np.arange(q)
        coords[q * q + q] = (0, 1, 0)
        return coords

    def _build_points_on(self):
        F = self.field
        q, n = self.q, self.n
        add, mul = F.add_table, F.mul_table
        X, Y, Z = self.coords[:, 0], self.coords[:, 1], self.coords[:, 2]
        points_on = np.empty((n, q + 1), dtype=np.int64)
        for start in range(0, n, _BLOCK):
            U = self.coords[start:start + _BLOCK]
            dot = add[add[mul[U[:, 0, None], X[None, :]], mul[U[:, 1, None], Y[None, :]]],
                      mul[U[:, 2, None], Z[None, :]]]
            _, cols = np.nonzero(dot == 0)
            points_on[start:start + len(U)] = cols.reshape(len(U), q + 1)
        return points_on

    def _build_bits(self):
        n, q = self.n, self.q
        bits = np.zeros((n, (n + 7) // 8), dtype=np.uint8)
        pts = self.points_on.ravel()
        lns = np.repeat(np.arange(n), q + 1)
        np.bitwise_or.at(bits, (pts, lns >> 3), (128 >> (lns & 7)).astype(np.uint8))
        return bits

    # -- incidence ------------------------------------------------------------

    def incident(self, point: int, line: int) -> bool:
        return bool(self._bits[point, line >> 3] & (128 >> (line & 7)))

    def incidence_matrix(self) -> np.ndarray:
        """Dense boolean point x line matrix; meant for small planes."""
        return np.unpackbits(self._bits, axis=1, count=self.n).astype(bool)

    def point_mask(self, points) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[list(points)] = True
        return mask

    # -- coordinates ------------------------------------------------------------

    def point_coords(self, index: int) -> tuple[int, int, int]:
        return tuple(int(c) for c in self.coords[index])

    line_coords = point_coords

    def index_of(self, coords) -> int:
        x, y, z = (int(c) for c in coords)
        if not (x or y or z):
            raise ValueError("the zero vector is not a projective point")
        return self._index_scalar(x, y, z)

    def indices_of(self, coords: np.ndarray) -> np.ndarray:
        """Normalise homogeneous triples and return canonical indices (-1 for the zero vector)."""
        F = self.field
        q = self.q
        mul, inv = F.mul_table, F.inv_table
        x, y, z = coords[:, 0], coords[:, 1], coords[:, 2]
        out = np.full(len(coords), -1, dtype=np.int64)
        affine = z != 0
        iz = inv[z[affine]]
        out[affine] = mul[x[affine], iz] * q + mul[y[affine], iz]
        ideal = ~affine & (x != 0)
        out[ideal] = q * q + mul[y[ideal], inv[x[ideal]]]
        out[~affine & (x == 0) & (y != 0)] = q * q + q
        return out

    def _cross(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        F = self.field
        add, mul, neg = F.add_table, F.mul_table, F.neg_table

        def sub(u, v):
            return add[u, neg[v]]

        out = np.empty_like(a)
        out[:, 0] = sub(mul[a[:, 1], b[:, 2]], mul[a[:, 2], b[:, 1]])
        out[:, 1] = sub(mul[a[:, 2], b[:, 0]], mul[a[:, 0], b[:, 2]])
        out[:, 2] = sub(mul[a[:, 0], b[:, 1]], mul[a[:, 1], b[:, 0]])
        return out

    def _index_scalar(self, x: int, y: int, z: int) -> int:
        F, q = self.field, self.q
        if z:
            iz = F.inv(z)
            return F.mul(x, iz) * q + F.mul(y, iz)
        if x:
            return q * q + F.mul(y, F.inv(x))
        return q * q + q

    def _join(self, a: int, b: int) -> int:
        """Cross product of two canonical triples, normalised (join of points or meet of lines)."""
        F = self.field
        x1, y1, z1 = self._coord_list[a]
        x2, y2, z2 = self._coord_list[b]
        return self._index_scalar(
            F.sub(F.mul(y1, z2), F.mul(z1, y2)),
            F.sub(F.mul(z1, x2), F.mul(x1, z2)),
            F.sub(F.mul(x1, y2), F.mul(y1, x2)),
        )

    def line_through(self, P: int, Q: int) -> int:
        """The line PQ."""
        if P == Q:
            raise EqualArguments(f"line_through needs two distinct points, got {P} twice")
        return self._join(P, Q)

    def meet(self, l: int, m: int) -> int:
        """The common point of two distinct lines."""
        if l == m:
            raise EqualArguments(f"meet needs two distinct lines, got {l} twice")
        return self._join(l, m)

    def collinear(self, A: int, B: int, C: int) -> bool:
        if len({A, B, C}) < 3:
            return True
        return self.incident(C, self.line_through(A, B))

    def common_line(self, points) -> int | None:
        """The line containing all given points, or None."""
        points = list(dict.fromkeys(points))
        if len(points) < 2:
            return None
        line = self.line_through(points[0], points[1])
        return line if all(self.incident(P, line) for P in points[2:]) else None

    # -- collineations ----------------------------------------------------------

    def _frobenius_coords(self, coords, power):
        if power % max(self.field.h, 1) == 0:
            return coords
        F = self.field
        table = np.array([F.pow(a, F.p ** power) for a in F.elements()], dtype=np.int64)
        return table[coords]

    def _transform(self, matrix, coords):
        F = self.field
        add, mul = F.add_table, F.mul_table
        out = np.empty_like(coords)
        for i in range(3):
            acc = mul[matrix[i][0], coords[:, 0]]
            acc = add[acc, mul[matrix[i][1], coords[:, 1]]]
            acc = add[acc, mul[matrix[i][2], coords[:, 2]]]
            out[:, i] = acc
        return out

    def point_permutation(self, g: Collineation) -> np.ndarray:
        mat_inv(self.field, g.matrix)
        coords = self._frobenius_coords(self.coords, g.frobenius)
        return self.indices_of(self._transform(g.matrix, coords))

    def line_permutation(self, g: Collineation) -> np.ndarray:
        dual = transpose(mat_inv(self.field, g.matrix))
        coords = self._frobenius_coords(self.coords, g.frobenius)
        return self.indices_of(self._transform(dual, coords))

    def induced_line_permutation(self, point_perm: np.ndarray) -> np.ndarray:
        """Line action of a collineation given only by its point permutation."""
        a = self.coords[point_perm[self.points_on[:, 0]]]
        b = self.coords[point_perm[self.points_on[:, 1]]]
        return self.indices_of(self._cross(a, b))

    def singer_cycle(self) -> np.ndarray:
        """
        Point permutation induced by multiplication with a primitive element of
        GF(q^3), points read as GF(q^3)*/GF(q)* through (x:y:z) <-> x + yX + zX^2.
        """
        if self._singer is None:
            ext = singer_extension(self.field)
            self._singer = self.point_permutation(Collineation(ext.companion_matrix()))
            log(f"[plane.py.Plane.singer_cycle] Singer modulus {list(ext.modulus)} on PG(2,{self.q})", VERBOSITY_TRACE)
        return self._singer

    def frame_projectivity(self, line: int, ideal_point: int, avoid=()) -> Collineation:
        """
        A projectivity sending `line` to [0:0:1] and `ideal_point` (on it) to (0:1:0).
        The remaining basis points are the smallest-index choices not in `avoid`.
        """
        on_line = [int(P) for P in self.points_on[line] if P != ideal_point]
        W = next((P for P in on_line if P not in avoid), on_line[0])
        O = next(P for P in range(self.n) if not self.incident(P, line))
        basis = transpose((self.point_coords(W), self.point_coords(ideal_point), self.point_coords(O)))
        return Collineation(mat_inv(self.field, basis), 0)


@lru_cache(maxsize=None)
def build_plane(field: Field) -> Plane:
    return Plane(field)


def plane_of_order(q: int, modulus=None) -> Plane:
    return build_plane(field_of_order(q, modulus))


# ───────────────────────────────────────────
# SET-LEVEL OPERATIONS
# ───────────────────────────────────────────

def dualize(X, plane: Plane = None):
    """
    Point (a:b:c) <-> line [a:b:c]. Both share the canonical index, so indices
    are kept and only their meaning flips; mixed sets swap their two parts.
    """
    if hasattr(X, "points") and hasattr(X, "lines"):
        return type(X)(points=X.lines, lines=X.points)
    return frozenset(int(i) for i in X)


def frobenius(plane: Plane, power: int = 1) -> Collineation:
    return Collineation(identity_matrix(), power)


def apply_collineation(g: Collineation, X, plane: Plane):
    """Image of a vertex set; mixed sets map points and lines, bare iterables are point sets."""
    point_perm = plane.point_permutation(g)
    if hasattr(X, "points") and hasattr(X, "lines"):
        line_perm = plane.line_permutation(g)
        return type(X)(points=frozenset(int(point_perm[P]) for P in X.points),
                       lines=frozenset(int(line_perm[l]) for l in X.lines))
    return frozenset(int(point_perm[P]) for P in X)


def permutation_order(perm: np.ndarray) -> int:
    order = 1
    for cycle in orbits([perm]):
        order = lcm(order, len(cycle))
    return order


def orbits(generators, size: int = None) -> list[list[int]]:
    """Orbits of the group generated by the given permutations, each sorted, ordered by minimum."""
    if size is None:
        size = len(generators[0])
    parent = list(range(size))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for perm in generators:
        for a, b in enumerate(perm.tolist() if hasattr(perm, "tolist") else perm):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for a in range(size):
        groups.setdefault(find(a), []).append(a)
    return [groups[root] for root in sorted(groups)]


@dataclass(frozen=True)
class AffineFrame:
    """Standard affine frame: [0:0:1] at infinity, (1:m:0) the direction of slope m."""
    plane: Plane

    @property
    def line_at_infinity(self) -> int:
        return 0

    @property
    def vertical_point(self) -> int:
        return self.plane.q ** 2 + self.plane.q

    def ideal_point(self, m: int) -> int:
        return self.plane.q ** 2 + m

    def is_affine(self, point: int) -> bool:
        return point < self.plane.q ** 2

    def affine_coords(self, point: int) -> tuple[int, int]:
        return divmod(point, self.plane.q)

    def directions(self, S) -> list[int]:
        """D(S): slopes m whose ideal point (m) is outside S."""
        S = set(S)
        return [m for m in range(self.plane.q) if self.ideal_point(m) not in S]

    def slope(self, line: int) -> int | None:
        """Slope of a non-vertical affine line, None for vertical ones."""
        ideal = self.plane.meet(line, self.line_at_infinity)
        return None if ideal == self.vertical_point else ideal - self.plane.q ** 2
