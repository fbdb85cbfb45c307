import numpy as np
import pytest

from geometry.errors import EqualArguments, SingularMatrix
from geometry.galois import field_of_order
from geometry.plane import (
    AffineFrame,
    Collineation,
    apply_collineation,
    dualize,
    frobenius,
    identity_matrix,
    mat_inv,
    mat_mul,
    orbits,
    permutation_order,
)
from geometry.resolve import MixedSet


@pytest.mark.parametrize("q", (2, 3, 4, 5, 7, 8, 9))
def test_incidence_axioms(plane, q):
    pg = plane(q)
    assert pg.n == q * q + q + 1
    inc = pg.incidence_matrix().astype(int)
    assert (inc.sum(axis=0) == q + 1).all()
    assert (inc.sum(axis=1) == q + 1).all()
    # two points share exactly one line, two lines exactly one point
    for gram in (inc @ inc.T, inc.T @ inc):
        off = gram[~np.eye(pg.n, dtype=bool)]
        assert (off == 1).all()
    assert (np.diff(pg.points_on, axis=1) > 0).all()
    assert (np.diff(pg.lines_through, axis=1) > 0).all()


def test_canonical_indexing(plane):
    pg = plane(5)
    q = pg.q
    assert pg.point_coords(0) == (0, 0, 1)
    assert pg.point_coords(q * 2 + 3) == (2, 3, 1)
    assert pg.index_of((1, 4, 0)) == q * q + 4
    assert pg.index_of((0, 3, 0)) == q * q + q
    assert pg.index_of((2, 4, 2)) == pg.index_of((1, 2, 1)) == q + 2
    assert pg.points_on[pg.line_at_infinity].tolist() == list(range(q * q, q * q + q + 1))
    with pytest.raises(ValueError):
        pg.index_of((0, 0, 0))


def test_vectorised_indices_match_scalar(plane):
    pg = plane(4)
    rng = np.random.default_rng(7)
    coords = rng.integers(0, 4, size=(200, 3))
    fast = pg.indices_of(coords)
    for row, index in zip(coords.tolist(), fast.tolist()):
        if any(row):
            assert pg.index_of(row) == index
        else:
            assert index == -1


def test_join_and_meet(plane):
    pg = plane(7)
    for P, Q in ((0, 1), (5, 60), (49, 56)):
        l = pg.line_through(P, Q)
        assert pg.incident(P, l) and pg.incident(Q, l)
    for l, m in ((0, 1), (3, 40)):
        X = pg.meet(l, m)
        assert pg.incident(X, l) and pg.incident(X, m)
    with pytest.raises(EqualArguments):
        pg.line_through(3, 3)
    with pytest.raises(EqualArguments):
        pg.meet(2, 2)


def test_collinearity(plane):
    pg = plane(3)
    A, B, C = pg.points_on[4][:3].tolist()
    assert pg.collinear(A, B, C)
    assert pg.common_line([A, B, C]) == 4
    D = next(P for P in range(pg.n) if not pg.incident(P, 4))
    assert not pg.collinear(A, B, D)
    assert pg.common_line([A, B, D]) is None


def test_matrices():
    F = field_of_order(5)
    M = ((1, 2, 0), (0, 1, 3), (1, 0, 1))
    assert mat_mul(F, M, mat_inv(F, M)) == identity_matrix()
    with pytest.raises(SingularMatrix):
        mat_inv(F, ((1, 2, 3), (2, 4, 1), (3, 1, 4)))


@pytest.mark.parametrize("q", (2, 3, 4, 5, 8, 9))
def test_singer_cycle(plane, q):
    pg = plane(q)
    sigma = pg.singer_cycle()
    assert sorted(sigma.tolist()) == list(range(pg.n))
    assert permutation_order(sigma) == pg.n
    assert len(orbits([sigma])) == 1
    lines = pg.induced_line_permutation(sigma)
    for l in range(pg.n):
        assert sorted(sigma[pg.points_on[l]].tolist()) == pg.points_on[lines[l]].tolist()


def test_frobenius_collineation(plane):
    pg = plane(4)
    phi = frobenius(pg)
    points, lines = pg.point_permutation(phi), pg.line_permutation(phi)
    assert permutation_order(points) == 2
    for l in range(pg.n):
        assert sorted(points[pg.points_on[l]].tolist()) == pg.points_on[lines[l]].tolist()
    assert (plane(5).point_permutation(frobenius(plane(5))) == np.arange(31)).all()


def test_matrix_collineation_preserves_incidence(plane):
    pg = plane(7)
    g = Collineation(((1, 2, 0), (0, 1, 3), (4, 0, 1)))
    S = MixedSet(pg.points_on[3].tolist(), [3])
    image = apply_collineation(g, S, pg)
    (line,) = image.lines
    assert set(pg.points_on[line].tolist()) == image.points


def test_dualize(plane):
    pg = plane(3)
    S = MixedSet([1, 2], [5])
    assert dualize(S) == MixedSet([5], [1, 2])
    assert dualize(dualize(S)) == S
    assert dualize([4, 7]) == frozenset({4, 7})


@pytest.mark.parametrize("q", (3, 4, 9))
def test_frame_projectivity(plane, q):
    pg = plane(q)
    line = 7
    ideal = int(pg.points_on[line][2])
    g = pg.frame_projectivity(line, ideal)
    moved = apply_collineation(g, pg.points_on[line].tolist(), pg)
    assert moved == frozenset(pg.points_on[0].tolist())
    assert apply_collineation(g, [ideal], pg) == {q * q + q}


def test_affine_frame(plane):
    pg = plane(5)
    frame = AffineFrame(pg)
    assert frame.vertical_point == 30
    assert frame.ideal_point(2) == 27
    assert frame.is_affine(24) and not frame.is_affine(25)
    assert frame.affine_coords(13) == (2, 3)
    assert frame.directions({25, 27, 3}) == [1, 3, 4]
    # y = 2x + 1 through (0,1) and (1,3)
    assert frame.slope(pg.line_through(1, 8)) == 2
    assert frame.slope(pg.line_through(1, 2)) is None
