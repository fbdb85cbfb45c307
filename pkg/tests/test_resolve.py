import random

import numpy as np
import pytest

from geometry.construct import baer_pair_semi, canonical_4q4, conic, vertexless_triangle
from geometry.errors import NoValidFrame, PreconditionUnmet
from geometry.resolve import (
    COLLIDING_LINE_PAIR,
    COLLIDING_VERTEX_PAIR,
    SKEW_LINE_PAIR,
    TANGENT_PAIR,
    UNCOVERED_POINT_PAIR,
    MixedSet,
    check_index_inequalities,
    check_tangent_large_index,
    choose_frame,
    distance,
    distance_rows,
    is_blocking,
    is_double_blocking,
    is_resolving,
    is_resolving_local,
    is_resolving_naive,
    is_semi_resolving,
    is_semi_resolving_naive,
    is_split_resolving,
    large_index_extension,
    part_size_bounds,
    point_index,
    resolved_by_lemma,
    secant_profile,
    semioval_check,
)


def _random_mixed(rng, n, size):
    vertices = rng.sample(range(2 * n), size)
    return MixedSet([v for v in vertices if v < n], [v - n for v in vertices if v >= n])


def test_distance(plane):
    pg = plane(3)
    n = pg.n
    line = 5
    on, off = pg.points_on[line][0], next(P for P in range(n) if not pg.incident(P, line))
    assert distance(on, on, pg) == 0
    assert distance(on, off, pg) == 2
    assert distance(on, n + line, pg) == 1
    assert distance(n + line, off, pg) == 3


@pytest.mark.parametrize("q", (2, 3, 4, 5))
def test_resolving_checkers_agree(plane, q):
    pg = plane(q)
    rng = random.Random(1000 + q)
    for _ in range(1000):
        S = _random_mixed(rng, pg.n, rng.randint(1, 5 * q))
        fast, naive, local = is_resolving(S, pg), is_resolving_naive(S, pg), is_resolving_local(S, pg)
        assert fast.ok == naive.ok == local.ok, S


@pytest.mark.parametrize("q", (2, 3, 4, 5))
def test_semi_checkers_agree(plane, q):
    pg = plane(q)
    rng = random.Random(2000 + q)
    for _ in range(1000):
        A = rng.sample(range(pg.n), rng.randint(1, 3 * q))
        assert is_semi_resolving(A, pg).ok == is_semi_resolving_naive(A, pg).ok, A


def test_empty_set_resolves_nothing(pg3):
    report = is_resolving_naive(MixedSet(), pg3)
    assert not report.ok
    assert report.kinds() == {COLLIDING_VERTEX_PAIR}
    assert not is_resolving(MixedSet(), pg3).ok
    assert is_semi_resolving_naive([], pg3).kinds() == {COLLIDING_LINE_PAIR}


def test_all_points_resolve(pg4):
    assert is_resolving(MixedSet(range(pg4.n)), pg4).ok


def test_canonical_is_tight_at_q3(pg3):
    S = canonical_4q4(pg3)
    assert is_resolving(S, pg3).ok
    for x in S.points:
        smaller = MixedSet(S.points - {x}, S.lines)
        assert not is_resolving(smaller, pg3).ok
        assert not is_resolving_naive(smaller, pg3).ok
    for l in S.lines:
        assert not is_resolving(MixedSet(S.points, S.lines - {l}), pg3).ok


def test_violation_kinds(pg3):
    S = MixedSet([0, 1], [])
    kinds = is_resolving(S, pg3).kinds()
    assert SKEW_LINE_PAIR in kinds and UNCOVERED_POINT_PAIR in kinds
    report = is_semi_resolving([0], pg3)
    assert report.kinds() == {SKEW_LINE_PAIR, TANGENT_PAIR}


def test_resolved_by_lemma(plane):
    pg = plane(3)
    rng = random.Random(5)
    for _ in range(50):
        S = _random_mixed(rng, pg.n, rng.randint(3, 12))
        rows = distance_rows(S, pg)
        for v in resolved_by_lemma(S, pg):
            others = np.delete(rows, v, axis=0)
            assert not (others == rows[v]).all(axis=1).any()


def test_part_size_bounds(pg3):
    bounds = part_size_bounds(canonical_4q4(pg3), pg3)
    assert bounds == {"low": 1, "high": 7, "points": 4, "lines": 4, "ok": True}
    with pytest.raises(PreconditionUnmet):
        part_size_bounds(MixedSet([0], [0]), pg3)


def test_split_resolving(plane):
    pg = plane(4)
    A = vertexless_triangle(pg).points
    assert is_split_resolving(A, A, pg).ok
    report = is_split_resolving(A, [], pg)
    assert not report.ok
    assert UNCOVERED_POINT_PAIR in report.kinds()


def test_blocking(plane):
    pg = plane(3)
    line = pg.points_on[2].tolist()
    assert is_blocking(line, pg)
    assert not is_double_blocking(line, pg)
    assert not is_blocking([0], pg)
    profile = secant_profile(line, pg)
    assert profile.histogram == [0, 12, 0, 0, 1]
    assert profile.tangent_lines == [l for l in range(pg.n) if l != 2]


def test_point_index_of_a_line(plane):
    pg = plane(5)
    q = pg.q
    A = set(pg.points_on[0].tolist())
    report = point_index(A, pg)
    for P in range(pg.n):
        assert report.ind[P] == (q if P in A else q + 1)
    assert report.t == pg.n - 1
    assert report.beta == q + 1 - 2 * q


def test_semiovals(plane):
    pg = plane(5)
    oval = semioval_check(conic(pg), pg)
    assert oval.is_semioval and not oval.is_blocking_semioval
    triangle = semioval_check(vertexless_triangle(pg).points, pg)
    assert triangle.is_blocking_semioval
    assert triangle.bound_margin == 12 - 9


def test_choose_frame(plane):
    pg = plane(7)
    A = vertexless_triangle(pg).points
    P = next(X for X in range(pg.n) if X not in A)
    frame = choose_frame(A, pg, P)
    assert pg.incident(P, frame.line)
    assert 2 <= frame.s <= pg.q - 1
    assert frame.infinity not in A and frame.infinity != P
    line = set(pg.points_on[0].tolist())
    off = next(X for X in range(pg.n) if X not in line)
    with pytest.raises(NoValidFrame):
        choose_frame(line, pg, off)


@pytest.mark.parametrize("q", (5, 7, 8))
def test_index_inequalities_on_vertexless_triangle(plane, q):
    pg = plane(q)
    report = check_index_inequalities(vertexless_triangle(pg).points, pg)
    assert report.beta == q - 3
    assert report.evaluations
    assert report.ok
    assert report.dichotomy is None


def test_index_inequalities_on_baer_pair(pg9):
    A = baer_pair_semi(pg9).points
    report = check_index_inequalities(A, pg9)
    assert report.beta == 6
    assert all(e.with_size >= 0 for e in report.evaluations)
    assert report.ok


def test_index_inequalities_preconditions(pg9):
    with pytest.raises(PreconditionUnmet):
        check_index_inequalities(pg9.points_on[0].tolist(), pg9)
    with pytest.raises(PreconditionUnmet):
        large_index_extension(baer_pair_semi(pg9).points, pg9)


@pytest.mark.slow
def test_large_index_points_pg121(plane):
    pg = plane(121)
    semi = baer_pair_semi(pg)
    assert len(semi) == 264
    report = check_index_inequalities(semi.points, pg)
    assert report.dichotomy is not None and report.dichotomy.ok
    assert report.dichotomy.large_limit == 97
    extension = large_index_extension(semi.points, pg)
    assert sorted(extension.large_points) == sorted(semi.params["dropped"])
    assert extension.ok
    assert check_tangent_large_index(semi.points, pg)["ok"]
