import random

import numpy as np
import pytest

from geometry.construct import baer_pair_semi, vertexless_triangle
from geometry.errors import DegreeUnstable, FieldMismatch, NonAffinePoint, NoValidFrame, PreconditionUnmet
from geometry.galois import field_of_order
from geometry.redei import (
    NEG_INF,
    BiPoly,
    Poly,
    check_delta_inequality,
    galois_field,
    gcd,
    global_frame,
    plane_affine_points,
    redei_polynomial,
    redei_profile,
    square_gcd_degree,
    szonyi_weiner_check,
    szonyi_weiner_trials,
)
from geometry.resolve import Frame, point_index


@pytest.fixture
def gf5():
    return field_of_order(5)


def test_poly_arithmetic(gf5):
    f = Poly(gf5, [1, 1])            # B + 1
    g = Poly(gf5, [4, 0, 1])         # B^2 - 1
    assert g.degree == 2 and g.leading == 1
    assert gcd(f, g) == f
    quot, rem = divmod(g, f)
    assert quot == Poly(gf5, [4, 1])
    assert rem.is_zero()
    assert f * quot == g
    assert (g - g).degree == NEG_INF
    assert Poly(gf5, [3, 0, 0]) == Poly.constant(gf5, 3)
    assert Poly(gf5, [2, 4]).monic() == Poly(gf5, [3, 1])
    assert g(2) == 3
    assert (f ** 5) == Poly.monomial(gf5, 5) + Poly.constant(gf5, 1)
    with pytest.raises(ZeroDivisionError):
        divmod(g, Poly(gf5))


@pytest.mark.parametrize("q", (4, 8, 9, 25))
def test_galois_field_shares_integer_labels(q):
    F = field_of_order(q)
    GF = galois_field(F)
    x = GF.elements
    assert GF.order == q
    assert np.array_equal((x[:, None] * x[None, :]).view(np.ndarray), F.mul_table)
    assert np.array_equal((x[:, None] + x[None, :]).view(np.ndarray), F.add_table)
    a, b = q - 1, q // 2 + 1
    assert Poly.constant(F, a) * Poly.constant(F, b) == Poly.constant(F, F.mul(a, b))
    assert Poly(F, [a, 1])(b) == F.add(a, b)


def test_field_polynomial_vanishes(plane):
    for q in (4, 5, 9):
        F = plane(q).field
        h = Poly.field_polynomial(F)
        assert h.degree == q
        assert all(h(x) == 0 for x in F.elements())


def test_derivative_in_characteristic_p(gf5):
    assert Poly.monomial(gf5, 5).derivative().is_zero()
    assert Poly(gf5, [1, 2, 3]).derivative() == Poly(gf5, [2, 1])


def test_field_mismatch(gf5):
    with pytest.raises(FieldMismatch):
        Poly(gf5, [1]) + Poly(field_of_order(7), [1])
    with pytest.raises(FieldMismatch):
        gcd(Poly(gf5, [1, 1]), Poly(field_of_order(7), [1, 1]))


def test_square_gcd_degree_matches_euclid():
    rng = random.Random(11)
    for q in (2, 3, 4, 5, 7):
        F = field_of_order(q)
        square = Poly.field_polynomial(F) ** 2
        for _ in range(40):
            f = Poly(F, [rng.randrange(q) for _ in range(rng.randint(1, 12))] + [1])
            assert square_gcd_degree(f) == gcd(f, square).degree


def test_redei_polynomial(gf5):
    R = redei_polynomial([(0, 0), (1, 1)], gf5)
    assert R.degree == 2 and R.degree_b == 2 and R.degree_m == 1
    assert R.coefficient(2, 0) == 1
    # both points lie on Y = X
    assert R.specialize(1) == Poly.monomial(gf5, 2)
    assert square_gcd_degree(R.specialize(1)) == 2
    assert square_gcd_degree(R.specialize(0)) == 2
    assert R(0, 3) == 0
    assert redei_polynomial([(2, 4, 2)], gf5) == redei_polynomial([(1, 2)], gf5)
    with pytest.raises(NonAffinePoint):
        redei_polynomial([(1, 0, 0)], gf5)


def test_bipoly(gf5):
    L = BiPoly.linear(gf5, 2, 1, 3)
    assert L.coefficient(0, 1) == 2 and L.coefficient(1, 0) == 1 and L.coefficient(0, 0) == 3
    assert L.specialize(1) == Poly(gf5, [0, 1])
    assert (L + L).specialize(0) == Poly(gf5, [1, 2])
    assert BiPoly(gf5).is_zero()


def test_plane_affine_points(plane):
    pg = plane(5)
    assert plane_affine_points([7, 0], pg) == [(0, 0), (1, 2)]
    with pytest.raises(NonAffinePoint):
        plane_affine_points([25], pg)


@pytest.mark.parametrize("q", (5, 7))
def test_profile_of_vertexless_triangle(plane, q):
    pg = plane(q)
    A = vertexless_triangle(pg).points
    profile = redei_profile(A, pg)
    assert profile.frame == global_frame(A, pg)
    assert profile.identity_ok and profile.counting_ok and profile.euclid_ok
    assert profile.delta == profile.delta_from_index
    assert profile.ok
    assert len(profile.affine_points) == len(A) - profile.frame.s


def test_profiles_through_every_outside_point(plane):
    pg = plane(5)
    A = vertexless_triangle(pg).points
    for P in range(pg.n):
        if P in A:
            continue
        profile = redei_profile(A, pg, point=P)
        assert pg.incident(P, profile.frame.line)
        assert profile.ok, P


def _singer_image(pg, A, rng):
    perm = pg.singer_cycle()
    image = np.arange(pg.n)
    for _ in range(rng.randrange(pg.n)):
        image = perm[image]
    return frozenset(int(image[X]) for X in A)


@pytest.mark.slow
@pytest.mark.parametrize("q", (3, 4, 5, 7, 8, 9))
def test_profiles_on_random_frames(plane, q):
    pg = plane(q)
    rng = random.Random(q)
    base = vertexless_triangle(pg).points
    for _ in range(100):
        A = _singer_image(pg, base, rng)
        secants = pg.point_mask(A)[pg.points_on].sum(axis=1)
        framed = [X for X in range(pg.n) if X not in A
                  and any(2 <= secants[l] <= q - 1 for l in pg.lines_through[X])]
        P = rng.choice(framed)
        line = rng.choice([int(l) for l in pg.lines_through[P] if 2 <= secants[l] <= q - 1])
        infinity = rng.choice([int(X) for X in pg.points_on[line] if X not in A])
        profile = redei_profile(A, pg, frame=Frame(line=line, s=int(secants[line]), infinity=infinity))
        assert pg.incident(P, profile.frame.line)
        assert profile.identity_ok and profile.counting_ok
        assert profile.ok, (sorted(A), P, line, infinity)


def test_profile_of_baer_pair(pg9):
    A = baer_pair_semi(pg9).points
    profile = redei_profile(A, pg9)
    assert profile.euclid_ok is None
    assert profile.identity_ok and profile.counting_ok
    assert profile.ok
    assert profile.to_dict()["ok"] is True


def test_global_frame_needs_a_secant(plane):
    pg = plane(5)
    with pytest.raises(NoValidFrame):
        global_frame(pg.points_on[0].tolist(), pg)


def test_szonyi_weiner_small_case(gf5):
    u = redei_polynomial([(0, 0), (1, 1), (2, 4)], gf5)
    v = BiPoly.from_b(Poly.field_polynomial(gf5) ** 2)
    result = szonyi_weiner_check(u, v, 0)
    assert len(result.k) == 5
    assert result.holds
    assert result.rhs == (3 - result.k[0]) * (10 - result.k[0])


def test_szonyi_weiner_degree_guard(gf5):
    v = BiPoly.from_b(Poly.field_polynomial(gf5))
    with pytest.raises(DegreeUnstable):
        szonyi_weiner_check(BiPoly.linear(gf5, 1, 0, 0), v, 0)
    with pytest.raises(DegreeUnstable):
        szonyi_weiner_check(BiPoly(gf5), v, 0)


@pytest.mark.parametrize("q", (3, 4, 5))
def test_szonyi_weiner_trials(q):
    report = szonyi_weiner_trials(field_of_order(q), 40, seed=3)
    assert report["holds"] == 40
    assert report["failures"] == []
    assert report == szonyi_weiner_trials(field_of_order(q), 40, seed=3)


@pytest.mark.slow
@pytest.mark.parametrize("q", (3, 4, 5, 7, 8, 9))
def test_szonyi_weiner_many_trials(q):
    report = szonyi_weiner_trials(field_of_order(q), 500, seed=0)
    assert report["holds"] == 500


def test_delta_inequality(plane):
    pg = plane(7)
    q = pg.q
    A = vertexless_triangle(pg).points
    ind = point_index(A, pg).ind
    P = next(X for X in range(pg.n) if X not in A and ind[X] <= q - 2)
    result = check_delta_inequality(A, pg, P)
    assert result.ind == 3
    assert result.beta == q - 3
    assert 0 <= result.slope < q
    assert result.holds
    assert result.to_dict()["delta"] == result.profile.delta


def test_delta_inequality_preconditions(plane):
    pg = plane(7)
    A = vertexless_triangle(pg).points
    ind = point_index(A, pg).ind
    with pytest.raises(PreconditionUnmet):
        check_delta_inequality(A, pg, min(A))
    vertex = next(X for X in range(pg.n) if X not in A and ind[X] == pg.q - 1)
    with pytest.raises(PreconditionUnmet):
        check_delta_inequality(A, pg, vertex)
    with pytest.raises(PreconditionUnmet):
        check_delta_inequality(pg.points_on[0].tolist(), pg, 1)
