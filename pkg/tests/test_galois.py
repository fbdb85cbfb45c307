import pytest

from geometry.errors import (
    DegreeMismatch,
    DivisionByZero,
    FieldMismatch,
    FieldTooLarge,
    NonPrime,
    NotASquareOrder,
    ReducibleModulus,
)
from geometry.galois import (
    field_from_descriptor,
    field_of_order,
    is_irreducible,
    is_prime,
    make_field,
    prime_power,
    primitive_element,
    singer_extension,
    smallest_irreducible,
    subfield_embedding,
)

ORDERS = (2, 3, 4, 5, 7, 8, 9, 16, 25)


def test_prime_helpers():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert prime_power(8) == (2, 3)
    assert prime_power(121) == (11, 2)
    with pytest.raises(NonPrime):
        prime_power(12)
    with pytest.raises(NonPrime):
        prime_power(1)
    with pytest.raises(NonPrime):
        make_field(4)


def test_default_moduli_are_smallest():
    assert smallest_irreducible(2, 2) == (1, 1, 1)
    assert smallest_irreducible(2, 3) == (1, 1, 0, 1)
    assert smallest_irreducible(3, 2) == (1, 0, 1)
    assert smallest_irreducible(3, 3) == (1, 2, 0, 1)
    assert smallest_irreducible(5, 1) == (0, 1)
    assert not is_irreducible((1, 0, 1), 2)
    assert is_irreducible((1, 0, 1), 3)
    assert not is_irreducible((2,), 3)


def test_bad_moduli():
    with pytest.raises(ReducibleModulus):
        make_field(2, 2, (1, 0, 1))
    with pytest.raises(DegreeMismatch):
        make_field(3, 2, (1, 0, 2))
    with pytest.raises(DegreeMismatch):
        make_field(3, 0)


@pytest.mark.parametrize("q", ORDERS)
def test_field_axioms(q):
    F = field_of_order(q)
    elements = list(F.elements())
    assert elements[0] == 0 and elements[1] == 1
    for a in elements:
        assert F.add(a, 0) == a
        assert F.mul(a, 1) == a
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    for a in elements[:6]:
        for b in elements:
            for c in elements[:5]:
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
            assert F.mul(a, b) == F.mul(b, a)


@pytest.mark.parametrize("q", ORDERS)
def test_generator_is_primitive(q):
    F = field_of_order(q)
    g = primitive_element(F)
    assert g.order() == q - 1
    assert len({F.pow(g.value, i) for i in range(q - 1)}) == q - 1


def test_prime_field_keeps_natural_labels():
    F = field_of_order(7)
    assert F.add(5, 4) == 2
    assert F.mul(3, 5) == 1
    assert F.inv(3) == 5


def test_frobenius_is_additive():
    F = field_of_order(9)
    for a in F.elements():
        for b in F.elements():
            assert F.pow(F.add(a, b), 3) == F.add(F.pow(a, 3), F.pow(b, 3))


def test_division_by_zero():
    F = field_of_order(5)
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        F.div(3, 0)


def test_element_wrapper():
    F = field_of_order(4)
    a, b = F.element(2), F.element(3)
    assert (a + b).value == F.add(2, 3)
    assert (a * b).value == F.mul(2, 3)
    assert (a / b * b) == a
    assert (a ** 3).value == 1
    assert F.element([0, 1]).value == 2
    with pytest.raises(FieldMismatch):
        a + field_of_order(8).element(2)


def test_descriptor_round_trip():
    F = make_field(3, 2, (2, 2, 1))
    G = field_from_descriptor(F.descriptor())
    assert G == F
    assert G.modulus == (2, 2, 1)


def test_subfield_embedding():
    big, small = field_of_order(9), field_of_order(3)
    emb = subfield_embedding(big, small)
    assert emb.is_homomorphism()
    assert len(emb.image_set()) == 3
    assert emb(0) == 0 and emb(1) == 1
    with pytest.raises(NotASquareOrder):
        subfield_embedding(field_of_order(8), field_of_order(2))


@pytest.mark.parametrize("q", (2, 3, 4, 5))
def test_singer_extension_is_primitive(q):
    ext = singer_extension(field_of_order(q))
    X = (0, 1, 0)
    order = q ** 3 - 1
    assert ext.pow(X, order) == (1, 0, 0)
    seen = set()
    power = (1, 0, 0)
    for _ in range(order):
        seen.add(power)
        power = ext.mul(power, X)
    assert len(seen) == order


def test_singer_extension_ceiling():
    with pytest.raises(FieldTooLarge):
        singer_extension(field_of_order(131))
