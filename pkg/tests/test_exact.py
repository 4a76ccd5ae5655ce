from fractions import Fraction

import pytest

from toruspotts.exact import PolyQ, as_rat, rat_str

Q = PolyQ.q()
ONE = PolyQ.one()


def rand_poly(rng, max_deg=6):
    deg = rng.randrange(0, max_deg + 1)
    return PolyQ.of(
        [Fraction(rng.randrange(-9, 10), rng.randrange(1, 8)) for _ in range(deg + 1)]
    )


def test_product_expansion():
    assert (Q - ONE) * (Q - 2 * ONE) == PolyQ.of([2, -3, 1])


def test_additive_identity():
    p = PolyQ.of([Fraction(1, 3), 0, 5])
    assert p + PolyQ.zero() == p


def test_level_two_amplitude_sum():
    a = PolyQ.of([0, Fraction(-3, 2), Fraction(1, 2)])
    b = PolyQ.of([1, Fraction(-3, 2), Fraction(1, 2)])
    assert a + b == PolyQ.of([1, -3, 1])


def test_eval_points():
    p = PolyQ.of([1, -3, 1])
    assert p.eval(3) == 1
    assert PolyQ.zero().eval(Fraction(7, 3)) == 0
    assert p.eval(Fraction(5, 2)) == Fraction(-1, 4)


def test_ring_axioms(rng):
    for _ in range(60):
        a, b, c = (rand_poly(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a - a == PolyQ.zero()


def test_eval_is_ring_map(rng):
    for _ in range(40):
        a, b = rand_poly(rng), rand_poly(rng)
        q = Fraction(rng.randrange(-6, 7), rng.randrange(1, 5))
        assert (a * b).eval(q) == a.eval(q) * b.eval(q)
        assert (a + b).eval(q) == a.eval(q) + b.eval(q)


def test_rational_normalization_idempotent():
    x = Fraction(-6, 4)
    assert Fraction(x.numerator, x.denominator) == x
    assert x.denominator > 0


def test_trailing_zeros_trimmed():
    p = PolyQ.of([1, 2, 0, 0])
    assert p.degree == 1
    assert PolyQ.of([0, 0]).is_zero()
    assert PolyQ.zero().degree == -1


def test_serialization_roundtrip():
    p = PolyQ.of([Fraction(1, 2), -3, 0, Fraction(7, 5)])
    assert PolyQ.from_json(p.to_json()) == p
    assert p.to_json() == ["1/2", "-3/1", "0/1", "7/5"]
    assert rat_str(Fraction(5)) == "5/1"


def test_as_rat_rejects_floats():
    with pytest.raises(ValueError):
        as_rat("2.5")
    with pytest.raises(ValueError):
        as_rat("1e3")
    assert as_rat("-7/3") == Fraction(-7, 3)


def test_shift_down():
    p = PolyQ.of([0, 0, 3, 1])
    assert p.shift_down(2) == PolyQ.of([3, 1])
    with pytest.raises(ValueError):
        PolyQ.of([1, 1]).shift_down(1)


def test_monomial_split():
    p = PolyQ.of([1, -3, 1])
    assert p.term(1) == PolyQ.monomial(-3, 1)
    assert sum((p.term(k) for k in range(p.degree + 1)), PolyQ.zero()) == p


def test_str_rendering():
    assert str(PolyQ.of([1, -3, 1])) == "Q^2 - 3*Q + 1"
    assert str(PolyQ.of([0, Fraction(-3, 2), Fraction(1, 2)])) == "1/2*Q^2 - 3/2*Q"
    assert str(PolyQ.zero()) == "0"
    assert str(PolyQ.of([-1, 1])) == "Q - 1"


def test_power():
    assert (Q - ONE) ** 3 == PolyQ.of([-1, 3, -3, 1])
    assert (Q ** 0) == ONE
