import random

import pytest

from kcx.fields import GF, QQ, Field
from kcx.parse import ParseError, poly_normalize
from kcx.poly import Polynomial, grevlex_key


def P(text, field=QQ, variables=("x", "y")):
    return poly_normalize(text, field, variables)


def random_poly(rng, field, variables, degree=3, terms=4):
    p = Polynomial.zero(field, variables)
    for _ in range(terms):
        exp = tuple(rng.randint(0, degree) for _ in variables)
        if sum(exp) > degree:
            continue
        p = p + Polynomial.monomial(field, variables, exp, rng.randint(-4, 4))
    return p


def test_binomial_square_expands():
    assert P("(x+y)^2") == P("x^2 + 2*x*y + y^2")


def test_char_two_normalizes_minus_one():
    assert P("x^2 + y^2 - 1", GF(2)).render() == "x^2 + y^2 + 1"


def test_field_inverse_coefficient():
    assert P("3*(1/3)*x") == P("x")


def test_rational_literals_and_division():
    assert P("2/4") == P("1/2")
    assert P("x/2 + x/2") == P("x")
    with pytest.raises(ParseError):
        P("1/x")
    with pytest.raises(ParseError):
        P("x/0")


def test_unknown_variable_and_bad_exponent():
    with pytest.raises(ParseError):
        P("z + 1")
    with pytest.raises(ParseError):
        P("x^y")
    with pytest.raises(ParseError):
        P("x y")  # no implicit multiplication


def test_grevlex_order_classic():
    # In grevlex with x > y > z: y^2 beats x*z.
    xz = (1, 0, 1)
    yy = (0, 2, 0)
    assert grevlex_key(yy) > grevlex_key(xz)
    # Degree dominates.
    assert grevlex_key((3, 0, 0)) > grevlex_key((1, 1, 0))


def test_render_parse_round_trip():
    rng = random.Random(7)
    for _ in range(40):
        p = random_poly(rng, QQ, ("x", "y", "z"))
        assert poly_normalize(p.render(), QQ, ("x", "y", "z")) == p
    for _ in range(40):
        p = random_poly(rng, GF(5), ("x", "y"))
        assert poly_normalize(p.render(), GF(5), ("x", "y")) == p


def test_ring_axioms_random():
    rng = random.Random(11)
    for field in (QQ, GF(7)):
        for _ in range(30):
            a = random_poly(rng, field, ("x", "y"))
            b = random_poly(rng, field, ("x", "y"))
            c = random_poly(rng, field, ("x", "y"))
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a * b == b * a


def test_formal_partial_basics():
    assert P("x^2 + y^2 - 1").partial("x") == P("2*x")
    assert poly_normalize("y^2 - x^3 - 1", QQ, ("x", "y")).partial("x") == P("-3*x^2")
    assert P("5").partial("x").is_zero()


def test_partial_leibniz_and_mixed_symmetry():
    rng = random.Random(13)
    for _ in range(30):
        p = random_poly(rng, QQ, ("x", "y"))
        q = random_poly(rng, QQ, ("x", "y"))
        assert (p * q).partial("x") == p * q.partial("x") + q * p.partial("x")
        assert p.partial("x").partial("y") == p.partial("y").partial("x")


def test_frobenius_in_char_p():
    rng = random.Random(17)
    for p_char in (2, 3, 5):
        field = GF(p_char)
        for _ in range(10):
            a = random_poly(rng, field, ("x", "y"))
            b = random_poly(rng, field, ("x", "y"))
            assert (a + b) ** p_char == a ** p_char + b ** p_char


def test_substitute_is_ring_homomorphism():
    target = ("u", "v")
    images = {
        "x": poly_normalize("u + v", QQ, target),
        "y": poly_normalize("u", QQ, target),
    }
    p = P("x*y")
    assert p.substitute(images, target) == poly_normalize("u^2 + u*v", QQ, target)
    # identity substitution
    circle = P("x^2 + y^2 - 1")
    ident = {
        "x": Polynomial.variable(QQ, ("x", "y"), "x"),
        "y": Polynomial.variable(QQ, ("x", "y"), "y"),
    }
    assert circle.substitute(ident, ("x", "y")) == circle
    # x -> 0 kills x
    zero_x = {"x": Polynomial.zero(QQ, ("x",))}
    assert poly_normalize("x", QQ, ("x",)).substitute(zero_x, ("x",)).is_zero()
    rng = random.Random(19)
    for _ in range(20):
        a = random_poly(rng, QQ, ("x", "y"))
        b = random_poly(rng, QQ, ("x", "y"))
        assert (a * b).substitute(images, target) == a.substitute(images, target) * b.substitute(images, target)


def test_nonprime_characteristic_rejected():
    with pytest.raises(ValueError):
        Field(6)
    with pytest.raises(ValueError):
        Field(2**31 + 11)
