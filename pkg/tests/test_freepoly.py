"""Word algebra: products, tensor sorting, grading, printing, parsing."""

import pytest

from lpalg.errors import AlphabetMismatch
from lpalg.freepoly import (
    ALPH_FORMS,
    ALPH_M,
    ALPH_MM,
    ALPH_MX,
    ALPH_X,
    NCPoly,
    graded_slice,
    parse_poly,
    poly_arith,
)
from lpalg.scalars import Scalar


def gen(alphabet, name):
    return NCPoly.generator(alphabet, name)


def test_alphabet_lookup():
    assert len(ALPH_X) == 4
    assert ALPH_X.index("x2") == 2
    assert ALPH_X.word(["x0", "x3"]) == (0, 3)
    assert ALPH_X.word_str((1, 0)) == "x1 x0"
    assert len(ALPH_MX) == 24
    assert ALPH_MM.has("Mb31")


def test_parse_relation_text():
    p = parse_poly(ALPH_X, "x0 x1 - l01 x1 x0")
    assert p.coefficient(["x0", "x1"]) == Scalar.one()
    assert p.coefficient(["x1", "x0"]) == -Scalar.variable("l01")
    assert str(p) == "x0 x1 - l01 x1 x0"


def test_product_expansion():
    x0, x1 = gen(ALPH_X, "x0"), gen(ALPH_X, "x1")
    p = (x0 + x1) * (x0 - x1)
    assert p.coefficient(["x0", "x0"]) == Scalar.one()
    assert p.coefficient(["x0", "x1"]) == Scalar.from_int(-1)
    assert p.coefficient(["x1", "x0"]) == Scalar.one()
    assert p.coefficient(["x1", "x1"]) == Scalar.from_int(-1)
    assert (x0 * x1) != (x1 * x0)


def test_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        gen(ALPH_X, "x0") + gen(ALPH_FORMS, "x0")
    with pytest.raises(AlphabetMismatch):
        gen(ALPH_M, "M00") * gen(ALPH_MM, "M00")


def test_tensor_rank_sorting():
    m = gen(ALPH_MX, "M01")
    x = gen(ALPH_MX, "x0")
    dx = gen(ALPH_MX, "dx2")
    assert x * m == m * x
    assert (dx * m).coefficient(["M01", "dx2"]) == Scalar.one()
    assert x * dx != dx * x

    first = gen(ALPH_MM, "M23")
    second = gen(ALPH_MM, "Mb01")
    assert second * first == first * second
    assert (second * first).coefficient(["M23", "Mb01"]) == Scalar.one()

    a, b = gen(ALPH_MM, "M00"), gen(ALPH_MM, "M11")
    assert a * b != b * a


def test_grading_slices():
    x0 = gen(ALPH_FORMS, "x0")
    x1 = gen(ALPH_FORMS, "x1")
    dx0 = gen(ALPH_FORMS, "dx0")
    dx1 = gen(ALPH_FORMS, "dx1")
    p = x0 * dx1 + dx0 * dx1 + x0 * x1
    assert graded_slice(p, 2, "word_length") == p
    assert p.graded_slice(1, "form_degree") == x0 * dx1
    assert p.graded_slice(2, "form_degree") == dx0 * dx1
    assert p.graded_slice(0, "form_degree") == x0 * x1
    assert p.graded_slice(3, "word_length").is_zero()
    with pytest.raises(ValueError):
        p.graded_slice(1, "weight")


def test_printing_canonical_order_and_parens():
    x0 = gen(ALPH_X, "x0")
    x1 = gen(ALPH_X, "x1")
    gauss = Scalar.from_int(2) + Scalar.from_int(3) * Scalar.i()
    p = x1 * x0 * gauss + x0 - 1
    assert str(p) == "-1 + x0 + (2 + 3*i) x1 x0"
    q = -x0 + x0 * x1 * Scalar.from_fraction(-3, 5)
    assert str(q) == "- x0 - 3/5 x0 x1"
    assert str(NCPoly.zero(ALPH_X)) == "0"
    assert str(NCPoly.one(ALPH_X)) == "1"


def test_parse_print_round_trip():
    texts = [
        "x0 x1 - l01 x1 x0",
        "-1 + x0 + (2 + 3*i) x1 x0",
        "- x0 - 3/5 x0 x1",
        "2*lam/(lam^2 + 1) x1 x0 + x2",
        "dx0 dx1 dx3 dx2",
        "x0^2 + x1^2",
    ]
    for text in texts:
        alphabet = ALPH_FORMS if "dx" in text else ALPH_X
        p = parse_poly(alphabet, text)
        assert parse_poly(alphabet, str(p)) == p


def test_parse_powers_and_division():
    p = parse_poly(ALPH_X, "x0^3")
    assert p.coefficient(["x0", "x0", "x0"]) == Scalar.one()
    q = parse_poly(ALPH_X, "lam^2 x0 / 2")
    lam = Scalar.variable("lam")
    assert q.coefficient(["x0"]) == lam * lam / Scalar.from_int(2)
    with pytest.raises(ValueError):
        parse_poly(ALPH_X, "x0^-1")
    with pytest.raises(ValueError):
        parse_poly(ALPH_X, "x0 / x1")
    with pytest.raises(ValueError):
        parse_poly(ALPH_X, "x0 +")


def test_reversed_words():
    x0 = gen(ALPH_X, "x0")
    x1 = gen(ALPH_X, "x1")
    x2 = gen(ALPH_X, "x2")
    p = x0 * x1 + x2 * 2
    r = p.reversed_words()
    assert r == x1 * x0 + x2 * 2


def test_poly_arith_wrapper():
    x0 = gen(ALPH_X, "x0")
    x1 = gen(ALPH_X, "x1")
    assert poly_arith(x0, x1, "add") == x0 + x1
    assert poly_arith(x0, x1, "sub") == x0 - x1
    assert poly_arith(x0, x1, "mul") == x0 * x1
    with pytest.raises(ValueError):
        poly_arith(x0, x1, "div")


def test_misc_constructors():
    c = NCPoly.constant(ALPH_X, Scalar.from_fraction(1, 2))
    assert c + c == NCPoly.one(ALPH_X)
    m = NCPoly.monomial(ALPH_X, ["x0", "x2"], 3)
    assert m.degree() == 2
    assert m.coefficient((0, 2)) == Scalar.from_int(3)
    assert NCPoly.zero(ALPH_X).degree() == 0
    p = gen(ALPH_X, "x0") ** 2
    assert p.coefficient(["x0", "x0"]) == Scalar.one()
    assert gen(ALPH_X, "x0") ** 0 == NCPoly.one(ALPH_X)
