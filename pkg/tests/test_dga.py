"""Exterior calculus: reduction, differential, audits, sphere descent."""

import random

import pytest

from lpalg.dga import (
    FormSystem,
    differential,
    form_reduce,
    form_system,
    four_form,
    four_form_audit,
    lift_to_forms,
    orientation_residuals,
    sphere_calculus,
    three_form_audit,
    three_form_basis,
)
from lpalg.errors import AlphabetMismatch, AssumptionViolated
from lpalg.freepoly import ALPH_FORMS, ALPH_M, ALPH_X, NCPoly
from lpalg.params import ParameterSet, _build_tables, make_family
from lpalg.plane import SphereAlgebra
from lpalg.scalars import Scalar

ONE = Scalar.one()
ZERO = Scalar.zero()


def dxw(*letters):
    return tuple(4 + k for k in letters)


def mono(word, coeff=None):
    return NCPoly(ALPH_FORMS, {tuple(word): ONE if coeff is None else coeff})


CONCRETE = [
    ("classical", {}),
    ("sklyanin_k", {"a": "1/2", "b": "1/3"}),
    ("sklyanin_C", {"alpha": "1/2", "beta": "1/3"}),
    ("theta", {"lam": "2/1"}),
    ("cdv", {"t0": "1", "t1": "2", "t2": "3", "t3": "5"}),
]


def minus_branch_params():
    l, p = _build_tables(ONE, -ONE, ONE, ZERO, ZERO, ZERO, ZERO, ZERO, ZERO)
    return ParameterSet(l, p)


def test_form_system_fields_and_rule_table():
    ps = make_family("theta", lam="2/1")
    fs = form_system(ps)
    assert fs.params is ps
    assert fs.assumptions == {"l_nonzero": True, "branch": "plus"}
    assert len(fs.rules) == 64
    assert fs.rules[dxw(1, 1)].is_zero()
    two_form = fs.rules[dxw(1, 0)]
    assert two_form == mono(dxw(0, 1), -ps.l[1][0]) + mono(dxw(2, 3), -ps.p[1][0])
    assert fs.rules[dxw(1, 2, 3)] == mono(dxw(1, 3, 2), -ps.l[0][1])
    assert fs.rules[dxw(1, 0, 1)] == mono(dxw(1, 3, 2), -ps.p[0][1])
    for nu in range(4):
        assert fs.theta_word(nu) not in fs.rules
    assert fs.rules[(4, 1)] == mono((1, 4), ps.l[0][1]) + mono((3, 6), ps.p[0][1])
    assert fs.rules[(1, 0)] == mono((0, 1), ps.l[1][0]) + mono((2, 3), ps.p[1][0])


def test_reduce_examples():
    ps = make_family("theta", lam="2/1")
    fs = form_system(ps)
    assert form_reduce(mono(dxw(1, 1)), fs).is_zero()
    theta0 = mono(dxw(1, 3, 2))
    assert form_reduce(mono(dxw(1, 2, 3)), fs) == theta0.scale(-ps.l[0][1])
    assert form_reduce(mono(dxw(1, 0, 1)), fs) == theta0.scale(-ps.p[0][1])
    assert not form_reduce(mono(dxw(1, 2, 3)) - theta0, fs).is_zero()
    got = form_reduce(mono(dxw(3, 2)), fs)
    assert got == mono(dxw(2, 3), -ps.l[3][2]) + mono(dxw(0, 1), -ps.p[3][2])
    assert form_reduce(mono(dxw(0, 1, 2, 3, 0)), fs).is_zero()
    mixed = mono((2, 0, 4 + 1))
    red = form_reduce(mixed, fs)
    for word in red.words():
        assert word[0] <= word[1] < 4 <= word[2]


def test_reduce_is_idempotent_and_linear():
    ps = make_family("sklyanin_k", a="1/2", b="1/3")
    fs = form_system(ps)
    rng = random.Random(20260821)
    words = [
        tuple(rng.randrange(8) for _ in range(rng.randrange(1, 5)))
        for _ in range(12)
    ]
    f = NCPoly(ALPH_FORMS, {})
    for w in words:
        f = f + mono(w, Scalar.from_int(rng.randrange(-3, 4)))
    g = mono(words[0]) + mono(words[5])
    red_f = form_reduce(f, fs)
    assert form_reduce(red_f, fs) == red_f
    assert form_reduce(f + g, fs) == red_f + form_reduce(g, fs)


def test_differential_basics():
    ps = make_family("theta", lam="2/1")
    fs = form_system(ps)
    x0 = NCPoly.generator(ALPH_X, "x0")
    x1 = NCPoly.generator(ALPH_X, "x1")
    leibniz = mono((4, 1)) + mono((0, 5))
    assert differential(x0 * x1, fs) == form_reduce(leibniz, fs)
    assert differential(mono((4,)), fs).is_zero()
    radius = NCPoly(ALPH_X, {(k, k): ONE for k in range(4)})
    expect = NCPoly(ALPH_FORMS, {(k, 4 + k): Scalar.from_int(2) for k in range(4)})
    assert differential(radius, fs) == expect
    with pytest.raises(AlphabetMismatch):
        lift_to_forms(NCPoly.generator(ALPH_M, "M00"))


@pytest.mark.parametrize("family,args", CONCRETE)
def test_differential_squares_to_zero(family, args):
    fs = form_system(make_family(family, **args))
    words = [()]
    for _ in range(3):
        words = [w + (k,) for w in words for k in range(8)]
        for w in words:
            if ALPH_FORMS.form_degree(w) > 2:
                continue
            first = differential(mono(w), fs)
            assert differential(first, fs).is_zero(), ALPH_FORMS.word_str(w)


def test_leibniz_on_random_samples():
    for ps in (make_family("theta", lam="2/1"), make_family("theta")):
        fs = form_system(ps)
        rng = random.Random(20260821)
        for _ in range(8):
            fw = tuple(rng.randrange(8) for _ in range(rng.randrange(1, 3)))
            g = NCPoly(ALPH_FORMS, {})
            for _ in range(2):
                gw = tuple(rng.randrange(8) for _ in range(rng.randrange(1, 3)))
                g = g + mono(gw, Scalar.from_int(rng.randrange(-3, 4)))
            f = mono(fw)
            sign = -ONE if ALPH_FORMS.form_degree(fw) % 2 else ONE
            lhs = differential(f * g, fs)
            rhs = form_reduce(
                differential(f, fs) * g + (f * differential(g, fs)).scale(sign), fs
            )
            assert lhs == rhs


@pytest.mark.parametrize("family,args", CONCRETE)
def test_three_form_audit_concrete(family, args):
    rep = three_form_audit(form_system(make_family(family, **args)))
    assert rep.passed, rep.residuals[:4]
    assert rep.data["dimension"] == 4


@pytest.mark.parametrize("family", ["theta", "sklyanin_C"])
def test_three_form_audit_symbolic(family):
    rep = three_form_audit(form_system(make_family(family)))
    assert rep.passed, rep.residuals[:4]
    assert rep.data["dimension"] == 4


@pytest.mark.parametrize(
    "family,args",
    [
        ("classical", {}),
        ("theta", {"lam": "2/1"}),
        ("sklyanin_k", {"a": "1/2", "b": "1/3"}),
    ],
)
def test_four_form_audit_concrete(family, args):
    ps = make_family(family, **args)
    rep = four_form_audit(form_system(ps))
    assert rep.passed, rep.residuals[:4]
    eta = rep.data["eta"]
    assert len(eta) == 36
    assert eta["0132"] == "1"
    assert eta["0123"] == str(-ps.l[0][1])
    assert eta["0101"] == str(-ps.p[0][1])
    assert eta["0213"] == str(ps.l[0][1] * ps.l[0][3])


def test_orientation_residuals_vanish_for_families():
    for family, args in CONCRETE:
        assert orientation_residuals(make_family(family, **args)) == []
    assert orientation_residuals(make_family("sklyanin_C")) == []


def test_minus_branch_accepts_vanishing_p_and_audits():
    ps = minus_branch_params()
    assert ps.flags.valid_def21 and ps.flags.hyp_l02 == "minus"
    fs = form_system(ps)
    assert fs.assumptions["branch"] == "minus"
    rep = three_form_audit(fs)
    assert rep.passed, rep.residuals[:4]
    with pytest.raises(AssumptionViolated):
        four_form_audit(fs)
    with pytest.raises(AssumptionViolated):
        four_form(fs)


def test_minus_branch_with_nonzero_p_is_refused():
    base = make_family("theta", lam="2/1")
    l = [list(row) for row in base.l]
    p = [list(row) for row in base.p]
    for a, b in ((0, 3), (3, 0), (1, 2), (2, 1)):
        l[a][b] = -l[a][b]
    flipped = ParameterSet(l, p)
    assert flipped.flags.valid_def21 and flipped.flags.hyp_l02 == "minus"
    with pytest.raises(AssumptionViolated):
        form_system(flipped)


def test_vanishing_l_and_invalid_tables_are_refused():
    with pytest.raises(AssumptionViolated):
        form_system(make_family("zero_l", p10="2", p20="3", p30="5"))
    l, p = _build_tables(
        Scalar.from_int(2), ONE, ONE, ZERO, ZERO, ZERO, ZERO, ZERO, ZERO
    )
    broken = ParameterSet(l, p)
    assert not broken.flags.valid_def21
    with pytest.raises(AssumptionViolated):
        form_system(broken)


def test_three_form_basis_and_four_form_accessors():
    ps = make_family("theta", lam="2/1")
    fs = form_system(ps)
    basis = three_form_basis(fs)
    assert basis.theta == {0: dxw(1, 3, 2), 1: dxw(0, 2, 3), 2: dxw(3, 1, 0), 3: dxw(2, 0, 1)}
    assert len(basis.coefficients) == 36
    assert basis.coefficients[dxw(1, 2, 3)] == (0, -ps.l[0][1])
    top = four_form(fs)
    assert top.omega == dxw(0, 1, 3, 2)
    assert len(top.eta) == 36
    assert top.eta[dxw(0, 1, 3, 2)] == ONE
    assert top.eta[dxw(0, 1, 2, 3)] == -ps.l[0][1]


def test_sphere_calculus_examples():
    ps = make_family("theta", lam="2/1")
    fs = form_system(ps)
    s = SphereAlgebra(ps)
    fss = sphere_calculus(fs, s)
    euler = NCPoly(ALPH_FORMS, {(k, 4 + k): ONE for k in range(4)})
    assert fss.reduce(euler).is_zero()
    assert not fs.reduce(euler).is_zero()
    radius = NCPoly(ALPH_X, {(k, k): ONE for k in range(4)}) - NCPoly.one(ALPH_X)
    assert differential(radius, fss).is_zero()
    assert fss.reduce(mono((3, 4 + 3))) == -mono((0, 4)) - mono((1, 5)) - mono((2, 6))
    for w in ((3, 3), (3, 3, 4), (3, 4 + 3, 2)):
        red = fss.reduce(mono(w))
        assert (3, 3) not in [v[k : k + 2] for v in red.words() for k in range(len(v) - 1)]
        second = differential(differential(mono(w), fss), fss)
        assert second.is_zero()
    other = SphereAlgebra(make_family("classical"))
    with pytest.raises(ValueError):
        sphere_calculus(fs, other)
