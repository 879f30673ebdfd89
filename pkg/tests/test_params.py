"""Index combinatorics, family constructors, and table validation."""

import pytest

from lpalg.errors import DegenerateFamilyParameters, SchemaError, UndeclaredConjugation
from lpalg.params import (
    INDICES,
    ParameterSet,
    centrality_condition,
    ells_report,
    index_identities_report,
    make_family,
    params_from_obj,
    params_to_obj,
    prime_pair,
    star_compatibility,
    tilde_row,
    validate,
)
from lpalg.scalars import Scalar


def tables_equal(ps_a, ps_b):
    return ps_a.l == ps_b.l and ps_a.p == ps_b.p


def test_prime_pair_examples():
    assert prime_pair((1, 0)) == (3, 2)
    assert prime_pair((0, 1)) == (2, 3)
    assert prime_pair((3, 1)) == (2, 0)
    for mu in INDICES:
        assert prime_pair((mu, mu)) == (mu, mu)
    for mu in INDICES:
        for nu in INDICES:
            assert prime_pair(prime_pair((mu, nu))) == (mu, nu)


def test_tilde_table_values():
    assert tuple(tilde_row(0)) == (0, 1, 2, 3)
    assert tuple(tilde_row(1)) == (1, 0, 3, 2)
    assert tuple(tilde_row(2)) == (2, 3, 0, 1)
    assert tuple(tilde_row(3)) == (3, 2, 1, 0)


def test_index_identities_report_passes():
    rep = index_identities_report()
    assert rep.status == "pass"
    assert rep.residuals == []


def test_classical_flags():
    ps = make_family("classical")
    assert validate(ps).status == "pass"
    assert ps.flags.valid_def21
    assert ps.flags.hyp_l02 == "plus"
    assert ps.flags.centrality_R
    assert ps.flags.star_compatible
    assert ps.variables == ()
    one = Scalar.one()
    for mu in INDICES:
        for nu in INDICES:
            assert ps.l[mu][nu] == one
            assert ps.p[mu][nu].is_zero()


def test_sklyanin_k_symbolic():
    ps = make_family("sklyanin_k")
    assert ps.variables == ("a", "b")
    assert validate(ps).status == "pass"
    assert ps.flags.hyp_l02 == "plus"
    assert not ps.flags.centrality_R
    assert not ps.flags.star_compatible
    a = Scalar.variable("a")
    one = Scalar.one()
    assert ps.l[0][1] == (one + a) / (one - a)
    assert ps.p[0][1] == ps.l[0][1] - one
    assert ps.p[2][3] == one + ps.l[0][1]
    assert ps.p[1][3] == -(one + ps.l[0][2])


def test_sklyanin_k_special_point():
    ps = make_family("sklyanin_k", a=0, b=0)
    two = Scalar.from_int(2)
    assert ps.flags.valid_def21
    for mu in INDICES:
        for nu in INDICES:
            assert ps.l[mu][nu] == Scalar.one()
    assert ps.p[0][1].is_zero() and ps.p[0][2].is_zero() and ps.p[0][3].is_zero()
    assert ps.p[2][3] == two
    assert ps.p[3][1] == two
    assert ps.p[1][2] == two


def test_sklyanin_k_degenerate_arguments():
    with pytest.raises(DegenerateFamilyParameters):
        make_family("sklyanin_k", a=1, b=0)
    with pytest.raises(DegenerateFamilyParameters):
        make_family("sklyanin_k", a=0, b=-1)
    with pytest.raises(DegenerateFamilyParameters):
        make_family("sklyanin_k", a=-1, b=0)


def test_sklyanin_k_signed_square_sum_is_central():
    ps = make_family("sklyanin_k")
    rep = centrality_condition(ps, (-1, 1, 1, 1))
    assert rep.status == "pass"
    assert centrality_condition(ps, (1, 1, 1, 1)).status == "fail"


def test_sklyanin_C_symbolic():
    ps = make_family("sklyanin_C")
    assert ps.variables == ("alpha", "beta")
    assert validate(ps).status == "pass"
    assert ps.flags.hyp_l02 == "plus"
    assert ps.flags.centrality_R
    assert ps.flags.star_compatible
    i = Scalar.i()
    one = Scalar.one()
    assert ps.p[0][1] == i * (one - ps.l[0][1])
    assert ps.p[2][3] == i * (one + ps.l[0][1])
    assert ps.p[0][3] == i * (one - ps.l[0][3])


def test_sklyanin_C_second_central_vector():
    ps = make_family("sklyanin_C")
    one = Scalar.one()
    c = (
        Scalar.zero(),
        ps.l[0][3] * (one + ps.l[0][1]),
        one + ps.l[0][2],
        one + ps.l[0][3],
    )
    assert centrality_condition(ps, c).status == "pass"


def test_theta_symbolic_and_concrete():
    ps = make_family("theta")
    assert ps.variables == ("lam",)
    assert validate(ps).status == "pass"
    assert ps.flags.hyp_l02 == "plus"
    assert ps.flags.centrality_R
    assert ps.flags.star_compatible
    assert ells_report(ps).status == "pass"

    at2 = make_family("theta", lam=2)
    assert at2.variables == ()
    assert at2.l[0][1] == Scalar.from_fraction(4, 5)
    assert at2.p[0][1] == Scalar.from_fraction(-3, 5)
    assert at2.l[0][3] == Scalar.one()
    assert at2.p[0][3].is_zero()
    assert at2.flags.valid_def21 and at2.flags.centrality_R

    with pytest.raises(DegenerateFamilyParameters):
        make_family("theta", lam="i")


def test_theta_centrality_equal_weights_note():
    ps = make_family("theta")
    rep = centrality_condition(ps, (1, 1, 1, 1))
    assert rep.status == "pass"
    assert rep.note is not None


def test_cdv_symbolic():
    ps = make_family("cdv")
    assert ps.variables == ("t0", "t1", "t2", "t3")
    assert validate(ps).status == "pass"
    assert ps.flags.hyp_l02 == "plus"
    assert ps.flags.centrality_R
    assert ps.flags.star_compatible


def test_cdv_parameter_reduction():
    lam = [Scalar.variable(f"t{k}") ** 2 for k in INDICES]
    one = Scalar.one()

    def abc(mu, nu):
        pm, pn = prime_pair((mu, nu))
        a = lam[mu] * lam[pn] + lam[nu] * lam[pm]
        b = lam[mu] * lam[pm] + lam[nu] * lam[pn]
        sign = 1 if (mu + nu) % 2 == 0 else -1
        c = (lam[pm] * lam[pm] - lam[pn] * lam[pn]) * sign
        return a, b, c

    a01, b01, c01 = abc(0, 1)
    a02, b02, c02 = abc(0, 2)
    a03, b03, c03 = abc(0, 3)
    a12, b12, c12 = abc(1, 2)
    a13, b13, c13 = abc(1, 3)
    a23, b23, c23 = abc(2, 3)
    assert (a01 - a02).is_zero()
    assert (b01 - a03).is_zero()
    assert (b02 - b03).is_zero()
    for mu in INDICES:
        total = Scalar.zero()
        for nu in INDICES:
            if nu != mu:
                _, _, c = abc(nu, mu)
                total = total + c
        assert total.is_zero()
    l01, l03 = b01 / a01, b03 / a03
    q01, q02, q03 = c01 / a01, c02 / a02, c03 / a03
    q12, q13, q23 = c12 / a12, c13 / a13, c23 / a23
    assert (q23 - (q02 + q12 * l01)).is_zero()
    assert (q13 - (q01 - q12 * l01)).is_zero()
    assert (q02 - (-q01 - q03 * l01)).is_zero()
    assert (l03 * l03 - one - q03 * q12).is_zero()
    assert (l01 * l01 + q01 * q01 + l01 * q01 * (q03 - q12) - one).is_zero()


def test_cdv_concrete_and_degenerate():
    ps = make_family("cdv", t0=1, t1=2, t2=3, t3=5)
    assert ps.flags.valid_def21
    assert ps.flags.hyp_l02 == "plus"
    with pytest.raises(DegenerateFamilyParameters):
        make_family("cdv", t0=1, t1=1, t2=1, t3="i")
    with pytest.raises(DegenerateFamilyParameters):
        make_family("cdv", t0=0, t1=1, t2=1, t3=1)


def test_zero_l():
    ps = make_family("zero_l", p10=1, p20=1, p30=1)
    assert validate(ps).status == "pass"
    assert ps.flags.valid_def21
    assert ps.flags.hyp_l02 == "plus"
    assert not ps.flags.centrality_R
    assert not ps.flags.star_compatible
    sym = make_family("zero_l")
    assert validate(sym).status == "pass"
    with pytest.raises(DegenerateFamilyParameters):
        make_family("zero_l", p10=0, p20=1, p30=1)


def test_minus_branch_flagging():
    def q(n, d=1):
        return Scalar.from_fraction(n, d)

    l = [[0] * 4 for _ in range(4)]
    p = [[0] * 4 for _ in range(4)]
    for mu in INDICES:
        l[mu][mu] = 1
    for (mu, nu), val in (
        ((0, 1), q(3, 5)), ((2, 3), q(3, 5)),
        ((0, 2), q(-3, 5)), ((1, 3), q(-3, 5)),
        ((0, 3), q(1)), ((1, 2), q(1)),
    ):
        l[mu][nu] = val
        l[nu][mu] = val
    for (mu, nu), val in (
        ((0, 1), q(4, 5)), ((2, 3), q(-4, 5)),
        ((0, 2), q(4, 5)), ((1, 3), q(-4, 5)),
    ):
        p[mu][nu] = val
        p[nu][mu] = -val
    ps = ParameterSet(l, p)
    assert ps.flags.valid_def21
    assert ps.flags.hyp_l02 == "minus"
    assert ps.flags.minus_p_zero is False

    l2 = [[0] * 4 for _ in range(4)]
    p2 = [[0] * 4 for _ in range(4)]
    for mu in INDICES:
        l2[mu][mu] = 1
    for (mu, nu), val in (
        ((0, 1), q(1)), ((2, 3), q(1)),
        ((0, 2), q(-1)), ((1, 3), q(-1)),
        ((0, 3), q(1)), ((1, 2), q(1)),
    ):
        l2[mu][nu] = val
        l2[nu][mu] = val
    p2[2][3] = q(5)
    p2[3][2] = q(-5)
    ps2 = ParameterSet(l2, p2)
    assert ps2.flags.valid_def21
    assert ps2.flags.hyp_l02 == "minus"
    assert ps2.flags.minus_p_zero is True


def test_invalid_tables_are_flagged_not_raised():
    l = [[1 if mu == nu else 2 for nu in INDICES] for mu in INDICES]
    p = [[0] * 4 for _ in range(4)]
    ps = ParameterSet(l, p)
    assert not ps.flags.valid_def21
    rep = validate(ps)
    assert rep.status == "fail"
    assert any(loc.startswith("c:") for loc, _ in rep.residuals)


def test_star_compatibility_requires_rules():
    sym = make_family("theta")
    stripped = ParameterSet(sym.l, sym.p)
    assert not stripped.flags.star_compatible
    with pytest.raises(UndeclaredConjugation):
        star_compatibility(stripped)
    rep = star_compatibility(sym)
    assert rep.status == "pass"


def test_star_compatibility_reports_failures():
    ps = make_family("zero_l", p10=1, p20=1, p30=1)
    rep = star_compatibility(ps)
    assert rep.status == "fail"
    assert rep.residuals


def test_family_argument_coercion():
    via_str = make_family("theta", lam="2")
    via_int = make_family("theta", lam=2)
    assert tables_equal(via_str, via_int)


def test_json_family_form():
    ps = params_from_obj({"family": "theta", "args": {"lam": "2"}})
    assert tables_equal(ps, make_family("theta", lam=2))
    with pytest.raises(SchemaError):
        params_from_obj({"family": "nope"})
    with pytest.raises(SchemaError):
        params_from_obj({"family": "theta", "args": {"bogus": 1}})
    with pytest.raises(SchemaError):
        params_from_obj({"family": "theta", "extra": 1})


def test_json_explicit_form_round_trip():
    ps = make_family("sklyanin_C")
    obj = params_to_obj(ps)
    back = params_from_obj(obj)
    assert tables_equal(ps, back)
    assert back.flags.valid_def21


def test_json_schema_errors():
    with pytest.raises(SchemaError):
        params_from_obj([])
    with pytest.raises(SchemaError):
        params_from_obj({"l": [[1] * 4] * 4})
    with pytest.raises(SchemaError):
        params_from_obj({"l": [[1] * 4] * 3, "p": [[0] * 4] * 4})
    with pytest.raises(SchemaError):
        params_from_obj(
            {"l": [["1)"] * 4] * 4, "p": [[0] * 4] * 4}
        )
    with pytest.raises(SchemaError):
        params_from_obj(
            {"variables": [], "l": [["u"] * 4] * 4, "p": [[0] * 4] * 4}
        )
