"""Exterior calculus: mixed rewriting, the differential, form bases, spheres."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import AlphabetMismatch, AssumptionViolated
from .freepoly import ALPH_FORMS, ALPH_X, NCPoly
from .params import INDICES, ParameterSet, prime_pair, tilde_row
from .plane import SphereAlgebra
from .report import IdentityReport
from .rewrite import (
    RewriteSystem,
    component_from_relations,
    echelonize,
    matrix_rank,
    reduce_against,
    relation_rows,
    span_rank,
    word_universe,
)
from .scalars import Scalar

_DX = 4


def _dx(k: int) -> int:
    return _DX + k


_DX_LETTERS = tuple(_dx(k) for k in INDICES)


def _add(acc: dict, key, coeff):
    if coeff.is_zero():
        return
    cur = acc.get(key)
    s = coeff if cur is None else cur + coeff
    if s.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = s


def _engine_rules(ps: ParameterSet, sphere: bool) -> dict:
    """Rules that order coordinates and push them left of one-forms."""
    rules = {}
    for mu in INDICES:
        for nu in INDICES:
            pm, pn = prime_pair((mu, nu))
            if mu > nu:
                terms: dict = {}
                _add(terms, (nu, mu), ps.l[mu][nu])
                _add(terms, (pn, pm), ps.p[mu][nu])
                rules[(mu, nu)] = NCPoly(ALPH_FORMS, terms)
            terms = {}
            _add(terms, (nu, _dx(mu)), ps.l[mu][nu])
            _add(terms, (pn, _dx(pm)), ps.p[mu][nu])
            rules[(_dx(mu), nu)] = NCPoly(ALPH_FORMS, terms)
    if sphere:
        one = Scalar.one()
        rules[(3, 3)] = NCPoly(
            ALPH_FORMS, {(): one, (0, 0): -one, (1, 1): -one, (2, 2): -one}
        )
        rules[(3, _dx(3))] = NCPoly(
            ALPH_FORMS,
            {(0, _dx(0)): -one, (1, _dx(1)): -one, (2, _dx(2)): -one},
        )
    return rules


def _pair_norm_rules(ps: ParameterSet) -> dict:
    """Oriented two-form rules: repeated letters vanish, descending pairs
    become ascending combinations."""
    rules = {}
    for a in INDICES:
        rules[(_dx(a), _dx(a))] = NCPoly.zero(ALPH_FORMS)
        for b in INDICES:
            if a <= b:
                continue
            pm, pn = prime_pair((a, b))
            terms: dict = {}
            _add(terms, (_dx(b), _dx(a)), -ps.l[a][b])
            _add(terms, (_dx(pn), _dx(pm)), -ps.p[a][b])
            rules[(_dx(a), _dx(b))] = NCPoly(ALPH_FORMS, terms)
    return rules


def _triple_tables(ps: ParameterSet, minus: bool):
    """Normalization of every length-3 one-form word onto the theta basis.

    Keys and values use bare coordinate indices; the theta word for nu is
    (nu~, mu~_nu, mu_nu)."""
    one = Scalar.one()
    l01, l03 = ps.l[0][1], ps.l[0][3]
    flip = one if minus else -one
    theta = {}
    table: dict = {}
    for nu in INDICES:
        row = tilde_row(nu)
        nt, mu, mt = row.nu_tilde, row.mu, row.mu_tilde
        theta[nu] = (nt, mt, mu)
        entries = {
            (nt, mt, mu): one,
            (mu, mt, nt): flip,
            (mt, mu, nt): -flip * l01,
            (nt, mu, mt): -l01,
            (mu, nt, mt): l01 * l03,
            (mt, nt, mu): flip * l01 * l03,
            (nt, nu, nt): -ps.p[nu][nt],
            (mu, nu, mu): ps.p[nu][mu],
            (mt, nu, mt): -l01 * ps.p[nu][mt],
        }
        for word, coeff in entries.items():
            table[word] = (nu, coeff)
    return theta, table


class FormSystem:
    """Mixed coordinate/one-form rewrite data for one parameter set."""

    __slots__ = (
        "params",
        "assumptions",
        "sphere",
        "engine",
        "rules",
        "theta",
        "omega",
        "_table3",
    )

    def __init__(self, ps: ParameterSet, *, sphere: SphereAlgebra | None = None):
        if not ps.flags.valid_def21:
            raise AssumptionViolated(
                "parameter tables violate the defining conditions; "
                "the calculus is only derived for valid tables"
            )
        branch = ps.flags.hyp_l02
        if branch == "neither":
            raise AssumptionViolated(
                "l02 equals neither l01*l03 nor -l01*l03; no consistent "
                "three-form normalization exists"
            )
        for j in (1, 2, 3):
            if ps.l[0][j].is_zero():
                raise AssumptionViolated(
                    f"l0{j} vanishes; the three-form normalization divides by it"
                )
        if branch == "minus":
            for j in (1, 2, 3):
                if not ps.p[0][j].is_zero():
                    raise AssumptionViolated(
                        "the minus branch forces p01 = p02 = p03 = 0, "
                        f"but p0{j} is nonzero"
                    )
        if sphere is not None and sphere.params is not ps:
            raise ValueError("sphere quotient was built from a different parameter set")
        self.params = ps
        self.assumptions = {"l_nonzero": True, "branch": branch}
        self.sphere = sphere
        self.engine = RewriteSystem(
            ALPH_FORMS,
            _engine_rules(ps, sphere is not None),
            ps,
            order="coordinates before one-forms, then coordinate order",
        )
        self.theta, self._table3 = _triple_tables(ps, branch == "minus")
        self.omega = (0, 1, 3, 2)
        rules = dict(self.engine.rules)
        rules.update(_pair_norm_rules(ps))
        for word, (nu, coeff) in sorted(self._table3.items()):
            pattern = tuple(_dx(k) for k in word)
            if word == self.theta[nu]:
                continue
            target = tuple(_dx(k) for k in self.theta[nu])
            rules[pattern] = NCPoly(ALPH_FORMS, {target: coeff} if not coeff.is_zero() else {})
        self.rules = rules
        bad = orientation_residuals(ps)
        if bad:
            where = ", ".join(loc for loc, _ in bad[:3])
            raise AssumptionViolated(
                f"the oriented relations are mutually inconsistent at {where}"
            )

    def theta_word(self, nu: int) -> tuple:
        return tuple(_dx(k) for k in self.theta[nu])

    def omega_word(self) -> tuple:
        return tuple(_dx(k) for k in self.omega)

    def _suffix_norm(self, suffix: tuple) -> dict:
        """Normalize a pure one-form word; keys are full-alphabet words."""
        n = len(suffix)
        if n <= 1:
            return {suffix: Scalar.one()}
        word = tuple(k - _DX for k in suffix)
        if any(word[k] == word[k + 1] for k in range(n - 1)):
            return {}
        if n == 2:
            a, b = word
            if a < b:
                return {suffix: Scalar.one()}
            pm, pn = prime_pair((a, b))
            out: dict = {}
            _add(out, (_dx(b), _dx(a)), -self.params.l[a][b])
            _add(out, (_dx(pn), _dx(pm)), -self.params.p[a][b])
            return out
        if n == 3:
            nu, coeff = self._table3[word]
            if coeff.is_zero():
                return {}
            return {self.theta_word(nu): coeff}
        if n == 4:
            nu, coeff = self._table3.get(word[:3], (None, Scalar.zero()))
            if nu is None or coeff.is_zero() or word[3] != nu:
                return {}
            return {self.omega_word(): -coeff}
        return {}

    def reduce(self, f: NCPoly) -> NCPoly:
        staged = self.engine.reduce(lift_to_forms(f))
        acc: dict = {}
        for term, coeff in staged.terms.items():
            cut = len(term)
            for k, letter in enumerate(term):
                if letter >= _DX:
                    cut = k
                    break
            prefix, suffix = term[:cut], term[cut:]
            for tail, c in self._suffix_norm(suffix).items():
                _add(acc, prefix + tail, coeff * c)
        return NCPoly(ALPH_FORMS, acc)


def orientation_residuals(ps: ParameterSet):
    """Substituting each oriented relation into its partner returns the
    original word; both directions reduce to the same two scalars."""
    one = Scalar.one()
    out = []
    for mu in INDICES:
        for nu in INDICES:
            pm, pn = prime_pair((mu, nu))
            r1 = ps.l[mu][nu] * ps.l[nu][mu] + ps.p[mu][nu] * ps.p[pn][pm] - one
            r2 = ps.l[mu][nu] * ps.p[nu][mu] + ps.p[mu][nu] * ps.l[pn][pm]
            out.append((f"({mu},{nu}):kept", r1))
            out.append((f"({mu},{nu}):swapped", r2))
    return [(loc, r) for loc, r in out if not r.is_zero()]


def form_system(ps: ParameterSet) -> FormSystem:
    return FormSystem(ps)


def form_reduce(f: NCPoly, fs: FormSystem) -> NCPoly:
    return fs.reduce(f)


def lift_to_forms(f: NCPoly) -> NCPoly:
    """View a coordinate polynomial inside the mixed alphabet."""
    if f.alphabet is ALPH_FORMS:
        return f
    if f.alphabet is ALPH_X:
        return NCPoly(ALPH_FORMS, dict(f.terms))
    raise AlphabetMismatch(
        f"cannot lift a polynomial over {f.alphabet!r} into the form algebra"
    )


def differential(f: NCPoly, fs: FormSystem) -> NCPoly:
    """Graded derivation with d(x) = dx and d(dx) = 0, then reduced."""
    f = lift_to_forms(f)
    acc: dict = {}
    for word, coeff in f.terms.items():
        negate = False
        for k, letter in enumerate(word):
            if letter >= _DX:
                negate = not negate
                continue
            target = word[:k] + (_dx(letter),) + word[k + 1:]
            _add(acc, target, -coeff if negate else coeff)
    return fs.reduce(NCPoly(ALPH_FORMS, acc))


def _dx_word(*letters) -> tuple:
    return tuple(_dx(k) for k in letters)


def _dx_mono(letters, coeff=None) -> NCPoly:
    c = Scalar.one() if coeff is None else coeff
    return NCPoly(ALPH_FORMS, {_dx_word(*letters): c})


def _dx_relations(ps: ParameterSet) -> list:
    """Quadratic one-form relations as free polynomials."""
    rels = []
    for a in INDICES:
        rels.append(_dx_mono((a, a)))
        for b in INDICES:
            if a <= b:
                continue
            pm, pn = prime_pair((a, b))
            rel = (
                _dx_mono((a, b))
                + _dx_mono((b, a), ps.l[a][b])
                + _dx_mono((pn, pm), ps.p[a][b])
            )
            rels.append(rel)
    return rels


def _degree3_families(ps: ParameterSet):
    """The eight consequence identities, as (label, lhs - rhs) per pair."""
    out = []
    for mu in INDICES:
        for nu in INDICES:
            if mu == nu:
                continue
            pm, pn = prime_pair((mu, nu))
            l, p = ps.l[mu][nu], ps.p[mu][nu]
            tag = f"({mu},{nu})"
            out.append(
                (
                    f"l1{tag}",
                    _dx_mono((mu, nu, mu), l) + _dx_mono((mu, pn, pm), p),
                )
            )
            out.append(
                (
                    f"l2{tag}",
                    _dx_mono((nu, mu, nu)) + _dx_mono((nu, pn, pm), p),
                )
            )
            out.append(
                (
                    f"l3{tag}",
                    _dx_mono((pm, mu, nu))
                    + _dx_mono((pm, nu, mu), l)
                    + _dx_mono((pm, pn, pm), p),
                )
            )
            out.append(
                (
                    f"l4{tag}",
                    _dx_mono((pn, mu, nu)) + _dx_mono((pn, nu, mu), l),
                )
            )
            out.append(
                (
                    f"r1{tag}",
                    _dx_mono((mu, nu, mu)) + _dx_mono((pn, pm, mu), p),
                )
            )
            out.append(
                (
                    f"r2{tag}",
                    _dx_mono((nu, mu, nu), l) + _dx_mono((pn, pm, nu), p),
                )
            )
            out.append(
                (
                    f"r3{tag}",
                    _dx_mono((mu, nu, pm)) + _dx_mono((nu, mu, pm), l),
                )
            )
            out.append(
                (
                    f"r4{tag}",
                    _dx_mono((mu, nu, pn))
                    + _dx_mono((nu, mu, pn), l)
                    + _dx_mono((pn, pm, pn), p),
                )
            )
    return out


def three_form_audit(fs: FormSystem) -> IdentityReport:
    """Degree-3 consequences, their mutual derivability, and the basis."""
    ps = fs.params
    pairs = []
    families = _degree3_families(ps)
    for label, rel in families:
        pairs.append((label, fs.reduce(rel)))

    universe = word_universe(ALPH_FORMS, 3, _DX_LETTERS)
    pos = {w: k for k, w in enumerate(universe)}

    def as_row(rel):
        return {pos[w]: c for w, c in rel.terms.items()}

    generators = [as_row(rel) for label, rel in families if label[:2] in ("l2", "l4", "r1", "r3")]
    targets = [
        (label, as_row(rel))
        for label, rel in families
        if label[:2] in ("l1", "l3", "r2", "r4")
    ]
    ech = echelonize(generators, lambda c: c)
    for label, row in targets:
        rest = reduce_against(row, ech)
        pairs.append(
            (f"derived:{label}", "0" if not rest else f"{len(rest)} terms escape")
        )

    l01, l02, l03 = ps.l[0][1], ps.l[0][2], ps.l[0][3]
    if fs.assumptions["branch"] == "plus":
        pairs.append(("branch:l02-l01*l03", l02 - l01 * l03))
    else:
        pairs.append(("branch:l02+l01*l03", l02 + l01 * l03))
        for j in (1, 2, 3):
            pairs.append((f"branch:p0{j}", ps.p[0][j]))

    if fs.assumptions["branch"] == "plus":
        for trip in itertools.permutations(INDICES, 3):
            a, b, c = trip
            rel = _dx_mono((a, b, c)) + _dx_mono((c, b, a))
            pairs.append((f"antisym:{trip}", fs.reduce(rel)))

    component = component_from_relations(ALPH_FORMS, _dx_relations(ps), 3, _DX_LETTERS)
    for word in universe:
        diff = NCPoly(ALPH_FORMS, {word: Scalar.one()}) - fs.reduce(
            NCPoly(ALPH_FORMS, {word: Scalar.one()})
        )
        leftover = component.express(diff)
        pairs.append(
            (f"oracle:{ALPH_FORMS.word_str(word)}", "0" if not leftover else "nonzero")
        )
    theta_rows = [
        dict(component.express_word(fs.theta_word(nu))) for nu in INDICES
    ]
    theta_rows = [
        {pos[w]: c for w, c in row.items()} for row in theta_rows
    ]
    ok_dim = component.dimension == 4 and span_rank(theta_rows) == 4
    pairs.append(
        ("dimension", "0" if ok_dim else f"dim {component.dimension} unexpected")
    )
    return IdentityReport.from_residuals(
        "dga.three_form_audit",
        "all eight cubic consequence families reduce to zero, half of them "
        "derive from the other half, the branch condition holds, and the "
        "normalization agrees with the linear-algebra component of "
        "dimension four spanned by the theta words",
        pairs,
        data={"dimension": component.dimension, "branch": fs.assumptions["branch"]},
    )


def _eta_expected(ps: ParameterSet):
    """The proportionality coefficients of all length-4 one-form words."""
    l01, l03 = ps.l[0][1], ps.l[0][3]
    one = Scalar.one()
    table = {}
    for nu in INDICES:
        row = tilde_row(nu)
        nt, mu, mt = row.nu_tilde, row.mu, row.mu_tilde
        table[(nu, nt, mt, mu)] = one
        table[(nu, mu, mt, nt)] = -one
        table[(nu, mt, mu, nt)] = l01
        table[(nu, nt, mu, mt)] = -l01
        table[(nu, mu, nt, mt)] = l01 * l03
        table[(nu, mt, nt, mu)] = -l01 * l03
        table[(nu, nt, nu, nt)] = -ps.p[nu][nt]
        table[(nu, mu, nu, mu)] = ps.p[nu][mu]
        table[(nu, mt, nu, mt)] = -l01 * ps.p[nu][mt]
    return table


def four_form_audit(fs: FormSystem) -> IdentityReport:
    """Top-degree structure: one generator, the eta tables, nothing above."""
    if fs.assumptions["branch"] != "plus":
        raise AssumptionViolated(
            "the top-form analysis assumes l02 = l01*l03; the minus branch "
            "is outside its hypotheses"
        )
    ps = fs.params
    omega = NCPoly(ALPH_FORMS, {fs.omega_word(): Scalar.one()})
    pairs = []
    for nu in INDICES:
        theta = NCPoly(ALPH_FORMS, {fs.theta_word(nu): Scalar.one()})
        dxn = NCPoly(ALPH_FORMS, {(_dx(nu),): Scalar.one()})
        pairs.append((f"omega_{nu}-omega", fs.reduce(dxn * theta) - fs.reduce(omega)))
        pairs.append((f"theta_{nu} dx_{nu}+omega", fs.reduce(theta * dxn) + fs.reduce(omega)))
        for tau in INDICES:
            if tau == nu:
                continue
            dxt = NCPoly(ALPH_FORMS, {(_dx(tau),): Scalar.one()})
            pairs.append((f"dx_{tau} theta_{nu}", fs.reduce(dxt * theta)))
            pairs.append((f"theta_{nu} dx_{tau}", fs.reduce(theta * dxt)))

    eta = _eta_expected(ps)
    eta_out = {}
    for word, coeff in sorted(eta.items()):
        label = "".join(str(k) for k in word)
        got = fs.reduce(NCPoly(ALPH_FORMS, {_dx_word(*word): Scalar.one()}))
        pairs.append((f"eta:{label}", got - omega.scale(coeff)))
        eta_out[label] = str(coeff)

    relations = _dx_relations(ps)
    component = component_from_relations(ALPH_FORMS, relations, 4, _DX_LETTERS)
    pairs.append(
        (
            "dimension4",
            "0" if component.dimension == 1 else f"dim {component.dimension}",
        )
    )
    bad_words = 0
    for word in word_universe(ALPH_FORMS, 4, _DX_LETTERS):
        diff = NCPoly(ALPH_FORMS, {word: Scalar.one()}) - fs.reduce(
            NCPoly(ALPH_FORMS, {word: Scalar.one()})
        )
        if component.express(diff):
            bad_words += 1
    pairs.append(("oracle4", "0" if not bad_words else f"{bad_words} words disagree"))
    _, rows5 = relation_rows(ALPH_FORMS, relations, 5, _DX_LETTERS)
    rank5 = matrix_rank(rows5)
    pairs.append(("dimension5", "0" if rank5 == 1024 else f"rank {rank5}"))
    return IdentityReport.from_residuals(
        "dga.four_form_audit",
        "the four omega words coincide, theta words absorb only their own "
        "one-form, every length-4 word is the expected multiple of omega, "
        "and the degree-4 and degree-5 components have dimensions 1 and 0",
        pairs,
        data={"eta": eta_out},
    )


def sphere_calculus(fs: FormSystem, s: SphereAlgebra) -> FormSystem:
    """Calculus descended to the sphere quotient."""
    return FormSystem(fs.params, sphere=s)


@dataclass
class ThreeFormBasis:
    """The four cubic basis words and the table normalizing onto them."""

    theta: dict
    coefficients: dict


def three_form_basis(fs: FormSystem) -> ThreeFormBasis:
    theta = {nu: fs.theta_word(nu) for nu in INDICES}
    coefficients = {
        _dx_word(*word): (nu, coeff)
        for word, (nu, coeff) in sorted(fs._table3.items())
    }
    return ThreeFormBasis(theta=theta, coefficients=coefficients)


@dataclass
class FourForm:
    """The top-degree generator and all its nonzero word coefficients."""

    omega: tuple
    eta: dict


def four_form(fs: FormSystem) -> FourForm:
    if fs.assumptions["branch"] != "plus":
        raise AssumptionViolated(
            "the top-form coefficient table assumes l02 = l01*l03"
        )
    eta = {
        _dx_word(*word): coeff
        for word, coeff in sorted(_eta_expected(fs.params).items())
    }
    return FourForm(omega=fs.omega_word(), eta=eta)
