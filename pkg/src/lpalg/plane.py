"""The quadratic coordinate algebra: rewriting, R-matrix, center, sphere."""

from __future__ import annotations

import itertools

from .errors import AssumptionViolated, CentralityNotSatisfied
from .freepoly import ALPH_X, NCPoly
from .params import INDICES, ParameterSet, centrality_condition, prime_pair, tilde_row
from .report import IdentityReport
from .rewrite import RewriteSystem, nullspace
from .scalars import Scalar

_ROW_ORDER = "length, then leftmost descending coordinate pair"


def _pair_expansion(ps: ParameterSet, mu: int, nu: int) -> dict:
    """Words and coefficients on the right side of the (mu, nu) relation."""
    pm, pn = prime_pair((mu, nu))
    out: dict = {}
    for word, coeff in (((nu, mu), ps.l[mu][nu]), ((pn, pm), ps.p[mu][nu])):
        if coeff.is_zero():
            continue
        cur = out.get(word)
        s = coeff if cur is None else cur + coeff
        if s.is_zero():
            out.pop(word, None)
        else:
            out[word] = s
    return out


def coordinate_rules(ps: ParameterSet) -> dict:
    return {
        (mu, nu): NCPoly(ALPH_X, _pair_expansion(ps, mu, nu))
        for mu in INDICES
        for nu in INDICES
        if mu > nu
    }


def coordinate_system(ps: ParameterSet) -> RewriteSystem:
    """Rewrite system orienting every descending pair into ascending words."""
    return RewriteSystem(ALPH_X, coordinate_rules(ps), ps, order=_ROW_ORDER)


class RMatrix:
    """Sparse 16x16 table acting on index pairs; involutive by construction."""

    __slots__ = ("rows", "params")

    def __init__(self, ps: ParameterSet):
        self.rows = {
            (mu, nu): _pair_expansion(ps, mu, nu) for mu in INDICES for nu in INDICES
        }
        self.params = ps
        bad = self.involution_residuals()
        if bad:
            where = ", ".join(loc for loc, _ in bad[:4])
            raise AssumptionViolated(
                f"R applied twice differs from the identity at {where}"
            )

    def entry(self, mu: int, nu: int, sigma: int, tau: int) -> Scalar:
        return self.rows[(mu, nu)].get((sigma, tau), Scalar.zero())

    def apply(self, pair: tuple[int, int]) -> dict:
        return dict(self.rows[pair])

    def involution_residuals(self) -> list:
        one = Scalar.one()
        out = []
        for source in self.rows:
            acc: dict = {}
            for mid, c in self.rows[source].items():
                for target, c2 in self.rows[mid].items():
                    _merge(acc, target, c * c2)
            _merge(acc, source, -one)
            for target, value in sorted(acc.items()):
                out.append((f"{source}->{target}", value))
        return out


def r_matrix(ps: ParameterSet) -> RMatrix:
    return RMatrix(ps)


def r_encodes_relations(ps: ParameterSet) -> IdentityReport:
    """The matrix rows and the rewrite rules present the same relations."""
    system = coordinate_system(ps)
    R = r_matrix(ps)
    pairs = []
    for mu in INDICES:
        for nu in INDICES:
            lhs = system.reduce(NCPoly(ALPH_X, {(mu, nu): Scalar.one()}))
            rhs = system.reduce(NCPoly(ALPH_X, dict(R.rows[(mu, nu)])))
            pairs.append((f"x{mu} x{nu}", lhs - rhs))
    return IdentityReport.from_residuals(
        "plane.r_encodes_relations",
        "reducing a quadratic word agrees with expanding its matrix row",
        pairs,
    )


_LEGS_OUTER = (0, 1)
_LEGS_MIXED = (0, 2)
_LEGS_INNER = (1, 2)


def _chain(rows: dict, positions, triple) -> dict:
    """Apply two-leg operators right to left on a basis triple."""
    state = {triple: Scalar.one()}
    for i, j in reversed(positions):
        new: dict = {}
        for trip, coeff in state.items():
            for (s, t), c in rows[(trip[i], trip[j])].items():
                out = list(trip)
                out[i] = s
                out[j] = t
                _merge(new, tuple(out), coeff * c)
        state = new
    return state


def _defect_table(rows: dict, chain_a, chain_b) -> dict:
    table: dict = {}
    for triple in itertools.product(INDICES, repeat=3):
        acc = _chain(rows, chain_a, triple)
        for trip, coeff in _chain(rows, chain_b, triple).items():
            _merge(acc, trip, -coeff)
        if acc:
            table[triple] = acc
    return table


def ybe_defect(ps: ParameterSet):
    """Difference of the two triple products in the quantum Yang-Baxter
    equation, as {input triple: {output triple: coefficient}}, plus a flag
    that is true when every entry vanishes."""
    rows = r_matrix(ps).rows
    table = _defect_table(
        rows, [_LEGS_OUTER, _LEGS_MIXED, _LEGS_INNER], [_LEGS_INNER, _LEGS_MIXED, _LEGS_OUTER]
    )
    return table, not table


def ybe_defect_braid(ps: ParameterSet):
    """Same defect for the leg-swapped matrix in braid form."""
    rows = {
        pair: {(t, s): c for (s, t), c in out.items()}
        for pair, out in r_matrix(ps).rows.items()
    }
    table = _defect_table(
        rows, [_LEGS_OUTER, _LEGS_INNER, _LEGS_OUTER], [_LEGS_INNER, _LEGS_OUTER, _LEGS_INNER]
    )
    return table, not table


def ybe_report(ps: ParameterSet) -> IdentityReport:
    """Both defect conventions, reported without asserting either vanishes."""
    plain, plain_zero = ybe_defect(ps)
    braid, braid_zero = ybe_defect_braid(ps)
    return IdentityReport.reported(
        "plane.ybe_defect",
        "defect of the quantum Yang-Baxter equation in plain and braid form",
        note="no truth value is asserted; the flags record whether each "
        "64x64 defect vanishes identically",
        data={
            "plain_zero": plain_zero,
            "braid_zero": braid_zero,
            "plain_nonzero_entries": sum(len(v) for v in plain.values()),
            "braid_nonzero_entries": sum(len(v) for v in braid.values()),
        },
    )


def commutator_with(f: NCPoly, g: NCPoly, rs: RewriteSystem) -> NCPoly:
    return rs.reduce(f * g - g * f)


def lemma_xx_check(ps: ParameterSet) -> IdentityReport:
    """Cubic symmetrization identity behind centrality, for every index pair."""
    system = coordinate_system(ps)
    pairs = []
    for mu in INDICES:
        for nu in INDICES:
            if mu == nu:
                continue
            pm, pn = prime_pair((mu, nu))
            lhs = NCPoly(ALPH_X, {(mu, pm, pn): Scalar.one(), (pn, pm, mu): Scalar.one()})
            rhs = NCPoly(
                ALPH_X, {(mu, pn, pm): ps.l[mu][nu], (pm, pn, mu): ps.l[mu][nu]}
            )
            pairs.append((f"(mu,nu)=({mu},{nu})", system.reduce(lhs - rhs)))
    return IdentityReport.from_residuals(
        "plane.lemma_xx",
        "x_mu x_mu' x_nu' + x_nu' x_mu' x_mu equals l_mu_nu "
        "(x_mu x_nu' x_mu' + x_mu' x_nu' x_mu) after reduction",
        pairs,
    )


def square_sum(c=(1, 1, 1, 1)) -> NCPoly:
    terms = {}
    for nu in INDICES:
        coeff = c[nu] if isinstance(c[nu], Scalar) else Scalar.from_int(c[nu])
        if not coeff.is_zero():
            terms[(nu, nu)] = coeff
    return NCPoly(ALPH_X, terms)


def center_commutators(ps: ParameterSet, c=(1, 1, 1, 1)) -> IdentityReport:
    """Commutators of the weighted square sum with each generator."""
    system = coordinate_system(ps)
    candidate = square_sum(c)
    pairs = []
    for nu in INDICES:
        gen = NCPoly(ALPH_X, {(nu,): Scalar.one()})
        pairs.append((f"[sum, x{nu}]", commutator_with(candidate, gen, system)))
    return IdentityReport.from_residuals(
        "plane.center_commutators",
        "the weighted sum of coordinate squares commutes with every generator",
        pairs,
        data={"c": [str(v) if isinstance(v, Scalar) else str(v) for v in c]},
    )


def central_square_matrix(ps: ParameterSet) -> list:
    """Rows of the linear system cutting out central weighted square sums."""
    rows = []
    for nu in INDICES:
        trow = tilde_row(nu)
        row = {}
        for col, coeff in (
            (trow.mu, ps.p[trow.mu][nu]),
            (trow.mu_tilde, ps.p[trow.mu_tilde][nu]),
            (trow.nu_tilde, ps.l[trow.mu_tilde][nu] * ps.p[trow.nu_tilde][nu]),
        ):
            if not coeff.is_zero():
                _merge(row, col, coeff)
        rows.append(row)
    return rows


def central_square_vectors(ps: ParameterSet) -> list:
    """All weight vectors c making sum(c_mu x_mu^2) central, as 4-tuples."""
    zero = Scalar.zero()
    basis = nullspace(central_square_matrix(ps), 4)
    return [tuple(vec.get(col, zero) for col in INDICES) for vec in basis]


class SphereAlgebra:
    """Quotient by the central sphere relation, eliminating the x3 square."""

    __slots__ = ("params", "base", "radius_rule", "system")

    def __init__(self, ps: ParameterSet):
        if not ps.flags.centrality_R:
            raise CentralityNotSatisfied(
                "the sum of coordinate squares is not central for these "
                "parameters, so the sphere quotient carries no two-sided ideal"
            )
        self.params = ps
        self.base = coordinate_system(ps)
        one = Scalar.one()
        self.radius_rule = NCPoly(
            ALPH_X,
            {(): one, (0, 0): -one, (1, 1): -one, (2, 2): -one},
        )
        rules = dict(self.base.rules)
        rules[(3, 3)] = self.radius_rule
        self.system = RewriteSystem(
            ALPH_X, rules, ps, order=_ROW_ORDER + ", then the x3 square"
        )

    def reduce(self, f: NCPoly) -> NCPoly:
        return self.system.reduce(f)


def sphere_reduce(f: NCPoly, s: SphereAlgebra) -> NCPoly:
    return s.reduce(f)


def _merge(acc: dict, key, coeff):
    cur = acc.get(key)
    s = coeff if cur is None else cur + coeff
    if s.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = s
