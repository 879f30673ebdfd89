"""Parameter tables for the four-generator quadratic algebras.

A parameter set is a pair of 4x4 tables ``l`` (symmetric, unit diagonal,
invariant under the complementary-pair map) and ``p`` (antisymmetric)
subject to the unit-circle condition
``l[mu][nu]**2 + p[mu][nu]*p[nu'][mu'] = 1``.
All entries are exact scalars; validation failures are data, not errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import DegenerateFamilyParameters, SchemaError, UndeclaredConjugation
from .report import IdentityReport
from .scalars import Scalar

INDICES = (0, 1, 2, 3)

FAMILY_NAMES = ("classical", "sklyanin_k", "sklyanin_C", "cdv", "theta", "zero_l")


def prime_pair(pair: tuple[int, int]) -> tuple[int, int]:
    """Complementary index pair, ordered the same way as the input pair."""
    mu, nu = pair
    if mu == nu:
        return (mu, nu)
    rest = [k for k in INDICES if k != mu and k != nu]
    return (rest[0], rest[1]) if mu < nu else (rest[1], rest[0])


class TildeRow(NamedTuple):
    nu: int
    nu_tilde: int
    mu: int
    mu_tilde: int


_TILDE = {0: (1, 2, 3), 1: (0, 3, 2), 2: (3, 0, 1), 3: (2, 1, 0)}


def tilde_row(nu: int) -> TildeRow:
    """Companion indices (nu~, mu_nu, mu~_nu) of a coordinate index."""
    return TildeRow(nu, *_TILDE[nu])


@dataclass
class Flags:
    valid_def21: bool
    hyp_l02: str
    centrality_R: bool
    star_compatible: bool
    minus_p_zero: bool | None = None


def _coerce(value) -> Scalar:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, int):
        return Scalar.from_int(value)
    if isinstance(value, str):
        return Scalar.parse(value)
    raise TypeError(f"cannot coerce {value!r} to a scalar")


class ParameterSet:
    """Immutable l/p tables with derived validity flags."""

    __slots__ = ("l", "p", "conjugation", "family", "family_args", "variables", "flags")

    def __init__(self, l, p, conjugation=None, family=None, family_args=None):
        self.l = tuple(tuple(_coerce(v) for v in row) for row in l)
        self.p = tuple(tuple(_coerce(v) for v in row) for row in p)
        if len(self.l) != 4 or any(len(r) != 4 for r in self.l):
            raise ValueError("l table must be 4x4")
        if len(self.p) != 4 or any(len(r) != 4 for r in self.p):
            raise ValueError("p table must be 4x4")
        self.conjugation = {k: _coerce(v) for k, v in (conjugation or {}).items()}
        self.family = family
        self.family_args = dict(family_args or {})
        names: set[str] = set()
        for row in self.l + self.p:
            for v in row:
                names.update(v.variables)
        self.variables = tuple(sorted(names))
        self.flags = self._compute_flags()

    def _compute_flags(self) -> Flags:
        valid = not any(not r.is_zero() for _, r in _def21_residuals(self))
        l01, l02, l03 = self.l[0][1], self.l[0][2], self.l[0][3]
        if (l02 - l01 * l03).is_zero():
            branch = "plus"
        elif (l02 + l01 * l03).is_zero():
            branch = "minus"
        else:
            branch = "neither"
        minus_p_zero = None
        if branch == "minus":
            minus_p_zero = all(self.p[0][j].is_zero() for j in (1, 2, 3))
        one = Scalar.one()
        central = not any(
            not r.is_zero()
            for _, r in _centrality_residuals(self, (one, one, one, one))
        )
        try:
            star = not any(not r.is_zero() for _, r in _star_residuals(self))
        except UndeclaredConjugation:
            star = False
        return Flags(
            valid_def21=valid,
            hyp_l02=branch,
            centrality_R=central,
            star_compatible=star,
            minus_p_zero=minus_p_zero,
        )

    def __repr__(self) -> str:
        tag = self.family or "custom"
        return f"ParameterSet({tag}, variables={list(self.variables)})"


def _def21_residuals(ps: ParameterSet):
    one = Scalar.one()
    out = []
    for mu in INDICES:
        out.append((f"a:l[{mu}][{mu}]-1", ps.l[mu][mu] - one))
    for mu in INDICES:
        for nu in INDICES:
            if mu < nu:
                out.append((f"a:l[{mu}][{nu}]-l[{nu}][{mu}]", ps.l[mu][nu] - ps.l[nu][mu]))
    for mu in INDICES:
        for nu in INDICES:
            if mu != nu:
                pm, pn = prime_pair((mu, nu))
                out.append((f"a:l[{pm}][{pn}]-l[{mu}][{nu}]", ps.l[pm][pn] - ps.l[mu][nu]))
    for mu in INDICES:
        for nu in INDICES:
            if mu <= nu:
                out.append((f"b:p[{mu}][{nu}]+p[{nu}][{mu}]", ps.p[mu][nu] + ps.p[nu][mu]))
    for mu in INDICES:
        for nu in INDICES:
            if mu != nu:
                pm, pn = prime_pair((mu, nu))
                r = ps.l[mu][nu] * ps.l[mu][nu] + ps.p[mu][nu] * ps.p[pn][pm] - one
                out.append((f"c:({mu},{nu})", r))
    return out


def validate(ps: ParameterSet) -> IdentityReport:
    """Check the three defining table conditions entrywise."""
    return IdentityReport.from_residuals(
        "params.validate",
        "l symmetric with unit diagonal and complement invariance; "
        "p antisymmetric; l^2 + p p' = 1 on every off-diagonal pair",
        _def21_residuals(ps),
        data={"hyp_l02": ps.flags.hyp_l02},
    )


def _centrality_residuals(ps: ParameterSet, c):
    out = []
    for nu in INDICES:
        row = tilde_row(nu)
        r = (
            c[row.mu] * ps.p[row.mu][nu]
            + c[row.mu_tilde] * ps.p[row.mu_tilde][nu]
            + c[row.nu_tilde] * ps.l[row.mu_tilde][nu] * ps.p[row.nu_tilde][nu]
        )
        out.append((f"nu={nu}", r))
    return out


def centrality_condition(ps: ParameterSet, c) -> IdentityReport:
    """Residuals of the four linear conditions for sum(c[mu]*x_mu^2) central."""
    cs = tuple(_coerce(v) for v in c)
    if len(cs) != 4:
        raise ValueError("centrality coefficient vector must have length 4")
    pairs = _centrality_residuals(ps, cs)
    note = None
    if all((cs[k] - cs[0]).is_zero() for k in (1, 2, 3)):
        total = pairs[0][1] + pairs[1][1] + pairs[2][1] + pairs[3][1]
        if total.is_zero():
            note = (
                "with equal weights the four residuals sum to zero, "
                "so any three conditions imply the fourth"
            )
    return IdentityReport.from_residuals(
        "params.centrality_condition",
        "weighted coordinate squares commute with every generator "
        "iff these four residuals vanish",
        pairs,
        note=note,
        data={"c": [str(v) for v in cs]},
    )


def _conjugate(ps: ParameterSet, s: Scalar) -> Scalar:
    for name in s.variables:
        if name not in ps.conjugation:
            raise UndeclaredConjugation(
                f"no conjugation rule declared for indeterminate {name!r}"
            )
    return s.conj().substitute(ps.conjugation)


def _star_residuals(ps: ParameterSet):
    out = []
    for name in ps.variables:
        if name not in ps.conjugation:
            raise UndeclaredConjugation(
                f"no conjugation rule declared for indeterminate {name!r}"
            )
    for name, rule in ps.conjugation.items():
        back = rule.conj().substitute(ps.conjugation)
        out.append((f"involution:{name}", back - Scalar.variable(name)))
    for mu in INDICES:
        for nu in INDICES:
            out.append((f"l[{mu}][{nu}]", _conjugate(ps, ps.l[mu][nu]) - ps.l[mu][nu]))
            out.append((f"p[{mu}][{nu}]", _conjugate(ps, ps.p[mu][nu]) - ps.p[nu][mu]))
    return out


def star_compatibility(ps: ParameterSet) -> IdentityReport:
    """Check that declared conjugation fixes l and transposes p."""
    return IdentityReport.from_residuals(
        "params.star_compatibility",
        "conjugation is an involution, fixes every l entry, "
        "and sends p[mu][nu] to p[nu][mu]",
        _star_residuals(ps),
        data={"conjugation": {k: str(v) for k, v in sorted(ps.conjugation.items())}},
    )


def index_identities_report() -> IdentityReport:
    """Structural checks on the complement map and the companion table."""
    bad = []
    for mu in INDICES:
        for nu in INDICES:
            if prime_pair(prime_pair((mu, nu))) != (mu, nu):
                bad.append((f"prime_involution:({mu},{nu})", 1))
    for mu in INDICES:
        if prime_pair((mu, mu)) != (mu, mu):
            bad.append((f"prime_diagonal:{mu}", 1))
    for nu in INDICES:
        row = tilde_row(nu)
        if prime_pair((nu, row.mu)) != (row.nu_tilde, row.mu_tilde):
            bad.append((f"tilde_a:nu={nu}", 1))
        if prime_pair((nu, row.mu_tilde)) != (row.nu_tilde, row.mu):
            bad.append((f"tilde_b:nu={nu}", 1))
        if prime_pair((nu, row.nu_tilde)) != (row.mu, row.mu_tilde):
            bad.append((f"tilde_c:nu={nu}", 1))
        left = set()
        for mu in INDICES:
            if mu != nu:
                pm, pn = prime_pair((mu, nu))
                left.add((mu, pn, pm))
        right = {
            (row.mu, row.nu_tilde, row.mu_tilde),
            (row.mu_tilde, row.nu_tilde, row.mu),
            (row.nu_tilde, row.mu, row.mu_tilde),
        }
        if left != right:
            bad.append((f"triple_set:nu={nu}", 1))
    return IdentityReport.from_residuals(
        "params.index_identities",
        "complement map is an involution fixing the diagonal; "
        "companion triples match the complement map",
        bad,
    )


def ells_report(ps: ParameterSet) -> IdentityReport:
    """The three l values seen from any coordinate's companion row."""
    pairs = []
    for nu in INDICES:
        row = tilde_row(nu)
        pairs.append((f"l[mu][nu]:nu={nu}", ps.l[row.mu][nu] - ps.l[0][2]))
        pairs.append((f"l[mu][mu~]:nu={nu}", ps.l[row.mu][row.mu_tilde] - ps.l[0][1]))
        pairs.append((f"l[mu][nu~]:nu={nu}", ps.l[row.mu][row.nu_tilde] - ps.l[0][3]))
    return IdentityReport.from_residuals(
        "params.ells",
        "companion-row l entries reduce to l01, l02, l03",
        pairs,
    )


def _build_tables(l01, l02, l03, p01, p23, p02, p13, p03, p12):
    one = Scalar.one()
    zero = Scalar.zero()
    l = [[zero] * 4 for _ in range(4)]
    p = [[zero] * 4 for _ in range(4)]
    for mu in INDICES:
        l[mu][mu] = one
    for (mu, nu), val in (
        ((0, 1), l01), ((2, 3), l01),
        ((0, 2), l02), ((1, 3), l02),
        ((0, 3), l03), ((1, 2), l03),
    ):
        l[mu][nu] = val
        l[nu][mu] = val
    for (mu, nu), val in (
        ((0, 1), p01), ((2, 3), p23),
        ((0, 2), p02), ((1, 3), p13),
        ((0, 3), p03), ((1, 2), p12),
    ):
        p[mu][nu] = val
        p[nu][mu] = -val
    return l, p


def _require_nonzero(value: Scalar, what: str):
    if value.is_zero():
        raise DegenerateFamilyParameters(what)


def _identity_conjugation(*values):
    rules = {}
    for v in values:
        for name in v.variables:
            rules[name] = Scalar.variable(name)
    return rules


def _fam_classical():
    one = Scalar.one()
    zero = Scalar.zero()
    l, p = _build_tables(one, one, one, zero, zero, zero, zero, zero, zero)
    return ParameterSet(l, p, conjugation={}, family="classical")


def _fam_sklyanin_k(a="a", b="b"):
    a = _coerce(a)
    b = _coerce(b)
    one = Scalar.one()
    _require_nonzero(one - a, "sklyanin_k requires a != 1")
    _require_nonzero(one + b, "sklyanin_k requires b != -1")
    _require_nonzero(one + a * b, "sklyanin_k requires 1 + a*b != 0")
    c = -(a + b) / (one + a * b)
    _require_nonzero(one - c, "sklyanin_k requires -(a+b)/(1+a*b) != 1")
    l01 = (one + a) / (one - a)
    l02 = (one - b) / (one + b)
    l03 = (one + c) / (one - c)
    l, p = _build_tables(
        l01, l02, l03,
        l01 - one, one + l01,
        one - l02, -(one + l02),
        l03 - one, one + l03,
    )
    return ParameterSet(
        l, p,
        conjugation=_identity_conjugation(a, b),
        family="sklyanin_k",
        family_args={"a": str(a), "b": str(b)},
    )


def _fam_sklyanin_C(alpha="alpha", beta="beta"):
    alpha = _coerce(alpha)
    beta = _coerce(beta)
    one = Scalar.one()
    i = Scalar.i()
    _require_nonzero(one + alpha, "sklyanin_C requires alpha != -1")
    _require_nonzero(one - beta, "sklyanin_C requires beta != 1")
    _require_nonzero(one + alpha * beta, "sklyanin_C requires 1 + alpha*beta != 0")
    gamma = -(alpha + beta) / (one + alpha * beta)
    _require_nonzero(one + gamma, "sklyanin_C requires -(alpha+beta)/(1+alpha*beta) != -1")
    l01 = (one - alpha) / (one + alpha)
    l02 = (one + beta) / (one - beta)
    l03 = (one - gamma) / (one + gamma)
    l, p = _build_tables(
        l01, l02, l03,
        i * (one - l01), i * (one + l01),
        i * (l02 - one), -i * (one + l02),
        i * (one - l03), i * (one + l03),
    )
    return ParameterSet(
        l, p,
        conjugation=_identity_conjugation(alpha, beta),
        family="sklyanin_C",
        family_args={"alpha": str(alpha), "beta": str(beta)},
    )


def _fam_theta(lam="lam"):
    lam = _coerce(lam)
    one = Scalar.one()
    denom = one + lam * lam
    _require_nonzero(denom, "theta requires 1 + lam^2 != 0")
    l01 = (lam + lam) / denom
    v = (one - lam * lam) / denom
    zero = Scalar.zero()
    l, p = _build_tables(l01, l01, one, v, -v, -v, v, zero, zero)
    conj = {}
    if lam.variables:
        _require_nonzero(lam, "theta unit-phase conjugation requires lam != 0")
        conj = {name: Scalar.one() / Scalar.variable(name) for name in lam.variables}
    return ParameterSet(
        l, p,
        conjugation=conj,
        family="theta",
        family_args={"lam": str(lam)},
    )


def _fam_cdv(t0="t0", t1="t1", t2="t2", t3="t3"):
    t = [_coerce(v) for v in (t0, t1, t2, t3)]
    for k, tk in enumerate(t):
        _require_nonzero(tk, f"cdv requires t{k} != 0")
    lam = [tk * tk for tk in t]
    one = Scalar.one()
    zero = Scalar.zero()

    def a_of(mu, nu):
        pm, pn = prime_pair((mu, nu))
        return lam[mu] * lam[pn] + lam[nu] * lam[pm]

    _require_nonzero(a_of(0, 1), "cdv requires lam0*lam3 + lam1*lam2 != 0")
    _require_nonzero(a_of(0, 3), "cdv requires lam0*lam2 + lam1*lam3 != 0")
    l = [[zero] * 4 for _ in range(4)]
    p = [[zero] * 4 for _ in range(4)]
    for mu in INDICES:
        l[mu][mu] = one
    for mu in INDICES:
        for nu in INDICES:
            if mu == nu:
                continue
            pm, pn = prime_pair((mu, nu))
            a = a_of(mu, nu)
            b = lam[mu] * lam[pm] + lam[nu] * lam[pn]
            sign = 1 if (mu + nu) % 2 == 0 else -1
            c = (lam[pm] * lam[pm] - lam[pn] * lam[pn]) * sign
            l[mu][nu] = b / a
            p[mu][nu] = (c / a) * t[mu] * t[nu] / (t[pm] * t[pn])
    conj = {}
    for tk in t:
        for name in tk.variables:
            conj[name] = Scalar.one() / Scalar.variable(name)
    return ParameterSet(
        l, p,
        conjugation=conj,
        family="cdv",
        family_args={f"t{k}": str(t[k]) for k in INDICES},
    )


def _fam_zero_l(p10="p10", p20="p20", p30="p30"):
    p10 = _coerce(p10)
    p20 = _coerce(p20)
    p30 = _coerce(p30)
    one = Scalar.one()
    for val, name in ((p10, "p10"), (p20, "p20"), (p30, "p30")):
        _require_nonzero(val, f"zero_l requires {name} != 0")
    zero = Scalar.zero()
    l = [[zero] * 4 for _ in range(4)]
    for mu in INDICES:
        l[mu][mu] = one
    p = [[zero] * 4 for _ in range(4)]
    for (mu, nu), val in (
        ((1, 0), p10), ((0, 1), -p10),
        ((2, 0), p20), ((0, 2), -p20),
        ((3, 0), p30), ((0, 3), -p30),
        ((3, 2), -one / p10), ((2, 3), one / p10),
        ((3, 1), -one / p20), ((1, 3), one / p20),
        ((2, 1), -one / p30), ((1, 2), one / p30),
    ):
        p[mu][nu] = val
    return ParameterSet(
        l, p,
        conjugation=_identity_conjugation(p10, p20, p30),
        family="zero_l",
        family_args={"p10": str(p10), "p20": str(p20), "p30": str(p30)},
    )


_FAMILY_BUILDERS = {
    "classical": _fam_classical,
    "sklyanin_k": _fam_sklyanin_k,
    "sklyanin_C": _fam_sklyanin_C,
    "cdv": _fam_cdv,
    "theta": _fam_theta,
    "zero_l": _fam_zero_l,
}


def make_family(family: str, **args) -> ParameterSet:
    """Build a named parameter family; omitted arguments stay symbolic."""
    if family not in _FAMILY_BUILDERS:
        raise SchemaError(f"unknown family {family!r}; expected one of {FAMILY_NAMES}")
    return _FAMILY_BUILDERS[family](**args)


def params_from_obj(obj) -> ParameterSet:
    """Parameter set from a parsed JSON object; shape errors carry locations."""
    if not isinstance(obj, dict):
        raise SchemaError("parameter file must contain a JSON object")
    if "family" in obj:
        family = obj["family"]
        if not isinstance(family, str):
            raise SchemaError("'family' must be a string")
        args = obj.get("args", {})
        if not isinstance(args, dict):
            raise SchemaError("'args' must be an object")
        extra = set(obj) - {"family", "args"}
        if extra:
            raise SchemaError(f"unexpected keys next to 'family': {sorted(extra)}")
        try:
            return make_family(family, **args)
        except TypeError as exc:
            raise SchemaError(f"bad arguments for family {family!r}: {exc}") from exc
    required = {"l", "p"}
    missing = required - set(obj)
    if missing:
        raise SchemaError(f"missing keys: {sorted(missing)}")
    extra = set(obj) - {"variables", "conjugation", "l", "p"}
    if extra:
        raise SchemaError(f"unexpected keys: {sorted(extra)}")
    declared = obj.get("variables", [])
    if not isinstance(declared, list) or not all(isinstance(v, str) for v in declared):
        raise SchemaError("'variables' must be a list of strings")
    conj_obj = obj.get("conjugation", {})
    if not isinstance(conj_obj, dict):
        raise SchemaError("'conjugation' must be an object")

    def parse_entry(text, where):
        if not isinstance(text, (str, int)):
            raise SchemaError(f"{where}: entries must be strings or integers")
        try:
            return _coerce(text)
        except Exception as exc:
            raise SchemaError(f"{where}: {exc}") from exc

    tables = {}
    for key in ("l", "p"):
        rows = obj[key]
        if not isinstance(rows, list) or len(rows) != 4:
            raise SchemaError(f"'{key}' must be a 4x4 array")
        table = []
        for r, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != 4:
                raise SchemaError(f"'{key}' row {r} must have 4 entries")
            table.append(
                [parse_entry(v, f"{key}[{r}][{c}]") for c, v in enumerate(row)]
            )
        tables[key] = table
    conj = {k: parse_entry(v, f"conjugation[{k}]") for k, v in conj_obj.items()}
    ps = ParameterSet(tables["l"], tables["p"], conjugation=conj)
    undeclared = set(ps.variables) - set(declared)
    if undeclared:
        raise SchemaError(f"entries use undeclared variables: {sorted(undeclared)}")
    return ps


def params_to_obj(ps: ParameterSet) -> dict:
    return {
        "variables": list(ps.variables),
        "conjugation": {k: str(v) for k, v in sorted(ps.conjugation.items())},
        "l": [[str(v) for v in row] for row in ps.l],
        "p": [[str(v) for v in row] for row in ps.p],
    }
