"""Exact coefficient field: rational functions over the Gaussian rationals.

A Scalar is an element of Q(i)(v1,...,vk) stored as a pair of real/imaginary
components, each a reduced multivariate rational function over Q.  The variable
tuple of a Scalar is pruned to exactly the indeterminates that occur, so equal
values always have identical structure and hash.
"""

from __future__ import annotations

from functools import lru_cache

from sympy.polys.domains import QQ
from sympy.polys.fields import FracField
from sympy.polys.orderings import grlex

from .errors import DenominatorVanishes, DivisionByZero


@lru_cache(maxsize=None)
def _field(names: tuple) -> FracField:
    return FracField(names, QQ, grlex)


def _lift_poly(poly, src_names, dst_names, dst_field):
    pos = [dst_names.index(n) if n in dst_names else -1 for n in src_names]
    k = len(dst_names)
    d = {}
    for exps, coeff in poly.terms():
        new = [0] * k
        for i, e in enumerate(exps):
            if e:
                new[pos[i]] = e
        d[tuple(new)] = coeff
    return dst_field.ring.from_dict(d)


def _lift_frac(frac, src_names, dst_names, dst_field):
    return dst_field.new(
        _lift_poly(frac.numer, src_names, dst_names, dst_field),
        _lift_poly(frac.denom, src_names, dst_names, dst_field),
    )


def _occurring(frac, names, used):
    for poly in (frac.numer, frac.denom):
        for exps, _ in poly.terms():
            for i, e in enumerate(exps):
                if e:
                    used.add(names[i])


class Scalar:
    """Immutable element of Q(i)(variables) with canonical structure."""

    __slots__ = ("_names", "_re", "_im", "_hash")

    def __init__(self, names, re, im):
        self._names = names
        self._re = re
        self._im = im
        self._hash = None

    @staticmethod
    def _make(names, re, im):
        used = set()
        _occurring(re, names, used)
        _occurring(im, names, used)
        if len(used) != len(names):
            sub = tuple(sorted(used))
            f = _field(sub)
            re = _lift_frac(re, names, sub, f)
            im = _lift_frac(im, names, sub, f)
            names = sub
        return Scalar(names, re, im)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Scalar":
        return _ZERO

    @staticmethod
    def one() -> "Scalar":
        return _ONE

    @staticmethod
    def i() -> "Scalar":
        return _I

    @staticmethod
    def from_int(n: int) -> "Scalar":
        f = _field(())
        return Scalar((), f.ground_new(QQ(n)), f.zero)

    @staticmethod
    def from_fraction(num: int, den: int) -> "Scalar":
        if den == 0:
            raise DivisionByZero("fraction with zero denominator")
        f = _field(())
        return Scalar((), f.ground_new(QQ(num, den)), f.zero)

    @staticmethod
    def variable(name: str) -> "Scalar":
        if name == "i":
            raise ValueError("'i' is the imaginary unit, not a variable name")
        names = (name,)
        f = _field(names)
        return Scalar(names, f.gens[0], f.zero)

    @staticmethod
    def parse(text: str) -> "Scalar":
        return _parse(text)

    # -- structure ----------------------------------------------------

    @property
    def variables(self) -> tuple:
        return self._names

    def is_zero(self) -> bool:
        f = self._re.field
        return self._re == f.zero and self._im == f.zero

    def is_one(self) -> bool:
        return self._im == self._im.field.zero and self._re == self._re.field.one

    def is_rational(self) -> bool:
        return not self._names and not self._im

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (
            self._names == other._names
            and self._re == other._re
            and self._im == other._im
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._names, self._re, self._im))
        return self._hash

    # -- arithmetic ---------------------------------------------------

    def _unify(self, other):
        if self._names == other._names:
            return self, other
        names = tuple(sorted(set(self._names) | set(other._names)))
        f = _field(names)
        a = self if self._names == names else Scalar(
            names, _lift_frac(self._re, self._names, names, f),
            _lift_frac(self._im, self._names, names, f))
        b = other if other._names == names else Scalar(
            names, _lift_frac(other._re, other._names, names, f),
            _lift_frac(other._im, other._names, names, f))
        return a, b

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._unify(other)
        return Scalar._make(a._names, a._re + b._re, a._im + b._im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._unify(other)
        return Scalar._make(a._names, a._re - b._re, a._im - b._im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__sub__(self)

    def __neg__(self):
        return Scalar(self._names, -self._re, -self._im)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._unify(other)
        re = a._re * b._re - a._im * b._im
        im = a._re * b._im + a._im * b._re
        return Scalar._make(a._names, re, im)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by zero scalar")
        a, b = self._unify(other)
        # 1/(c+di) = (c-di)/(c^2+d^2); c^2+d^2 != 0 over a formally real ground
        norm = b._re * b._re + b._im * b._im
        re = (a._re * b._re + a._im * b._im) / norm
        im = (a._im * b._re - a._re * b._im) / norm
        return Scalar._make(a._names, re, im)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__truediv__(self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return _ONE / (self ** (-n))
        out = _ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def inverse(self) -> "Scalar":
        return _ONE / self

    def conj(self) -> "Scalar":
        return Scalar(self._names, self._re, -self._im)

    # -- substitution -------------------------------------------------

    def substitute(self, bindings) -> "Scalar":
        vals = {}
        for name, v in bindings.items():
            c = _coerce(v)
            if c is NotImplemented:
                c = Scalar.parse(v) if isinstance(v, str) else None
            if c is None:
                raise TypeError(f"cannot bind {name!r} to {v!r}")
            vals[name] = c
        out_parts = []
        for frac in (self._re, self._im):
            num = _poly_eval(frac.numer, self._names, vals)
            den = _poly_eval(frac.denom, self._names, vals)
            if den.is_zero():
                raise DenominatorVanishes(
                    f"denominator {_render(frac.denom, self._names)} "
                    f"vanishes under {{{', '.join(sorted(vals))}}}")
            out_parts.append(num / den)
        return out_parts[0] + _I * out_parts[1]

    # -- rendering ----------------------------------------------------

    def __str__(self) -> str:
        n1, d1 = self._re.numer, self._re.denom
        n2, d2 = self._im.numer, self._im.denom
        ring = d1.ring
        g = d1.gcd(d2)
        c1 = d2.quo(g)
        c2 = d1.quo(g)
        den = d1 * c1
        num_terms = _gauss_terms(n1 * c1, n2 * c2)
        if not num_terms:
            return "0"
        num_str = _render_terms(num_terms, self._names)
        if den == ring.one:
            return num_str
        den_str = _render(den, self._names)
        if len(num_terms) > 1:
            num_str = f"({num_str})"
        if not _bare_atom(den, self._names):
            den_str = f"({den_str})"
        return f"{num_str}/{den_str}"

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _coerce(v):
    if isinstance(v, Scalar):
        return v
    if isinstance(v, int):
        return Scalar.from_int(v)
    return NotImplemented


def _poly_eval(poly, names, vals):
    out = Scalar.zero()
    atoms = [vals.get(n, None) for n in names]
    for exps, coeff in poly.terms():
        term = Scalar((), _field(()).ground_new(coeff), _field(()).zero)
        for j, e in enumerate(exps):
            if not e:
                continue
            base = atoms[j]
            if base is None:
                base = Scalar.variable(names[j])
            term = term * base ** e
        out = out + term
    return out


# -- canonical text form ---------------------------------------------


def _q_str(q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _gauss_terms(pre, pim):
    terms = {}
    for exps, coeff in pre.terms():
        terms.setdefault(exps, [None, None])[0] = coeff
    for exps, coeff in pim.terms():
        terms.setdefault(exps, [None, None])[1] = coeff
    flat = []
    for exps in sorted(terms, key=grlex, reverse=True):
        cr, ci = terms[exps]
        if cr is not None:
            flat.append((exps, cr, False))
        if ci is not None:
            flat.append((exps, ci, True))
    return flat


def _mono_str(exps, names):
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _render_terms(flat, names) -> str:
    pieces = []
    for exps, coeff, imag in flat:
        neg = coeff < 0
        aq = -coeff if neg else coeff
        factors = []
        if not (aq == 1 and (imag or any(exps))):
            factors.append(_q_str(aq))
        if imag:
            factors.append("i")
        mono = _mono_str(exps, names)
        if mono:
            factors.append(mono)
        body = "*".join(factors) if factors else "1"
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


def _render(poly, names) -> str:
    flat = [(exps, coeff, False) for exps, coeff in
            sorted(poly.terms(), key=lambda t: grlex(t[0]), reverse=True)]
    return _render_terms(flat, names)


def _bare_atom(poly, names) -> bool:
    terms = list(poly.terms())
    if len(terms) != 1:
        return False
    exps, coeff = terms[0]
    if not any(exps):
        return coeff.denominator == 1 and coeff >= 0
    return coeff == 1 and sum(exps) == 1


# -- parser ----------------------------------------------------------

_ZERO: Scalar
_ONE: Scalar
_I: Scalar


def _tokenize(text):
    out = []
    j = 0
    n = len(text)
    while j < n:
        ch = text[j]
        if ch.isspace():
            j += 1
            continue
        if ch.isdigit():
            k = j
            while k < n and text[k].isdigit():
                k += 1
            out.append(("int", text[j:k]))
            j = k
            continue
        if ch.isalpha() or ch == "_":
            k = j
            while k < n and (text[k].isalnum() or text[k] == "_"):
                k += 1
            word = text[j:k]
            out.append(("i", word) if word == "i" else ("ident", word))
            j = k
            continue
        if ch in "+-*/^()":
            out.append((ch, ch))
            j += 1
            continue
        raise ValueError(f"unexpected character {ch!r} at position {j}")
    out.append(("end", ""))
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.pos = 0

    def peek(self):
        return self.toks[self.pos][0]

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            raise ValueError(f"expected {kind!r}, got {t[1]!r}")
        return t

    def parse_expr(self) -> Scalar:
        val = self.parse_term()
        while self.peek() in "+-":
            op = self.next()[0]
            rhs = self.parse_term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def parse_term(self) -> Scalar:
        val = self.parse_unary()
        while self.peek() in "*/":
            op = self.next()[0]
            rhs = self.parse_unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def parse_unary(self) -> Scalar:
        if self.peek() == "-":
            self.next()
            return -self.parse_unary()
        if self.peek() == "+":
            self.next()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> Scalar:
        base = self.parse_atom()
        if self.peek() == "^":
            self.next()
            t = self.expect("int")
            return base ** int(t[1])
        return base

    def parse_atom(self) -> Scalar:
        kind, text = self.next()
        if kind == "int":
            return Scalar.from_int(int(text))
        if kind == "i":
            return _I
        if kind == "ident":
            return Scalar.variable(text)
        if kind == "(":
            val = self.parse_expr()
            self.expect(")")
            return val
        raise ValueError(f"unexpected token {text!r}")


def _parse(text: str) -> Scalar:
    p = _Parser(_tokenize(text))
    val = p.parse_expr()
    p.expect("end")
    return val


# -- spec-facing wrappers --------------------------------------------


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def scalar_substitute(a: Scalar, bindings) -> Scalar:
    return a.substitute(bindings)


def scalar_is_zero(a: Scalar) -> bool:
    return a.is_zero()


def _init_constants():
    global _ZERO, _ONE, _I
    f = _field(())
    _ZERO = Scalar((), f.zero, f.zero)
    _ONE = Scalar((), f.one, f.zero)
    _I = Scalar((), f.zero, f.one)


_init_constants()
