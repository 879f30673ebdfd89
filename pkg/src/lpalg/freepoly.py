"""Free noncommutative polynomials over the exact scalar field.

Words are tuples of letter indices into a fixed alphabet.  Letters carry a
sort and a tensor rank; multiplication concatenates words and then stably
moves lower-rank letters leftwards, so factors living in different tensor
legs commute freely while letters of equal rank keep their order.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

from .errors import AlphabetMismatch
from .scalars import Scalar


class Generator(NamedTuple):
    name: str
    sort: str
    rank: int
    form_degree: int


class Alphabet:
    """Ordered set of generators; identity decides compatibility."""

    __slots__ = ("name", "gens", "_index", "_ranks", "_fdegs")

    def __init__(self, name: str, gens: Iterable[Generator]):
        self.name = name
        self.gens = tuple(gens)
        self._index = {g.name: k for k, g in enumerate(self.gens)}
        if len(self._index) != len(self.gens):
            raise ValueError("duplicate generator names")
        self._ranks = tuple(g.rank for g in self.gens)
        self._fdegs = tuple(g.form_degree for g in self.gens)

    def __repr__(self) -> str:
        return f"Alphabet({self.name})"

    def __len__(self) -> int:
        return len(self.gens)

    def index(self, name: str) -> int:
        return self._index[name]

    def has(self, name: str) -> bool:
        return name in self._index

    def word(self, names: Iterable[str]) -> tuple[int, ...]:
        return tuple(self._index[n] for n in names)

    def word_str(self, word: tuple[int, ...]) -> str:
        return " ".join(self.gens[k].name for k in word)

    def sort_word(self, word: tuple[int, ...]) -> tuple[int, ...]:
        ranks = self._ranks
        if all(ranks[word[k]] <= ranks[word[k + 1]] for k in range(len(word) - 1)):
            return word
        return tuple(sorted(word, key=lambda k: ranks[k]))

    def form_degree(self, word: tuple[int, ...]) -> int:
        return sum(self._fdegs[k] for k in word)


def _coord(name):
    return Generator(name, "coordinate", 1, 0)


def _form(name):
    return Generator(name, "form", 1, 1)


def _matrix(name, rank=0):
    return Generator(name, "matrix", rank, 0)


ALPH_X = Alphabet("X", [_coord(f"x{k}") for k in range(4)])

ALPH_FORMS = Alphabet(
    "FORMS",
    [_coord(f"x{k}") for k in range(4)] + [_form(f"dx{k}") for k in range(4)],
)

ALPH_M = Alphabet(
    "M", [_matrix(f"M{r}{c}") for r in range(4) for c in range(4)]
)

ALPH_MX = Alphabet(
    "MX",
    [_matrix(f"M{r}{c}") for r in range(4) for c in range(4)]
    + [_coord(f"x{k}") for k in range(4)]
    + [_form(f"dx{k}") for k in range(4)],
)

ALPH_MM = Alphabet(
    "MM",
    [_matrix(f"M{r}{c}") for r in range(4) for c in range(4)]
    + [_matrix(f"Mb{r}{c}", rank=1) for r in range(4) for c in range(4)],
)


class NCPoly:
    """Scalar linear combination of words over one alphabet."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms: dict | None = None):
        self.alphabet = alphabet
        clean = {}
        if terms:
            for word, coeff in terms.items():
                if not coeff.is_zero():
                    clean[word] = coeff
        self.terms = clean

    @staticmethod
    def zero(alphabet: Alphabet) -> "NCPoly":
        return NCPoly(alphabet)

    @staticmethod
    def one(alphabet: Alphabet) -> "NCPoly":
        return NCPoly(alphabet, {(): Scalar.one()})

    @staticmethod
    def generator(alphabet: Alphabet, name: str) -> "NCPoly":
        return NCPoly(alphabet, {(alphabet.index(name),): Scalar.one()})

    @staticmethod
    def monomial(alphabet: Alphabet, names: Iterable[str], coeff=None) -> "NCPoly":
        c = Scalar.one() if coeff is None else _as_scalar(coeff)
        return NCPoly(alphabet, {alphabet.word(names): c})

    @staticmethod
    def constant(alphabet: Alphabet, coeff) -> "NCPoly":
        return NCPoly(alphabet, {(): _as_scalar(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, word) -> Scalar:
        if not isinstance(word, tuple):
            word = self.alphabet.word(word)
        return self.terms.get(word, Scalar.zero())

    def words(self):
        return self.terms.keys()

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def _check(self, other: "NCPoly"):
        if self.alphabet is not other.alphabet:
            raise AlphabetMismatch(
                f"cannot combine words over {self.alphabet!r} and {other.alphabet!r}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Scalar)):
            other = NCPoly.constant(self.alphabet, other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for word, coeff in other.terms.items():
            cur = out.get(word)
            s = coeff if cur is None else cur + coeff
            if s.is_zero():
                out.pop(word, None)
            else:
                out[word] = s
        return NCPoly(self.alphabet, out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.alphabet, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Scalar)):
            other = NCPoly.constant(self.alphabet, other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        self._check(other)
        sort_word = self.alphabet.sort_word
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = sort_word(w1 + w2)
                c = c1 * c2
                cur = out.get(w)
                s = c if cur is None else cur + c
                if s.is_zero():
                    out.pop(w, None)
                else:
                    out[w] = s
        return NCPoly(self.alphabet, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def scale(self, coeff) -> "NCPoly":
        c = _as_scalar(coeff)
        if c.is_zero():
            return NCPoly(self.alphabet)
        return NCPoly(self.alphabet, {w: v * c for w, v in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        out = NCPoly.one(self.alphabet)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Scalar)):
            other = NCPoly.constant(self.alphabet, other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.alphabet is other.alphabet and self.terms == other.terms

    def __hash__(self):
        return hash(
            (id(self.alphabet), frozenset(self.terms.items()))
        )

    def graded_slice(self, n: int, grading: str = "word_length") -> "NCPoly":
        if grading == "word_length":
            keep = {w: c for w, c in self.terms.items() if len(w) == n}
        elif grading == "form_degree":
            fd = self.alphabet.form_degree
            keep = {w: c for w, c in self.terms.items() if fd(w) == n}
        else:
            raise ValueError(f"unknown grading {grading!r}")
        return NCPoly(self.alphabet, keep)

    def map_coefficients(self, fn) -> "NCPoly":
        return NCPoly(self.alphabet, {w: fn(c) for w, c in self.terms.items()})

    def reversed_words(self) -> "NCPoly":
        out: dict = {}
        sort_word = self.alphabet.sort_word
        for w, c in self.terms.items():
            rw = sort_word(tuple(reversed(w)))
            cur = out.get(rw)
            s = c if cur is None else cur + c
            if s.is_zero():
                out.pop(rw, None)
            else:
                out[rw] = s
        return NCPoly(self.alphabet, out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for word in sorted(self.terms, key=lambda w: (len(w), w)):
            coeff = self.terms[word]
            word_text = self.alphabet.word_str(word)
            pieces.append(_term_text(coeff, word_text))
        out = pieces[0]
        for piece in pieces[1:]:
            if piece.startswith("- "):
                out += " - " + piece[2:]
            else:
                out += " + " + piece
        return out

    def __repr__(self) -> str:
        return f"NCPoly({self})"


def _as_scalar(value) -> Scalar:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, int):
        return Scalar.from_int(value)
    raise TypeError(f"cannot use {value!r} as a coefficient")


def _needs_parens(s: str) -> bool:
    depth = 0
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == " " and depth == 0:
            return True
    return False


def _term_text(coeff: Scalar, word_text: str) -> str:
    s = str(coeff)
    if not word_text:
        return f"({s})" if _needs_parens(s) else s
    if s == "1":
        return word_text
    if s == "-1":
        return f"- {word_text}"
    negated = False
    if s.startswith("-") and not _needs_parens(s):
        negated = True
        s = s[1:]
    if _needs_parens(s):
        s = f"({s})"
    text = f"{s} {word_text}"
    return f"- {text}" if negated else text


def poly_arith(a: NCPoly, b: NCPoly, op: str) -> NCPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def graded_slice(poly: NCPoly, n: int, grading: str = "word_length") -> NCPoly:
    return poly.graded_slice(n, grading)


_TOKEN_CHARS = set("+-*/^()")


def _tokenize(text: str):
    tokens = []
    k = 0
    n = len(text)
    while k < n:
        ch = text[k]
        if ch.isspace():
            k += 1
            continue
        if ch in _TOKEN_CHARS:
            tokens.append(("op", ch))
            k += 1
            continue
        if ch.isdigit():
            start = k
            while k < n and text[k].isdigit():
                k += 1
            tokens.append(("int", text[start:k]))
            continue
        if ch.isalpha() or ch == "_":
            start = k
            while k < n and (text[k].isalnum() or text[k] == "_"):
                k += 1
            tokens.append(("name", text[start:k]))
            continue
        raise ValueError(f"unexpected character {ch!r} in polynomial text")
    return tokens


class _PolyParser:
    """Sums of juxtaposed factors; '*' '/' '^' bind like juxtaposition."""

    def __init__(self, alphabet: Alphabet, tokens):
        self.alphabet = alphabet
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of polynomial text")
        self.pos += 1
        return tok

    def parse(self) -> NCPoly:
        poly = self.expr()
        if self.peek() is not None:
            raise ValueError(f"trailing tokens at position {self.pos}")
        return poly

    def expr(self) -> NCPoly:
        sign = 1
        tok = self.peek()
        if tok == ("op", "-"):
            self.take()
            sign = -1
        elif tok == ("op", "+"):
            self.take()
        out = self.term()
        if sign < 0:
            out = -out
        while True:
            tok = self.peek()
            if tok == ("op", "+"):
                self.take()
                out = out + self.term()
            elif tok == ("op", "-"):
                self.take()
                out = out - self.term()
            else:
                return out

    def term(self) -> NCPoly:
        out = self.power()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                out = out * self.power()
            elif tok == ("op", "/"):
                self.take()
                out = _divide(out, self.power())
            elif tok is not None and (
                tok[0] in ("int", "name") or tok == ("op", "(")
            ):
                out = out * self.power()
            else:
                return out

    def power(self) -> NCPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            neg = False
            if self.peek() == ("op", "-"):
                self.take()
                neg = True
            kind, text = self.take()
            if kind != "int":
                raise ValueError("exponent must be an integer literal")
            n = int(text)
            if neg:
                inv = _invert(base)
                return inv ** n
            return base ** n
        return base

    def atom(self) -> NCPoly:
        kind, text = self.take()
        if kind == "int":
            return NCPoly.constant(self.alphabet, int(text))
        if kind == "name":
            if self.alphabet.has(text):
                return NCPoly.generator(self.alphabet, text)
            if text == "i":
                return NCPoly.constant(self.alphabet, Scalar.i())
            return NCPoly.constant(self.alphabet, Scalar.variable(text))
        if (kind, text) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("expected closing parenthesis")
            return inner
        if (kind, text) == ("op", "-"):
            return -self.atom()
        raise ValueError(f"unexpected token {text!r}")


def _constant_value(poly: NCPoly) -> Scalar:
    if not poly.terms:
        return Scalar.zero()
    if set(poly.terms) == {()}:
        return poly.terms[()]
    raise ValueError("expected a scalar (constant) subexpression")


def _divide(a: NCPoly, b: NCPoly) -> NCPoly:
    return a.scale(Scalar.one() / _constant_value(b))


def _invert(poly: NCPoly) -> NCPoly:
    return NCPoly.constant(poly.alphabet, Scalar.one() / _constant_value(poly))


def parse_poly(alphabet: Alphabet, text: str) -> NCPoly:
    """Parse canonical polynomial text back into an NCPoly."""
    return _PolyParser(alphabet, _tokenize(text)).parse()
