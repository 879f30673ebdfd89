"""Rewrite engine and exact linear algebra on graded word spaces.

Rules replace a fixed letter pattern by a polynomial of the same or lower
word length.  Reduction scans each word left to right for the first
pattern occurrence.  Repeated rewriting can revisit a word (the rule set
admits no global termination order), so a word's normal form is obtained
by solving, over the scalar field, the finite linear system linking all
words reachable from it; an unsolvable system raises NonTermination.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import AlphabetMismatch, DegreeBudgetExceeded, NonTermination
from .freepoly import Alphabet, NCPoly
from .report import IdentityReport
from .scalars import Scalar

DEFAULT_SYMBOLIC_BUDGET = 4
DEFAULT_CONCRETE_BUDGET = 6
DEFAULT_STEP_BUDGET = 200000


class RewriteSystem:
    """Pattern rules plus the parameter set their coefficients came from."""

    def __init__(self, alphabet: Alphabet, rules: dict, params, order: str = ""):
        self.alphabet = alphabet
        self.rules = dict(rules)
        self.params = params
        self.order = order or "leftmost pattern, shortest pattern first"
        self.step_budget = DEFAULT_STEP_BUDGET
        self._lengths = sorted({len(pat) for pat in self.rules})
        self._memo: dict = {}
        self._steps: dict = {}

    def is_symbolic(self) -> bool:
        return bool(self.params is not None and self.params.variables)

    def relation_polys(self) -> list[NCPoly]:
        out = []
        for pattern, replacement in sorted(self.rules.items()):
            lhs = NCPoly(self.alphabet, {pattern: Scalar.one()})
            out.append(lhs - replacement)
        return out

    def _find_redex(self, word):
        for pos in range(len(word)):
            for length in self._lengths:
                if pos + length > len(word):
                    continue
                pattern = word[pos : pos + length]
                if pattern in self.rules:
                    return pos, pattern
        return None

    def is_normal_word(self, word) -> bool:
        return self._find_redex(word) is None

    def one_step(self, word, at=None):
        """Replacement terms for the chosen redex; None if word is normal."""
        if at is None:
            hit = self._find_redex(word)
            if hit is None:
                return None
            pos, pattern = hit
        else:
            pos = at
            pattern = None
            for length in self._lengths:
                cand = word[pos : pos + length]
                if cand in self.rules:
                    pattern = cand
                    break
            if pattern is None:
                return None
        replacement = self.rules[pattern]
        sort_word = self.alphabet.sort_word
        out = []
        for w, c in replacement.terms.items():
            out.append((c, sort_word(word[:pos] + w + word[pos + len(pattern):])))
        out.sort(key=lambda item: item[1])
        return out

    def normal_word(self, word) -> dict:
        """Normal form of one word as {normal word: coefficient}."""
        memo = self._memo
        cached = memo.get(word)
        if cached is not None:
            return cached
        steps = self._steps
        seen = {word}
        queue = [word]
        unknowns = []
        visited = 0
        while queue:
            u = queue.pop()
            visited += 1
            if visited > self.step_budget:
                raise NonTermination(
                    f"rewriting budget exceeded while normalizing "
                    f"{self.alphabet.word_str(word)!r}"
                )
            step = steps.get(u)
            if step is None and u not in steps:
                step = self.one_step(u)
                steps[u] = step
            if step is None:
                continue
            unknowns.append(u)
            for _, v in step:
                if v not in seen and v not in memo:
                    seen.add(v)
                    queue.append(v)
        if not unknowns:
            memo[word] = {word: Scalar.one()}
            return memo[word]
        unknowns = sorted(set(unknowns))
        index = {u: k for k, u in enumerate(unknowns)}
        one = Scalar.one()
        rows = []
        rhss = []
        for u in unknowns:
            row = {index[u]: one}
            rhs: dict = {}
            for c, v in steps[u]:
                j = index.get(v)
                if j is not None:
                    cur = row.get(j)
                    s = -c if cur is None else cur - c
                    if s.is_zero():
                        row.pop(j, None)
                    else:
                        row[j] = s
                else:
                    expansion = memo.get(v)
                    if expansion is None:
                        _merge(rhs, v, c)
                    else:
                        for nw, nc in expansion.items():
                            _merge(rhs, nw, c * nc)
            rows.append(row)
            rhss.append(rhs)
        solution = _solve_square(rows, rhss, len(unknowns))
        if solution is None:
            raise NonTermination(
                f"rewriting of {self.alphabet.word_str(word)!r} has a cyclic "
                "dependency with no unique solution under this rule orientation"
            )
        for u, nf in zip(unknowns, solution):
            memo[u] = nf
        result = memo.get(word)
        if result is None:
            memo[word] = {word: one}
            result = memo[word]
        return result

    def reduce(self, poly: NCPoly) -> NCPoly:
        if poly.alphabet is not self.alphabet:
            raise AlphabetMismatch(
                f"polynomial over {poly.alphabet!r} fed to rules over {self.alphabet!r}"
            )
        acc: dict = {}
        for word, coeff in poly.terms.items():
            for nw, nc in self.normal_word(word).items():
                _merge(acc, nw, coeff * nc)
        return NCPoly(self.alphabet, acc)


def _merge(acc: dict, key, coeff):
    cur = acc.get(key)
    s = coeff if cur is None else cur + coeff
    if s.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = s


def _solve_square(rows, rhss, m):
    """Gaussian elimination for a small square sparse system; None if singular."""
    rows = [dict(r) for r in rows]
    rhss = [dict(r) for r in rhss]
    order = []
    used = [False] * m
    for col in range(m):
        pivot = None
        for k in range(m):
            if not used[k] and col in rows[k]:
                pivot = k
                break
        if pivot is None:
            return None
        used[pivot] = True
        order.append((col, pivot))
        pv = rows[pivot][col]
        inv = Scalar.one() / pv
        rows[pivot] = {c: v * inv for c, v in rows[pivot].items()}
        rhss[pivot] = {w: v * inv for w, v in rhss[pivot].items()}
        for k in range(m):
            if k == pivot:
                continue
            factor = rows[k].get(col)
            if factor is None:
                continue
            for c, v in rows[pivot].items():
                cur = rows[k].get(c)
                s = -v * factor if cur is None else cur - v * factor
                if s.is_zero():
                    rows[k].pop(c, None)
                else:
                    rows[k][c] = s
            for w, v in rhss[pivot].items():
                _merge(rhss[k], w, -v * factor)
    solution = [None] * m
    for col, pivot in order:
        solution[col] = rhss[pivot]
    return solution


@dataclass
class GradedComponent:
    degree: int
    basis: list
    dimension: int
    coordinates: dict
    alphabet: Alphabet

    def basis_strings(self) -> list[str]:
        return [self.alphabet.word_str(w) for w in self.basis]

    def express_word(self, word) -> dict:
        coords = self.coordinates.get(word)
        if coords is None:
            raise KeyError(
                f"word {self.alphabet.word_str(word)!r} outside this component"
            )
        return coords

    def express(self, poly: NCPoly) -> dict:
        acc: dict = {}
        for word, coeff in poly.terms.items():
            for bw, bc in self.express_word(word).items():
                _merge(acc, bw, coeff * bc)
        return acc


def word_universe(alphabet: Alphabet, degree: int, letters=None):
    """All rank-sorted words of the given length over selected letters."""
    pool = range(len(alphabet)) if letters is None else sorted(letters)
    out = []
    for word in itertools.product(pool, repeat=degree):
        if alphabet.sort_word(word) == word:
            out.append(word)
    return out


def _num_vars(coeff: Scalar) -> int:
    return len(coeff.variables)


def echelonize(rows, col_order):
    """Division-postponed elimination; pivots prefer coefficients with
    fewer indeterminates, then earlier columns.  Returns (pivots, rows)
    with pivot rows fully reduced against each other and scaled so each
    pivot coefficient is one."""
    rows = [dict(r) for r in rows if r]
    pivots = []
    remaining = list(range(len(rows)))
    while True:
        best = None
        for k in remaining:
            row = rows[k]
            if not row:
                continue
            for col, coeff in row.items():
                key = (_num_vars(coeff), col_order(col), k)
                if best is None or key < best[0]:
                    best = (key, k, col)
        if best is None:
            break
        _, k, col = best
        remaining.remove(k)
        pivot_row = rows[k]
        pv = pivot_row[col]
        for j in remaining:
            row = rows[j]
            factor = row.get(col)
            if factor is None:
                continue
            new = {}
            for c, v in row.items():
                new[c] = v * pv
            for c, v in pivot_row.items():
                cur = new.get(c)
                s = -v * factor if cur is None else cur - v * factor
                if s.is_zero():
                    new.pop(c, None)
                else:
                    new[c] = s
            rows[j] = new
        pivots.append((col, k))
    for idx in range(len(pivots) - 1, -1, -1):
        col, k = pivots[idx]
        pivot_row = rows[k]
        pv = pivot_row[col]
        for jdx in range(idx):
            _, j = pivots[jdx]
            row = rows[j]
            factor = row.get(col)
            if factor is None:
                continue
            new = {}
            for c, v in row.items():
                new[c] = v * pv
            for c, v in pivot_row.items():
                cur = new.get(c)
                s = -v * factor if cur is None else cur - v * factor
                if s.is_zero():
                    new.pop(c, None)
                else:
                    new[c] = s
            rows[j] = new
    result = []
    for col, k in pivots:
        row = rows[k]
        inv = Scalar.one() / row[col]
        result.append((col, {c: v * inv for c, v in row.items()}))
    result.sort(key=lambda item: col_order(item[0]))
    return result


def reduce_against(vector: dict, echelon, col_order=None) -> dict:
    """Remainder of a sparse vector modulo an echelonized span."""
    vec = dict(vector)
    for col, row in echelon:
        factor = vec.get(col)
        if factor is None:
            continue
        for c, v in row.items():
            _merge(vec, c, -v * factor)
    return vec


def span_rank(vectors, col_order=None) -> int:
    order = col_order or (lambda c: c)
    return len(echelonize(vectors, order))


def spans_equal(vectors_a, vectors_b, col_order=None) -> bool:
    order = col_order or (lambda c: c)
    ech_a = echelonize(vectors_a, order)
    ech_b = echelonize(vectors_b, order)
    for _, row in ech_b:
        if reduce_against(row, ech_a):
            return False
    for _, row in ech_a:
        if reduce_against(row, ech_b):
            return False
    return True


def nullspace(rows, ncols) -> list:
    """Basis of the right kernel of a matrix given as sparse rows over
    integer column indices; free coordinates are set to one."""
    ech = echelonize(rows, lambda c: c)
    pivot_cols = [col for col, _ in ech]
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for free in free_cols:
        vec = {free: Scalar.one()}
        for col, row in ech:
            coeff = row.get(free)
            if coeff is not None:
                vec[col] = -coeff
        basis.append(vec)
    return basis


def relation_rows(alphabet: Alphabet, relations, degree: int, letters=None):
    """Sparse rows of all two-sided relation multiples in one degree."""
    universe = word_universe(alphabet, degree, letters)
    pos = {w: k for k, w in enumerate(universe)}
    pool = letters if letters is not None else range(len(alphabet))
    rows = []
    for rel in relations:
        if rel.is_zero():
            continue
        rel_len = len(next(iter(rel.terms)))
        for left_len in range(0, degree - rel_len + 1):
            right_len = degree - rel_len - left_len
            for u in itertools.product(sorted(pool), repeat=left_len):
                left = NCPoly(alphabet, {u: Scalar.one()})
                for v in itertools.product(sorted(pool), repeat=right_len):
                    right = NCPoly(alphabet, {v: Scalar.one()})
                    prod = left * rel * right
                    row = {}
                    skip = False
                    for w, c in prod.terms.items():
                        k = pos.get(w)
                        if k is None:
                            skip = True
                            break
                        row[k] = c
                    if row and not skip:
                        rows.append(row)
    return universe, rows


def matrix_rank(rows) -> int:
    """Rank of sparse scalar rows by single-pass forward elimination."""
    pivots: dict = {}
    rank = 0
    for row in rows:
        vec = dict(row)
        while vec:
            col = min(vec)
            piv = pivots.get(col)
            if piv is None:
                inv = Scalar.one() / vec[col]
                pivots[col] = {c: v * inv for c, v in vec.items()}
                rank += 1
                break
            factor = vec[col]
            for c, v in piv.items():
                _merge(vec, c, -v * factor)
    return rank


def component_from_relations(
    alphabet: Alphabet, relations, degree: int, letters=None
) -> GradedComponent:
    """Graded piece cut out by two-sided multiples of the relations."""
    universe, rows = relation_rows(alphabet, relations, degree, letters)
    ech = echelonize(rows, lambda c: c)
    pivot_cols = {col for col, _ in ech}
    basis = [w for k, w in enumerate(universe) if k not in pivot_cols]
    coordinates = {}
    for k, w in enumerate(universe):
        if k not in pivot_cols:
            coordinates[w] = {w: Scalar.one()}
    for col, row in ech:
        coords = {}
        for c, v in row.items():
            if c != col:
                coords[universe[c]] = -v
        coordinates[universe[col]] = coords
    return GradedComponent(
        degree=degree,
        basis=basis,
        dimension=len(basis),
        coordinates=coordinates,
        alphabet=alphabet,
    )


def component_by_linear_algebra(
    system: RewriteSystem, degree: int, budget: int | None = None
) -> GradedComponent:
    """Dimension and basis of the degree-n piece, independent of rewriting."""
    if budget is None:
        budget = (
            DEFAULT_SYMBOLIC_BUDGET if system.is_symbolic() else DEFAULT_CONCRETE_BUDGET
        )
    if degree > budget:
        raise DegreeBudgetExceeded(
            f"degree {degree} exceeds the budget of {budget} "
            f"({'symbolic' if system.is_symbolic() else 'concrete'} coefficients)"
        )
    return component_from_relations(system.alphabet, system.relation_polys(), degree)


def confluence_probe(
    system: RewriteSystem, degree: int, budget: int | None = None
) -> IdentityReport:
    """Rewriting agrees with linear algebra on the whole degree-n piece."""
    component = component_by_linear_algebra(system, degree, budget)
    universe = word_universe(system.alphabet, degree)
    bad = []
    normal_count = 0
    for word in universe:
        if system.is_normal_word(word):
            normal_count += 1
        reduced = system.reduce(NCPoly(system.alphabet, {word: Scalar.one()}))
        direct = dict(component.express_word(word))
        via_reduce = component.express(reduced)
        for bw, bc in via_reduce.items():
            _merge(direct, bw, -bc)
        for bw, leftover in direct.items():
            bad.append(
                (
                    f"oracle:{system.alphabet.word_str(word)}"
                    f"@{system.alphabet.word_str(bw)}",
                    leftover,
                )
            )
    if normal_count != component.dimension:
        bad.append(
            (
                "normal_count",
                f"{normal_count} normal words vs dimension {component.dimension}",
            )
        )
    if degree == 3:
        for word in universe:
            first = system.one_step(word, at=0)
            second = system.one_step(word, at=1)
            if first is None or second is None:
                continue
            via_first = NCPoly(
                system.alphabet,
                _combine(first),
            )
            via_second = NCPoly(
                system.alphabet,
                _combine(second),
            )
            diff = system.reduce(via_first) - system.reduce(via_second)
            for w, c in diff.terms.items():
                bad.append(
                    (
                        f"overlap:{system.alphabet.word_str(word)}"
                        f"@{system.alphabet.word_str(w)}",
                        c,
                    )
                )
    return IdentityReport.from_residuals(
        "rewrite.confluence_probe",
        f"degree-{degree} rewriting is total, matches the linear-algebra "
        "component, and overlapping redexes agree",
        bad,
        data={"degree": degree, "dimension": component.dimension},
    )


def _combine(terms):
    acc: dict = {}
    for c, w in terms:
        _merge(acc, w, c)
    return acc
