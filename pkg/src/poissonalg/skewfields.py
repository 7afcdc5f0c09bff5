"""Isomorphism invariants for quadratic Poisson fields ``k_lam(x_1..x_n)``.

An integer matrix ``A`` with ``mu = A lam A^T`` and ``det A = +-1`` gives an
isomorphism via ``y_i = x^{a_i}``.  The converse is decided here when the
entries of ``lam`` generate a cyclic subgroup of ``(Q-span, +)``, using the
skew normal form of antisymmetric integer matrices.  Everything else is
witness checking plus a bounded search.

Entries of a :class:`SkewMatrix` are :class:`ScalarVector` values, so a matrix
may carry formal symbols (``tau1``, ``tau2`` ...) standing for Z-independent
scalars.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Any, Iterable, Sequence

from . import intmat
from .errors import HypothesisError
from .exactalg import UNIT, LaurentPoly, ScalarVector, rational_str
from .poisson import QuadraticSpec, bracket
from .report import Report, combine

IntegerMatrix = list[list[int]]


class SkewMatrix:
    """Antisymmetric matrix with :class:`ScalarVector` entries."""

    __slots__ = ("n", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        rows = [[v if isinstance(v, ScalarVector) else ScalarVector.parse(v) for v in row]
                for row in entries]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        for i in range(n):
            if rows[i][i]:
                raise ValueError(f"diagonal entry ({i + 1},{i + 1}) must be zero")
            for j in range(i + 1, n):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not negatives")
        self.n = n
        self.entries = tuple(tuple(r) for r in rows)

    @classmethod
    def from_upper(cls, n: int, upper: dict[tuple[int, int], Any]) -> "SkewMatrix":
        m = [[ScalarVector() for _ in range(n)] for _ in range(n)]
        for (i, j), v in upper.items():
            v = v if isinstance(v, ScalarVector) else ScalarVector.parse(v)
            m[i][j] = v
            m[j][i] = -v
        return cls(m)

    def __getitem__(self, ij) -> ScalarVector:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, SkewMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def upper(self) -> list[ScalarVector]:
        return [self.entries[i][j] for i in range(self.n) for j in range(i + 1, self.n)]

    def symbols(self) -> list[str]:
        out = set()
        for v in self.upper():
            out |= v.symbols()
        return sorted(out, key=lambda s: (s != UNIT, s))

    def is_rational(self) -> bool:
        return all(v.is_rational() for v in self.upper())

    def is_zero(self) -> bool:
        return not any(self.upper())

    def rational(self) -> list[list[Fraction]]:
        return [[v.as_rational() for v in row] for row in self.entries]

    def specialize(self, values: dict[str, Fraction]) -> list[list[Fraction]]:
        return [[v.specialize(values) for v in row] for row in self.entries]

    def to_strings(self) -> list[list[str]]:
        return [[str(v) for v in row] for row in self.entries]

    def __repr__(self) -> str:
        return f"SkewMatrix({self.to_strings()})"


def apply_congruence(A: Sequence[Sequence[int]], lam: SkewMatrix) -> SkewMatrix:
    """``A lam A^T`` using only additions and integer multiples of the entries."""
    n = lam.n
    if len(A) != n or any(len(r) != n for r in A):
        raise ValueError(f"A must be {n}x{n}")
    # lam A^T first, column by column
    half = [[ScalarVector() for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for j in range(n):
            acc = ScalarVector()
            for l in range(n):
                if A[j][l] and lam.entries[k][l]:
                    acc = acc + lam.entries[k][l] * A[j][l]
            half[k][j] = acc
    out = [[ScalarVector() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            acc = ScalarVector()
            for k in range(n):
                if A[i][k] and half[k][j]:
                    acc = acc + half[k][j] * A[i][k]
            out[i][j] = acc
            out[j][i] = -acc
    return SkewMatrix(out)


# ---------------------------------------------------------------------------
# checking a monomial change of variables


@dataclass
class WitnessResult:
    mu: SkewMatrix
    rows: list[list[int]]
    report: Report


def witness_isomorphism(A: Sequence[Sequence[int]], lam: SkewMatrix, seed: int = 0) -> WitnessResult:
    """Check that ``y_i = x^{a_i}`` satisfies ``{y_i, y_j} = mu_ij y_i y_j`` with ``mu = A lam A^T``.

    The bracket side is evaluated by the generic biderivation code, so it is
    independent of :func:`apply_congruence`.  Formal symbols are replaced by
    seeded random rationals before the bracket evaluation.
    """
    det = intmat.determinant(A)
    if det not in (1, -1):
        raise HypothesisError(f"det A = {rational_str(det)}; a monomial change of variables needs det +-1",
                              {"det": rational_str(det)})
    n = lam.n
    mu = apply_congruence(A, lam)
    rng = random.Random(seed)
    values = {s: Fraction(rng.randint(1, 97), rng.randint(1, 97)) for s in lam.symbols() if s != UNIT}
    lam_q = lam.specialize(values)
    mu_q = mu.specialize(values)
    table = QuadraticSpec(lam_q).table(laurent=True)
    rows = [list(map(int, r)) for r in A]
    ys = [LaurentPoly.monomial(r) for r in rows]
    reports = []
    for i in range(n):
        for j in range(i + 1, n):
            got = bracket(table, ys[i], ys[j])
            want = (ys[i] * ys[j]).scale(mu_q[i][j])
            ok = got == want
            reports.append(Report("monomial-bracket", ok, None if ok else {
                "pair": [i + 1, j + 1], "bracket": got.format(), "expected": want.format()}))
    details = {"specialized": {k: rational_str(v) for k, v in values.items()}} if values else {}
    return WitnessResult(mu, rows, combine("substitution-brackets", reports, **details))


# ---------------------------------------------------------------------------
# skew normal form


@dataclass
class NormalFormResult:
    C: IntegerMatrix
    d: list[int]

    @property
    def r(self) -> int:
        return len(self.d)

    def block(self, n: int | None = None) -> IntegerMatrix:
        n = len(self.C) if n is None else n
        out = intmat.zeros(n, n)
        for k, dk in enumerate(self.d):
            out[2 * k][2 * k + 1] = dk
            out[2 * k + 1][2 * k] = -dk
        return out


class _Congruence:
    """Integer antisymmetric matrix under simultaneous row/column moves, tracking ``C``."""

    def __init__(self, m):
        self.n = len(m)
        self.m = [list(map(int, r)) for r in m]
        self.c = intmat.identity(self.n)

    def swap(self, a: int, b: int):
        if a == b:
            return
        m = self.m
        m[a], m[b] = m[b], m[a]
        for row in m:
            row[a], row[b] = row[b], row[a]
        self.c[a], self.c[b] = self.c[b], self.c[a]

    def add(self, target: int, source: int, q: int):
        """Index ``target`` += q * index ``source`` (rows and columns)."""
        if not q:
            return
        m = self.m
        m[target] = [x + q * y for x, y in zip(m[target], m[source])]
        for row in m:
            row[target] += q * row[source]
        self.c[target] = [x + q * y for x, y in zip(self.c[target], self.c[source])]


def skew_normal_form(M: Sequence[Sequence[int]]) -> NormalFormResult:
    """``C`` in ``GL_n(Z)`` with ``C M C^T`` block diagonal, blocks ``[[0, d], [-d, 0]]``, ``d_1 | d_2 | ...``."""
    if not intmat.is_antisymmetric(M):
        raise ValueError("skew normal form needs an antisymmetric integer matrix")
    w = _Congruence(M)
    n = w.n
    d: list[int] = []
    k = 0
    while k + 1 < n:
        while True:
            m = w.m
            best = None
            for a in range(k, n):
                for b in range(a + 1, n):
                    v = m[a][b]
                    if v and (best is None or abs(v) < abs(m[best[0]][best[1]])):
                        best = (a, b)
            if best is None:
                return _finish(w, d, M)
            a, b = best
            w.swap(k, a)
            if b == k:
                b = a
            w.swap(k + 1, b)
            if w.m[k][k + 1] < 0:
                w.swap(k, k + 1)
            piv = w.m[k][k + 1]
            for j in range(k + 2, n):
                # column j of row k is changed by index k+1, row k+1 by index k
                w.add(j, k + 1, -(w.m[k][j] // piv))
                w.add(j, k, w.m[k + 1][j] // piv)
            m = w.m
            if any(m[k][j] or m[k + 1][j] for j in range(k + 2, n)):
                continue
            bad = next(((a, b) for a in range(k + 2, n) for b in range(a + 1, n)
                        if m[a][b] % piv), None)
            if bad is None:
                d.append(piv)
                break
            # pull an entry not divisible by the pivot into row k
            w.add(k, bad[0], 1)
        k += 2
    return _finish(w, d, M)


def _finish(w: _Congruence, d: list[int], M) -> NormalFormResult:
    res = NormalFormResult(w.c, d)
    if intmat.congruence(res.C, M) != res.block():
        raise AssertionError("normal form bookkeeping failed")
    return res


# ---------------------------------------------------------------------------
# additive structure of the entries


@dataclass
class RationalStructure:
    kind: str                                   # "zero", "cyclic" or "free"
    rank: int
    generator: ScalarVector | None = None
    basis: list[ScalarVector] = field(default_factory=list)
    integerized: IntegerMatrix | None = None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind, "rank": self.rank}
        if self.generator is not None:
            out["generator"] = str(self.generator)
        if self.basis:
            out["basis"] = [str(b) for b in self.basis]
        if self.integerized is not None:
            out["integerized"] = self.integerized
        return out


def _coordinates(values: Iterable[ScalarVector], symbols: Sequence[str]):
    rows = [[v.coords.get(s, Fraction(0)) for s in symbols] for v in values]
    den = intmat.common_denominator(x for r in rows for x in r)
    return [[int(x * den) for x in r] for r in rows], den


def rational_structure(lam: SkewMatrix) -> RationalStructure:
    """The subgroup of the scalar space generated by the entries ``lam_ij``."""
    symbols = lam.symbols()
    upper = lam.upper()
    if not symbols:
        return RationalStructure("zero", 0)
    rows, den = _coordinates(upper, symbols)
    basis = intmat.hnf(rows)
    vecs = [ScalarVector({s: Fraction(x, den) for s, x in zip(symbols, r)}) for r in basis]
    if len(basis) > 1:
        return RationalStructure("free", len(basis), basis=vecs)
    gen_row = basis[0]
    gen = vecs[0]
    piv = next(i for i, x in enumerate(gen_row) if x)
    n = lam.n
    ints = intmat.zeros(n, n)
    for i in range(n):
        for j in range(n):
            coords = lam.entries[i][j].coords.get(symbols[piv], Fraction(0)) * den
            ints[i][j] = int(coords) // gen_row[piv]
    return RationalStructure("cyclic", 1, generator=gen, basis=vecs, integerized=ints)


def rational_gcd(values: Iterable[Fraction]) -> Fraction:
    """Positive generator of the subgroup of Q generated by ``values`` (0 if all vanish)."""
    g = Fraction(0)
    for v in values:
        v = Fraction(v)
        if not v:
            continue
        if not g:
            g = abs(v)
            continue
        g = Fraction(gcd(g.numerator * v.denominator, v.numerator * g.denominator),
                     g.denominator * v.denominator)
    return g


# ---------------------------------------------------------------------------
# decisions


@dataclass
class IsoDecision:
    verdict: str                       # "yes", "no", "no-within-budget"
    witness: IntegerMatrix | None = None
    reason: str = ""
    details: dict = field(default_factory=dict)

    @property
    def isomorphic(self) -> bool:
        return self.verdict == "yes"

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"verdict": self.verdict, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out


def _checked(A: IntegerMatrix, lam: SkewMatrix, mu: SkewMatrix) -> IntegerMatrix:
    if apply_congruence(A, lam) != mu:
        raise AssertionError("emitted witness does not reproduce mu")
    return A


def decide_iso_case_b(lam: SkewMatrix, mu: SkewMatrix) -> IsoDecision:
    """Decide isomorphism when the entries of ``lam`` generate a cyclic group."""
    if lam.n != mu.n:
        raise ValueError("matrices have different sizes")
    n = lam.n
    ls = rational_structure(lam)
    if ls.kind == "free":
        raise HypothesisError(
            f"entries of lambda generate a free group of rank {ls.rank}; the cyclic decision does not apply",
            {"rank": ls.rank})
    if ls.kind == "zero":
        if mu.is_zero():
            return IsoDecision("yes", intmat.identity(n), "both brackets vanish")
        return IsoDecision("no", reason="lambda is zero but mu is not")
    ms = rational_structure(mu)
    if ms.kind != "cyclic" or ms.generator != ls.generator:
        return IsoDecision("no", reason="entries generate different subgroups",
                           details={"lambda_group": ls.to_dict(), "mu_group": ms.to_dict()})
    nl = skew_normal_form(ls.integerized)
    nm = skew_normal_form(ms.integerized)
    details = {"generator": str(ls.generator), "lambda_d": nl.d, "mu_d": nm.d}
    if nl.d != nm.d:
        return IsoDecision("no", reason="skew normal forms differ", details=details)
    A = intmat.matmul(intmat.unimodular_inverse(nm.C), nl.C)
    return IsoDecision("yes", _checked(A, lam, mu), "equal skew normal forms", details)


def decide_iso_2x2(lam: SkewMatrix, mu: SkewMatrix) -> IsoDecision:
    if lam.n != 2 or mu.n != 2:
        raise ValueError("decide_iso_2x2 needs 2x2 matrices")
    a, b = lam[0, 1], mu[0, 1]
    if a == b:
        return IsoDecision("yes", _checked([[1, 0], [0, 1]], lam, mu), "lambda = mu")
    if a == -b:
        return IsoDecision("yes", _checked([[0, 1], [1, 0]], lam, mu), "lambda = -mu")
    return IsoDecision("no", reason="lambda_12 is neither mu_12 nor -mu_12")


def _entries_in_group(lam: SkewMatrix, nu: SkewMatrix) -> list[tuple[int, int]]:
    """Positions of ``nu`` entries outside the subgroup generated by ``lam``'s entries."""
    symbols = sorted(set(lam.symbols()) | set(nu.symbols()), key=lambda s: (s != UNIT, s))
    if not symbols:
        return []
    rows, den = _coordinates(lam.upper() + nu.upper(), symbols)
    k = len(lam.upper())
    basis = intmat.hnf(rows[:k])
    out = []
    pos = [(i, j) for i in range(nu.n) for j in range(i + 1, nu.n)]
    for (i, j), r in zip(pos, rows[k:]):
        if not intmat.in_row_lattice(r, basis):
            out.append((i + 1, j + 1))
    return out


def _candidate_rows(n: int, level: int):
    """Integer rows with max-abs <= level, ordered 0, 1, -1, 2, -2, ... per entry."""
    vals = [0]
    for v in range(1, level + 1):
        vals += [v, -v]
    return [list(r) for r in product(vals, repeat=n)]


def _search(lam: SkewMatrix, nu: SkewMatrix, budget: int, unimodular: bool) -> IntegerMatrix | None:
    n = lam.n
    symbols = sorted(set(lam.symbols()) | set(nu.symbols()), key=lambda s: (s != UNIT, s))
    # one rational matrix per symbol: a lam b^T is a vector of bilinear forms
    lam_s = [[[lam.entries[i][j].coords.get(s, Fraction(0)) for j in range(n)] for i in range(n)]
             for s in symbols]
    nu_v = [[tuple(nu.entries[i][j].coords.get(s, Fraction(0)) for s in symbols) for j in range(n)]
            for i in range(n)]

    def pairing(lam_a, b):
        return tuple(sum((x * y for x, y in zip(la, b)), Fraction(0)) for la in lam_a)

    for level in range(budget + 1):
        rows = _candidate_rows(n, level)
        # lam a^T for every candidate, per symbol
        images = [tuple(tuple(sum((ls[i][j] * a[j] for j in range(n)), Fraction(0))
                              for i in range(n)) for ls in lam_s) for a in rows]
        chosen: list[int] = []

        def extend(i: int) -> IntegerMatrix | None:
            if i == n:
                A = [rows[k] for k in chosen]
                if max((abs(x) for r in A for x in r), default=0) != level:
                    return None      # already tried at a smaller level
                if unimodular and intmat.determinant(A) not in (1, -1):
                    return None
                return [r[:] for r in A]
            for k, a in enumerate(rows):
                ok = True
                for p, kp in enumerate(chosen):
                    # nu[p][i] = a_p lam a_i^T
                    if pairing(images[k], rows[kp]) != nu_v[p][i]:
                        ok = False
                        break
                if ok:
                    chosen.append(k)
                    found = extend(i + 1)
                    if found is not None:
                        return found
                    chosen.pop()
            return None

        found = extend(0)
        if found is not None:
            return found
    return None


def orbit_membership_bounded(lam: SkewMatrix, nu: SkewMatrix, budget: int) -> IsoDecision:
    """Search ``A`` in ``M_n(Z)`` with entries in ``[-budget, budget]`` and ``nu = A lam A^T``.

    Candidates are tried by increasing max-abs entry; within a level each
    entry runs through ``0, 1, -1, 2, -2, ...`` row by row, so the first hit
    is deterministic.  A "no" is relative to the budget unless an obstruction
    is recorded.
    """
    if lam.n != nu.n:
        raise ValueError("matrices have different sizes")
    outside = _entries_in_group(lam, nu)
    details: dict[str, Any] = {"budget": budget}
    if outside:
        details["obstruction"] = (
            "entries " + ", ".join(f"({i},{j})" for i, j in outside)
            + " of nu are not integer combinations of the entries of lambda")
    A = _search(lam, nu, budget, unimodular=False)
    if A is not None:
        return IsoDecision("yes", _checked(A, lam, nu), "witness found", details)
    return IsoDecision("no-within-budget", reason=f"no integer matrix with entries bounded by {budget}",
                       details=details)


def search_gl_witness(lam: SkewMatrix, mu: SkewMatrix, budget: int) -> IsoDecision:
    """Bounded search for ``A`` in ``GL_n(Z)`` with ``mu = A lam A^T``."""
    if lam.n != mu.n:
        raise ValueError("matrices have different sizes")
    A = _search(lam, mu, budget, unimodular=True)
    if A is not None:
        return IsoDecision("yes", _checked(A, lam, mu), "unimodular witness found", {"budget": budget})
    return IsoDecision("no-within-budget", reason=f"no unimodular matrix with entries bounded by {budget}",
                       details={"budget": budget})


def check_two_sided_witnesses(lam: SkewMatrix, mu: SkewMatrix, A, B) -> Report:
    """Given ``mu = A lam A^T`` and ``lam = B mu B^T`` over ``M_n(Z)``, conclude ``A`` is unimodular.

    Applies when ``lam`` is invertible (then ``det(BA)^2 = 1``) or when the
    entries above the diagonal are Z-independent (then ``BA`` is diagonal with
    entries +-1).  A failure pinpoints the offending entry of ``BA``.
    """
    n = lam.n
    if apply_congruence(A, lam) != mu:
        return Report("two-sided-witness", False, {"reason": "mu != A lam A^T"})
    if apply_congruence(B, mu) != lam:
        return Report("two-sided-witness", False, {"reason": "lam != B mu B^T"})
    BA = intmat.matmul(B, A)
    st = rational_structure(lam)
    if n >= 2 and st.kind == "free" and st.rank == n * (n - 1) // 2:
        for i in range(n):
            for j in range(n):
                want = (1, -1) if i == j else (0,)
                if BA[i][j] not in want:
                    return Report("two-sided-witness", False, {
                        "reason": "BA must be diagonal with entries +-1",
                        "entry": [i + 1, j + 1], "value": BA[i][j]})
        return Report("two-sided-witness", True, details={"case": "independent entries", "BA": BA})
    if lam.is_rational() and intmat.determinant(lam.rational()) != 0:
        det = intmat.determinant(BA)
        ok = det * det == 1
        return Report("two-sided-witness", ok, None if ok else {
            "reason": "det(BA)^2 must be 1", "det": rational_str(det)},
            {"case": "invertible lambda"})
    return Report("two-sided-witness", False, {"reason": "lambda is neither invertible nor of full free rank"})


def verify_no_weyl_pair(lam: QuadraticSpec, f: LaurentPoly, g: LaurentPoly) -> Report:
    """The constant term of ``{f, g}`` vanishes for any Laurent polynomials."""
    value = bracket(lam.table(laurent=True), f, g)
    c = value.constant_term()
    return Report("bracket-constant-term", c == 0, None if c == 0 else {
        "f": f.format(), "g": g.format(), "constant_term": rational_str(c)},
        {"constant_term": rational_str(c)})
