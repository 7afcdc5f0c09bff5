"""Poisson structures from generator data.

A bracket on ``k[x_1..x_n]`` (or its Laurent localization) is fixed by the
antisymmetric table of generator brackets ``{x_i, x_j}``.  Everything else
follows from the biderivation formula

    {f, g} = sum_{i,j} {x_i, x_j} * df/dx_i * dg/dx_j.

Generators are 0-indexed throughout the API; display names default to
``x1..xn``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import intmat
from .exactalg import LaurentPoly, as_rational
from .report import Report, combine


class LaurentInputError(ValueError):
    """A Laurent polynomial was handed to a polynomial-only bracket table."""


class SpecError(ValueError):
    """Malformed algebra data."""


def default_names(n: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(n))


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class QuadraticSpec:
    """Antisymmetric rational matrix defining ``{x_i, x_j} = lam[i][j] x_i x_j``."""

    lam: tuple[tuple[Fraction, ...], ...]

    def __init__(self, lam: Sequence[Sequence]):
        rows = tuple(tuple(as_rational(v) for v in row) for row in lam)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise SpecError("lambda must be square")
        if not intmat.is_antisymmetric(rows):
            raise SpecError("lambda must be antisymmetric with zero diagonal")
        object.__setattr__(self, "lam", rows)

    @property
    def n(self) -> int:
        return len(self.lam)

    def pairing(self, a: Sequence[int], b: Sequence[int]) -> Fraction:
        """``a lam b^T`` for integer row vectors."""
        total = Fraction(0)
        for i, ai in enumerate(a):
            if ai:
                row = self.lam[i]
                for j, bj in enumerate(b):
                    if bj and row[j]:
                        total += ai * bj * row[j]
        return total

    def table(self, laurent: bool = True, names=None) -> "BracketTable":
        n = self.n
        brackets = {}
        for i in range(n):
            for j in range(i):
                if self.lam[i][j]:
                    exp = [0] * n
                    exp[i] += 1
                    exp[j] += 1
                    brackets[(i, j)] = LaurentPoly.monomial(exp, self.lam[i][j])
        return BracketTable(n, brackets, laurent=laurent, names=names)


class BracketTable:
    """Generator brackets ``{x_i, x_j}`` stored for ``i > j``."""

    def __init__(self, n: int, brackets: Mapping[tuple[int, int], LaurentPoly],
                 laurent: bool = False, names: Sequence[str] | None = None):
        self.n = n
        self.laurent = laurent
        self.names = tuple(names) if names else default_names(n)
        full = [[LaurentPoly.zero(n) for _ in range(n)] for _ in range(n)]
        for (i, j), v in brackets.items():
            if v.n != n:
                raise SpecError(f"bracket ({i},{j}) lives in {v.n} variables, expected {n}")
            if i == j:
                if v:
                    raise SpecError(f"{{x_{i}, x_{i}}} must vanish")
                continue
            if i < j:
                i, j, v = j, i, -v
            if not laurent and not v.is_polynomial():
                raise SpecError(f"Laurent bracket value at ({i},{j}) in a polynomial-only table")
            full[i][j] = v
            full[j][i] = -v
        self._full = full

    def value(self, i: int, j: int) -> LaurentPoly:
        return self._full[i][j]

    def row(self, i: int) -> list[LaurentPoly]:
        return self._full[i]

    def nonzero_pairs(self):
        return [(i, j) for i in range(self.n) for j in range(i) if self._full[i][j]]

    def as_laurent(self) -> "BracketTable":
        if self.laurent:
            return self
        return BracketTable(self.n, self.lower(), laurent=True, names=self.names)

    def lower(self) -> dict[tuple[int, int], LaurentPoly]:
        return {(i, j): self._full[i][j] for i in range(self.n) for j in range(i)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, BracketTable):
            return NotImplemented
        return self.n == other.n and self._full == other._full

    def differences(self, other: "BracketTable") -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i)
                if self._full[i][j] != other._full[i][j]]

    def permute(self, perm: Sequence[int]) -> "BracketTable":
        """Relabel: old generator ``k`` becomes new generator ``perm[k]``."""
        out = {}
        for i in range(self.n):
            for j in range(i):
                out[(perm[i], perm[j])] = self._full[i][j].permute(perm)
        names = [None] * self.n
        for k, p in enumerate(perm):
            names[p] = self.names[k]
        return BracketTable(self.n, out, laurent=self.laurent, names=names)


class IteratedPPASpec:
    """Iterated Poisson polynomial algebra ``k[x_1][x_2; a_2, d_2]_p ... [x_n; a_n, d_n]_p``.

    ``alpha[i][j]`` and ``delta[i][j]`` hold the values on ``x_j`` (``j < i``)
    of the derivations attached to step ``i``; missing keys mean zero.  ``s[i]``
    is the optional scalar with ``alpha_i delta_i = delta_i (alpha_i + s_i)``.
    """

    def __init__(self, n: int,
                 alpha: Sequence[Mapping[int, LaurentPoly]],
                 delta: Sequence[Mapping[int, LaurentPoly]],
                 s: Sequence | None = None,
                 names: Sequence[str] | None = None):
        if len(alpha) != n or len(delta) != n:
            raise SpecError(f"need alpha/delta data for all {n} steps")
        self.n = n
        self.names = tuple(names) if names else default_names(n)
        if len(self.names) != n:
            raise SpecError("wrong number of generator names")
        self.alpha = tuple(self._clean(i, alpha[i], "alpha") for i in range(n))
        self.delta = tuple(self._clean(i, delta[i], "delta") for i in range(n))
        s = list(s) if s is not None else [None] * n
        if len(s) != n:
            raise SpecError("s must have one entry per step")
        self.s = tuple(None if v is None else as_rational(v) for v in s)

    def _clean(self, i, values, label):
        out = {}
        for j, v in values.items():
            j = int(j)
            if not 0 <= j < i:
                raise SpecError(f"{label}_{i} given on x_{j}; only earlier generators allowed")
            if v.n != self.n:
                raise SpecError(f"{label}_{i}(x_{j}) has {v.n} variables, expected {self.n}")
            if not v.support() <= set(range(i)):
                raise SpecError(f"{label}_{i}(x_{j}) = {v.format(self.names)} "
                                f"involves generators not below step {i}")
            if v:
                out[j] = v
        return out

    def alpha_value(self, i: int, j: int) -> LaurentPoly:
        return self.alpha[i].get(j, LaurentPoly.zero(self.n))

    def delta_value(self, i: int, j: int) -> LaurentPoly:
        return self.delta[i].get(j, LaurentPoly.zero(self.n))

    def apply_alpha(self, i: int, f: LaurentPoly) -> LaurentPoly:
        return apply_derivation(self.alpha[i], f)

    def apply_delta(self, i: int, f: LaurentPoly) -> LaurentPoly:
        return apply_derivation(self.delta[i], f)

    def has_delta(self, i: int) -> bool:
        return bool(self.delta[i])

    def replace(self, *, alpha=None, delta=None, s=None, names=None) -> "IteratedPPASpec":
        return IteratedPPASpec(
            self.n,
            self.alpha if alpha is None else alpha,
            self.delta if delta is None else delta,
            self.s if s is None else s,
            self.names if names is None else names,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, IteratedPPASpec):
            return NotImplemented
        return (self.n, self.alpha, self.delta, self.s, self.names) == \
            (other.n, other.alpha, other.delta, other.s, other.names)


@dataclass(frozen=True)
class Lattice:
    """Sublattice of ``Z^n`` given by a Hermite-reduced basis."""

    n: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        return intmat.in_row_lattice(v, self.basis)


# ---------------------------------------------------------------------------
# operations


def apply_derivation(values: Mapping[int, LaurentPoly], f: LaurentPoly) -> LaurentPoly:
    """Derivation fixed by its generator values: ``sum_j df/dx_j * values[j]``."""
    out = LaurentPoly.zero(f.n)
    if not values or not f:
        return out
    for j in f.support():
        v = values.get(j)
        if v:
            out = out + f.partial(j) * v
    return out


def ppa_to_table(spec: IteratedPPASpec, laurent: bool = False) -> BracketTable:
    """Generator brackets ``{x_i, x_j} = alpha_i(x_j) x_i + delta_i(x_j)`` for ``i > j``."""
    n = spec.n
    out = {}
    for i in range(n):
        xi = LaurentPoly.gen(n, i)
        for j in range(i):
            out[(i, j)] = spec.alpha_value(i, j) * xi + spec.delta_value(i, j)
    return BracketTable(n, out, laurent=laurent, names=spec.names)


def _check_inputs(table: BracketTable, *polys: LaurentPoly):
    for p in polys:
        if p.n != table.n:
            raise SpecError(f"polynomial in {p.n} variables used with a {table.n}-generator table")
        if not table.laurent and not p.is_polynomial():
            raise LaurentInputError(
                "Laurent input to a polynomial-only table; use table.as_laurent()")


def bracket(table: BracketTable, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Evaluate ``{f, g}`` by the biderivation formula."""
    _check_inputs(table, f, g)
    out = LaurentPoly.zero(table.n)
    if not f or not g:
        return out
    df = {i: f.partial(i) for i in f.support()}
    dg = {j: g.partial(j) for j in g.support()}
    for i, fi in df.items():
        row = table.row(i)
        for j, gj in dg.items():
            b = row[j]
            if b:
                out = out + b * fi * gj
    return out


def bracket_gen(table: BracketTable, i: int, f: LaurentPoly) -> LaurentPoly:
    """``{x_i, f}`` without building ``x_i`` explicitly."""
    _check_inputs(table, f)
    out = LaurentPoly.zero(table.n)
    row = table.row(i)
    for j in f.support():
        if row[j]:
            out = out + row[j] * f.partial(j)
    return out


def quadratic_bracket(q: QuadraticSpec, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Bracket for a quadratic structure computed monomial by monomial.

    Uses ``{x^a, x^b} = (a lam b^T) x^(a+b)``; deliberately independent of
    :func:`bracket` so the two can be checked against each other.
    """
    n = q.n
    out: dict[tuple[int, ...], Fraction] = {}
    for a, ca in f.items():
        for b, cb in g.items():
            w = q.pairing(a, b)
            if w:
                e = tuple(x + y for x, y in zip(a, b))
                out[e] = out.get(e, 0) + w * ca * cb
    return LaurentPoly(n, out)


def jacobiator(table: BracketTable, i: int, j: int, k: int) -> LaurentPoly:
    v = table.value
    return (bracket_gen(table, i, v(j, k))
            + bracket_gen(table, j, v(k, i))
            + bracket_gen(table, k, v(i, j)))


def verify_jacobi(table: BracketTable) -> Report:
    """Jacobi identity on all generator triples.

    The Jacobiator of a biderivation is a triderivation, so vanishing on
    generators implies vanishing everywhere.
    """
    failures = []
    checked = 0
    for i, j, k in combinations(range(table.n), 3):
        checked += 1
        jac = jacobiator(table, i, j, k)
        if jac:
            failures.append((i, j, k, jac))
    names = table.names
    witness = None
    if failures:
        i, j, k, jac = failures[0]
        witness = {"triple": [names[i], names[j], names[k]], "jacobiator": jac.format(names)}
    return Report("jacobi", not failures, witness,
                  {"triples": checked, "failures": len(failures)})


def verify_step_condition(spec: IteratedPPASpec, i: int,
                          table: BracketTable | None = None) -> Report:
    """Check that step ``i`` is a legitimate Poisson polynomial extension.

    * ``alpha_i`` is a Poisson derivation of the subalgebra on ``x_0..x_{i-1}``;
    * ``delta_i`` satisfies the twisted derivation identity
      ``d{a,b} = {da,b} + {a,db} + a(a)d(b) - d(a)a(b)``;
    * when ``s_i`` is given, ``alpha_i delta_i = delta_i (alpha_i + s_i)``.

    All three sides are (bi)derivations, so generator pairs suffice.
    """
    if not 0 <= i < spec.n:
        raise IndexError(f"step {i} out of range")
    table = table or ppa_to_table(spec)
    names = spec.names
    n = spec.n
    gens = LaurentPoly.gens(n)
    A = lambda f: spec.apply_alpha(i, f)
    D = lambda f: spec.apply_delta(i, f)
    reports = []
    for a, b in combinations(range(i), 2):
        xa, xb = gens[a], gens[b]
        br = table.value(a, b)
        aa, ab = spec.alpha_value(i, a), spec.alpha_value(i, b)
        da, db = spec.delta_value(i, a), spec.delta_value(i, b)

        lhs = A(br)
        rhs = bracket(table, aa, xb) + bracket(table, xa, ab)
        if lhs != rhs:
            reports.append(Report("alpha-poisson-derivation", False, {
                "step": names[i], "pair": [names[a], names[b]],
                "lhs": lhs.format(names), "rhs": rhs.format(names)}))
        else:
            reports.append(Report("alpha-poisson-derivation", True))

        lhs = D(br)
        rhs = bracket(table, da, xb) + bracket(table, xa, db) + aa * db - da * ab
        if lhs != rhs:
            reports.append(Report("delta-compatibility", False, {
                "step": names[i], "pair": [names[a], names[b]],
                "lhs": lhs.format(names), "rhs": rhs.format(names)}))
        else:
            reports.append(Report("delta-compatibility", True))

    s = spec.s[i]
    if s is not None:
        for j in range(i):
            dj = spec.delta_value(i, j)
            lhs = A(dj)
            rhs = D(spec.alpha_value(i, j)) + dj.scale(s)
            ok = lhs == rhs
            reports.append(Report("alpha-delta-s", ok, None if ok else {
                "step": names[i], "generator": names[j], "s": str(s),
                "alpha_delta": lhs.format(names), "delta_alpha_plus_s": rhs.format(names)}))
    return combine(f"step-condition[{names[i]}]", reports, step=names[i])


def verify_all_steps(spec: IteratedPPASpec, table: BracketTable | None = None) -> Report:
    table = table or ppa_to_table(spec)
    return combine("step-conditions", (verify_step_condition(spec, i, table) for i in range(spec.n)))


def center_lattice(q: QuadraticSpec) -> Lattice:
    """Exponents ``a`` in ``Z^n`` with ``a lam = 0``: the monomial Poisson center."""
    n = q.n
    d = intmat.common_denominator(v for row in q.lam for v in row)
    scaled = [[int(v * d) for v in row] for row in q.lam]
    basis = intmat.left_kernel(scaled)
    return Lattice(n, tuple(tuple(r) for r in basis))


def _term_in_ideal(exp: Sequence[int], ideal: frozenset[int]) -> bool:
    return any(exp[l] > 0 for l in ideal)


def is_poisson_variable_ideal(table: BracketTable, generators: Iterable[int]) -> bool:
    """Whether ``<x_l : l in I>`` is closed under bracketing with every generator."""
    if table.laurent:
        raise LaurentInputError("variable ideals are only meaningful in polynomial mode")
    ideal = frozenset(generators)
    for j in ideal:
        for i in range(table.n):
            for exp, _ in table.value(i, j).items():
                if not _term_in_ideal(exp, ideal):
                    return False
    return True
