"""Torus gradings and their infinitesimal action.

A rational torus ``H`` acting by Poisson automorphisms with the generators as
eigenvectors is recorded only through its character lattice: generator
``x_j`` has weight ``w_j`` in ``Z^r``, and an element ``eta`` of the Lie
algebra (a vector in ``Q^r``) acts on ``x^a`` by the scalar
``(eta | sum_j a_j w_j)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .cauchon import check_s_relation
from .errors import HypothesisError
from .exactalg import LaurentPoly, as_rational, rational_str, weight_of
from .poisson import BracketTable, IteratedPPASpec
from .report import Report, combine


@dataclass(frozen=True)
class TorusData:
    r: int
    weights: tuple[tuple[int, ...], ...]
    etas: tuple[tuple[Fraction, ...] | None, ...]

    def __init__(self, r: int, weights: Sequence[Sequence[int]],
                 etas: Sequence[Sequence | None]):
        w = tuple(tuple(int(a) for a in row) for row in weights)
        e = tuple(None if row is None else tuple(as_rational(a) for a in row) for row in etas)
        if len(w) != len(e):
            raise ValueError("weights and etas must have one entry per generator")
        for row in w:
            if len(row) != r:
                raise ValueError(f"weight {row} does not have length {r}")
        for row in e:
            if row is not None and len(row) != r:
                raise ValueError(f"eta {row} does not have length {r}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "etas", e)

    @property
    def n(self) -> int:
        return len(self.weights)

    def pairing(self, i: int, weight: Sequence[int]) -> Fraction:
        eta = self.etas[i]
        if eta is None:
            raise ValueError(f"no eta vector for step {i}")
        return sum((a * b for a, b in zip(eta, weight)), Fraction(0))

    def eigenvalue(self, i: int) -> Fraction:
        """Scalar by which ``eta_i`` acts on ``x_i``."""
        return self.pairing(i, self.weights[i])

    def weight(self, f: LaurentPoly):
        return f.homogeneous_weight(self.weights)


def eta_act(td: TorusData, i: int, f: LaurentPoly) -> LaurentPoly:
    """Infinitesimal action of ``eta_i``: ``x^a -> (eta_i | weight(x^a)) x^a``."""
    out = {}
    for exp, c in f.items():
        v = td.pairing(i, weight_of(exp, td.weights))
        if v:
            out[exp] = c * v
    return LaurentPoly(f.n, out)


def _zero_weight(r: int) -> tuple[int, ...]:
    return (0,) * r


def verify_thm17(spec: IteratedPPASpec, td: TorusData) -> Report:
    """Check the hypotheses that bound the number of torus-stable Poisson primes by ``2^n``.

    1. ``eta_i . x_j = alpha_i(x_j)`` for ``j < i``;
    2. ``eta_i`` acts on ``x_i`` by a nonzero scalar;

    plus grading compatibility: ``alpha_i(x_j)`` has weight ``w_j`` and
    ``delta_i(x_j)`` has weight ``w_i + w_j``.  A missing eta for the first
    generator is replaced by ``eta = w_1``, which is admissible exactly when
    ``w_1 != 0``.
    """
    n = spec.n
    if td.n != n:
        raise ValueError(f"torus data covers {td.n} generators, algebra has {n}")
    names = spec.names
    gens = LaurentPoly.gens(n)
    reports = []
    eigen = []
    for i in range(n):
        if td.etas[i] is None:
            if i > 0:
                raise ValueError(f"eta vector missing for step {names[i]}")
            val = sum((a * a for a in td.weights[0]), Fraction(0))
        else:
            val = td.eigenvalue(i)
        eigen.append(val)
        reports.append(Report("eigenvalue-nonzero", bool(val),
                              None if val else {"step": names[i], "eigenvalue": "0"}))
        if i == 0:
            continue
        for j in range(i):
            lhs = eta_act(td, i, gens[j])
            rhs = spec.alpha_value(i, j)
            ok = lhs == rhs
            reports.append(Report("eta-matches-alpha", ok, None if ok else {
                "step": names[i], "generator": names[j],
                "eta_action": lhs.format(names), "alpha": rhs.format(names)}))

            wj = td.weights[j]
            wij = tuple(a + b for a, b in zip(td.weights[i], wj))
            wa = td.weight(rhs)
            ok = wa is not None and (not rhs or wa == wj)
            reports.append(Report("alpha-homogeneous", ok, None if ok else {
                "step": names[i], "generator": names[j], "value": rhs.format(names),
                "expected_weight": list(wj)}))
            d = spec.delta_value(i, j)
            wd = td.weight(d)
            ok = wd is not None and (not d or wd == wij)
            reports.append(Report("delta-homogeneous", ok, None if ok else {
                "step": names[i], "generator": names[j], "value": d.format(names),
                "expected_weight": list(wij)}))

    hyp1 = all(r.passed for r in reports if r.name == "eta-matches-alpha")
    hyp2 = all(r.passed for r in reports if r.name == "eigenvalue-nonzero")
    grading = all(r.passed for r in reports if r.name.endswith("homogeneous"))
    out = combine("torus-hypotheses", reports,
                  eta_matches_alpha=hyp1, eigenvalues_nonzero=hyp2, grading=grading,
                  eigenvalues=[rational_str(v) for v in eigen])
    if out.passed:
        out.details["bound"] = 2 ** n
    return out


def derive_s(spec: IteratedPPASpec, td: TorusData) -> list[Fraction | None]:
    """``s_i = (eta_i | w_i)``, checked against ``alpha_i delta_i = delta_i (alpha_i + s_i)``.

    Entry 0 is None when no eta is given for the first generator.
    """
    rep = verify_thm17(spec, td)
    if not (rep.details["eta_matches_alpha"] and rep.details["eigenvalues_nonzero"]):
        raise HypothesisError("torus data does not meet the eta/eigenvalue hypotheses",
                              rep.witness)
    out: list[Fraction | None] = []
    for i in range(spec.n):
        if td.etas[i] is None:
            out.append(None)
            continue
        s = td.eigenvalue(i)
        chk = check_s_relation(spec, i, s)
        if not chk:
            raise HypothesisError(f"alpha delta = delta (alpha + s) fails at step {spec.names[i]}",
                                  chk.witness)
        out.append(s)
    return out


def resolve_s(spec: IteratedPPASpec, td: TorusData | None) -> list[Fraction | None]:
    """Combine supplied ``s`` values with torus-derived ones, insisting they agree."""
    if td is None:
        return list(spec.s)
    derived = derive_s(spec, td)
    out = []
    for i, (given, d) in enumerate(zip(spec.s, derived)):
        if given is not None and d is not None and given != d and spec.delta[i]:
            raise HypothesisError(
                f"supplied s for step {spec.names[i]} disagrees with the torus data",
                {"step": spec.names[i], "supplied": rational_str(given), "derived": rational_str(d)})
        out.append(given if given is not None else d)
    return out


def enumerate_variable_hstable(table: BracketTable) -> list[tuple[int, ...]]:
    """All ``I`` such that ``<x_l : l in I>`` is a Poisson ideal.

    Ordered by size, then lexicographically.
    """
    n = table.n
    # for each generator j: supports of the terms of every {x_i, x_j}
    needs: list[list[frozenset[int]]] = []
    for j in range(n):
        sets = set()
        for i in range(n):
            for exp, _ in table.value(i, j).items():
                sets.add(frozenset(k for k, a in enumerate(exp) if a > 0))
        needs.append(sorted(sets, key=sorted))
    out = []
    for size in range(n + 1):
        for subset in combinations(range(n), size):
            ideal = set(subset)
            if all(s & ideal for j in subset for s in needs[j]):
                out.append(subset)
    return out
