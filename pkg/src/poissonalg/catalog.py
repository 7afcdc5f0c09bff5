"""The six families of semiclassical limits, with their torus data and expected fraction fields.

Every constructor builds the bracket table twice: once from the
iterated-extension data (``alpha``/``delta`` per step) and once straight from
the closed bracket formulas.  The two must agree or :class:`CatalogError` is
raised, so a sign slip in either encoding cannot go unnoticed.

Indices in the formulas below are 1-based to match the usual labelling
``X_ij``, ``x_i``, ``y_ij``; generator positions are 0-based.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from .exactalg import LaurentPoly, as_rational
from .poisson import BracketTable, IteratedPPASpec, QuadraticSpec, ppa_to_table
from .torus import TorusData

FAMILIES = ("affine", "matrices", "symplectic_euclidean", "odd_euclidean",
            "symmetric", "antisymmetric")

# max nilpotency index of each step's delta on generators
NILPOTENCY_BOUND = {
    "affine": 1,
    "matrices": 2,
    "symplectic_euclidean": 2,
    "odd_euclidean": 2,
    "symmetric": 3,
    "antisymmetric": 2,
}


class CatalogError(ValueError):
    pass


def _sign(t: int) -> int:
    return (t > 0) - (t < 0)


def _antisym(m, n: int, label: str) -> tuple[tuple[Fraction, ...], ...]:
    if m is None:
        return tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n))
    rows = tuple(tuple(as_rational(v) for v in row) for row in m)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise CatalogError(f"{label} must be {n}x{n}")
    for i in range(n):
        for j in range(n):
            if rows[i][j] != -rows[j][i]:
                raise CatalogError(f"{label} must be antisymmetric")
    return rows


@dataclass(frozen=True)
class FamilyParams:
    family: str
    n: int
    lam: Fraction | None = None
    p_matrix: tuple | None = None
    gamma: tuple | None = None
    q_matrix: tuple | None = None
    P: tuple | None = None
    Q: tuple | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise CatalogError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.n < 1:
            raise CatalogError("n must be positive")
        n = self.n
        fam = self.family
        if self.lam is not None:
            object.__setattr__(self, "lam", as_rational(self.lam))
        if fam == "affine":
            object.__setattr__(self, "q_matrix", _antisym(self.q_matrix, n, "q"))
        elif fam == "matrices":
            if not self.lam:
                raise CatalogError("matrices need a nonzero lambda (lambda = 0 is a quantum affine space)")
            object.__setattr__(self, "p_matrix", _antisym(self.p_matrix, n, "p"))
        elif fam in ("symplectic_euclidean", "odd_euclidean"):
            object.__setattr__(self, "gamma", _antisym(self.gamma, n, "gamma"))
            if self.P is None or self.Q is None:
                raise CatalogError(f"{fam} needs vectors P and Q")
            P = tuple(as_rational(v) for v in self.P)
            Q = tuple(as_rational(v) for v in self.Q)
            if len(P) != n or len(Q) != n:
                raise CatalogError(f"P and Q must have length {n}")
            for i, (a, b) in enumerate(zip(P, Q)):
                if a == b:
                    raise CatalogError(f"p_{i + 1} = q_{i + 1} = {a}; the family needs p_i != q_i")
            object.__setattr__(self, "P", P)
            object.__setattr__(self, "Q", Q)
            if fam == "odd_euclidean" and self.lam is None:
                object.__setattr__(self, "lam", Fraction(0))
        elif fam == "antisymmetric" and n < 2:
            raise CatalogError("antisymmetric matrices need n >= 2")


@dataclass
class CatalogInstance:
    params: FamilyParams
    spec: IteratedPPASpec
    table: BracketTable
    torus: TorusData
    expected_lambda: QuadraticSpec
    output_names: tuple[str, ...]
    torus_hypotheses_hold: bool
    extras: dict = field(default_factory=dict)

    @property
    def names(self) -> tuple[str, ...]:
        return self.spec.names

    @property
    def n_generators(self) -> int:
        return self.spec.n

    @property
    def nilpotency_bound(self) -> int:
        return NILPOTENCY_BOUND[self.params.family]

    @property
    def hstable_bound(self) -> int:
        return 2 ** self.spec.n


# ---------------------------------------------------------------------------
# random parameters


def random_rational(rng: random.Random) -> Fraction:
    """Numerator and denominator uniform in [1, 50], sign uniform."""
    v = Fraction(rng.randint(1, 50), rng.randint(1, 50))
    return v if rng.random() < 0.5 else -v


def random_antisym(rng: random.Random, n: int) -> list[list[Fraction]]:
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = random_rational(rng)
            m[i][j] = v
            m[j][i] = -v
    return m


def random_params(family: str, n: int, rng: random.Random) -> FamilyParams:
    if family == "affine":
        return FamilyParams(family, n, q_matrix=random_antisym(rng, n))
    if family == "matrices":
        return FamilyParams(family, n, lam=random_rational(rng), p_matrix=random_antisym(rng, n))
    if family in ("symplectic_euclidean", "odd_euclidean"):
        gamma = random_antisym(rng, n)
        P, Q = [], []
        for _ in range(n):
            p = random_rational(rng)
            q = random_rational(rng)
            while q == p:
                q = random_rational(rng)
            P.append(p)
            Q.append(q)
        lam = random_rational(rng) if family == "odd_euclidean" else None
        return FamilyParams(family, n, lam=lam, gamma=gamma, P=P, Q=Q)
    return FamilyParams(family, n)


# ---------------------------------------------------------------------------
# helpers


class _Builder:
    """Collects alpha/delta data and a directly computed bracket table."""

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        self.n = len(names)
        self.alpha = [dict() for _ in range(self.n)]
        self.delta = [dict() for _ in range(self.n)]
        self.direct: dict[tuple[int, int], LaurentPoly] = {}

    def gen(self, k: int) -> LaurentPoly:
        return LaurentPoly.gen(self.n, k)

    def mono(self, c, *ks: int) -> LaurentPoly:
        exp = [0] * self.n
        for k in ks:
            exp[k] += 1
        return LaurentPoly.monomial(exp, c)

    def set_alpha(self, i: int, j: int, c):
        c = as_rational(c)
        if c:
            self.alpha[i][j] = self.mono(c, j)

    def add_delta(self, i: int, j: int, value: LaurentPoly):
        if value:
            self.delta[i][j] = self.delta[i].get(j, LaurentPoly.zero(self.n)) + value

    def put(self, a: int, b: int, value: LaurentPoly):
        """Record ``{g_a, g_b} = value`` from a closed bracket formula."""
        if a == b:
            if value:
                raise CatalogError(f"nonzero self-bracket for {self.names[a]}")
            return
        if a < b:
            a, b, value = b, a, -value
        if (a, b) in self.direct and self.direct[(a, b)] != value:
            raise CatalogError(f"conflicting direct values for {{{self.names[a]}, {self.names[b]}}}")
        self.direct[(a, b)] = value

    def finish(self, s=None) -> tuple[IteratedPPASpec, BracketTable]:
        spec = IteratedPPASpec(self.n, self.alpha, self.delta, s, self.names)
        table = ppa_to_table(spec)
        direct = BracketTable(self.n, self.direct, names=self.names)
        diff = table.differences(direct)
        if diff:
            i, j = diff[0]
            raise CatalogError(
                f"extension data and bracket formula disagree on {{{self.names[i]}, {self.names[j]}}}: "
                f"{table.value(i, j).format(self.names)} vs {direct.value(i, j).format(self.names)}")
        return spec, table


def _unit(r: int, *ks: int, scale=1) -> list[Fraction]:
    v = [Fraction(0)] * r
    for k in ks:
        v[k] += scale
    return v


def _antisym_from(n: int, entry: Callable[[int, int], Fraction]) -> QuadraticSpec:
    """Antisymmetric matrix whose entry (a, b) for a > b is ``entry(a, b)``."""
    m = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(a):
            v = as_rational(entry(a, b))
            m[a][b] = v
            m[b][a] = -v
    return QuadraticSpec(m)


def _label(prefix: str, *idx: int) -> str:
    if all(i < 10 for i in idx):
        return prefix + "".join(str(i) for i in idx)
    return prefix + "_".join(str(i) for i in idx)


# ---------------------------------------------------------------------------
# families


def _affine(pr: FamilyParams) -> CatalogInstance:
    n, q = pr.n, pr.q_matrix
    b = _Builder([_label("x", i + 1) for i in range(n)])
    for i in range(n):
        for j in range(i):
            b.set_alpha(i, j, q[i][j])
            b.put(i, j, b.mono(q[i][j], i, j))
    spec, table = b.finish()
    torus = TorusData(n, [_unit(n, i) for i in range(n)], [list(q[i]) for i in range(n)])
    expected = QuadraticSpec(q)
    return CatalogInstance(pr, spec, table, torus, expected,
                           tuple(_label("y", i + 1) for i in range(n)), False)


def _matrices(pr: FamilyParams) -> CatalogInstance:
    n, lam, p = pr.n, pr.lam, pr.p_matrix
    P = lambda a, c: p[a - 1][c - 1]
    cells = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    idx = {c: k for k, c in enumerate(cells)}
    b = _Builder([_label("X", i, j) for i, j in cells])

    for (l, m), (i, j) in product(cells, cells):
        if not (i, j) < (l, m):
            continue
        a, c = idx[(l, m)], idx[(i, j)]
        # alpha table
        if l > i and m > j:
            b.set_alpha(a, c, P(l, i) + P(j, m))
            b.add_delta(a, c, b.mono(lam, idx[(i, m)], idx[(l, j)]))
        elif l > i:
            b.set_alpha(a, c, lam + P(l, i) + P(j, m))
        else:
            b.set_alpha(a, c, P(j, m))
        # closed bracket formula for {X_lm, X_ij}
        if l > i and m > j:
            v = b.mono(P(l, i) + P(j, m), c, a) + b.mono(lam, idx[(i, m)], idx[(l, j)])
        elif l > i:
            v = b.mono(lam + P(l, i) + P(j, m), c, a)
        else:
            v = b.mono(P(j, m), c, a)
        b.put(a, c, v)

    s = [lam] * len(cells)
    spec, table = b.finish(s)

    r = 2 * n
    weights = [_unit(r, i - 1, n + j - 1) for i, j in cells]
    etas = []
    for l, m in cells:
        eta = [P(l, c) for c in range(1, n + 1)]
        for c in range(1, n + 1):
            eta.append(P(c, m) if c < m else lam if c == m else lam + P(c, m))
        etas.append(eta)
    torus = TorusData(r, weights, etas)

    def expected(a: int, c: int) -> Fraction:
        (l, m), (i, j) = cells[a], cells[c]
        if l >= i and m > j:
            return P(l, i) + P(j, m)
        return lam + P(l, i) + P(j, m)

    return CatalogInstance(pr, spec, table, torus, _antisym_from(len(cells), expected),
                           tuple(_label("Y", i, j) for i, j in cells), True)


def _euclidean(pr: FamilyParams, odd: bool) -> CatalogInstance:
    n, G, Pv, Qv = pr.n, pr.gamma, pr.P, pr.Q
    lam = pr.lam if odd else Fraction(0)
    g = lambda a, c: G[a - 1][c - 1]
    p = lambda a: Pv[a - 1]
    q = lambda a: Qv[a - 1]
    off = 1 if odd else 0
    X = lambda i: off + 2 * (i - 1)
    Y = lambda i: off + 2 * (i - 1) + 1
    Z = 0
    names = (["z0"] if odd else []) + [nm for i in range(1, n + 1) for nm in (f"x{i}", f"y{i}")]
    b = _Builder(names)

    # extension data, step by step
    for i in range(1, n + 1):
        for j in range(1, i):
            # x_i step
            b.set_alpha(X(i), X(j), -q(j) + p(i) + g(i, j))
            b.set_alpha(X(i), Y(j), q(j) + g(j, i))
            # y_i step
            b.set_alpha(Y(i), X(j), -p(i) + g(j, i))
            b.set_alpha(Y(i), Y(j), g(i, j))
        b.set_alpha(Y(i), X(i), -q(i))
        for l in range(1, i):
            b.add_delta(Y(i), X(i), b.mono(-(q(l) - p(l)), X(l), Y(l)))
        if odd:
            b.set_alpha(X(i), Z, p(i) / 2)
            b.set_alpha(Y(i), Z, -p(i) / 2)
            b.add_delta(Y(i), X(i), b.mono(-lam, Z, Z))

    # closed bracket formulas
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                b.put(Y(i), Y(j), b.mono(g(i, j), Y(i), Y(j)))
            if i < j:
                b.put(X(i), Y(j), b.mono(p(j) + g(j, i), X(i), Y(j)))
                b.put(X(i), X(j), b.mono(q(i) - p(j) + g(i, j), X(i), X(j)))
            elif i > j:
                b.put(X(i), Y(j), b.mono(q(j) + g(j, i), X(i), Y(j)))
        v = b.mono(q(i), X(i), Y(i))
        for l in range(1, i):
            v = v + b.mono(q(l) - p(l), X(l), Y(l))
        if odd:
            v = v + b.mono(lam, Z, Z)
            b.put(Z, X(i), b.mono(-p(i) / 2, Z, X(i)))
            b.put(Z, Y(i), b.mono(p(i) / 2, Z, Y(i)))
        b.put(X(i), Y(i), v)

    s: list = [None] * len(names)
    for i in range(1, n + 1):
        s[X(i)] = p(i) - q(i)
        s[Y(i)] = q(i) - p(i) if (odd or i > 1) else Fraction(1)
    spec, table = b.finish(s)

    r = n + 1
    weights: list = [None] * len(names)
    etas: list = [None] * len(names)
    if odd:
        weights[Z] = _unit(r, n)
        for i in range(1, n + 1):
            weights[X(i)] = _unit(r, i - 1)
            weights[Y(i)] = [2 * a - c for a, c in zip(_unit(r, n), _unit(r, i - 1))]
            etas[X(i)] = [-q(l) + p(i) + g(i, l) for l in range(1, n + 1)] + [p(i) / 2]
            eta = [Fraction(0)] * r
            for l in range(1, i):
                eta[l - 1] = -p(i) + g(l, i)
            eta[i - 1] = -q(i)
            eta[n] = -p(i) / 2
            etas[Y(i)] = eta
    else:
        for i in range(1, n + 1):
            weights[X(i)] = _unit(r, i - 1)
            weights[Y(i)] = [a + c - d for a, c, d in zip(_unit(r, 0), _unit(r, n), _unit(r, i - 1))]
        etas[Y(1)] = [-q(1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
        for j in range(2, n + 1):
            eta = [Fraction(0)] * r
            for l in range(1, j):
                eta[l - 1] = -p(j) + g(l, j)
            eta[j - 1] = -q(j)
            eta[n] = g(j, 1)
            etas[Y(j)] = eta
            etas[X(j)] = [-q(l) + p(j) + g(j, l) for l in range(1, n + 1)] + [q(1) + g(1, j)]
    torus = TorusData(r, weights, etas)

    # expected fraction field: u0, v_i, w_i in the same positions
    lam_out = [[Fraction(0)] * len(names) for _ in names]

    def setb(a, c, v):
        lam_out[a][c] = v
        lam_out[c][a] = -v

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                setb(Y(i), Y(j), g(i, j))
            setb(X(i), Y(j), p(j) + g(j, i) if i < j else q(j) + g(j, i))
            if i < j:
                setb(X(i), X(j), q(i) - p(j) + g(i, j))
        if odd:
            setb(Z, X(i), -p(i) / 2)
            setb(Z, Y(i), p(i) / 2)
    out_names = (["u0"] if odd else []) + [nm for i in range(1, n + 1) for nm in (f"v{i}", f"w{i}")]
    return CatalogInstance(pr, spec, table, torus, QuadraticSpec(lam_out), tuple(out_names), True)


def _symmetric_like(pr: FamilyParams, antisym: bool) -> CatalogInstance:
    n = pr.n
    cells = [(i, j) for i in range(1, n + 1) for j in range(i + (1 if antisym else 0), n + 1)]
    idx = {c: k for k, c in enumerate(cells)}
    b = _Builder([_label("y", i, j) for i, j in cells])
    N = len(cells)

    def y(a: int, c: int) -> LaurentPoly:
        """``y_ac`` with the family's symmetry convention."""
        if a == c:
            if antisym:
                return LaurentPoly.zero(N)
            return b.gen(idx[(a, c)])
        if a < c:
            return b.gen(idx[(a, c)])
        return -b.gen(idx[(c, a)]) if antisym else b.gen(idx[(c, a)])

    def sym_coeff(i, j, l, m) -> int:
        if (i == l < j < m) or (i < l < j == m) or (i < j == l < m):
            return 1
        if (i == j == l < m) or (i < j == l == m):
            return 2
        return 0

    def antisym_coeff(i, j, l, m) -> int:
        return 1 if len({i, j} & {l, m}) == 1 else 0

    coeff = antisym_coeff if antisym else sym_coeff
    for (l, m), (i, j) in product(cells, cells):
        if not (i, j) < (l, m):
            continue
        a, c = idx[(l, m)], idx[(i, j)]
        b.set_alpha(a, c, -coeff(i, j, l, m))
        if antisym:
            if i < l < j < m:
                b.add_delta(a, c, (y(i, m) * y(l, j)).scale(-2))
            elif i < j < l < m:
                b.add_delta(a, c, (y(i, l) * y(j, m)).scale(-2) + (y(i, m) * y(j, l)).scale(2))
        else:
            if i < l <= j < m:
                b.add_delta(a, c, (y(i, m) * y(l, j)).scale(-2))
            elif i <= j < l <= m:
                b.add_delta(a, c, (y(i, l) * y(j, m)).scale(-2) + (y(i, m) * y(j, l)).scale(-2))
        # closed formula for {y_ij, y_lm}
        first = (_sign(l - j) + _sign(m - i)) * (y(i, l) * y(j, m))
        second = (_sign(l - i) + _sign(m - j)) * (y(i, m) * y(j, l))
        b.put(c, a, first - second if antisym else first + second)

    s = [Fraction(-2) if antisym or i < j else Fraction(-4) for i, j in cells]
    spec, table = b.finish(s)

    weights = [_unit(n, i - 1, j - 1) for i, j in cells]
    etas = [_unit(n, l - 1, m - 1, scale=-1) for l, m in cells]
    torus = TorusData(n, weights, etas)

    def expected(a: int, c: int) -> Fraction:
        (l, m), (i, j) = cells[a], cells[c]
        # display gives {z_ij, z_lm} for (i,j) < (l,m); entry (a, c) is its negative
        return Fraction(-coeff(i, j, l, m))

    return CatalogInstance(pr, spec, table, torus, _antisym_from(N, expected),
                           tuple(_label("z", i, j) for i, j in cells), True)


def build(params: FamilyParams) -> CatalogInstance:
    fam = params.family
    if fam == "affine":
        return _affine(params)
    if fam == "matrices":
        return _matrices(params)
    if fam == "symplectic_euclidean":
        return _euclidean(params, odd=False)
    if fam == "odd_euclidean":
        return _euclidean(params, odd=True)
    if fam == "symmetric":
        return _symmetric_like(params, antisym=False)
    return _symmetric_like(params, antisym=True)


# sizes used by the default suites: generator counts 6..10
SUITE_SIZES = {
    "affine": 6,
    "matrices": 3,
    "symplectic_euclidean": 3,
    "odd_euclidean": 2,
    "symmetric": 4,
    "antisymmetric": 4,
}


def draw_instances(seed: int = 0, draws: int = 3, sizes: dict | None = None,
                   families: Sequence[str] = FAMILIES) -> list[CatalogInstance]:
    """Seeded random instances, ``draws`` per family, deterministic in ``seed``."""
    sizes = {**SUITE_SIZES, **(sizes or {})}
    rng = random.Random(seed)
    out = []
    for fam in families:
        for _ in range(draws):
            out.append(build(random_params(fam, sizes[fam], rng)))
    return out


def golden_suite(seed: int = 0, draws: int = 3, sizes: dict | None = None) -> list[tuple[CatalogInstance, QuadraticSpec]]:
    """Fixed hand-checkable instances followed by seeded random draws of every family."""
    fixed = [
        build(FamilyParams("affine", 2, q_matrix=[[0, Fraction(3, 2)], [Fraction(-3, 2), 0]])),
        build(FamilyParams("matrices", 2, lam=1)),
        build(FamilyParams("odd_euclidean", 1, lam=Fraction(2, 3), P=[Fraction(4, 5)], Q=[Fraction(-1, 3)])),
    ]
    inst = fixed + draw_instances(seed, draws, sizes)
    return [(c, c.expected_lambda) for c in inst]
