"""Deleting derivations and the quadratic Gel'fand-Kirillov reduction.

For a top extension ``A = B[x; alpha, delta]_p`` with ``delta`` locally
nilpotent and ``alpha delta = delta (alpha + s)``, the map

    theta(b) = sum_m (1/m!) (-1/s)^m delta^m(b) x^(-m)

identifies ``B[y^{+-1}; alpha]_p`` with ``A[x^{-1}]``.  :func:`gk_normalize`
applies it repeatedly (with reorderings in between) until no ``delta`` is
left, which exhibits ``Fract A`` as a quadratic Poisson field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Any, Mapping, Sequence

from .errors import HypothesisError, NilpotencyError
from .exactalg import LaurentPoly, as_rational, rational_str
from .poisson import (
    BracketTable,
    IteratedPPASpec,
    QuadraticSpec,
    apply_derivation,
    bracket,
    bracket_gen,
    ppa_to_table,
)
from .report import Report, combine

DEFAULT_CUTOFF = 64

__all__ = [
    "DEFAULT_CUTOFF",
    "DeletionContext",
    "GKResult",
    "HypothesisError",
    "NilpotencyError",
    "check_s_relation",
    "delta_power",
    "gk_normalize",
    "infer_s",
    "nilpotency_index",
    "theta",
    "theta_inverse",
    "verify_eq_3_2",
    "verify_lemma_3_6",
    "verify_theta_poisson",
]


@dataclass(frozen=True)
class DeletionContext:
    """Data of a top extension ``B[x; alpha, delta]_p`` inside ``n`` variables.

    ``top`` is the index of ``x``; every other generator belongs to ``B``.
    ``table`` is the full bracket table (Laurent mode) of the extension.
    """

    table: BracketTable
    top: int
    alpha: Mapping[int, LaurentPoly]
    delta: Mapping[int, LaurentPoly]
    s: Fraction
    cutoff: int = DEFAULT_CUTOFF

    def __post_init__(self):
        if not self.s:
            raise HypothesisError("deleting derivations needs a nonzero s")
        if self.cutoff < 1:
            raise ValueError("cutoff must be positive")
        if not self.table.laurent:
            object.__setattr__(self, "table", self.table.as_laurent())

    @classmethod
    def from_spec(cls, spec: IteratedPPASpec, s=None, cutoff: int = DEFAULT_CUTOFF,
                  table: BracketTable | None = None) -> "DeletionContext":
        """Context for the last step of ``spec``."""
        top = spec.n - 1
        if s is None:
            s = spec.s[top]
        if s is None:
            s = infer_s(spec, top)
        if s is None:
            raise HypothesisError(f"no s available for step {spec.names[top]}")
        table = table or ppa_to_table(spec, laurent=True)
        return cls(table, top, dict(spec.alpha[top]), dict(spec.delta[top]),
                   as_rational(s), cutoff)

    @property
    def n(self) -> int:
        return self.table.n

    @property
    def names(self):
        return self.table.names

    @property
    def x(self) -> LaurentPoly:
        return LaurentPoly.gen(self.n, self.top)

    def base_generators(self) -> list[int]:
        return [j for j in range(self.n) if j != self.top]

    def apply_alpha(self, f: LaurentPoly) -> LaurentPoly:
        return apply_derivation(self.alpha, f)

    def apply_delta(self, f: LaurentPoly) -> LaurentPoly:
        return apply_derivation(self.delta, f)

    def require_base(self, f: LaurentPoly):
        if self.top in f.support():
            raise ValueError(f"{f.format(self.names)} involves the top generator "
                             f"{self.names[self.top]}; expected an element of B")


def delta_power(ctx: DeletionContext, b: LaurentPoly, k: int) -> LaurentPoly:
    """``delta^k(b)``."""
    if k < 0:
        raise ValueError("power must be nonnegative")
    if k > ctx.cutoff:
        raise NilpotencyError(f"requested delta^{k} beyond cutoff {ctx.cutoff}")
    for _ in range(k):
        if not b:
            break
        b = ctx.apply_delta(b)
    return b


def _delta_orbit(ctx: DeletionContext, b: LaurentPoly) -> list[LaurentPoly]:
    """``[b, delta b, delta^2 b, ...]`` up to the last nonzero power."""
    orbit = []
    cur = b
    while cur:
        if len(orbit) > ctx.cutoff:
            raise NilpotencyError(
                f"delta not nilpotent on {b.format(ctx.names)} within {ctx.cutoff} steps",
                {"element": b.format(ctx.names), "cutoff": ctx.cutoff})
        orbit.append(cur)
        cur = ctx.apply_delta(cur)
    return orbit


def nilpotency_index(delta: Mapping[int, LaurentPoly], f: LaurentPoly,
                     cutoff: int = DEFAULT_CUTOFF) -> int:
    """Smallest ``k`` with ``delta^k(f) = 0``."""
    k = 0
    while f:
        if k >= cutoff:
            raise NilpotencyError(f"no nilpotency within {cutoff} steps",
                                  {"element": f.format(), "cutoff": cutoff})
        f = apply_derivation(delta, f)
        k += 1
    return k


def _series(ctx: DeletionContext, b: LaurentPoly, sign: int) -> LaurentPoly:
    ratio = Fraction(sign) / ctx.s
    out = LaurentPoly.zero(ctx.n)
    for m, term in enumerate(_delta_orbit(ctx, b)):
        coeff = ratio ** m / factorial(m)
        out = out + (term * LaurentPoly.gen(ctx.n, ctx.top, -m)).scale(coeff)
    return out


def _mapped(ctx: DeletionContext, f: LaurentPoly, sign: int) -> LaurentPoly:
    # x is fixed, so split by powers of x and map the B-coefficients
    out = LaurentPoly.zero(ctx.n)
    for k, coeff in f.split_by(ctx.top).items():
        out = out + _series(ctx, coeff, sign) * LaurentPoly.gen(ctx.n, ctx.top, k)
    return out


def theta(ctx: DeletionContext, b: LaurentPoly) -> LaurentPoly:
    """Deleting-derivations map; the top generator is sent to itself."""
    return _mapped(ctx, b, -1)


def theta_inverse(ctx: DeletionContext, b: LaurentPoly) -> LaurentPoly:
    return _mapped(ctx, b, +1)


def verify_eq_3_2(ctx: DeletionContext, b: LaurentPoly) -> Report:
    """``{x, theta(b)} == theta(alpha(b)) * x``."""
    ctx.require_base(b)
    lhs = bracket_gen(ctx.table, ctx.top, theta(ctx, b))
    rhs = theta(ctx, ctx.apply_alpha(b)) * ctx.x
    ok = lhs == rhs
    return Report("x-theta-intertwining", ok, None if ok else {
        "element": b.format(ctx.names),
        "lhs": lhs.format(ctx.names), "rhs": rhs.format(ctx.names)})


def verify_lemma_3_6(ctx: DeletionContext, a: LaurentPoly, b: LaurentPoly, n: int) -> Report:
    """Binomial expansion of ``delta^n({a, b})``."""
    ctx.require_base(a)
    ctx.require_base(b)
    lhs = delta_power(ctx, bracket(ctx.table, a, b), n)
    da = [delta_power(ctx, a, k) for k in range(n + 1)]
    db = [delta_power(ctx, b, k) for k in range(n + 1)]
    dalpha_a = [delta_power(ctx, ctx.apply_alpha(a), k) for k in range(n + 1)]
    dalpha_b = [delta_power(ctx, ctx.apply_alpha(b), k) for k in range(n + 1)]
    rhs = LaurentPoly.zero(ctx.n)
    for l in range(n + 1):
        m = n - l
        term = bracket(ctx.table, da[l], db[m])
        term = term + (dalpha_a[l] * db[m]).scale(m) - (da[l] * dalpha_b[m]).scale(l)
        rhs = rhs + term.scale(comb(n, l))
    ok = lhs == rhs
    return Report("delta-power-of-bracket", ok, None if ok else {
        "a": a.format(ctx.names), "b": b.format(ctx.names), "n": n,
        "lhs": lhs.format(ctx.names), "rhs": rhs.format(ctx.names)})


def verify_theta_poisson(ctx: DeletionContext, a: LaurentPoly, b: LaurentPoly) -> Report:
    """``theta({a, b}) == {theta(a), theta(b)}``."""
    ctx.require_base(a)
    ctx.require_base(b)
    lhs = theta(ctx, bracket(ctx.table, a, b))
    rhs = bracket(ctx.table, theta(ctx, a), theta(ctx, b))
    ok = lhs == rhs
    return Report("theta-poisson", ok, None if ok else {
        "a": a.format(ctx.names), "b": b.format(ctx.names),
        "lhs": lhs.format(ctx.names), "rhs": rhs.format(ctx.names)})


# ---------------------------------------------------------------------------
# hypotheses


def infer_s(spec: IteratedPPASpec, i: int) -> Fraction | None:
    """Read ``s`` off ``alpha delta(x_j) - delta alpha(x_j) = s delta(x_j)``.

    Returns None when ``delta_i`` vanishes (the relation is then vacuous).
    The value is a candidate only; callers check it on every generator.
    """
    for j, dj in sorted(spec.delta[i].items()):
        diff = spec.apply_alpha(i, dj) - spec.apply_delta(i, spec.alpha_value(i, j))
        exp, c = next(iter(sorted(dj.items())))
        return diff.coefficient(exp) / c
    return None


def check_s_relation(spec: IteratedPPASpec, i: int, s: Fraction) -> Report:
    names = spec.names
    for j in range(i):
        dj = spec.delta_value(i, j)
        lhs = spec.apply_alpha(i, dj)
        rhs = spec.apply_delta(i, spec.alpha_value(i, j)) + dj.scale(s)
        if lhs != rhs:
            return Report("hypothesis-b", False, {
                "step": names[i], "generator": names[j], "s": rational_str(s),
                "alpha_delta": lhs.format(names), "delta_alpha_plus_s": rhs.format(names)})
    return Report("hypothesis-b", True, details={"step": names[i], "s": rational_str(s)})


def diagonal_alpha(spec: IteratedPPASpec) -> list[list[Fraction]]:
    """Scalars ``lambda_ij`` with ``alpha_i(x_j) = lambda_ij x_j``, as an antisymmetric matrix.

    Raises HypothesisError naming the first offending value.
    """
    n = spec.n
    lam = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i):
            v = spec.alpha_value(i, j)
            c = Fraction(0)
            if v:
                exp = [0] * n
                exp[j] = 1
                c = v.coefficient(exp)
                if len(v) != 1 or not c:
                    raise HypothesisError(
                        f"alpha_{spec.names[i]}({spec.names[j]}) = {v.format(spec.names)} "
                        f"is not a scalar multiple of {spec.names[j]}",
                        {"step": spec.names[i], "generator": spec.names[j],
                         "value": v.format(spec.names)})
            lam[i][j] = c
            lam[j][i] = -c
    return lam


def check_hypotheses(spec: IteratedPPASpec, s_values: Sequence | None = None,
                     cutoff: int = DEFAULT_CUTOFF) -> dict[str, Any]:
    """Verify the three hypotheses; returns nilpotency indices, s values and lambda.

    ``s_values`` overrides ``spec.s`` entry by entry where not None.
    """
    n = spec.n
    names = spec.names
    gens = LaurentPoly.gens(n)
    nil = []
    for i in range(n):
        row = {}
        for j in range(i):
            try:
                row[names[j]] = nilpotency_index(spec.delta[i], gens[j], cutoff)
            except NilpotencyError as exc:
                raise NilpotencyError(
                    f"delta_{names[i]} not nilpotent on {names[j]} within {cutoff} steps",
                    {"step": names[i], "generator": names[j], "cutoff": cutoff}) from exc
        nil.append(row)

    s_out: list[Fraction | None] = []
    b_reports = []
    for i in range(n):
        given = None
        if s_values is not None and s_values[i] is not None:
            given = as_rational(s_values[i])
        elif spec.s[i] is not None:
            given = spec.s[i]
        if not spec.delta[i]:
            s_out.append(given)
            continue
        s = given if given is not None else infer_s(spec, i)
        if not s:
            raise HypothesisError(f"step {names[i]}: s must be nonzero",
                                  {"step": names[i], "s": rational_str(s or Fraction(0))})
        rep = check_s_relation(spec, i, s)
        if not rep:
            raise HypothesisError(f"alpha delta = delta (alpha + s) fails at step {names[i]}",
                                  rep.witness)
        b_reports.append(rep)
        s_out.append(s)

    lam = diagonal_alpha(spec)
    return {"nilpotency": nil, "s": s_out, "lambda": lam, "b_reports": b_reports}


# ---------------------------------------------------------------------------
# the reduction


@dataclass
class GKResult:
    lambda_out: QuadraticSpec
    names: tuple[str, ...]
    variable_log: list[dict] = field(default_factory=list)
    hypothesis_report: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "names": list(self.names),
            "lambda": [[rational_str(v) for v in row] for row in self.lambda_out.lam],
            "log": self.variable_log,
            "report": self.hypothesis_report,
        }

    def brackets(self) -> dict[tuple[str, str], Fraction]:
        """Nonzero entries ``{y_i, y_j} = c y_i y_j`` for ``i > j``."""
        out = {}
        lam = self.lambda_out.lam
        for i in range(len(lam)):
            for j in range(i):
                if lam[i][j]:
                    out[(self.names[i], self.names[j])] = lam[i][j]
        return out


def _spec_from_table(table: BracketTable, lam: Sequence[Sequence[Fraction]],
                     s: Sequence) -> IteratedPPASpec:
    """Split ``{x_i, x_j} = lam_ij x_j x_i + delta_i(x_j)`` in the table's ordering."""
    n = table.n
    alpha, delta = [], []
    for i in range(n):
        xi = LaurentPoly.gen(n, i)
        a, d = {}, {}
        for j in range(i):
            aj = LaurentPoly.gen(n, j).scale(lam[i][j])
            a[j] = aj
            d[j] = table.value(i, j) - aj * xi
        alpha.append(a)
        delta.append(d)
    return IteratedPPASpec(n, alpha, delta, s, table.names)


def _permute_matrix(m, perm):
    n = len(m)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[perm[i]][perm[j]] = m[i][j]
    return out


def _reorder(order: list[int], t: int, n: int, strategy: str) -> list[int]:
    """New position list; ``t`` is the last position with nonzero delta."""
    if strategy == "single":
        # last generator moves to just after the first
        return [order[0], order[-1]] + order[1:-1]
    if strategy == "block":
        # every delta-free generator above t moves there at once, order kept
        return [order[0]] + order[t + 1:] + order[1:t + 1]
    raise ValueError(f"unknown reorder strategy {strategy!r}")


def gk_normalize(spec: IteratedPPASpec, s_values: Sequence | None = None,
                 cutoff: int = DEFAULT_CUTOFF, reorder: str = "single",
                 certify: bool = True) -> GKResult:
    """Reduce an iterated Poisson polynomial algebra to its quadratic skew field.

    The loop looks at the last position ``t`` whose delta is nonzero.  If it is
    the top position, the delta is deleted (justified by theta, certified on
    generators when ``certify``).  Otherwise the presentation is reordered so
    the delta-free top generator(s) sit right after the first generator, which
    pushes ``t`` up by at least one.  The output matrix is indexed by the
    original generators.
    """
    n = spec.n
    hyp = check_hypotheses(spec, s_values, cutoff)
    lam = hyp["lambda"]
    s_orig = hyp["s"]
    report: dict[str, Any] = {
        "nilpotency": hyp["nilpotency"],
        "s": [None if v is None else rational_str(v) for v in s_orig],
        "diagonal_alpha": True,
        "certificates": [],
    }

    order = list(range(n))               # position -> original generator
    cur_lam = [row[:] for row in lam]
    cur_s = list(s_orig)
    table = ppa_to_table(spec, laurent=True)
    cur = spec if spec.s == tuple(cur_s) else spec.replace(s=cur_s)
    log: list[dict] = []
    guard = 0

    while True:
        positions = [i for i in range(n) if cur.delta[i]]
        if not positions:
            break
        guard += 1
        if guard > 4 * n * n + 4:
            raise RuntimeError("reduction did not terminate; this is a bug")
        t = positions[-1]
        names = cur.names
        if t == n - 1:
            ctx = DeletionContext.from_spec(cur, s=cur_s[t], cutoff=cutoff, table=table)
            if certify:
                cert = _certify_deletion(ctx)
                report["certificates"].append(cert.to_dict())
                if not cert:
                    raise HypothesisError(f"deleting delta at {names[t]} failed its checks",
                                          cert.witness)
            new_delta = list(cur.delta)
            new_delta[t] = {}
            cur = cur.replace(delta=new_delta)
            table = ppa_to_table(cur, laurent=True)
            log.append({"case": "delete", "position": t + 1, "generator": names[t],
                        "s": rational_str(cur_s[t])})
        else:
            new_order = _reorder(order, t, n, reorder)
            # old position k -> new position
            pos_map = [new_order.index(order[k]) for k in range(n)]
            new_table = table.permute(pos_map)
            new_lam = _permute_matrix(cur_lam, pos_map)
            new_s = [None] * n
            for k in range(n):
                new_s[pos_map[k]] = cur_s[k]
            try:
                new_spec = _spec_from_table(new_table, new_lam, new_s)
            except ValueError as exc:
                raise HypothesisError(
                    f"reordering to {[spec.names[g] for g in new_order]} is not a "
                    f"valid iterated presentation: {exc}") from exc
            if certify:
                back = [0] * n
                for k in range(n):
                    back[pos_map[k]] = k
                ok = ppa_to_table(new_spec, laurent=True).permute(back) == table
                report["certificates"].append(Report(
                    "reorder-preserves-brackets", ok,
                    details={"order": [spec.names[g] for g in new_order]}).to_dict())
                if not ok:
                    raise HypothesisError("reordered presentation changes the brackets")
            order, cur, table, cur_lam, cur_s = new_order, new_spec, new_table, new_lam, new_s
            log.append({"case": "reorder", "order": [spec.names[g] for g in order],
                        "from_position": t + 1})

    # all deltas gone: the table is quadratic in the current ordering
    final = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i):
            v = table.value(i, j)
            exp = [0] * n
            exp[i] += 1
            exp[j] += 1
            c = v.coefficient(exp)
            if len(v) > 1 or (v and not c):
                raise RuntimeError(f"non-quadratic bracket left after reduction: {v}")
            final[order[i]][order[j]] = c
            final[order[j]][order[i]] = -c
    if final != lam:
        raise RuntimeError("reduced brackets disagree with the diagonal alpha data")
    report["final_order"] = [spec.names[g] for g in order]
    return GKResult(QuadraticSpec(final), spec.names, log, report)


def _certify_deletion(ctx: DeletionContext) -> Report:
    gens = LaurentPoly.gens(ctx.n)
    base = ctx.base_generators()
    reports = []
    for j in base:
        if ctx.delta.get(j) or ctx.alpha.get(j):
            reports.append(verify_eq_3_2(ctx, gens[j]))
    for ia, a in enumerate(base):
        for b in base[ia + 1:]:
            reports.append(verify_theta_poisson(ctx, gens[a], gens[b]))
    return combine(f"deletion[{ctx.names[ctx.top]}]", reports, step=ctx.names[ctx.top])
