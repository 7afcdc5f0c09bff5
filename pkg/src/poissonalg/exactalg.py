"""Exact rational scalars and sparse Laurent polynomials.

Everything downstream works over the rationals with :class:`fractions.Fraction`
coefficients.  A :class:`LaurentPoly` is an immutable map from integer exponent
tuples to nonzero coefficients, so equality is structural.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class ArityError(ValueError):
    """Raised when polynomials over different generator counts are combined."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected; the engine never touches binary floating point.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def rational_str(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class LaurentPoly:
    """Sparse Laurent polynomial in ``n`` commuting variables over Q."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Exponent, object] | None = None):
        self.n = n
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                exp = tuple(exp)
                if len(exp) != n:
                    raise ArityError(f"exponent {exp} does not have length {n}")
                c = as_rational(coeff)
                if c:
                    clean[exp] = clean.get(exp, 0) + c
            clean = {e: c for e, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict[Exponent, Fraction]) -> "LaurentPoly":
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj.n = n
        obj._terms = terms
        obj._hash = None
        return obj

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "LaurentPoly":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c=1) -> "LaurentPoly":
        c = as_rational(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def monomial(cls, exponents: Sequence[int], c=1) -> "LaurentPoly":
        exp = tuple(int(a) for a in exponents)
        c = as_rational(c)
        return cls._raw(len(exp), {exp: c} if c else {})

    @classmethod
    def gen(cls, n: int, i: int, power: int = 1) -> "LaurentPoly":
        """The generator ``x_i`` (0-based) raised to ``power``."""
        if not 0 <= i < n:
            raise IndexError(f"generator index {i} out of range for n={n}")
        exp = [0] * n
        exp[i] = power
        return cls._raw(n, {tuple(exp): Fraction(1)})

    @classmethod
    def gens(cls, n: int) -> list["LaurentPoly"]:
        return [cls.gen(n, i) for i in range(n)]

    # basic protocol -----------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(self.n, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.n != self.n:
                raise ArityError(f"generator counts differ: {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LaurentPoly.constant(self.n, other)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    # arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return LaurentPoly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def scale(self, c) -> "LaurentPoly":
        c = as_rational(c)
        if not c:
            return LaurentPoly.zero(self.n)
        return LaurentPoly._raw(self.n, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if len(self._terms) > len(other._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out: dict[Exponent, Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                v = out.get(e, 0) + ca * cb
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return LaurentPoly._raw(self.n, out)

    def __rmul__(self, other) -> "LaurentPoly":
        return self.__mul__(other)

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            ((e, c),) = self._terms.items()
            return LaurentPoly._raw(self.n, {tuple(a * k for a in e): 1 / c ** (-k)})
        result = LaurentPoly.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, exponents: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial ``x^exponents``."""
        return LaurentPoly._raw(
            self.n,
            {tuple(a + b for a, b in zip(e, exponents)): c for e, c in self._terms.items()},
        )

    # calculus -----------------------------------------------------------

    def partial(self, i: int) -> "LaurentPoly":
        """Ordinary partial derivative with respect to ``x_i``."""
        out = {}
        for e, c in self._terms.items():
            a = e[i]
            if a:
                e2 = list(e)
                e2[i] = a - 1
                out[tuple(e2)] = c * a
        return LaurentPoly._raw(self.n, out)

    def euler(self, i: int) -> "LaurentPoly":
        """``x_i * d/dx_i``: scales each term by its ``x_i`` exponent."""
        return LaurentPoly._raw(self.n, {e: c * e[i] for e, c in self._terms.items() if e[i]})

    # inspection ---------------------------------------------------------

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.n, Fraction(0))

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exponents), Fraction(0))

    def is_polynomial(self) -> bool:
        return all(a >= 0 for e in self._terms for a in e)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def support(self) -> set[int]:
        """Indices of generators appearing with a nonzero exponent."""
        out = set()
        for e in self._terms:
            out.update(i for i, a in enumerate(e) if a)
        return out

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=0)

    def homogeneous_weight(self, weights: Sequence[Sequence[int]]):
        """Common weight ``sum_j a_j w_j`` of all terms, or None if inhomogeneous.

        The zero polynomial is homogeneous of every weight; returns ``()`` for it.
        """
        seen = None
        for e in self._terms:
            w = weight_of(e, weights)
            if seen is None:
                seen = w
            elif w != seen:
                return None
        return () if seen is None else seen

    # transformations ----------------------------------------------------

    def substitute_monomials(self, rows: Sequence[Sequence[int]]) -> "LaurentPoly":
        """Substitute ``x_i -> x^{rows[i]}``; rows may have a different length."""
        if len(rows) != self.n:
            raise ArityError(f"need {self.n} substitution rows, got {len(rows)}")
        m = len(rows[0]) if rows else 0
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            new = [0] * m
            for b, row in zip(e, rows):
                if b:
                    for k, r in enumerate(row):
                        new[k] += b * r
            key = tuple(new)
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return LaurentPoly._raw(m, out)

    def permute(self, perm: Sequence[int]) -> "LaurentPoly":
        """Relabel variables: old variable ``k`` becomes new variable ``perm[k]``."""
        out = {}
        for e, c in self._terms.items():
            new = [0] * self.n
            for k, a in enumerate(e):
                new[perm[k]] = a
            out[tuple(new)] = c
        return LaurentPoly._raw(self.n, out)

    def extend(self, n: int) -> "LaurentPoly":
        """Embed into a ring with ``n >= self.n`` variables (new ones last)."""
        pad = (0,) * (n - self.n)
        return LaurentPoly._raw(n, {e + pad: c for e, c in self._terms.items()})

    def split_by(self, i: int) -> dict[int, "LaurentPoly"]:
        """Group terms by the exponent of ``x_i``; coefficients have that exponent zeroed."""
        groups: dict[int, dict[Exponent, Fraction]] = {}
        for e, c in self._terms.items():
            k = e[i]
            e2 = e[:i] + (0,) + e[i + 1:]
            groups.setdefault(k, {})[e2] = c
        return {k: LaurentPoly._raw(self.n, t) for k, t in groups.items()}

    # display ------------------------------------------------------------

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.n)]
        pieces = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            mono = []
            for name, a in zip(names, e):
                if a == 1:
                    mono.append(name)
                elif a:
                    mono.append(f"{name}^{a}")
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not mono:
                body = rational_str(mag)
            elif mag == 1:
                body = "*".join(mono)
            else:
                body = rational_str(mag) + "*" + "*".join(mono)
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.n}, {self.format()!r})"

    # serialization ------------------------------------------------------

    def to_records(self) -> list[dict]:
        return [
            {"exponents": list(e), "coefficient": rational_str(self._terms[e])}
            for e in sorted(self._terms)
        ]

    @classmethod
    def from_records(cls, n: int, records: Iterable[Mapping]) -> "LaurentPoly":
        terms: dict[Exponent, Fraction] = {}
        for rec in records:
            exp = tuple(int(a) for a in rec["exponents"])
            if len(exp) != n:
                raise ArityError(f"record exponent {list(exp)} has length != {n}")
            terms[exp] = terms.get(exp, 0) + as_rational(rec["coefficient"])
        return cls(n, terms)


def weight_of(exponent: Sequence[int], weights: Sequence[Sequence[int]]) -> tuple:
    r = len(weights[0]) if weights else 0
    w = [0] * r
    for a, wt in zip(exponent, weights):
        if a:
            for k in range(r):
                w[k] += a * wt[k]
    return tuple(w)


# module-level operation names ---------------------------------------------

def poly_arith(f: LaurentPoly, g: LaurentPoly | None, op: str, scalar=None) -> LaurentPoly:
    """Dispatch ``add``, ``sub``, ``mul``, ``negate`` or ``scalar-mul``."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "negate":
        return -f
    if op == "scalar-mul":
        return f.scale(scalar)
    raise ValueError(f"unknown operation {op!r}")


def scaled_partial(f: LaurentPoly, i: int) -> LaurentPoly:
    return f.euler(i)


def constant_term(f: LaurentPoly) -> Fraction:
    return f.constant_term()


def monomial_substitute(f: LaurentPoly, rows: Sequence[Sequence[int]]) -> LaurentPoly:
    return f.substitute_monomials(rows)


# scalar vectors -----------------------------------------------------------

UNIT = "1"

_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?
        (?P<sym>[A-Za-z_][A-Za-z_0-9]*)?\s*""",
    re.VERBOSE,
)


class ScalarVector:
    """Element of a Q-vector space with a basis of named symbols.

    The symbol ``"1"`` is the rational unit, so a plain rational ``q`` is
    ``{"1": q}``.  Only the additive structure and rational scaling exist.
    """

    __slots__ = ("_coords",)

    def __init__(self, coords: Mapping[str, object] | None = None):
        clean = {}
        for sym, c in (coords or {}).items():
            c = as_rational(c)
            if c:
                clean[str(sym)] = clean.get(str(sym), 0) + c
        self._coords = {k: v for k, v in clean.items() if v}

    @classmethod
    def rational(cls, q) -> "ScalarVector":
        return cls({UNIT: q})

    @classmethod
    def parse(cls, text) -> "ScalarVector":
        """Parse ``"2/3"``, ``"tau1 - 2*tau2 + 1/2"`` and similar."""
        if isinstance(text, (int, Fraction)):
            return cls.rational(text)
        s = str(text).strip()
        if not s:
            raise ValueError("empty scalar expression")
        coords: dict[str, Fraction] = {}
        pos = 0
        first = True
        while pos < len(s):
            m = _TERM_RE.match(s, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse scalar expression {text!r} at {s[pos:]!r}")
            if not first and not m.group("sign"):
                raise ValueError(f"missing operator in {text!r} at {s[pos:]!r}")
            coef, sym = m.group("coef"), m.group("sym")
            if coef is None and sym is None:
                raise ValueError(f"dangling sign in {text!r}")
            c = Fraction(coef) if coef else Fraction(1)
            if m.group("sign") == "-":
                c = -c
            key = sym or UNIT
            coords[key] = coords.get(key, 0) + c
            pos = m.end()
            first = False
        return cls(coords)

    @property
    def coords(self) -> dict[str, Fraction]:
        return dict(self._coords)

    def symbols(self) -> set[str]:
        return set(self._coords)

    def is_rational(self) -> bool:
        return set(self._coords) <= {UNIT}

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} involves formal symbols")
        return self._coords.get(UNIT, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._coords)

    def __eq__(self, other) -> bool:
        if isinstance(other, ScalarVector):
            return self._coords == other._coords
        if isinstance(other, (int, Fraction)):
            return self == ScalarVector.rational(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._coords.items()))

    def __add__(self, other: "ScalarVector") -> "ScalarVector":
        out = dict(self._coords)
        for k, v in other._coords.items():
            out[k] = out.get(k, 0) + v
        return ScalarVector(out)

    def __neg__(self) -> "ScalarVector":
        return ScalarVector({k: -v for k, v in self._coords.items()})

    def __sub__(self, other: "ScalarVector") -> "ScalarVector":
        return self + (-other)

    def __mul__(self, c) -> "ScalarVector":
        c = as_rational(c)
        return ScalarVector({k: v * c for k, v in self._coords.items()})

    __rmul__ = __mul__

    def specialize(self, values: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for k, v in self._coords.items():
            total += v * (Fraction(1) if k == UNIT else values[k])
        return total

    def __str__(self) -> str:
        if not self._coords:
            return "0"
        parts = []
        keys = sorted(self._coords, key=lambda k: (k != UNIT, k))
        for k in keys:
            v = self._coords[k]
            mag = rational_str(abs(v))
            body = mag if k == UNIT else (k if abs(v) == 1 else f"{mag}*{k}")
            parts.append(("-" if v < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __repr__ = __str__
