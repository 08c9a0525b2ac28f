"""
Exact sparse polynomials and rational functions over Q in the coordinate
functions x_eta, eta a positive root, together with the Poisson bracket of
K[n*], the Cartan grading, symbolic minors and point evaluation.

Monomials are tuples of ``(root, exponent)`` sorted greatest root first; the
monomial order is lexicographic with respect to the root order, so
``x41`` beats any monomial built from ``x31, x21, x[*,2], ...``.

Rational functions keep their denominator factored into primitive
polynomials.  Denominators arising here are products of a few known
invariants, so exact trial division by those factors is all the
cancellation needed; no polynomial gcd is computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Union

from .roots import Root, order_key

__all__ = [
    "Poly", "RatFn", "Point", "EvaluationError", "NilpotencyError",
    "var", "const", "poisson", "generator_bracket", "cartan_weight_action",
    "weight_of", "minor_poly", "evaluate", "theta_generic", "as_ratfn",
]

Mono = tuple  # tuple[tuple[Root, int], ...]

_SENTINEL = (10**9, 0, 0)


def _vkey(ve):
    return order_key(ve[0])


@lru_cache(maxsize=1 << 16)
def _mono_key(m: Mono) -> tuple:
    # ascending key == descending monomial order; sentinel makes prefixes lose
    return tuple((v[1], -v[0], -e) for v, e in m) + (_SENTINEL,)


@lru_cache(maxsize=1 << 18)
def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items(), key=_vkey))


def _mono_div(a: Mono, b: Mono) -> Optional[Mono]:
    d = dict(a)
    for v, e in b:
        left = d.get(v, 0) - e
        if left < 0:
            return None
        if left:
            d[v] = left
        else:
            d.pop(v, None)
    return tuple(sorted(d.items(), key=_vkey))


def _mono_str(m: Mono) -> str:
    parts = []
    # smallest root first, as in x84*x41
    for (i, j), e in reversed(m):
        parts.append(f"x[{i},{j}]" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts)


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


Scalar = Union[int, Fraction]


class Poly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping] = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                exps: dict = {}
                for v, e in m:
                    if e:
                        v = Root(*v)
                        exps[v] = exps.get(v, 0) + int(e)
                m = tuple(sorted(exps.items(), key=_vkey))
                clean[m] = clean.get(m, 0) + c
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # construction -------------------------------------------------------

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        c = Fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, r) -> "Poly":
        return cls._raw({((Root(*r), 1),): Fraction(1)})

    # inspection ---------------------------------------------------------

    @property
    def terms(self) -> Mapping:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def variables(self) -> set[Root]:
        return {v for m in self._terms for v, _ in m}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=-1)

    def degree_in(self, v: Root) -> int:
        return max((dict(m).get(v, 0) for m in self._terms), default=0)

    def sorted_terms(self) -> list[tuple[Mono, Fraction]]:
        return sorted(self._terms.items(), key=lambda mc: _mono_key(mc[0]))

    def leading_term(self) -> tuple[Mono, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m = min(self._terms, key=_mono_key)
        return m, self._terms[m]

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if isinstance(other, RatFn):
            return other == self
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, RatFn):
            return as_ratfn(self) + other
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, RatFn):
            return as_ratfn(self) - other
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RatFn):
            return as_ratfn(self) * other
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly()
            return Poly._raw({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial; use RatFn")
        result, base = Poly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return as_ratfn(self) / other

    def __rtruediv__(self, other):
        return as_ratfn(_coerce(other)) / self

    def exact_div(self, other: "Poly") -> Optional["Poly"]:
        """self / other if the division is exact, else None."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return Poly()
        lm, lc = other.leading_term()
        rem = dict(self._terms)
        quot: dict = {}
        other_terms = list(other._terms.items())
        while rem:
            m = min(rem, key=_mono_key)
            qm = _mono_div(m, lm)
            if qm is None:
                return None
            qc = rem[m] / lc
            quot[qm] = qc
            for m2, c2 in other_terms:
                mm = _mono_mul(qm, m2)
                s = rem.get(mm, 0) - qc * c2
                if s:
                    rem[mm] = s
                else:
                    rem.pop(mm, None)
        return Poly._raw(quot)

    # normal forms -------------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c with self / c integral and primitive."""
        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> tuple[Fraction, "Poly"]:
        """(c, p) with self == c * p, p integral, primitive, leading coefficient > 0."""
        if not self._terms:
            return Fraction(0), self
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        return c, self * (1 / c)

    def monomial_content(self) -> Mono:
        common = None
        for m in self._terms:
            d = dict(m)
            if common is None:
                common = d
            else:
                common = {v: min(e, d[v]) for v, e in common.items() if v in d}
            if not common:
                return ()
        return tuple(sorted(common.items(), key=_vkey)) if common else ()

    # calculus and substitution -----------------------------------------

    def derivative(self, v: Root) -> "Poly":
        out = {}
        for m, c in self._terms.items():
            d = dict(m)
            e = d.get(v, 0)
            if e:
                if e == 1:
                    del d[v]
                else:
                    d[v] = e - 1
                nm = tuple(sorted(d.items(), key=_vkey))
                out[nm] = out.get(nm, 0) + c * e
        return Poly._raw({m: c for m, c in out.items() if c})

    def evaluate(self, values: Mapping) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            t = c
            for v, e in m:
                x = values.get(v, 0)
                if not x:
                    t = 0
                    break
                t *= Fraction(x) ** e
            total += t
        return total

    def substitute(self, mapping: Mapping):
        """Replace variables by Polys or RatFns; unmapped variables stay."""
        ratfn = any(isinstance(val, RatFn) for val in mapping.values())
        total = as_ratfn(Poly()) if ratfn else Poly()
        cache: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in cache:
                base = mapping.get(v)
                if base is None:
                    base = Poly.var(v)
                cache[key] = base ** e
            return cache[key]

        for m, c in self.sorted_terms():
            t = Poly.const(c) if not ratfn else as_ratfn(Poly.const(c))
            for v, e in m:
                t = t * power(v, e)
            total = total + t
        return total

    # rendering ----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for k, (m, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = _mono_str(m)
            if not body:
                text = _frac_str(a)
            elif a == 1:
                text = body
            else:
                text = f"{_frac_str(a)}*{body}"
            if k == 0:
                out.append(("-" if sign == "-" else "") + text)
            else:
                out.append(f" {sign} {text}")
        return "".join(out)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def to_json(self) -> list[dict]:
        return [
            {"coeff": _frac_str(c), "vars": [[v[0], v[1], e] for v, e in m]}
            for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data) -> "Poly":
        terms = {}
        for t in data:
            m = tuple((Root(int(i), int(j)), int(e)) for i, j, e in t["vars"])
            terms[m] = Fraction(t["coeff"])
        return cls(terms)


def _coerce(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    return NotImplemented


def var(r) -> Poly:
    return Poly.var(r)


def const(c: Scalar) -> Poly:
    return Poly.const(c)


# ---------------------------------------------------------------------------
# rational functions


def _atomize(p: Poly) -> tuple[Fraction, dict]:
    """Split p into scalar * prod(factors); variables of the monomial content become their own factors."""
    if p.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    factors: dict = {}
    mc = p.monomial_content()
    if mc:
        for v, e in mc:
            factors[Poly.var(v)] = e
        p = p.exact_div(Poly._raw({mc: Fraction(1)}))
    c, prim = p.primitive()
    if not prim.is_constant():
        factors[prim] = factors.get(prim, 0) + 1
    return c, factors


class RatFn:
    """
    num / den with den kept as a product of primitive polynomial factors.

    Equality is by cross-multiplication.
    """

    __slots__ = ("num", "_factors")

    def __init__(self, num: Union[Poly, Scalar], den: Union[Poly, Scalar, None] = None):
        num = _coerce(num)
        factors: dict = {}
        if den is not None:
            c, factors = _atomize(_coerce(den))
            num = num * (1 / c)
        self.num = num
        self._factors = factors
        self._cancel()

    @classmethod
    def _raw(cls, num: Poly, factors: dict, cancel: bool = True) -> "RatFn":
        r = cls.__new__(cls)
        r.num = num
        r._factors = {f: e for f, e in factors.items() if e}
        if cancel:
            r._cancel()
        return r

    def _cancel(self) -> None:
        if self.num.is_zero():
            self._factors = {}
            return
        for f in list(self._factors):
            e = self._factors[f]
            while e:
                q = self.num.exact_div(f)
                if q is None:
                    break
                self.num = q
                e -= 1
            if e:
                self._factors[f] = e
            else:
                del self._factors[f]

    @property
    def den_factors(self) -> dict:
        return dict(self._factors)

    @property
    def den(self) -> Poly:
        d = Poly.const(1)
        for f, e in self._factors.items():
            d = d * f ** e
        return d

    def is_poly(self) -> bool:
        return not self._factors

    def to_poly(self) -> Poly:
        if self._factors:
            raise ValueError(f"not a polynomial: {self}")
        return self.num

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def variables(self) -> set[Root]:
        vs = set(self.num.variables())
        for f in self._factors:
            vs |= f.variables()
        return vs

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = as_ratfn(other)
        if other is NotImplemented:
            return other
        if self._factors == other._factors:
            return RatFn._raw(self.num + other.num, dict(self._factors))
        lcm = dict(self._factors)
        for f, e in other._factors.items():
            lcm[f] = max(lcm.get(f, 0), e)
        a = self.num
        for f, e in lcm.items():
            k = e - self._factors.get(f, 0)
            if k:
                a = a * f ** k
        b = other.num
        for f, e in lcm.items():
            k = e - other._factors.get(f, 0)
            if k:
                b = b * f ** k
        return RatFn._raw(a + b, lcm)

    __radd__ = __add__

    def __neg__(self) -> "RatFn":
        return RatFn._raw(-self.num, dict(self._factors), cancel=False)

    def __sub__(self, other):
        other = as_ratfn(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFn._raw(self.num * other, dict(self._factors), cancel=False)
        other = as_ratfn(other)
        if other is NotImplemented:
            return other
        factors = dict(self._factors)
        for f, e in other._factors.items():
            factors[f] = factors.get(f, 0) + e
        return RatFn._raw(self.num * other.num, factors)

    __rmul__ = __mul__

    def inverse(self) -> "RatFn":
        c, new = _atomize(self.num)
        num = Poly.const(1 / c)
        for f, e in self._factors.items():
            num = num * f ** e
        return RatFn._raw(num, new)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        other = as_ratfn(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_ratfn(other) / self

    def __pow__(self, k: int) -> "RatFn":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFn._raw(self.num ** k, {f: e * k for f, e in self._factors.items()}, cancel=False)

    def __eq__(self, other) -> bool:
        other = as_ratfn(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    # calculus -----------------------------------------------------------

    def derivative(self, v: Root) -> "RatFn":
        out = RatFn._raw(self.num.derivative(v), dict(self._factors))
        for f, e in self._factors.items():
            df = f.derivative(v)
            if df.is_zero():
                continue
            factors = dict(self._factors)
            factors[f] += 1
            out = out - RatFn._raw(self.num * df * e, factors)
        return out

    def evaluate(self, values: Mapping) -> Fraction:
        den = Fraction(1)
        for f, e in self._factors.items():
            d = f.evaluate(values)
            if not d:
                raise EvaluationError(f"denominator factor {f} vanishes")
            den *= d ** e
        return self.num.evaluate(values) / den

    def substitute(self, mapping: Mapping) -> "RatFn":
        out = as_ratfn(self.num.substitute(mapping))
        for f, e in self._factors.items():
            out = out / as_ratfn(f.substitute(mapping)) ** e
        return out

    def __str__(self) -> str:
        if not self._factors:
            return str(self.num)
        den = " * ".join(
            f"({f})" + (f"^{e}" if e > 1 else "") for f, e in self._factors.items()
        )
        return f"({self.num}) / {den}"

    def __repr__(self) -> str:
        return f"RatFn({self})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}


def as_ratfn(x):
    if isinstance(x, RatFn):
        return x
    x = _coerce(x)
    if x is NotImplemented:
        return x
    return RatFn._raw(x, {}, cancel=False)


# ---------------------------------------------------------------------------
# points


class EvaluationError(ZeroDivisionError):
    """A denominator vanishes at the evaluation point."""


@dataclass(frozen=True)
class Point:
    """A strictly lower triangular rational matrix, i.e. a point of n* = n_-."""

    n: int
    entries: Mapping[Root, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for r, v in dict(self.entries).items():
            r = Root(*r)
            if not 1 <= r.col < r.row <= self.n:
                raise ValueError(f"{r} is not below the diagonal of a {self.n}x{self.n} matrix")
            v = Fraction(v)
            if v:
                clean[r] = v
        object.__setattr__(self, "entries", clean)

    def __getitem__(self, r) -> Fraction:
        return self.entries.get(Root(*r), Fraction(0))

    def get(self, r, default=0):
        return self.entries.get(r, default)

    def to_matrix(self) -> list[list[Fraction]]:
        return [
            [self[(i, j)] if i > j else Fraction(0) for j in range(1, self.n + 1)]
            for i in range(1, self.n + 1)
        ]

    @classmethod
    def from_matrix(cls, A) -> "Point":
        n = len(A)
        return cls(n, {Root(i + 1, j + 1): A[i][j] for i in range(n) for j in range(i)})

    def __hash__(self):
        return hash((self.n, frozenset(self.entries.items())))


def evaluate(f, X: Point) -> Fraction:
    if isinstance(f, (int, Fraction)):
        return Fraction(f)
    return f.evaluate(X.entries)


# ---------------------------------------------------------------------------
# Poisson structure


@lru_cache(maxsize=None)
def generator_bracket(a: Root, b: Root) -> Poly:
    """{x_ij, x_km} = delta_jk x_im - delta_mi x_kj, keeping positive roots only."""
    (i, j), (k, m) = a, b
    out = Poly()
    if j == k and i > m:
        out = out + Poly.var((i, m))
    if m == i and k > j:
        out = out - Poly.var((k, j))
    return out


def poisson(f, g):
    """The Poisson bracket {f, g} on K[n*] (Polys or RatFns)."""
    if isinstance(f, (int, Fraction)) or isinstance(g, (int, Fraction)):
        return Poly()
    rational = isinstance(f, RatFn) or isinstance(g, RatFn)
    if rational:
        f, g = as_ratfn(f), as_ratfn(g)
    fv, gv = sorted(f.variables(), key=order_key), sorted(g.variables(), key=order_key)
    pairs = [(a, b, generator_bracket(a, b)) for a in fv for b in gv]
    pairs = [(a, b, br) for a, b, br in pairs if br]
    total = as_ratfn(Poly()) if rational else Poly()
    if not pairs:
        return total
    df = {a: f.derivative(a) for a in {a for a, _, _ in pairs}}
    dg = {b: g.derivative(b) for b in {b for _, b, _ in pairs}}
    for a, b, br in pairs:
        total = total + df[a] * dg[b] * br
    return total


def cartan_weight_action(a: int, f):
    """ad_{h_a}: x_(i,j) -> (delta_aj - delta_ai) x_(i,j), extended as a derivation."""
    if isinstance(f, RatFn):
        out = RatFn._raw(cartan_weight_action(a, f.num), dict(f._factors))
        for p, e in f._factors.items():
            factors = dict(f._factors)
            factors[p] += 1
            out = out - RatFn._raw(f.num * cartan_weight_action(a, p) * e, factors)
        return out
    out = {}
    for m, c in f.items():
        w = sum(e * ((v[1] == a) - (v[0] == a)) for v, e in m)
        if w:
            out[m] = c * w
    return Poly._raw(out)


def _mono_weight(m: Mono) -> tuple:
    w: dict = {}
    for (i, j), e in m:
        w[i] = w.get(i, 0) + e
        w[j] = w.get(j, 0) - e
    return tuple(sorted((k, v) for k, v in w.items() if v))


def weight_of(f) -> Optional[dict]:
    """The weight {index: coefficient of e_index} if f is weight-homogeneous, else None.

    x_(i,j) has weight e_i - e_j.
    """
    if isinstance(f, RatFn):
        total = weight_of(f.num)
        if total is None:
            return None
        for p, e in f._factors.items():
            w = weight_of(p)
            if w is None:
                return None
            for k, v in w.items():
                total[k] = total.get(k, 0) - e * v
        return {k: v for k, v in total.items() if v}
    weights = {_mono_weight(m) for m in f._terms}
    if len(weights) > 1:
        return None
    return dict(weights.pop()) if weights else {}


# ---------------------------------------------------------------------------
# minors


def minor_poly(spec, shifted: bool, n: int) -> Poly:
    """Determinant of the (rows, cols) submatrix of the generic lower triangular matrix (+1 if shifted)."""
    rows, cols = tuple(spec.rows), tuple(spec.cols)
    if len(rows) != len(cols):
        raise ValueError("a minor needs as many rows as columns")
    for k in rows + cols:
        if not 1 <= k <= n:
            raise ValueError(f"index {k} outside 1..{n}")

    def entry(r, c):
        if r > c:
            return Poly.var((r, c))
        if r == c and shifted:
            return Poly.const(1)
        return None

    @lru_cache(maxsize=None)
    def det(k: int, avail: tuple) -> Poly:
        # Laplace expansion along row k over the still available columns
        if k == len(rows):
            return Poly.const(1)
        total = Poly()
        for pos, c in enumerate(avail):
            e = entry(rows[k], c)
            if e is None:
                continue
            rest = det(k + 1, avail[:pos] + avail[pos + 1:])
            if rest.is_zero():
                continue
            term = e * rest
            total = total + (term if pos % 2 == 0 else -term)
        return total

    return det(0, cols)


# ---------------------------------------------------------------------------
# the series Theta_p(a) = sum_s (-1)^s D_p^s(a) q^s / s!


class NilpotencyError(RuntimeError):
    """The derivation {p, .} did not terminate within the allowed number of steps."""


def theta_generic(p, q, a, max_steps: int = 64):
    term = a
    total = as_ratfn(a)
    qs = as_ratfn(Poly.const(1))
    for s in range(1, max_steps + 1):
        term = poisson(p, term)
        if term.is_zero():
            return total
        qs = qs * q
        total = total + as_ratfn(term) * qs * Fraction((-1) ** s, math.factorial(s))
    raise NilpotencyError(f"D_p not nilpotent on {a} within {max_steps} steps")
