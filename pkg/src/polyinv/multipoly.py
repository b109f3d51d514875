"""Exact sparse multivariate polynomials over the rationals.

A polynomial in ``n`` variables is a mapping from exponent tuples (multi-indices)
to nonzero :class:`fractions.Fraction` coefficients.  Variables are indexed from
0 in the Python API and rendered as ``X1 .. Xn``.

    >>> x1, x2 = variables(2)
    >>> str((x1 + x2) * (x1 - x2))
    '1/1 * X1^2 + -1/1 * X2^2'

Instances are immutable after construction.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Tuple, Union

Rat = Fraction
MultiIndex = Tuple[int, ...]
Scalar = Union[int, Fraction]


class DimensionError(ValueError):
    """Operands live in polynomial rings of different dimension."""


class DivisionError(ArithmeticError):
    """Polynomial division was not exact."""


# --- multi-index helpers -------------------------------------------------


def mi_abs(alpha: MultiIndex) -> int:
    return sum(alpha)


def mi_factorial(alpha: MultiIndex) -> int:
    """alpha! = alpha_1! * ... * alpha_n!"""
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return out


def unit(n: int, j: int) -> MultiIndex:
    """The multi-index e_j with a single 1 in slot ``j``."""
    if not 0 <= j < n:
        raise IndexError(f"unit index {j} out of range for n={n}")
    return tuple(1 if k == j else 0 for k in range(n))


def mi_add(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def multi_indices(n: int, total: int) -> list[MultiIndex]:
    """All multi-indices of length n with |alpha| == total, in lex-descending order."""
    if n == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(total, -1, -1):
        for rest in multi_indices(n - 1, total - first):
            out.append((first,) + rest)
    return out


def multi_indices_upto(n: int, lo: int, hi: int) -> list[MultiIndex]:
    """All multi-indices with lo <= |alpha| <= hi, ordered by total degree."""
    out = []
    for t in range(lo, hi + 1):
        out.extend(multi_indices(n, t))
    return out


def grlex_key(alpha: MultiIndex) -> tuple:
    return (sum(alpha), alpha)


# --- polynomials ---------------------------------------------------------


class Poly:
    """Sparse polynomial in ``n`` variables with rational coefficients."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Sequence[int], Scalar] | None = None):
        if n < 0:
            raise ValueError("dimension must be non-negative")
        clean: dict[MultiIndex, Fraction] = {}
        for key, coeff in (terms or {}).items():
            alpha = tuple(int(a) for a in key)
            if len(alpha) != n:
                raise DimensionError(f"exponent {alpha} has length {len(alpha)}, expected {n}")
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent in {alpha}")
            c = clean.get(alpha, Fraction(0)) + Fraction(coeff)
            if c:
                clean[alpha] = c
            else:
                clean.pop(alpha, None)
        self.n = n
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "Poly":
        # caller guarantees: keys of length n, no zero coefficients
        p = cls.__new__(cls)
        p.n = n
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c: Scalar) -> "Poly":
        c = Fraction(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def var(cls, n: int, j: int) -> "Poly":
        return cls._raw(n, {unit(n, j): Fraction(1)})

    @classmethod
    def monomial(cls, alpha: Sequence[int], c: Scalar = 1) -> "Poly":
        return cls(len(alpha), {tuple(alpha): c})

    # -- access --

    @property
    def terms(self) -> Mapping[MultiIndex, Fraction]:
        return MappingProxyType(self._terms)

    def coeff(self, alpha: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(alpha), Fraction(0))

    def sorted_terms(self) -> list[tuple[MultiIndex, Fraction]]:
        """Terms in graded-lex order, highest first."""
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree 0 by convention."""
        return max((sum(a) for a in self._terms), default=0)

    def min_degree(self) -> int:
        """Smallest total degree of a stored term (0 for the zero polynomial)."""
        return min((sum(a) for a in self._terms), default=0)

    def homogeneous_part(self, t: int) -> "Poly":
        return Poly._raw(self.n, {a: c for a, c in self._terms.items() if sum(a) == t})

    def truncate(self, max_degree: int) -> "Poly":
        """Drop every term of total degree > max_degree."""
        return Poly._raw(self.n, {a: c for a, c in self._terms.items() if sum(a) <= max_degree})

    # -- comparison --

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.n, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    # -- arithmetic --

    def _check(self, other: "Poly") -> None:
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.n, other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        out = dict(self._terms)
        for a, c in other._terms.items():
            s = out.get(a)
            if s is None:
                out[a] = c
            else:
                s += c
                if s:
                    out[a] = s
                else:
                    del out[a]
        return Poly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.n, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly.zero(self.n)
        return Poly._raw(self.n, {a: v * c for a, v in self._terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        return self.mul_truncated(other, None)

    __rmul__ = __mul__

    def mul_truncated(self, other: "Poly", max_degree: int | None) -> "Poly":
        """Product with every term of total degree > max_degree discarded."""
        self._check(other)
        out: dict[MultiIndex, Fraction] = {}
        if not self._terms or not other._terms:
            return Poly._raw(self.n, out)
        right = list(other._terms.items())
        if max_degree is not None:
            right = [(b, d, sum(b)) for b, d in right]
        for a, c in self._terms.items():
            if max_degree is None:
                for b, d in right:
                    k = tuple(x + y for x, y in zip(a, b))
                    out[k] = out.get(k, 0) + c * d
            else:
                room = max_degree - sum(a)
                if room < 0:
                    continue
                for b, d, tb in right:
                    if tb > room:
                        continue
                    k = tuple(x + y for x, y in zip(a, b))
                    out[k] = out.get(k, 0) + c * d
        return Poly._raw(self.n, {k: v for k, v in out.items() if v})

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power")
        result = Poly.constant(self.n, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def partial(self, j: int) -> "Poly":
        """Formal partial derivative with respect to variable ``j`` (0-based)."""
        if not 0 <= j < self.n:
            raise IndexError(f"variable index {j} out of range for n={self.n}")
        out = {}
        for a, c in self._terms.items():
            if a[j]:
                b = a[:j] + (a[j] - 1,) + a[j + 1:]
                out[b] = c * a[j]
        return Poly._raw(self.n, out)

    def compose(self, args: Sequence["Poly"], truncation: int | None = None) -> "Poly":
        return compose(self, args, truncation)

    def embed(self, m: int, offset: int) -> "Poly":
        """Rename X_j to X_{offset+j} inside a ring of ``m`` variables."""
        if offset < 0 or offset + self.n > m:
            raise DimensionError(f"cannot place {self.n} variables at offset {offset} in {m}")
        pad_left = (0,) * offset
        pad_right = (0,) * (m - offset - self.n)
        return Poly._raw(m, {pad_left + a + pad_right: c for a, c in self._terms.items()})

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.n:
            raise DimensionError("point has wrong length")
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for a, c in self._terms.items():
            v = c
            for x, e in zip(pt, a):
                if e:
                    v *= x**e
            total += v
        return total

    def leading_term(self) -> tuple[MultiIndex, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        a = max(self._terms, key=grlex_key)
        return a, self._terms[a]

    def exact_div(self, other: "Poly") -> "Poly":
        """Quotient q with self == q * other; raises DivisionError otherwise."""
        self._check(other)
        if not other._terms:
            raise ZeroDivisionError("division by the zero polynomial")
        lead_b, lead_c = other.leading_term()
        rem = self
        quot: dict[MultiIndex, Fraction] = {}
        while rem._terms:
            a, c = rem.leading_term()
            q = tuple(x - y for x, y in zip(a, lead_b))
            if any(e < 0 for e in q):
                raise DivisionError("division is not exact")
            qc = c / lead_c
            quot[q] = quot.get(q, 0) + qc
            rem = rem - Poly._raw(self.n, {q: qc}) * other
        return Poly._raw(self.n, {k: v for k, v in quot.items() if v})

    # -- rendering --

    def render(self) -> str:
        """Canonical text: graded-lex terms ``num/den * X1^a1*...`` joined by `` + ``."""
        if not self._terms:
            return "0"
        parts = []
        for a, c in self.sorted_terms():
            coeff = f"{c.numerator}/{c.denominator}"
            mono = "*".join(f"X{j + 1}^{e}" for j, e in enumerate(a) if e)
            parts.append(f"{coeff} * {mono}" if mono else coeff)
        return " + ".join(parts)

    __str__ = render

    def __repr__(self) -> str:
        return f"Poly({self.n}, {self.render()!r})"


def variables(n: int) -> list[Poly]:
    return [Poly.var(n, j) for j in range(n)]


def add(a: Poly, b: Poly) -> Poly:
    a._check(b)
    return a + b


def mul(a: Poly, b: Poly) -> Poly:
    a._check(b)
    return a * b


def partial(p: Poly, j: int) -> Poly:
    return p.partial(j)


def degree(p: Poly) -> int:
    return p.degree()


def compose(p: Poly, args: Sequence[Poly], truncation: int | None = None) -> Poly:
    """Substitute ``args[j]`` for X_j in ``p``.

    With ``truncation=D`` every partial product is cut to total degree <= D, which
    gives the composition of truncated power series.
    """
    if len(args) != p.n:
        raise DimensionError(f"expected {p.n} substitution arguments, got {len(args)}")
    if p.n == 0:
        m = 0
    else:
        m = args[0].n
        for g in args:
            if g.n != m:
                raise DimensionError("substitution arguments have mixed dimensions")
    if p.n == 0:
        c = p.coeff(())
        return Poly.constant(0, c)

    # powers[j][e] = args[j] ** e, built lazily
    powers: list[list[Poly]] = [[Poly.constant(m, 1)] for _ in range(p.n)]

    def power(j: int, e: int) -> Poly:
        cache = powers[j]
        while len(cache) <= e:
            cache.append(cache[-1].mul_truncated(args[j], truncation))
        return cache[e]

    out: dict[MultiIndex, Fraction] = {}
    for a, c in p._terms.items():
        term = Poly.constant(m, c)
        for j, e in enumerate(a):
            if e:
                term = term.mul_truncated(power(j, e), truncation)
                if not term._terms:
                    break
        for k, v in term._terms.items():
            out[k] = out.get(k, 0) + v
    return Poly._raw(m, {k: v for k, v in out.items() if v})


def from_terms(n: int, items: Iterable[tuple[Sequence[int], Scalar]]) -> Poly:
    """Build a polynomial from (exponents, coefficient) pairs, summing repeats."""
    acc: dict[MultiIndex, Fraction] = {}
    for alpha, c in items:
        key = tuple(alpha)
        acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
    return Poly(n, acc)


_TERM_RE = re.compile(r"^(?P<coef>\d+(?:/\d+)?)?\*?(?P<mono>(?:X\d+(?:\^\d+)?\*?)*)$")


def parse_poly(text: str, n: int) -> Poly:
    """Parse a sum of monomials such as ``"3*X4^2*X2 - 2*X3*X4*X5 + 1/2"``.

    Variables are written ``X1 .. Xn``.  Only expanded sums are accepted; this is
    a convenience for tests and hand-written corpus entries, not a general parser.
    """
    s = text.replace(" ", "")
    if s in ("", "0"):
        return Poly.zero(n)
    if s[0] not in "+-":
        s = "+" + s
    acc: dict[MultiIndex, Fraction] = {}
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        m = _TERM_RE.match(body)
        if not m or not body:
            raise ValueError(f"cannot parse term {body!r}")
        coef = Fraction(m.group("coef") or 1)
        alpha = [0] * n
        for var, exp in re.findall(r"X(\d+)(?:\^(\d+))?", m.group("mono")):
            j = int(var) - 1
            if not 0 <= j < n:
                raise ValueError(f"variable X{var} out of range for n={n}")
            alpha[j] += int(exp or 1)
        key = tuple(alpha)
        acc[key] = acc.get(key, Fraction(0)) + (coef if sign == "+" else -coef)
    return Poly(n, acc)
