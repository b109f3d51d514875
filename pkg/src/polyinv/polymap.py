"""Polynomial maps k^n -> k^n, Jacobians and the F = X - H normalization.

``H`` is always stored with plain monomial coefficients.  The factorial-normalized
numbers H_{i,alpha} = alpha! * [X^alpha] H_i that appear in tree energies are read
through :func:`coefficient` only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .multipoly import (
    DimensionError,
    MultiIndex,
    Poly,
    compose,
    mi_factorial,
    variables,
)


class NotAnHPartError(ValueError):
    """A component carries a term of total degree <= 1."""


class SingularMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class PolyMap:
    n: int
    components: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != self.n:
            raise DimensionError(f"expected {self.n} components, got {len(self.components)}")
        for c in self.components:
            if c.n != self.n:
                raise DimensionError(f"component lives in {c.n} variables, expected {self.n}")

    @classmethod
    def identity(cls, n: int) -> "PolyMap":
        return cls(n, tuple(variables(n)))

    def __getitem__(self, i: int) -> Poly:
        return self.components[i]

    def __iter__(self) -> Iterator[Poly]:
        return iter(self.components)

    def __add__(self, other: "PolyMap") -> "PolyMap":
        _same_dim(self, other)
        return PolyMap(self.n, tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "PolyMap") -> "PolyMap":
        _same_dim(self, other)
        return PolyMap(self.n, tuple(a - b for a, b in zip(self, other)))

    def __neg__(self) -> "PolyMap":
        return PolyMap(self.n, tuple(-a for a in self))

    def degree(self) -> int:
        return max((c.degree() for c in self.components), default=0)

    def is_identity(self) -> bool:
        return self.components == tuple(variables(self.n))

    def truncate(self, max_degree: int) -> "PolyMap":
        return PolyMap(self.n, tuple(c.truncate(max_degree) for c in self))

    def render(self, name: str = "F") -> str:
        return "\n".join(f"{name}{i + 1} = {c.render()}" for i, c in enumerate(self))


class HPart(PolyMap):
    """The nonlinear part H of F = X - H; every term has total degree >= 2."""

    def __post_init__(self):
        super().__post_init__()
        for i, c in enumerate(self.components):
            for alpha in c.terms:
                if sum(alpha) < 2:
                    raise NotAnHPartError(
                        f"component {i + 1} has a term of degree {sum(alpha)}: {alpha}"
                    )

    @classmethod
    def zero(cls, n: int) -> "HPart":
        return cls(n, tuple(Poly.zero(n) for _ in range(n)))

    def as_map(self) -> PolyMap:
        """F = X - H."""
        return PolyMap(self.n, tuple(x - h for x, h in zip(variables(self.n), self)))

    def map_degree(self) -> int:
        """deg F for F = X - H; at least 1 because of the identity part."""
        return max(1, self.degree())

    def __add__(self, other):
        return HPart(self.n, PolyMap.__add__(self, other).components)

    def __neg__(self):
        return HPart(self.n, tuple(-a for a in self))


def _same_dim(a: PolyMap, b: PolyMap) -> None:
    if a.n != b.n:
        raise DimensionError(f"dimension mismatch: {a.n} vs {b.n}")


class PolyMatrix:
    """Square matrix of polynomials.  Entries may live in more than n variables."""

    __slots__ = ("n", "entries")

    def __init__(self, entries: Sequence[Sequence[Poly]]):
        rows = tuple(tuple(r) for r in entries)
        self.n = len(rows)
        if any(len(r) != self.n for r in rows):
            raise DimensionError("matrix is not square")
        if rows:
            m = rows[0][0].n
            if any(e.n != m for r in rows for e in r):
                raise DimensionError("matrix entries live in different rings")
        self.entries = rows

    @property
    def nvars(self) -> int:
        return self.entries[0][0].n if self.n else 0

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        )

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.n != other.n:
            raise DimensionError("matrix size mismatch")
        n = self.n
        m = self.nvars
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = Poly.zero(m)
                for k in range(n):
                    a = self.entries[i][k]
                    if a:
                        b = other.entries[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def is_zero(self) -> bool:
        return all(not e for r in self.entries for e in r)

    def nonzero_entries(self) -> Iterator[tuple[int, int, Poly]]:
        for i, r in enumerate(self.entries):
            for j, e in enumerate(r):
                if e:
                    yield i, j, e

    def embed(self, m: int, offset: int) -> "PolyMatrix":
        return PolyMatrix([[e.embed(m, offset) for e in r] for r in self.entries])

    def substitute(self, args: Sequence[Poly]) -> "PolyMatrix":
        return PolyMatrix([[compose(e, args) for e in r] for r in self.entries])

    def determinant(self) -> Poly:
        return bareiss_determinant(self)

    def render(self) -> str:
        return "\n".join("[" + ", ".join(e.render() for e in r) + "]" for r in self.entries)


def identity_matrix(n: int, nvars: int | None = None) -> PolyMatrix:
    m = n if nvars is None else nvars
    return PolyMatrix(
        [[Poly.constant(m, 1 if i == j else 0) for j in range(n)] for i in range(n)]
    )


def bareiss_determinant(M: PolyMatrix) -> Poly:
    """Fraction-free (Bareiss) elimination; every division is exact in Q[X]."""
    n = M.n
    m = M.nvars
    if n == 0:
        return Poly.constant(0, 1)
    A = [list(r) for r in M.entries]
    sign = 1
    prev = Poly.constant(m, 1)
    for k in range(n - 1):
        if not A[k][k]:
            swap = next((r for r in range(k + 1, n) if A[r][k]), None)
            if swap is None:
                return Poly.zero(m)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        pivot = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * A[i][j] - A[i][k] * A[k][j]
                A[i][j] = num.exact_div(prev)
            A[i][k] = Poly.zero(m)
        prev = pivot
    det = A[n - 1][n - 1]
    return det if sign == 1 else -det


def jacobian(H: PolyMap) -> PolyMatrix:
    """Entry (i, j) is dH_i / dX_j."""
    return PolyMatrix([[h.partial(j) for j in range(H.n)] for h in H])


def coefficient(H: PolyMap, i: int, alpha: Sequence[int]) -> Fraction:
    """H_{i,alpha} = alpha! times the plain coefficient of X^alpha in H_i."""
    alpha = tuple(alpha)
    if sum(alpha) < 2:
        raise ValueError(f"coefficients are only defined for |alpha| >= 2, got {alpha}")
    c = H[i].coeff(alpha)
    return c * mi_factorial(alpha) if c else Fraction(0)


def coefficient_table(H: PolyMap) -> dict[tuple[int, MultiIndex], Fraction]:
    """All nonzero H_{i,alpha}, keyed by (i, alpha)."""
    return {
        (i, alpha): c * mi_factorial(alpha)
        for i, h in enumerate(H)
        for alpha, c in h.terms.items()
    }


def keller_check(H: HPart) -> bool:
    """True iff det(I - JH) is the constant 1."""
    J = jacobian(H)
    n = H.n
    I_minus = PolyMatrix(
        [
            [(Poly.constant(n, 1) if i == j else Poly.zero(n)) - J[i, j] for j in range(n)]
            for i in range(n)
        ]
    )
    return bareiss_determinant(I_minus) == Poly.constant(n, 1)


def map_compose(F: PolyMap, G: PolyMap, truncation: int | None = None) -> PolyMap:
    """(F o G)_i = F_i(G_1, ..., G_n)."""
    _same_dim(F, G)
    return PolyMap(F.n, tuple(compose(f, G.components, truncation) for f in F))


# --- rational matrices ---------------------------------------------------


RatMatrix = list[list[Fraction]]


def rat_matrix(rows: Sequence[Sequence[int | Fraction]]) -> RatMatrix:
    return [[Fraction(x) for x in r] for r in rows]


def rat_inverse(T: Sequence[Sequence[int | Fraction]]) -> RatMatrix:
    """Gauss-Jordan inverse over Q; raises SingularMatrixError."""
    n = len(T)
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(T)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [r[n:] for r in A]


def linear_map(T: Sequence[Sequence[int | Fraction]]) -> PolyMap:
    """The linear map X -> T X."""
    n = len(T)
    xs = variables(n)
    comps = []
    for row in T:
        acc = Poly.zero(n)
        for c, x in zip(row, xs):
            if c:
                acc = acc + x * Fraction(c)
        comps.append(acc)
    return PolyMap(n, tuple(comps))


def linear_conjugate(H: HPart, T: Sequence[Sequence[int | Fraction]]) -> HPart:
    """T^{-1} o H o T, where T acts as X -> T X."""
    if len(T) != H.n or any(len(r) != H.n for r in T):
        raise DimensionError("conjugating matrix has the wrong shape")
    Tinv = rat_inverse(T)
    inner = map_compose(H, linear_map(T))
    out = map_compose(linear_map(Tinv), inner)
    return HPart(H.n, out.components)
