"""Weak and strong nilpotency of JH, decided symbolically.

Strong nilpotency evaluates the ``l``-th Jacobian factor on its own block of
variables X^(l), so the length-L product lives in Q[X^(1), ..., X^(L)] with
L * n variables.  Over a field of characteristic zero a polynomial identity holds
at every point iff it holds coefficientwise, so no sampling is involved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .multipoly import MultiIndex, variables
from .polymap import HPart, PolyMatrix, jacobian


@dataclass(frozen=True)
class Witness:
    """A nonzero entry of a matrix product and one of its monomials.

    ``blocked`` witnesses come from the strong product, whose exponents are laid
    out block by block (n variables per block).
    """

    length: int
    row: int
    col: int
    exponents: MultiIndex
    coefficient: Fraction
    blocked: bool = True

    def describe(self, n: int) -> str:
        factors = []
        for pos, e in enumerate(self.exponents):
            if e:
                block, var = divmod(pos, n)
                name = f"X{var + 1}[{block + 1}]" if self.blocked else f"X{var + 1}"
                factors.append(name if e == 1 else f"{name}^{e}")
        c = self.coefficient
        coeff = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        mono = "*".join(factors) or "1"
        return f"length {self.length}: entry ({self.row + 1},{self.col + 1}) has term {coeff}*{mono}"


@dataclass
class NilpotencyReport:
    n: int
    weak_index: int | None
    strong_index: int | None
    weak_witnesses: list[Witness] = field(default_factory=list)
    strong_witnesses: list[Witness] = field(default_factory=list)

    @property
    def classification(self) -> str:
        if self.strong_index is not None:
            return "strongly nilpotent"
        if self.weak_index is not None:
            return "weakly nilpotent only"
        return "not nilpotent"

    def render(self) -> str:
        fmt = lambda v: "none" if v is None else str(v)  # noqa: E731
        lines = [
            f"dimension: {self.n}",
            f"weak index: {fmt(self.weak_index)}",
            f"strong index: {fmt(self.strong_index)}",
            f"classification: {self.classification}",
        ]
        if self.weak_witnesses:
            lines.append("weak witnesses (JH^L nonzero):")
            lines += [f"  {w.describe(self.n)}" for w in self.weak_witnesses]
        if self.strong_witnesses:
            lines.append("strong witnesses (JH(X[1])...JH(X[L]) nonzero, X[l] the l-th block of variables):")
            lines += [f"  {w.describe(self.n)}" for w in self.strong_witnesses]
        return "\n".join(lines) + "\n"


def _witness(M: PolyMatrix, length: int) -> Witness | None:
    for i, j, e in M.nonzero_entries():
        alpha, c = e.sorted_terms()[0]
        return Witness(length, i, j, alpha, c)
    return None


def block_jacobian(H: HPart, block: int, blocks: int) -> PolyMatrix:
    """JH with its variables renamed into block ``block`` of ``blocks`` blocks."""
    return jacobian(H).embed(H.n * blocks, H.n * block)


def block_product(H: HPart, length: int) -> PolyMatrix:
    """JH(X^(1)) ... JH(X^(length)) over length * n variables."""
    if length < 1:
        raise ValueError("length must be >= 1")
    n = H.n
    J = jacobian(H)
    total = n * length
    P = J.embed(total, 0)
    for block in range(1, length):
        P = P @ J.embed(total, n * block)
    return P


def check_product_vanishes(H: HPart, length: int) -> tuple[bool, Witness | None]:
    """Whether the block-variable product of ``length`` Jacobians is identically 0.

    On failure the witness names a nonzero entry and its leading monomial, with
    exponents laid out as (X^(1), ..., X^(length)).
    """
    P = block_product(H, length)
    w = _witness(P, length)
    return w is None, w


def strong_index(H: HPart, witnesses: list[Witness] | None = None) -> int | None:
    """Least p <= n with JH(X^(1))...JH(X^(p)) == 0, or None."""
    n = H.n
    J = jacobian(H)
    # the product only grows by one block per step; pad the prefix into the larger ring
    P = J
    for length in range(1, n + 1):
        if length > 1:
            total = n * length
            P = P.embed(total, 0) @ J.embed(total, n * (length - 1))
        if P.is_zero():
            return length
        if witnesses is not None:
            witnesses.append(_witness(P, length))
    return None


def weak_index(H: HPart, witnesses: list[Witness] | None = None) -> int | None:
    """Least e <= n with JH(X)^e == 0, or None."""
    J = jacobian(H)
    P = J
    for e in range(1, H.n + 1):
        if e > 1:
            P = P @ J
        if P.is_zero():
            return e
        if witnesses is not None:
            w = _witness(P, e)
            witnesses.append(Witness(e, w.row, w.col, w.exponents, w.coefficient, blocked=False))
    return None


def nilpotency_report(H: HPart) -> NilpotencyReport:
    ww: list[Witness] = []
    sw: list[Witness] = []
    e = weak_index(H, ww)
    p = strong_index(H, sw)
    return NilpotencyReport(H.n, e, p, ww, sw)


def diagonal_specialization(P: PolyMatrix, n: int, blocks: int) -> PolyMatrix:
    """Set X^(1) = ... = X^(blocks) = X in a block-variable matrix."""
    xs = variables(n)
    return P.substitute(xs * blocks)

