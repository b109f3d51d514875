"""Formal inverses of F = X - H and degree-bound certificates.

Two independent routes produce the inverse X + G:

* :func:`invert_fixed_point` iterates G <- H o (X + G) on truncated series.
  This is the workhorse and the ground truth.
* :func:`invert_via_trees` assembles G from tree sums,
  G_i = X_i + sum_alpha G_{i,alpha} / alpha! X^alpha with G_{i,alpha} the total
  H-energy of S_{i,alpha}.

A polynomial inverse is only ever reported after the untruncated compositions
F o (X + G) and (X + G) o F have both been checked to equal X.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

from .multipoly import MultiIndex, Poly, mi_factorial, multi_indices_upto, variables
from .nilpotency import strong_index, weak_index
from .polymap import HPart, PolyMap, map_compose
from .trees import tree_energy_sum

log = logging.getLogger(__name__)


class InversionError(RuntimeError):
    """No verified polynomial inverse was found."""


@dataclass(frozen=True)
class InverseSeries:
    """X + G truncated at total degree ``truncation_degree``."""

    n: int
    truncation_degree: int
    components: tuple[Poly, ...]

    def __post_init__(self):
        xs = variables(self.n)
        for x, c in zip(xs, self.components):
            if (c - x).min_degree() < 2 and (c - x):
                raise ValueError("inverse series must be X + (terms of degree >= 2)")

    def as_map(self) -> PolyMap:
        return PolyMap(self.n, self.components)

    def nonlinear_part(self) -> HPart:
        xs = variables(self.n)
        return HPart(self.n, tuple(c - x for c, x in zip(self.components, xs)))

    def g_coefficient(self, i: int, alpha: Sequence[int]) -> Fraction:
        """G_{i,alpha} = alpha! times the stored coefficient of X^alpha."""
        alpha = tuple(alpha)
        return self.components[i].coeff(alpha) * mi_factorial(alpha)

    def degree(self) -> int:
        return max((c.degree() for c in self.components), default=0)


@dataclass
class BoundCertificate:
    map_id: str
    n: int
    map_degree: int
    weak_index: int | None
    strong_index: int | None
    inverse_degree: int | None
    left_composition_ok: bool
    right_composition_ok: bool
    classical_bound: int
    weak_bound: int | None
    strong_bound: int | None

    @property
    def verified(self) -> bool:
        return self.inverse_degree is not None and self.left_composition_ok and self.right_composition_ok

    @property
    def claimed_bound(self) -> int | None:
        return self.strong_bound

    def holds(self, bound: int | None) -> bool | None:
        if bound is None or self.inverse_degree is None:
            return None
        return self.inverse_degree <= bound

    @property
    def classical_holds(self) -> bool | None:
        return self.holds(self.classical_bound)

    @property
    def weak_holds(self) -> bool | None:
        return self.holds(self.weak_bound)

    @property
    def strong_holds(self) -> bool | None:
        return self.holds(self.strong_bound)

    @property
    def proven_bounds_hold(self) -> bool:
        """deg F^-1 <= d^(n-1) and, when p is defined, deg F^-1 <= d^(p-1).

        The d^(e-1) bound is a refuted conjecture and is only reported.
        """
        if not self.verified:
            return False
        return self.classical_holds is not False and self.strong_holds is not False

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(
            verified=self.verified,
            classical_holds=self.classical_holds,
            weak_holds=self.weak_holds,
            strong_holds=self.strong_holds,
        )
        return d

    def render(self) -> str:
        def fmt(v):
            return "none" if v is None else str(v).lower() if isinstance(v, bool) else str(v)

        rows = [
            ("map", self.map_id or "-"),
            ("dimension n", self.n),
            ("deg F", self.map_degree),
            ("weak index e", self.weak_index),
            ("strong index p", self.strong_index),
            ("deg F^-1", self.inverse_degree),
            ("F o F^-1 == X", self.left_composition_ok),
            ("F^-1 o F == X", self.right_composition_ok),
            ("bound d^(n-1)", f"{fmt(self.classical_bound)} holds={fmt(self.classical_holds)}"),
            ("bound d^(e-1)", f"{fmt(self.weak_bound)} holds={fmt(self.weak_holds)}"),
            ("bound d^(p-1)", f"{fmt(self.strong_bound)} holds={fmt(self.strong_holds)}"),
        ]
        width = max(len(k) for k, _ in rows)
        return "".join(f"{k.ljust(width)} : {fmt(v)}\n" for k, v in rows)


# --- tree-sum coefficients -----------------------------------------------


def g_coefficient_full(H: HPart, i: int, alpha: Sequence[int], _memo: dict | None = None) -> Fraction:
    """G_{i,alpha}: total H-energy of S_{i,alpha}."""
    return tree_energy_sum(H, i, alpha, None, _memo)


def g_coefficient_truncated(
    H: HPart, p: int, i: int, alpha: Sequence[int], _memo: dict | None = None
) -> Fraction:
    """Total H-energy of the trees in S_{i,alpha} of height <= p - 1."""
    if p < 1:
        raise ValueError("p must be >= 1")
    return tree_energy_sum(H, i, alpha, p - 1, _memo)


def invert_via_trees(H: HPart, D: int) -> InverseSeries:
    """X + G truncated at degree D, with every coefficient taken from tree sums."""
    if D < 2:
        raise ValueError("degree cap must be >= 2")
    n = H.n
    memo: dict = {}
    comps = []
    for i, x in enumerate(variables(n)):
        terms: dict[MultiIndex, Fraction] = {}
        for alpha in multi_indices_upto(n, 2, D):
            g = g_coefficient_full(H, i, alpha, memo)
            if g:
                terms[alpha] = g / mi_factorial(alpha)
        comps.append(x + Poly(n, terms))
    return InverseSeries(n, D, tuple(comps))


# --- fixed-point route ---------------------------------------------------


def invert_fixed_point(H: HPart, D: int) -> InverseSeries:
    """Iterate G <- H o (X + G) with everything above degree D discarded.

    H has order >= 2, so each pass fixes at least one more degree and the
    iteration is stationary after at most D passes.
    """
    if D < 1:
        raise ValueError("truncation degree must be >= 1")
    n = H.n
    xs = variables(n)
    G = tuple(Poly.zero(n) for _ in range(n))
    for k in range(D + 1):
        args = [x + g for x, g in zip(xs, G)]
        nxt = tuple(h.compose(args, D) for h in H)
        if nxt == G:
            log.debug("fixed point reached after %d passes (D=%d)", k, D)
            break
        G = nxt
    else:
        raise AssertionError("fixed-point iteration did not stabilize")
    return InverseSeries(n, D, tuple(x + g for x, g in zip(xs, G)))


def verify_inverse(H: HPart, inverse: PolyMap) -> tuple[bool, bool]:
    """Exact checks F o inverse == X and inverse o F == X, with F = X - H."""
    F = H.as_map()
    ident = PolyMap.identity(H.n)
    left = map_compose(F, inverse) == ident
    right = map_compose(inverse, F) == ident
    return left, right


def _power(d: int, e: int | None) -> int | None:
    return None if e is None else d ** (e - 1)


def invert_strongly_nilpotent(H: HPart, map_id: str = "") -> tuple[PolyMap, BoundCertificate]:
    """Inverse of X - H truncated at deg(F)^(p-1), verified exactly.

    Raises :class:`InversionError` if JH is not strongly nilpotent or the
    truncated series fails either composition check.
    """
    p = strong_index(H)
    if p is None:
        raise InversionError("JH is not strongly nilpotent")
    d = H.map_degree()
    D = d ** (p - 1)
    series = invert_fixed_point(H, D)
    inv = series.as_map()
    left, right = verify_inverse(H, inv)
    if not (left and right):
        raise InversionError(
            f"series truncated at degree {D} fails the composition check "
            f"(left={left}, right={right})"
        )
    e = weak_index(H)
    cert = BoundCertificate(
        map_id=map_id,
        n=H.n,
        map_degree=d,
        weak_index=e,
        strong_index=p,
        inverse_degree=inv.degree(),
        left_composition_ok=left,
        right_composition_ok=right,
        classical_bound=d ** (H.n - 1),
        weak_bound=_power(d, e),
        strong_bound=D,
    )
    return inv, cert


def _search_degrees(d: int, n: int, hints: Sequence[int | None]) -> list[int]:
    cap = max(1, d ** (n - 1))
    cands = {h for h in hints if h is not None and 1 <= h <= cap}
    D = 2
    while D < cap:
        cands.add(D)
        D *= 2
    cands.add(cap)
    return sorted(cands)


def find_polynomial_inverse(
    H: HPart, hints: Sequence[int | None] = ()
) -> tuple[PolyMap | None, InverseSeries | None]:
    """Search truncation degrees up to deg(F)^(n-1) for a verified inverse.

    Candidate degrees are the ``hints`` plus powers of two, capped at the
    classical bound.  Returns (inverse, series) on success and (None, last series)
    otherwise.
    """
    d = H.map_degree()
    series = None
    for D in _search_degrees(d, H.n, hints):
        series = invert_fixed_point(H, D)
        inv = series.as_map()
        left, right = verify_inverse(H, inv)
        if left and right:
            return inv, series
    return None, series


def degree_bound_report(H: HPart, map_id: str = "") -> BoundCertificate:
    """Indices, a verified inverse, and which of d^(n-1), d^(e-1), d^(p-1) hold."""
    d = H.map_degree()
    e = weak_index(H)
    p = strong_index(H)
    inv, _ = find_polynomial_inverse(H, hints=(_power(d, p), _power(d, e)))
    if inv is None:
        raise InversionError(f"no polynomial inverse up to degree {d ** (H.n - 1)}")
    left, right = verify_inverse(H, inv)
    return BoundCertificate(
        map_id=map_id,
        n=H.n,
        map_degree=d,
        weak_index=e,
        strong_index=p,
        inverse_degree=inv.degree(),
        left_composition_ok=left,
        right_composition_ok=right,
        classical_bound=d ** (H.n - 1),
        weak_bound=_power(d, e),
        strong_bound=_power(d, p),
    )
