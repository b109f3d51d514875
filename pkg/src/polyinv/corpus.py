"""Example corpus, seeded map generators and the verification suite.

Random choices come from SplitMix64 so that generated maps are reproducible in
any language:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)            (all arithmetic mod 2**64)

``generate_triangular`` walks components i = 1 .. n-1 and, for each, the
monomials in X_{i+1} .. X_n with 2 <= |alpha| <= d in graded-lex descending
order.  A monomial is kept when ``next() % 3 == 0``; its coefficient is
``pool[next() % len(pool)]``.  Component n is zero.  If nothing was kept,
component n-1 receives X_n^2.  Conjugation draws 2n elementary row operations
row_r += c * row_s (r = next() % n, s = next() % (n-1) skipping r,
c = pool[next() % len(pool)]) applied to the identity.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from .inversion import InversionError, degree_bound_report
from .mapfile import MapDocument, dump_map, parse_map
from .multipoly import Poly, multi_indices, multi_indices_upto, parse_poly
from .nilpotency import nilpotency_report
from .polymap import HPart, coefficient_table, keller_check, linear_conjugate
from .trees import FernSpec, tree_energy_sum

MASK64 = (1 << 64) - 1
DEFAULT_POOL = (-2, -1, 1, 2)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        return self.next() % k


@dataclass(frozen=True)
class GeneratorSpec:
    n: int
    d: int
    seed: int
    pool: tuple[int, ...] = DEFAULT_POOL
    conjugate: bool = False


def _monomials_in_tail(n: int, first: int, lo: int, hi: int) -> list[tuple[int, ...]]:
    """Monomials in X_first .. X_{n-1} (0-based) with lo <= |alpha| <= hi, grlex descending."""
    out = []
    for t in range(hi, lo - 1, -1):
        for tail in multi_indices(n - first, t):
            out.append((0,) * first + tail)
    return out


def unimodular_matrix(n: int, rng: SplitMix64, pool: Sequence[int] = DEFAULT_POOL) -> list[list[int]]:
    T = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        r = rng.below(n)
        s = rng.below(n - 1)
        if s >= r:
            s += 1
        c = pool[rng.below(len(pool))]
        T[r] = [a + c * b for a, b in zip(T[r], T[s])]
    return T


def generate_triangular(spec: GeneratorSpec) -> HPart:
    """Seeded H whose component i only involves X_{i+1} .. X_n (strictly triangular JH)."""
    n, d = spec.n, spec.d
    if n < 2 or d < 2:
        raise ValueError("generator needs n >= 2 and d >= 2")
    rng = SplitMix64(spec.seed)
    comps = []
    for i in range(n - 1):
        terms = {}
        for alpha in _monomials_in_tail(n, i + 1, 2, d):
            if rng.below(3) == 0:
                terms[alpha] = spec.pool[rng.below(len(spec.pool))]
        comps.append(Poly(n, terms))
    comps.append(Poly.zero(n))
    if all(c.is_zero() for c in comps):
        comps[n - 2] = Poly.monomial((0,) * (n - 1) + (2,))
    H = HPart(n, tuple(comps))
    if spec.conjugate:
        H = linear_conjugate(H, unimodular_matrix(n, rng, spec.pool))
    return H


def generate_dense(n: int, d: int, seed: int, pool: Sequence[int] = DEFAULT_POOL) -> HPart:
    """Seeded H with no structure: every monomial of degree 2..d kept with odds 1/2."""
    rng = SplitMix64(seed)
    comps = []
    for _ in range(n):
        terms = {}
        for alpha in sorted(multi_indices_upto(n, 2, d), key=lambda a: (sum(a), a), reverse=True):
            if rng.below(2) == 0:
                terms[alpha] = pool[rng.below(len(pool))]
        comps.append(Poly(n, terms))
    return HPart(n, tuple(comps))


# --- corpus --------------------------------------------------------------


@dataclass
class CorpusEntry:
    """A named map plus the properties it is expected to have.

    ``expected`` maps property names to ``{"value": ..., "source": "literature" | "derived"}``.
    The suite recomputes every value; stored copies act as regression pins.
    """

    id: str
    doc: MapDocument
    provenance: str = ""
    expected: dict[str, dict[str, Any]] = field(default_factory=dict)

    @property
    def H(self) -> HPart:
        return self.doc.H

    def to_text(self) -> str:
        doc = MapDocument(
            self.doc.H,
            self.doc.convention,
            {"id": self.id, "provenance": self.provenance, "expected": self.expected},
        )
        return dump_map(doc)

    @classmethod
    def from_text(cls, text: str) -> "CorpusEntry":
        doc = parse_map(text)
        return cls(
            id=str(doc.extra.get("id", "")),
            doc=doc,
            provenance=str(doc.extra.get("provenance", "")),
            expected=dict(doc.extra.get("expected", {})),
        )


VAN_DEN_ESSEN = ("3*X4^2*X2 - 2*X3*X4*X5", "X4^2*X5", "X4^3", "X5^3", "0")


def _hand_entry(entry_id: str, n: int, comps: Sequence[str], convention: str, provenance: str) -> CorpusEntry:
    stored = HPart(n, tuple(parse_poly(c, n) for c in comps))
    H = -stored if convention == "X+H" else stored
    return CorpusEntry(entry_id, MapDocument(H, convention), provenance)


def _expected_from(H: HPart, known: dict[str, Any] | None = None) -> dict[str, dict[str, Any]]:
    """Compute the regression pins for H; keys in ``known`` are tagged as published facts."""
    known = known or {}
    rep = nilpotency_report(H)
    exp: dict[str, Any] = {
        "keller": keller_check(H),
        "weak_index": rep.weak_index,
        "strong_index": rep.strong_index,
    }
    inv_deg = None
    if exp["keller"] and rep.weak_index is not None:
        try:
            inv_deg = degree_bound_report(H).inverse_degree
        except InversionError:
            inv_deg = None
    exp["inverse_degree"] = inv_deg
    exp.update(known)
    return {
        k: {"value": v, "source": "literature" if k in known else "derived"} for k, v in exp.items()
    }


def builtin_entries() -> list[CorpusEntry]:
    """The hand-written entries and a few generated ones, with freshly computed pins."""
    entries = [
        _hand_entry("zero-n2", 2, ("0", "0"), "X-H", "H = 0; F is the identity"),
        _hand_entry("square-n2", 2, ("X2^2", "0"), "X-H", "smallest strictly triangular example"),
        _hand_entry(
            "triangular-n3", 3, ("X2^2 + X3^2", "X3^2", "0"), "X-H",
            "strictly triangular, inverse degree attains d^(p-1) = 4",
        ),
        _hand_entry("non-keller-n2", 2, ("X1^2", "0"), "X-H", "det(I - JH) = 1 - 2 X1; not Keller"),
        _hand_entry(
            "van-den-essen-n5", 5, VAN_DEN_ESSEN, "X+H",
            "van den Essen's cubic counterexample to deg F^-1 <= d^(e-1); stated as F = X + H",
        ),
    ]
    for n, d, seed, conj in [(3, 2, 1, False), (3, 2, 1, True), (3, 3, 2, False), (3, 3, 2, True),
                              (3, 2, 7, True), (4, 2, 3, False), (4, 2, 3, True)]:
        spec = GeneratorSpec(n, d, seed, conjugate=conj)
        tag = "conj" if conj else "tri"
        H = generate_triangular(spec)
        entries.append(
            CorpusEntry(
                f"gen-{tag}-n{n}-d{d}-s{seed}",
                MapDocument(H, "X-H"),
                f"generate_triangular(n={n}, d={d}, seed={seed}, conjugate={conj})",
            )
        )
    published = {"van-den-essen-n5": {"keller": True, "weak_bound_violated": True}}
    for e in entries:
        e.expected = _expected_from(e.H, published.get(e.id))
    return entries


def load_corpus(path: str | Path | None = None) -> list[CorpusEntry]:
    """Entries from a directory of ``*.json`` map files, a single file, or the packaged corpus."""
    if path is None:
        root = resources.files("polyinv") / "data" / "corpus"
        files = sorted((f for f in root.iterdir() if f.name.endswith(".json")), key=lambda f: f.name)
        return [CorpusEntry.from_text(f.read_text(encoding="utf-8")) for f in files]
    p = Path(path)
    files = sorted(p.glob("*.json")) if p.is_dir() else [p]
    return [CorpusEntry.from_text(f.read_text(encoding="utf-8")) for f in files]


def write_corpus(entries: Sequence[CorpusEntry], directory: str | Path) -> list[Path]:
    out = []
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for k, e in enumerate(entries):
        f = d / f"{k:02d}-{e.id}.json"
        f.write_text(e.to_text(), encoding="utf-8")
        out.append(f)
    return out


# --- suite ---------------------------------------------------------------


@dataclass(frozen=True)
class SuiteCaps:
    fern_max_alpha: int | None = None  # default: deg H
    truncation_max_alpha: int = 5
    tree_max_n: int = 3


@dataclass
class Check:
    name: str
    status: str  # "pass", "fail", "skip", "expected-violation"
    detail: str = ""


@dataclass
class EntryResult:
    id: str
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)


def exhaustive_fern_check(H: HPart, p: int, max_alpha: int) -> tuple[int, tuple | None]:
    """Check every fern sum with |alpha^(l)| <= max_alpha, for all root and sink types.

    All (i, j) pairs are handled at once through the matrix
    M(alpha)[a][b] = H_{a, alpha + e_b}: the fern sums for a spec are the entries
    of M(alpha^(1)) ... M(alpha^(p)).  A vanishing prefix product kills every
    extension, which prunes the search.  Returns (number of specs covered,
    first violation as (i, j, alphas, value) or None).
    """
    n = H.n
    table = coefficient_table(H)
    alphas = multi_indices_upto(n, 0, max_alpha)
    mats = []
    for a in alphas:
        M = [[table.get((r, tuple(x + (k == c) for k, x in enumerate(a))), 0) for c in range(n)] for r in range(n)]
        mats.append((a, M))
    nonzero = [(a, M) for a, M in mats if any(any(row) for row in M)]
    total = len(alphas) ** p

    def mul(A, B):
        return [[sum(A[r][k] * B[k][c] for k in range(n) if A[r][k]) for c in range(n)] for r in range(n)]

    def rec(prefix, chosen):
        if len(chosen) == p:
            for i in range(n):
                for j in range(n):
                    if prefix[i][j]:
                        return (i, j, tuple(chosen), prefix[i][j])
            return None
        for a, M in nonzero:
            P = M if prefix is None else mul(prefix, M)
            if not any(any(row) for row in P):
                continue
            hit = rec(P, chosen + [a])
            if hit:
                return hit
        return None

    return total, rec(None, [])


def check_entry(entry: CorpusEntry, caps: SuiteCaps = SuiteCaps()) -> EntryResult:
    checks: list[Check] = []
    H = entry.H
    exp = {k: v.get("value") for k, v in entry.expected.items()}

    def pin(name, got):
        if name not in exp:
            checks.append(Check(name, "pass", f"{got}"))
        elif exp[name] == got:
            checks.append(Check(name, "pass", f"{got}"))
        else:
            checks.append(Check(name, "fail", f"got {got}, expected {exp[name]}"))

    text = entry.to_text()
    again = CorpusEntry.from_text(text).to_text()
    checks.append(Check("roundtrip", "pass" if again == text else "fail"))

    keller = keller_check(H)
    pin("keller", keller)
    rep = nilpotency_report(H)
    pin("weak_index", rep.weak_index)
    pin("strong_index", rep.strong_index)
    e, p = rep.weak_index, rep.strong_index

    if keller and e is not None:
        try:
            cert = degree_bound_report(H, entry.id)
        except InversionError as exc:
            checks.append(Check("inverse", "fail", str(exc)))
            cert = None
        if cert is not None:
            checks.append(Check("inverse", "pass" if cert.verified else "fail",
                                f"degree {cert.inverse_degree}, both compositions exact"))
            pin("inverse_degree", cert.inverse_degree)
            checks.append(Check("bound d^(n-1)", "pass" if cert.classical_holds else "fail",
                                f"{cert.inverse_degree} <= {cert.classical_bound}"))
            if p is not None:
                checks.append(Check("bound d^(p-1)", "pass" if cert.strong_holds else "fail",
                                    f"{cert.inverse_degree} <= {cert.strong_bound}"))
            if cert.weak_holds:
                status = "fail" if exp.get("weak_bound_violated") else "pass"
                checks.append(Check("bound d^(e-1)", status, f"{cert.inverse_degree} <= {cert.weak_bound}"))
            else:
                status = "expected-violation" if exp.get("weak_bound_violated") else "fail"
                checks.append(Check("bound d^(e-1)", status, f"{cert.inverse_degree} > {cert.weak_bound}"))
    else:
        checks.append(Check("inverse", "skip", "not a nilpotent Keller map"))
        pin("inverse_degree", None)

    if p is not None:
        m = caps.fern_max_alpha if caps.fern_max_alpha is not None else H.degree()
        total, bad = exhaustive_fern_check(H, p, m)
        if bad is None:
            checks.append(Check("fern sums", "pass", f"{total} specs x {H.n ** 2} (i,j), |alpha| <= {m}"))
        else:
            i, j, alphas, val = bad
            checks.append(Check("fern sums", "fail", f"i={i + 1} j={j + 1} alphas={alphas} sum={val}"))
        if H.n <= caps.tree_max_n:
            full: dict = {}
            trunc: dict = {}
            mism = []
            count = 0
            for alpha in multi_indices_upto(H.n, 2, caps.truncation_max_alpha):
                for i in range(H.n):
                    count += 1
                    a = tree_energy_sum(H, i, alpha, None, full)
                    b = tree_energy_sum(H, i, alpha, p - 1, trunc)
                    if a != b:
                        mism.append((i, alpha))
            checks.append(Check("height truncation", "fail" if mism else "pass",
                                f"{count} coefficients, |alpha| <= {caps.truncation_max_alpha}"
                                + (f", first mismatch {mism[0]}" if mism else "")))
        else:
            checks.append(Check("height truncation", "skip", f"n > {caps.tree_max_n}"))
    else:
        checks.append(Check("fern sums", "skip", "not strongly nilpotent"))
        checks.append(Check("height truncation", "skip", "not strongly nilpotent"))
    return EntryResult(entry.id, checks)


@dataclass
class SuiteReport:
    results: list[EntryResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> str:
        data = {
            "passed": self.passed,
            "entries": [
                {
                    "id": r.id,
                    "passed": r.passed,
                    "checks": [{"name": c.name, "status": c.status, "detail": c.detail} for c in r.checks],
                }
                for r in self.results
            ],
        }
        return json.dumps(data, indent=2) + "\n"

    def render(self) -> str:
        lines = []
        for r in self.results:
            lines.append(f"{r.id}: {'PASS' if r.passed else 'FAIL'}")
            for c in r.checks:
                lines.append(f"  {c.status.upper():<18} {c.name:<18} {c.detail}".rstrip())
        n_ok = sum(r.passed for r in self.results)
        lines.append(f"{n_ok}/{len(self.results)} entries passed")
        return "\n".join(lines) + "\n"


def run_suite(
    corpus: Sequence[CorpusEntry], caps: SuiteCaps = SuiteCaps(), jobs: int = 1
) -> SuiteReport:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(check_entry, corpus, [caps] * len(corpus)))
    else:
        results = [check_entry(e, caps) for e in corpus]
    return SuiteReport(results)


def seeded_entries(seed: int) -> list[CorpusEntry]:
    """Generated entries for ``suite --seed``: n=3 with d=2 and d=3, raw and conjugated."""
    out = []
    for d in (2, 3):
        for conj in (False, True):
            H = generate_triangular(GeneratorSpec(3, d, seed, conjugate=conj))
            tag = "conj" if conj else "tri"
            out.append(
                CorpusEntry(
                    f"seed-{tag}-n3-d{d}-s{seed}",
                    MapDocument(H, "X-H"),
                    f"generate_triangular(n=3, d={d}, seed={seed}, conjugate={conj})",
                )
            )
    return out


def fern_specs(n: int, p: int, max_alpha: int):
    """Every FernSpec with |alpha^(l)| <= max_alpha, as a generator."""
    alphas = multi_indices_upto(n, 0, max_alpha)
    for i in range(n):
        for j in range(n):
            for gens in itertools.product(alphas, repeat=p):
                yield FernSpec(i, j, gens)

