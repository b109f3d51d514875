"""Typed, leaf-labelled proper rooted trees and their H-energies.

A tree in S_{i,alpha} has its leaves labelled by

    [alpha] = {(j, k) : 0 <= k < alpha_j}

(0-based here; a leaf labelled (j, k) is the k-th leaf of type j), a root of type
``i`` and free types on the other internal vertices.  Every internal vertex has
at least two children.

Trees are immutable values.  Children are kept sorted by the smallest leaf label
in their subtree.  Leaf labels are globally distinct, so this is a total order on
siblings and each isomorphism class has exactly one representation; equality of
:class:`Node` values is equality of classes.

Vertices are addressed by paths: the tuple of child positions from the root.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence, Union

from .multipoly import MultiIndex, mi_add, unit
from .polymap import HPart, PolyMap, coefficient_table

Label = tuple[int, int]
Path = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class Leaf:
    label: Label

    @property
    def type(self) -> int:
        return self.label[0]

    @property
    def min_label(self) -> Label:
        return self.label

    @property
    def children(self) -> tuple:
        return ()


@dataclass(frozen=True, slots=True)
class Node:
    type: int
    children: tuple
    min_label: Label = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        kids = tuple(sorted(self.children, key=lambda c: c.min_label))
        if len(kids) < 2:
            raise ValueError("an internal vertex needs at least two children")
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "min_label", kids[0].min_label)


Tree = Union[Leaf, Node]


@dataclass(frozen=True)
class FernSpec:
    """Root type, sink type and the off-spine leaf types of each generation."""

    root_type: int
    sink_type: int
    generation_leaf_types: tuple[MultiIndex, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "generation_leaf_types", tuple(tuple(a) for a in self.generation_leaf_types)
        )
        if not self.generation_leaf_types:
            raise ValueError("a fern has height p >= 1")
        n = len(self.generation_leaf_types[0])
        if any(len(a) != n for a in self.generation_leaf_types):
            raise ValueError("all generation multi-indices must have the same dimension")

    @property
    def height(self) -> int:
        return len(self.generation_leaf_types)

    @property
    def n(self) -> int:
        return len(self.generation_leaf_types[0])


# --- labels and set partitions -------------------------------------------


def labels_of(alpha: Sequence[int]) -> tuple[Label, ...]:
    """[alpha] in lexicographic order."""
    return tuple((j, k) for j, a in enumerate(alpha) for k in range(a))


def set_partitions(
    items: Sequence, min_blocks: int = 1, max_blocks: int | None = None
) -> Iterator[list[tuple]]:
    """Set partitions of ``items`` as lists of blocks, via restricted growth strings.

    Strings a_0 a_1 ... with a_0 = 0 and a_k <= 1 + max(a_0..a_{k-1}) are produced
    in lexicographic order; block b collects the items with a_k == b.
    """
    m = len(items)
    if m == 0:
        if min_blocks <= 0:
            yield []
        return
    cap = m if max_blocks is None else min(max_blocks, m)
    if cap < min_blocks:
        return
    rgs = [0] * m

    def rec(k: int, used: int):
        if k == m:
            if used >= min_blocks:
                blocks: list[list] = [[] for _ in range(used)]
                for item, b in zip(items, rgs):
                    blocks[b].append(item)
                yield [tuple(b) for b in blocks]
            return
        # not enough positions left to reach min_blocks
        if used + (m - k) < min_blocks:
            return
        for b in range(min(used + 1, cap)):
            rgs[k] = b
            yield from rec(k + 1, max(used, b + 1))

    rgs[0] = 0
    yield from rec(1, 1)


# --- enumeration ---------------------------------------------------------


def enumerate_trees(
    i: int,
    alpha: Sequence[int],
    max_outdeg: int | None = None,
    max_height: int | None = None,
) -> Iterator[Node]:
    """Stream every isomorphism class of S_{i,alpha} exactly once.

    ``n`` is ``len(alpha)``.  With ``max_outdeg`` trees having a vertex with more
    children are skipped; with ``max_height`` trees deeper than that are skipped.
    """
    alpha = tuple(alpha)
    n = len(alpha)
    if sum(alpha) < 2:
        raise ValueError(f"S_(i,alpha) needs |alpha| >= 2, got {alpha}")
    if not 0 <= i < n:
        raise ValueError(f"root type {i} out of range for n={n}")

    @lru_cache(maxsize=None)
    def subtrees(t: int, labels: tuple, hcap: int | None) -> tuple:
        if len(labels) == 1:
            return (Leaf(labels[0]),) if labels[0][0] == t else ()
        if hcap is not None and hcap < 1:
            return ()
        below = None if hcap is None else hcap - 1
        out = []
        for blocks in set_partitions(labels, 2, max_outdeg):
            options = []
            for block in blocks:
                if len(block) == 1:
                    options.append((Leaf(block[0]),))
                else:
                    opts = tuple(
                        itertools.chain.from_iterable(
                            subtrees(tt, block, below) for tt in range(n)
                        )
                    )
                    if not opts:
                        break
                    options.append(opts)
            else:
                for kids in itertools.product(*options):
                    out.append(Node(t, kids))
        return tuple(out)

    # the root alone is materialized lazily partition by partition
    labels = labels_of(alpha)
    if max_height is not None and max_height < 1:
        return
    below = None if max_height is None else max_height - 1
    for blocks in set_partitions(labels, 2, max_outdeg):
        options = []
        for block in blocks:
            if len(block) == 1:
                options.append((Leaf(block[0]),))
            else:
                opts = tuple(
                    itertools.chain.from_iterable(subtrees(tt, block, below) for tt in range(n))
                )
                if not opts:
                    break
                options.append(opts)
        else:
            for kids in itertools.product(*options):
                yield Node(i, kids)


def count_trees(
    i: int, alpha: Sequence[int], max_outdeg: int | None = None, max_height: int | None = None
) -> int:
    return sum(1 for _ in enumerate_trees(i, alpha, max_outdeg, max_height))


# --- structural queries --------------------------------------------------


def height(T: Tree) -> int:
    if isinstance(T, Leaf):
        return 0
    return 1 + max(height(c) for c in T.children)


def leaves(T: Tree) -> list[Leaf]:
    if isinstance(T, Leaf):
        return [T]
    return [leaf for c in T.children for leaf in leaves(c)]


def internal_vertices(T: Tree) -> list[Node]:
    if isinstance(T, Leaf):
        return []
    return [T] + [v for c in T.children for v in internal_vertices(c)]


def leaf_type_count(T: Tree, n: int) -> MultiIndex:
    counts = [0] * n
    for leaf in leaves(T):
        counts[leaf.type] += 1
    return tuple(counts)


def outdegree(v: Node, n: int) -> MultiIndex:
    """mu(v)_j = number of children of ``v`` having type j."""
    counts = [0] * n
    for c in v.children:
        counts[c.type] += 1
    return tuple(counts)


def vertex_at(T: Tree, path: Path) -> Tree:
    v = T
    for k in path:
        v = v.children[k]
    return v


def leaf_paths(T: Tree, prefix: Path = ()) -> Iterator[tuple[Path, Leaf]]:
    if isinstance(T, Leaf):
        yield prefix, T
        return
    for k, c in enumerate(T.children):
        yield from leaf_paths(c, prefix + (k,))


def retype(T: Tree, path: Path, new_type: int) -> Tree:
    """Copy of ``T`` with the internal vertex at ``path`` given ``new_type``."""
    if not path:
        if isinstance(T, Leaf):
            raise ValueError("leaf types are fixed by their labels")
        return Node(new_type, T.children)
    k = path[0]
    kids = list(T.children)
    kids[k] = retype(kids[k], path[1:], new_type)
    return Node(T.type, tuple(kids))


def render_tree(T: Tree) -> str:
    """1-based text form, e.g. ``1[2[(3,2),(4,1)],(1,3)]``."""
    if isinstance(T, Leaf):
        j, k = T.label
        return f"({j + 1},{k + 1})"
    return f"{T.type + 1}[" + ",".join(render_tree(c) for c in T.children) + "]"


# --- energies ------------------------------------------------------------


@lru_cache(maxsize=256)
def _coeffs(H: PolyMap) -> dict:
    return coefficient_table(H)


def energy(T: Tree, H: PolyMap) -> Fraction:
    """Product over internal vertices v of H_{type(v), mu(v)}; 1 for a bare leaf."""
    table = _coeffs(H)
    out = Fraction(1)
    for v in internal_vertices(T):
        c = table.get((v.type, outdegree(v, H.n)))
        if not c:
            return Fraction(0)
        out *= c
    return out


def tree_energy_sum(
    H: PolyMap,
    i: int,
    alpha: Sequence[int],
    max_height: int | None = None,
    _memo: dict | None = None,
) -> Fraction:
    """Sum of energy(T, H) over T in S_{i,alpha} (optionally with height <= max_height).

    Evaluated by the same root-partition recursion as :func:`enumerate_trees`, but
    summing instead of materializing: a tree is a root type plus an unordered set
    of subtrees over the blocks of a partition of the labels.  Subtree sums depend
    only on the type counts of their label block, so they are memoized on
    (root type, counts, height cap), and partitions whose blocks have the same
    multiset of type counts are grouped with their multiplicity.  Vertices with
    more than deg(H) children carry zero energy and are skipped.
    """
    alpha = tuple(alpha)
    n = H.n
    if len(alpha) != n:
        raise ValueError("alpha has the wrong dimension")
    if sum(alpha) < 2:
        raise ValueError("tree sums need |alpha| >= 2")
    table = _coeffs(H)
    d = H.degree()
    memo = {} if _memo is None else _memo
    # mu vectors per root type that carry a nonzero coefficient
    support: dict[int, dict[MultiIndex, Fraction]] = {}
    for (t, mu), c in table.items():
        support.setdefault(t, {})[mu] = c
    return _subtree_sum(i, alpha, max_height, n, d, support, memo)


def _subtree_sum(t, counts, hcap, n, d, support, memo) -> Fraction:
    key = (t, counts, hcap)
    hit = memo.get(key)
    if hit is not None:
        return hit
    size = sum(counts)
    if size == 1:
        val = Fraction(1) if counts[t] == 1 else Fraction(0)
    elif (hcap is not None and hcap < 1) or t not in support or d < 2:
        val = Fraction(0)
    else:
        below = None if hcap is None else hcap - 1
        val = Fraction(0)
        for blocks, mult in _block_shapes(counts, d):
            # per block: the vector of subtree sums over the block's root type
            per_block = []
            for bc in blocks:
                if sum(bc) == 1:
                    j = bc.index(1)
                    per_block.append([(j, Fraction(1))])
                else:
                    vals = [
                        (tt, s)
                        for tt in range(n)
                        if (s := _subtree_sum(tt, bc, below, n, d, support, memo))
                    ]
                    if not vals:
                        break
                    per_block.append(vals)
            else:
                sup = support[t]
                acc = Fraction(0)
                for choice in itertools.product(*per_block):
                    mu = [0] * n
                    prod = Fraction(1)
                    for tt, s in choice:
                        mu[tt] += 1
                        prod *= s
                    c = sup.get(tuple(mu))
                    if c:
                        acc += c * prod
                val += mult * acc
    memo[key] = val
    return val


@lru_cache(maxsize=None)
def _block_shapes(counts: MultiIndex, max_blocks: int) -> tuple:
    """Group the set partitions of [counts] (2..max_blocks blocks) by block type-counts.

    Returns ((block_counts, ...), multiplicity) pairs with the blocks sorted.
    """
    n = len(counts)
    labels = labels_of(counts)
    tally: Counter = Counter()
    for blocks in set_partitions(labels, 2, max_blocks):
        shape = []
        for block in blocks:
            c = [0] * n
            for j, _ in block:
                c[j] += 1
            shape.append(tuple(c))
        tally[tuple(sorted(shape))] += 1
    return tuple(tally.items())


# --- spines, shuffle classes, ferns --------------------------------------


def spine(T: Tree, p: int) -> list[Path]:
    """Paths (v_0, ..., v_p) of the spine: v_p is the greatest-labelled leaf in
    generation >= p and v_{l-1} is the parent of v_l."""
    if p < 0:
        raise ValueError("p must be non-negative")
    deep = [(leaf.label, path) for path, leaf in leaf_paths(T) if len(path) >= p]
    if not deep:
        raise ValueError(f"tree has height {height(T)} < {p}")
    _, path = max(deep)
    depth = len(path)
    return [path[: depth - p + l] for l in range(p + 1)]


def shuffle_class(T: Tree, p: int, n: int) -> list[Tree]:
    """The n^(p-1) retypings of the interior spine vertices v_1 .. v_{p-1}."""
    chain = spine(T, p)
    interior = chain[1:p]
    out = []
    for types in itertools.product(range(n), repeat=len(interior)):
        S = T
        for path, t in zip(interior, types):
            S = retype(S, path, t)
        out.append(S)
    return out


def shuffle_class_key(T: Tree, p: int) -> Tree:
    """Class representative: every interior spine vertex retyped to 0."""
    S = T
    for path in spine(T, p)[1:p]:
        S = retype(S, path, 0)
    return S


def fern_sum(H: PolyMap, spec: FernSpec) -> Fraction:
    """Sum over k_1..k_{p-1} of prod_l H_{k_{l-1}, alpha^(l) + e_{k_l}}, k_0 = root, k_p = sink."""
    n = H.n
    if spec.n != n:
        raise ValueError("fern spec dimension does not match H")
    table = _coeffs(H)
    alphas = spec.generation_leaf_types
    p = len(alphas)
    shifted = [[mi_add(a, unit(n, k)) for k in range(n)] for a in alphas]
    total = Fraction(0)
    for mid in itertools.product(range(n), repeat=p - 1):
        ks = (spec.root_type,) + mid + (spec.sink_type,)
        prod = Fraction(1)
        for l in range(p):
            c = table.get((ks[l], shifted[l][ks[l + 1]]))
            if not c:
                prod = Fraction(0)
                break
            prod *= c
        total += prod
    return total


def fern_tree(spec: FernSpec, spine_types: Sequence[int] = ()) -> Node:
    """A labelled fern realizing ``spec``.

    Generation-l vertex v_l gets type ``spine_types[l-1]`` (default 0) for
    0 < l < p.  Off-spine leaves below v_{l-1} have types alpha^(l); the sink is
    the last leaf allocated, so it has the largest label of its type.  Every
    alpha^(l) needs |alpha^(l)| >= 1 for the fern to be proper.
    """
    n, p = spec.n, spec.height
    mids = list(spine_types) or [0] * (p - 1)
    if len(mids) != p - 1:
        raise ValueError(f"need {p - 1} spine types")
    if any(sum(a) < 1 for a in spec.generation_leaf_types):
        raise ValueError("every generation needs at least one off-spine leaf")
    next_k = [0] * n

    def take(j: int) -> Leaf:
        leaf = Leaf((j, next_k[j]))
        next_k[j] += 1
        return leaf

    gens = [[take(j) for j, a in enumerate(alpha) for _ in range(a)] for alpha in spec.generation_leaf_types]
    node: Tree = take(spec.sink_type)
    types = [spec.root_type] + mids
    for l in range(p - 1, -1, -1):
        node = Node(types[l], tuple(gens[l]) + (node,))
    return node
