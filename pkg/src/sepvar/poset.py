"""The poset of pairs ``(π, σ)`` indexing the pieces of the separating variety.

An element ``(π, σ)`` with ``π`` a composition of ``p`` into ``k`` parts and
``σ ∈ S_k`` stands for the closure of ``G² · C_{π,σ}``; the order is
containment. The covering relation is generated directly (merging two
adjacent blocks whose images under ``σ`` are adjacent values), and the full
order is its reflexive-transitive closure. Every cover drops the rank by one.
"""

from __future__ import annotations

import enum
import functools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .combinatorics import (
    Composition,
    ParameterError,
    Permutation,
    ascending_unit_positions,
    descending_positions,
    enumerate_compositions,
    enumerate_permutations,
    group_sizes,
    merge_blocks,
    refines,
    split_star,
    star_compose,
)

MAX_P = 7


class Regime(enum.Enum):
    TWO_MATRICES = "n=2"
    THREE_OR_MORE = "n>=3"

    @classmethod
    def for_n(cls, n: int) -> "Regime":
        if n < 2:
            raise ParameterError(f"n must be >= 2, got {n}")
        return cls.TWO_MATRICES if n == 2 else cls.THREE_OR_MORE


@dataclass(frozen=True, order=True)
class PosetElement:
    pi: Composition
    sigma: Permutation

    def __init__(self, pi, sigma):
        pi = pi if isinstance(pi, Composition) else Composition(pi)
        sigma = sigma if isinstance(sigma, Permutation) else Permutation(sigma)
        if len(sigma) != pi.rank:
            raise ParameterError(f"|sigma|={len(sigma)} but rank(pi)={pi.rank}")
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "sigma", sigma)

    @property
    def rank(self) -> int:
        return self.pi.rank

    @property
    def p(self) -> int:
        return self.pi.total

    def sort_key(self):
        return (self.rank, self.pi.parts, self.sigma.images)

    def label(self) -> str:
        return f"{self.pi.label()}|{self.sigma.one_line()}"

    def __repr__(self) -> str:
        return f"({self.pi.parts}, {list(self.sigma.images)})"


def _merge_sigma(sigma: Permutation, l: int, m: int) -> Permutation:
    # positions l, l+1 carry the values {m, m+1}; collapse them to m
    img = list(sigma.images)
    del img[l]
    img[l - 1] = m
    return Permutation(v - 1 if v > m + 1 else v for v in img)


def covering_parents(e: PosetElement, regime: Regime) -> list[PosetElement]:
    """Elements of rank ``rank(e) - 1`` that cover ``e``."""
    img = e.sigma.images
    out = []
    for l in descending_positions(e.sigma):
        out.append(PosetElement(merge_blocks(e.pi, l), _merge_sigma(e.sigma, l, img[l])))
    if regime is Regime.TWO_MATRICES:
        for l in ascending_unit_positions(e.sigma, e.pi):
            out.append(
                PosetElement(merge_blocks(e.pi, l), _merge_sigma(e.sigma, l, img[l - 1]))
            )
    return sorted(set(out), key=PosetElement.sort_key)


def all_elements(p: int) -> list[PosetElement]:
    return [
        PosetElement(pi, sigma)
        for k in range(1, p + 1)
        for pi in enumerate_compositions(p, k)
        for sigma in enumerate_permutations(k)
    ]


def element_count(p: int) -> int:
    return sum(math.comb(p - 1, k - 1) * math.factorial(k) for k in range(1, p + 1))


@dataclass
class Poset:
    p: int
    regime: Regime
    elements: list[PosetElement]
    parents: list[tuple[int, ...]]
    index: dict[PosetElement, int] = field(repr=False)
    # bit j of ancestors[i] is set iff elements[j] lies strictly above elements[i]
    ancestors: list[int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, e) -> bool:
        return e in self.index

    def rank_sizes(self) -> list[int]:
        c = Counter(e.rank for e in self.elements)
        return [c[k] for k in range(1, self.p + 1)]

    def by_rank(self, k: int) -> list[PosetElement]:
        return [e for e in self.elements if e.rank == k]

    def edges(self) -> list[tuple[PosetElement, PosetElement]]:
        """Covering pairs ``(parent, child)`` in element order."""
        return [
            (self.elements[j], self.elements[i])
            for i, ps in enumerate(self.parents)
            for j in ps
        ]

    def covers(self, e: PosetElement) -> list[PosetElement]:
        return [self.elements[j] for j in self.parents[self._idx(e)]]

    def up_set(self, e: PosetElement) -> list[PosetElement]:
        bits = self.ancestors[self._idx(e)]
        return [x for j, x in enumerate(self.elements) if bits >> j & 1]

    def _idx(self, e: PosetElement) -> int:
        try:
            return self.index[e]
        except KeyError:
            raise ParameterError(f"{e!r} is not an element of P_{self.p}") from None


def build_poset(p: int, regime: Regime, *, allow_large: bool = False) -> Poset:
    """Enumerate ``P_{p,n}`` and its covering edges."""
    if p < 1:
        raise ParameterError(f"p must be >= 1, got {p}")
    if p > MAX_P and not allow_large:
        raise ParameterError(
            f"p={p} exceeds the guard p <= {MAX_P}: the poset has "
            f"{element_count(p)} elements (factorial growth); pass allow_large to override"
        )
    return _build_cached(p, regime)


@functools.lru_cache(maxsize=None)
def _build_cached(p: int, regime: Regime) -> Poset:
    elements = sorted(all_elements(p), key=PosetElement.sort_key)
    index = {e: i for i, e in enumerate(elements)}
    parents = [tuple(index[q] for q in covering_parents(e, regime)) for e in elements]
    # elements are sorted by rank, so every parent precedes its child
    ancestors = [0] * len(elements)
    for i, ps in enumerate(parents):
        bits = 0
        for j in ps:
            bits |= (1 << j) | ancestors[j]
        ancestors[i] = bits
    return Poset(p, regime, elements, parents, index, ancestors)


def leq(a: PosetElement, b: PosetElement, poset: Poset) -> bool:
    """``a ⪯ b``: ``b`` is reachable from ``a`` along covering edges."""
    i, j = poset._idx(a), poset._idx(b)
    return i == j or bool(poset.ancestors[i] >> j & 1)


def compatibility_check(a: PosetElement, b: PosetElement, regime: Regime) -> bool:
    """Decide ``a ⪯ b`` through block compatibility instead of reachability.

    ``a = (π, σ)`` must refine ``b = (π̂, σ̂)`` with group sizes ``k_i``, ``σ``
    must equal ``star_compose(k, σ̂, τ)`` for some in-group permutations ``τ``,
    and each group ``(κ_i, τ_i)`` must lie below the top of its own smaller
    poset.
    """
    if a.p != b.p or a.rank < b.rank or not refines(a.pi, b.pi):
        return False
    sizes = group_sizes(a.pi, b.pi)
    split = split_star(sizes, a.sigma)
    if split is None:
        return False
    sigma_hat, taus = split
    if sigma_hat != b.sigma or star_compose(sizes, sigma_hat, taus) != a.sigma:
        return False
    start = 0
    for size, tau in zip(sizes, taus):
        kappa = Composition(a.pi.parts[start : start + size])
        start += size
        if size == 1:
            continue
        sub = build_poset(kappa.total, regime)
        top = PosetElement((kappa.total,), (1,))
        if not leq(PosetElement(kappa, tau), top, sub):
            return False
    return True


def maximal_elements(poset: Poset) -> list[PosetElement]:
    return [e for e, ps in zip(poset.elements, poset.parents) if not ps]


def is_maximal_by_criterion(e: PosetElement, regime: Regime) -> bool:
    """Substring test for maximality, independent of the built poset."""
    if descending_positions(e.sigma):
        return False
    if regime is Regime.TWO_MATRICES and ascending_unit_positions(e.sigma, e.pi):
        return False
    return True


# dimension arithmetic -------------------------------------------------------


def component_dim(p: int, n: int, k: int) -> int:
    return (n + 1) * p * p - k


def invariant_ring_dim(p: int, n: int) -> int:
    return (n - 1) * p * p + 1


def semi_invariant_dim(p: int, n: int) -> int:
    return (n - 2) * p * p + 2


def sdim(p: int, n: int) -> int:
    """Smallest component dimension, from the enumerated maximal elements."""
    poset = build_poset(p, Regime.for_n(n))
    return min(component_dim(p, n, e.rank) for e in maximal_elements(poset))


def semi_invariant_lower_bound(p: int, n: int) -> int | None:
    """Separating-set lower bound ``(n-2)p² + p`` for ``SL_p × SL_p`` semi-invariants of ``M_p^n``.

    Undefined for ``n < 3``. It is a proven bound whenever the smallest
    component of the ``n-1`` conjugation variety has dimension ``np² - p``,
    i.e. for ``p >= 4`` or ``n >= 4``; see :func:`restricted_separating_bound`.
    """
    if n < 3:
        return None
    return (n - 2) * p * p + p


def restricted_separating_bound(p: int, n: int) -> int | None:
    """The bound obtained from the enumerated poset for ``n - 1`` matrices.

    Setting the last matrix to ``I`` turns a separating set for the
    semi-invariants of ``M_p^n`` into one for conjugation invariants of
    ``M_p^{n-1}``, which has at least ``2(n-1)p² - sdim(p, n-1)`` elements.
    """
    if n < 3:
        return None
    return 2 * (n - 1) * p * p - sdim(p, n - 1)


@dataclass(frozen=True)
class Component:
    element: PosetElement
    dim: int
    codim: int


@dataclass(frozen=True)
class ComponentReport:
    p: int
    n: int
    components: tuple[Component, ...]
    total_dim: int
    sdim: int
    counts_by_codim: dict[int, int]
    separating_lower_bound: int
    invariant_ring_dim: int
    semi_invariant_dim: int
    semi_invariant_lower_bound: int | None

    @property
    def regime(self) -> Regime:
        return Regime.for_n(self.n)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "total_dim": self.total_dim,
            "sdim": self.sdim,
            "separating_lower_bound": self.separating_lower_bound,
            "invariant_ring_dim": self.invariant_ring_dim,
            "semi_invariant_dim": self.semi_invariant_dim,
            "semi_invariant_lower_bound": self.semi_invariant_lower_bound,
            "components": [
                {
                    "pi": list(c.element.pi.parts),
                    "sigma": list(c.element.sigma.images),
                    "dim": c.dim,
                    "codim": c.codim,
                }
                for c in self.components
            ],
            "counts_by_codim": {str(k): v for k, v in sorted(self.counts_by_codim.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def component_report(p: int, n: int) -> ComponentReport:
    if p < 2 or n < 2:
        raise ParameterError(f"component reports need p >= 2 and n >= 2, got p={p}, n={n}")
    poset = build_poset(p, Regime.for_n(n))
    comps = sorted(
        (Component(e, component_dim(p, n, e.rank), e.rank - 1) for e in maximal_elements(poset)),
        key=lambda c: (c.codim, c.element.pi.parts, c.element.sigma.images),
    )
    counts = dict(sorted(Counter(c.codim for c in comps).items()))
    smallest = min(c.dim for c in comps)
    return ComponentReport(
        p=p,
        n=n,
        components=tuple(comps),
        total_dim=max(c.dim for c in comps),
        sdim=smallest,
        counts_by_codim=counts,
        separating_lower_bound=2 * n * p * p - smallest,
        invariant_ring_dim=invariant_ring_dim(p, n),
        semi_invariant_dim=semi_invariant_dim(p, n),
        semi_invariant_lower_bound=semi_invariant_lower_bound(p, n),
    )


# export ---------------------------------------------------------------------


def _node_id(i: int) -> str:
    return f"e{i}"


def hasse_dot(poset: Poset, n_label: int | None = None) -> str:
    """Hasse diagram in DOT, edges oriented from covering parent to child."""
    if n_label is not None:
        title = f"P_{{{poset.p},{n_label}}}"
    else:
        title = f"P_{{{poset.p},{poset.regime.value}}}"
    lines = [
        "digraph poset {",
        f'  label="{title}";',
        "  rankdir=TB;",
        "  node [shape=box];",
    ]
    for i, e in enumerate(poset.elements):
        lines.append(f'  {_node_id(i)} [label="{e.label()}"];')
    for i, ps in enumerate(poset.parents):
        for j in ps:
            lines.append(f"  {_node_id(j)} -> {_node_id(i)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def poset_to_dict(poset: Poset, n: int | None = None) -> dict:
    maximal = {id(e) for e in maximal_elements(poset)}
    return {
        "p": poset.p,
        "n": n,
        "regime": poset.regime.value,
        "nodes": [
            {
                "id": _node_id(i),
                "pi": list(e.pi.parts),
                "sigma": list(e.sigma.images),
                "rank": e.rank,
                "maximal": id(e) in maximal,
            }
            for i, e in enumerate(poset.elements)
        ],
        "edges": [
            {"parent": _node_id(j), "child": _node_id(i)}
            for i, ps in enumerate(poset.parents)
            for j in ps
        ],
    }


def elements_from(pairs: Iterable) -> list[PosetElement]:
    """Convenience: ``[((1,1),[2,1]), ...] -> [PosetElement, ...]``."""
    return [PosetElement(pi, sigma) for pi, sigma in pairs]
