"""Compositions, permutations and the counting sequences built from them.

Permutations are stored in one-line notation with values ``1..k``; positions
passed to or returned from the functions here are 1-based as well, so that
``descending_positions([2, 1, 3]) == [1]`` reads the same way as the
substring condition it encodes.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class ParameterError(ValueError):
    """An argument is outside the range an operation is defined on."""


@dataclass(frozen=True, order=True)
class Composition:
    """Ordered partition of ``total`` into ``rank`` positive parts."""

    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int]):
        parts = tuple(int(x) for x in parts)
        if not parts:
            raise ParameterError("a composition needs at least one part")
        if any(x < 1 for x in parts):
            raise ParameterError(f"parts must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def rank(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def cumulative(self) -> frozenset[int]:
        """Set of partial sums ``p_1, p_1+p_2, ..., p``."""
        return frozenset(itertools.accumulate(self.parts))

    def label(self) -> str:
        return "·".join(str(x) for x in self.parts)

    def __repr__(self) -> str:
        return f"Composition({self.parts})"


@dataclass(frozen=True, order=True)
class Permutation:
    """Bijection of ``{1..k}`` in one-line notation."""

    images: tuple[int, ...]

    def __init__(self, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ParameterError(f"not a permutation of 1..{len(images)}: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(range(1, k + 1))

    def __len__(self) -> int:
        return len(self.images)

    def __iter__(self) -> Iterator[int]:
        return iter(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images, 1))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, v in enumerate(self.images, 1):
            inv[v - 1] = i
        return Permutation(inv)

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles of length > 1, each starting at its smallest entry."""
        seen = set()
        out = []
        for start in range(1, len(self.images) + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_label(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "id"
        return "".join("(" + "".join(map(str, c)) + ")" for c in cycles)

    def one_line(self) -> str:
        return "[" + ",".join(map(str, self.images)) + "]"

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"


def _as_perm(sigma) -> Permutation:
    return sigma if isinstance(sigma, Permutation) else Permutation(sigma)


def _as_comp(pi) -> Composition:
    return pi if isinstance(pi, Composition) else Composition(pi)


def enumerate_compositions(p: int, k: int) -> list[Composition]:
    """All compositions of ``p`` with exactly ``k`` parts, lexicographic by parts."""
    if p < 1 or not 1 <= k <= p:
        raise ParameterError(f"need 1 <= k <= p, got p={p}, k={k}")
    out = []
    # cut points are the first k-1 partial sums; lex order on them is lex order on parts
    for cuts in itertools.combinations(range(1, p), k - 1):
        bounds = (0,) + cuts + (p,)
        out.append(Composition(b - a for a, b in zip(bounds, bounds[1:])))
    return out


def enumerate_permutations(k: int) -> list[Permutation]:
    """All of ``S_k`` in lexicographic one-line order."""
    if k < 0:
        raise ParameterError(f"k must be nonnegative, got {k}")
    return [Permutation(x) for x in itertools.permutations(range(1, k + 1))]


def merge_blocks(pi, l: int) -> Composition:
    """Merge blocks ``l`` and ``l+1`` (1-based)."""
    pi = _as_comp(pi)
    if not 1 <= l <= pi.rank - 1:
        raise ParameterError(f"merge position {l} out of range for rank {pi.rank}")
    parts = pi.parts
    return Composition(parts[: l - 1] + (parts[l - 1] + parts[l],) + parts[l + 1 :])


def refines(pi, pihat) -> bool:
    """True iff ``pihat`` is obtained from ``pi`` by merging adjacent blocks."""
    pi, pihat = _as_comp(pi), _as_comp(pihat)
    if pi.total != pihat.total:
        raise ParameterError(f"totals differ: {pi.total} vs {pihat.total}")
    return pihat.cumulative() <= pi.cumulative()


def group_sizes(pi, pihat) -> tuple[int, ...]:
    """Number of blocks of ``pi`` merged into each block of ``pihat``."""
    pi, pihat = _as_comp(pi), _as_comp(pihat)
    if not refines(pi, pihat):
        raise ParameterError(f"{pi.parts} does not refine {pihat.parts}")
    sizes = []
    acc, count, target = 0, 0, iter(pihat.parts)
    goal = next(target)
    for part in pi.parts:
        acc += part
        count += 1
        if acc == goal:
            sizes.append(count)
            acc, count = 0, 0
            goal = next(target, None)
    return tuple(sizes)


def apply_sigma(sigma, pi) -> Composition:
    """``(p_{σ(1)}, ..., p_{σ(k)})``."""
    sigma, pi = _as_perm(sigma), _as_comp(pi)
    if len(sigma) != pi.rank:
        raise ParameterError(f"|sigma|={len(sigma)} but rank(pi)={pi.rank}")
    return Composition(pi.parts[s - 1] for s in sigma.images)


def descending_positions(sigma) -> list[int]:
    """Positions ``l`` with ``σ(l) = σ(l+1) + 1``."""
    img = _as_perm(sigma).images
    return [l for l in range(1, len(img)) if img[l - 1] == img[l] + 1]


def is_partial_reversal(sigma) -> bool:
    return bool(descending_positions(sigma))


def ascending_unit_positions(sigma, pi) -> list[int]:
    """Positions ``l`` with ``σ(l) + 1 = σ(l+1)`` and ``p_l = p_{l+1} = 1``."""
    sigma, pi = _as_perm(sigma), _as_comp(pi)
    if len(sigma) != pi.rank:
        raise ParameterError(f"|sigma|={len(sigma)} but rank(pi)={pi.rank}")
    img, parts = sigma.images, pi.parts
    return [
        l
        for l in range(1, len(img))
        if img[l - 1] + 1 == img[l] and parts[l - 1] == 1 and parts[l] == 1
    ]


def t_count(k: int) -> int:
    """Number of permutations in ``S_k`` that are not partial reversals.

    Uses ``T_k = (k-1) T_{k-1} + (k-2) T_{k-2}`` with ``T_1 = T_2 = 1``.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    a, b = 1, 1  # T_1, T_2
    if k <= 2:
        return 1
    for j in range(3, k + 1):
        a, b = b, (j - 1) * b + (j - 2) * a
    return b


def t_count_closed_form(k: int) -> int:
    """Alternating sum ``sum_{q=0}^{k-1} C(k-1, q) (-1)^q (k-q)!``."""
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    return sum(
        math.comb(k - 1, q) * (-1) ** q * math.factorial(k - q) for q in range(k)
    )


BRUTE_FORCE_LIMIT = 9


def brute_force_t_count(k: int) -> int:
    if not 1 <= k <= BRUTE_FORCE_LIMIT:
        raise ParameterError(f"brute force only for 1 <= k <= {BRUTE_FORCE_LIMIT}")
    return sum(
        1
        for img in itertools.permutations(range(1, k + 1))
        if not any(img[i] == img[i + 1] + 1 for i in range(k - 1))
    )


def hertzsprung(p: int) -> int:
    """Permutations of ``S_p`` with no adjacent pair of consecutive values."""
    if p < 1:
        raise ParameterError(f"p must be >= 1, got {p}")
    total = 0
    for k in range(p):
        inner = sum(math.comb(p - k, i) * math.comb(p - 1 - i, k - i) for i in range(k + 1))
        total += (-1) ** k * math.factorial(p - k) * inner
    return total


def brute_force_hertzsprung(p: int) -> int:
    if not 1 <= p <= BRUTE_FORCE_LIMIT:
        raise ParameterError(f"brute force only for 1 <= p <= {BRUTE_FORCE_LIMIT}")
    return sum(
        1
        for img in itertools.permutations(range(1, p + 1))
        if not any(abs(img[i] - img[i + 1]) == 1 for i in range(p - 1))
    )


class CountKind(enum.Enum):
    T_COUNT = "TCount"
    HERTZSPRUNG = "Hertzsprung"


@dataclass(frozen=True)
class CountTable:
    kind: CountKind
    values: tuple[int, ...]  # values[0] is the term at index 1

    def __getitem__(self, index: int) -> int:
        if index < 1:
            raise IndexError("count tables are indexed from 1")
        return self.values[index - 1]


def count_table(kind: CountKind, upto: int) -> CountTable:
    fn = t_count if kind is CountKind.T_COUNT else hertzsprung
    return CountTable(kind, tuple(fn(i) for i in range(1, upto + 1)))


def star_compose(
    group_sizes: Sequence[int], sigma_hat, taus: Sequence
) -> Permutation:
    """Assemble a permutation of ``S_k`` from a block permutation and in-block ones.

    Group ``i`` covers positions ``K_{i-1}+1 .. K_i`` (``K_i`` the partial sums of
    ``group_sizes``). Its values form a consecutive run placed after the runs of
    every group ``g`` with ``σ̂(g) < σ̂(i)``; inside the run they are ordered by
    ``taus[i]``.
    """
    sigma_hat = _as_perm(sigma_hat)
    taus = [_as_perm(t) for t in taus]
    sizes = [int(s) for s in group_sizes]
    if not (len(sizes) == len(sigma_hat) == len(taus)):
        raise ParameterError("group_sizes, sigma_hat and taus must have equal length")
    if any(s < 1 for s in sizes):
        raise ParameterError(f"group sizes must be positive: {sizes}")
    for s, t in zip(sizes, taus):
        if len(t) != s:
            raise ParameterError(f"tau {t} does not act on a group of size {s}")
    # value offset of group i = total size of groups sent before it by sigma_hat
    order = sorted(range(len(sizes)), key=lambda g: sigma_hat.images[g])
    offset = [0] * len(sizes)
    acc = 0
    for g in order:
        offset[g] = acc
        acc += sizes[g]
    images = []
    for g, tau in enumerate(taus):
        images.extend(offset[g] + v for v in tau.images)
    return Permutation(images)


def split_star(group_sizes: Sequence[int], sigma):
    """Invert :func:`star_compose`: return ``(sigma_hat, taus)`` or ``None``.

    ``None`` means no choice of block permutation and in-block permutations
    produces ``sigma`` for this grouping.
    """
    sigma = _as_perm(sigma)
    sizes = [int(s) for s in group_sizes]
    if sum(sizes) != len(sigma):
        raise ParameterError("group sizes do not sum to |sigma|")
    runs = []
    start = 0
    for s in sizes:
        vals = sigma.images[start : start + s]
        lo = min(vals)
        if max(vals) - lo != s - 1:
            return None
        runs.append((lo, tuple(v - lo + 1 for v in vals)))
        start += s
    ranked = sorted(range(len(runs)), key=lambda g: runs[g][0])
    sigma_hat = [0] * len(runs)
    for r, g in enumerate(ranked, 1):
        sigma_hat[g] = r
    return Permutation(sigma_hat), [Permutation(t) for _, t in runs]
