"""Numerical checks on tuples of complex matrices under simultaneous conjugation.

Ranks are numerical: singular values below ``tol * s_max`` count as zero
(``tol`` defaults to ``1e-8``). Every random construction takes an integer
seed and draws from ``numpy.random.default_rng(seed)`` only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .combinatorics import Composition, ParameterError, Permutation, apply_sigma

DEFAULT_TOL = 1e-8
RETRY_BUDGET = 32
WORD_BUDGET = 10**6


class ResamplingError(RuntimeError):
    """A generic construction kept failing its own predicates."""

    def __init__(self, what: str, seed: int, attempts: int):
        super().__init__(f"{what}: no valid sample after {attempts} attempts (seed={seed})")
        self.seed = seed
        self.attempts = attempts


@dataclass(frozen=True)
class MatrixTuple:
    """``n`` square complex matrices of common size ``p``, stored as ``(n, p, p)``."""

    matrices: np.ndarray

    def __init__(self, matrices):
        arr = np.array(matrices, dtype=np.complex128)
        if arr.ndim == 2:
            arr = arr[None]
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ParameterError(f"expected shape (n, p, p), got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "matrices", arr)

    @property
    def n(self) -> int:
        return self.matrices.shape[0]

    @property
    def p(self) -> int:
        return self.matrices.shape[1]

    def __getitem__(self, i) -> np.ndarray:
        return self.matrices[i]

    def __iter__(self):
        return iter(self.matrices)

    def conjugate_by(self, g: np.ndarray) -> "MatrixTuple":
        """``g · A = (g A_i g^{-1})_i``."""
        g = np.asarray(g, dtype=np.complex128)
        ginv = np.linalg.inv(g)
        return MatrixTuple(g @ self.matrices @ ginv)

    def scale(self) -> float:
        return float(np.max(np.abs(self.matrices))) if self.matrices.size else 0.0


def _offsets(pi: Composition) -> list[int]:
    return [0, *itertools.accumulate(pi.parts)]


def block(A: MatrixTuple, pi: Composition, i: int, j: int, pi_cols: Composition | None = None):
    """The ``(i, j)`` block (1-based) of every matrix, as an ``(n, p_i, p_j)`` array."""
    rows = _offsets(pi)
    cols = _offsets(pi_cols or pi)
    return A.matrices[:, rows[i - 1] : rows[i], cols[j - 1] : cols[j]]


@dataclass(frozen=True)
class BlockTuple:
    tuple: MatrixTuple
    pi: Composition

    def __post_init__(self):
        if self.pi.total != self.tuple.p:
            raise ParameterError(f"composition of {self.pi.total} does not fit p={self.tuple.p}")

    def block(self, i: int, j: int) -> np.ndarray:
        return block(self.tuple, self.pi, i, j)

    def diagonal(self, i: int) -> MatrixTuple:
        return MatrixTuple(self.block(i, i))

    def is_upper_triangular(self, zero_tol: float = 1e-12) -> bool:
        k = self.pi.rank
        return all(
            np.max(np.abs(self.block(i, j)), initial=0.0) < zero_tol
            for i in range(1, k + 1)
            for j in range(1, i)
        )


def numerical_rank(M: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_tuple(n: int, p: int, seed: int) -> MatrixTuple:
    if n < 1 or p < 1:
        raise ParameterError(f"need n, p >= 1, got n={n}, p={p}")
    return MatrixTuple(_complex_normal(np.random.default_rng(seed), (n, p, p)))


def is_simple(A: MatrixTuple, tol: float = DEFAULT_TOL) -> bool:
    """Burnside test: words in the ``A_i`` (and the identity) span all of ``M_p``.

    The span is grown one word length at a time, ``W_L = W_{L-1} + sum_i A_i W_{L-1}``,
    stopping once it stabilises or after ``p²`` rounds.
    """
    p = A.p
    target = p * p
    if p == 1:
        return True
    scale = max(1.0, A.scale())
    # orthonormal rows spanning the vectorised words found so far
    basis = np.eye(p, dtype=np.complex128).reshape(1, -1) / np.sqrt(p)
    frontier = [np.eye(p, dtype=np.complex128)]
    for _ in range(target):
        new = []
        for W in frontier:
            for Ai in A:
                M = Ai @ W
                v = M.reshape(-1)
                r = v - basis.T @ (basis.conj() @ v)
                r = r - basis.T @ (basis.conj() @ r)
                rn = np.linalg.norm(r)
                if rn > tol * scale * max(1.0, np.linalg.norm(v)):
                    basis = np.vstack([basis, (r / rn)[None]])
                    new.append(M / np.linalg.norm(M))
                    if len(basis) == target:
                        return True
        if not new:
            break
        frontier = new
    return False


@dataclass(frozen=True)
class DMapMatrix:
    """Matrix of ``X ↦ (X B_i - B'_i X)_i`` on column-major ``vec(X)``."""

    matrix: np.ndarray
    p1: int
    p2: int
    n: int
    rank: int

    @property
    def hom_dim(self) -> int:
        return self.p1 * self.p2 - self.rank

    @property
    def ext_dim(self) -> int:
        return self.n * self.p1 * self.p2 - self.rank


def d_matrix(B: MatrixTuple, Bp: MatrixTuple, tol: float = DEFAULT_TOL) -> DMapMatrix:
    """``X`` is ``p₂ × p₁`` where ``p₁ = B.p`` and ``p₂ = Bp.p``.

    The kernel is ``Hom(B, Bp)``; the cokernel measures extensions.
    """
    if B.n != Bp.n:
        raise ParameterError(f"tuple lengths differ: {B.n} vs {Bp.n}")
    p1, p2 = B.p, Bp.p
    I1, I2 = np.eye(p1), np.eye(p2)
    # vec(X B) = (B^T ⊗ I) vec X ; vec(B' X) = (I ⊗ B') vec X
    rows = [np.kron(Bi.T, I2) - np.kron(I1, Bpi) for Bi, Bpi in zip(B, Bp)]
    M = np.vstack(rows)
    return DMapMatrix(M, p1, p2, B.n, numerical_rank(M, tol))


def _vec(C: np.ndarray) -> np.ndarray:
    # stacked column-major vec of each matrix, matching d_matrix row order
    C = np.asarray(C, dtype=np.complex128)
    return np.concatenate([Ci.reshape(-1, order="F") for Ci in C])


def extension_map(B11: MatrixTuple, B22: MatrixTuple, tol: float = DEFAULT_TOL) -> DMapMatrix:
    """d-map whose image is the trivial part of ``[[B11, C], [0, B22]]``.

    Conjugating by ``[[I, Y], [0, I]]`` changes ``C`` by ``Y B22 - B11 Y``,
    so this is ``d_matrix(B22, B11)`` acting on ``p₁ × p₂`` matrices ``Y``.
    """
    return d_matrix(B22, B11, tol)


def is_nontrivial_extension(B11, B22, C, tol: float = DEFAULT_TOL) -> bool:
    D = extension_map(B11, B22, tol)
    aug = np.column_stack([D.matrix, _vec(C)])
    return numerical_rank(aug, tol) == D.rank + 1


def rank_condition(B11: MatrixTuple, B22: MatrixTuple, C, Cp, tol: float = DEFAULT_TOL) -> bool:
    """Does some nontrivial ``(w, z, X)`` give ``w C + z C' = X B22 - B11 X``?

    Equivalent to the augmented matrix ``[D | vec C | vec C']`` having rank
    below ``rank(D) + 2``. For ``1 × 1`` blocks this is
    ``rk(a11 - a22, a12, a'12) < 3``.
    """
    C = np.asarray(C, dtype=np.complex128)
    Cp = np.asarray(Cp, dtype=np.complex128)
    shape = (B11.n, B11.p, B22.p)
    if B22.n != B11.n or C.shape != shape or Cp.shape != shape:
        raise ParameterError(f"expected C, C' of shape {shape}, got {C.shape}, {Cp.shape}")
    D = extension_map(B11, B22, tol)
    aug = np.column_stack([D.matrix, _vec(C), _vec(Cp)])
    return numerical_rank(aug, tol) < D.rank + 2


# trace words ----------------------------------------------------------------


def trace_word(A: MatrixTuple, word: Sequence[int]) -> complex:
    """``Tr(A_{w_1} A_{w_2} ... A_{w_r})`` with 1-based indices."""
    if len(word) == 0:
        raise ParameterError("word must be nonempty")
    if any(not 1 <= w <= A.n for w in word):
        raise ParameterError(f"word {tuple(word)} has indices outside 1..{A.n}")
    M = reduce(np.matmul, (A.matrices[w - 1] for w in word))
    return complex(np.trace(M))


def necklaces(n: int, L: int) -> list[tuple[int, ...]]:
    """One word per cyclic class, lengths ``1..L``: the lexicographically least rotation."""
    if L < 1:
        raise ParameterError(f"L must be >= 1, got {L}")
    if L * n**L > WORD_BUDGET:
        raise ParameterError(f"L·n^L = {L * n**L} exceeds the word budget {WORD_BUDGET}")
    out = []
    for length in range(1, L + 1):
        for w in itertools.product(range(1, n + 1), repeat=length):
            if all(w <= w[r:] + w[:r] for r in range(1, length)):
                out.append(w)
    return out


def fingerprint(A: MatrixTuple) -> np.ndarray:
    """Traces of all words of length <= 2."""
    return np.array([trace_word(A, w) for w in necklaces(A.n, 2)])


def trace_discrepancy(A: MatrixTuple, Ap: MatrixTuple, L: int = 6) -> float:
    """Largest trace-word difference over cyclic classes of length ``<= L``.

    Only a heuristic witness of equal orbit-closure invariants: no degree
    bound is claimed for ``L``.
    """
    if A.n != Ap.n or A.p != Ap.p:
        raise ParameterError("tuples must have the same n and p")
    return max(abs(trace_word(A, w) - trace_word(Ap, w)) for w in necklaces(A.n, L))


def trace_scale(A: MatrixTuple, L: int = 6) -> float:
    """``max(1, |Tr w|)`` over the same words, for relative comparisons."""
    return max([1.0] + [abs(trace_word(A, w)) for w in necklaces(A.n, L)])


# generic constructions ------------------------------------------------------


def _random_simple(rng, n: int, size: int, tol: float) -> MatrixTuple | None:
    B = MatrixTuple(_complex_normal(rng, (n, size, size)))
    return B if is_simple(B, tol) else None


def _distinct(blocks: list[MatrixTuple], fp_tol: float = 1e-6) -> bool:
    fps = [fingerprint(B) for B in blocks]
    for a, b in itertools.combinations(range(len(blocks)), 2):
        if blocks[a].p != blocks[b].p:
            continue
        if np.max(np.abs(fps[a] - fps[b])) <= fp_tol * max(1.0, np.max(np.abs(fps[a]))):
            return False
    return True


def _diagonal_blocks(rng, pi: Composition, n: int, tol: float) -> list[MatrixTuple] | None:
    blocks = []
    for size in pi.parts:
        B = _random_simple(rng, n, size, tol)
        if B is None:
            return None
        blocks.append(B)
    return blocks if _distinct(blocks) else None


def _assemble(rng, pi: Composition, n: int, diag: list[MatrixTuple]) -> np.ndarray:
    p = pi.total
    off = _offsets(pi)
    M = np.zeros((n, p, p), dtype=np.complex128)
    for i in range(pi.rank):
        M[:, off[i] : off[i + 1], off[i] : off[i + 1]] = diag[i].matrices
        for j in range(i + 1, pi.rank):
            M[:, off[i] : off[i + 1], off[j] : off[j + 1]] = _complex_normal(
                rng, (n, pi.parts[i], pi.parts[j])
            )
    return M


def is_max_general(A: BlockTuple, tol: float = DEFAULT_TOL) -> bool:
    """Simple, pairwise distinct diagonal blocks; nonsplit consecutive extensions."""
    k = A.pi.rank
    diag = [A.diagonal(i) for i in range(1, k + 1)]
    if not A.is_upper_triangular():
        return False
    if not all(is_simple(B, tol) for B in diag) or not _distinct(diag):
        return False
    return all(
        is_nontrivial_extension(diag[i - 1], diag[i], A.block(i, i + 1), tol)
        for i in range(1, k)
    )


def construct_max_general(pi, n: int, seed: int, tol: float = DEFAULT_TOL) -> BlockTuple:
    pi = pi if isinstance(pi, Composition) else Composition(pi)
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")
    rng = np.random.default_rng(seed)
    for _ in range(RETRY_BUDGET):
        diag = _diagonal_blocks(rng, pi, n, tol)
        if diag is None:
            continue
        A = BlockTuple(MatrixTuple(_assemble(rng, pi, n, diag)), pi)
        if is_max_general(A, tol):
            return A
    raise ResamplingError(f"maximally general tuple for {pi.parts}", seed, RETRY_BUDGET)


def target_composition(pi: Composition, sigma: Permutation) -> Composition:
    """Block sizes of ``A'``: position ``σ(i)`` has size ``p_i``."""
    return apply_sigma(sigma.inverse(), pi)


def supermaximal_positions(pi: Composition, sigma: Permutation, n: int) -> list[int]:
    """Positions ``l`` with ``σ(l+1) = σ(l) + 1`` whose pair must fail the rank test."""
    img = sigma.images
    return [
        l
        for l in range(1, pi.rank)
        if img[l] == img[l - 1] + 1 and not (n == 2 and pi[l - 1] == 1 and pi[l] == 1)
    ]


def is_supermax_general(
    A: BlockTuple, Ap: BlockTuple, sigma: Permutation, tol: float = DEFAULT_TOL
) -> bool:
    if not (is_max_general(A, tol) and is_max_general(Ap, tol)):
        return False
    for l in supermaximal_positions(A.pi, sigma, A.tuple.n):
        m = sigma(l)
        if rank_condition(A.diagonal(l), A.diagonal(l + 1), A.block(l, l + 1), Ap.block(m, m + 1), tol):
            return False
    return True


def construct_pair(
    pi,
    sigma,
    n: int,
    seed: int,
    supermaximal: bool = False,
    tol: float = DEFAULT_TOL,
) -> tuple[BlockTuple, BlockTuple]:
    """A pair in ``C_{π,σ}``: diagonal block ``i`` of ``A`` sits at position ``σ(i)`` of ``A'``."""
    pi = pi if isinstance(pi, Composition) else Composition(pi)
    sigma = sigma if isinstance(sigma, Permutation) else Permutation(sigma)
    if len(sigma) != pi.rank:
        raise ParameterError(f"|sigma|={len(sigma)} but rank(pi)={pi.rank}")
    if n < 1:
        raise ParameterError(f"need n >= 1, got {n}")
    target = target_composition(pi, sigma)
    inv = sigma.inverse()
    rng = np.random.default_rng(seed)
    for _ in range(RETRY_BUDGET):
        diag = _diagonal_blocks(rng, pi, n, tol)
        if diag is None:
            continue
        A = BlockTuple(MatrixTuple(_assemble(rng, pi, n, diag)), pi)
        if pi.rank == 1:
            return A, A
        Ap = BlockTuple(
            MatrixTuple(_assemble(rng, target, n, [diag[inv(j) - 1] for j in range(1, pi.rank + 1)])),
            target,
        )
        if not supermaximal or is_supermax_general(A, Ap, sigma, tol):
            return A, Ap
    raise ResamplingError(f"pair for ({pi.parts}, {list(sigma.images)})", seed, RETRY_BUDGET)


def scramble_matrix(pi, sigma) -> np.ndarray:
    """0/1 matrix with ``I_{p_i}`` in block row ``i``, block column ``σ(i)``.

    Rows are cut by ``π`` and columns by the block sizes of ``A'``.
    """
    pi = pi if isinstance(pi, Composition) else Composition(pi)
    sigma = sigma if isinstance(sigma, Permutation) else Permutation(sigma)
    if len(sigma) != pi.rank:
        raise ParameterError(f"|sigma|={len(sigma)} but rank(pi)={pi.rank}")
    rows = _offsets(pi)
    cols = _offsets(target_composition(pi, sigma))
    S = np.zeros((pi.total, pi.total))
    for i in range(1, pi.rank + 1):
        j = sigma(i)
        S[rows[i - 1] : rows[i], cols[j - 1] : cols[j]] = np.eye(pi[i - 1])
    return S


# degeneration ---------------------------------------------------------------

_SWAP = Permutation([2, 1])


def _check_swapped(A: BlockTuple, Ap: BlockTuple, tol: float):
    if A.pi.rank != 2:
        raise ParameterError("degeneration needs a two-block composition")
    if Ap.pi != target_composition(A.pi, _SWAP):
        raise ParameterError(f"A' must be cut as {A.pi.parts[::-1]}, got {Ap.pi.parts}")
    if not (A.is_upper_triangular() and Ap.is_upper_triangular()):
        raise ParameterError("both tuples must be block upper triangular")
    scale = max(1.0, A.tuple.scale())
    if (
        np.max(np.abs(A.block(1, 1) - Ap.block(2, 2))) > tol * scale
        or np.max(np.abs(A.block(2, 2) - Ap.block(1, 1))) > tol * scale
    ):
        raise ParameterError("diagonal blocks of A and A' are not swapped copies")


def degenerate_tuple(A: BlockTuple, Ap: BlockTuple, t: float) -> MatrixTuple:
    """``A(t)``: ``A`` with ``t·B'_{12}`` written into its lower-left block."""
    M = np.array(A.tuple.matrices)
    p1 = A.pi[0]
    M[:, p1:, :p1] = t * Ap.block(1, 2)
    return MatrixTuple(M)


def degeneration_check(
    A: BlockTuple, Ap: BlockTuple, t_values: Sequence[float], tol: float = DEFAULT_TOL
) -> list[float]:
    """Residuals ``‖g(t)·A(t) - s·A'‖_F`` with ``g(t) = t I ⊕ I``; they vanish linearly in ``t``."""
    _check_swapped(A, Ap, tol)
    p1, p2 = A.pi.parts
    S = scramble_matrix(A.pi, _SWAP)
    limit = Ap.tuple.conjugate_by(S).matrices
    out = []
    for t in t_values:
        if t <= 0:
            raise ParameterError(f"t must be positive, got {t}")
        g = np.diag(np.concatenate([np.full(p1, t), np.ones(p2)]))
        At = degenerate_tuple(A, Ap, t).conjugate_by(g)
        out.append(float(np.linalg.norm(At.matrices - limit)))
    return out
