"""Property suites behind ``sepvar verify``.

Each check yields a :class:`CheckRecord`. A check passes when its failure
count is at most ``params["max_failures"]`` (zero unless stated). Floats are
rounded to 12 significant digits so reports are byte-stable.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import matrixlab as ml
from .combinatorics import (
    Composition,
    apply_sigma,
    enumerate_compositions,
    enumerate_permutations,
    hertzsprung,
    t_count,
)
from .figures import FIGURES, LISTED_MAXIMAL, compare, listed_maximal_ok
from .poset import (
    PosetElement,
    Regime,
    build_poset,
    compatibility_check,
    component_report,
    is_maximal_by_criterion,
    leq,
    maximal_elements,
)


def round_sig(x: float, digits: int = 12) -> float:
    if x == 0 or not math.isfinite(x):
        return float(x)
    return float(f"{x:.{digits}g}")


@dataclass
class CheckRecord:
    check: str
    params: dict
    seed: int | None
    trials: int
    failures: int
    max_residual: float | None = None
    notes: list[str] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.failures <= self.params.get("max_failures", 0)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "params": self.params,
            "seed": self.seed,
            "trials": self.trials,
            "failures": self.failures,
            "max_residual": None if self.max_residual is None else round_sig(self.max_residual),
        }


def records_to_json(records: Iterable[CheckRecord]) -> str:
    return json.dumps([r.to_dict() for r in records], indent=2) + "\n"


def _tally(check: str, params: dict, outcomes: Iterable[bool], seed=None) -> CheckRecord:
    outcomes = list(outcomes)
    return CheckRecord(check, params, seed, len(outcomes), outcomes.count(False))


# poset suite ----------------------------------------------------------------


def _graded(poset) -> bool:
    return all(parent.rank + 1 == child.rank for parent, child in poset.edges())


def _order_axioms(poset) -> bool:
    # reflexive by definition of leq; acyclic closure gives antisymmetry;
    # transitivity: ancestors of ancestors are ancestors
    for i, bits in enumerate(poset.ancestors):
        if bits >> i & 1:
            return False
        for j in range(len(poset)):
            if bits >> j & 1 and poset.ancestors[j] & ~bits:
                return False
    return True


def _swap_symmetric(poset) -> bool:
    def swap(e: PosetElement) -> PosetElement:
        inv = e.sigma.inverse()
        return PosetElement(apply_sigma(inv, e.pi), inv)

    edges = set(poset.edges())
    return {(swap(a), swap(b)) for a, b in edges} == edges


def _maximal_counts_match(p: int) -> bool:
    poset = build_poset(p, Regime.THREE_OR_MORE)
    by_rank = [0] * (p + 1)
    for e in maximal_elements(poset):
        by_rank[e.rank] += 1
    return all(by_rank[k] == math.comb(p - 1, k - 1) * t_count(k) for k in range(1, p + 1))


def _bottom_maximal_is_hertzsprung(p: int) -> bool:
    poset = build_poset(p, Regime.TWO_MATRICES)
    return sum(1 for e in maximal_elements(poset) if e.rank == p) == hertzsprung(p)


def _compat_agrees(poset, pairs) -> bool:
    return all(compatibility_check(a, b, poset.regime) == leq(a, b, poset) for a, b in pairs)


def compatibility_pairs(poset, sample: int | None = None, seed: int = 0):
    """All ordered pairs, or a seeded sample mixing related and random pairs."""
    els = poset.elements
    if sample is None:
        return itertools.product(els, els)
    rng = random.Random(seed)
    pairs = []
    for _ in range(sample):
        a = rng.choice(els)
        up = poset.up_set(a)
        b = rng.choice(up) if up and rng.random() < 0.5 else rng.choice(els)
        pairs.append((a, b))
    return pairs


def poset_suite(max_p: int, sample_p5: int = 400, seed: int = 0) -> list[CheckRecord]:
    records = []
    ps = range(1, max_p + 1)
    regimes = list(Regime)
    posets = {(p, r): build_poset(p, r) for p in ps for r in regimes}

    def per_poset(name: str, fn: Callable) -> None:
        records.append(
            _tally(name, {"max_p": max_p}, (fn(P) for P in posets.values()))
        )

    per_poset("graded", _graded)
    per_poset("order_axioms", _order_axioms)
    per_poset("swap_symmetry", _swap_symmetric)
    records.append(
        _tally(
            "maximality_criterion",
            {"max_p": max_p},
            (
                (not P.parents[P.index[e]]) == is_maximal_by_criterion(e, P.regime)
                for P in posets.values()
                for e in P.elements
            ),
        )
    )
    records.append(
        _tally(
            "maximal_count_formula",
            {"max_p": max_p, "regime": Regime.THREE_OR_MORE.value},
            (_maximal_counts_match(p) for p in ps),
        )
    )
    records.append(
        _tally(
            "bottom_maximal_hertzsprung",
            {"max_p": max_p, "regime": Regime.TWO_MATRICES.value},
            (_bottom_maximal_is_hertzsprung(p) for p in ps),
        )
    )
    records.append(
        _tally(
            "component_dims",
            {"max_p": max_p},
            (
                component_report(p, n).total_dim == (n + 1) * p * p - 1
                for p in ps
                if p >= 2
                for n in (2, 3)
            ),
        )
    )
    records.append(
        _tally(
            "compatibility_exhaustive",
            {"max_p": min(max_p, 4)},
            (
                _compat_agrees(P, compatibility_pairs(P))
                for (p, _), P in posets.items()
                if p <= 4
            ),
        )
    )
    if max_p >= 5:
        records.append(
            _tally(
                "compatibility_sampled",
                {"p": 5, "pairs": sample_p5},
                (
                    _compat_agrees(P, compatibility_pairs(P, sample_p5, seed))
                    for (p, _), P in posets.items()
                    if p == 5
                ),
                seed=seed,
            )
        )
    figs = [f for f in FIGURES.values() if f.p <= max_p]
    records.append(
        _tally("figure_fixtures", {"figures": [f.name for f in figs]}, (compare(f).ok for f in figs))
    )
    listed = [name for name in LISTED_MAXIMAL if FIGURES[name].p <= max_p]
    records.append(
        _tally("listed_maximal", {"figures": listed}, (listed_maximal_ok(n) for n in listed))
    )
    return records


# numeric suite --------------------------------------------------------------


def _seeds(seed: int, trials: int) -> list[int]:
    return [seed + i for i in range(trials)]


def _scalar_blocks(rng, n: int):
    z = lambda: rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return [ml.MatrixTuple(v.reshape(n, 1, 1)) for v in (z(), z())], z(), z()


def check_schur(p: int, n: int, trials: int, seed: int, tol: float) -> CheckRecord:
    outcomes = []
    for s in _seeds(seed, trials):
        B = ml.random_tuple(n, p, s)
        C = ml.random_tuple(n, p, s + 10**6)
        d_same, d_other = ml.d_matrix(B, B, tol), ml.d_matrix(B, C, tol)
        outcomes.append(ml.is_simple(B, tol) and d_same.hom_dim == 1 and d_other.hom_dim == 0)
    return _tally("schur_hom_dims", {"p": p, "n": n, "tol": tol}, outcomes, seed)


def check_rank_nullity(p: int, n: int, trials: int, seed: int, tol: float) -> CheckRecord:
    outcomes = []
    rng = np.random.default_rng(seed)
    for s in _seeds(seed, trials):
        p1, p2 = int(rng.integers(1, p + 1)), int(rng.integers(1, p + 1))
        D = ml.d_matrix(ml.random_tuple(n, p1, s), ml.random_tuple(n, p2, s + 1), tol)
        outcomes.append(
            D.ext_dim + D.rank == n * p1 * p2 and D.ext_dim - D.hom_dim == (n - 1) * p1 * p2
        )
    return _tally("rank_nullity", {"p": p, "n": n, "tol": tol}, outcomes, seed)


def check_simple_conjugation(p: int, n: int, trials: int, seed: int, tol: float) -> CheckRecord:
    outcomes = []
    for s in _seeds(seed, trials):
        rng = np.random.default_rng(s)
        if s % 2:
            A = ml.random_tuple(n, p, s)
        else:
            # reducible: block upper triangular with a 1-dimensional corner
            M = np.array(ml.random_tuple(n, p, s).matrices)
            M[:, 1:, 0] = 0
            A = ml.MatrixTuple(M)
        g = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
        outcomes.append(ml.is_simple(A, tol) == ml.is_simple(A.conjugate_by(g), tol))
    return _tally("simple_conjugation_invariant", {"p": p, "n": n, "tol": tol}, outcomes, seed)


def check_rank_condition_vacuous(trials: int, seed: int, tol: float) -> CheckRecord:
    rng = np.random.default_rng(seed)
    outcomes = []
    for _ in range(trials):
        (b1, b2), c, cp = _scalar_blocks(rng, 2)
        outcomes.append(ml.rank_condition(b1, b2, c.reshape(2, 1, 1), cp.reshape(2, 1, 1), tol))
    return _tally("rank_condition_n2_scalar_true", {"n": 2, "tol": tol}, outcomes, seed)


def check_rank_condition_random(trials: int, seed: int, tol: float) -> CheckRecord:
    rng = np.random.default_rng(seed)
    outcomes = []
    for _ in range(trials):
        (b1, b2), c, cp = _scalar_blocks(rng, 3)
        outcomes.append(not ml.rank_condition(b1, b2, c.reshape(3, 1, 1), cp.reshape(3, 1, 1), tol))
    params = {"n": 3, "tol": tol, "max_failures": trials // 100}
    return _tally("rank_condition_n3_scalar_false", params, outcomes, seed)


def check_rank_condition_dependent(p: int, n: int, trials: int, seed: int, tol: float) -> CheckRecord:
    """``C' = w C + (X B22 - B11 X)`` always satisfies the rank condition."""
    outcomes = []
    for s in _seeds(seed, trials):
        rng = np.random.default_rng(s)
        p1, p2 = int(rng.integers(1, p + 1)), int(rng.integers(1, p + 1))
        B11, B22 = ml.random_tuple(n, p1, s), ml.random_tuple(n, p2, s + 1)
        C = rng.standard_normal((n, p1, p2)) + 1j * rng.standard_normal((n, p1, p2))
        X = rng.standard_normal((p1, p2)) + 1j * rng.standard_normal((p1, p2))
        w = complex(rng.standard_normal(), rng.standard_normal())
        Cp = w * C + (X @ B22.matrices - B11.matrices @ X)
        outcomes.append(ml.rank_condition(B11, B22, C, Cp, tol))
    return _tally("rank_condition_dependent_true", {"p": p, "n": n, "tol": tol}, outcomes, seed)


def pair_cases(max_p: int, count: int, seed: int) -> list[tuple[Composition, tuple[int, ...]]]:
    """Seeded ``(π, σ)`` cases with ``|π| <= max_p``, cycling through all of them."""
    pool = [
        (pi, sigma.images)
        for p in range(2, max_p + 1)
        for k in range(1, p + 1)
        for pi in enumerate_compositions(p, k)
        for sigma in enumerate_permutations(k)
    ]
    rng = random.Random(seed)
    rng.shuffle(pool)
    return [pool[i % len(pool)] for i in range(count)]


def check_pair_traces(max_p: int, n: int, cases: int, seed: int, tol: float, L: int) -> CheckRecord:
    worst = 0.0
    outcomes = []
    for i, (pi, sigma) in enumerate(pair_cases(max_p, cases, seed)):
        A, Ap = ml.construct_pair(pi, sigma, n, seed + i, tol=tol)
        rel = ml.trace_discrepancy(A.tuple, Ap.tuple, L) / ml.trace_scale(A.tuple, L)
        worst = max(worst, rel)
        outcomes.append(rel < tol)
    rec = _tally(
        "pair_trace_agreement",
        {"max_p": max_p, "n": n, "L": L, "tol": tol, "heuristic_word_bound": True},
        outcomes,
        seed,
    )
    rec.max_residual = worst
    return rec


def check_independent_traces(trials: int, seed: int) -> CheckRecord:
    outcomes = [
        ml.trace_discrepancy(ml.random_tuple(2, 2, s), ml.random_tuple(2, 2, s + 10**6), 2) > 0.1
        for s in _seeds(seed, trials)
    ]
    params = {"p": 2, "n": 2, "L": 2, "threshold": 0.1, "max_failures": trials // 100}
    return _tally("independent_trace_separation", params, outcomes, seed)


T_VALUES = tuple(10.0 ** -k for k in range(1, 7))


def check_degeneration(max_p: int, n: int, cases: int, seed: int, tol: float) -> CheckRecord:
    outcomes = []
    worst = 0.0
    splits = [(a, p - a) for p in range(2, max_p + 1) for a in range(1, p)]
    for i in range(cases):
        pi = splits[i % len(splits)]
        A, Ap = ml.construct_pair(pi, (2, 1), n, seed + i, tol=tol)
        ratios = [r / t for r, t in zip(ml.degeneration_check(A, Ap, T_VALUES, tol), T_VALUES)]
        spread = max(ratios) / min(ratios) if min(ratios) > 0 else math.inf
        worst = max(worst, spread)
        outcomes.append(spread <= 10)
    rec = _tally(
        "degeneration_linear_in_t",
        {"max_p": max_p, "n": n, "t": [round_sig(t) for t in T_VALUES], "max_ratio_spread": 10},
        outcomes,
        seed,
    )
    rec.max_residual = worst
    return rec


def numeric_suite(
    p: int = 4,
    n: int = 3,
    trials: int = 100,
    seed: int = 0,
    tol: float = ml.DEFAULT_TOL,
    max_word_len: int = 6,
    pair_count: int = 50,
    degeneration_cases: int = 20,
) -> list[CheckRecord]:
    simple_trials = min(trials, 100)
    return [
        check_schur(p, n, simple_trials, seed, tol),
        check_rank_nullity(p, n, trials, seed, tol),
        check_simple_conjugation(p, n, simple_trials, seed, tol),
        check_rank_condition_vacuous(trials, seed, tol),
        check_rank_condition_random(trials, seed, tol),
        check_rank_condition_dependent(p, n, trials, seed, tol),
        check_pair_traces(p, n, pair_count, seed, tol, max_word_len),
        check_independent_traces(trials, seed),
        check_degeneration(p, n, degeneration_cases, seed, tol),
    ]
