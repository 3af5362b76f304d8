"""Reference implementations used for validation: exhaustive search and Huffman.

These are deliberately simple and independent of the level-sweep solver so
they can serve as its oracle in tests.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .codes import LengthSet, LengthVector, is_feasible
from .distributions import Pmf
from .errors import InfeasibleError, TooLargeError
from .solver import IDENTITY_COST, CostFunction

EXHAUSTIVE_LIMIT = 16
TIE_TOL = 1e-12


@dataclass(frozen=True)
class OracleResult:
    """Everything the exhaustive search found: the optimum and all ties."""

    best_cost: float
    optimal_vectors: tuple[LengthVector, ...]
    count_enumerated: int


def feasible_length_vectors(n: int, ls: LengthSet) -> list[tuple[int, ...]]:
    """All nondecreasing length vectors over `ls` with Kraft sum <= 1.

    Depth-first over per-length multiplicities with an exact integer Kraft
    bound: a branch dies as soon as even the deepest allowed length cannot
    fit the remaining symbols.  Vectors come out in lexicographic order.
    """
    if n > EXHAUSTIVE_LIMIT:
        raise TooLargeError(f"exhaustive search is capped at n = {EXHAUSTIVE_LIMIT}")
    if not is_feasible(ls, n):
        raise InfeasibleError(f"allowed lengths {ls.values} cannot code {n} symbols")
    levels = ls.values
    deepest = levels[-1]
    budget = 1 << deepest  # Kraft sums scaled by 2**deepest stay integral
    units = [1 << (deepest - lam) for lam in levels]
    out: list[tuple[int, ...]] = []

    def extend(j: int, remaining: int, kraft: int, counts: list[int]) -> None:
        if kraft + remaining * units[-1] > budget:
            return
        if j == len(levels) - 1:
            counts.append(remaining)
            out.append(tuple(counts))
            counts.pop()
            return
        cap = min(remaining, (budget - kraft) // units[j])
        for c in range(cap + 1):
            counts.append(c)
            extend(j + 1, remaining - c, kraft + c * units[j], counts)
            counts.pop()

    extend(0, n, 0, [])
    vectors = []
    for counts in out:
        vec: list[int] = []
        for lam, c in zip(levels, counts):
            vec.extend([lam] * c)
        vectors.append(tuple(vec))
    return vectors


def brute_force(
    pmf: Pmf, ls: LengthSet, cost: CostFunction = IDENTITY_COST
) -> OracleResult:
    """Evaluate every feasible length vector and keep all cost minimizers."""
    vectors = feasible_length_vectors(pmf.n, ls)
    scored: list[tuple[float, tuple[int, ...]]] = []
    for vec in vectors:
        total = 0.0
        for p, l in zip(pmf.probs, vec):
            total += p * cost.phi(float(l))
        scored.append((float(cost.phi_inverse(total)), vec))
    best = min(c for c, _ in scored)
    optima = tuple(
        LengthVector(vec) for c, vec in scored if c <= best + TIE_TOL
    )
    return OracleResult(
        best_cost=best, optimal_vectors=optima, count_enumerated=len(vectors)
    )


def huffman(pmf: Pmf) -> LengthVector:
    """Classic two-least-merge construction; ties go to the lowest node index.

    Returns the nondecreasing length multiset; its Kraft sum is exactly 1.
    """
    n = pmf.n
    heap: list[tuple[float, int]] = [(p, i) for i, p in enumerate(pmf.probs)]
    heapq.heapify(heap)
    children: dict[int, tuple[int, int]] = {}
    nxt = n
    while len(heap) > 1:
        w1, a = heapq.heappop(heap)
        w2, b = heapq.heappop(heap)
        children[nxt] = (a, b)
        heapq.heappush(heap, (w1 + w2, nxt))
        nxt += 1
    root = heap[0][1]
    depths = [0] * n
    stack = [(root, 0)]
    while stack:
        node, depth = stack.pop()
        if node < n:
            depths[node] = depth
        else:
            a, b = children[node]
            stack.append((a, depth + 1))
            stack.append((b, depth + 1))
    return LengthVector(tuple(sorted(depths)))
