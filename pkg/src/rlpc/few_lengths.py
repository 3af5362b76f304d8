"""Best codes restricted to at most g distinct codeword lengths.

The distinct lengths themselves are free, so the search enumerates a bounded
family of candidate length sets and runs the reserved solver on each.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import LengthSet
from .distributions import Pmf
from .errors import BadParameterError, EmptyOrSingletonError
from .solver import IDENTITY_COST, CostFunction, Solution, dyadic_str, solve_reserved


@dataclass(frozen=True)
class GBest:
    """The winner for one distinct-length budget."""

    distinct: int
    length_set: LengthSet
    solution: Solution
    cost: float


@dataclass(frozen=True)
class GSearchReport:
    """Winners for every budget up to g, plus how many sets were evaluated."""

    g: int
    best_per_g: tuple[GBest, ...]
    candidates_tried: int


def candidate_sets(n: int, g: int) -> list[LengthSet]:
    """Length sets of size exactly g that can contain an optimal g-length code.

    With L = ceil(log2 n): a single length must be L itself; for two lengths
    the first is at most L - 1 and the second at most 2L - 1; for more
    lengths the first is at most L - 1 and consecutive gaps are at most L
    (a larger gap would leave enough room on the earlier level to shorten a
    codeword).  Sets whose deepest length cannot host n leaves are dropped.
    Output is in lexicographic order.
    """
    if g < 1:
        raise BadParameterError(f"need g >= 1, got {g}")
    if n < 2:
        raise EmptyOrSingletonError(f"need n >= 2, got {n}")
    ceil_log = (n - 1).bit_length()
    if g == 1:
        return [LengthSet((ceil_log,))]
    out: list[LengthSet] = []
    if g == 2:
        for first in range(1, ceil_log):
            for second in range(first + 1, 2 * ceil_log):
                if (1 << second) >= n:
                    out.append(LengthSet((first, second)))
        return out

    def grow(prefix: list[int]) -> None:
        if len(prefix) == g:
            if (1 << prefix[-1]) >= n:
                out.append(LengthSet(tuple(prefix)))
            return
        for gap in range(1, ceil_log + 1):
            prefix.append(prefix[-1] + gap)
            grow(prefix)
            prefix.pop()

    for first in range(1, ceil_log):
        grow([first])
    return out


def solve_g_lengths(pmf: Pmf, g: int, cost: CostFunction = IDENTITY_COST) -> GSearchReport:
    """Solve every budget g' <= g and report each winner.

    Ties on cost go to the lexicographically smallest length set.  For tiny
    alphabets a budget may have no candidate set of exactly its size (there
    is nothing below L to use as a first length); the previous winner then
    carries forward, which keeps the reported costs nonincreasing.
    """
    if g < 1:
        raise BadParameterError(f"need g >= 1, got {g}")
    rows: list[GBest] = []
    tried = 0
    for budget in range(1, g + 1):
        sets = candidate_sets(pmf.n, budget)
        tried += len(sets)
        best: tuple[float, tuple[int, ...], LengthSet, Solution] | None = None
        for ls in sets:
            sol = solve_reserved(pmf, ls, cost)
            key = (sol.cost, ls.values)
            if best is None or key < best[:2]:
                best = (sol.cost, ls.values, ls, sol)
        if best is None:
            prev = rows[-1]
            rows.append(
                GBest(
                    distinct=budget,
                    length_set=prev.length_set,
                    solution=prev.solution,
                    cost=prev.cost,
                )
            )
        else:
            rows.append(
                GBest(distinct=budget, length_set=best[2], solution=best[3], cost=best[0])
            )
    return GSearchReport(g=g, best_per_g=tuple(rows), candidates_tried=tried)


def report_to_json_list(report: GSearchReport) -> list[dict]:
    return [
        {
            "g": row.distinct,
            "length_set": list(row.length_set.values),
            "lengths": list(row.solution.lengths.lengths),
            "cost": row.cost,
            "kraft": dyadic_str(row.solution.kraft),
        }
        for row in report.best_per_g
    ]
