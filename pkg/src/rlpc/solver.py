"""Optimal prefix codes over an allowed set of codeword lengths.

The solver sweeps the code tree level by level (one level per allowed
length).  A partial tree is summarized by how many symbols already have
codewords (`used`) and how many internal nodes sit on the current level
(`internal`); the accumulated cost charges every still-open symbol for the
depth covered so far.  Finished trees are tracked separately, and the best
one is rebuilt by backtracking.  Replacing the per-level depth increment
with the increment of a strictly increasing cost function solves the
quasiarithmetic variants with the same machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .codes import (
    Codebook,
    LengthSet,
    LengthVector,
    assign_canonical,
    is_feasible,
    kraft_sum,
    truncate_length_set,
)
from .distributions import Pmf, cdf
from .errors import (
    BadParameterError,
    CorruptGridError,
    InfeasibleError,
    NotIncreasingError,
)

COST_ROUNDTRIP_TOL = 1e-9


@dataclass(frozen=True)
class CostFunction:
    """A strictly increasing map applied to codeword lengths.

    The objective becomes phi_inverse(sum_i p_i * phi(l_i)); the identity
    map recovers expected codeword length.
    """

    name: str
    phi: Callable[[float], float]
    phi_inverse: Callable[[float], float]
    params: tuple = ()


def _identity() -> CostFunction:
    return CostFunction(name="identity", phi=float, phi_inverse=float)


IDENTITY_COST = _identity()


def make_cost_function(kind: str, t: float | None = None, table=None) -> CostFunction:
    """Build a validated cost function.

    Kinds: ``identity``; ``exponential`` (phi(l) = 2**(t*l), requires t > 0;
    ``exp`` is accepted as an alias); ``table`` (explicit values for integer
    lengths 1..len(table), zero at length 0).
    """
    if kind == "identity":
        return IDENTITY_COST
    if kind in ("exponential", "exp"):
        if t is None or not (float(t) > 0.0) or math.isinf(float(t)):
            raise BadParameterError(f"exponential cost needs t > 0, got {t!r}")
        tv = float(t)
        return CostFunction(
            name="exponential",
            phi=lambda l: 2.0 ** (tv * l),
            phi_inverse=lambda y: math.log2(y) / tv,
            params=(tv,),
        )
    if kind == "table":
        if not table:
            raise BadParameterError("table cost needs a nonempty value list")
        values = tuple(float(v) for v in table)
        prev = 0.0  # phi(0) is pinned to 0, so the first entry must be positive
        for i, v in enumerate(values, start=1):
            if not v > prev:
                raise NotIncreasingError(
                    f"table value {v!r} at length {i} does not increase past {prev!r}"
                )
            prev = v
        knots_x = np.arange(len(values) + 1, dtype=float)
        knots_y = np.concatenate(([0.0], values))

        def phi(l: float, _values=values) -> float:
            li = int(l)
            if li != l or not 0 <= li <= len(_values):
                raise BadParameterError(
                    f"table cost is defined on integer lengths 0..{len(_values)}, got {l!r}"
                )
            return 0.0 if li == 0 else _values[li - 1]

        def phi_inverse(y: float, _x=knots_x, _y=knots_y) -> float:
            return float(np.interp(y, _y, _x))

        return CostFunction(name="table", phi=phi, phi_inverse=phi_inverse, params=values)
    raise BadParameterError(f"unknown cost function kind {kind!r}")


def _check_cost_on_levels(cost: CostFunction, levels: tuple[int, ...]) -> None:
    """Spot-check monotonicity and inverse consistency on the lengths in use."""
    points = (0,) + levels
    prev = -math.inf
    for lam in points:
        try:
            val = float(cost.phi(float(lam)))
        except BadParameterError:
            raise
        except Exception as exc:
            raise BadParameterError(f"cost function failed at length {lam}: {exc}") from exc
        if not math.isfinite(val):
            raise BadParameterError(f"cost function is not finite at length {lam}")
        if not val > prev:
            raise NotIncreasingError(
                f"cost function is not strictly increasing at length {lam}"
            )
        prev = val
    for lam in levels:
        back = float(cost.phi_inverse(float(cost.phi(float(lam)))))
        if abs(back - lam) > COST_ROUNDTRIP_TOL:
            raise BadParameterError(
                f"cost inverse round trip at length {lam} gave {back!r}"
            )


def code_cost(pmf: Pmf, lv: LengthVector, cost: CostFunction = IDENTITY_COST) -> float:
    """Objective value of a length vector: phi_inverse of the accumulated sum.

    Accumulation is left to right in double precision; with the identity
    cost this is exactly the expected codeword length.
    """
    total = 0.0
    for p, l in zip(pmf.probs, lv.lengths):
        total += p * cost.phi(float(l))
    return float(cost.phi_inverse(total))


@dataclass(frozen=True)
class DpState:
    """One partial-tree summary: level index (1-based), used leaves, internal nodes."""

    level: int
    used: int
    internal: int


@dataclass(frozen=True)
class BestTree:
    """Record of the cheapest finished tree seen during the sweep."""

    cost: float
    level: int  # 1-based index of the finishing depth in the allowed lengths
    leftover_internal: int  # internal nodes left unused on the finishing level
    leaves_above: int  # symbols terminated strictly above the finishing level


@dataclass
class CostGrid:
    """DP tables: per-level costs, backtracking predecessors, and the best finish.

    `costs[m, u, e]` is the cheapest partial cost at level index m with u
    used leaves and e internal nodes (inf = unreachable); `predecessors`
    stores the used-leaf count of the chosen parent state, -1 when unset.
    `costs` is None when the sweep was run with the rolling-window option.
    """

    n: int
    levels: tuple[int, ...]
    costs: np.ndarray | None
    predecessors: np.ndarray
    best: BestTree

    def finite_states(self) -> Iterator[tuple[DpState, float, int]]:
        """Yield (state, cost, predecessor-used) for every reachable entry."""
        if self.costs is None:
            raise BadParameterError("grid was built without stored cost levels")
        for m in range(self.costs.shape[0]):
            level = self.costs[m]
            for u, e in zip(*np.nonzero(np.isfinite(level))):
                yield (
                    DpState(level=m, used=int(u), internal=int(e)),
                    float(level[u, e]),
                    int(self.predecessors[m, u, e]),
                )


def dp_grids(
    pmf: Pmf,
    ls: LengthSet,
    cost: CostFunction = IDENTITY_COST,
    keep_cost_levels: bool = True,
) -> CostGrid:
    """Run the level sweep and return the filled DP tables.

    `ls` should already be truncated (see `truncate_length_set`); untruncated
    feasible sets still give correct answers, just with wasted levels.  With
    `keep_cost_levels=False` only the two most recent cost levels are held in
    memory; backtracking needs just the predecessor table, so solutions are
    unaffected.
    """
    n = pmf.n
    if not is_feasible(ls, n):
        raise InfeasibleError(
            f"allowed lengths {ls.values} cannot code {n} symbols"
        )
    levels = ls.values
    num_levels = len(levels)
    _check_cost_on_levels(cost, levels)
    half = n // 2
    cum = np.asarray(cdf(pmf).values)

    prev = np.full((n - 1, half + 1), np.inf)
    prev[0, 1] = 0.0
    preds = np.full((num_levels + 1, n - 1, half + 1), -1, dtype=np.int32)
    costs = None
    if keep_cost_levels:
        costs = np.full((num_levels + 1, n - 1, half + 1), np.inf)
        costs[0] = prev

    best: BestTree | None = None
    best_cost = math.inf
    depth_prev = 0
    phi_prev = float(cost.phi(0.0))
    for m in range(1, num_levels + 1):
        depth = levels[m - 1]
        gap = depth - depth_prev
        phi_here = float(cost.phi(float(depth)))
        weight = phi_here - phi_prev
        cur = np.full((n - 1, half + 1), np.inf)

        used, internal = np.nonzero(np.isfinite(prev))  # row-major: scan order
        if used.size:
            base = prev[used, internal] + weight * (1.0 - cum[used])
            # The per-state node budget s = used + internal << gap decides
            # everything below; clamp the shift so int64 never overflows
            # (any clamped state is already past the finished threshold).
            mult = 1 << gap
            mult_c = mult if mult <= 2 * n else 2 * n
            budget = used.astype(np.int64) + internal.astype(np.int64) * mult_c

            finished = budget >= n
            if finished.any():
                fin_costs = base[finished]
                k = int(np.argmin(fin_costs))  # first minimum in scan order
                if fin_costs[k] < best_cost:
                    u0 = int(used[finished][k])
                    e0 = int(internal[finished][k])
                    best_cost = float(fin_costs[k])
                    best = BestTree(
                        cost=best_cost,
                        level=m,
                        leftover_internal=(e0 << gap) - n + u0,
                        leaves_above=u0,
                    )

            if m < num_levels and not finished.all():
                part = ~finished
                s_p = budget[part]
                u_p = used[part]
                b_p = base[part]
                order = np.argsort(s_p, kind="stable")
                s_s = s_p[order]
                u_s = u_p[order]
                b_s = b_p[order]
                group_edges = np.flatnonzero(
                    np.r_[True, s_s[1:] != s_s[:-1], True]
                )
                for gi in range(len(group_edges) - 1):
                    a, b = group_edges[gi], group_edges[gi + 1]
                    s_val = int(s_s[a])
                    cand_used = u_s[a:b]
                    cand_cost = b_s[a:b]
                    lo = max(int(cand_used[0]), 2 * s_val - n, 0)
                    hi = min(s_val, n - 2)
                    if lo > hi:
                        continue
                    # All targets of this group lie on one anti-diagonal
                    # (used' + internal' = s), so each cell is written once;
                    # a running minimum over candidates sorted by `used`
                    # reproduces the sequential strict-improvement order,
                    # ties going to the smallest parent.
                    running = np.minimum.accumulate(cand_cost)
                    improved = np.r_[True, cand_cost[1:] < running[:-1]]
                    arg = np.maximum.accumulate(
                        np.where(improved, np.arange(cand_cost.size), -1)
                    )
                    targets = np.arange(lo, hi + 1)
                    j = np.searchsorted(cand_used, targets, side="right") - 1
                    new_internal = s_val - targets
                    cur[targets, new_internal] = running[j]
                    preds[m][targets, new_internal] = cand_used[arg[j]]

        if keep_cost_levels:
            costs[m] = cur
        prev = cur
        depth_prev = depth
        phi_prev = phi_here

    if best is None:
        raise InfeasibleError(
            f"no finished tree found for n={n} with lengths {levels}"
        )
    return CostGrid(n=n, levels=levels, costs=costs, predecessors=preds, best=best)


def _check_path_state(n: int, levels: tuple[int, ...], state: DpState) -> None:
    # Necessary conditions for states on an optimal path; violations mean
    # the grid or backtracking is broken.
    assert 0 <= state.used <= n - 2, state
    assert 0 <= state.internal <= n // 2, state
    assert 2 * state.internal <= n - state.used, state
    if state.level < len(levels):
        gap = levels[state.level] - levels[state.level - 1]
        expand = 1 << gap
        assert state.internal * expand - (expand - 2) <= n - state.used, state


def backtrack(grid: CostGrid, ls: LengthSet | None = None, n: int | None = None) -> LengthVector:
    """Rebuild the optimal length vector from the predecessor table.

    The finishing level contributes n - leaves_above codewords at its depth;
    each earlier level contributes the difference between its used-leaf
    count and its predecessor's; whatever remains sits at the first allowed
    depth.
    """
    levels = grid.levels
    if ls is not None and ls.values != levels:
        raise BadParameterError("length set does not match the grid")
    if n is not None and n != grid.n:
        raise BadParameterError("symbol count does not match the grid")
    n = grid.n
    best = grid.best
    counts = [0] * (len(levels) + 1)
    m = best.level
    used = n
    internal = best.leftover_internal
    above = best.leaves_above
    while m > 1:
        here = used - above
        if here < 0:
            raise CorruptGridError(f"negative leaf count at level {m}")
        counts[m] = here
        gap = levels[m - 1] - levels[m - 2]
        total_nodes = internal + here
        if total_nodes % (1 << gap):
            raise CorruptGridError(f"node count at level {m} does not shift back evenly")
        internal = total_nodes >> gap
        used = above
        m -= 1
        if m > 1:
            if not (0 <= used <= n - 2 and 0 <= internal <= n // 2):
                raise CorruptGridError(f"state ({m}, {used}, {internal}) is out of range")
            above = int(grid.predecessors[m, used, internal])
            if above < 0:
                raise CorruptGridError(f"unset predecessor at ({m}, {used}, {internal})")
            _check_path_state(n, levels, DpState(level=m, used=used, internal=internal))
    counts[1] = used
    lengths: list[int] = []
    for mi in range(1, len(levels) + 1):
        lengths.extend([levels[mi - 1]] * counts[mi])
    if len(lengths) != n:
        raise CorruptGridError(f"rebuilt {len(lengths)} lengths for {n} symbols")
    return LengthVector(tuple(lengths))


@dataclass(frozen=True)
class Solution:
    """An optimal code: lengths, canonical codebook, objective value, bookkeeping."""

    lengths: LengthVector
    codebook: Codebook
    cost: float
    lambda_used: LengthSet
    kraft: Fraction


def solve_reserved(
    pmf: Pmf,
    ls: LengthSet,
    cost: CostFunction = IDENTITY_COST,
) -> Solution:
    """Find a cheapest prefix code whose lengths all come from `ls`.

    Among cost-optimal codes the result minimizes the maximum codeword
    length (finished trees are only replaced on strictly lower cost, and
    levels are visited shallow to deep).
    """
    n = pmf.n
    if not is_feasible(ls, n):
        raise InfeasibleError(
            f"allowed lengths {ls.values} cannot code {n} symbols (2**{ls.max} < {n})"
        )
    used_set = truncate_length_set(ls, n)
    grid = dp_grids(pmf, used_set, cost, keep_cost_levels=False)
    lv = backtrack(grid)
    codebook = assign_canonical(lv)
    return Solution(
        lengths=lv,
        codebook=codebook,
        cost=code_cost(pmf, lv, cost),
        lambda_used=used_set,
        kraft=kraft_sum(lv),
    )


def dyadic_str(value: Fraction) -> str:
    """Render an exact Kraft sum as 'p/2^q'."""
    den = value.denominator
    if den & (den - 1):
        raise ValueError(f"{value} is not dyadic")
    return f"{value.numerator}/2^{den.bit_length() - 1}"


def solution_to_json_dict(solution: Solution) -> dict:
    return {
        "lambda_used": list(solution.lambda_used.values),
        "lengths": list(solution.lengths.lengths),
        "cost": solution.cost,
        "kraft": dyadic_str(solution.kraft),
        "codebook": solution.codebook.to_json_dict(),
    }


def write_grid_csv(grid: CostGrid, fh) -> None:
    """Dump every reachable grid entry as CSV for fixture comparison."""
    fh.write("m,upsilon,eta,L,pred_upsilon\n")
    for state, value, pred in grid.finite_states():
        fh.write(f"{state.level},{state.used},{state.internal},{value!r},{pred}\n")
