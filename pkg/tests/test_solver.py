import io
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rlpc import (
    BadParameterError,
    InfeasibleError,
    LengthSet,
    NotIncreasingError,
    backtrack,
    brute_force,
    code_cost,
    dp_grids,
    dyadic_str,
    expected_length,
    huffman,
    kraft_sum,
    make_cost_function,
    make_pmf,
    solution_to_json_dict,
    solve_reserved,
    truncate_length_set,
    write_grid_csv,
)
from helpers import random_pmf

POWERS_OF_TWO = LengthSet((1, 2, 4, 8))

# The worked leading-digit example: every reachable grid entry per level,
# keyed by (used leaves, internal nodes), viewed to three decimals together
# with its predecessor's used-leaf count.  Level 4 stores nothing because
# the sweep only tracks finished trees on the last level.
WORKED_GRIDS = {
    1: {
        (0, 2): (1.000, 0),
        (1, 1): (1.000, 0),
        (2, 0): (1.000, 0),
    },
    2: {
        (2, 0): (1.523, 2),
        (3, 0): (1.699, 1),
        (4, 0): (2.000, 0),
        (2, 1): (1.699, 1),
        (3, 1): (2.000, 0),
        (1, 2): (1.699, 1),
        (2, 2): (2.000, 0),
        (1, 3): (2.000, 0),
        (0, 4): (2.000, 0),
    },
    3: {
        (2, 0): (2.569, 2),
        (3, 0): (2.495, 3),
        (4, 0): (2.602, 4),
        (6, 0): (2.745, 2),
        (7, 0): (2.796, 3),
        (5, 1): (2.745, 2),
        (6, 1): (2.796, 3),
        (4, 2): (2.745, 2),
        (5, 2): (2.796, 3),
        (3, 3): (2.745, 2),
    },
    4: {},
}


def grid_entries(grid, m):
    """(used, internal) -> (cost, pred) for every finite entry of one level."""
    out = {}
    level = grid.costs[m]
    for u, e in zip(*np.nonzero(np.isfinite(level))):
        out[(int(u), int(e))] = (float(level[u, e]), int(grid.predecessors[m, u, e]))
    return out


@pytest.fixture(scope="module")
def benford_grid():
    from rlpc import benford_pmf

    return dp_grids(benford_pmf(), POWERS_OF_TWO, keep_cost_levels=True)


class TestWorkedGrids:
    def test_level_one_has_exactly_three_entries(self, benford_grid):
        assert len(grid_entries(benford_grid, 1)) == 3

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_every_level_matches_exactly(self, benford_grid, m):
        got = grid_entries(benford_grid, m)
        want = WORKED_GRIDS[m]
        assert set(got) == set(want)
        for key, (cost3, pred) in want.items():
            assert got[key][0] == pytest.approx(cost3, abs=5e-4)
            assert got[key][1] == pred

    def test_spot_values_level_two(self, benford_grid):
        got = grid_entries(benford_grid, 2)
        assert got[(2, 0)][0] == pytest.approx(1.523, abs=5e-4)
        assert got[(2, 2)][0] == 2.0
        assert got[(4, 0)][0] == 2.0

    def test_best_finished_tree(self, benford_grid):
        best = benford_grid.best
        assert best.level == 3
        assert best.leaves_above == 2
        assert best.leftover_internal == 1
        # cost of finishing from the (2, 2) state at depth 2
        assert best.cost == pytest.approx(2.0 + 2 * (1 - 0.4771212547196624), abs=1e-9)


class TestGridInvariants:
    def _reconstruct_partial_kraft(self, grid, m, u, e):
        """Walk predecessors down to level 1 and add up the leaf contributions."""
        levels = grid.levels
        total = Fraction(0)
        while m > 1:
            pred = int(grid.predecessors[m, u, e])
            assert pred >= 0
            here = u - pred
            assert here >= 0
            total += Fraction(here, 1 << levels[m - 1])
            gap = levels[m - 1] - levels[m - 2]
            nodes = e + here
            assert nodes % (1 << gap) == 0
            e = nodes >> gap
            u = pred
            m -= 1
        total += Fraction(u, 1 << levels[0])
        # at the first level the root must have expanded fully
        assert e + u == 1 << levels[0]
        return total

    def _check_grid(self, grid):
        n = grid.n
        for m in range(1, len(grid.levels) + 1):
            for (u, e), _ in grid_entries(grid, m).items():
                assert u <= n - 2
                assert e <= n // 2
                assert 2 * e <= n - u
                got = self._reconstruct_partial_kraft(grid, m, u, e)
                assert got == 1 - Fraction(e, 1 << grid.levels[m - 1])

    def test_benford_grid(self, benford_grid):
        self._check_grid(benford_grid)

    def test_random_instances(self, rng):
        for n, values in [(10, (2, 3, 5)), (12, (1, 4, 6)), (7, (2, 4)), (16, (4,))]:
            pmf = random_pmf(rng, n)
            ls = truncate_length_set(LengthSet(values), n)
            self._check_grid(dp_grids(pmf, ls, keep_cost_levels=True))


class TestBacktrack:
    def test_worked_example(self, benford_grid):
        assert backtrack(benford_grid).lengths == (2, 2, 4, 4, 4, 4, 4, 4, 4)

    def test_smallest_nontrivial_alphabet(self):
        pmf = make_pmf([0.5, 0.3, 0.2])
        grid = dp_grids(pmf, LengthSet((1, 3)))
        assert backtrack(grid).lengths == (1, 3, 3)

    def test_single_allowed_length(self):
        pmf = make_pmf([0.25] * 4)
        grid = dp_grids(pmf, LengthSet((2,)))
        assert backtrack(grid).lengths == (2, 2, 2, 2)

    def test_mismatched_arguments_rejected(self, benford_grid):
        with pytest.raises(BadParameterError):
            backtrack(benford_grid, ls=LengthSet((1, 2)))
        with pytest.raises(BadParameterError):
            backtrack(benford_grid, n=5)

    def test_corrupt_predecessors_are_detected(self, benford):
        from rlpc import CorruptGridError

        grid = dp_grids(benford, POWERS_OF_TWO)
        grid.predecessors[:] = -1  # wipe the backtracking table
        with pytest.raises(CorruptGridError):
            backtrack(grid)


class TestSolveReserved:
    def test_benford_powers_of_two(self, benford):
        sol = solve_reserved(benford, POWERS_OF_TWO)
        assert sol.lengths.lengths == (2, 2, 4, 4, 4, 4, 4, 4, 4)
        assert sol.cost == pytest.approx(3.046, abs=1e-3)
        assert sol.kraft == Fraction(15, 16)
        assert sol.lambda_used.values == (1, 2, 4, 8)
        assert sol.cost == expected_length(benford, sol.lengths)

    def test_truncation_is_applied(self, benford):
        sol = solve_reserved(benford, LengthSet((1, 2, 4, 8, 16, 32)))
        assert sol.lambda_used.values == (1, 2, 4, 8)
        assert sol.lengths.lengths == (2, 2, 4, 4, 4, 4, 4, 4, 4)

    def test_infeasible(self, benford):
        with pytest.raises(InfeasibleError):
            solve_reserved(benford, LengthSet((1, 2)))

    def test_two_symbols_take_shortest_length(self):
        pmf = make_pmf([0.9, 0.1], normalize=True)
        sol = solve_reserved(pmf, LengthSet((3, 5, 7)))
        assert sol.lengths.lengths == (3, 3)

    def test_huge_overflow_length(self):
        # an enormous fallback length must not break the arithmetic
        pmf = make_pmf([0.8, 0.1, 0.1], normalize=True)
        sol = solve_reserved(pmf, LengthSet((1, 200)))
        assert sol.lengths.lengths == (1, 200, 200)
        assert sol.kraft == Fraction(1, 2) + Fraction(2, 1 << 200)

    def test_minimal_max_length_on_ties(self):
        # both (2,2,2,2) and (1,2,3,3) cost exactly 2 bits here
        pmf = make_pmf([0.375, 0.25, 0.25, 0.125])
        ls = LengthSet((1, 2, 3))
        oracle = brute_force(pmf, ls)
        vecs = {v.lengths for v in oracle.optimal_vectors}
        assert vecs == {(2, 2, 2, 2), (1, 2, 3, 3)}
        assert solve_reserved(pmf, ls).lengths.lengths == (2, 2, 2, 2)

    def test_matches_oracle_on_small_instances(self, rng):
        for n in range(2, 7):
            for _ in range(5):
                pmf = random_pmf(rng, n)
                for values in [(1, 2, 3, 4, 5, 6), (2, 4), (1, 3, 5), (3,)]:
                    ls = LengthSet(values)
                    if (1 << ls.max) < n:
                        continue
                    sol = solve_reserved(pmf, ls)
                    oracle = brute_force(pmf, ls)
                    assert sol.cost == pytest.approx(oracle.best_cost, abs=1e-9)
                    assert sol.lengths in oracle.optimal_vectors

    def test_matches_oracle_on_dyadic_ties(self, rng):
        # dyadic probabilities make cost ties exact in floats, which is
        # where first-minimum tie discipline actually matters
        for n in range(2, 8):
            for _ in range(12):
                parts = np.ones(n, dtype=int)
                for _ in range(64 - n):
                    parts[rng.integers(0, n)] += 1
                pmf = make_pmf((parts / 64.0).tolist())
                for values in [(1, 2, 3, 4, 5, 6), (1, 3, 6), (2, 4, 6), (3, 6)]:
                    ls = LengthSet(values)
                    if (1 << ls.max) < n:
                        continue
                    sol = solve_reserved(pmf, ls)
                    oracle = brute_force(pmf, ls)
                    assert sol.cost == pytest.approx(oracle.best_cost, abs=1e-9)
                    assert sol.lengths in oracle.optimal_vectors
                    best_max = min(v.lengths[-1] for v in oracle.optimal_vectors)
                    assert sol.lengths.lengths[-1] == best_max

    def test_skewed_and_large_instances_stay_sane(self, rng):
        # no small-n oracle here; check order relations that must always hold
        for n, values in [(1024, (6, 9, 11, 12)), (1024, (2, 10, 11)), (512, (9,))]:
            pmf = random_pmf(rng, n)
            sol = solve_reserved(pmf, LengthSet(values))
            assert all(l in values for l in sol.lengths.lengths)
            assert sol.kraft <= 1
            # never beats the unrestricted optimum
            assert sol.cost >= code_cost(pmf, huffman(pmf)) - 1e-9
            # never loses to coding everything at one feasible length
            single = min(l for l in values if (1 << l) >= n)
            assert sol.cost <= single + 1e-9
        spiky = make_pmf([1 - 1e-6] + [1e-6 / 7] * 7, normalize=True)
        sol = solve_reserved(spiky, LengthSet((1, 2, 4, 8)))
        assert sol.lengths.lengths[0] == 1
        assert sol.cost == pytest.approx(brute_force(spiky, LengthSet((1, 2, 4, 8))).best_cost, abs=1e-9)

    def test_no_improving_single_or_double_move_at_medium_scale(self, rng):
        # beyond the exhaustive oracle's reach, verify local optimality:
        # moving one or two symbols to any other allowed depth (Kraft
        # permitting) never lowers the cost
        for n, values in [(60, (2, 4, 6, 8)), (150, (3, 5, 9)), (300, (5, 9, 11))]:
            pmf = random_pmf(rng, n)
            ls = LengthSet(values)
            sol = solve_reserved(pmf, ls)
            base_counts = {lam: 0 for lam in values}
            for l in sol.lengths.lengths:
                base_counts[l] += 1

            def cost_of(counts):
                if any(c < 0 for c in counts.values()):
                    return None
                if sum(Fraction(c, 1 << lam) for lam, c in counts.items()) > 1:
                    return None
                lengths = []
                for lam in values:
                    lengths.extend([lam] * counts[lam])
                total = 0.0
                for p, l in zip(pmf.probs, lengths):
                    total += p * l
                return total

            for src in values:
                for dst in values:
                    if src == dst:
                        continue
                    for moved in (1, 2):
                        counts = dict(base_counts)
                        counts[src] -= moved
                        counts[dst] += moved
                        alt = cost_of(counts)
                        if alt is not None:
                            assert alt >= sol.cost - 1e-9, (n, values, src, dst, moved)

    def test_adding_an_allowed_length_never_hurts(self, rng):
        for _ in range(10):
            n = int(rng.integers(16, 200))
            base = sorted(rng.choice(np.arange(2, 14), size=3, replace=False).tolist())
            ls = LengthSet(tuple(int(v) for v in base))
            if (1 << ls.max) < n:
                continue
            extra = int(rng.integers(1, 15))
            if extra in ls.values:
                continue
            wider = LengthSet.from_values(ls.values + (extra,))
            pmf = random_pmf(rng, n)
            assert solve_reserved(pmf, wider).cost <= solve_reserved(pmf, ls).cost + 1e-9

    def test_normalization_invariance(self, rng):
        for scale in (1e-3, 7.0, 1e4):
            for n in (4, 9):
                weights = (rng.random(n) + 0.05).tolist()
                base = solve_reserved(
                    make_pmf(weights, normalize=True), LengthSet((1, 2, 4, 8))
                )
                scaled = solve_reserved(
                    make_pmf([w * scale for w in weights], normalize=True),
                    LengthSet((1, 2, 4, 8)),
                )
                assert base.lengths == scaled.lengths

    @settings(deadline=None, max_examples=40)
    @given(st.data())
    def test_structural_properties(self, data):
        n = data.draw(st.integers(2, 10))
        values = data.draw(st.sets(st.integers(1, 10), min_size=1, max_size=5))
        ls = LengthSet.from_values(values)
        if (1 << ls.max) < n:
            return
        weights = data.draw(
            st.lists(
                st.floats(min_value=0.01, max_value=10.0), min_size=n, max_size=n
            )
        )
        pmf = make_pmf(weights, normalize=True)
        sol = solve_reserved(pmf, ls)
        assert all(l in ls for l in sol.lengths.lengths)
        assert sol.kraft <= 1
        assert sol.cost == code_cost(pmf, sol.lengths)
        assert sol.kraft == kraft_sum(sol.lengths)


class TestCostFunctions:
    def test_exponential_values(self):
        cf = make_cost_function("exponential", t=1.0)
        assert cf.phi(4) == 16.0
        assert cf.phi(0) == 1.0
        assert cf.phi_inverse(16.0) == 4.0

    def test_exponential_rejects_bad_t(self):
        for t in (0.0, -1.0, None):
            with pytest.raises(BadParameterError):
                make_cost_function("exponential", t=t)

    def test_exp_alias(self):
        assert make_cost_function("exp", t=2.0).phi(3) == 64.0

    def test_empty_table_rejected(self):
        with pytest.raises(BadParameterError):
            make_cost_function("table", table=[])

    def test_table_valid(self):
        cf = make_cost_function("table", table=[1, 2, 5, 6])
        assert cf.phi(3) == 5.0
        assert cf.phi(0) == 0.0
        assert cf.phi_inverse(5.0) == pytest.approx(3.0, abs=1e-12)

    def test_table_not_increasing(self):
        with pytest.raises(NotIncreasingError):
            make_cost_function("table", table=[1, 2, 2, 6])

    def test_table_too_short_for_lengths(self, benford):
        cf = make_cost_function("table", table=[1, 2, 5])
        with pytest.raises(BadParameterError):
            solve_reserved(benford, POWERS_OF_TWO, cf)

    def test_unknown_kind(self):
        with pytest.raises(BadParameterError):
            make_cost_function("logarithmic")

    def test_identity_reduction_is_field_for_field(self, benford):
        plain = solve_reserved(benford, POWERS_OF_TWO)
        explicit = solve_reserved(benford, POWERS_OF_TWO, make_cost_function("identity"))
        assert plain == explicit

    def test_exponential_matches_oracle_small(self, rng):
        cf = make_cost_function("exponential", t=1.0)
        for n in (3, 5, 7):
            pmf = random_pmf(rng, n)
            for values in [(1, 2, 3, 4, 5, 6, 7), (2, 4, 6)]:
                ls = LengthSet(values)
                sol = solve_reserved(pmf, ls, cf)
                oracle = brute_force(pmf, ls, cf)
                assert sol.cost == pytest.approx(oracle.best_cost, abs=1e-9)
                assert sol.lengths in oracle.optimal_vectors

    def test_exponential_can_change_the_answer(self):
        # a strongly convex cost pushes toward equal lengths
        pmf = make_pmf([0.46, 0.30, 0.12, 0.12])
        ls = LengthSet((1, 2, 3))
        flat = solve_reserved(pmf, ls)
        convex = solve_reserved(pmf, ls, make_cost_function("exponential", t=2.0))
        assert flat.lengths.lengths == (1, 2, 3, 3)
        assert convex.lengths.lengths == (2, 2, 2, 2)


class TestGridStorage:
    def test_untruncated_set_gives_same_answer(self, benford):
        # extra overlong levels waste work but cannot change the optimum
        full = dp_grids(benford, LengthSet((1, 2, 4, 8, 16, 32)))
        cut = dp_grids(benford, POWERS_OF_TWO)
        assert full.best.cost == cut.best.cost
        assert backtrack(full).lengths == backtrack(cut).lengths

    def test_rolling_window_drops_costs_only(self, benford):
        kept = dp_grids(benford, POWERS_OF_TWO, keep_cost_levels=True)
        rolled = dp_grids(benford, POWERS_OF_TWO, keep_cost_levels=False)
        assert rolled.costs is None
        assert np.array_equal(kept.predecessors, rolled.predecessors)
        assert kept.best == rolled.best
        assert backtrack(kept) == backtrack(rolled)
        with pytest.raises(BadParameterError):
            list(rolled.finite_states())

    def test_csv_dump(self, benford_grid):
        buf = io.StringIO()
        write_grid_csv(benford_grid, buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "m,upsilon,eta,L,pred_upsilon"
        # 1 seed entry + 3 + 9 + 10 level entries
        assert len(lines) == 1 + 1 + 3 + 9 + 10
        row = dict(zip(lines[0].split(","), lines[1].split(",")))
        assert row["m"] == "0" and row["upsilon"] == "0" and row["eta"] == "1"
        assert float(row["L"]) == 0.0


class TestSerialization:
    def test_dyadic_rendering(self):
        assert dyadic_str(Fraction(15, 16)) == "15/2^4"
        assert dyadic_str(Fraction(1)) == "1/2^0"
        assert dyadic_str(Fraction(3, 4)) == "3/2^2"
        with pytest.raises(ValueError):
            dyadic_str(Fraction(1, 3))

    def test_solution_json(self, benford):
        sol = solve_reserved(benford, POWERS_OF_TWO)
        obj = solution_to_json_dict(sol)
        assert json.loads(json.dumps(obj)) == obj
        assert obj["lengths"] == [2, 2, 4, 4, 4, 4, 4, 4, 4]
        assert obj["lambda_used"] == [1, 2, 4, 8]
        assert obj["kraft"] == "15/2^4"
        assert obj["codebook"]["codewords"][0] == "00"
