"""Shared test utilities: random instances and independent structural checks."""

from fractions import Fraction
from itertools import combinations

from rlpc import Codebook, LengthSet, make_pmf


def random_pmf(rng, n):
    """A random pmf bounded away from zero so no weight underflows."""
    return make_pmf((rng.random(n) + 0.05).tolist(), normalize=True)


def assert_prefix_free(cb: Codebook) -> None:
    """Independent prefix-freeness check.

    Small codebooks are checked pairwise; larger ones via disjointness of
    the codewords' dyadic intervals, which is equivalent for sorted codes.
    """
    n = cb.n
    if n <= 64:
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                li, lj = cb.lengths[i], cb.lengths[j]
                if li <= lj and (cb.codewords[j] >> (lj - li)) == cb.codewords[i]:
                    raise AssertionError(f"codeword {i} is a prefix of codeword {j}")
    else:
        intervals = sorted(
            (Fraction(c, 1 << l), Fraction(c + 1, 1 << l))
            for c, l in zip(cb.codewords, cb.lengths)
        )
        for (_, end), (start, _) in zip(intervals, intervals[1:]):
            assert start >= end, "dyadic intervals overlap"


def feasible_subsets(n, universe=range(1, 9)):
    """Every nonempty subset of the universe usable as a length set for n symbols."""
    out = []
    values = list(universe)
    for size in range(1, len(values) + 1):
        for combo in combinations(values, size):
            if (1 << combo[-1]) >= n:
                out.append(LengthSet(tuple(combo)))
    return out
