"""Optimal binary prefix codes whose codeword lengths come from a restricted set.

The package solves three related problems over a probability mass function:
codes whose lengths all lie in a given set, codes optimal under a
quasiarithmetic (strictly increasing) cost of length, and codes using at
most g distinct lengths.  A canonical encoder/decoder, a container format,
a decode-throughput benchmark, and a scikit-learn style wrapper round out
the toolkit.
"""

from .codec import (
    BitStream,
    DecodeTable,
    ThroughputReport,
    bench_decode,
    build_container,
    build_decode_table,
    decode,
    decoder_for_lengths,
    encode,
    parse_container,
    read_container,
    write_container,
)
from .codes import (
    Codebook,
    CodeRange,
    LengthSet,
    LengthVector,
    assign_canonical,
    expected_length,
    is_feasible,
    kraft_sum,
    partial_kraft,
    truncate_length_set,
)
from .distributions import (
    CumulativeTable,
    Pmf,
    benford_pmf,
    cdf,
    make_pmf,
    pmf_from_file,
    zipf_pmf,
)
from .errors import (
    BadParameterError,
    CorruptGridError,
    EmptyOrSingletonError,
    IndexOutOfRangeError,
    InfeasibleError,
    InvalidCodeError,
    KraftViolationError,
    NonPositiveWeightError,
    NotIncreasingError,
    NotNormalizedError,
    ParseError,
    PrefixCodeError,
    SizeMismatchError,
    TooLargeError,
    TruncatedError,
)
from .estimator import PrefixCodeEncoder
from .few_lengths import GBest, GSearchReport, candidate_sets, solve_g_lengths
from .oracle import OracleResult, brute_force, feasible_length_vectors, huffman
from .solver import (
    BestTree,
    CostFunction,
    CostGrid,
    DpState,
    IDENTITY_COST,
    Solution,
    backtrack,
    code_cost,
    dp_grids,
    dyadic_str,
    make_cost_function,
    solution_to_json_dict,
    solve_reserved,
    write_grid_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BadParameterError",
    "BestTree",
    "BitStream",
    "Codebook",
    "CodeRange",
    "CorruptGridError",
    "CostFunction",
    "CostGrid",
    "CumulativeTable",
    "DecodeTable",
    "DpState",
    "EmptyOrSingletonError",
    "GBest",
    "GSearchReport",
    "IDENTITY_COST",
    "IndexOutOfRangeError",
    "InfeasibleError",
    "InvalidCodeError",
    "KraftViolationError",
    "LengthSet",
    "LengthVector",
    "NonPositiveWeightError",
    "NotIncreasingError",
    "NotNormalizedError",
    "OracleResult",
    "ParseError",
    "Pmf",
    "PrefixCodeEncoder",
    "PrefixCodeError",
    "SizeMismatchError",
    "Solution",
    "ThroughputReport",
    "TooLargeError",
    "TruncatedError",
    "assign_canonical",
    "backtrack",
    "bench_decode",
    "benford_pmf",
    "brute_force",
    "build_container",
    "build_decode_table",
    "candidate_sets",
    "cdf",
    "code_cost",
    "decode",
    "decoder_for_lengths",
    "dp_grids",
    "dyadic_str",
    "encode",
    "expected_length",
    "feasible_length_vectors",
    "huffman",
    "is_feasible",
    "kraft_sum",
    "make_cost_function",
    "make_pmf",
    "parse_container",
    "partial_kraft",
    "pmf_from_file",
    "read_container",
    "solution_to_json_dict",
    "solve_g_lengths",
    "solve_reserved",
    "truncate_length_set",
    "write_container",
    "write_grid_csv",
    "zipf_pmf",
]
