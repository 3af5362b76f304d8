"""Scikit-learn style front end: fit a code to symbol data, then transform.

`fit` estimates symbol frequencies and solves for a code, `transform`
packs symbol sequences into the container byte format, and
`inverse_transform` recovers the original symbols.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted, column_or_1d

from .codec import (
    build_container,
    build_decode_table,
    decode,
    encode,
    parse_container,
)
from .codes import LengthSet, LengthVector, assign_canonical, kraft_sum
from .distributions import make_pmf
from .few_lengths import solve_g_lengths
from .oracle import huffman
from .solver import code_cost, solve_reserved


class PrefixCodeEncoder(TransformerMixin, BaseEstimator):
    """Lossless variable-length coder with an optional length restriction.

    Parameters
    ----------
    allowed_lengths : iterable of int, optional
        Restrict every codeword length to this set.
    max_distinct_lengths : int, optional
        Instead of a fixed set, search for the best code using at most this
        many distinct lengths (fewer distinct lengths decode faster).
    Leaving both unset fits an unrestricted (Huffman) code.

    Attributes (after fit)
    ----------------------
    classes_ : ndarray of distinct symbols, most frequent first
    lengths_ : tuple of codeword lengths aligned with classes_
    expected_bits_ : average codeword length under the fitted frequencies
    kraft_ : exact Kraft sum of the fitted code (Fraction)
    """

    def __init__(self, allowed_lengths=None, max_distinct_lengths=None):
        self.allowed_lengths = allowed_lengths
        self.max_distinct_lengths = max_distinct_lengths

    def fit(self, X, y=None):
        X = column_or_1d(np.asarray(X, dtype=object), warn=False)
        if X.size == 0:
            raise ValueError("cannot fit a code to an empty symbol sequence")
        if self.allowed_lengths is not None and self.max_distinct_lengths is not None:
            raise ValueError(
                "allowed_lengths and max_distinct_lengths are mutually exclusive"
            )
        symbols, counts = np.unique(X, return_counts=True)
        if symbols.size < 2:
            raise ValueError("need at least 2 distinct symbols to build a code")
        pmf = make_pmf(counts.tolist(), normalize=True, labels=[str(s) for s in symbols])
        if self.allowed_lengths is not None:
            solution = solve_reserved(pmf, LengthSet.from_values(self.allowed_lengths))
            lengths = solution.lengths
        elif self.max_distinct_lengths is not None:
            report = solve_g_lengths(pmf, int(self.max_distinct_lengths))
            lengths = report.best_per_g[-1].solution.lengths
        else:
            lengths = huffman(pmf)
        # classes_ in sorted-pmf order so codeword i belongs to classes_[i]
        self.classes_ = symbols[list(pmf.perm)]
        self.lengths_ = lengths.lengths
        self.codebook_ = assign_canonical(lengths)
        self.expected_bits_ = code_cost(pmf, lengths)
        self.kraft_ = kraft_sum(lengths)
        self._index = {sym: i for i, sym in enumerate(self.classes_)}
        return self

    def transform(self, X) -> bytes:
        """Encode a symbol sequence into a self-describing container."""
        check_is_fitted(self, "codebook_")
        X = column_or_1d(np.asarray(X, dtype=object), warn=False)
        try:
            indices = [self._index[s] for s in X]
        except KeyError as exc:
            raise ValueError(f"symbol {exc.args[0]!r} was not seen during fit") from exc
        stream = encode(self.codebook_, indices)
        return build_container(LengthVector(self.lengths_), stream, len(indices))

    def inverse_transform(self, data) -> np.ndarray:
        """Decode a container produced by transform back into symbols."""
        check_is_fitted(self, "codebook_")
        lengths, count, payload = parse_container(bytes(data))
        if lengths.lengths != self.lengths_:
            raise ValueError("container was coded with a different length vector")
        table = build_decode_table(self.codebook_)
        indices = decode(table, payload, count)
        return self.classes_[indices]
