"""Length vectors, Kraft arithmetic, feasibility, and canonical codeword assignment."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .distributions import Pmf
from .errors import (
    IndexOutOfRangeError,
    InfeasibleError,
    KraftViolationError,
    SizeMismatchError,
)


@dataclass(frozen=True)
class LengthSet:
    """The allowed codeword lengths: a strictly increasing tuple of positive ints."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("length set must be nonempty")
        prev = 0
        for lam in self.values:
            if not isinstance(lam, int) or lam < 1:
                raise ValueError(f"allowed length {lam!r} is not a positive integer")
            if lam <= prev:
                raise ValueError("allowed lengths must be strictly increasing")
            prev = lam

    @classmethod
    def from_values(cls, values) -> "LengthSet":
        """Sort and deduplicate arbitrary input lengths."""
        return cls(tuple(sorted({int(v) for v in values})))

    @property
    def max(self) -> int:
        return self.values[-1]

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, item: int) -> bool:
        return item in self.values


@dataclass(frozen=True)
class LengthVector:
    """Codeword lengths in sorted-symbol order: positive and nondecreasing."""

    lengths: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.lengths:
            raise ValueError("length vector must be nonempty")
        prev = 1
        for l in self.lengths:
            if not isinstance(l, int) or l < 1:
                raise ValueError(f"length {l!r} is not a positive integer")
            if l < prev:
                raise ValueError("lengths must be nondecreasing")
            prev = l

    @property
    def n(self) -> int:
        return len(self.lengths)

    def distinct(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.lengths)))


@dataclass(frozen=True)
class CodeRange:
    """The block of canonical codewords sharing one length."""

    bits: int
    first_code: int
    first_index: int
    count: int


@dataclass(frozen=True)
class Codebook:
    """Canonical codewords per sorted symbol.

    `codewords[i]` holds the code for symbol i in its `lengths[i]` low bits;
    the first transmitted bit is the most significant of those bits.
    `ranges` describes, per distinct length in ascending order, where that
    length's consecutive block of codewords starts.
    """

    lengths: tuple[int, ...]
    codewords: tuple[int, ...]
    ranges: tuple[CodeRange, ...]

    @property
    def n(self) -> int:
        return len(self.lengths)

    def bitstrings(self) -> tuple[str, ...]:
        """Codewords as '0'/'1' strings in transmission order."""
        return tuple(format(c, f"0{l}b") for c, l in zip(self.codewords, self.lengths))

    def to_json_dict(self) -> dict:
        return {"lengths": list(self.lengths), "codewords": list(self.bitstrings())}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Codebook":
        lengths = tuple(int(l) for l in obj["lengths"])
        cb = assign_canonical(LengthVector(lengths))
        if tuple(obj["codewords"]) != cb.bitstrings():
            raise ValueError("codewords are not canonical for the stated lengths")
        return cb


def kraft_sum(lv: LengthVector) -> Fraction:
    """Exact Kraft sum of a length vector: sum of 2**-l over all lengths.

    Returned as a Fraction so boundary comparisons against 1 are exact.
    """
    total = Fraction(0)
    for l in lv.lengths:
        total += Fraction(1, 1 << l)
    return total


def partial_kraft(lv: LengthVector, x: int) -> Fraction:
    """Kraft sum over the x shortest codewords; x = 0 gives 0."""
    if not 0 <= x <= lv.n:
        raise IndexOutOfRangeError(f"prefix count {x} not in [0, {lv.n}]")
    total = Fraction(0)
    for l in lv.lengths[:x]:
        total += Fraction(1, 1 << l)
    return total


def expected_length(pmf: Pmf, lv: LengthVector) -> float:
    """Average codeword length, accumulated left to right in double precision."""
    if pmf.n != lv.n:
        raise SizeMismatchError(f"pmf has {pmf.n} symbols, lengths have {lv.n}")
    total = 0.0
    for p, l in zip(pmf.probs, lv.lengths):
        total += p * l
    return total


def is_feasible(ls: LengthSet, n: int) -> bool:
    """True when a prefix code for n symbols can use only lengths from `ls`.

    The longest allowed length must offer at least n leaves: 2**max >= n.
    """
    return (1 << ls.max) >= n


def truncate_length_set(ls: LengthSet, n: int) -> LengthSet:
    """Drop allowed lengths no optimal code can use.

    Every length up to n-2 stays; of the lengths above n-2 only the
    smallest can ever appear in an optimal code, so the rest are removed.
    """
    if not is_feasible(ls, n):
        raise InfeasibleError(
            f"allowed lengths {ls.values} cannot code {n} symbols (2**{ls.max} < {n})"
        )
    kept = [lam for lam in ls.values if lam <= n - 2]
    overflow = [lam for lam in ls.values if lam > n - 2]
    if overflow:
        kept.append(overflow[0])
    return LengthSet(tuple(kept))


def assign_canonical(lv: LengthVector) -> Codebook:
    """Assign canonical codewords to a nondecreasing length vector.

    Symbol 0 gets code 0 in lengths[0] bits; each next code is the previous
    plus one, shifted left by the length difference.  Fails when the Kraft
    sum exceeds one, which is exactly when no prefix code has these lengths.
    """
    total = kraft_sum(lv)
    if total > 1:
        raise KraftViolationError(f"Kraft sum {total} exceeds 1")
    codewords = []
    code = 0
    prev_len = lv.lengths[0]
    for l in lv.lengths:
        if codewords:
            code = (code + 1) << (l - prev_len)
        codewords.append(code)
        prev_len = l
    ranges = []
    start = 0
    for i, l in enumerate(lv.lengths):
        if i > 0 and l == lv.lengths[i - 1]:
            continue
        start = i
        count = sum(1 for x in lv.lengths if x == l)
        ranges.append(
            CodeRange(bits=l, first_code=codewords[start], first_index=start, count=count)
        )
    return Codebook(lengths=lv.lengths, codewords=tuple(codewords), ranges=tuple(ranges))
