"""Probability mass functions: construction, validation, file ingestion, cumulative sums.

All downstream code works on a `Pmf` whose probabilities are sorted in
nonincreasing order; the permutation back to the caller's symbol order is
kept so results can be reported against the original labels.
"""

from __future__ import annotations

import csv
import json
import math
import os
from collections import Counter
from dataclasses import dataclass

from .errors import (
    EmptyOrSingletonError,
    NonPositiveWeightError,
    NotNormalizedError,
    ParseError,
)

NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class Pmf:
    """A validated probability mass function, sorted nonincreasing.

    `perm[i]` is the caller-side index of the symbol that landed at sorted
    position `i`; `labels`, when present, are in caller order.
    """

    probs: tuple[float, ...]
    perm: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        n = len(self.probs)
        if n < 2:
            raise EmptyOrSingletonError(f"need at least 2 symbols, got {n}")
        total = 0.0
        prev = math.inf
        for p in self.probs:
            if not (p > 0.0) or math.isinf(p):
                raise NonPositiveWeightError(f"probability {p!r} is not in (0, 1]")
            if p > prev:
                raise ValueError("probabilities must be sorted nonincreasing")
            prev = p
            total += p
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise NotNormalizedError(f"probabilities sum to {total!r}, not 1")
        if sorted(self.perm) != list(range(n)):
            raise ValueError("perm is not a permutation of 0..n-1")
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("labels/probs size mismatch")

    @property
    def n(self) -> int:
        return len(self.probs)

    def label_for_sorted(self, i: int) -> str:
        """Label of the symbol at sorted position i (falls back to the index)."""
        if self.labels is None:
            return str(self.perm[i])
        return self.labels[self.perm[i]]


@dataclass(frozen=True)
class CumulativeTable:
    """Running totals of a Pmf: values[0] = 0 and values[i] = values[i-1] + p_i."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.values[0] != 0.0:
            raise ValueError("cumulative table must start at 0")
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("cumulative table must be nondecreasing")
        if abs(self.values[-1] - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"cumulative table ends at {self.values[-1]!r}, not 1")


def make_pmf(
    weights, normalize: bool = False, labels=None
) -> Pmf:
    """Build a Pmf from positive weights.

    Without `normalize`, the weights must already sum to one (within 1e-9);
    with it, any positive scale is accepted.  Sorting is stable descending,
    so equal weights keep their input order and the permutation is
    deterministic.
    """
    weights = [float(w) for w in weights]
    n = len(weights)
    if n < 2:
        raise EmptyOrSingletonError(f"need at least 2 weights, got {n}")
    for w in weights:
        if not (w > 0.0) or math.isinf(w):
            raise NonPositiveWeightError(f"weight {w!r} is not positive and finite")
    total = 0.0
    for w in weights:
        total += w
    if not normalize and abs(total - 1.0) > NORMALIZATION_TOL:
        raise NotNormalizedError(
            f"weights sum to {total!r}; pass normalize=True to rescale"
        )
    order = sorted(range(n), key=lambda i: -weights[i])  # stable: ties keep input order
    probs = tuple(weights[i] / total for i in order)
    if labels is not None:
        labels = tuple(str(x) for x in labels)
    return Pmf(probs=probs, perm=tuple(order), labels=labels)


def zipf_pmf(n: int) -> Pmf:
    """Zipf distribution on n ranks: p_i proportional to 1/i."""
    if n < 2:
        raise EmptyOrSingletonError(f"need n >= 2, got {n}")
    harmonic = 0.0
    for j in range(1, n + 1):
        harmonic += 1.0 / j
    probs = tuple((1.0 / i) / harmonic for i in range(1, n + 1))
    return Pmf(probs=probs, perm=tuple(range(n)))


def benford_pmf() -> Pmf:
    """Leading-digit (Benford) distribution on digits 1..9.

    p_i = log10(i+1) - log10(i); the telescoping total is exactly 1.
    """
    probs = tuple(math.log10(i + 1) - math.log10(i) for i in range(1, 10))
    return Pmf(probs=probs, perm=tuple(range(9)), labels=tuple(str(d) for d in range(1, 10)))


def cdf(pmf: Pmf) -> CumulativeTable:
    """Cumulative sums of the sorted probabilities, with a leading zero."""
    values = [0.0]
    for p in pmf.probs:
        values.append(values[-1] + p)
    return CumulativeTable(values=tuple(values))


def pmf_from_file(path, fmt: str | None = None) -> Pmf:
    """Read a Pmf from disk.

    Formats: ``csv`` (one ``label,weight`` pair per line), ``json``
    (object with "weights" and optional "labels" arrays), or ``bytes``
    (histogram of the file's byte values).  When `fmt` is None it is
    inferred from the extension; anything that is not .csv or .json is
    treated as raw bytes.
    """
    if fmt is None:
        ext = os.path.splitext(str(path))[1].lower()
        fmt = {".csv": "csv", ".json": "json"}.get(ext, "bytes")
    if fmt == "csv":
        return _pmf_from_csv(path)
    if fmt == "json":
        return _pmf_from_json(path)
    if fmt == "bytes":
        return _pmf_from_bytes(path)
    raise ParseError(f"unknown pmf format {fmt!r}")


def _pmf_from_csv(path) -> Pmf:
    labels = []
    weights = []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            for lineno, row in enumerate(csv.reader(fh), start=1):
                if not row:
                    continue
                if len(row) != 2:
                    raise ParseError(f"{path}:{lineno}: expected 'label,weight', got {row!r}")
                labels.append(row[0])
                try:
                    weights.append(float(row[1]))
                except ValueError as exc:
                    raise ParseError(f"{path}:{lineno}: bad weight {row[1]!r}") from exc
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return make_pmf(weights, normalize=True, labels=labels)


def _pmf_from_json(path) -> Pmf:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(obj, dict) or "weights" not in obj:
        raise ParseError(f"{path}: expected an object with a 'weights' array")
    weights = obj["weights"]
    labels = obj.get("labels")
    if not isinstance(weights, list):
        raise ParseError(f"{path}: 'weights' must be an array")
    try:
        weights = [float(w) for w in weights]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: weights must be numbers") from exc
    return make_pmf(weights, normalize=True, labels=labels)


def _pmf_from_bytes(path) -> Pmf:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    counts = Counter(data)
    symbols = sorted(counts)
    return make_pmf(
        [counts[b] for b in symbols],
        normalize=True,
        labels=[str(b) for b in symbols],
    )
