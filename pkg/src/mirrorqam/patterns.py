"""Bit patterns, pattern sets, Hamming arithmetic, and pattern-file parsing.

Bit-order convention: a pattern is written leftmost-first, so the leftmost
character of a line is qubit 1 of the corresponding register. Pattern files
are UTF-8 text with one pattern per line; blank lines and lines starting
with '#' are ignored. Duplicate patterns are rejected rather than silently
deduplicated, because the stored superposition weights every pattern
equally and a silent dedup would change the pattern count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DimensionError, PatternParseError


@dataclass(frozen=True)
class BitPattern:
    """An ordered n-bit binary word; the unit of storage and retrieval."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) < 1:
            raise ValueError("a pattern needs at least one bit")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"pattern bits must be 0 or 1, got {self.bits!r}")

    @classmethod
    def from_string(cls, text: str) -> BitPattern:
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"not a binary string: {text!r}")
        return cls(tuple(int(c) for c in text))

    @property
    def n(self) -> int:
        return len(self.bits)

    def mirror(self) -> BitPattern:
        """Bitwise complement; an involution."""
        return BitPattern(tuple(1 - b for b in self.bits))

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, j: int) -> int:
        return self.bits[j]

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class PatternSet:
    """p pairwise-distinct patterns of common length n; the memory content."""

    patterns: tuple[BitPattern, ...]

    def __post_init__(self):
        if not self.patterns:
            raise PatternParseError("pattern set is empty")
        n = self.patterns[0].n
        for q in self.patterns:
            if q.n != n:
                raise DimensionError(
                    f"patterns must share one length: got {q.n} and {n}"
                )
        if len(set(self.patterns)) != len(self.patterns):
            raise PatternParseError("patterns must be pairwise distinct")

    @classmethod
    def from_strings(cls, words: Iterable[str]) -> PatternSet:
        return cls(tuple(BitPattern.from_string(w) for w in words))

    @property
    def n(self) -> int:
        return self.patterns[0].n

    @property
    def p(self) -> int:
        return len(self.patterns)

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self) -> Iterator[BitPattern]:
        return iter(self.patterns)

    def __contains__(self, item: BitPattern) -> bool:
        return item in self.patterns


def hamming_distance(a: BitPattern, b: BitPattern) -> int:
    """Number of positions where the two patterns differ."""
    if a.n != b.n:
        raise DimensionError(f"length mismatch: {a.n} vs {b.n}")
    return sum(x != y for x, y in zip(a.bits, b.bits))


def mirror(a: BitPattern) -> BitPattern:
    return a.mirror()


def mirror_set(s: PatternSet) -> PatternSet:
    """Elementwise bitwise complement; preserves count and distinctness."""
    return PatternSet(tuple(q.mirror() for q in s.patterns))


def parse_pattern_file(text: str) -> PatternSet:
    """Parse pattern-file text into a PatternSet.

    Raises PatternParseError with a distinct diagnostic (and line number)
    for non-binary characters, ragged lengths, duplicates, and empty input.
    """
    rows: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        bad = next((c for c in line if c not in "01"), None)
        if bad is not None:
            raise PatternParseError(
                f"non-binary character {bad!r} in pattern {line!r}", line=lineno
            )
        rows.append((lineno, line))
    if not rows:
        raise PatternParseError("no patterns found in input")
    width = len(rows[0][1])
    for lineno, word in rows:
        if len(word) != width:
            raise PatternParseError(
                f"ragged pattern length: {word!r} has {len(word)} bits, expected {width}",
                line=lineno,
            )
    first_seen: dict[str, int] = {}
    for lineno, word in rows:
        if word in first_seen:
            raise PatternParseError(
                f"duplicate pattern {word!r} (first on line {first_seen[word]})",
                line=lineno,
            )
        first_seen[word] = lineno
    return PatternSet.from_strings(word for _, word in rows)


def random_pattern_set(n: int, p: int, rng) -> PatternSet:
    """Uniform-random set of p distinct n-bit patterns (test helper)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 1 <= p <= 2**n:
        raise ValueError(f"cannot draw {p} distinct patterns of {n} bits")
    chosen: set[int] = set()
    while len(chosen) < p:
        chosen.add(int(rng.integers(0, 2**n)))
    return PatternSet(
        tuple(
            BitPattern(tuple((v >> j) & 1 for j in range(n))) for v in sorted(chosen)
        )
    )
