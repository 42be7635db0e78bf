"""Alphabet primitives: validation, reverse complement, Hamming distance,
GC statistics and running-digital-sum (RDS) profiles.

Sequences are plain uppercase ``str`` over ``ACGT``.  :func:`dna` is the
single entry point that normalizes user input.  Under the RDS convention used
throughout, ``A``/``T`` count +1 and ``G``/``C`` count -1.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels

BASES = "ACGT"
_COMPLEMENT = str.maketrans("ACGT", "TGCA")
_VALID = frozenset(BASES)


class SequenceError(ValueError):
    """Raised for malformed sequences or mismatched lengths."""


def dna(s: str) -> str:
    """Return ``s`` uppercased, rejecting anything outside ``ACGT``."""
    u = s.strip().upper()
    bad = set(u) - _VALID
    if bad:
        raise SequenceError(f"invalid bases {''.join(sorted(bad))!r} in sequence")
    return u


def reverse_complement(s: str) -> str:
    return s.translate(_COMPLEMENT)[::-1]


def hamming(a: str, b: str) -> int:
    if len(a) != len(b):
        raise SequenceError(f"hamming needs equal lengths, got {len(a)} and {len(b)}")
    return kernels.hamming(a.encode(), b.encode())


def gc_count(s: str) -> int:
    return kernels.gc_count(s.encode())


def gc_fraction(s: str) -> float:
    return gc_count(s) / len(s) if s else 0.0


@dataclass(frozen=True)
class RdsProfile:
    """Running digital sum after each prefix; ``values[0]`` is the empty prefix."""

    values: tuple[int, ...]

    @property
    def max_abs(self) -> int:
        return max(abs(v) for v in self.values)

    @property
    def final(self) -> int:
        return self.values[-1]


def rds_profile(s: str) -> RdsProfile:
    total = 0
    values = [0]
    for c in s:
        total += 1 if c in "AT" else -1
        values.append(total)
    return RdsProfile(tuple(values))


def rds_max(s: str, start: int = 0) -> int:
    """Largest |RDS| over prefixes of length ``>= start`` (kernel-backed)."""
    return kernels.rds_max(s.encode(), start)


def brds_check(s: str, bound: int) -> bool:
    """True iff every prefix of ``s`` has |RDS| at most ``bound``."""
    return rds_max(s) <= bound


@dataclass(frozen=True)
class BrdsParams:
    """Parameters ``(n, C, d; D)`` of a bounded-RDS error-correcting code."""

    n: int
    size: int
    d: int
    bound: int

    def __post_init__(self):
        if min(self.n, self.size, self.d, self.bound) <= 0:
            raise ValueError("BRDS parameters must all be positive")

    def admits(self, words: list[str]) -> bool:
        """Check a candidate word list against length, RDS bound and distance."""
        if any(len(w) != self.n or not brds_check(w, self.bound) for w in words):
            return False
        return all(
            hamming(a, b) >= self.d
            for i, a in enumerate(words)
            for b in words[i + 1 :]
        )


def known_brds_families(n: int) -> list[BrdsParams]:
    """Best-known BRDS parameter records for even ``n`` (no codeword generators)."""
    if n < 2 or n % 2:
        raise ValueError("BRDS families are tabulated for even n >= 2")
    h = n // 2
    return [
        BrdsParams(n, 2**h, 2, 1),
        BrdsParams(n, 3**h, 1, 2),
        BrdsParams(n, 2 * 3 ** (h - 1), 2, 2),
    ]


def read_sequences(text: str) -> list[str]:
    """Parse the one-sequence-per-line format, skipping blank lines."""
    return [dna(line) for line in text.splitlines() if line.strip()]


def write_sequences(seqs) -> str:
    return "".join(f"{s}\n" for s in seqs)
