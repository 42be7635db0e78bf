"""Pure-Python implementations of the hot inner loops.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and results.  Sequences arrive as ``bytes`` over ``b"ACGT"``.
"""

from __future__ import annotations

from itertools import product

BACKEND = "python"

_AT = frozenset(b"AT")
_GC = frozenset(b"GC")


def hamming(a: bytes, b: bytes) -> int:
    return sum(1 for x, y in zip(a, b) if x != y)


def correlation(x: bytes, y: bytes) -> list[int]:
    nx, ny = len(x), len(y)
    bits = []
    for i in range(nx):
        m = min(nx - i, ny)
        bits.append(1 if x[i : i + m] == y[:m] else 0)
    return bits


def correlated(x: bytes, y: bytes, k: int, start: int) -> bool:
    """True if some shift ``i >= start`` whose overlap is at least ``k`` long matches."""
    nx, ny = len(x), len(y)
    for i in range(start, nx):
        m = min(nx - i, ny)
        if m < k:
            break
        if x[i : i + m] == y[:m]:
            return True
    return False


def rds_max(s: bytes, start: int) -> int:
    """Largest |running digital sum| over prefix lengths ``>= start``."""
    total = 0
    best = 0
    for i, c in enumerate(s):
        total += 1 if c in _AT else -1
        if i + 1 >= start and abs(total) > best:
            best = abs(total)
    return best


def gc_count(s: bytes) -> int:
    return sum(1 for c in s if c in _GC)


def compatible(x: bytes, accepted: list, d: int, k: int) -> int:
    """0 if ``x`` may join ``accepted``; 1 on a distance clash; 2 on a correlation clash."""
    for y in accepted:
        if hamming(x, y) < d:
            return 1
    for y in accepted:
        if correlated(x, y, k, 0) or correlated(y, x, k, 0):
            return 2
    return 0


def count_avoiders(patterns: list, length: int) -> int:
    """Exhaustive count of strings of ``length`` containing none of ``patterns``."""
    count = 0
    for letters in product(b"ACGT", repeat=length):
        s = bytes(letters)
        if not any(p in s for p in patterns):
            count += 1
    return count


def lcp(s: bytes, pos: int, p: bytes) -> int:
    """Length of the common prefix of ``s[pos:]`` and ``p``."""
    n = min(len(s) - pos, len(p))
    i = 0
    while i < n and s[pos + i] == p[i]:
        i += 1
    return i


_RC = bytes.maketrans(b"ACGT", b"TGCA")


def stem_free(s: bytes, h: int) -> bool:
    """No ``h``-mer whose reverse complement occurs at a non-overlapping position."""
    for i in range(len(s) - h + 1):
        target = s[i : i + h].translate(_RC)[::-1]
        j = s.find(target)
        while j != -1:
            if j + h <= i or j >= i + h:
                return False
            j = s.find(target, j + 1)
    return True
