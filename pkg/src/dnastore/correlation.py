"""Sequence correlation, mutually uncorrelated sets and pattern-avoidance counts."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import kernels

# Mutually uncorrelated length-4 base set used to seed the doubling construction.
BASE_SET_4 = (
    "ATGC", "ATAC", "GTAC", "GTGC",
    "ATTC", "GTTC", "AGGC", "AAAC",
    "GAAC", "GGGC", "ATTT", "GTTT",
)


def correlate(x: str, y: str) -> list[int]:
    """Correlation vector of ``x`` against ``y``, one bit per position of ``x``.

    Bit ``i`` is set when ``y``, placed with its first symbol under ``x[i]``,
    agrees with ``x`` over the whole overlap.
    """
    if not x or not y:
        raise ValueError("correlate needs two nonempty sequences")
    return kernels.correlation(x.encode(), y.encode())


def bits_str(bits) -> str:
    return "".join(map(str, bits))


def is_self_uncorrelated(x: str, k: int = 1) -> bool:
    """True iff no proper shift of ``x`` with overlap at least ``k`` matches itself."""
    return not kernels.correlated(x.encode(), x.encode(), k, 1)


def _check_lengths(seqs) -> None:
    if len({len(s) for s in seqs}) > 1:
        raise ValueError("all sequences must have the same length")


def is_mutually_uncorrelated(seqs, k: int = 1) -> bool:
    """Definition check: every member self-uncorrelated, every ordered pair clear.

    With ``k > 1`` only overlaps of length ``>= k`` are required to mismatch.
    """
    seqs = list(seqs)
    _check_lengths(seqs)
    raw = [s.encode() for s in seqs]
    if not all(not kernels.correlated(s, s, k, 1) for s in raw):
        return False
    for i, a in enumerate(raw):
        for b in raw[i + 1 :]:
            if kernels.correlated(a, b, k, 0) or kernels.correlated(b, a, k, 0):
                return False
    return True


def double_construction(seqs) -> list[str]:
    """Split into halves A and B (in given order) and return every ``XY``."""
    seqs = list(seqs)
    if len(seqs) < 2 or len(seqs) % 2:
        raise ValueError(f"doubling needs an even number (>= 2) of sequences, got {len(seqs)}")
    _check_lengths(seqs)
    half = len(seqs) // 2
    return [x + y for x in seqs[:half] for y in seqs[half:]]


def bounds_u(n: int) -> tuple[int, int]:
    """Lower and upper bounds on the largest uncorrelated set of length ``n``.

    The lower bound uses ``4 * 3**(n // 4)``, which is exact for ``n`` divisible
    by four and floors the exponent otherwise.
    """
    if n < 2:
        raise ValueError("bounds_u needs n >= 2")
    return 4 * 3 ** (n // 4), 9 * 4 ** (n - 2)


def _max_independent(adj: list[int], candidates: int) -> int:
    """Bitmask of a maximum independent set; branches on a max-degree vertex."""
    best, best_size = 0, 0

    def search(cand: int, chosen: int, size: int) -> None:
        nonlocal best, best_size
        if size + cand.bit_count() <= best_size:
            return
        if cand == 0:
            best, best_size = chosen, size
            return
        pivot, pivot_deg = -1, -1
        c = cand
        while c:
            low = c & -c
            v = low.bit_length() - 1
            deg = (adj[v] & cand).bit_count()
            if deg > pivot_deg:
                pivot, pivot_deg = v, deg
            c ^= low
        if pivot_deg == 0:
            best, best_size = chosen | cand, size + cand.bit_count()
            return
        bit = 1 << pivot
        search(cand & ~bit & ~adj[pivot], chosen | bit, size + 1)
        search(cand & ~bit, chosen, size)

    search(candidates, 0, 0)
    return best


def max_uncorrelated_bruteforce(n: int) -> tuple[int, list[str]]:
    """Exact largest mutually uncorrelated set of length ``n`` (2 or 3)."""
    if not 2 <= n <= 3:
        raise ValueError("exhaustive search is limited to n in {2, 3}")
    verts = ["".join(p) for p in product("ACGT", repeat=n)]
    verts = [v for v in verts if is_self_uncorrelated(v)]
    raw = [v.encode() for v in verts]
    adj = [0] * len(verts)
    for i, a in enumerate(raw):
        for j, b in enumerate(raw):
            if i != j and (kernels.correlated(a, b, 1, 0) or kernels.correlated(b, a, 1, 0)):
                adj[i] |= 1 << j
    chosen = _max_independent(adj, (1 << len(verts)) - 1)
    witness = [v for i, v in enumerate(verts) if chosen >> i & 1]
    return len(witness), witness


@dataclass(frozen=True)
class AvoidanceCount:
    patterns: tuple[str, ...]
    counts: tuple[int, ...]

    def __getitem__(self, length: int) -> int:
        return self.counts[length]


def count_avoiding(patterns, length: int) -> AvoidanceCount:
    """Number of strings of each length ``0..length`` avoiding every pattern.

    Valid only for mutually uncorrelated patterns, where the generating
    function reduces to ``f(N) = 4 f(N-1) - m f(N-n)`` for ``N >= n``.
    """
    patterns = tuple(patterns)
    if not patterns:
        raise ValueError("need at least one pattern")
    if not is_mutually_uncorrelated(patterns):
        raise ValueError("counting recurrence requires a mutually uncorrelated pattern set")
    if length < 0:
        raise ValueError("length must be nonnegative")
    n, m = len(patterns[0]), len(patterns)
    f = [1]
    for N in range(1, length + 1):
        f.append(4 * f[N - 1] - (m * f[N - n] if N >= n else 0))
    return AvoidanceCount(patterns, tuple(f))


def count_avoiding_bruteforce(patterns, length: int) -> int:
    """Scan all ``4**length`` strings; the independent check on :func:`count_avoiding`."""
    return kernels.count_avoiders([p.encode() for p in patterns], length)
