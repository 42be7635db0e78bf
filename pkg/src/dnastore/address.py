"""Address sequence design: constraint validators and seeded greedy search.

Constraints on a set of equal-length addresses:

* C1  balanced GC content: bounded running digital sum on every prefix and a
  GC fraction inside a window on every prefix of at least ``prefix_window``;
* C2  pairwise Hamming distance at least ``d``;
* C3  mutual uncorrelatedness (optionally relaxed to overlaps ``>= k``);
* C4  no secondary structure, approximated by a hairpin-stem test that a
  real folding tool can replace via ``ConstraintConfig.folding``.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

from . import kernels
from .correlation import is_mutually_uncorrelated, is_self_uncorrelated
from .psc import PerturbConfig, build_codec, check_perturbation_unique


class AddressSearchError(RuntimeError):
    def __init__(self, message: str, rejections: dict):
        super().__init__(f"{message}; rejections: {dict(rejections)}")
        self.rejections = dict(rejections)


def stem_free(s: str, stem_len: int) -> bool:
    """True iff no ``stem_len``-mer has its reverse complement elsewhere in ``s``
    at a non-overlapping position (a hairpin-stem proxy)."""
    return kernels.stem_free(s.encode(), stem_len)


@dataclass(frozen=True)
class ConstraintConfig:
    n: int = 20
    rds_bound: int = 4
    min_distance: int | None = None
    prefix_window: int = 4
    uncorrelation_threshold: int = 1
    stem_len: int = 6
    gc_low: float = 0.4
    gc_high: float = 0.6
    # Reject addresses whose long-prefix perturbation cannot be undone; None skips.
    perturb_threshold: int | None = 10
    folding: Callable[[str], bool] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.min_distance is None:
            object.__setattr__(self, "min_distance", self.n // 2)
        if self.min_distance > self.n or self.prefix_window > self.n:
            raise ValueError("min_distance and prefix_window must not exceed n")
        if self.stem_len < 3:
            raise ValueError("stem_len must be >= 3")
        if not 0 <= self.gc_low <= self.gc_high <= 1:
            raise ValueError("need 0 <= gc_low <= gc_high <= 1")

    @property
    def d(self) -> int:
        return self.min_distance


def _check_len(s: str, cfg: ConstraintConfig) -> None:
    if len(s) != cfg.n:
        raise ValueError(f"expected length {cfg.n}, got {len(s)}")


def validate_c1(s: str, cfg: ConstraintConfig = ConstraintConfig()) -> bool:
    """|RDS| <= rds_bound on every prefix; GC fraction inside the window on
    every prefix of length at least ``prefix_window``."""
    _check_len(s, cfg)
    if kernels.rds_max(s.encode(), 0) > cfg.rds_bound:
        return False
    gc = 0
    for i, c in enumerate(s, 1):
        gc += c in "GC"
        if i >= cfg.prefix_window and not cfg.gc_low * i <= gc <= cfg.gc_high * i:
            return False
    return True


def _check_set(seqs) -> list[str]:
    seqs = list(seqs)
    if len({len(s) for s in seqs}) > 1:
        raise ValueError("addresses must share one length")
    return seqs


def validate_c2(seqs, cfg: ConstraintConfig = ConstraintConfig()) -> bool:
    seqs = _check_set(seqs)
    raw = [s.encode() for s in seqs]
    return all(
        kernels.hamming(a, b) >= cfg.d for i, a in enumerate(raw) for b in raw[i + 1 :]
    )


def validate_c3(seqs, cfg: ConstraintConfig = ConstraintConfig()) -> bool:
    seqs = _check_set(seqs)
    return is_mutually_uncorrelated(seqs, cfg.uncorrelation_threshold)


def validate_c4(s: str, cfg: ConstraintConfig = ConstraintConfig()) -> bool:
    if cfg.folding is not None:
        return cfg.folding(s)
    return stem_free(s, cfg.stem_len)


def perturbation_ok(s: str, cfg: ConstraintConfig = ConstraintConfig()) -> bool:
    if cfg.perturb_threshold is None:
        return True
    codec = build_codec(s, 1)
    return check_perturbation_unique(codec, PerturbConfig(cfg.perturb_threshold))


@dataclass
class AddressSet:
    members: list[str]
    config: ConstraintConfig
    seed: int
    candidates_tried: int = 0
    rejections: Counter = field(default_factory=Counter)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def _pair_strings(pairs: int) -> list[str]:
    # Three bits per pair pick one of {G,C}, one of {A,T}, and their order.
    table = [""]
    for _ in range(pairs):
        step = []
        for b in range(8):
            gc, at = "GC"[b & 1], "AT"[(b >> 1) & 1]
            step.append(gc + at if b & 4 else at + gc)
        table = [head + tail for tail in step for head in table]
    return table


_CHUNK = 4
_CHUNK_TABLE = _pair_strings(_CHUNK)


def _interleaved(bits: int, pairs: int) -> str:
    out = []
    while pairs >= _CHUNK:
        out.append(_CHUNK_TABLE[bits & 0xFFF])
        bits >>= 3 * _CHUNK
        pairs -= _CHUNK
    if pairs:
        out.append(_CHUNK_TABLE[bits & 0xFFF][: 2 * pairs])
    return "".join(out)


def candidate_stream(n: int, seed: int, uniform: bool = False):
    """Endless deterministic candidate stream.

    The default stream interleaves one {G,C} and one {A,T} base per pair of
    positions, in random order; ``uniform`` draws every base independently.
    """
    rng = random.Random(seed)
    pairs, odd = divmod(n, 2)
    while True:
        if uniform:
            bits = rng.getrandbits(2 * n)
            yield "".join("ACGT"[(bits >> (2 * i)) & 3] for i in range(n))
        else:
            s = _interleaved(rng.getrandbits(3 * pairs + 12), pairs)
            if odd:
                s += "ACGT"[rng.getrandbits(2)]
            yield s


def greedy_search(
    count: int,
    cfg: ConstraintConfig = ConstraintConfig(),
    seed: int = 0,
    budget: int = 10**7,
    uniform: bool = False,
) -> AddressSet:
    """Accept candidates in stream order while they satisfy C1-C4 with the set so far.

    Stops at ``count`` members or after ``budget`` candidates, whichever is
    first; the caller compares ``len(result)`` with ``count`` to detect a
    shortfall.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    accepted: list[str] = []
    raw_accepted: list[bytes] = []
    seen: set[str] = set()
    rej: Counter = Counter()
    tried = 0
    k = cfg.uncorrelation_threshold
    for cand in candidate_stream(cfg.n, seed, uniform):
        if len(accepted) >= count or tried >= budget:
            break
        tried += 1
        if cand in seen:
            rej["duplicate"] += 1
            continue
        seen.add(cand)
        raw = cand.encode()
        if not validate_c1(cand, cfg):
            rej["c1"] += 1
            continue
        if kernels.correlated(raw, raw, k, 1):
            rej["c3"] += 1
            continue
        verdict = kernels.compatible(raw, raw_accepted, cfg.d, k)
        if verdict == 1:
            rej["c2"] += 1
            continue
        if verdict == 2:
            rej["c3"] += 1
            continue
        if not validate_c4(cand, cfg):
            rej["c4"] += 1
            continue
        if not perturbation_ok(cand, cfg):
            rej["perturbation"] += 1
            continue
        accepted.append(cand)
        raw_accepted.append(raw)
    if not accepted:
        raise AddressSearchError(f"no address found within {tried} candidates", rej)
    return AddressSet(accepted, cfg, seed, tried, rej)


def validate_set(seqs, cfg: ConstraintConfig = ConstraintConfig()) -> dict[str, bool]:
    """Re-check all four constraints; keys ``c1``..``c4``."""
    seqs = list(seqs)
    return {
        "c1": all(validate_c1(s, cfg) for s in seqs),
        "c2": validate_c2(seqs, cfg),
        "c3": validate_c3(seqs, cfg),
        "c4": all(validate_c4(s, cfg) for s in seqs),
    }


def pair_addresses(addresses, blocks: int) -> list[tuple[str, str]]:
    """Consecutive members form (left, right) pairs; left ones drive the encoding."""
    members = list(addresses)
    if blocks < 1:
        raise ValueError("blocks must be >= 1")
    if len(members) < 2 * blocks:
        raise ValueError(f"{blocks} blocks need {2 * blocks} addresses, have {len(members)}")
    return [(members[2 * i], members[2 * i + 1]) for i in range(blocks)]


def read_pairs(text: str) -> list[tuple[str, str]]:
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.strip().split("\t")
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two tab-separated addresses")
        pairs.append((parts[0].upper(), parts[1].upper()))
    return pairs


def write_pairs(pairs) -> str:
    return "".join(f"{a}\t{b}\n" for a, b in pairs)
