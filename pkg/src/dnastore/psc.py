"""Prefix-synchronized coding against a single self-uncorrelated address.

An integer ``0 <= x < G[l]`` is written as ``l`` symbols that never contain
the address ``P``.  The body is a run of segments ``P[:t-1] + r`` where ``r``
is a replacement symbol for position ``t``, closed by a ternary tail over
the three symbols other than ``P[-1]``.

Long address prefixes inside a body can be *perturbed*: the outer edges are
kept and the middle is rotated, so primers for ``P`` do not bind inside the
data.  :func:`unperturb` undoes this with a greedy parse whose correctness for
a given address is certified by :func:`check_perturbation_unique`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from . import kernels
from .correlation import is_self_uncorrelated

# Replacement symbols are ranked alphabetically; tail digits follow A, T, G, C.
# Both orders drop the address's final symbol.  Together they reproduce the
# AGCTG worked example (first replacement C, tail ATCT for 16).
REPLACEMENT_ORDER = "ACGT"
DIGIT_ORDER = "ATGC"


class MalformedCodeword(ValueError):
    """A body that no integer encodes to; ``offset`` is where parsing failed."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class RepairError(ValueError):
    def __init__(self, message: str, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)


@dataclass(frozen=True)
class PrefixCodec:
    address: str
    replacement_sets: tuple[str, ...]
    digits: str
    G: tuple[int, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.address)

    @property
    def excluded(self) -> str:
        return self.address[-1]

    @property
    def lmax(self) -> int:
        return len(self.G) - 1


def build_codec(address: str, lmax: int) -> PrefixCodec:
    """Precompute replacement sets and the capacity table ``G[0..lmax]``."""
    n = len(address)
    if n < 2:
        raise ValueError("address must have length >= 2")
    if not is_self_uncorrelated(address):
        raise ValueError(f"address {address} is not self-uncorrelated")
    last = address[-1]
    reps = tuple(
        "".join(c for c in REPLACEMENT_ORDER if c not in (last, address[i]))
        for i in range(n - 1)
    )
    digits = "".join(c for c in DIGIT_ORDER if c != last)
    G = [1]
    for l in range(1, lmax + 1):
        if l < n:
            G.append(3**l)
        else:
            G.append(sum(len(reps[i - 1]) * G[l - i] for i in range(1, n)))
    return PrefixCodec(address, reps, digits, tuple(G))


def capacity(codec: PrefixCodec, l: int) -> int:
    if not 1 <= l <= codec.lmax:
        raise ValueError(f"length {l} outside 1..{codec.lmax}")
    return codec.G[l]


def _theta(codec: PrefixCodec, y: int, l: int) -> str:
    out = []
    for _ in range(l):
        y, d = divmod(y, 3)
        out.append(codec.digits[d])
    return "".join(reversed(out))


def code_psc(codec: PrefixCodec, l: int, x: int) -> str:
    """Body of length ``l`` for integer ``x``; never contains the address."""
    if not 0 <= x < capacity(codec, l):
        raise ValueError(f"x={x} outside [0, {codec.G[l]}) for length {l}")
    P, G, reps, n = codec.address, codec.G, codec.replacement_sets, codec.n
    parts = []
    while l >= n:
        t, y = 1, x
        while y >= len(reps[t - 1]) * G[l - t]:
            y -= len(reps[t - 1]) * G[l - t]
            t += 1
        a, x = divmod(y, G[l - t])
        parts.append(P[: t - 1] + reps[t - 1][a])
        l -= t
    parts.append(_theta(codec, x, l))
    return "".join(parts)


def encode_psc(codec: PrefixCodec, l: int, x: int) -> str:
    return codec.address + code_psc(codec, l, x)


def decode_psc(codec: PrefixCodec, body: str) -> int:
    """Inverse of :func:`code_psc`; raises :class:`MalformedCodeword`."""
    P, G, reps, n = codec.address, codec.G, codec.replacement_sets, codec.n
    l = len(body)
    if l > codec.lmax:
        raise ValueError(f"body length {l} exceeds codec table ({codec.lmax})")
    raw = body.encode()
    pos, x = 0, 0
    while l - pos >= n:
        r = l - pos
        t = kernels.lcp(raw, pos, P.encode()) + 1
        if t > n - 1:
            raise MalformedCodeword("address prefix too long", pos)
        s = reps[t - 1].find(body[pos + t - 1])
        if s < 0:
            raise MalformedCodeword(f"symbol {body[pos + t - 1]} cannot end a segment", pos + t - 1)
        x += sum(len(reps[i - 1]) * G[r - i] for i in range(1, t)) + s * G[r - t]
        pos += t
    y = 0
    for i in range(pos, l):
        d = codec.digits.find(body[i])
        if d < 0:
            raise MalformedCodeword(f"symbol {body[i]} in tail", i)
        y = 3 * y + d
    return x + y


# -- perturbation ---------------------------------------------------------


def default_edge(length: int) -> int:
    return length // 4 + 1


@dataclass(frozen=True)
class PerturbConfig:
    threshold: int = 10
    edge: Callable[[int], int] = default_edge

    def __post_init__(self):
        if self.threshold < 4:
            raise ValueError("perturbation threshold must be >= 4")


def perturb_prefix(s: str, cfg: PerturbConfig = PerturbConfig()) -> str:
    """Keep both edges of ``s`` and rotate the middle left by half its length."""
    L = len(s)
    e = cfg.edge(L)
    if 2 * e >= L:
        raise ValueError(f"edges of {e} leave no middle in a length-{L} prefix")
    mid = s[e : L - e]
    k = len(mid) // 2
    return s[:e] + mid[k:] + mid[:k] + s[L - e :]


def _perturbable(codec: PrefixCodec, cfg: PerturbConfig) -> list[int]:
    return [L for L in range(cfg.threshold + 1, codec.n + 1) if 2 * cfg.edge(L) < L]


@lru_cache(maxsize=256)
def _patterns(codec: PrefixCodec, cfg: PerturbConfig) -> tuple[tuple[int, str], ...]:
    # Longest first: the greedy inverse tries these in order.
    return tuple(
        (L, perturb_prefix(codec.address[:L], cfg))
        for L in sorted(_perturbable(codec, cfg), reverse=True)
    )


def perturb(s: str, codec: PrefixCodec, cfg: PerturbConfig = PerturbConfig()) -> str:
    """Perturb every long address prefix met while walking ``s`` segment by segment.

    The walk starts at 0 and, at each boundary, matches the longest prefix of
    the address, then skips it plus one terminating symbol.  This is exactly
    the decoder's segmentation on codeword bodies.
    """
    P = codec.address.encode()
    raw = s.encode()
    out = []
    i = 0
    while i < len(s):
        L = kernels.lcp(raw, i, P)
        if L > cfg.threshold and 2 * cfg.edge(L) < L:
            out.append(perturb_prefix(s[i : i + L], cfg))
            out.append(s[i + L : i + L + 1])
        else:
            out.append(s[i : i + L + 1])
        i += L + 1
    return "".join(out)


def unperturb(s: str, codec: PrefixCodec, cfg: PerturbConfig = PerturbConfig()) -> str:
    """Greedy inverse of :func:`perturb`."""
    P = codec.address
    praw = P.encode()
    raw = s.encode()
    patterns = _patterns(codec, cfg)
    out = []
    i = 0
    while i < len(s):
        for L, q in patterns:
            if s.startswith(q, i) and (i + L == len(s) or L == len(P) or s[i + L] != P[L]):
                out.append(P[:L])
                out.append(s[i + L : i + L + 1])
                i += L + 1
                break
        else:
            L = kernels.lcp(raw, i, praw)
            out.append(s[i : i + L + 1])
            i += L + 1
    return "".join(out)


def perturbation_conflicts(codec: PrefixCodec, cfg: PerturbConfig = PerturbConfig()) -> list[int]:
    """Perturbed prefix lengths the greedy inverse could misread in a codeword.

    For each perturbed pattern ``w`` the search asks whether a valid body
    stream that does *not* start with ``w``'s own segment can still begin
    with ``w``.  Streams are modelled conservatively as any sequence of
    segments ``P[:L] + c`` (raw for short ``L``, perturbed for long ``L``)
    with ``c`` neither ``P[L]`` nor the excluded symbol, possibly cut short.
    An empty result certifies that :func:`unperturb` inverts :func:`perturb`
    on every codeword body.
    """
    P, pn = codec.address, codec.excluded
    patterns = dict(_patterns(codec, cfg))
    bad = []
    for Lw, w in sorted(patterns.items()):
        if w == P[:Lw]:
            bad.append(Lw)
            continue
        pw = P.encode()

        @lru_cache(maxsize=None)
        def reachable(j: int, first: bool) -> bool:
            if j >= len(w):
                return True
            rest = w[j:]
            L = kernels.lcp(rest.encode(), 0, pw)
            if L not in patterns:
                if j + L >= len(w):
                    return True
                if w[j + L] != pn and reachable(j + L + 1, False):
                    return True
            for L2, q in patterns.items():
                if first and L2 >= Lw:
                    continue
                if len(rest) <= L2:
                    if q.startswith(rest):
                        return True
                elif rest.startswith(q):
                    c = rest[L2]
                    if c != pn and (L2 == len(P) or c != P[L2]) and reachable(j + L2 + 1, False):
                        return True
            return False

        if reachable(0, True):
            bad.append(Lw)
    return bad


def check_perturbation_unique(codec: PrefixCodec, cfg: PerturbConfig = PerturbConfig()) -> bool:
    return not perturbation_conflicts(codec, cfg)


# -- repair ---------------------------------------------------------------


@dataclass(frozen=True)
class Repair:
    offset: int
    original: str
    replacement: str


def decode_checked(codec: PrefixCodec, s: str, cfg: PerturbConfig | None = None) -> int:
    """Decode ``s`` (perturbed when ``cfg`` is given) and insist it re-encodes to itself."""
    body = s if cfg is None else unperturb(s, codec, cfg)
    x = decode_psc(codec, body)
    expect = code_psc(codec, len(s), x)
    if cfg is not None:
        expect = perturb(expect, codec, cfg)
    if expect != s:
        raise MalformedCodeword("string is not the image of its decoded value", 0)
    return x


def decode_with_repair(
    codec: PrefixCodec,
    s: str,
    cfg: PerturbConfig | None = None,
    accept: Callable[[int], bool] | None = None,
) -> tuple[int, list[Repair]]:
    """Decode ``s``, fixing at most one substituted symbol.

    With ``cfg`` the input is a perturbed body.  ``accept`` lets the caller
    reject decoded values that are valid codewords but meaningless payloads.
    When the clean parse fails, every single-symbol substitution is tried; the
    repair is accepted only if exactly one of them yields an acceptable
    codeword.  Since the true correction is always among the viable ones, an
    accepted repair is never wrong.
    """
    try:
        x = decode_checked(codec, s, cfg)
        if accept is None or accept(x):
            return x, []
    except MalformedCodeword:
        pass
    viable = []
    for i, c in enumerate(s):
        for b in "ACGT":
            if b == c:
                continue
            cand = s[:i] + b + s[i + 1 :]
            try:
                x = decode_checked(codec, cand, cfg)
            except MalformedCodeword:
                continue
            if accept is not None and not accept(x):
                continue
            viable.append((x, Repair(i, c, b)))
    if len(viable) == 1:
        x, rep = viable[0]
        return x, [rep]
    if not viable:
        raise RepairError("no single substitution yields an acceptable codeword")
    raise RepairError(
        f"{len(viable)} single substitutions yield acceptable codewords", [r for _, r in viable]
    )
