"""An in-silico DNA pool: primer selection, gBlock splicing, overlap-extension
assembly and word-level rewriting of individual blocks.

PCR is modelled by anchored terminal matching: a forward primer must match
the 5' end of a block and a reverse primer the reverse complement of its 3'
end, each within a Hamming tolerance.  Pools are immutable; every edit
returns a new pool.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .codec import (
    BlockDecodeError,
    BlockLayout,
    CodecError,
    Dictionary,
    decode_blocks,
    encode_group,
)
from .psc import MalformedCodeword, PerturbConfig, PrefixCodec, build_codec, decode_checked
from .seqcore import SequenceError, dna, hamming, reverse_complement

POOL_HEADER = ";DNASTORE-POOL v1"
MAX_TOLERANCE = 3


class PoolError(ValueError):
    pass


class AmbiguityError(PoolError):
    pass


@dataclass(frozen=True)
class PoolRecord:
    id: str
    sequence: str
    left_addr: str
    right_addr: str
    copies: int = 1

    def __post_init__(self):
        if not self.id or any(c.isspace() for c in self.id):
            raise PoolError(f"bad record id {self.id!r}")
        if not self.sequence.startswith(self.left_addr):
            raise PoolError(f"{self.id}: sequence does not begin with its left address")
        if not self.sequence.endswith(self.right_addr):
            raise PoolError(f"{self.id}: sequence does not end with its right address")
        if len(self.sequence) < len(self.left_addr) + len(self.right_addr):
            raise PoolError(f"{self.id}: sequence shorter than its two addresses")
        if self.copies < 1:
            raise PoolError(f"{self.id}: copies must be >= 1")


@dataclass(frozen=True)
class Pool:
    records: tuple[PoolRecord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        ids = [r.id for r in self.records]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise PoolError(f"duplicate record id {dup}")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def ids(self) -> list[str]:
        return [r.id for r in self.records]

    def get(self, id: str) -> PoolRecord:
        for r in self.records:
            if r.id == id:
                return r
        raise PoolError(f"no block with id {id}")

    def with_record(self, record: PoolRecord) -> Pool:
        """Copy with the record of the same id replaced."""
        self.get(record.id)
        return Pool(tuple(record if r.id == record.id else r for r in self.records))

    @classmethod
    def from_blocks(cls, blocks, prefix: str = "B") -> Pool:
        return cls(
            tuple(
                PoolRecord(f"{prefix}{b.index + 1}", b.sequence, b.left_addr, b.right_addr)
                for b in blocks
            )
        )


@dataclass(frozen=True)
class Primer:
    sequence: str
    direction: str = "forward"

    def __post_init__(self):
        object.__setattr__(self, "sequence", dna(self.sequence))
        if len(self.sequence) < 10:
            raise PoolError("primers must be at least 10 nt long")
        if self.direction not in ("forward", "reverse"):
            raise PoolError("direction must be 'forward' or 'reverse'")


@dataclass(frozen=True)
class Fragment:
    sequence: str
    role: str = "middle"

    def __post_init__(self):
        object.__setattr__(self, "sequence", dna(self.sequence))
        if not self.sequence:
            raise PoolError("empty fragment")
        if self.role not in ("upstream", "middle", "downstream"):
            raise PoolError("role must be upstream, middle or downstream")


def _seq(x) -> str:
    return x.sequence if isinstance(x, (Primer, Fragment)) else dna(x)


def primer_matches(record_seq: str, fwd, rev, tolerance: int = 0) -> bool:
    f, r = _seq(fwd), _seq(rev)
    if len(f) > len(record_seq) or len(r) > len(record_seq):
        return False
    return (
        hamming(f, record_seq[: len(f)]) <= tolerance
        and hamming(r, reverse_complement(record_seq[-len(r) :])) <= tolerance
    )


def select(pool: Pool, fwd, rev, tolerance: int = 0) -> list[str]:
    """Ids of blocks whose ends both pair with the primers."""
    if not 0 <= tolerance <= MAX_TOLERANCE:
        raise PoolError(f"tolerance must be in 0..{MAX_TOLERANCE}")
    return [r.id for r in pool if primer_matches(r.sequence, fwd, rev, tolerance)]


def amplify(pool: Pool, fwd, rev, tolerance: int = 0, factor: int = 2**20) -> Pool:
    """Selected blocks only, each with its copy count multiplied by ``factor``."""
    chosen = set(select(pool, fwd, rev, tolerance))
    return Pool(tuple(replace(r, copies=r.copies * factor) for r in pool if r.id in chosen))


def _unique_find(hay: str, needle: str, what: str) -> int:
    first = hay.find(needle)
    if first < 0:
        raise PoolError(f"{what} not found")
    if hay.find(needle, first + 1) >= 0:
        raise AmbiguityError(f"{what} occurs more than once")
    return first


def pcr_product(template: str, fwd, rev, anneal: int = 15) -> str:
    """Product of one PCR on ``template``.

    The 3'-most ``anneal`` bases of each primer must bind exactly once; any
    5' overhang of a primer is carried into the product, which is how
    overlap-extension fragments acquire their shared ends.
    """
    f, r = _seq(fwd), reverse_complement(_seq(rev))
    if min(len(f), len(r)) < anneal:
        raise PoolError(f"primers must be at least {anneal} nt")
    i = _unique_find(template, f[-anneal:], "forward primer site")
    j = _unique_find(template, r[:anneal], "reverse primer site")
    if j < i + anneal:
        raise PoolError("reverse primer site lies upstream of the forward site")
    return f + template[i + anneal : j] + r


def gblock_rewrite(pool: Pool, id: str, replacement, min_homology: int = 30) -> Pool:
    """Splice ``replacement`` into block ``id`` between its homology anchors."""
    rec = pool.get(id)
    frag = _seq(replacement)
    if len(frag) < min_homology:
        raise PoolError(f"fragment shorter than the {min_homology}-nt homology arms")
    seq = rec.sequence
    start = _unique_find(seq, frag[:min_homology], "5' homology arm")
    tail = _unique_find(seq, frag[-min_homology:], "3' homology arm")
    end = tail + min_homology
    if end < start + min_homology:
        raise PoolError("3' homology arm lies upstream of the 5' arm")
    new = seq[:start] + frag + seq[end:]
    # Exact arms keep both addresses, but a record must never leave this
    # function without them.
    if not (new.startswith(rec.left_addr) and new.endswith(rec.right_addr)):
        raise PoolError(f"{id}: rewrite would damage an address")
    return pool.with_record(replace(rec, sequence=new))


def oe_pcr_assemble(fragments, min_overlap: int = 30) -> str:
    """Join fragments left to right through their exact end overlaps."""
    seqs = [_seq(f) for f in fragments]
    if len(seqs) < 2:
        raise PoolError("need at least two fragments")
    acc = seqs[0]
    for j, nxt in enumerate(seqs[1:], 1):
        hits = [
            k
            for k in range(min_overlap, min(len(acc), len(nxt)) + 1)
            if acc.endswith(nxt[:k])
        ]
        if not hits:
            raise PoolError(
                f"junction {j - 1}/{j}: no overlap of at least {min_overlap} nt"
            )
        if len(hits) > 1:
            raise AmbiguityError(f"junction {j - 1}/{j}: overlaps of lengths {hits}")
        acc += nxt[hits[0] :]
    return acc


def ordered_records(pool: Pool, pairs) -> list[PoolRecord]:
    """Records in address-pair order; unknown pairs are rejected."""
    by_pair = {}
    for rec in pool:
        by_pair.setdefault((rec.left_addr, rec.right_addr), rec)
    rank = {tuple(p): i for i, p in enumerate(pairs)}
    for rec in pool:
        if (rec.left_addr, rec.right_addr) not in rank:
            raise PoolError(f"{rec.id}: address pair not in the manifest")
    return sorted(by_pair.values(), key=lambda r: rank[(r.left_addr, r.right_addr)])


def edit_words(
    pool: Pool,
    id: str,
    group_index: int,
    new_words,
    dictionary: Dictionary,
    layout: BlockLayout = BlockLayout(),
    codecs: dict | None = None,
    perturb_cfg: PerturbConfig | None = PerturbConfig(),
) -> tuple[Pool, Dictionary]:
    """Re-encode one six-word group of block ``id``; only that sub-block changes.

    Unseen words are appended to the dictionary, which is returned alongside
    the new pool.
    """
    rec = pool.get(id)
    new_words = list(new_words)
    if len(new_words) != layout.words_per_group:
        raise CodecError(f"expected {layout.words_per_group} words, got {len(new_words)}")
    if not 0 <= group_index < layout.sub_blocks:
        raise CodecError(f"group index must be in 0..{layout.sub_blocks - 1}")
    if len(rec.sequence) != layout.block_len:
        raise CodecError(f"{id}: length {len(rec.sequence)}, expected {layout.block_len}")
    codec: PrefixCodec = (codecs or {}).get(rec.left_addr) or build_codec(
        rec.left_addr, layout.sub_len
    )
    layout.check_capacity(codec)
    try:
        decode_blocks(
            [rec.sequence], dictionary, layout, {rec.left_addr: codec}, perturb_cfg, repair=False
        )
    except BlockDecodeError as e:
        raise CodecError(f"{id} does not decode cleanly: {e}") from e

    dictionary = dictionary.extended(new_words)
    body = encode_group([dictionary.index(w) for w in new_words], codec, layout, perturb_cfg)
    try:
        decode_checked(codec, body, perturb_cfg)
    except MalformedCodeword as e:
        raise CodecError(f"new group for {id} cannot be perturbed reversibly") from e
    lo = layout.addr_len + group_index * layout.sub_len
    seq = rec.sequence[:lo] + body + rec.sequence[lo + layout.sub_len :]
    if seq.find(rec.left_addr, 1) >= 0:
        raise CodecError(f"new group for {id} recreates its left address")
    return pool.with_record(replace(rec, sequence=seq)), dictionary


# -- persistence ----------------------------------------------------------


def dumps(pool: Pool) -> str:
    lines = [POOL_HEADER]
    for r in pool:
        head = f">{r.id} left={r.left_addr} right={r.right_addr}"
        if r.copies != 1:
            head += f" copies={r.copies}"
        lines += [head, r.sequence]
    return "\n".join(lines) + "\n"


def loads(text: str) -> Pool:
    lines = text.splitlines()
    if not lines or lines[0].strip() != POOL_HEADER:
        raise PoolError(f"line 1: expected header {POOL_HEADER!r}")
    records = []
    ids = set()
    header, header_line = None, 0
    for lineno, line in enumerate(lines[1:], 2):
        line = line.strip()
        if not line or line.startswith(";"):
            continue
        if line.startswith(">"):
            if header is not None:
                raise PoolError(f"line {lineno}: record at line {header_line} has no sequence")
            header, header_line = line, lineno
            continue
        if header is None:
            raise PoolError(f"line {lineno}: sequence without a header")
        fields = header[1:].split()
        try:
            attrs = dict(f.split("=", 1) for f in fields[1:])
            rid = fields[0]
            if rid in ids:
                raise PoolError(f"duplicate record id {rid}")
            rec = PoolRecord(
                rid,
                dna(line),
                dna(attrs["left"]),
                dna(attrs["right"]),
                int(attrs.get("copies", 1)),
            )
        except (PoolError, SequenceError, KeyError, ValueError, IndexError) as e:
            raise PoolError(f"line {header_line}: malformed record ({e})") from None
        ids.add(rid)
        records.append(rec)
        header = None
    if header is not None:
        raise PoolError(f"line {header_line}: record has no sequence")
    return Pool(tuple(records))


def pool_save(pool: Pool, destination) -> None:
    with open(os.fspath(destination), "w") as fh:
        fh.write(dumps(pool))


def pool_load(source) -> Pool:
    with open(os.fspath(source)) as fh:
        return loads(fh.read())

