"""Word-level compaction and 1000-nt block assembly.

Text is split on whitespace into words; each distinct word gets a fixed-width
index.  Six indices plus a leading marker form one integer, which becomes an
80-symbol prefix-synchronized body under the block's left address.  Twelve
bodies make the payload, flanked by the left and right addresses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .psc import (
    MalformedCodeword,
    PerturbConfig,
    PrefixCodec,
    RepairError,
    build_codec,
    code_psc,
    decode_checked,
    decode_with_repair,
    perturb,
)

NUCLEOTIDE_DALTONS = 650
DALTON_GRAMS = 1.67e-24


class CodecError(ValueError):
    pass


class BlockDecodeError(CodecError):
    """Decoding failed; ``block`` and ``sub_block`` locate the failure (None if n/a)."""

    def __init__(self, message: str, block: int, sub_block: int | None = None):
        where = f"block {block}" + ("" if sub_block is None else f", sub-block {sub_block}")
        super().__init__(f"{where}: {message}")
        self.block = block
        self.sub_block = sub_block


def tokenize(text: str) -> list[str]:
    return text.split()


def normalize(text: str) -> str:
    """Whitespace runs (line breaks included) become single spaces."""
    return " ".join(text.split())


@dataclass(frozen=True)
class Dictionary:
    words: tuple[str, ...]
    width: int = 12
    index_offset: int | None = None
    _lookup: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        if self.width < 2:
            raise CodecError("word width must be >= 2 bits")
        if self.index_offset is None:
            object.__setattr__(self, "index_offset", 1 << (self.width - 1))
        if self.index_offset < 1:
            raise CodecError("index_offset must be positive")
        if len(set(self.words)) != len(self.words):
            raise CodecError("dictionary words must be distinct")
        if self.index_offset + len(self.words) > self.pad_index:
            raise CodecError(
                f"{len(self.words)} distinct words do not fit {self.width}-bit indices "
                f"starting at {self.index_offset}; use a larger width"
            )
        object.__setattr__(
            self, "_lookup", {w: self.index_offset + i for i, w in enumerate(self.words)}
        )

    @property
    def pad_index(self) -> int:
        return (1 << self.width) - 1

    @property
    def capacity(self) -> int:
        return self.pad_index - self.index_offset

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self._lookup

    def index(self, word: str) -> int:
        try:
            return self._lookup[word]
        except KeyError:
            raise CodecError(f"word {word!r} not in dictionary") from None

    def word(self, index: int) -> str:
        i = index - self.index_offset
        if not 0 <= i < len(self.words):
            raise CodecError(f"index {index} not in dictionary")
        return self.words[i]

    def extended(self, new_words) -> Dictionary:
        """Copy with any unseen ``new_words`` appended; existing indices are kept."""
        words = list(self.words)
        for w in new_words:
            if w not in self._lookup and w not in words:
                words.append(w)
        return Dictionary(tuple(words), self.width, self.index_offset)


def build_dictionary(text: str, width: int = 12) -> Dictionary:
    words = tokenize(text)
    if not words:
        raise CodecError("text has no words")
    return Dictionary(tuple(dict.fromkeys(words)), width)


@dataclass(frozen=True)
class BlockLayout:
    addr_len: int = 20
    sub_blocks: int = 12
    sub_len: int = 80
    words_per_group: int = 6
    word_width: int = 12
    marker: str = "11"

    def __post_init__(self):
        if not self.marker or set(self.marker) - {"0", "1"}:
            raise CodecError("marker must be a nonempty bit string")
        for name in ("addr_len", "sub_blocks", "sub_len", "words_per_group", "word_width"):
            if getattr(self, name) < 1:
                raise CodecError(f"{name} must be positive")

    @property
    def block_len(self) -> int:
        return 2 * self.addr_len + self.sub_blocks * self.sub_len

    @property
    def payload_len(self) -> int:
        return self.sub_blocks * self.sub_len

    @property
    def words_per_block(self) -> int:
        return self.sub_blocks * self.words_per_group

    @property
    def group_bits(self) -> int:
        return len(self.marker) + self.words_per_group * self.word_width

    def check_capacity(self, codec: PrefixCodec) -> None:
        if codec.n != self.addr_len:
            raise CodecError(f"address length {codec.n} does not match layout ({self.addr_len})")
        if codec.lmax < self.sub_len or (1 << self.group_bits) > codec.G[self.sub_len]:
            cap = codec.G[self.sub_len] if codec.lmax >= self.sub_len else 0
            raise CodecError(
                f"{self.group_bits}-bit groups exceed the capacity of {self.sub_len}-symbol "
                f"bodies for {codec.address} ({cap.bit_length()} bits)"
            )


def group_to_integer(indices, layout: BlockLayout = BlockLayout()) -> int:
    indices = list(indices)
    if len(indices) != layout.words_per_group:
        raise CodecError(f"expected {layout.words_per_group} indices, got {len(indices)}")
    x = int(layout.marker, 2)
    for idx in indices:
        if not 0 <= idx < 1 << layout.word_width:
            raise CodecError(f"index {idx} does not fit {layout.word_width} bits")
        x = (x << layout.word_width) | idx
    return x


def integer_to_group(x: int, layout: BlockLayout = BlockLayout()) -> list[int]:
    w, k = layout.word_width, layout.words_per_group
    if x < 0 or x >> (w * k) != int(layout.marker, 2) or x.bit_length() != layout.group_bits:
        raise CodecError(f"integer {x} does not carry the marker {layout.marker}")
    mask = (1 << w) - 1
    return [(x >> (w * (k - 1 - i))) & mask for i in range(k)]


@dataclass(frozen=True)
class EncodedBlock:
    index: int
    left_addr: str
    right_addr: str
    payload: str

    @property
    def sequence(self) -> str:
        return self.left_addr + self.payload + self.right_addr


@dataclass(frozen=True)
class RepairEvent:
    block: int
    sub_block: int
    offset: int
    original: str
    replacement: str


def build_codecs(addresses, layout: BlockLayout = BlockLayout()) -> dict[str, PrefixCodec]:
    """One codec per distinct address, each capacity-checked against ``layout``."""
    codecs = {}
    for a in addresses:
        if a not in codecs:
            codec = build_codec(a, layout.sub_len)
            layout.check_capacity(codec)
            codecs[a] = codec
    return codecs


def _codec_for(codecs, address: str, layout: BlockLayout) -> PrefixCodec:
    if codecs is not None and address in codecs:
        return codecs[address]
    codec = build_codec(address, layout.sub_len)
    layout.check_capacity(codec)
    return codec


def encode_group(
    indices, codec: PrefixCodec, layout: BlockLayout, cfg: PerturbConfig | None
) -> str:
    body = code_psc(codec, layout.sub_len, group_to_integer(indices, layout))
    return body if cfg is None else perturb(body, codec, cfg)


def _first_irreversible(bodies, codec: PrefixCodec, cfg: PerturbConfig | None) -> int | None:
    if cfg is None:
        return None
    for g, body in enumerate(bodies):
        try:
            decode_checked(codec, body, cfg)
        except MalformedCodeword:
            return g
    return None


def encode_text(
    text: str,
    layout: BlockLayout = BlockLayout(),
    pairs=(),
    codecs: dict | None = None,
    perturb_cfg: PerturbConfig | None = PerturbConfig(),
    dictionary: Dictionary | None = None,
) -> tuple[list[EncodedBlock], Dictionary]:
    """Encode ``text`` into blocks.

    A pair is skipped, and the next one tried, if its left address reappears
    inside the block or a perturbed sub-block would not decode back.
    """
    words = tokenize(text)
    if not words:
        raise CodecError("text has no words")
    if dictionary is None:
        dictionary = build_dictionary(text, layout.word_width)
    elif dictionary.width != layout.word_width:
        raise CodecError("dictionary width differs from layout word width")
    idx = [dictionary.index(w) for w in words]
    per = layout.words_per_block
    nblocks = -(-len(idx) // per)
    idx += [dictionary.pad_index] * (nblocks * per - len(idx))
    pairs = list(pairs)
    if len(pairs) < nblocks:
        raise CodecError(f"{nblocks} blocks need {nblocks} address pairs, have {len(pairs)}")

    blocks: list[EncodedBlock] = []
    skipped = []
    p = 0
    for b in range(nblocks):
        chunk = idx[b * per : (b + 1) * per]
        while True:
            if p >= len(pairs):
                raise CodecError(
                    f"ran out of address pairs at block {b}; skipped: {', '.join(skipped)}"
                )
            left, right = pairs[p]
            p += 1
            codec = _codec_for(codecs, left, layout)
            bodies = [
                encode_group(chunk[g : g + layout.words_per_group], codec, layout, perturb_cfg)
                for g in range(0, per, layout.words_per_group)
            ]
            block = EncodedBlock(b, left, right, "".join(bodies))
            hit = block.sequence.find(left, 1)
            if hit >= 0:
                skipped.append(f"pair {p - 1} (address at offset {hit} of block {b})")
                continue
            bad = _first_irreversible(bodies, codec, perturb_cfg)
            if bad is None:
                break
            skipped.append(f"pair {p - 1} (perturbation of sub-block {bad} not invertible)")
        blocks.append(block)
    return blocks, dictionary


def group_is_valid(x: int, dictionary: Dictionary, layout: BlockLayout) -> bool:
    """True iff ``x`` carries the marker and only dictionary or pad indices."""
    try:
        indices = integer_to_group(x, layout)
    except CodecError:
        return False
    lo, hi = dictionary.index_offset, dictionary.index_offset + len(dictionary)
    return all(lo <= i < hi or i == dictionary.pad_index for i in indices)


def decode_sub_block(
    body: str,
    codec: PrefixCodec,
    dictionary: Dictionary,
    layout: BlockLayout,
    cfg: PerturbConfig | None,
    repair: bool,
) -> tuple[list[int], list]:
    """Indices of one sub-block, plus any repairs applied."""
    def accept(x):
        return group_is_valid(x, dictionary, layout)

    if repair:
        x, reps = decode_with_repair(codec, body, cfg, accept)
    else:
        x, reps = decode_checked(codec, body, cfg), []
    return integer_to_group(x, layout), reps


def decode_blocks(
    blocks,
    dictionary: Dictionary,
    layout: BlockLayout = BlockLayout(),
    codecs: dict | None = None,
    perturb_cfg: PerturbConfig | None = PerturbConfig(),
    repair: bool = True,
    log: list | None = None,
) -> str:
    """Recover the text from block sequences (strings or :class:`EncodedBlock`).

    ``codecs`` maps each known left address to its codec; a block whose prefix
    is not among them is rejected.  Repairs are appended to ``log``.
    """
    words = []
    for b, blk in enumerate(blocks):
        seq = blk.sequence if isinstance(blk, EncodedBlock) else blk
        if len(seq) != layout.block_len:
            raise BlockDecodeError(f"length {len(seq)}, expected {layout.block_len}", b)
        left = seq[: layout.addr_len]
        if codecs is None or left not in codecs:
            raise BlockDecodeError(f"unknown left address {left}", b)
        codec = codecs[left]
        payload = seq[layout.addr_len : layout.addr_len + layout.payload_len]
        for g in range(layout.sub_blocks):
            body = payload[g * layout.sub_len : (g + 1) * layout.sub_len]
            try:
                indices, reps = decode_sub_block(
                    body, codec, dictionary, layout, perturb_cfg, repair
                )
            except (MalformedCodeword, RepairError, CodecError) as e:
                raise BlockDecodeError(str(e), b, g) from e
            if log is not None:
                log.extend(RepairEvent(b, g, r.offset, r.original, r.replacement) for r in reps)
            for i in indices:
                if i == dictionary.pad_index:
                    continue
                try:
                    words.append(dictionary.word(i))
                except CodecError as e:
                    raise BlockDecodeError(str(e), b, g) from e
    return " ".join(words)


def density(nbytes: int, nucleotides: int) -> float:
    """Bytes per gram of single-stranded DNA."""
    if nucleotides <= 0:
        raise ValueError("nucleotides must be positive")
    if nbytes < 0:
        raise ValueError("bytes must be nonnegative")
    return nbytes / (nucleotides * NUCLEOTIDE_DALTONS * DALTON_GRAMS)


@dataclass(frozen=True)
class PlanReport:
    words: int
    distinct_words: int
    characters: int
    bytes: int
    blocks: int
    nucleotides: int
    density: float
    ascii_blocks: int

    def items(self) -> list[tuple[str, object]]:
        return [(k, getattr(self, k)) for k in self.__dataclass_fields__]


def plan(text: str, layout: BlockLayout = BlockLayout()) -> PlanReport:
    """Sizes for word-level encoding next to a 7-bit ASCII baseline."""
    words = tokenize(text)
    chars = len(normalize(text))
    nbytes = len(text.encode())
    blocks = -(-len(words) // layout.words_per_block)
    nt = blocks * layout.block_len
    ascii_blocks = math.ceil(7 * chars / (2 * layout.payload_len))
    return PlanReport(
        words=len(words),
        distinct_words=len(set(words)),
        characters=chars,
        bytes=nbytes,
        blocks=blocks,
        nucleotides=nt,
        density=density(nbytes, nt) if nt else 0.0,
        ascii_blocks=ascii_blocks,
    )


# -- file formats ---------------------------------------------------------

DICT_HEADER = "DNASTORE-DICT v1"
MANIFEST_HEADER = "DNASTORE-MANIFEST v1"


def write_dictionary(d: Dictionary) -> str:
    lines = [DICT_HEADER]
    lines += [f"{d.index_offset + i}\t{w}" for i, w in enumerate(d.words)]
    return "\n".join(lines) + "\n"


def read_dictionary(text: str, width: int = 12) -> Dictionary:
    lines = text.splitlines()
    if not lines or lines[0].strip() != DICT_HEADER:
        raise CodecError(f"line 1: expected header {DICT_HEADER!r}")
    words, offset = [], None
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].isdigit() or not parts[1]:
            raise CodecError(f"line {lineno}: expected 'index<TAB>word'")
        i = int(parts[0])
        if offset is None:
            offset = i
        if i != offset + len(words):
            raise CodecError(f"line {lineno}: index {i} out of order")
        words.append(parts[1])
    return Dictionary(tuple(words), width, offset)


@dataclass(frozen=True)
class Manifest:
    layout: BlockLayout
    pairs: tuple[tuple[str, str], ...]
    perturb_threshold: int | None = 10

    @property
    def perturb_cfg(self) -> PerturbConfig | None:
        if self.perturb_threshold is None:
            return None
        return PerturbConfig(self.perturb_threshold)


_LAYOUT_INTS = ("addr_len", "sub_blocks", "sub_len", "words_per_group", "word_width")


def write_manifest(m: Manifest) -> str:
    lines = [MANIFEST_HEADER]
    lines += [f"{k}={getattr(m.layout, k)}" for k in _LAYOUT_INTS]
    lines.append(f"marker={m.layout.marker}")
    thr = "none" if m.perturb_threshold is None else m.perturb_threshold
    lines.append(f"perturb_threshold={thr}")
    lines += [f"{i}\t{a}\t{b}" for i, (a, b) in enumerate(m.pairs)]
    return "\n".join(lines) + "\n"


def read_manifest(text: str) -> Manifest:
    lines = text.splitlines()
    if not lines or lines[0].strip() != MANIFEST_HEADER:
        raise CodecError(f"line 1: expected header {MANIFEST_HEADER!r}")
    params: dict[str, str] = {}
    pairs = []
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        if "=" in line and "\t" not in line:
            k, v = line.strip().split("=", 1)
            params[k] = v
            continue
        parts = line.strip().split("\t")
        if len(parts) != 3 or parts[0] != str(len(pairs)):
            raise CodecError(f"line {lineno}: expected '{len(pairs)}<TAB>left<TAB>right'")
        pairs.append((parts[1], parts[2]))
    try:
        kw = {k: int(params[k]) for k in _LAYOUT_INTS if k in params}
        thr = params.get("perturb_threshold", "10")
        threshold = None if thr == "none" else int(thr)
    except ValueError as e:
        raise CodecError(f"bad manifest parameter: {e}") from None
    if "marker" in params:
        kw["marker"] = params["marker"]
    return Manifest(BlockLayout(**kw), tuple(pairs), threshold)
