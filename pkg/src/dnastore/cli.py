"""Command-line entry point: ``dnastore <command> ...``.

Exit codes: 0 success, 1 error, 2 address search fell short of ``--count``,
3 selection matched nothing.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import BACKEND, __version__
from .address import (
    AddressSearchError,
    ConstraintConfig,
    greedy_search,
    pair_addresses,
    read_pairs,
    write_pairs,
)
from .codec import (
    BlockLayout,
    CodecError,
    Manifest,
    build_codecs,
    decode_blocks,
    density,
    encode_text,
    plan,
    read_dictionary,
    read_manifest,
    write_dictionary,
    write_manifest,
)
from .correlation import (
    bounds_u,
    count_avoiding,
    count_avoiding_bruteforce,
    max_uncorrelated_bruteforce,
)
from .pool import (
    Fragment,
    Pool,
    PoolError,
    dumps,
    edit_words,
    gblock_rewrite,
    loads,
    ordered_records,
    select,
)
from .psc import PerturbConfig
from .seqcore import SequenceError, dna, gc_fraction, write_sequences

EXIT_OK, EXIT_ERROR, EXIT_SHORT, EXIT_EMPTY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # Exit code 2 is reserved for an address shortfall.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def report(pairs, fmt: str, out=None) -> None:
    """Aligned ``key  value`` lines, or ``key=value`` lines with ``fmt='kv'``."""
    out = out or sys.stdout
    pairs = [(k, _fmt_value(v)) for k, v in pairs]
    if fmt == "kv":
        out.writelines(f"{k}={v}\n" for k, v in pairs)
        return
    width = max((len(k) for k, _ in pairs), default=0)
    out.writelines(f"{k:<{width}}  {v}\n" for k, v in pairs)


def _fmt_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.4g}"
    return str(v)


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write(path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}") from None


def _layout(args, addr_len: int = 20) -> BlockLayout:
    return BlockLayout(
        addr_len=addr_len,
        sub_blocks=args.sub_blocks,
        sub_len=args.sub_len,
        words_per_group=args.words_per_group,
        word_width=args.word_width,
        marker=args.marker,
    )


def _perturb_cfg(threshold):
    return None if threshold is None else PerturbConfig(threshold)


# -- commands -------------------------------------------------------------


def cmd_addrgen(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    cfg = ConstraintConfig(
        n=args.n,
        rds_bound=args.rds_bound,
        min_distance=args.min_distance,
        prefix_window=args.prefix_window,
        uncorrelation_threshold=args.k,
        stem_len=args.stem_len,
        gc_low=args.gc_low,
        gc_high=args.gc_high,
        perturb_threshold=None if args.no_perturb_check else args.perturb_threshold,
    )
    try:
        result = greedy_search(args.count, cfg, args.seed, args.budget, args.uniform)
    except AddressSearchError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SHORT
    members = result.members
    if args.out:
        _write(args.out, write_sequences(members))
    else:
        sys.stdout.write(write_sequences(members))
    if args.pairs:
        npairs = len(members) // 2
        _write(args.pairs, write_pairs(pair_addresses(members, npairs)) if npairs else "")
    rows = [
        ("requested", args.count),
        ("found", len(members)),
        ("candidates", result.candidates_tried),
        ("seed", args.seed),
        ("n", cfg.n),
        ("min_distance", cfg.d),
    ]
    rows += [(f"rejected_{k}", v) for k, v in sorted(result.rejections.items())]
    report(rows, args.format, sys.stderr if not args.out else sys.stdout)
    return EXIT_OK if len(members) >= args.count else EXIT_SHORT


def cmd_encode(args) -> int:
    text = _read(args.text)
    pairs = read_pairs(_read(args.pairs))
    if not pairs:
        raise UsageError("pair file is empty")
    layout = _layout(args, len(pairs[0][0]))
    cfg = _perturb_cfg(None if args.no_perturb else args.perturb_threshold)
    blocks, dictionary = encode_text(text, layout, pairs, perturb_cfg=cfg)
    pool = Pool.from_blocks(blocks)
    manifest = Manifest(
        layout, tuple((b.left_addr, b.right_addr) for b in blocks), cfg and cfg.threshold
    )
    _write(args.out, dumps(pool))
    _write(args.dict, write_dictionary(dictionary))
    _write(args.manifest, write_manifest(manifest))
    rows = [
        ("blocks", len(blocks)),
        ("words", len(text.split())),
        ("distinct_words", len(dictionary)),
        ("pairs_unused", len(pairs) - len(blocks)),
    ]
    report(rows, args.format)
    return EXIT_OK


def cmd_decode(args) -> int:
    pool = loads(_read(args.pool))
    manifest = read_manifest(_read(args.manifest))
    dictionary = read_dictionary(_read(args.dict), manifest.layout.word_width)
    records = ordered_records(pool, manifest.pairs)
    codecs = build_codecs([a for a, _ in manifest.pairs], manifest.layout)
    log: list = []
    text = decode_blocks(
        [r.sequence for r in records],
        dictionary,
        manifest.layout,
        codecs,
        manifest.perturb_cfg,
        repair=args.repair,
        log=log,
    )
    for ev in log:
        rec = records[ev.block]
        print(
            f"repaired {rec.id} sub-block {ev.sub_block} offset {ev.offset}: "
            f"{ev.original}->{ev.replacement}",
            file=sys.stderr,
        )
    if args.out:
        _write(args.out, text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return EXIT_OK


def cmd_select(args) -> int:
    pool = loads(_read(args.pool))
    ids = set(select(pool, args.fwd, args.rev, args.tolerance))
    chosen = Pool(tuple(r for r in pool if r.id in ids))
    out = dumps(chosen)
    if args.out:
        _write(args.out, out)
    else:
        sys.stdout.write(out)
    return EXIT_OK if ids else EXIT_EMPTY


def cmd_rewrite(args) -> int:
    pool = loads(_read(args.pool))
    if args.fragment is not None:
        new = gblock_rewrite(pool, args.block, Fragment(args.fragment), args.min_homology)
    else:
        if not (args.dict and args.manifest):
            raise UsageError("--words needs --dict and --manifest")
        manifest = read_manifest(_read(args.manifest))
        dictionary = read_dictionary(_read(args.dict), manifest.layout.word_width)
        codecs = build_codecs([a for a, _ in manifest.pairs], manifest.layout)
        new, dictionary = edit_words(
            pool,
            args.block,
            args.group,
            args.words.split(),
            dictionary,
            manifest.layout,
            codecs,
            manifest.perturb_cfg,
        )
        _write(args.dict_out or args.dict, write_dictionary(dictionary))
    _write(args.out, dumps(new))
    return EXIT_OK


def cmd_count(args) -> int:
    if args.maxset_n is not None:
        n = args.maxset_n
        if n > 3:
            raise UsageError("exhaustive u(n) is limited to n <= 3")
        size, _ = max_uncorrelated_bruteforce(n)
        lo, hi = bounds_u(n)
        report([("n", n), ("u", size), ("lower_bound", lo), ("upper_bound", hi)], args.format)
        return EXIT_OK
    if not args.pattern:
        raise UsageError("give --pattern (repeatable) or --maxset-n")
    patterns = [dna(p) for p in args.pattern]
    table = count_avoiding(patterns, args.N)
    rows = []
    for length, f in enumerate(table.counts):
        row = [("N", length), ("f", f)]
        if args.check:
            row.append(("brute", count_avoiding_bruteforce(patterns, length)))
        rows.append(row)
    if args.format == "kv":
        for row in rows:
            sys.stdout.write(" ".join(f"{k}={v}" for k, v in row) + "\n")
    else:
        head = [k for k, _ in rows[0]]
        cols = [max(len(h), *(len(str(dict(r)[h])) for r in rows)) for h in head]
        sys.stdout.write("  ".join(h.rjust(c) for h, c in zip(head, cols)) + "\n")
        for r in rows:
            sys.stdout.write("  ".join(str(v).rjust(c) for (_, v), c in zip(r, cols)) + "\n")
    return EXIT_OK


def cmd_stats(args) -> int:
    layout = _layout(args)
    if args.pool:
        pool = loads(_read(args.pool))
        nt = sum(len(r.sequence) for r in pool)
        rows = [
            ("blocks", len(pool)),
            ("nucleotides", nt),
            ("gc_fraction", gc_fraction("".join(r.sequence for r in pool)) if nt else 0.0),
        ]
        if args.bytes is not None:
            total = args.nucleotides or nt
            rows.append(("density", density(args.bytes, total) if total else 0.0))
        report(rows, args.format)
        return EXIT_OK
    if not args.text:
        raise UsageError("give a text file or --pool")
    p = plan(_read(args.text), layout)
    rows = p.items()
    if args.bytes is not None or args.nucleotides is not None:
        b = p.bytes if args.bytes is None else args.bytes
        nt = p.nucleotides if args.nucleotides is None else args.nucleotides
        rows.append(("density_override", density(b, nt) if nt else 0.0))
    report(rows, args.format)
    return EXIT_OK


# -- parser ---------------------------------------------------------------


def _layout_flags(p) -> None:
    g = p.add_argument_group("layout")
    g.add_argument("--sub-blocks", type=int, default=12)
    g.add_argument("--sub-len", type=int, default=80)
    g.add_argument("--words-per-group", type=int, default=6)
    g.add_argument("--word-width", type=int, default=12)
    g.add_argument("--marker", default="11")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("text", "kv"), default="text", help="report style (kv: key=value)"
    )
    ap = _Parser(prog="dnastore", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND})")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("addrgen", parents=[common], help="greedy address search")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--out", help="address file (default: stdout)")
    p.add_argument("--pairs", help="also write consecutive pairs here")
    p.add_argument("--rds-bound", type=int, default=4)
    p.add_argument("--min-distance", type=int, default=None)
    p.add_argument("--prefix-window", type=int, default=4)
    p.add_argument("--k", type=int, default=1, help="uncorrelation overlap threshold")
    p.add_argument("--stem-len", type=int, default=6)
    p.add_argument("--gc-low", type=float, default=0.4)
    p.add_argument("--gc-high", type=float, default=0.6)
    p.add_argument("--perturb-threshold", type=int, default=10)
    p.add_argument("--no-perturb-check", action="store_true")
    p.add_argument("--uniform", action="store_true", help="draw bases independently")
    p.set_defaults(func=cmd_addrgen)

    p = sub.add_parser("encode", parents=[common], help="text -> pool, dictionary, manifest")
    p.add_argument("text")
    p.add_argument("--pairs", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dict", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--perturb-threshold", type=int, default=10)
    p.add_argument("--no-perturb", action="store_true")
    _layout_flags(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", parents=[common], help="pool -> text")
    p.add_argument("pool")
    p.add_argument("--dict", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--repair", action="store_true", help="fix single substitutions")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("select", parents=[common], help="primer-based block selection")
    p.add_argument("pool")
    p.add_argument("--fwd", required=True)
    p.add_argument("--rev", required=True)
    p.add_argument("--tolerance", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("rewrite", parents=[common], help="edit one block")
    p.add_argument("pool")
    p.add_argument("--block", required=True)
    p.add_argument("--out", required=True)
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--words", help="six space-separated words")
    how.add_argument("--fragment", help="gBlock sequence with homology arms")
    p.add_argument("--group", type=int, default=0)
    p.add_argument("--dict")
    p.add_argument("--dict-out")
    p.add_argument("--manifest")
    p.add_argument("--min-homology", type=int, default=30)
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("count", parents=[common], help="pattern-avoidance counts or exact u(n)")
    p.add_argument("--pattern", action="append")
    p.add_argument("--N", type=int, default=8)
    p.add_argument("--maxset-n", type=int)
    p.add_argument("--check", action="store_true", help="add a brute-force column")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("stats", parents=[common], help="encoding plan and density")
    p.add_argument("text", nargs="?")
    p.add_argument("--pool")
    p.add_argument("--bytes", type=int, help="override the byte count")
    p.add_argument("--nucleotides", type=int, help="override the nucleotide count")
    _layout_flags(p)
    p.set_defaults(func=cmd_stats)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CodecError, PoolError, SequenceError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
