from __future__ import annotations

import pytest

from dnastore.cli import main
from dnastore.pool import loads
from dnastore.seqcore import reverse_complement as rc
from published import BLOCK_PAIRS


@pytest.fixture()
def workdir(tmp_path, corpus):
    (tmp_path / "corpus.txt").write_text(corpus)
    (tmp_path / "pairs.tsv").write_text("".join(f"{a}\t{b}\n" for a, b in BLOCK_PAIRS))
    return tmp_path


def _encode(w, name="pool.txt"):
    return main(
        [
            "encode", str(w / "corpus.txt"), "--pairs", str(w / "pairs.tsv"),
            "--out", str(w / name), "--dict", str(w / "dict.txt"), "--manifest", str(w / "man.txt"),
        ]
    )


def test_addrgen(tmp_path, capsys):
    args = ["addrgen", "--n", "20", "--count", "32", "--seed", "7", "--budget", "200000"]
    assert main(args + ["--out", str(tmp_path / "a1"), "--pairs", str(tmp_path / "p1")]) == 0
    assert main(args + ["--out", str(tmp_path / "a2")]) == 0
    a1 = (tmp_path / "a1").read_text()
    assert a1 == (tmp_path / "a2").read_text() and len(a1.split()) == 32
    assert len((tmp_path / "p1").read_text().splitlines()) == 16
    main(["addrgen", "--count", "32", "--seed", "8", "--budget", "200000", "--out", str(tmp_path / "a3")])
    assert (tmp_path / "a3").read_text() != a1
    out = capsys.readouterr().out
    assert "rejected_c3" in out


def test_addrgen_exit_codes(tmp_path, capsys):
    assert main(["addrgen", "--count", "0"]) == 1
    assert main(["addrgen", "--count", "50", "--budget", "300", "--out", str(tmp_path / "a")]) == 2
    assert main(["addrgen", "--count", "5", "--gc-low", "0.9", "--gc-high", "1", "--budget", "50"]) == 2
    with pytest.raises(SystemExit) as e:
        main(["addrgen"])
    assert e.value.code == 1


def test_encode_decode_roundtrip(workdir, corpus, capsys):
    assert _encode(workdir) == 0
    assert _encode(workdir, "pool2.txt") == 0
    assert (workdir / "pool.txt").read_bytes() == (workdir / "pool2.txt").read_bytes()
    pool = loads((workdir / "pool.txt").read_text())
    assert len(pool) == 27
    capsys.readouterr()
    args = ["decode", str(workdir / "pool.txt"), "--dict", str(workdir / "dict.txt"), "--manifest", str(workdir / "man.txt")]
    assert main(args) == 0
    assert capsys.readouterr().out.split() == corpus.split()


def test_encode_empty(workdir):
    (workdir / "empty.txt").write_text("")
    assert main(["encode", str(workdir / "empty.txt"), "--pairs", str(workdir / "pairs.tsv"),
                 "--out", str(workdir / "p"), "--dict", str(workdir / "d"), "--manifest", str(workdir / "m")]) == 1


def test_decode_corruption(workdir, corpus, capsys):
    _encode(workdir)
    text = (workdir / "pool.txt").read_text().splitlines()
    seq = text[2]
    # Find a corruption the repair path fixes, and one it can only locate.
    fixed = located = False
    for pos in range(20, 980):
        bad = seq[:pos] + ("A" if seq[pos] != "A" else "C") + seq[pos + 1 :]
        (workdir / "bad.txt").write_text("\n".join(text[:2] + [bad] + text[3:]) + "\n")
        capsys.readouterr()
        rc_ = main(["decode", str(workdir / "bad.txt"), "--dict", str(workdir / "dict.txt"),
                    "--manifest", str(workdir / "man.txt"), "--repair"])
        out, err = capsys.readouterr()
        if rc_ == 1 and not located:
            assert "block 0, sub-block" in err
            located = True
        elif rc_ == 0 and "repaired B1" in err and not fixed:
            assert out.split() == corpus.split()
            fixed = True
        if fixed and located:
            break
    assert fixed and located


def test_select(workdir, capsys):
    _encode(workdir)
    left, right = BLOCK_PAIRS[3]
    capsys.readouterr()
    assert main(["select", str(workdir / "pool.txt"), "--fwd", left, "--rev", rc(right)]) == 0
    got = loads(capsys.readouterr().out)
    assert [r.left_addr for r in got] == [left]
    assert main(["select", str(workdir / "pool.txt"), "--fwd", left, "--rev", right]) == 3
    assert main(["select", str(workdir / "nope.txt"), "--fwd", left, "--rev", right]) == 1


def test_rewrite_words_and_fragment(workdir, corpus, capsys):
    _encode(workdir)
    w = workdir
    new_words = corpus.split()[:6]
    new_words[0] = "edited"
    assert main(["rewrite", str(w / "pool.txt"), "--block", "B1", "--group", "0", "--words", " ".join(new_words),
                 "--dict", str(w / "dict.txt"), "--dict-out", str(w / "dict2.txt"),
                 "--manifest", str(w / "man.txt"), "--out", str(w / "pool2.txt")]) == 0
    old, new = loads((w / "pool.txt").read_text()), loads((w / "pool2.txt").read_text())
    assert [a.id for a, b in zip(old, new) if a != b] == ["B1"]
    capsys.readouterr()
    main(["decode", str(w / "pool2.txt"), "--dict", str(w / "dict2.txt"), "--manifest", str(w / "man.txt")])
    got = capsys.readouterr().out.split()
    assert got[0] == "edited" and got[1:] == corpus.split()[1:]
    seq = old.get("B2").sequence
    frag = seq[600:630] + "ACGTACGT" + seq[640:670]
    assert main(["rewrite", str(w / "pool.txt"), "--block", "B2", "--fragment", frag, "--out", str(w / "pool3.txt")]) == 0
    assert loads((w / "pool3.txt").read_text()).get("B2").sequence == seq[:600] + frag + seq[670:]
    assert main(["rewrite", str(w / "pool.txt"), "--block", "B2", "--words", "a b c d e f", "--out", str(w / "x")]) == 1


def test_count(capsys):
    assert main(["count", "--pattern", "AG", "--N", "3", "--check", "--format", "kv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "N=0 f=1 brute=1"
    assert lines[3] == "N=3 f=56 brute=56"
    assert main(["count", "--maxset-n", "3"]) == 0
    out = capsys.readouterr().out
    assert "lower_bound" in out and "upper_bound" in out
    assert main(["count"]) == 1
    assert main(["count", "--pattern", "AA"]) == 1


def test_stats(workdir, capsys):
    assert main(["stats", str(workdir / "corpus.txt"), "--format", "kv"]) == 0
    kv = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert kv["blocks"] == "27" and kv["ascii_blocks"] == "47" and kv["characters"] == "12874"
    assert main(["stats", str(workdir / "corpus.txt"), "--bytes", "17000", "--nucleotides", "32000", "--format", "kv"]) == 0
    kv = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert 4.8e20 <= float(kv["density_override"]) <= 5.0e20
    (workdir / "empty.txt").write_text("")
    assert main(["stats", str(workdir / "empty.txt"), "--format", "kv"]) == 0
    kv = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert kv["blocks"] == "0" and kv["nucleotides"] == "0" and kv["density"] == "0"
    _encode(workdir)
    capsys.readouterr()
    assert main(["stats", "--pool", str(workdir / "pool.txt")]) == 0
    assert "27000" in capsys.readouterr().out
