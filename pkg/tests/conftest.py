from __future__ import annotations

from pathlib import Path

import pytest

from dnastore.address import ConstraintConfig, greedy_search, pair_addresses
from dnastore.codec import build_codecs, encode_text
from dnastore.pool import Pool

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def corpus() -> str:
    return (DATA / "corpus.txt").read_text()


@pytest.fixture(scope="session")
def generated_addresses() -> list[str]:
    # 32 pairs leaves slack in case the encoder skips a pair.
    found = greedy_search(64, ConstraintConfig(), seed=7, budget=10**6)
    assert len(found) == 64
    return found.members


@pytest.fixture(scope="session")
def generated_pairs(generated_addresses):
    return pair_addresses(generated_addresses, 32)


@pytest.fixture(scope="session")
def encoded(corpus, generated_pairs):
    blocks, dictionary = encode_text(corpus, pairs=generated_pairs)
    codecs = build_codecs([b.left_addr for b in blocks])
    return blocks, dictionary, codecs


@pytest.fixture(scope="session")
def generated_pool(encoded) -> Pool:
    return Pool.from_blocks(encoded[0])


# -- acceptance report ----------------------------------------------------

_ACCEPTANCE: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (report.when != "call" and report.passed):
        return
    n, title = mark.args
    entry = _ACCEPTANCE.setdefault(n, {"title": title, "ok": True, "details": []})
    if hasattr(report, "wasxfail"):
        entry["ok"] = False
        entry["details"].append(f"expected failure: {report.wasxfail}")
    elif not report.passed:
        entry["ok"] = False
    entry["details"] += [str(v) for k, v in item.user_properties if k == "detail"]


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        e = _ACCEPTANCE[n]
        status = "PASS" if e["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {n:>2} {status}  {e['title']}: {'; '.join(e['details'])}")
