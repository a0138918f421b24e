import os
import tempfile

import pytest

# keep hash-family tables out of the user's cache during test runs
os.environ.setdefault("TWODEL_CACHE_DIR", os.path.join(tempfile.gettempdir(), "twodel-test-cache"))


@pytest.fixture(scope="session")
def families():
    from twodel.hashing import build_hash_family

    return build_hash_family


@pytest.fixture(scope="session")
def code_at():
    """``code_at(n, construction, s=None)`` -> (params, selected targets, codebook)."""
    from twodel.construction import derive_params, enumerate_codebook, select_targets
    from twodel.hashing import build_hash_family

    cache = {}

    def get(n, construction, s=None):
        s = n if s is None else s
        key = (n, construction, s)
        if key not in cache:
            p = derive_params(n, s, construction, build_hash_family(s))
            t = select_targets(p)
            cache[key] = (p, t, enumerate_codebook(p, t))
        return cache[key]

    return get


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num])
