import itertools
import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number): acceptance criterion number")
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for the criterion named by the test's marker."""
    marker = request.node.get_closest_marker("criterion")
    number = marker.args[0]
    lines = request.config.stash[ACCEPTANCE]

    def record(ok: bool, detail: str) -> bool:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines[number] = line
        print(line)
        return ok

    yield record
    if number not in lines:
        lines[number] = f"criterion {number:>2}: FAIL  raised before reaching a verdict"
        print(lines[number])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])


# independent oracles shared by several modules ---------------------------------


def brute_set_partitions(n):
    """All set partitions of {1..n} as frozensets of frozensets, via all index maps."""
    seen = set()
    for h in itertools.product(range(n), repeat=n):
        blocks = {}
        for i, v in enumerate(h, start=1):
            blocks.setdefault(v, set()).add(i)
        seen.add(frozenset(frozenset(b) for b in blocks.values()))
    return seen


def brute_crossing(blocks):
    """Quadruple scan for i<j<k<l with i~k, j~l in different blocks."""
    where = {e: idx for idx, b in enumerate(blocks) for e in b}
    n = len(where)
    for i, j, k, l in itertools.combinations(range(1, n + 1), 4):
        if where[i] == where[k] and where[j] == where[l] and where[i] != where[j]:
            return True
    return False


def bell_numbers(upto):
    """Bell numbers from the Bell triangle."""
    row = [1]
    out = [1]
    for _ in range(upto):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
        out.append(row[0])
    return out


def catalan_numbers(upto):
    c = [1]
    for n in range(upto):
        c.append(sum(c[i] * c[n - i] for i in range(n + 1)))
    return c


def random_fraction(rng, lo=-9, hi=9):
    return Fraction(rng.randint(lo, hi), rng.randint(1, 9))
