"""Primary acceptance criteria 1-13, each at its stated tolerance and time budget."""

import pytest

from siegel.acceptance import CHECKS, run_check

RESULTS = []


@pytest.mark.parametrize("number", [n for n, *_ in CHECKS], ids=[f"{n:02d}_{name}" for n, name, *_ in CHECKS])
def test_criterion(number):
    r = run_check(number)
    RESULTS.append(r)
    print(f"{r.line()} ({r.seconds:.2f}s, budget {r.budget:g}s)")
    assert r.ok, r.detail
    assert r.seconds < r.budget, f"{r.name} took {r.seconds:.2f}s, budget {r.budget:g}s"
