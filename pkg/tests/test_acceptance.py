"""Every acceptance criterion at its stated tolerance, one test each,
with a printed pass/fail line per criterion."""

import pytest

from hecke_functor.acceptance import CRITERIA


@pytest.mark.parametrize("name,func", CRITERIA, ids=[n for n, _ in CRITERIA])
def test_criterion(name, func):
    ok, detail = func()
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"
