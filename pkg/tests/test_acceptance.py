"""The nine acceptance criteria, one test each; every criterion logs a single pass/fail line."""

import time

import pytest

from zassenhaus.suite import CRITERIA


@pytest.mark.parametrize("name,check", CRITERIA, ids=[n for n, _ in CRITERIA])
def test_criterion(name, check, acceptance_log):
    start = time.perf_counter()
    try:
        reports = check()
    except Exception as exc:       # a crash is a failed criterion, logged before re-raising
        acceptance_log.append(f"[FAIL] {name}: {type(exc).__name__}: {exc}")
        print(acceptance_log[-1])
        raise
    elapsed = time.perf_counter() - start
    failed = [r for r in reports if r.status == "fail"]
    flagged = [r for r in reports if r.status == "flagged"]
    status = "FAIL" if failed else ("FLAGGED" if flagged else "PASS")
    acceptance_log.append(f"[{status}] {name}: {len(reports)} checks in {elapsed:.2f}s")
    print(acceptance_log[-1])
    assert not failed, [r.to_json() for r in failed]
