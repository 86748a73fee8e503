"""One test per acceptance criterion; each prints a single pass/fail line.

The lines are also collected and repeated in the terminal summary, so they
are visible even when pytest captures output.
"""
import pytest

from derivkit.acceptance import CRITERIA

RESULTS = {}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result = CRITERIA[number]()
    RESULTS[number] = result
    print()
    print(result.line())
    for d in result.details:
        print(f"    {d}")
    assert result.passed, result.line()
