"""The acceptance gate: one test per criterion, each printing its verdict
line.  Every tolerance and runtime budget is pinned inside the criterion
itself (shadowdyn.acceptance)."""

import pytest

from shadowdyn import acceptance


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(number, capsys):
    result = acceptance.ALL[number - 1]()
    with capsys.disabled():
        print(result.line())
    assert result.passed, result.line()
