"""The fourteen acceptance criteria, each at its stated time limit."""

import pytest

from sidon_complex.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"{c[0]:02d}-{c[1].replace(' ', '-')}" for c in CRITERIA])
def test_criterion(number):
    outcome = run_criterion(number)
    print(outcome.line())
    assert outcome.seconds < outcome.limit, f"over the time limit: {outcome.line()}"
    assert outcome.passed, outcome.line()
