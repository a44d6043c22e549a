"""Acceptance suite: one test per criterion, at the stated tolerances.

Each test prints ``[PASS]``/``[FAIL]`` with its details and the lines are
repeated in the terminal summary. Simulations are cached across criteria.
"""

import pytest

from memcrit.acceptance import CRITERIA, format_result, run_criterion


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"criterion{n:02d}")
def test_criterion(number, pytestconfig):
    result = run_criterion(number)
    pytestconfig.record_acceptance(format_result(result, verbose=False))
    print(format_result(result))
    assert result.passed, "\n".join(result.details)
