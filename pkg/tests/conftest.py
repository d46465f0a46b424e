import numpy as np
import pytest

from evalvote import EvaluationProfile

# The worked 3-voter, 2-candidate compromise election used across the
# suite: voters A, B, C grade candidates (x, y) as rows below. x beats y
# in pairwise majority, yet every mean/median-based rule elects y.
COMPROMISE_VALUES = np.array([
    [0.6, 0.5],
    [0.8, 0.7],
    [0.1, 1.0],
])


@pytest.fixture
def compromise_profile() -> EvaluationProfile:
    return EvaluationProfile(COMPROMISE_VALUES.copy())
