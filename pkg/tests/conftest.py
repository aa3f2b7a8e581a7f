import numpy as np
import pytest

from asdplanner.riskmap import RiskMap


@pytest.fixture
def fig2_map():
    """2x2 instance: risk(0,0)=0.1, risk(0,1)=0.05, risk(1,1)=0.05,
    risk(1,0)=0. Only one feasible route from (1,0) to (0,1) at eps=0.9."""
    return RiskMap(2, 2, np.array([[0.1, 0.0], [0.05, 0.05]]))
