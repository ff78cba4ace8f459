import pytest

from moduli_sys.system import classify

from helpers import f2_systems, sweep_shapes


@pytest.fixture(scope="session")
def f2_sweep():
    """All F_2 systems with n <= 2, m in {1,2}, p in {0,1,2}, classified."""
    systems = f2_systems(sweep_shapes(n_max=2))
    return [(s, classify(s)) for s in systems]
