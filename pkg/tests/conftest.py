import pytest
from hypothesis import HealthCheck, settings

from tatekit import (
    FiniteGroup,
    cyclic,
    dihedral,
    direct_product,
    klein_four,
    quaternion,
)

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("suite")


def group_corpus() -> dict[str, FiniteGroup]:
    """Groups of order <= 16, covering cyclic, mixed abelian, and nonabelian."""
    return {
        "Z1": cyclic(1),
        "Z2": cyclic(2),
        "Z3": cyclic(3),
        "Z4": cyclic(4),
        "V4": klein_four(),
        "Z5": cyclic(5),
        "Z6": cyclic(6),
        "S3": dihedral(3),
        "Z7": cyclic(7),
        "Z8": cyclic(8),
        "Z2xZ4": direct_product(cyclic(2), cyclic(4)),
        "Z2^3": direct_product(cyclic(2), klein_four()),
        "D4": dihedral(4),
        "Q8": quaternion(),
        "Z9": cyclic(9),
        "Z3xZ3": direct_product(cyclic(3), cyclic(3)),
        "Z12": cyclic(12),
        "D6": dihedral(6),
        "Z15": cyclic(15),
        "Z16": cyclic(16),
        "Z4xZ4": direct_product(cyclic(4), cyclic(4)),
        "D8": dihedral(8),
        "Z2xQ8": direct_product(cyclic(2), quaternion()),
    }


@pytest.fixture(scope="session")
def corpus() -> dict[str, FiniteGroup]:
    return group_corpus()
