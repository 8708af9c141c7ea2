import pytest

from disksig.hierarchy import HierarchyState


@pytest.fixture(scope="session")
def state():
    """Shared hierarchy state; levels are computed once and memoized."""
    return HierarchyState()
