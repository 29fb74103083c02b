import pytest

from trifactor.factorisation import build_factorisation
from trifactor.verifier import field_for

_CACHE = {}


@pytest.fixture(scope="session")
def factorisations():
    """Shared factorisation builder; instances are immutable."""

    def get(q):
        if q not in _CACHE:
            _CACHE[q] = build_factorisation(field_for(q))
        return _CACHE[q]

    return get
