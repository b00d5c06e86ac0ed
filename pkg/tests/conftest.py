import pytest

from furstenberg.semigroup import first_terms


@pytest.fixture(scope="session")
def s23_terms():
    """First 10^4 elements of S(2, 3), unit excluded."""
    return [t.value for t in first_terms("2,3", 10**4)]


def brute_smooth(gens, limit, include_unit=False):
    """Every product of generator powers up to limit, by nested exponent loops."""
    vals = {1}
    for g in gens:
        grown = set()
        for v in vals:
            while v <= limit:
                grown.add(v)
                v *= g
        vals = grown
    if not include_unit:
        vals.discard(1)
    return sorted(vals)
