import time

import pytest

from cmsha import make_context, sha_order
from cmsha.arith import is_prime

SWEEP_LIMIT = 503


def sweep_primes(limit=SWEEP_LIMIT):
    return [q for q in range(7, limit + 1) if q % 8 == 7 and is_prime(q)]


@pytest.fixture(scope="session")
def ctx32():
    return make_context(32)


@pytest.fixture(scope="session")
def sweep_reports():
    """Reports for every admissible q up to SWEEP_LIMIT at 32 digits,
    computed once and shared; the second element is the wall time."""
    t0 = time.perf_counter()
    reports = {q: sha_order(q, 32) for q in sweep_primes()}
    return reports, time.perf_counter() - t0
