import itertools
from math import gcd

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("dimlab", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("dimlab")


def leibniz_det(M):
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        p = 1
        for i in range(n):
            p *= M[i][perm[i]]
        total += -p if inv % 2 else p
    return total


def determinantal_invariants(rows, n_gens):
    """Invariant factors of Z^n_gens / (row span) from gcds of k x k minors."""
    M = [list(r) for r in rows]
    if not M:
        return [0] * n_gens
    divisors = [1]
    for k in range(1, min(len(M), n_gens) + 1):
        g = 0
        for rs in itertools.combinations(range(len(M)), k):
            for cs in itertools.combinations(range(n_gens), k):
                g = gcd(g, leibniz_det([[M[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        divisors.append(g)
    d = [divisors[i] // divisors[i - 1] for i in range(1, len(divisors))]
    d = [x for x in d if x != 1]
    return d + [0] * (n_gens - (len(divisors) - 1))


@pytest.fixture
def det_invariants():
    return determinantal_invariants


def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in __import__("sys").modules.items() if name.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
