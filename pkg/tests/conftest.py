import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from radmax import dyadic

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def random_dyadic_set(rng: random.Random, blocks=(-2, 2), M: int = 6, max_comps: int = 6,
                      point_prob: float = 0.5) -> dyadic.DilationSet:
    """Random points and intervals with endpoints on ``2^{k-M} Z`` inside the chosen blocks."""
    comps = []
    for k in range(blocks[0], blocks[1] + 1):
        if rng.random() < 0.3:
            continue
        h = dyadic.pow2(k - M)
        base = dyadic.pow2(k)
        for _ in range(rng.randint(1, max_comps)):
            i = rng.randrange(2 ** M)
            if rng.random() < point_prob:
                comps.append((base + i * h, base + i * h))
            else:
                j = min(2 ** M, i + rng.randint(1, 2 ** (M - 2)))
                comps.append((base + i * h, base + j * h))
    return dyadic.from_components(dyadic._merge(comps), resolution=M)


def random_point_set(rng: random.Random, k: int, M: int, n_max: int = 12) -> dyadic.DilationSet:
    h = dyadic.pow2(k - M)
    idx = rng.sample(range(2 ** M), rng.randint(1, min(n_max, 2 ** M)))
    return dyadic.DilationSet(points=tuple(dyadic.pow2(k) + i * h for i in idx), resolution=M)


@pytest.fixture
def rng():
    return random.Random(20240611)


def frac(x) -> Fraction:
    return Fraction(x)
