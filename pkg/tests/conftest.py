from fractions import Fraction

import numpy as np
import pytest

import groupwalk as gw

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def small_groups():
    """The preset groups of order <= 24 used throughout the suite."""
    out = {f"cyclic({n})": gw.cyclic(n) for n in range(2, 13)}
    out.update({f"dihedral({n})": gw.dihedral(n) for n in range(3, 7)})
    out["symmetric(3)"] = gw.symmetric(3)
    out["symmetric(4)"] = gw.symmetric(4)
    out["quaternion8"] = gw.quaternion8()
    out["direct_product(cyclic(2),cyclic(2))"] = gw.parse_preset("direct_product(cyclic(2),cyclic(2))")
    out["direct_product(cyclic(2),symmetric(3))"] = gw.parse_preset("direct_product(cyclic(2),symmetric(3))")
    return out


def random_distribution(G, rng, max_weight=10):
    """Exact distribution with a random support and integer weights in 1..max_weight."""
    k = int(rng.integers(1, G.order + 1))
    S = rng.choice(G.order, size=k, replace=False)
    w = rng.integers(1, max_weight + 1, size=k)
    total = int(w.sum())
    probs = np.empty(G.order, dtype=object)
    probs[:] = [Fraction(0)] * G.order
    for s, x in zip(S, w):
        probs[s] = Fraction(int(x), total)
    return gw.Distribution(G, probs, exact=True)


@pytest.fixture(scope="session")
def groups():
    return small_groups()


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
