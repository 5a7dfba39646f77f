import pytest

from jensengap import (
    Beta, Exponential, FiniteDiscrete, Uniform, exp_scaled, neg_exp, reciprocal, square, xlogx,
)

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def grid_phis():
    return [neg_exp(), square(), exp_scaled(0.5), reciprocal(), xlogx()]


def five_atom():
    return FiniteDiscrete([(0.1, 0.1), (0.5, 0.2), (1.0, 0.3), (1.5, 0.25), (2.0, 0.15)])


def grid_dists():
    return [Uniform(0.0, 2.0), Beta(2.0, 3.0), Exponential(1.0).truncated(), five_atom()]


def grid_pairs():
    return [(phi, dist) for dist in grid_dists() for phi in grid_phis()]


def pair_id(pair):
    phi, dist = pair
    return f"{phi.label}-{type(dist).__name__}"


# E[1/X] is infinite under these two laws: the oracle must refuse them
DIVERGENT = {("reciprocal", "Uniform"), ("reciprocal", "Truncated")}


def is_divergent(phi, dist) -> bool:
    return (phi.name, type(dist).__name__) in DIVERGENT


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {n:2d}: {detail}")
