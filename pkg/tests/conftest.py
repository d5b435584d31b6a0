import numpy as np
import pytest

from fracform import DirichletForm, build_counterexample, build_gasket, is_irreducible

_acceptance = {}


def random_form(rng, n, sparsity=0.0, lo=0.1, hi=10.0):
    """Log-uniform coefficients; with ``sparsity`` > 0 some are zeroed but the
    form is redrawn until irreducible."""
    m = n * (n - 1) // 2
    while True:
        c = np.exp(rng.uniform(np.log(lo), np.log(hi), m))
        if sparsity:
            c[rng.random(m) < sparsity] = 0.0
        E = DirichletForm(n, c)
        if is_irreducible(E):
            return E


def random_weights(rng, k, lo=0.1, hi=10.0):
    return np.exp(rng.uniform(np.log(lo), np.log(hi), k))


@pytest.fixture(scope="session")
def ring():
    return build_counterexample()


@pytest.fixture(scope="session")
def gaskets():
    return {n: build_gasket(n) for n in range(2, 7)}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance.items()):
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
