import numpy as np
import pytest

# Matrices printed in the worked examples.
EG20_M = np.array([[0.5, 0, 10], [0, 0.5, 0], [0, 5, 0.5]])
EG20_A = np.array([[0.5, 0, 0], [0, 0, 1], [0, 0, 0]])
EG21_A = np.array([[1.17258, 1.35575], [-0.94256, -0.39761]])
EG21_M = np.diag([0.79323, -0.24866])
EG22_M = np.array([[1.0, -1.0], [0.0, -1.0]])
EG22_A = np.array([[0.5, 0.0], [10.0, -0.5]])
EG23_M = np.array([[-1.0, -0.5], [0.5, -1.0]])
EG23_A = np.array([[0.5, 100.0], [0.0, -0.5]])
EG24_A = np.array([[0.75, 5.0], [0.0, -0.75]])
EG26_A = np.array([[0.5, 2.0], [0.0, 0.5]])

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
