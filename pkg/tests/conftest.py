"""Independent dense oracles.

These build the walk operators straight from the propagation rule, the
Grover matrix and the reflection formula with explicit loops and Kronecker
products.  They deliberately avoid the package's kernels and permutation
helpers so that agreement is meaningful.
"""

import math

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

G3 = np.array([[-1, 2, 2], [2, -1, 2], [2, 2, -1]]) / 3.0
VHAT = [(0, 0), (1, 0), (0, 1)]


def oracle_index(j, s, n1, n2, m):
    return ((j * 2 + s) * m + n1) * m + n2


def oracle_shift(m):
    dim = 6 * m * m
    S = np.zeros((dim, dim))
    for j in range(3):
        for s in range(2):
            for n1 in range(m):
                for n2 in range(m):
                    a, b = VHAT[j]
                    sign = (-1) ** s
                    dst = oracle_index(j, 1 - s, (n1 - sign * a) % m, (n2 - sign * b) % m, m)
                    S[dst, oracle_index(j, s, n1, n2, m)] = 1.0
    return S


def oracle_walk(m):
    return oracle_shift(m) @ np.kron(G3, np.eye(2 * m * m))


def oracle_target(m, n1=0, n2=0):
    t = np.zeros(6 * m * m)
    for j in range(3):
        for s in range(2):
            t[oracle_index(j, s, n1, n2, m)] = 1 / math.sqrt(6)
    return t


def oracle_reflection(m, n1=0, n2=0):
    t = oracle_target(m, n1, n2)
    return np.eye(t.size) - 2 * np.outer(t, t)


def oracle_tulsi(m, delta, oracle_control=0, n1=0, n2=0):
    c, s = math.cos(delta), math.sin(delta)
    X = np.array([[c, s], [-s, c]])
    P = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    dim = 6 * m * m
    I = np.eye(dim)
    R = oracle_reflection(m, n1, n2)
    U = oracle_walk(m)
    CR = np.kron(P[oracle_control], R) + np.kron(P[1 - oracle_control], I)
    CU = np.kron(P[1], U) + np.kron(P[0], I)
    minus_z = np.diag([-1.0, 1.0])
    return np.kron(minus_z, I) @ CU @ np.kron(X.T, I) @ CR @ np.kron(X, I)


def multiset_distance(a, b):
    """Largest pairwise gap under the best one-to-one matching of a and b."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    assert a.size == b.size
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def unitarity_error(M):
    return float(np.abs(M.conj().T @ M - np.eye(M.shape[0])).max())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_state(rng, dim, real=False):
    v = rng.normal(size=dim)
    if not real:
        v = v + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


_CRITERIA = {
    "c01": "unitarity and reality",
    "c02": "spectral equivalence",
    "c03": "fixed point",
    "c04": "algebraic identities",
    "c05": "scaling of sums",
    "c06": "search dynamics (AKR)",
    "c07": "search dynamics (Tulsi)",
    "c08": "complexity exponent",
    "c09": "translational invariance",
    "c10": "involutions and oracle locality",
}


def pytest_terminal_summary(terminalreporter):
    outcome = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if "test_acceptance.py" not in rep.nodeid:
                continue
            if status != "error" and rep.when != "call":
                continue
            key = rep.nodeid.split("::test_")[-1][:3]
            if key in _CRITERIA:
                ok = status == "passed"
                outcome[key] = outcome.get(key, True) and ok
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for key, name in _CRITERIA.items():
        if key in outcome:
            terminalreporter.write_line(f"criterion {int(key[1:]):2d} {name:<34} {'PASS' if outcome[key] else 'FAIL'}")
