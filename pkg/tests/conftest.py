"""Shared brute-force oracles, kept independent of the library internals."""

import numpy as np
import pytest


def bf_walsh(j: int, k: int, n: int) -> int:
    """Walsh function value from the defining bit sum.

    Bit i of j pairs with bit n-1-i of k (dyadic sampling).
    """
    total = 0
    for i in range(1, n + 1):
        j_i = (j >> (i - 1)) & 1
        k_i = (k >> (n - i)) & 1
        total += j_i * k_i
    return -1 if total % 2 else 1


def bf_coefficients(values: np.ndarray, n: int) -> np.ndarray:
    """O(4^n) transform straight from the definition."""
    big_n = 1 << n
    return np.array(
        [sum(values[k] * bf_walsh(j, k, n) for k in range(big_n)) / big_n for j in range(big_n)]
    )


def series_state_diagonal(series) -> np.ndarray:
    """Diagonal of a series over register states, via mask parities."""
    dim = 1 << series.n
    out = np.zeros(dim)
    for state in range(dim):
        out[state] = sum(
            c * (-1) ** bin(m & state).count("1") for m, c in series.terms.items()
        )
    return out


def diagonal_exponential(series) -> np.ndarray:
    """Dense unitary exp(i * diag) represented by a series, phase included."""
    return np.diag(np.exp(1j * series_state_diagonal(series)))


def random_series(rng, n, density=1.0, scale=1.0, walsh_series_cls=None):
    from u1rotor import WalshSeries

    dim = 1 << n
    count = max(1, int(density * dim))
    masks = rng.choice(dim, size=min(count, dim), replace=False)
    return WalshSeries(n, {int(m): float(scale * rng.normal()) for m in masks})


@pytest.fixture
def rng():
    return np.random.default_rng(20230211)
