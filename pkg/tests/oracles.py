"""Independent reference computations shared by the tests."""

import itertools
import math

import numpy as np


def face_grid(h: int, N: int, total: float) -> np.ndarray:
    """All points of {x >= 0, sum x = total} with coordinates in (total/N) Z."""
    rows = []
    for bars in itertools.combinations(range(N + h - 1), h - 1):
        prev, parts = -1, []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(N + h - 2 - prev)
        rows.append(parts)
    return np.array(rows, dtype=float) * (total / N)


def random_simplex(h: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points of {x >= 0, sum x <= h}."""
    return h * rng.dirichlet(np.ones(h + 1), size=n)[:, :h]


def central_gradient(f, x: np.ndarray, step: float = 1e-6) -> np.ndarray:
    g = np.zeros_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = step
        g[i] = (f(x + e) - f(x - e)) / (2 * step)
    return g


def gaussian_prime_ideal_count(X: int) -> int:
    """Prime ideals of Z[i] with norm <= X from the rational primes."""
    from sympy import primerange

    n = 0
    for p in primerange(2, X + 1):
        if p == 2:
            n += 1
        elif p % 4 == 1:
            n += 2
        elif p * p <= X:
            n += 1
    return n
