"""Shared helpers for the test suite: random inputs and independent oracles."""

from math import comb

import numpy as np

from thorpe_lab import DoubleForm, forms


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def rand_grid_form(n: int, p: int, q: int, gen: np.random.Generator) -> DoubleForm:
    return DoubleForm(n, p, q, gen.uniform(-1.0, 1.0, (comb(n, p), comb(n, q))))


def rand_symmetric_grid(n: int, p: int, gen: np.random.Generator) -> DoubleForm:
    m = gen.uniform(-1.0, 1.0, (comb(n, p), comb(n, p)))
    return DoubleForm(n, p, p, (m + m.T) / 2.0)


def rand_symmetric_11(n: int, gen: np.random.Generator) -> DoubleForm:
    m = gen.uniform(-1.0, 1.0, (n, n))
    return DoubleForm(n, 1, 1, (m + m.T) / 2.0)


def rel_residual(a, b) -> float:
    if isinstance(a, DoubleForm):
        return (a - b).norm() / max(a.norm(), b.norm(), 1.0)
    return abs(a - b) / max(abs(a), abs(b), 1.0)


def wedge_operator_matrix(w: DoubleForm, p2: int, q2: int) -> np.ndarray:
    """Dense matrix of x -> wedge(w, x) on vectorized (p2,q2) forms."""
    n = w.n
    rows = comb(n, w.p + p2) * comb(n, w.q + q2)
    cols_p, cols_q = comb(n, p2), comb(n, q2)
    M = np.empty((rows, cols_p * cols_q))
    for a in range(cols_p):
        for b in range(cols_q):
            e = np.zeros((cols_p, cols_q))
            e[a, b] = 1.0
            M[:, a * cols_q + b] = forms.wedge(w, DoubleForm(n, p2, q2, e)).coeffs.ravel()
    return M
