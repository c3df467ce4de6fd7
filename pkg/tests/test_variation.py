"""Induced inner products under a Gram metric and the first-variation check."""

import numpy as np
import pytest

from thorpe_lab import DoubleForm, deriv_f_h, inner, metric
from thorpe_lab.variation import (
    GramMetric,
    InvalidStepError,
    NotPositiveDefiniteError,
    check_variation_lemma,
    induced_inner_double,
    induced_inner_p_forms,
)

from helpers import rand_grid_form, rand_symmetric_11, rng


def test_gram_metric_validation():
    with pytest.raises(NotPositiveDefiniteError):
        GramMetric(np.array([[1.0, 2.0], [0.0, 1.0]]))  # not symmetric
    with pytest.raises(NotPositiveDefiniteError):
        GramMetric(np.diag([1.0, -2.0]))  # not positive definite
    with pytest.raises(NotPositiveDefiniteError):
        GramMetric(np.diag([1.0, 0.0]))  # singular


def test_p_forms_identity_metric_reduces_to_dot():
    gen = rng(0)
    G = GramMetric.identity(5)
    a = gen.uniform(-1, 1, 10)
    b = gen.uniform(-1, 1, 10)
    assert induced_inner_p_forms(G, 2, a, b) == pytest.approx(float(a @ b))


def test_p_forms_scaling_homogeneity():
    gen = rng(1)
    n, lam = 5, 2.5
    for p in [1, 2, 3]:
        from math import comb

        a = gen.uniform(-1, 1, comb(n, p))
        b = gen.uniform(-1, 1, comb(n, p))
        scaled = induced_inner_p_forms(GramMetric(lam * np.eye(n)), p, a, b)
        plain = induced_inner_p_forms(GramMetric.identity(n), p, a, b)
        assert scaled == pytest.approx(lam ** (-p) * plain, rel=1e-12)


def test_p_forms_two_by_two_determinant():
    # top form on n=2 under diag(1,4): det(inv G) = 1/4
    G = GramMetric(np.diag([1.0, 4.0]))
    assert induced_inner_p_forms(G, 2, [1.0], [1.0]) == pytest.approx(0.25)


def test_double_identity_metric_reduces_to_inner():
    gen = rng(2)
    w1 = rand_grid_form(4, 2, 2, gen)
    w2 = rand_grid_form(4, 2, 2, gen)
    G = GramMetric.identity(4)
    assert induced_inner_double(G, w1, w2) == pytest.approx(inner(w1, w2), rel=1e-12)


def test_double_simple_forms_factorize():
    # on a simple double form the induced pairing is the product of the
    # factor pairings
    gen = rng(3)
    n, p = 4, 2
    from math import comb

    alpha = gen.uniform(-1, 1, comb(n, p))
    beta = gen.uniform(-1, 1, comb(n, p))
    w1 = DoubleForm(n, p, p, np.outer(alpha, alpha))
    w2 = DoubleForm(n, p, p, np.outer(beta, beta))
    m = gen.uniform(-0.2, 0.2, (n, n))
    G = GramMetric(np.eye(n) + (m + m.T) / 2)
    factor = induced_inner_p_forms(G, p, alpha, beta)
    assert induced_inner_double(G, w1, w2) == pytest.approx(factor * factor, rel=1e-10)


def test_variation_zero_direction():
    gen = rng(4)
    w1 = rand_grid_form(4, 2, 2, gen)
    w2 = rand_grid_form(4, 2, 2, gen)
    h = DoubleForm(4, 1, 1, np.zeros((4, 4)))
    assert check_variation_lemma(w1, w2, h, step=1e-4) == pytest.approx(0.0, abs=1e-12)


def test_variation_metric_direction_closed_form():
    # for w1 = w2 = g the derivative is -2 <h, g>
    gen = rng(5)
    n = 4
    h = rand_symmetric_11(n, gen)
    g = metric(n)
    assert inner(deriv_f_h(h, g), g) == pytest.approx(2.0 * inner(h, g), rel=1e-12)
    assert check_variation_lemma(g, g, h, step=1e-4) < 1e-6


def test_variation_random_triples_residual():
    gen = rng(6)
    for _ in range(10):
        w1 = rand_grid_form(4, 2, 2, gen)
        w2 = rand_grid_form(4, 2, 2, gen)
        h = rand_symmetric_11(4, gen)
        assert check_variation_lemma(w1, w2, h, step=1e-4) < 1e-6


def test_variation_quadratic_convergence():
    gen = rng(7)
    w1 = rand_grid_form(4, 2, 2, gen)
    w2 = rand_grid_form(4, 2, 2, gen)
    h = rand_symmetric_11(4, gen)
    r3 = check_variation_lemma(w1, w2, h, step=1e-3)
    r4 = check_variation_lemma(w1, w2, h, step=1e-4)
    if r3 > 1e-12:  # above the rounding floor
        assert r4 <= r3 / 3.0


def test_variation_symmetric_in_operands():
    gen = rng(8)
    w1 = rand_grid_form(4, 2, 2, gen)
    w2 = rand_grid_form(4, 2, 2, gen)
    h = rand_symmetric_11(4, gen)
    a = check_variation_lemma(w1, w2, h, step=1e-4)
    b = check_variation_lemma(w2, w1, h, step=1e-4)
    assert a == pytest.approx(b, abs=1e-9)


def test_variation_invalid_step():
    h = DoubleForm(2, 1, 1, np.diag([1.0, 1.0]))
    w = DoubleForm(2, 2, 2, np.ones((1, 1)))
    with pytest.raises(InvalidStepError):
        check_variation_lemma(w, w, h, step=2.0)
    with pytest.raises(InvalidStepError):
        check_variation_lemma(w, w, h, step=-1e-4)
