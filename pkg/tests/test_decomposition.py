"""Trace-free decomposition: round trips, orthogonality, and the lstsq oracle."""

from math import comb

import numpy as np
import pytest

from thorpe_lab import DoubleForm, contract, forms, inner, metric, metric_power, wedge
from thorpe_lab.decomposition import (
    Decomposition,
    component_vanishing_report,
    decompose,
    reconstruct,
)
from thorpe_lab.models import (
    ConformallyFlat,
    ConstantCurvature,
    realize,
    space_hyperbolic_schouten,
)

from helpers import rand_symmetric_grid, rel_residual, rng, wedge_operator_matrix


# -- independent oracle: explicit trace-free bases + least squares -------------


def tracefree_basis(n: int, i: int) -> list[DoubleForm]:
    if i == 0:
        return [forms.scalar_form(n, 1.0)]
    d = comb(n, i)
    cols = []
    for a in range(d):
        for b in range(d):
            e = np.zeros((d, d))
            e[a, b] = 1.0
            cols.append(contract(DoubleForm(n, i, i, e)).coeffs.ravel())
    C = np.stack(cols, axis=1)
    _, s, vt = np.linalg.svd(C)
    null = vt[int((s > 1e-10).sum()):].T
    return [DoubleForm(n, i, i, null[:, k].reshape(d, d)) for k in range(null.shape[1])]


def decompose_lstsq_oracle(w: DoubleForm) -> list[DoubleForm]:
    n, p = w.n, w.p
    K = min(p, n - p)
    cols, meta = [], []
    for i in range(K + 1):
        for b in tracefree_basis(n, i):
            cols.append(wedge(metric_power(n, p - i), b).coeffs.ravel())
            meta.append((i, b))
    M = np.stack(cols, axis=1)
    x, *_ = np.linalg.lstsq(M, w.coeffs.ravel(), rcond=None)
    comps = [forms.zero_form(n, i, i) for i in range(K + 1)]
    for coef, (i, b) in zip(x, meta):
        comps[i] = comps[i] + float(coef) * b
    return comps


@pytest.mark.parametrize("n,p", [(4, 2), (5, 2), (6, 2), (6, 3), (5, 3), (6, 4)])
def test_ladder_matches_lstsq_oracle(n, p):
    w = rand_symmetric_grid(n, p, rng(100 + n * 10 + p))
    got = decompose(w).components
    want = decompose_lstsq_oracle(w)
    assert len(got) == len(want) == min(p, n - p) + 1
    for a, b in zip(got, want):
        assert rel_residual(a, b) < 1e-9


# -- contracts -------------------------------------------------------------------


def test_roundtrip_constant_curvature():
    R = realize(ConstantCurvature(5, 2.0))
    d = decompose(R)
    assert rel_residual(reconstruct(d), R) < 1e-12
    # only the scalar component survives: omega_0 = c/2
    assert d.components[0].scalar == pytest.approx(1.0)
    assert d.components[1].norm() < 1e-12
    assert d.components[2].norm() < 1e-12


def test_roundtrip_conformally_flat():
    # R = gA has no Weyl part: omega_2 = 0, omega_1 is the trace-free part of A
    gen = rng(21)
    n = 6
    m = gen.uniform(-1, 1, (n, n))
    A_grid = (m + m.T) / 2
    R = realize(ConformallyFlat(A_grid))
    d = decompose(R)
    assert rel_residual(reconstruct(d), R) < 1e-12
    assert d.components[2].norm() < 1e-10 * R.norm()
    A_tracefree = A_grid - np.trace(A_grid) / n * np.eye(n)
    assert np.allclose(d.components[1].coeffs, A_tracefree, atol=1e-10)


@pytest.mark.parametrize("n,p", [(5, 2), (6, 3), (4, 2)])
def test_roundtrip_random(n, p):
    w = rand_symmetric_grid(n, p, rng(200 + n + p))
    d = decompose(w)
    assert rel_residual(reconstruct(d), w) < 1e-9


def test_components_trace_free_and_orthogonal():
    w = rand_symmetric_grid(6, 3, rng(22))
    d = decompose(w)
    scale = w.norm()
    for i, c in enumerate(d.components):
        if i >= 1:
            assert contract(c).norm() < 1e-9 * scale
    terms = [wedge(metric_power(6, 3 - i), c) for i, c in enumerate(d.components)]
    for i in range(len(terms)):
        for j in range(i):
            denom = max(terms[i].norm() * terms[j].norm(), 1e-300)
            assert abs(inner(terms[i], terms[j])) / denom < 1e-9


def test_decompose_left_inverse_of_reconstruct():
    # feed a valid decomposition through reconstruct and decompose again
    gen = rng(23)
    n, p = 6, 2
    w = rand_symmetric_grid(n, p, gen)
    d = decompose(w)
    d2 = decompose(reconstruct(d))
    for a, b in zip(d.components, d2.components):
        assert rel_residual(a, b) < 1e-10


def test_low_dimension_collapse():
    # n < 2p: the upper components vanish and w = g^{2p-n} wbar
    n, p = 5, 3
    w = rand_symmetric_grid(n, p, rng(24))
    d = decompose(w)
    assert d.K == n - p
    # solve for wbar by least squares against multiplication by g^{2p-n}
    M = wedge_operator_matrix(metric_power(n, 2 * p - n), n - p, n - p)
    x, *_ = np.linalg.lstsq(M, w.coeffs.ravel(), rcond=None)
    assert np.linalg.norm(M @ x - w.coeffs.ravel()) < 1e-9 * w.norm()


def test_vanishing_report_einstein_input():
    R = realize(ConstantCurvature(5, 1.0))
    rep = component_vanishing_report(R)
    assert rep.vanishes[1]  # traceless Ricci part absent
    assert rep.vanishes[2]
    assert not rep.vanishes[0]
    assert not rep.degenerate
    assert all(rep.contraction_agrees)


def test_vanishing_report_space_hyperbolic_product():
    # R = gA with cA = 0: scalar part and Weyl part vanish, the traceless
    # Ricci component is A itself and survives
    R = realize(ConformallyFlat(space_hyperbolic_schouten(4, 1.0)))
    rep = component_vanishing_report(R)
    assert rep.vanishes[0]
    assert not rep.vanishes[1]
    assert rep.vanishes[2]
    assert all(rep.contraction_agrees)


def test_vanishing_report_zero_input():
    rep = component_vanishing_report(forms.zero_form(5, 2, 2))
    assert rep.degenerate
    assert all(rep.vanishes)


def test_serialization_roundtrip():
    w = rand_symmetric_grid(5, 2, rng(25))
    d = decompose(w)
    back = Decomposition.from_dict(d.to_dict())
    assert back.n == d.n and back.p == d.p
    for a, b in zip(d.components, back.components):
        assert np.array_equal(a.coeffs, b.coeffs)


def test_decompose_rejects_off_diagonal_degrees():
    from thorpe_lab.decomposition import DecompositionError

    bad = forms.zero_form(5, 2, 1)
    with pytest.raises(DecompositionError):
        decompose(bad)
