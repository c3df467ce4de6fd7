"""Induced inner products for a general Gram metric, and the first-variation check.

For a metric G on V, the induced inner product on p-forms is the Gram-minor
pairing <alpha, beta>_G = sum alpha_I beta_J det(inv(G)[I x J]); on (p,p)
double forms it extends the product of the two factor pairings bilinearly.

The variation harness differentiates t -> <omega1, omega2>_{I + t h} by
centered differences and compares against the closed form

    d/dt|_0 = -< F_h(omega1), omega2 >,

which is the first-variation law the derivation operator F_h encodes.  The
base point is the identity metric; any inner-product space is isometric to
that model, so nothing is lost.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import forms
from .basis import check_degree, enumerate_basis
from .forms import DoubleForm


class NotPositiveDefiniteError(ValueError):
    pass


class InvalidStepError(ValueError):
    pass


@dataclass(frozen=True)
class GramMetric:
    """Symmetric positive-definite bilinear form on V, as an n x n grid."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise NotPositiveDefiniteError(f"metric grid must be square, got {m.shape}")
        if not np.allclose(m, m.T, atol=1e-12):
            raise NotPositiveDefiniteError("metric grid is not symmetric")
        eigs = np.linalg.eigvalsh(m)
        if eigs.min() <= 0:
            raise NotPositiveDefiniteError(
                f"metric grid is not positive definite (min eigenvalue {eigs.min():.3e})"
            )
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, n: int) -> "GramMetric":
        return cls(np.eye(n))


def _compound_inverse(G: GramMetric, p: int) -> np.ndarray:
    """Matrix of det(inv(G)[I x J]) over the degree-p basis (inverse on covectors)."""
    n = G.n
    check_degree(n, p)
    ginv = np.linalg.inv(G.matrix)
    bas = enumerate_basis(n, p)
    out = np.empty((len(bas), len(bas)))
    for a, I in enumerate(bas):
        rows = [x - 1 for x in I]
        for b, J in enumerate(bas):
            cols = [x - 1 for x in J]
            out[a, b] = np.linalg.det(ginv[np.ix_(rows, cols)]) if p else 1.0
    return out


def induced_inner_p_forms(
    G: GramMetric, p: int, alpha: np.ndarray, beta: np.ndarray
) -> float:
    """<alpha, beta>_G on p-form coefficient vectors (canonical basis order)."""
    M = _compound_inverse(G, p)
    a = np.asarray(alpha, dtype=np.float64).ravel()
    b = np.asarray(beta, dtype=np.float64).ravel()
    if a.shape[0] != M.shape[0] or b.shape[0] != M.shape[0]:
        raise forms.IncompatibleOperandsError(
            f"coefficient length mismatch: {a.shape[0]}, {b.shape[0]} vs C({G.n},{p})"
        )
    return float(a @ M @ b)


def induced_inner_double(G: GramMetric, omega1: DoubleForm, omega2: DoubleForm) -> float:
    """Induced inner product on (p,p) double forms.

    On simple forms theta1 (x) theta2 against theta3 (x) theta4 it is the
    product <theta1,theta3>_G <theta2,theta4>_G; this is its bilinear
    extension.  At G = identity it reduces to the orthonormal inner product.
    """
    omega1._check_same_space(omega2)
    if omega1.degree != omega2.degree or omega1.p != omega1.q:
        raise forms.IncompatibleOperandsError(
            f"matching (p,p) degrees required, got {omega1.degree} and {omega2.degree}"
        )
    if omega1.n != G.n:
        raise forms.IncompatibleOperandsError("metric dimension mismatch")
    M = _compound_inverse(G, omega1.p)
    return float(np.sum(M * (omega1.coeffs @ M @ omega2.coeffs.T)))


def check_variation_lemma(
    omega1: DoubleForm,
    omega2: DoubleForm,
    h: DoubleForm,
    step: float = 1e-4,
) -> float:
    """|centered difference of t -> <omega1,omega2>_{I+th} minus -<F_h(omega1), omega2>|.

    The residual is O(step^2); steps large enough to break positive
    definiteness of I + t h are rejected.
    """
    if step <= 0:
        raise InvalidStepError(f"step must be positive, got {step}")
    if h.degree != (1, 1) or not h.is_symmetric():
        raise forms.InvalidDirectionError("direction must be a symmetric (1,1) form")
    n = h.n
    try:
        plus = GramMetric(np.eye(n) + step * h.coeffs)
        minus = GramMetric(np.eye(n) - step * h.coeffs)
    except NotPositiveDefiniteError as exc:
        raise InvalidStepError(
            f"step {step} breaks positive definiteness of I +- t h"
        ) from exc
    fd = (
        induced_inner_double(plus, omega1, omega2)
        - induced_inner_double(minus, omega1, omega2)
    ) / (2.0 * step)
    analytic = -forms.inner(forms.deriv_f_h(h, omega1), omega2)
    return abs(fd - analytic)
