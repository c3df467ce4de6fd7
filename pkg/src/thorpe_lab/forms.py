"""Dense (p,q) double forms and their bi-graded algebra.

A (p,q) double form is stored as a real coefficient grid over the pair
(basis(n,p), basis(n,q)) in the colex order fixed by :mod:`thorpe_lab.basis`.
The grid is read as the matrix of a linear map from degree-q multivectors
to degree-p multivectors: rows are p-sets, columns are q-sets.  With that
convention the composition product is a literal matrix product and the
interior product is the transpose-application of a wedge operator.

Products implemented here:

  wedge      exterior (dot) product, bilinear and associative
  inner      coefficientwise inner product (basis monomials orthonormal)
  interior   adjoint of wedging, <interior(w, a), b> = <a, wedge(w, b)>
  contract   interior product by the metric, one degree down on each side
  hodge_star factorwise complement with shuffle signs
  compose    matrix product of the operator grids
  deriv_f_h  the derivation h o (.) + (.) o h extended to (p,p) forms

Everything is pure; DoubleForm instances are immutable after creation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial

import numpy as np

from . import basis

# Exact polynomial identities evaluated in doubles: residuals come only
# from rounding, so one mixed tolerance serves the whole package.
ATOL = 1e-12
RTOL = 1e-9


class IncompatibleOperandsError(ValueError):
    """Operands live on different spaces or have mismatched degrees."""


class InvalidDirectionError(ValueError):
    """A direction tensor violates a required symmetry."""


@dataclass(frozen=True)
class DoubleForm:
    """A (p,q) double form on an n-dimensional inner-product space.

    coeffs has shape (C(n,p), C(n,q)); entry [rank(I), rank(J)] is the
    coefficient of e^I (x) e^J.
    """

    n: int
    p: int
    q: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        basis.check_degree(self.n, self.p)
        basis.check_degree(self.n, self.q)
        grid = np.asarray(self.coeffs, dtype=np.float64)
        expected = (comb(self.n, self.p), comb(self.n, self.q))
        if grid.shape != expected:
            raise IncompatibleOperandsError(
                f"coefficient grid shape {grid.shape} does not match "
                f"(C({self.n},{self.p}), C({self.n},{self.q})) = {expected}"
            )
        grid = np.ascontiguousarray(grid)
        grid.flags.writeable = False
        object.__setattr__(self, "coeffs", grid)

    @property
    def degree(self) -> tuple[int, int]:
        return (self.p, self.q)

    @property
    def scalar(self) -> float:
        """Value of a (0,0) form."""
        if self.degree != (0, 0):
            raise IncompatibleOperandsError(f"form of degree {self.degree} is not a scalar")
        return float(self.coeffs[0, 0])

    def is_symmetric(self, atol: float = ATOL, rtol: float = RTOL) -> bool:
        """p = q and the grid equals its transpose."""
        if self.p != self.q:
            return False
        return np.allclose(self.coeffs, self.coeffs.T, atol=atol, rtol=rtol)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    # -- arithmetic on the common grading ---------------------------------

    def _check_same_space(self, other: "DoubleForm") -> None:
        if self.n != other.n:
            raise IncompatibleOperandsError(
                f"dimension mismatch: {self.n} vs {other.n}"
            )

    def __add__(self, other: "DoubleForm") -> "DoubleForm":
        self._check_same_space(other)
        if self.degree != other.degree:
            raise IncompatibleOperandsError(
                f"degree mismatch: {self.degree} vs {other.degree}"
            )
        return DoubleForm(self.n, self.p, self.q, self.coeffs + other.coeffs)

    def __sub__(self, other: "DoubleForm") -> "DoubleForm":
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> "DoubleForm":
        return DoubleForm(self.n, self.p, self.q, self.coeffs * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "DoubleForm":
        return self * (1.0 / float(scalar))

    def __neg__(self) -> "DoubleForm":
        return self * -1.0

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "coeffs": [float(x) for x in self.coeffs.ravel()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DoubleForm":
        n, p, q = int(data["n"]), int(data["p"]), int(data["q"])
        grid = np.asarray(data["coeffs"], dtype=np.float64).reshape(
            comb(n, p), comb(n, q)
        )
        return cls(n, p, q, grid)


def zero_form(n: int, p: int, q: int) -> DoubleForm:
    return DoubleForm(n, p, q, np.zeros((comb(n, p), comb(n, q))))


def scalar_form(n: int, value: float) -> DoubleForm:
    return DoubleForm(n, 0, 0, np.array([[float(value)]]))


def metric(n: int) -> DoubleForm:
    """The inner product g as a (1,1) double form: the identity grid."""
    return DoubleForm(n, 1, 1, np.eye(n))


def metric_power(n: int, p: int) -> DoubleForm:
    """g^p, the p-th exterior power of the metric: p! times the identity grid.

    g^p / p! is the diagonal sum of e^I (x) e^I over all p-sets I, so
    <g^p/p!, g^p/p!> = C(n,p).
    """
    basis.check_degree(n, p)
    return DoubleForm(n, p, p, factorial(p) * np.eye(comb(n, p)))


def volume_form(n: int) -> DoubleForm:
    """g^n/n!: the unit (n,n) double form."""
    return DoubleForm(n, n, n, np.ones((1, 1)))


def symmetric_part(a: DoubleForm) -> DoubleForm:
    if a.p != a.q:
        raise IncompatibleOperandsError("symmetric part needs p = q")
    return DoubleForm(a.n, a.p, a.q, 0.5 * (a.coeffs + a.coeffs.T))


def transpose(a: DoubleForm) -> DoubleForm:
    """Swap the two factors: coeffs(J,I) = a(I,J)."""
    return DoubleForm(a.n, a.q, a.p, a.coeffs.T.copy())


def inner(a: DoubleForm, b: DoubleForm) -> float:
    """Coefficientwise inner product; different degrees are orthogonal."""
    if a.n != b.n:
        raise IncompatibleOperandsError(f"dimension mismatch: {a.n} vs {b.n}")
    if a.degree != b.degree:
        return 0.0
    return float(np.tensordot(a.coeffs, b.coeffs, axes=2))


# Row-entry chunk size for the wedge kernel; bounds the transient
# gather buffers to ~100 MB per array at n = 12.
_WEDGE_CHUNK = 1024


def _diagonal_constant(a: DoubleForm) -> float | None:
    """The scalar c with a = c * (g^p / p!), or None if a is not of that shape."""
    if a.p != a.q:
        return None
    d = a.coeffs
    value = d[0, 0]
    if np.array_equal(d, value * np.eye(d.shape[0])):
        return float(value)
    return None


def _metric_wedge_once(a: DoubleForm) -> DoubleForm:
    """g wedge a via the diagonal scatter: the adjoint of the contraction kernel."""
    n = a.n
    p, q = a.p + 1, a.q + 1
    rows, cols = _contract_gather(n, p, q)
    grid = np.zeros((comb(n, p), comb(n, q)))
    for m in range(n):
        ur, jr, sr = rows[m]
        uc, jc, sc = cols[m]
        grid[np.ix_(ur, uc)] += (sr[:, np.newaxis] * sc) * a.coeffs[np.ix_(jr, jc)]
    return DoubleForm(n, p, q, grid)


def wedge(a: DoubleForm, b: DoubleForm) -> DoubleForm:
    """Exterior product of double forms.

    Coefficients accumulate over all disjoint splittings on each side with
    shuffle signs.  Degree overflow past n returns the zero form of the
    clipped degree, matching the vanishing of Lambda^{>n}.

    Multiples of metric powers are detected and wedged through a diagonal
    scatter kernel, which is far cheaper on large grids.
    """
    a._check_same_space(b)
    n = a.n
    p, q = a.p + b.p, a.q + b.q
    if p > n or q > n:
        return zero_form(n, min(p, n), min(q, n))

    value = _diagonal_constant(a)
    other = b
    if value is None:
        value = _diagonal_constant(b)
        other = a
        if value is not None:
            # move the metric power to the left; diagonal (s,s) factors
            # commute with a (p,q) form up to (-1)^{s(p+q)}
            s = b.p
            if (s * (a.p + a.q)) % 2 == 1:
                value = -value
    if value is not None:
        s = a.p + b.p - other.p
        out = other
        for _ in range(s):
            out = _metric_wedge_once(out)
        return (value / factorial(s)) * out if s else value * out

    ru, ri, rj, rs, rseg = basis.merge_table(n, a.p, b.p)
    _, ci, cj, cs, cseg = basis.merge_table(n, a.q, b.q)
    ncols = comb(n, q)

    # result[u, v] = sum over splittings of signed products; evaluated as
    # gathered elementwise products, reduced per column run then per row run.
    A, B = a.coeffs, b.coeffs
    out_rows = np.empty((len(ru), ncols))
    csT = cs[np.newaxis, :]
    for start in range(0, len(ru), _WEDGE_CHUNK):
        stop = min(start + _WEDGE_CHUNK, len(ru))
        block = A[np.ix_(ri[start:stop], ci)] * B[np.ix_(rj[start:stop], cj)]
        block *= csT
        out_rows[start:stop] = np.add.reduceat(block, cseg, axis=1)
    out_rows *= rs[:, np.newaxis]
    grid = np.add.reduceat(out_rows, rseg, axis=0)
    return DoubleForm(n, p, q, grid)


def interior(omega: DoubleForm, alpha: DoubleForm) -> DoubleForm:
    """Interior product: the adjoint of wedging by omega.

    <interior(omega, alpha), beta> = <alpha, wedge(omega, beta)> for every
    beta of degree (alpha.p - omega.p, alpha.q - omega.q).
    """
    omega._check_same_space(alpha)
    n = omega.n
    p2, q2 = alpha.p - omega.p, alpha.q - omega.q
    if p2 < 0 or q2 < 0:
        raise basis.DegreeOutOfRangeError(
            f"interior product underflow: {omega.degree} into {alpha.degree}"
        )

    ru, ri, rj, rs, _ = basis.merge_table(n, omega.p, p2)
    cu, ci, cj, cs, _ = basis.merge_table(n, omega.q, q2)
    np1, np2 = comb(n, omega.p), comb(n, p2)
    nq1, nq2 = comb(n, omega.q), comb(n, q2)

    # gather rows: rowpair[i1, i2, :] = sign(I1,I2) * alpha[I1 u I2, :]
    rowpair = np.zeros((np1, np2, alpha.coeffs.shape[1]))
    rowpair[ri, rj] = rs[:, np.newaxis] * alpha.coeffs[ru]
    # gather columns the same way, then sum against omega's grid;
    # chunk the leading axis to bound the 4-axis buffer
    grid = np.zeros((np2, nq2))
    chunk = max(1, int(3e7) // max(1, np2 * nq1 * nq2))
    for start in range(0, np1, chunk):
        stop = min(start + chunk, np1)
        colpair = np.zeros((stop - start, np2, nq1, nq2))
        colpair[:, :, ci, cj] = cs * rowpair[start:stop][:, :, cu]
        grid += np.einsum("abcd,ac->bd", colpair, omega.coeffs[start:stop])
    return DoubleForm(n, p2, q2, grid)


@lru_cache(maxsize=None)
def _contract_gather(n: int, p: int, q: int):
    """Per-singleton gather lists for contracting a (p,q) form."""
    ru, ri, rj, rs, _ = basis.merge_table(n, 1, p - 1)
    cu, ci, cj, cs, _ = basis.merge_table(n, 1, q - 1)
    rows = [(ru[ri == m], rj[ri == m], rs[ri == m]) for m in range(n)]
    cols = [(cu[ci == m], cj[ci == m], cs[ci == m]) for m in range(n)]
    return rows, cols


def contract(a: DoubleForm) -> DoubleForm:
    """One contraction: the interior product by the metric.

    Specialized kernel: sums the n signed diagonal gathers directly
    instead of going through the generic interior product.
    """
    if a.p < 1 or a.q < 1:
        raise basis.DegreeOutOfRangeError(
            f"cannot contract a form of degree {a.degree}"
        )
    n = a.n
    rows, cols = _contract_gather(n, a.p, a.q)
    grid = np.zeros((comb(n, a.p - 1), comb(n, a.q - 1)))
    for m in range(n):
        ur, jr, sr = rows[m]
        uc, jc, sc = cols[m]
        grid[np.ix_(jr, jc)] += (sr[:, np.newaxis] * sc) * a.coeffs[np.ix_(ur, uc)]
    return DoubleForm(n, a.p - 1, a.q - 1, grid)


def contract_k(a: DoubleForm, k: int) -> DoubleForm:
    """k-fold contraction (k = 0 returns the input)."""
    out = a
    for _ in range(k):
        out = contract(out)
    return out


def full_contraction(a: DoubleForm) -> float:
    """Contract a (p,p) form down to a scalar, divided by nothing: c^p(a)."""
    if a.p != a.q:
        raise IncompatibleOperandsError("full contraction needs p = q")
    return contract_k(a, a.p).scalar


def hodge_star(a: DoubleForm) -> DoubleForm:
    """Factorwise Hodge star: coeffs(I^c, J^c) = eps_I eps_J coeffs(I, J).

    Agrees with interior(a, g^n/n!); the identity suite cross-checks the
    two routes.
    """
    n = a.n
    rperm, rsign = basis.complement_table(n, a.p)
    cperm, csign = basis.complement_table(n, a.q)
    grid = np.zeros((comb(n, n - a.p), comb(n, n - a.q)))
    grid[np.ix_(rperm, cperm)] = rsign[:, np.newaxis] * csign * a.coeffs
    return DoubleForm(n, n - a.p, n - a.q, grid)


def compose(a: DoubleForm, b: DoubleForm) -> DoubleForm:
    """Composition product: the product of the operator grids.

    a of degree (p,m) is a map from degree-m to degree-p multivectors; b of
    degree (m,q) feeds into it, yielding a (p,q) form.
    """
    a._check_same_space(b)
    if a.q != b.p:
        raise IncompatibleOperandsError(
            f"inner-degree mismatch: {a.degree} o {b.degree}"
        )
    return DoubleForm(a.n, a.p, b.q, a.coeffs @ b.coeffs)


def deriv_f_h(h: DoubleForm, omega: DoubleForm) -> DoubleForm:
    """The derivation F_h on diagonal forms.

    For a symmetric (1,1) direction h and a (p,p) form omega with p >= 1:

        F_h(omega) = (g^{p-1} h / (p-1)!) o omega + omega o (g^{p-1} h / (p-1)!)

    For p = 0 the result is zero.  F_h is self-adjoint for the inner
    product and a derivation for the wedge on diagonal degrees.
    """
    h._check_same_space(omega)
    if h.degree != (1, 1) or not h.is_symmetric():
        raise InvalidDirectionError("direction must be a symmetric (1,1) form")
    if omega.p != omega.q:
        raise IncompatibleOperandsError("F_h acts on (p,p) forms")
    p = omega.p
    if p == 0:
        return zero_form(omega.n, 0, 0)
    gh = wedge(metric_power(omega.n, p - 1), h) / factorial(p - 1)
    return compose(gh, omega) + compose(omega, gh)


def clear_caches() -> None:
    """Drop derived gather tables along with the basis-level caches."""
    _contract_gather.cache_clear()
    basis.clear_caches()
