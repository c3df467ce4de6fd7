"""Curvature model recipes realized as symmetric (2,2) double forms.

Every recipe produces a tensor satisfying the first Bianchi identity:

  constant_curvature(n, c)   (c/2) g^2; coordinate 2-planes have curvature c
  conformally_flat(A)        g A for a symmetric Schouten-type (1,1) form A
  hypersurface(B)            (1/2) B^2 for a symmetric shape operator B
  product(m1, m2)            factor curvatures embedded on disjoint index blocks
  random_bianchi(n, m, seed) sum of m exterior squares (1/2) b_i^2 of random
                             symmetric (1,1) forms, entries uniform in [-1,1]
                             mirrored from the upper triangle of a PCG64 draw
  explicit(form)             validated passthrough

The constant-curvature normalization is pinned by the product-of-space-forms
diagonal of R^k, whose sphere-plane value must be (2k)!/2^k, and by
h_2 = Scal/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Union

import numpy as np

from . import forms
from .basis import DegreeOutOfRangeError, enumerate_basis, rank
from .forms import DoubleForm

FIRST_BIANCHI_TOL = 1e-10


class InvalidCurvatureError(ValueError):
    pass


@dataclass(frozen=True)
class ConstantCurvature:
    n: int
    c: float


@dataclass(frozen=True)
class Product:
    left: "CurvatureModel"
    right: "CurvatureModel"


@dataclass(frozen=True)
class ConformallyFlat:
    schouten: np.ndarray  # symmetric n x n

    def __post_init__(self):
        a = np.asarray(self.schouten, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidCurvatureError(f"Schouten grid must be square, got {a.shape}")
        if not np.allclose(a, a.T, atol=1e-12):
            raise InvalidCurvatureError("Schouten grid must be symmetric")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "schouten", a)


@dataclass(frozen=True)
class Hypersurface:
    shape: np.ndarray  # symmetric n x n shape operator

    def __post_init__(self):
        b = np.asarray(self.shape, dtype=np.float64)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise InvalidCurvatureError(f"shape grid must be square, got {b.shape}")
        if not np.allclose(b, b.T, atol=1e-12):
            raise InvalidCurvatureError("shape grid must be symmetric")
        b = b.copy()
        b.flags.writeable = False
        object.__setattr__(self, "shape", b)


@dataclass(frozen=True)
class RandomBianchi:
    n: int
    terms: int
    seed: int


@dataclass(frozen=True)
class Explicit:
    form: DoubleForm


CurvatureModel = Union[
    ConstantCurvature, Product, ConformallyFlat, Hypersurface, RandomBianchi, Explicit
]


def model_dimension(model: CurvatureModel) -> int:
    if isinstance(model, ConstantCurvature):
        return model.n
    if isinstance(model, Product):
        return model_dimension(model.left) + model_dimension(model.right)
    if isinstance(model, ConformallyFlat):
        return model.schouten.shape[0]
    if isinstance(model, Hypersurface):
        return model.shape.shape[0]
    if isinstance(model, RandomBianchi):
        return model.n
    if isinstance(model, Explicit):
        return model.form.n
    raise TypeError(f"not a curvature model: {model!r}")


def random_symmetric_direction(n: int, rng: np.random.Generator) -> DoubleForm:
    """Symmetric (1,1) form with entries uniform in [-1,1]: upper triangle drawn, mirrored."""
    m = rng.uniform(-1.0, 1.0, (n, n))
    grid = np.triu(m) + np.triu(m, 1).T
    return DoubleForm(n, 1, 1, grid)


def _embed_block(R: DoubleForm, n_total: int, offset: int, out: np.ndarray) -> None:
    pairs = enumerate_basis(R.n, 2)
    ranks = [rank(tuple(x + offset for x in I)) for I in pairs]
    out[np.ix_(ranks, ranks)] = R.coeffs


def realize(model: CurvatureModel) -> DoubleForm:
    """Build the (2,2) curvature tensor of a model."""
    if isinstance(model, ConstantCurvature):
        if model.n < 2:
            raise InvalidCurvatureError(f"need n >= 2, got {model.n}")
        return (model.c / 2.0) * forms.metric_power(model.n, 2)
    if isinstance(model, ConformallyFlat):
        n = model.schouten.shape[0]
        A = DoubleForm(n, 1, 1, model.schouten)
        return forms.wedge(forms.metric(n), A)
    if isinstance(model, Hypersurface):
        n = model.shape.shape[0]
        B = DoubleForm(n, 1, 1, model.shape)
        return 0.5 * forms.wedge(B, B)
    if isinstance(model, Product):
        left = realize(model.left)
        right = realize(model.right)
        n = left.n + right.n
        grid = np.zeros((comb(n, 2), comb(n, 2)))
        _embed_block(left, n, 0, grid)
        _embed_block(right, n, left.n, grid)
        return DoubleForm(n, 2, 2, grid)
    if isinstance(model, RandomBianchi):
        rng = np.random.Generator(np.random.PCG64(model.seed))
        out = forms.zero_form(model.n, 2, 2)
        for _ in range(model.terms):
            b = random_symmetric_direction(model.n, rng)
            out = out + 0.5 * forms.wedge(b, b)
        return out
    if isinstance(model, Explicit):
        form = model.form
        if form.degree != (2, 2):
            raise InvalidCurvatureError(f"explicit form must be (2,2), got {form.degree}")
        if not form.is_symmetric():
            raise InvalidCurvatureError("explicit form is not symmetric")
        res = first_bianchi_residual(form)
        if res > FIRST_BIANCHI_TOL:
            raise InvalidCurvatureError(
                f"explicit form violates the first Bianchi identity (residual {res:.3e})"
            )
        return form
    raise TypeError(f"not a curvature model: {model!r}")


def as_four_tensor(R: DoubleForm) -> np.ndarray:
    """Expand a (2,2) form to the antisymmetrized 4-index array R[x,y,z,w]."""
    if R.degree != (2, 2):
        raise forms.IncompatibleOperandsError(f"need a (2,2) form, got {R.degree}")
    n = R.n
    T = np.zeros((n, n, n, n))
    pairs = enumerate_basis(n, 2)
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            v = R.coeffs[a, b]
            ii, jj, kk, ll = i - 1, j - 1, k - 1, l - 1
            T[ii, jj, kk, ll] = v
            T[jj, ii, kk, ll] = -v
            T[ii, jj, ll, kk] = -v
            T[jj, ii, ll, kk] = v
    return T


def first_bianchi_residual(R: DoubleForm) -> float:
    """Max cyclic sum |R(x,y,z,w) + R(y,z,x,w) + R(z,x,y,w)| over ||R||."""
    T = as_four_tensor(R)
    cyc = T + T.transpose(1, 2, 0, 3) + T.transpose(2, 0, 1, 3)
    scale = R.norm()
    if scale == 0.0:
        return 0.0
    return float(np.abs(cyc).max() / scale)


def ricci(R: DoubleForm) -> DoubleForm:
    """First contraction of the curvature tensor."""
    return forms.contract(R)


def scalar_curvature(R: DoubleForm) -> float:
    """Full contraction c^2 R."""
    return forms.contract_k(R, 2).scalar


def sectional_curvature(R: DoubleForm, plane: tuple[int, ...]) -> float:
    """Diagonal coefficient of R^k at a coordinate 2k-plane index set."""
    plane = tuple(sorted(plane))
    if len(plane) % 2 != 0 or len(plane) == 0 or len(plane) > R.n:
        raise DegreeOutOfRangeError(
            f"plane must have even cardinality in [2, {R.n}], got {plane}"
        )
    if len(set(plane)) != len(plane) or plane[0] < 1 or plane[-1] > R.n:
        raise DegreeOutOfRangeError(f"plane {plane} is not a subset of 1..{R.n}")
    k = len(plane) // 2
    Rk = R
    for _ in range(k - 1):
        Rk = forms.wedge(Rk, R)
    r = rank(plane)
    return float(Rk.coeffs[r, r])


# -- JSON recipes ----------------------------------------------------------


def model_from_dict(data: dict) -> CurvatureModel:
    """Parse the CurvatureModel JSON schema."""
    try:
        kind = data["type"]
    except (TypeError, KeyError) as exc:
        raise InvalidCurvatureError("model JSON needs a 'type' field") from exc
    if kind == "constant_curvature":
        return ConstantCurvature(n=int(data["n"]), c=float(data["c"]))
    if kind == "product":
        factors = data["factors"]
        if len(factors) < 2:
            raise InvalidCurvatureError("product needs at least two factors")
        model = model_from_dict(factors[0])
        for f in factors[1:]:
            model = Product(model, model_from_dict(f))
        return model
    if kind == "conformally_flat":
        grid = np.asarray(data["schouten"], dtype=np.float64)
        if "n" in data and int(data["n"]) != grid.shape[0]:
            raise InvalidCurvatureError(
                f"declared n={data['n']} does not match Schouten grid {grid.shape}"
            )
        return ConformallyFlat(schouten=grid)
    if kind == "hypersurface":
        grid = np.asarray(data["shape"], dtype=np.float64)
        if "n" in data and int(data["n"]) != grid.shape[0]:
            raise InvalidCurvatureError(
                f"declared n={data['n']} does not match shape grid {grid.shape}"
            )
        return Hypersurface(shape=grid)
    if kind == "random_bianchi":
        return RandomBianchi(n=int(data["n"]), terms=int(data["terms"]), seed=int(data["seed"]))
    if kind == "explicit":
        return Explicit(form=DoubleForm.from_dict(data["form"]))
    raise InvalidCurvatureError(f"unknown model type {kind!r}")


def model_to_dict(model: CurvatureModel) -> dict:
    if isinstance(model, ConstantCurvature):
        return {"type": "constant_curvature", "n": model.n, "c": model.c}
    if isinstance(model, Product):
        return {
            "type": "product",
            "factors": [model_to_dict(model.left), model_to_dict(model.right)],
        }
    if isinstance(model, ConformallyFlat):
        return {
            "type": "conformally_flat",
            "n": model.schouten.shape[0],
            "schouten": model.schouten.tolist(),
        }
    if isinstance(model, Hypersurface):
        return {"type": "hypersurface", "n": model.shape.shape[0], "shape": model.shape.tolist()}
    if isinstance(model, RandomBianchi):
        return {"type": "random_bianchi", "n": model.n, "terms": model.terms, "seed": model.seed}
    if isinstance(model, Explicit):
        return {"type": "explicit", "form": model.form.to_dict()}
    raise TypeError(f"not a curvature model: {model!r}")


def space_hyperbolic_product(r: int, c: float = 1.0) -> Product:
    """S^r(c) x H^r(-c): the canonical non-trivial Thorpe-type example."""
    return Product(ConstantCurvature(r, c), ConstantCurvature(r, -c))


def space_hyperbolic_schouten(r: int, c: float = 1.0) -> np.ndarray:
    """Schouten grid of S^r(c) x H^r(-c): diag(c/2 on the sphere block, -c/2 after)."""
    return np.diag([c / 2.0] * r + [-c / 2.0] * r)
