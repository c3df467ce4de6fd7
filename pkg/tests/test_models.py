"""Curvature model recipes, their invariants, and the JSON schema."""

from math import comb, factorial

import numpy as np
import pytest

from thorpe_lab import contract, contract_k, inner, metric, metric_power, wedge
from thorpe_lab.basis import DegreeOutOfRangeError
from thorpe_lab.forms import DoubleForm
from thorpe_lab.models import (
    ConformallyFlat,
    ConstantCurvature,
    Explicit,
    Hypersurface,
    InvalidCurvatureError,
    Product,
    RandomBianchi,
    first_bianchi_residual,
    model_from_dict,
    model_to_dict,
    realize,
    ricci,
    scalar_curvature,
    sectional_curvature,
    space_hyperbolic_product,
    space_hyperbolic_schouten,
)

from helpers import rel_residual, rng, rand_symmetric_11


def kim_product(k: int) -> Product:
    return Product(ConstantCurvature(2 * k, 1.0), ConstantCurvature(2 * k, -1.0))


# -- realize ---------------------------------------------------------------------


def test_constant_curvature_is_half_c_g_squared():
    R = realize(ConstantCurvature(5, 2.0))
    assert rel_residual(R, 1.0 * metric_power(5, 2)) == 0.0
    assert sectional_curvature(R, (1, 2)) == pytest.approx(2.0)


def test_unit_sphere_invariants():
    n = 4
    R = realize(ConstantCurvature(n, 1.0))
    assert rel_residual(ricci(R), (n - 1) * metric(n)) < 1e-14
    assert scalar_curvature(R) == pytest.approx(n * (n - 1))


def test_product_block_embedding_kim_values():
    # S^2k x H^2k: sphere plane (2k)!/2^k, hyperbolic plane (-1)^k (2k)!/2^k,
    # mixed planes flat
    for k in [1, 2]:
        R = realize(kim_product(k))
        sphere_plane = tuple(range(1, 2 * k + 1))
        hyper_plane = tuple(range(2 * k + 1, 4 * k + 1))
        assert sectional_curvature(R, sphere_plane) == pytest.approx(
            factorial(2 * k) / 2**k, abs=1e-12
        )
        assert sectional_curvature(R, hyper_plane) == pytest.approx(
            (-1) ** k * factorial(2 * k) / 2**k, abs=1e-12
        )
    R = realize(kim_product(1))
    assert sectional_curvature(R, (1, 3)) == pytest.approx(0.0, abs=1e-15)


def test_product_scalar_curvature_additive():
    left = ConstantCurvature(3, 1.5)
    right = ConstantCurvature(4, -0.5)
    total = realize(Product(left, right))
    assert scalar_curvature(total) == pytest.approx(
        scalar_curvature(realize(left)) + scalar_curvature(realize(right))
    )


def test_space_hyperbolic_product_battery():
    for r, c in [(4, 1.0), (6, 2.0)]:
        n = 2 * r
        A = DoubleForm(n, 1, 1, space_hyperbolic_schouten(r, c))
        R = realize(space_hyperbolic_product(r, c))
        # the product curvature IS gA
        assert rel_residual(R, wedge(metric(n), A)) < 1e-14
        assert contract(A).scalar == pytest.approx(0.0, abs=1e-14)
        assert inner(A, A) == pytest.approx(r * c * c / 2.0, abs=1e-12)
        assert scalar_curvature(R) == pytest.approx(0.0, abs=1e-12)
        assert rel_residual(ricci(R), (n - 2) * A) < 1e-13


def test_conformally_flat_ricci_identity():
    gen = rng(31)
    n = 6
    A = rand_symmetric_11(n, gen)
    R = realize(ConformallyFlat(A.coeffs))
    expected = contract(A).scalar * metric(n) + (n - 2) * A
    assert rel_residual(ricci(R), expected) < 1e-13


def test_hypersurface_recovers_round_sphere():
    # shape operator sqrt(c) g realizes constant curvature c
    n, c = 5, 2.0
    R = realize(Hypersurface(np.sqrt(c) * np.eye(n)))
    assert rel_residual(R, realize(ConstantCurvature(n, c))) < 1e-14


def test_random_bianchi_reproducible_and_bianchi():
    a = realize(RandomBianchi(n=4, terms=3, seed=7))
    b = realize(RandomBianchi(n=4, terms=3, seed=7))
    assert np.array_equal(a.coeffs, b.coeffs)  # bit-identical
    c = realize(RandomBianchi(n=4, terms=3, seed=8))
    assert not np.array_equal(a.coeffs, c.coeffs)
    assert first_bianchi_residual(a) < 1e-12
    assert a.is_symmetric()


def test_explicit_passthrough_and_validation():
    good = realize(ConstantCurvature(4, 1.0))
    assert rel_residual(realize(Explicit(good)), good) == 0.0
    # deliberately break the first Bianchi identity: a (2,2) grid supported
    # on a single off-diagonal pair entry
    grid = np.zeros((6, 6))
    grid[0, 5] = 1.0
    grid[5, 0] = 1.0
    bad = DoubleForm(4, 2, 2, grid)
    assert first_bianchi_residual(bad) > 0.1
    with pytest.raises(InvalidCurvatureError):
        realize(Explicit(bad))


def test_exterior_square_satisfies_first_bianchi():
    gen = rng(32)
    b = rand_symmetric_11(5, gen)
    assert first_bianchi_residual(0.5 * wedge(b, b)) < 1e-12


def test_first_bianchi_residual_conformally_flat():
    gen = rng(33)
    A = rand_symmetric_11(6, gen)
    assert first_bianchi_residual(realize(ConformallyFlat(A.coeffs))) < 1e-12


def test_sectional_curvature_validates_plane():
    R = realize(ConstantCurvature(4, 1.0))
    with pytest.raises(DegreeOutOfRangeError):
        sectional_curvature(R, (1, 2, 3))
    with pytest.raises(DegreeOutOfRangeError):
        sectional_curvature(R, (0, 2))


def test_schouten_must_be_symmetric():
    with pytest.raises(InvalidCurvatureError):
        ConformallyFlat(np.array([[0.0, 1.0], [0.0, 0.0]]))


# -- JSON schema -------------------------------------------------------------------


def test_model_json_roundtrip_all_kinds():
    gen = rng(34)
    A = rand_symmetric_11(4, gen)
    cases = [
        ConstantCurvature(4, 1.0),
        space_hyperbolic_product(4, 1.0),
        ConformallyFlat(A.coeffs),
        Hypersurface(np.eye(4)),
        RandomBianchi(4, 3, 42),
        Explicit(realize(ConstantCurvature(4, 1.0))),
    ]
    for model in cases:
        back = model_from_dict(model_to_dict(model))
        assert rel_residual(realize(back), realize(model)) == 0.0


def test_model_json_examples_from_schema():
    m = model_from_dict({"type": "constant_curvature", "n": 4, "c": 1.0})
    assert isinstance(m, ConstantCurvature)
    m = model_from_dict(
        {
            "type": "product",
            "factors": [
                {"type": "constant_curvature", "n": 4, "c": 1.0},
                {"type": "constant_curvature", "n": 4, "c": -1.0},
            ],
        }
    )
    assert realize(m).n == 8
    m = model_from_dict({"type": "random_bianchi", "n": 4, "terms": 3, "seed": 42})
    assert isinstance(m, RandomBianchi)
    with pytest.raises(InvalidCurvatureError):
        model_from_dict({"type": "warp_drive"})
    with pytest.raises(InvalidCurvatureError):
        model_from_dict({"type": "conformally_flat", "n": 5, "schouten": np.eye(4).tolist()})
