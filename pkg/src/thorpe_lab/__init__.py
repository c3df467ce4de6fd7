"""Numerical exterior algebra of double forms on a single tangent space.

The package verifies pointwise curvature identities (generalized Lanczos,
Avez, Gauss-Bonnet/Lovelock relations, Hodge-star dualities) and
classifies curvature models against Einstein- and Thorpe-type conditions.
"""

from .basis import (
    DegreeOutOfRangeError,
    complement_sign,
    dimension_cap,
    enumerate_basis,
    merge_sign,
    set_dimension_cap,
)
from .forms import (
    ATOL,
    RTOL,
    DoubleForm,
    IncompatibleOperandsError,
    InvalidDirectionError,
    compose,
    contract,
    contract_k,
    deriv_f_h,
    hodge_star,
    inner,
    interior,
    metric,
    metric_power,
    scalar_form,
    symmetric_part,
    transpose,
    volume_form,
    wedge,
    zero_form,
)

__version__ = "0.1.0"

__all__ = [
    "ATOL",
    "RTOL",
    "DegreeOutOfRangeError",
    "DoubleForm",
    "IncompatibleOperandsError",
    "InvalidDirectionError",
    "complement_sign",
    "compose",
    "contract",
    "contract_k",
    "deriv_f_h",
    "dimension_cap",
    "enumerate_basis",
    "hodge_star",
    "inner",
    "interior",
    "merge_sign",
    "metric",
    "metric_power",
    "scalar_form",
    "set_dimension_cap",
    "symmetric_part",
    "transpose",
    "volume_form",
    "wedge",
    "zero_form",
]
