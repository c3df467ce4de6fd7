"""Gauss-Bonnet curvatures, Lovelock tensors, and Einstein/Thorpe predicates.

For a curvature tensor R and admissible k the module computes

  thorpe_power      R^k, the k-fold exterior power
  gauss_bonnet      h_2k = c^{2k} R^k / (2k)!          (h_2 = Scal/2)
  lovelock          T_2k = h_2k g - c^{2k-1} R^k / (2k-1)!   (T_n = 0)
  grad_H2k / grad_G2k  the algebraic gradients (1/2) T_2k and
                    (1/2)||R^k||^2 g - c^{2k-1}(R^k o R^k)/(2k-1)!

and the predicate family: (2k)-Einstein (T_2k proportional to g,
equivalently the omega_1 component of R^k vanishes), hyper (2k)-Einstein
(c R^k proportional to g^{2k-1}), weakly (2k)-Einstein, and the
(2k)-Thorpe / anti-Thorpe duality classes.

Where the theory offers several equivalent criteria (star equation,
component vanishing, contraction identities) the classifier evaluates all
that are tractable and raises InternalInconsistencyError if they disagree:
disagreement means an algebra bug, which is precisely what this artifact
exists to detect.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from . import decomposition as dcmp
from . import forms
from .basis import DegreeOutOfRangeError
from .forms import DoubleForm

DEFAULT_TOL = 1e-8


class WrongRegimeError(ValueError):
    """Predicate evaluated outside its (n, k) regime."""


class VacuousConditionError(WrongRegimeError):
    """Predicate that is empty at this (n, k), e.g. Einstein at 2k >= n."""


class InternalInconsistencyError(AssertionError):
    """Two provably equivalent criteria disagreed beyond tolerance."""


def thorpe_power(R: DoubleForm, k: int) -> DoubleForm:
    """k-th exterior power of a (2,2) curvature tensor."""
    if R.degree != (2, 2):
        raise forms.IncompatibleOperandsError(f"need a (2,2) form, got {R.degree}")
    if k < 1:
        raise DegreeOutOfRangeError(f"k must be >= 1, got {k}")
    if 2 * k > R.n:
        raise DegreeOutOfRangeError(f"R^{k} has degree {2*k} > n = {R.n}")
    out = R
    for _ in range(k - 1):
        out = forms.wedge(out, R)
    return out


def gauss_bonnet(R: DoubleForm, k: int) -> float:
    """h_2k: the full contraction of R^k over (2k)!.  h_0 = 1."""
    if k == 0:
        return 1.0
    Rk = thorpe_power(R, k)
    return forms.contract_k(Rk, 2 * k).scalar / factorial(2 * k)


def lovelock(R: DoubleForm, k: int) -> DoubleForm:
    """T_2k = h_2k g - c^{2k-1} R^k / (2k-1)!.  T_0 = g; T_n vanishes."""
    if k == 0:
        return forms.metric(R.n)
    Rk = thorpe_power(R, k)
    h = forms.contract_k(Rk, 2 * k).scalar / factorial(2 * k)
    return h * forms.metric(R.n) - forms.contract_k(Rk, 2 * k - 1) / factorial(2 * k - 1)


def grad_H2k_algebraic(R: DoubleForm, k: int) -> DoubleForm:
    """Gradient of the total h_2k functional: one half of the Lovelock tensor."""
    return 0.5 * lovelock(R, k)


def grad_G2k_algebraic(R: DoubleForm, k: int) -> DoubleForm:
    """Algebraic part of the gradient of the squared-norm functional of R^k.

    (1/2)||R^k||^2 g - c^{2k-1}(R^k o R^k)/(2k-1)!; the divergence term of
    the full gradient vanishes exactly when R^k is harmonic.
    """
    Rk = thorpe_power(R, k)
    return (
        0.5 * forms.inner(Rk, Rk) * forms.metric(R.n)
        - forms.contract_k(forms.compose(Rk, Rk), 2 * k - 1) / factorial(2 * k - 1)
    )


def _proportionality_residual(t: DoubleForm, direction: DoubleForm) -> tuple[float, float]:
    """(coefficient, relative residual) of the best fit t = coeff * direction."""
    denom = forms.inner(direction, direction)
    coeff = forms.inner(t, direction) / denom
    resid = (t - coeff * direction).norm()
    return coeff, resid / max(t.norm(), 1e-300)


def is_einstein_2k(R: DoubleForm, k: int, tol: float = DEFAULT_TOL) -> bool:
    """T_2k proportional to g; cross-checked against omega_1 of R^k vanishing."""
    if 2 * k >= R.n:
        raise VacuousConditionError(f"(2k)-Einstein needs 2k < n, got 2k={2*k}, n={R.n}")
    T = lovelock(R, k)
    Rk = thorpe_power(R, k)
    negligible = T.norm() <= tol * max(Rk.norm(), 1.0)
    _, resid = _proportionality_residual(T, forms.metric(R.n))
    by_lovelock = negligible or resid <= tol

    comps = dcmp.decompose(Rk)
    omega1 = comps.components[1]
    by_component = omega1.norm() <= tol * max(Rk.norm(), 1.0)
    if by_lovelock != by_component:
        raise InternalInconsistencyError(
            f"(2k)-Einstein criteria disagree at n={R.n}, k={k}: "
            f"Lovelock-deviator says {by_lovelock}, omega_1 norm {omega1.norm():.3e}"
        )
    return by_lovelock


def is_hyper_einstein_2k(
    R: DoubleForm, k: int, tol: float = DEFAULT_TOL
) -> tuple[bool, float]:
    """c R^k = lambda g^{2k-1}; returns (verdict, fitted lambda)."""
    if 2 * k >= R.n:
        raise VacuousConditionError(f"hyper (2k)-Einstein needs 2k < n, got 2k={2*k}, n={R.n}")
    Rk = thorpe_power(R, k)
    cRk = forms.contract(Rk)
    direction = forms.metric_power(R.n, 2 * k - 1)
    lam, resid = _proportionality_residual(cRk, direction)
    if cRk.norm() <= tol * max(Rk.norm(), 1.0):
        return True, 0.0
    return resid <= tol, lam


def is_weakly_einstein_2k(R: DoubleForm, k: int, tol: float = DEFAULT_TOL) -> bool:
    """c^{2k-1}(R^k o R^k)/(2k-1)! = (2k/n) ||R^k||^2 g."""
    n = R.n
    if 2 * k > n:
        raise DegreeOutOfRangeError(f"need 2k <= n, got 2k={2*k}, n={n}")
    Rk = thorpe_power(R, k)
    lhs = forms.contract_k(forms.compose(Rk, Rk), 2 * k - 1) / factorial(2 * k - 1)
    rhs = (2.0 * k / n) * forms.inner(Rk, Rk) * forms.metric(n)
    scale = max(lhs.norm(), rhs.norm(), tol)
    return (lhs - rhs).norm() / scale <= tol


@dataclass(frozen=True)
class ThorpeClass:
    thorpe: bool
    anti_thorpe: bool
    mode: str                       # "star" (duality available) or "components"
    vacuous: bool = False           # n = 2k: the Thorpe condition is empty
    degenerate: bool = False        # R^k negligible: both classes hold
    residuals: dict = field(default_factory=dict)


def _component_parity(
    comps: dcmp.Decomposition, scale: float, tol: float
) -> tuple[bool, bool]:
    odd_max = max(
        (c.norm() for i, c in enumerate(comps.components) if i % 2 == 1), default=0.0
    )
    even_max = max(
        (c.norm() for i, c in enumerate(comps.components) if i % 2 == 0), default=0.0
    )
    return odd_max <= tol * scale, even_max <= tol * scale


def _contraction_criteria(
    Rk: DoubleForm, k: int, r: int
) -> tuple[float, float]:
    """Relative residuals of the contraction reformulations (even n = 2r, 2k <= r).

    Thorpe:      sum_{s=1}^{2k} (-1)^s     g^{s-1} c^s R^k / (s! (r-2k+s)!) = 0
    anti-Thorpe: 2 R^k/(r-2k)! - sum_{s=1}^{2k} (-1)^{s-1} g^s c^s R^k / (s! (r-2k+s)!) = 0
    """
    n = Rk.n
    scale = max(Rk.norm(), 1e-300)
    th = forms.zero_form(n, 2 * k - 1, 2 * k - 1)
    at = 2.0 * Rk / factorial(r - 2 * k)
    for s in range(1, 2 * k + 1):
        cs = forms.contract_k(Rk, s)
        coeff = 1.0 / (factorial(s) * factorial(r - 2 * k + s))
        th = th + ((-1) ** s * coeff) * forms.wedge(forms.metric_power(n, s - 1), cs)
        at = at - ((-1) ** (s - 1) * coeff) * forms.wedge(forms.metric_power(n, s), cs)
    return th.norm() / scale, at.norm() / scale


# Component extraction is skipped above this R^k grid width: the ladder
# stays cheap but the cross-checks (odd/even split of a 924^2 grid at
# n = 12, k = 3) add nothing the star and contraction routes do not cover.
_COMPONENT_MAX_WIDTH = 260


def thorpe_class(R: DoubleForm, k: int, tol: float = DEFAULT_TOL) -> ThorpeClass:
    """Classify (2k)-Thorpe / (2k)-anti-Thorpe, cross-checking every criterion.

    Even n = 2r with 2k <= r: the star equation on g^{r-2k} R^k is the
    primary test, cross-checked against component parity and the
    contraction identities.  All other regimes with n > 2k use component
    parity of the decomposition of R^k.  At n = 2k the Thorpe condition is
    vacuous and anti-Thorpe reduces to h_2k = 0.
    """
    n = R.n
    if 2 * k > n:
        raise WrongRegimeError(f"need 2k <= n, got 2k={2*k}, n={n}")
    Rk = thorpe_power(R, k)
    scale = Rk.norm()
    residuals: dict[str, float] = {}

    if n == 2 * k:
        h = forms.contract_k(Rk, 2 * k).scalar / factorial(2 * k)
        denom = max(abs(h), scale, 1.0)
        anti = abs(h) <= tol * max(scale, 1.0)
        residuals["h_2k"] = abs(h) / denom
        return ThorpeClass(
            thorpe=True,
            anti_thorpe=anti,
            mode="components",
            vacuous=True,
            degenerate=scale <= tol,
            residuals=residuals,
        )

    if scale <= tol:
        return ThorpeClass(
            thorpe=True,
            anti_thorpe=True,
            mode="components",
            degenerate=True,
            residuals={"norm": scale},
        )

    verdicts_thorpe: dict[str, bool] = {}
    verdicts_anti: dict[str, bool] = {}

    even_duality = n % 2 == 0 and 2 * k <= n // 2
    mode = "star" if even_duality else "components"

    if even_duality:
        r = n // 2
        G = forms.wedge(forms.metric_power(n, r - 2 * k), Rk)
        sG = forms.hodge_star(G)
        gn = max(G.norm(), 1e-300)
        res_plus = (sG - G).norm() / gn
        res_minus = (sG + G).norm() / gn
        residuals["star_thorpe"] = res_plus
        residuals["star_anti"] = res_minus
        verdicts_thorpe["star"] = res_plus <= tol
        verdicts_anti["star"] = res_minus <= tol

        res_th, res_at = _contraction_criteria(Rk, k, r)
        residuals["contraction_thorpe"] = res_th
        residuals["contraction_anti"] = res_at
        verdicts_thorpe["contraction"] = res_th <= tol
        verdicts_anti["contraction"] = res_at <= tol

    if Rk.coeffs.shape[0] <= _COMPONENT_MAX_WIDTH:
        comps = dcmp.decompose(Rk)
        th, at = _component_parity(comps, scale, tol)
        residuals["component_odd_max"] = max(
            (c.norm() for i, c in enumerate(comps.components) if i % 2 == 1), default=0.0
        ) / scale
        residuals["component_even_max"] = max(
            (c.norm() for i, c in enumerate(comps.components) if i % 2 == 0), default=0.0
        ) / scale
        verdicts_thorpe["components"] = th
        verdicts_anti["components"] = at

    if not verdicts_thorpe:
        raise WrongRegimeError(
            f"no tractable Thorpe criterion at n={n}, k={k} "
            f"(grid width {Rk.coeffs.shape[0]})"
        )

    for name, verdicts in (("Thorpe", verdicts_thorpe), ("anti-Thorpe", verdicts_anti)):
        values = set(verdicts.values())
        if len(values) > 1:
            raise InternalInconsistencyError(
                f"{name} criteria disagree at n={n}, k={k}: {verdicts} "
                f"(residuals {residuals})"
            )

    return ThorpeClass(
        thorpe=next(iter(verdicts_thorpe.values())),
        anti_thorpe=next(iter(verdicts_anti.values())),
        mode=mode,
        residuals=residuals,
    )


@dataclass(frozen=True)
class MinimalitySplit:
    norm_plus_gb: float      # ||R^k||^2 + h_4k
    norm_minus_gb: float     # ||R^k||^2 - h_4k
    half_sq_minus: float     # (1/2)||R^k - *R^k||^2
    half_sq_plus: float      # (1/2)||R^k + *R^k||^2


def pointwise_minimality(R: DoubleForm, k: int) -> MinimalitySplit:
    """The split behind the squared-norm lower bound at n = 4k.

    Contracts: norm_plus_gb = half_sq_plus and norm_minus_gb = half_sq_minus,
    both nonnegative; h_4k here is computed by full contraction of R^{2k}
    while the star side is computed independently.
    """
    n = R.n
    if n != 4 * k:
        raise WrongRegimeError(f"pointwise split needs n = 4k, got n={n}, k={k}")
    Rk = thorpe_power(R, k)
    h4k = gauss_bonnet(R, 2 * k)
    norm2 = forms.inner(Rk, Rk)
    star = forms.hodge_star(Rk)
    return MinimalitySplit(
        norm_plus_gb=norm2 + h4k,
        norm_minus_gb=norm2 - h4k,
        half_sq_minus=0.5 * forms.inner(Rk - star, Rk - star),
        half_sq_plus=0.5 * forms.inner(Rk + star, Rk + star),
    )


def obstruction_sign(R: DoubleForm, k: int, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """((n-4k)! h_4k, ||g^{r-2k} R^k||^2) for a classified (anti-)Thorpe input.

    The two values agree up to the sign of the class, vanishing exactly
    when R^k = 0.
    """
    n = R.n
    if n % 2 != 0 or n < 4 * k:
        raise WrongRegimeError(f"obstruction needs even n >= 4k, got n={n}, k={k}")
    cls = thorpe_class(R, k, tol)
    if not (cls.thorpe or cls.anti_thorpe):
        raise WrongRegimeError("input is neither Thorpe nor anti-Thorpe")
    r = n // 2
    Rk = thorpe_power(R, k)
    G = forms.wedge(forms.metric_power(n, r - 2 * k), Rk)
    h4k = gauss_bonnet(R, 2 * k)
    return factorial(n - 4 * k) * h4k, forms.inner(G, G)


@dataclass(frozen=True)
class ConfFlatEquivalences:
    thorpe4: bool
    einstein4: bool
    iota_ric_condition: bool
    residuals: dict


def conf_flat_equivalences(
    A: np.ndarray | DoubleForm, n: int, tol: float = DEFAULT_TOL
) -> ConfFlatEquivalences:
    """The three equivalent 4-Thorpe conditions for a conformally flat model.

    For R = gA in even dimension n >= 8: (1) 4-Thorpe, (2) 4-Einstein,
    (3) interior(Ric, R) = (||Ric||^2/n) g.  Each residual is evaluated
    independently; the booleans agree on every valid input.
    """
    if isinstance(A, DoubleForm):
        A_form = A
    else:
        A_form = DoubleForm(n, 1, 1, np.asarray(A, dtype=np.float64))
    if not A_form.is_symmetric():
        raise forms.InvalidDirectionError("Schouten tensor must be symmetric")
    R = forms.wedge(forms.metric(n), A_form)

    cls = thorpe_class(R, 2, tol)
    thorpe4 = cls.thorpe

    einstein4 = is_einstein_2k(R, 2, tol)

    Ric = forms.contract(R)
    lhs = forms.interior(Ric, R)
    rhs = (forms.inner(Ric, Ric) / n) * forms.metric(n)
    scale = max(lhs.norm(), rhs.norm(), 1e-300)
    res3 = (lhs - rhs).norm() / scale
    iota_ok = res3 <= tol

    return ConfFlatEquivalences(
        thorpe4=thorpe4,
        einstein4=einstein4,
        iota_ric_condition=iota_ok,
        residuals={**{f"thorpe_{k_}": v for k_, v in cls.residuals.items()},
                   "iota_ric": res3},
    )


@dataclass(frozen=True)
class KReport:
    k: int
    h_2k: float
    lovelock_norm_residual: float
    lovelock_deviator_residual: float
    einstein: bool | None
    hyper_einstein: bool | None
    hyper_lambda: float | None
    weakly_einstein: bool
    thorpe: bool
    anti_thorpe: bool
    thorpe_mode: str
    vacuous: bool
    degenerate: bool
    norm_Rk_sq: float
    component_norms: list[float] | None
    residuals: dict

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "h_2k": self.h_2k,
            "lovelock_norm_residual": self.lovelock_norm_residual,
            "lovelock_deviator_residual": self.lovelock_deviator_residual,
            "flags": {
                "einstein_2k": self.einstein,
                "hyper_einstein_2k": self.hyper_einstein,
                "weakly_einstein_2k": self.weakly_einstein,
                "thorpe_2k": self.thorpe,
                "anti_thorpe_2k": self.anti_thorpe,
                "vacuous": self.vacuous,
                "degenerate": self.degenerate,
            },
            "thorpe_mode": self.thorpe_mode,
            "lambda": self.hyper_lambda,
            "norm_Rk_sq": self.norm_Rk_sq,
            "component_norms": self.component_norms,
            "residuals": self.residuals,
        }


def classification_report(
    R: DoubleForm, tol: float = DEFAULT_TOL, k_values: list[int] | None = None
) -> list[KReport]:
    """Full per-k record of invariants and predicate flags, 2 <= 2k <= n."""
    n = R.n
    ks = k_values if k_values is not None else list(range(1, n // 2 + 1))
    out = []
    for k in ks:
        if 2 * k > n:
            raise WrongRegimeError(f"k={k} inadmissible at n={n}")
        Rk = thorpe_power(R, k)
        h = gauss_bonnet(R, k)
        T = lovelock(R, k)
        norm_resid = T.norm() / max(Rk.norm(), 1.0)
        _, dev_resid = _proportionality_residual(T, forms.metric(n))
        if T.norm() <= tol * max(Rk.norm(), 1.0):
            dev_resid = 0.0

        if 2 * k < n:
            einstein = is_einstein_2k(R, k, tol)
            hyper, lam = is_hyper_einstein_2k(R, k, tol)
        else:
            einstein, hyper, lam = None, None, None
        weakly = is_weakly_einstein_2k(R, k, tol)
        cls = thorpe_class(R, k, tol)

        comp_norms = None
        if Rk.coeffs.shape[0] <= _COMPONENT_MAX_WIDTH:
            comp_norms = dcmp.decompose(Rk).component_norms()

        out.append(
            KReport(
                k=k,
                h_2k=h,
                lovelock_norm_residual=norm_resid,
                lovelock_deviator_residual=dev_resid,
                einstein=einstein,
                hyper_einstein=hyper,
                hyper_lambda=lam,
                weakly_einstein=weakly,
                thorpe=cls.thorpe,
                anti_thorpe=cls.anti_thorpe,
                thorpe_mode=cls.mode,
                vacuous=cls.vacuous,
                degenerate=cls.degenerate,
                norm_Rk_sq=forms.inner(Rk, Rk),
                component_norms=comp_norms,
                residuals=cls.residuals,
            )
        )
    return out
