"""Orthogonal decomposition of (p,p) double forms into trace-free parts.

Every (p,p) double form splits uniquely as

    omega = sum_{i=0}^{K} g^{p-i} omega_i,     K = min(p, n-p),

with each omega_i a trace-free (i,i) double form, and the summands are
mutually orthogonal.  For the curvature tensor (p = 2) the pieces are the
scalar part, the traceless Ricci part, and the Weyl part.

Extraction walks the contraction ladder: contracting the sum p-j times
kills every component above j and scales the rest by structure constants,

    c^{p-j}(omega) = sum_{i<=j} kappa(j,i) g^{j-i} omega_i,

a triangular system solved top row first.  The kappa constants are not
hard-coded: they are measured once per (n,p) on trace-free probe forms,
with a proportionality assertion, so the extraction is convention-free.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from . import forms
from .basis import rank
from .forms import DoubleForm


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class Decomposition:
    """Trace-free components of a (p,p) double form."""

    n: int
    p: int
    components: tuple[DoubleForm, ...]  # omega_0 .. omega_K, omega_i of degree (i,i)

    @property
    def K(self) -> int:
        return len(self.components) - 1

    def component_norms(self) -> list[float]:
        return [c.norm() for c in self.components]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "components": [
                {"index": i, "form": c.to_dict()} for i, c in enumerate(self.components)
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Decomposition":
        entries = data["components"]
        comps: list[DoubleForm | None] = [None] * len(entries)
        for entry in entries:
            comps[int(entry["index"])] = DoubleForm.from_dict(entry["form"])
        if any(c is None for c in comps):
            raise DecompositionError("missing component index in serialized data")
        return cls(n=int(data["n"]), p=int(data["p"]), components=tuple(comps))


def _trace_free_probe(n: int, i: int) -> DoubleForm:
    """A nonzero trace-free (i,i) form: e^{1..i} (x) e^{i+1..2i} (disjoint blocks)."""
    if i == 0:
        return forms.scalar_form(n, 1.0)
    if 2 * i > n:
        raise DecompositionError(f"no trace-free probe for degree {i} in dimension {n}")
    d = comb(n, i)
    grid = np.zeros((d, d))
    left = tuple(range(1, i + 1))
    right = tuple(range(i + 1, 2 * i + 1))
    grid[rank(left), rank(right)] = 1.0
    return DoubleForm(n, i, i, grid)


@lru_cache(maxsize=None)
def _ladder_constants(n: int, p: int) -> dict[tuple[int, int], float]:
    """kappa(j,i): scale of c^{p-j}(g^{p-i} w) against g^{j-i} w, w trace-free (i,i)."""
    K = min(p, n - p)
    kappa: dict[tuple[int, int], float] = {}
    for i in range(K + 1):
        w = _trace_free_probe(n, i)
        gw = forms.wedge(forms.metric_power(n, p - i), w)
        for j in range(i, K + 1):
            contracted = forms.contract_k(gw, p - j)
            ref = forms.wedge(forms.metric_power(n, j - i), w)
            denom = forms.inner(ref, ref)
            value = forms.inner(contracted, ref) / denom
            drift = (contracted - value * ref).norm() / max(contracted.norm(), 1.0)
            if drift > 1e-9:
                raise DecompositionError(
                    f"contraction ladder not proportional at (n={n}, p={p}, "
                    f"j={j}, i={i}): drift {drift:.3e}"
                )
            kappa[(j, i)] = value
    return kappa


def decompose(omega: DoubleForm) -> Decomposition:
    """Split a (p,p) double form into its trace-free components."""
    if omega.p != omega.q:
        raise DecompositionError(f"decomposition needs p = q, got {omega.degree}")
    n, p = omega.n, omega.p
    K = min(p, n - p)
    kappa = _ladder_constants(n, p)
    components: list[DoubleForm] = []
    for j in range(K + 1):
        alpha = forms.contract_k(omega, p - j)
        for i in range(j):
            alpha = alpha - kappa[(j, i)] * forms.wedge(
                forms.metric_power(n, j - i), components[i]
            )
        components.append(alpha / kappa[(j, j)])
    return Decomposition(n=n, p=p, components=tuple(components))


def reconstruct(d: Decomposition) -> DoubleForm:
    """Sum g^{p-i} omega_i back together."""
    out = forms.zero_form(d.n, d.p, d.p)
    for i, comp in enumerate(d.components):
        out = out + forms.wedge(forms.metric_power(d.n, d.p - i), comp)
    return out


DEFAULT_VANISHING_TOL = 1e-8


@dataclass(frozen=True)
class VanishingReport:
    vanishes: tuple[bool, ...]          # per component index
    norms: tuple[float, ...]
    degenerate: bool                    # whole input negligible
    contraction_agrees: tuple[bool, ...]  # cross-check per index (True where skipped)


def _in_metric_image_residual(target: DoubleForm) -> float:
    """Relative residual of the best solve g * X = target over X of one lower degree.

    Used for the contraction characterization of component vanishing:
    c^{p-i}(omega) lies in the image of wedging by g exactly when omega_i = 0.
    Callers handle the degree-(0,0) case directly.
    """
    n = target.n
    i = target.p
    d_lo = comb(n, i - 1)
    cols = []
    for a in range(d_lo):
        for b in range(d_lo):
            e = np.zeros((d_lo, d_lo))
            e[a, b] = 1.0
            cols.append(
                forms.wedge(forms.metric(n), DoubleForm(n, i - 1, i - 1, e)).coeffs.ravel()
            )
    M = np.stack(cols, axis=1)
    y = target.coeffs.ravel()
    x, *_ = np.linalg.lstsq(M, y, rcond=None)
    return float(np.linalg.norm(M @ x - y) / max(np.linalg.norm(y), 1e-300))


# Solving the image test is dense in C(n,i-1)^2 unknowns; skip the
# cross-check above this width to keep reports fast on big grids.
_IMAGE_TEST_MAX_WIDTH = 40


def component_vanishing_report(
    omega: DoubleForm, tol: float = DEFAULT_VANISHING_TOL
) -> VanishingReport:
    """Which trace-free components of omega vanish (relative to ||omega||).

    Each verdict is cross-checked, where tractable, against the contraction
    characterization: omega_i = 0 exactly when c^{p-i}(omega) is a multiple
    of g times a lower form (for i = 0: when the full contraction is zero).
    """
    d = decompose(omega)
    scale = omega.norm()
    if scale <= tol:
        count = len(d.components)
        return VanishingReport(
            vanishes=(True,) * count,
            norms=tuple(d.component_norms()),
            degenerate=True,
            contraction_agrees=(True,) * count,
        )
    vanishes = []
    agrees = []
    n, p = omega.n, omega.p
    for i, comp in enumerate(d.components):
        v = comp.norm() <= tol * scale
        vanishes.append(v)
        if 2 * p <= n and comb(n, max(i - 1, 0)) <= _IMAGE_TEST_MAX_WIDTH:
            target = forms.contract_k(omega, p - i)
            if i == 0:
                in_image = abs(target.scalar) <= tol * scale
            else:
                in_image = _in_metric_image_residual(target) <= tol
            agrees.append(in_image == v)
        else:
            agrees.append(True)
    return VanishingReport(
        vanishes=tuple(vanishes),
        norms=tuple(d.component_norms()),
        degenerate=False,
        contraction_agrees=tuple(agrees),
    )


def clear_caches() -> None:
    _ladder_constants.cache_clear()
    forms.clear_caches()
