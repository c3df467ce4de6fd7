"""Render suite and classification reports to delimited files and figures.

Every CLI command that produces a report can also emit, next to its JSON
output, a CSV table and matplotlib figures summarizing the same numbers.
The JSON stays the authoritative machine-readable artifact; the files here
exist for humans scanning a run.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .classify import KReport
from .decomposition import Decomposition
from .identities import SuiteReport

_FIG_SIZE = (7.0, 4.2)


def _finite(values: list[float], fallback: float = 1.0) -> list[float]:
    return [v if v == v and v not in (float("inf"), float("-inf")) else fallback for v in values]


def write_suite_outputs(report: SuiteReport, directory: str | Path) -> list[Path]:
    """CSV of all cases plus a per-identity worst-residual chart."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    csv_path = out / "suite_cases.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "n", "p", "seed", "residual", "tolerance", "pass"])
        for case in report.cases:
            writer.writerow(
                [case.name, case.n, case.p, case.seed, repr(case.residual),
                 repr(case.tolerance), case.passed]
            )
    written.append(csv_path)

    worst: dict[str, float] = {}
    tols: dict[str, float] = {}
    for case in report.cases:
        worst[case.name] = max(worst.get(case.name, 0.0), case.residual)
        tols[case.name] = case.tolerance
    if worst:
        names = sorted(worst, key=lambda k: -worst[k])
        fig, ax = plt.subplots(figsize=_FIG_SIZE)
        floor = 1e-17
        vals = [max(worst[k], floor) for k in names]
        colors = ["tab:red" if worst[k] >= tols[k] else "tab:blue" for k in names]
        ax.barh(range(len(names)), vals, color=colors)
        ax.set_yticks(range(len(names)), names, fontsize=8)
        ax.set_xscale("log")
        ax.set_xlabel("worst relative residual")
        ax.axvline(min(tols.values()), color="k", ls="--", lw=1, label="tolerance")
        ax.legend(loc="lower right", fontsize=8)
        ax.set_title("identity suite: worst residual per registry entry")
        fig.tight_layout()
        fig_path = out / "suite_residuals.png"
        fig.savefig(fig_path, dpi=150)
        plt.close(fig)
        written.append(fig_path)
    return written


def write_classification_outputs(
    reports: list[KReport], directory: str | Path
) -> list[Path]:
    """CSV of per-k invariants plus charts of h_2k and component norms."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    csv_path = out / "classification.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["k", "h_2k", "norm_Rk_sq", "einstein_2k", "hyper_einstein_2k",
             "lambda", "weakly_einstein_2k", "thorpe_2k", "anti_thorpe_2k",
             "mode", "vacuous", "degenerate"]
        )
        for r in reports:
            writer.writerow(
                [r.k, repr(r.h_2k), repr(r.norm_Rk_sq), r.einstein, r.hyper_einstein,
                 "" if r.hyper_lambda is None else repr(r.hyper_lambda),
                 r.weakly_einstein, r.thorpe, r.anti_thorpe, r.thorpe_mode,
                 r.vacuous, r.degenerate]
            )
    written.append(csv_path)

    fig, axes = plt.subplots(1, 2, figsize=(9.5, 4.0))
    ks = [r.k for r in reports]
    axes[0].bar(ks, [r.h_2k for r in reports], color="tab:blue")
    axes[0].set_xlabel("k")
    axes[0].set_ylabel("h_2k")
    axes[0].set_title("Gauss-Bonnet curvatures")
    axes[0].set_xticks(ks)
    for r in reports:
        if r.component_norms is None:
            continue
        axes[1].plot(range(len(r.component_norms)), r.component_norms,
                     marker="o", label=f"k={r.k}")
    axes[1].set_xlabel("component index i")
    axes[1].set_ylabel("|omega_i|")
    axes[1].set_yscale("symlog", linthresh=1e-12)
    axes[1].set_title("trace-free component norms of R^k")
    if axes[1].lines:
        axes[1].legend(fontsize=8)
    fig.tight_layout()
    fig_path = out / "classification.png"
    fig.savefig(fig_path, dpi=150)
    plt.close(fig)
    written.append(fig_path)
    return written


def write_decomposition_outputs(
    d: Decomposition, roundtrip_residual: float, directory: str | Path
) -> list[Path]:
    """CSV and bar chart of component norms."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    csv_path = out / "decomposition.csv"
    norms = d.component_norms()
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "norm"])
        for i, v in enumerate(norms):
            writer.writerow([i, repr(v)])
        writer.writerow(["roundtrip_residual", repr(roundtrip_residual)])
    written.append(csv_path)

    fig, ax = plt.subplots(figsize=_FIG_SIZE)
    ax.bar(range(len(norms)), [max(v, 1e-17) for v in norms], color="tab:blue")
    ax.set_yscale("log")
    ax.set_xlabel("component index i")
    ax.set_ylabel("|omega_i|")
    ax.set_title(f"trace-free components of a ({d.p},{d.p}) form, n={d.n}")
    ax.set_xticks(range(len(norms)))
    fig.tight_layout()
    fig_path = out / "decomposition.png"
    fig.savefig(fig_path, dpi=150)
    plt.close(fig)
    written.append(fig_path)
    return written
