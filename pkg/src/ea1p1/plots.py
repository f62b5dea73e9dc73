"""Render sweep tables to figure files next to their CSV output."""

from __future__ import annotations

from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .errors import DomainError
from .harness import SweepTable


def _by_dimension(rows, ncol: int):
    grouped: dict[int, list[tuple]] = defaultdict(list)
    for row in rows:
        grouped[int(row[ncol])].append(row)
    return dict(sorted(grouped.items()))


def render_sweep_figure(table: SweepTable, path: str) -> str:
    """Draw the table's trend plot and save it to ``path`` (format by
    extension). Returns the path written."""
    experiment = table.metadata.get("experiment", "")
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    try:
        if experiment == "fig1":
            for n, rows in _by_dimension(table.rows, 1).items():
                ratios = [r[0] for r in rows]
                ax.plot(ratios, [r[2] for r in rows], "o", ms=3, label=f"MC n={n}")
                ax.plot(ratios, [r[3] for r in rows], "--", lw=1, label=f"lower n={n}")
                ax.plot(ratios, [r[4] for r in rows], "-", lw=1, label=f"upper n={n}")
            ax.set_xlabel(r"$\sigma/\sqrt{C}$")
            ax.set_ylabel("success probability")
        elif experiment == "fig2":
            ax.plot([r[0] for r in table.rows], [r[1] for r in table.rows], "-")
            peak = max(table.rows, key=lambda r: r[1])
            ax.axvline(peak[0], color="gray", ls=":", lw=1)
            ax.annotate(f"max {peak[1]:.4f} @ {peak[0]:.2f}", xy=peak,
                        xytext=(peak[0] + 0.2, peak[1]), fontsize=8)
            ax.set_xlabel(r"$\sigma/\sqrt{C}$")
            ax.set_ylabel("improvement rate")
        elif experiment == "fig3":
            for n, rows in _by_dimension(table.rows, 1).items():
                ratios = [r[0] for r in rows]
                ax.plot(ratios, [r[2] for r in rows], "o", ms=3, label=f"MC n={n}")
                ax.plot(ratios, [r[3] for r in rows], "--", lw=1, label=f"lower n={n}")
            ax.set_xlabel(r"$\sigma/\sqrt{C}$")
            ax.set_ylabel("improvement rate")
        elif experiment == "dim-decay":
            ns = [r[0] for r in table.rows]
            ax.semilogy(ns, [r[1] for r in table.rows], "o-", label="upper bound")
            base = table.rows[0][2]
            ref = [table.rows[0][1] * base ** (n - ns[0]) for n in ns]
            ax.semilogy(ns, ref, "--", lw=1, label=f"fit a={base:.4f}")
            ax.set_xlabel("dimension n")
            ax.set_ylabel("probability upper bound")
        elif experiment == "rus-scaling":
            ax.plot([r[0] for r in table.rows], [r[1] for r in table.rows], "o-",
                    label="n * MC rate")
            ax.axhline(0.3239, color="gray", ls=":", lw=1, label="0.3239")
            ax.set_xlabel("dimension n")
            ax.set_ylabel("scaled improvement rate")
        elif experiment == "cht-opt-sigma":
            ax.plot([r[0] for r in table.rows], [r[1] for r in table.rows], "-",
                    label="jump probability")
            ax.axvline(table.rows[0][2], color="gray", ls=":", lw=1,
                       label=rf"$\sigma^*$ = {table.rows[0][2]:.3f}")
            ax.set_xlabel(r"$\sigma$")
            ax.set_ylabel("success probability")
        elif experiment == "cht-zero-prob":
            ax.bar([r[0] for r in table.rows], [r[1] for r in table.rows], width=0.6)
            ax.set_xlabel("dimension n")
            ax.set_ylabel("right-exploration successes")
        else:
            raise DomainError(f"no figure renderer for experiment {experiment!r}")
        if ax.get_legend_handles_labels()[0]:
            ax.legend(fontsize=7, ncol=2)
        ax.grid(alpha=0.3)
        ax.set_title(experiment)
        fig.tight_layout()
        fig.savefig(path, dpi=150)
    finally:
        plt.close(fig)
    return path
