"""Minimal SVG rendering of experiment reports (optional, needs matplotlib)."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

from .experiments import ExperimentReport


def _numeric(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def render_svg(report: ExperimentReport, path: str | Path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # fixed salt and no timestamp keep the SVG byte-stable across runs
    matplotlib.rcParams["svg.hashsalt"] = "entropy-mirage"

    grouped: dict[str, list] = defaultdict(list)
    for r in report.rows:
        if _numeric(r.x) and _numeric(r.y):
            grouped[r.series].append((r.x, r.y))

    fig, ax = plt.subplots(figsize=(7, 4.5))
    kind = report.spec.kind
    if kind == "ba-vs-er":
        labels = sorted(grouped)
        ax.boxplot([[y for _, y in grouped[k]] for k in labels])
        ax.set_xticks(range(1, len(labels) + 1), labels)
        ax.set_ylabel("degree-sequence entropy (bits)")
    elif kind in ("pi-histogram", "omega-graph"):
        for name, pts in sorted(grouped.items()):
            if "histogram" in name:
                xs, ys = zip(*pts)
                ax.step(xs, ys, where="mid", label=name)
        ax.set_xlabel("degree")
        ax.set_ylabel("nodes")
    else:
        for name, pts in sorted(grouped.items()):
            if len(pts) > 1:
                xs, ys = zip(*pts)
                ax.plot(xs, ys, label=name)
        ax.set_yscale("symlog")
        ax.set_xlabel("x")
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize="small")
    ax.set_title(kind)
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
