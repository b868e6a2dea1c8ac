"""Optional SVG line charts of experiment tables."""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

CHART_STYLE = {
    "svg.hashsalt": "ldpbayes",
    "svg.fonttype": "none",
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.figsize": (5.0, 3.5),
}


def line_chart(path, rows, x, y, group, title=None, reference=None):
    """One polyline per value of `group`; `reference` draws a dashed y = x diagonal.

    Rows with a non-finite x (epsilon = inf) stay in the CSV but are not drawn.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(CHART_STYLE):
        fig, ax = plt.subplots()
        for key in sorted({row[group] for row in rows}):
            points = sorted(
                (row[x], row[y]) for row in rows if row[group] == key and math.isfinite(row[x])
            )
            if not points:
                continue
            xs, ys = zip(*points, strict=True)
            ax.plot(xs, ys, marker="o", label=f"{group}={key}")
        if reference == "diagonal":
            ax.plot([0, 1], [0, 1], linestyle="--", color="grey", linewidth=0.8)
        ax.set_xlabel(x)
        ax.set_ylabel(y)
        if title:
            ax.set_title(title)
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path
