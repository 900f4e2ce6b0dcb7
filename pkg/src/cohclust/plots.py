"""Static SVG summaries for CLI output: scree curves, merge plots, and
affinity heatmaps. Rendering is pinned for reproducible bytes (fixed hash
salt, no date metadata)."""

import io

__all__ = ["scree_svg", "merge_plot_svg", "affinity_svg"]

# order-stable categorical palette shared with the web frontend
PALETTE = (
    "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#eeca3b",
    "#b279a2", "#ff9da6", "#9d755d", "#bab0ac", "#1f77b4", "#aec7e8",
    "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2",
    "#dbdb8d", "#9edae5",
)


def _setup():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "cohclust"
    return plt


def _to_svg(fig) -> str:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    import matplotlib.pyplot as plt

    plt.close(fig)
    return buf.getvalue()


def scree_svg(curve) -> str:
    plt = _setup()
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.plot(curve.k, curve.d, marker="o", color=PALETTE[0])
    ax.invert_xaxis()
    ax.set_xlabel("number of clusters k")
    ax.set_ylabel("merge dissimilarity")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return _to_svg(fig)


def merge_plot_svg(history, labels) -> str:
    """Channels (rows) against k (columns); color marks cluster identity."""
    plt = _setup()
    n = history.n_channels
    grid = [[ch for ch in range(n)]]  # k = n: all singletons
    for step in history.steps:
        grid.append(list(step.membership))
    fig, ax = plt.subplots(figsize=(max(4, 0.4 * n), max(3, 0.25 * n)))
    for col, membership in enumerate(grid):
        k = n - col
        for ch, cid in enumerate(membership):
            ax.scatter(k, ch, s=60, marker="s",
                       color=PALETTE[cid % len(PALETTE)], linewidths=0)
    ax.set_xlabel("number of clusters k")
    ax.set_yticks(range(n))
    ax.set_yticklabels(labels, fontsize=7)
    ax.set_xlim(n + 0.5, 0.5)
    ax.invert_yaxis()
    fig.tight_layout()
    return _to_svg(fig)


def affinity_svg(aff, labels) -> str:
    plt = _setup()
    n = aff.values.shape[0]
    fig, ax = plt.subplots(figsize=(max(4, 0.35 * n), max(3.5, 0.3 * n)))
    im = ax.imshow(aff.values, vmin=0.0, vmax=1.0, cmap="viridis")
    ax.set_xticks(range(n))
    ax.set_xticklabels(labels, rotation=90, fontsize=7)
    ax.set_yticks(range(n))
    ax.set_yticklabels(labels, fontsize=7)
    fig.colorbar(im, ax=ax, label="co-membership rate")
    fig.tight_layout()
    return _to_svg(fig)
