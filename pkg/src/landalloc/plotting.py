"""Bar charts of normalized HV and IGD per instance, from a comparison report."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _bars(ax, report: dict, key: str, ylabel: str) -> None:
    instances = report["instances"]
    optimizers = report["optimizers"]
    x = np.arange(len(instances))
    width = 0.8 / len(optimizers)
    for k, opt in enumerate(optimizers):
        vals = [report["per_instance"][inst][key][opt] for inst in instances]
        ax.bar(x + (k - (len(optimizers) - 1) / 2) * width, vals, width, label=opt)
    ax.set_xticks(x)
    ax.set_xticklabels(instances, rotation=30, ha="right")
    ax.set_ylabel(ylabel)
    ax.set_ylim(0, 1.05)


def render_comparison(report: dict, out_dir, fmt: str = "png") -> list[Path]:
    """Write ``normalized_hv.<fmt>`` and ``normalized_igd.<fmt>`` into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for key, label in (("normalized_hv", "normalized HV (higher is better)"),
                       ("normalized_igd", "normalized IGD (lower is better)")):
        fig, ax = plt.subplots(figsize=(max(4.0, 1.2 * len(report["instances"]) + 2), 3.2))
        _bars(ax, report, key, label)
        ax.legend(fontsize=7, ncol=min(4, len(report["optimizers"])), loc="upper center",
                  bbox_to_anchor=(0.5, -0.35))
        fig.tight_layout()
        path = out_dir / f"{key}.{fmt}"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written
