"""Figures for rate-distortion sweeps and residual images."""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "inband": dict(marker="o", color="tab:blue", label="in-band ME/MC"),
    "band2band": dict(marker="s", color="tab:red", linestyle="--", label="band-to-band"),
}


def rd_figure(points, rate="bpp", quality="psnr_mean", title=None):
    """PSNR against bit rate, one curve per method."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    for method in dict.fromkeys(p.method for p in points):
        pts = sorted((p for p in points if p.method == method), key=lambda p: getattr(p, rate))
        xs = [getattr(p, rate) for p in pts]
        ys = [getattr(p, quality) for p in pts]
        keep = [i for i, y in enumerate(ys) if math.isfinite(y)]
        ax.plot([xs[i] for i in keep], [ys[i] for i in keep],
                **STYLE.get(method, dict(marker="^", label=method)))
    ax.set_xlabel("bits per pixel" if rate == "bpp" else "error-frame bits per pixel")
    ax.set_ylabel("PSNR (dB)")
    ax.grid(True, alpha=0.3)
    ax.legend(frameon=False)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return fig


def residual_figure(residuals, titles=None):
    """Residual planes on a mid-grey background, side by side."""
    fig, axes = plt.subplots(1, len(residuals), figsize=(3.2 * len(residuals), 3.0), squeeze=False)
    for i, (ax, r) in enumerate(zip(axes[0], residuals)):
        ax.imshow(np.clip(np.asarray(r) + 128, 0, 255), cmap="gray", vmin=0, vmax=255)
        ax.set_axis_off()
        if titles:
            ax.set_title(titles[i])
    fig.tight_layout()
    return fig


def save(fig, path, dpi=150):
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
