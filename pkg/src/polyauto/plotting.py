"""Figures for the ``report`` and ``degree --plot`` commands (matplotlib, Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_MARKERS = "osD^v<>p"


def degree_law_figure(rows, path):
    """Two panels: measured vs predicted inverse degree, and measured vs ``deg(P)^(n-1)``.

    ``rows`` are dicts with keys ``family``, ``deg_inverse``,
    ``predicted_deg_inverse`` (may be empty) and ``degree_bound``.
    """
    families = sorted({r["family"] for r in rows})
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4.2))
    top = 1
    for k, fam in enumerate(families):
        sub = [r for r in rows if r["family"] == fam]
        marker = _MARKERS[k % len(_MARKERS)]
        pred = [r for r in sub if r["predicted_deg_inverse"] not in ("", None)]
        if pred:
            left.scatter([int(r["predicted_deg_inverse"]) for r in pred],
                         [int(r["deg_inverse"]) for r in pred], marker=marker, alpha=0.6, label=fam)
            top = max(top, max(int(r["deg_inverse"]) for r in pred))
        right.scatter([int(r["degree_bound"]) for r in sub], [int(r["deg_inverse"]) for r in sub],
                      marker=marker, alpha=0.6, label=fam)
    left.plot([0, top + 1], [0, top + 1], color="0.4", lw=0.8, ls="--")
    left.set_xlabel("predicted deg of inverse")
    left.set_ylabel("measured deg of inverse")
    left.set_title("closed-form degree laws")
    left.legend(fontsize=7, loc="upper left")
    right.set_xscale("log")
    right.set_yscale("log")
    lo, hi = right.get_xlim()
    right.plot([1, hi], [1, hi], color="0.4", lw=0.8, ls="--")
    right.set_xlabel("deg(P)^(n-1)")
    right.set_ylabel("measured deg of inverse")
    right.set_title("degree bound")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def series_profile_figure(profile, path, title=None):
    """Bar chart of terms per homogeneous degree of the formal inverse."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar([d for d, _ in profile], [c for _, c in profile], color="tab:blue")
    ax.set_xlabel("degree D")
    ax.set_ylabel("terms of degree D in the inverse series")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
