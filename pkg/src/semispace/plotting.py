"""2-D section plot of the region census: the lines ``x_i = 0`` drawn in the
slice coordinates ``lam`` (``x = u + lam B``) with the recovered points."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import PreconditionError  # noqa: E402


def _to_lambda(slice_, x):
    B = np.array([[float(v) for v in row] for row in slice_.basis.rows])
    u = np.array([float(v) for v in slice_.offset])
    lam, *_ = np.linalg.lstsq(B.T, np.asarray(x, dtype=float) - u, rcond=None)
    return lam


def _exit_parameter(p, d, lo, hi):
    """Largest ``t`` with ``p + t d`` inside the box, or ``None`` if the ray misses it."""
    t0, t1 = -np.inf, np.inf
    for a, b, pa, da in zip(lo, hi, p, d):
        if abs(da) < 1e-12:
            if not a <= pa <= b:
                return None
            continue
        ta, tb = sorted(((a - pa) / da, (b - pa) / da))
        t0, t1 = max(t0, ta), min(t1, tb)
    return t1 if t0 <= t1 else None


def plot_section(census, slice_, path: str, title: str = ""):
    """Write the section plot of a 2-dimensional slice to ``path`` (format from the suffix)."""
    if slice_.dim != 2:
        raise PreconditionError(f"section plots need a 2-dimensional slice, got dimension {slice_.dim}")
    pts = [_to_lambda(slice_, r.real_point) for r in census.qualifying if r.real_point is not None]
    wit = [np.array([float(v) for v in r.lam]) for r in census.regions]
    allp = np.array(pts + wit) if pts or wit else np.zeros((1, 2))
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    pad = 0.5 + 0.3 * (hi - lo)
    lo, hi = lo - pad, hi + pad

    fig, ax = plt.subplots(figsize=(5, 5))
    ts = np.linspace(-1.0, 1.0, 2)
    for k, i in enumerate(census.I):
        a, c = slice_.coordinate_form(i)
        a = np.array([float(v) for v in a])
        c = float(c)
        if not a.any():
            continue
        # a . lam + c = 0, drawn as a long segment through the point closest to the origin
        p0 = -c * a / (a @ a)
        d = np.array([-a[1], a[0]]) / np.linalg.norm(a)
        span = 4 * float(np.max(hi - lo))
        seg = p0[None, :] + (ts * span)[:, None] * d[None, :]
        ax.plot(seg[:, 0], seg[:, 1], color="0.3", lw=1)
        t_end = _exit_parameter(p0, d if k % 2 == 0 else -d, lo + 0.08 * (hi - lo), hi - 0.08 * (hi - lo))
        if t_end is not None:
            lx, ly = p0 + t_end * (d if k % 2 == 0 else -d)
            ax.annotate(f"$x_{{{i + 1}}}=0$", (lx, ly), fontsize=8, color="0.3",
                        bbox=dict(fc="white", ec="none", pad=0.5))
    for r in census.regions:
        lam = [float(v) for v in r.lam]
        ax.plot(*lam, marker="o", ms=4, mfc="none", mec="tab:blue" if r.recession_trivial else "0.6", ls="none")
    if pts:
        P = np.array(pts)
        ax.plot(P[:, 0], P[:, 1], "o", color="tab:red", ms=6, label="recovered points")
    ax.set_xlim(lo[0], hi[0])
    ax.set_ylim(lo[1], hi[1])
    ax.set_xlabel(r"$\lambda_1$")
    ax.set_ylabel(r"$\lambda_2$")
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    if pts:
        ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
