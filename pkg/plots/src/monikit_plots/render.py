"""Render figures from simulator tables and fit summaries."""

from __future__ import annotations

import os

import matplotlib
matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "monikit-plots"
import matplotlib.pyplot as plt
import numpy as np

from . import special
from .figspec import FigureSpec, load_fit, load_tables

#: metadata wiped per format so re-rendering is byte-identical
_STABLE_METADATA = {
    ".png": {"Software": "monikit-plots"},
    ".svg": {"Date": None},
    ".pdf": {"CreationDate": None},
}

_J_GRID_TOL = 1e-9


def _point_label(p, px, py, pz) -> str:
    return f"(p={p:g}, px={px:g}, py={py:g}, pz={pz:g})"


def _groups(table):
    """Yield ((L, p, px, py, pz), row-mask) in deterministic order."""
    keys = np.stack([table["L"], table["p"], table["px"], table["py"],
                     table["pz"]], axis=1)
    uniq = sorted({tuple(row) for row in keys.tolist()})
    for key in uniq:
        mask = np.all(keys == np.array(key), axis=1)
        yield key, mask


def _crosscheck_j_grid(fit: dict) -> None:
    """Re-evaluate J on the fit's reference grid with this package's own
    q-series; disagreement beyond 1e-9 means the two implementations have
    diverged and the overlay cannot be trusted."""
    grid = fit.get("j_grid")
    if not grid:
        return
    x = np.asarray(grid["x"], dtype=float)
    theirs = np.asarray(grid["j"], dtype=float)
    ours = special.lifshitz_J(x, float(grid["lam"]))
    worst = float(np.max(np.abs(ours - theirs)))
    if worst > _J_GRID_TOL:
        raise ValueError(
            f"independent J(x) evaluation disagrees with the fit file's "
            f"reference grid by {worst:.3e} (> {_J_GRID_TOL:.0e})")


def _draw_arc(ax, table, fit):
    for (L, p, px, py, pz), mask in _groups(table):
        order = np.argsort(table["index"][mask])
        l = table["index"][mask][order]
        mean = table["mean"][mask][order]
        err = table["stderr"][mask][order]
        ax.errorbar(l, mean, yerr=err, marker="o", ms=3.5, lw=1.0,
                    capsize=2, label=f"L={int(L)} {_point_label(p, px, py, pz)}")
        if fit is None:
            continue
        dense = np.linspace(1.0, L - 1.0, 241)
        if fit["kind"] == "page_ansatz":
            ax.plot(dense, special.page_model(dense, float(L),
                                              fit["coefficients"]),
                    color="red", lw=1.4, zorder=5,
                    label="profile ansatz" if int(L) == int(table["L"].max())
                    else None)
        elif fit["kind"] == "lifshitz" and int(L) == int(fit.get("L", L)):
            _crosscheck_j_grid(fit)
            x = dense / float(L)
            ax.plot(dense, fit["beta"] * special.lifshitz_J(x, fit["lam"])
                    + fit["offset"], color="red", lw=1.4, zorder=5,
                    label="Lifshitz profile")
            g = special.log_sine(dense, float(L))
            ax.plot(dense, fit["lnsine_c"] * float(L) * g / 3.0
                    + fit["lnsine_offset"], color="gray", lw=1.2, ls="--",
                    zorder=4, label="best log-sine")
    ax.set_xlabel("cut position l")
    ax.set_ylabel("S(l)  [bits]")


def _draw_collapse(ax, table, fit):
    for (L, p, px, py, pz), mask in _groups(table):
        L = int(L)
        l = table["index"][mask]
        mean = table["mean"][mask]
        mid = np.flatnonzero(l == L // 2)
        if L % 2 or mid.size != 1:
            raise ValueError(f"collapse needs even L with a midpoint row; "
                             f"L={L} table lacks one")
        inner = (l >= 1) & (l <= L - 1)
        x = np.log(np.sin(np.pi * l[inner] / L)) / 3.0
        y = (mean[inner] - mean[mid[0]]) / L
        ax.plot(x, y, "o", ms=4, label=f"L={L} {_point_label(p, px, py, pz)}")
    if fit is not None and fit["kind"] == "collapse":
        c = fit["coefficients"]["c"]["value"]
        span = np.linspace(ax.get_xlim()[0], 0.0, 32)
        ax.plot(span, c * span, color="red", lw=1.4,
                label=f"slope c = {c:.4f}")
    ax.set_xlabel(r"$\frac{1}{3}\ln\,\sin(\pi l / L)$")
    ax.set_ylabel(r"$[S(l) - S(L/2)]\,/\,L$")


def _draw_vs_p(ax, table, ylabel):
    for L in sorted(set(table["L"].tolist())):
        mask = table["L"] == L
        order = np.argsort(table["p"][mask])
        ax.errorbar(table["p"][mask][order], table["mean"][mask][order],
                    yerr=table["stderr"][mask][order], marker="o", ms=3.5,
                    lw=1.0, capsize=2, label=f"L={int(L)}")
    ax.set_xlabel("p")
    ax.set_ylabel(ylabel)


def _draw_crossing(ax, table, fit):
    _draw_vs_p(ax, table, "I(A:B:C)  [bits]")
    if fit is not None and fit["kind"] == "crossing":
        ax.axvline(fit["p_c"], color="red", lw=1.2, ls="--",
                   label=f"p_c = {fit['p_c']:.4f}")
        ax.axvspan(fit["p_c"] - fit["p_c_err"], fit["p_c"] + fit["p_c_err"],
                   color="red", alpha=0.12, lw=0)


def _draw_tee(ax, table, fit):
    _draw_vs_p(ax, table, "topological entropy  [bits]")
    for guide in (1.0, 2.0):
        ax.axhline(guide, color="gray", lw=0.8, ls=":")


def _draw_phase_map(ax, table, fit):
    for L in sorted(set(table["L"].tolist())):
        mask = table["L"] == L
        order = np.argsort(table["p"][mask])
        ax.plot(table["p"][mask][order],
                table["mean"][mask][order] / float(L), marker="o", ms=3.5,
                lw=1.0, label=f"L={int(L)}")
    ax.set_xlabel("p")
    ax.set_ylabel("S(L/2) / L  [bits]")


def _draw_purify(ax, table, fit):
    for (L, p, px, py, pz), mask in _groups(table):
        order = np.argsort(table["index"][mask])
        t = table["index"][mask][order]
        mean = table["mean"][mask][order]
        keep = (t > 0) & (mean > 0)
        ax.loglog(t[keep], mean[keep], marker=".", ms=4, lw=0.9,
                  label=f"L={int(L)} {_point_label(p, px, py, pz)}")
    t = table["index"]
    mean = table["mean"]
    anchor = (t >= 10) & (mean > 0)
    if anchor.any():
        t0 = float(t[anchor].min())
        s0 = float(mean[(t == t0)][0])
        guide = np.geomspace(max(t0 / 8.0, 1.0), float(t.max()), 32)
        ax.loglog(guide, s0 * t0 / guide, color="gray", ls="--", lw=1.0,
                  label=r"$\propto 1/t$")
    ax.set_xlabel("t  [sweeps]")
    ax.set_ylabel("S  [bits]")


_DRAWERS = {
    "arc": _draw_arc,
    "collapse": _draw_collapse,
    "crossing": _draw_crossing,
    "tee": _draw_tee,
    "purify": _draw_purify,
    "phase_map": _draw_phase_map,
}


def render(spec: FigureSpec) -> str:
    """Render the requested figure; returns the output path."""
    table = load_tables(spec)
    fit = load_fit(spec)
    if fit is not None and fit.get("kind") == "lifshitz":
        _crosscheck_j_grid(fit)
    fig, ax = plt.subplots(figsize=(6.4, 4.4), dpi=150)
    try:
        _DRAWERS[spec.kind](ax, table, fit)
        ax.legend(fontsize=7, loc="best")
        ax.set_title(spec.kind)
        fig.tight_layout()
        ext = os.path.splitext(spec.out_path)[1].lower()
        fig.savefig(spec.out_path, metadata=_STABLE_METADATA[ext])
    finally:
        plt.close(fig)
    return spec.out_path
