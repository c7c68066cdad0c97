"""Acceptance: the shipped sample tables regenerate the two reference
figure styles without error, and the independent special-function
implementation agrees with the simulator's reference values."""

import json
import os

import numpy as np

from monikit_plots import FigureSpec, render
from monikit_plots.special import lifshitz_J

SAMPLES = os.path.abspath(
    os.path.join(os.path.dirname(__file__), os.pardir, "samples"))


def test_regenerates_arc_style_figure_from_shipped_tables(tmp_path):
    """Volume-law arc figure with profile-ansatz overlay renders from the
    shipped centroid tables."""
    out = render(FigureSpec(
        kind="arc",
        csv_paths=(os.path.join(SAMPLES, "arc_centroid.csv"),),
        out_path=str(tmp_path / "arc_style.png"),
        fit_path=os.path.join(SAMPLES, "arc_page_fit.json")))
    assert os.path.getsize(out) > 0


def test_regenerates_crossing_style_figure_from_shipped_tables(tmp_path):
    """Mutual-information crossing figure renders from the shipped scan
    tables (with the crossing marker when the fit summary is present)."""
    fit = os.path.join(SAMPLES, "crossing_fit.json")
    out = render(FigureSpec(
        kind="crossing",
        csv_paths=(os.path.join(SAMPLES, "tmi_scan.csv"),),
        out_path=str(tmp_path / "crossing_style.png"),
        fit_path=fit if os.path.isfile(fit) else None))
    assert os.path.getsize(out) > 0


def test_independent_j_matches_simulator_grid_to_1e9():
    """The package's own q-series evaluation of J(x) agrees with the
    simulator-produced 100-point reference grid to 1e-9."""
    with open(os.path.join(SAMPLES, "arc_lifshitz_fit.json")) as fh:
        grid = json.load(fh)["j_grid"]
    x = np.asarray(grid["x"], dtype=float)
    assert x.shape == (100,)
    ours = lifshitz_J(x, float(grid["lam"]))
    worst = float(np.max(np.abs(ours - np.asarray(grid["j"], dtype=float))))
    print(f"[secondary] independent J grid agreement: max|diff| = {worst:.2e} "
          f"(tolerance 1e-9): {'PASS' if worst <= 1e-9 else 'FAIL'}")
    assert worst <= 1e-9
