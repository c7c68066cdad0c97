"""Rendering behavior: every kind draws, output is deterministic,
invalid requests fail with named reasons."""

import json
import math
import os

import numpy as np
import pytest

from monikit_plots import FigureSpec, render
from monikit_plots.cli import main as cli_main
from monikit_plots.figspec import read_table

COLUMNS = "L,p,px,py,pz,observable,index,mean,stderr,n_samples"


def write_csv(path, rows):
    with open(path, "w") as fh:
        fh.write(COLUMNS + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")
    return str(path)


def arc_rows(L=8, p=0.25, with_midpoint=True):
    rows = []
    for l in range(L + 1):
        if not with_midpoint and l == L // 2:
            continue
        s = 1.3 * L * math.log((L / math.pi) * math.sin(math.pi * l / L)) \
            if 0 < l < L else 0.0
        rows.append([L, p, 0.25, 0.25, 0.25, "arc", l, round(s, 6), 0.05, 40])
    return rows


def scan_rows(observable, sizes=(8, 12), p_values=(0.6, 0.68, 0.76)):
    rows = []
    for L in sizes:
        for k, p in enumerate(p_values):
            mean = (p - 0.68) * L - 1.0
            rows.append([L, p, (1 - p) / 3, (1 - p) / 3, (1 - p) / 3,
                         observable, k, round(mean, 6), 0.1, 50])
    return rows


def purify_rows(L=8, n_sweeps=60):
    rows = []
    for t in range(n_sweeps + 1):
        s = (L * L + 1) / (1.0 + t)
        rows.append([L, 0.0, 1 / 3, 1 / 3, 1 / 3, "purify", t,
                     round(s, 6), 0.02, 30])
    return rows


class TestFigureSpec:
    def test_unknown_kind(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", arc_rows())
        with pytest.raises(ValueError, match="unknown figure kind"):
            FigureSpec("sparkline", (path,), str(tmp_path / "o.png"))

    def test_missing_input(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            FigureSpec("arc", (str(tmp_path / "nope.csv"),),
                       str(tmp_path / "o.png"))

    def test_missing_fit(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", arc_rows())
        with pytest.raises(FileNotFoundError):
            FigureSpec("arc", (path,), str(tmp_path / "o.png"),
                       fit_path=str(tmp_path / "nope.json"))

    def test_bad_extension(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", arc_rows())
        with pytest.raises(ValueError, match="output must end in"):
            FigureSpec("arc", (path,), str(tmp_path / "o.bmp"))

    def test_no_inputs(self, tmp_path):
        with pytest.raises(ValueError, match="at least one"):
            FigureSpec("arc", (), str(tmp_path / "o.png"))


class TestReadTable:
    def test_header_enforced(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("L,p,px\n1,2,3\n")
        with pytest.raises(ValueError, match="missing columns"):
            read_table(str(path))

    def test_ragged_row_reported(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(COLUMNS + "\n8,0.1,0.3,0.3,0.3,arc,1,2.0,0.1\n")
        with pytest.raises(ValueError, match="line 2"):
            read_table(str(path))

    def test_observable_mismatch(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", arc_rows())
        spec = FigureSpec("crossing", (path,), str(tmp_path / "o.png"))
        with pytest.raises(ValueError, match="needs observable 'tmi'"):
            render(spec)


class TestRenderKinds:
    def test_arc(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", arc_rows())
        out = render(FigureSpec("arc", (path,), str(tmp_path / "o.png")))
        assert os.path.getsize(out) > 0

    def test_arc_with_page_overlay(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", arc_rows())
        fit = {"kind": "page_ansatz",
               "coefficients": {n: {"value": v} for n, v in
                                [("v", 0.01), ("c", 0.5), ("c1", 0.1),
                                 ("a", 1.2), ("gamma", 0.4)]}}
        fp = tmp_path / "fit.json"
        fp.write_text(json.dumps(fit))
        out = render(FigureSpec("arc", (path,), str(tmp_path / "o.png"),
                                fit_path=str(fp)))
        assert os.path.getsize(out) > 0

    def test_collapse(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", arc_rows())
        fit = {"kind": "collapse",
               "coefficients": {"c": {"value": 0.827, "stderr": 0.01}}}
        fp = tmp_path / "fit.json"
        fp.write_text(json.dumps(fit))
        out = render(FigureSpec("collapse", (path,),
                                str(tmp_path / "o.png"), fit_path=str(fp)))
        assert os.path.getsize(out) > 0

    def test_collapse_needs_midpoint(self, tmp_path):
        path = write_csv(tmp_path / "a.csv",
                         arc_rows(with_midpoint=False))
        with pytest.raises(ValueError, match="midpoint"):
            render(FigureSpec("collapse", (path,), str(tmp_path / "o.png")))

    def test_crossing_with_marker(self, tmp_path):
        path = write_csv(tmp_path / "t.csv", scan_rows("tmi"))
        fit = {"kind": "crossing", "p_c": 0.683, "p_c_err": 0.004,
               "nu_inv": 1.0}
        fp = tmp_path / "fit.json"
        fp.write_text(json.dumps(fit))
        out = render(FigureSpec("crossing", (path,),
                                str(tmp_path / "o.png"), fit_path=str(fp)))
        assert os.path.getsize(out) > 0

    def test_tee(self, tmp_path):
        path = write_csv(tmp_path / "t.csv", scan_rows("tee"))
        out = render(FigureSpec("tee", (path,), str(tmp_path / "o.png")))
        assert os.path.getsize(out) > 0

    def test_purify(self, tmp_path):
        path = write_csv(tmp_path / "p.csv", purify_rows())
        out = render(FigureSpec("purify", (path,), str(tmp_path / "o.png")))
        assert os.path.getsize(out) > 0

    def test_phase_map(self, tmp_path):
        path = write_csv(tmp_path / "h.csv", scan_rows("half_entropy"))
        out = render(FigureSpec("phase_map", (path,),
                                str(tmp_path / "o.png")))
        assert os.path.getsize(out) > 0

    def test_multiple_csv_inputs(self, tmp_path):
        p1 = write_csv(tmp_path / "a.csv", arc_rows(L=8))
        p2 = write_csv(tmp_path / "b.csv", arc_rows(L=12))
        out = render(FigureSpec("arc", (p1, p2), str(tmp_path / "o.png")))
        assert os.path.getsize(out) > 0


class TestDeterminism:
    @pytest.mark.parametrize("ext", ["png", "svg"])
    def test_rerender_is_byte_identical(self, tmp_path, ext):
        path = write_csv(tmp_path / "a.csv", arc_rows())
        out1 = str(tmp_path / f"one.{ext}")
        out2 = str(tmp_path / f"two.{ext}")
        render(FigureSpec("arc", (path,), out1))
        render(FigureSpec("arc", (path,), out2))
        with open(out1, "rb") as f1, open(out2, "rb") as f2:
            assert f1.read() == f2.read()

    def test_rendering_does_not_mutate_inputs(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", arc_rows())
        before = open(path, "rb").read()
        render(FigureSpec("arc", (path,), str(tmp_path / "o.png")))
        assert open(path, "rb").read() == before


class TestJGridGuard:
    def test_corrupted_reference_grid_is_rejected(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", arc_rows())
        x = np.linspace(0.01, 0.99, 100)
        from monikit_plots.special import lifshitz_J
        j = lifshitz_J(x, 3.8)
        j[50] += 1e-6
        fit = {"kind": "lifshitz", "L": 8, "lam": 3.8, "beta": 2.5,
               "offset": 1.0, "lnsine_c": 0.8, "lnsine_offset": 1.0,
               "j_grid": {"lam": 3.8, "x": x.tolist(), "j": j.tolist()}}
        fp = tmp_path / "fit.json"
        fp.write_text(json.dumps(fit))
        with pytest.raises(ValueError, match="disagrees"):
            render(FigureSpec("arc", (path,), str(tmp_path / "o.png"),
                              fit_path=str(fp)))


class TestCli:
    def test_happy_path_default_out(self, tmp_path, capsys):
        path = write_csv(tmp_path / "sample.csv", arc_rows())
        assert cli_main(["--kind", "arc", "--csv", path]) == 0
        expected = str(tmp_path / "sample_arc.png")
        assert capsys.readouterr().out.strip() == expected
        assert os.path.getsize(expected) > 0

    def test_explicit_out_and_fit(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", arc_rows())
        fit = tmp_path / "fit.json"
        fit.write_text(json.dumps(
            {"kind": "collapse",
             "coefficients": {"c": {"value": 0.8}}}))
        out = tmp_path / "fig.svg"
        assert cli_main(["--kind", "collapse", "--csv", path,
                         "--fit", str(fit), "--out", str(out)]) == 0
        assert out.stat().st_size > 0

    def test_error_exit_code(self, tmp_path, capsys):
        path = write_csv(tmp_path / "a.csv", arc_rows())
        rc = cli_main(["--kind", "crossing", "--csv", path,
                       "--out", str(tmp_path / "o.png")])
        assert rc == 2
        assert "needs observable" in capsys.readouterr().err
