"""Ensemble runner: configuration, output files, aggregation,
worker/mode independence, table parsing, fit dispatch, selfcheck."""

import filecmp
import json
import math
import os

import numpy as np
import pytest

from monikit import analysis, runner
from monikit.circuit import ProbabilityVector

LN2 = math.log(2.0)


def fmt(x):
    return format(float(x), ".17g")


# -- configuration ---------------------------------------------------------------


class TestConfig:
    def base(self, **kw):
        d = dict(kind="arc", sizes=(4,), n_samples=2, seed=1,
                 points=((0.25, 0.25, 0.25, 0.25),), sweeps=4)
        d.update(kw)
        return d

    def test_valid_roundtrip(self):
        cfg = runner.ExperimentConfig(**self.base())
        again = runner.ExperimentConfig.from_dict(cfg.to_dict())
        assert again == cfg

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="kind"):
            runner.ExperimentConfig(**self.base(kind="banana"))

    def test_unknown_mode(self):
        with pytest.raises(ValueError, match="mode"):
            runner.ExperimentConfig(**self.base(mode="psychic"))

    def test_bad_samples_and_workers(self):
        with pytest.raises(ValueError, match="n_samples"):
            runner.ExperimentConfig(**self.base(n_samples=0))
        with pytest.raises(ValueError, match="workers"):
            runner.ExperimentConfig(**self.base(workers=0))

    def test_line_and_points_are_exclusive(self):
        with pytest.raises(ValueError, match="not both"):
            runner.ExperimentConfig(**self.base(line="isotropic",
                                                p_values=(0.5,)))
        with pytest.raises(ValueError, match="not both"):
            runner.ExperimentConfig(**self.base(points=()))

    def test_unknown_line(self):
        with pytest.raises(ValueError, match="unknown line"):
            runner.ExperimentConfig(**self.base(points=(), line="diag",
                                                p_values=(0.5,)))

    def test_line_needs_values(self):
        with pytest.raises(ValueError, match="p_values"):
            runner.ExperimentConfig(**self.base(points=(), line="isotropic"))

    def test_invalid_probability_rejected_eagerly(self):
        with pytest.raises(ValueError):
            runner.ExperimentConfig(**self.base(points=((0.9, 0.9, 0, 0),)))

    def test_from_dict_rejects_unknown_fields(self):
        with pytest.raises(ValueError, match="unknown config fields"):
            runner.ExperimentConfig.from_dict(self.base(fuzz=1))

    def test_resolved_sweeps_default(self):
        cfg = runner.ExperimentConfig(**self.base(sweeps=None))
        assert cfg.resolved_sweeps(4) == 50
        assert cfg.resolved_sweeps(20) == 80
        cfg2 = runner.ExperimentConfig(**self.base(sweeps=7))
        assert cfg2.resolved_sweeps(20) == 7


class TestNamedLines:
    def test_isotropic(self):
        pv = runner.NAMED_LINES["isotropic"](0.4)
        assert pv.p_plaq == 0.4
        assert pv.px == pv.py == pv.pz == pytest.approx(0.2)

    def test_edge_z(self):
        pv = runner.NAMED_LINES["edge_z"](0.3)
        assert (pv.p_plaq, pv.px, pv.py, pv.pz) == (0.3, 0.0, 0.0, 0.7)

    def test_bottom_plane(self):
        pv = runner.NAMED_LINES["bottom_plane"](0.5)
        assert pv.p_plaq == 0.0
        assert pv.px == pv.py == pytest.approx(0.25)
        assert pv.pz == 0.5


# -- runs ------------------------------------------------------------------------


class TestRun:
    def test_arc_rows_and_endpoints(self, tmp_path):
        out = str(tmp_path / "arc.csv")
        cfg = runner.ExperimentConfig(kind="arc", sizes=(4,), n_samples=3,
                                      seed=11, points=((0.25,) * 4,),
                                      sweeps=10, out=out)
        res = runner.run(cfg)
        assert res["rows"] == 5
        t = runner.read_table(out)
        assert t["mean"][t["index"] == 0] == 0
        assert t["mean"][t["index"] == 4] == 0
        assert np.all(t["n_samples"] == 3)
        assert np.all(t["observable"] == "arc")

    def test_header_and_float_format(self, tmp_path):
        out = str(tmp_path / "arc.csv")
        cfg = runner.ExperimentConfig(kind="arc", sizes=(4,), n_samples=2,
                                      seed=1, points=((1 / 3, 1 / 3, 1 / 6,
                                                       1 / 6),),
                                      sweeps=4, out=out)
        runner.run(cfg)
        lines = open(out).read().splitlines()
        assert lines[0] == "L,p,px,py,pz,observable,index,mean,stderr,n_samples"
        # 17 significant digits round-trip exactly
        p_field = lines[1].split(",")[1]
        assert float(p_field) == 1 / 3

    def test_rerun_is_byte_identical(self, tmp_path):
        a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        base = dict(kind="tmi_scan", sizes=(4,), n_samples=3, seed=3,
                    line="isotropic", p_values=(0.2, 0.8), sweeps=6)
        runner.run(runner.ExperimentConfig(**base, out=a))
        runner.run(runner.ExperimentConfig(**base, out=b))
        assert filecmp.cmp(a, b, shallow=False)

    def test_worker_count_independence(self, tmp_path):
        a, b = str(tmp_path / "w1.csv"), str(tmp_path / "w3.csv")
        base = dict(kind="arc", sizes=(4,), n_samples=5, seed=4,
                    points=((0.5, 0.5 / 3, 0.5 / 3, 0.5 / 3),), sweeps=6)
        runner.run(runner.ExperimentConfig(**base, workers=1, out=a))
        runner.run(runner.ExperimentConfig(**base, workers=3, out=b))
        assert filecmp.cmp(a, b, shallow=False)

    def test_aggregation_matches_trajectories(self, tmp_path):
        out = str(tmp_path / "arc.csv")
        cfg = runner.ExperimentConfig(kind="arc", sizes=(4,), n_samples=3,
                                      seed=11, points=((0.25,) * 4,),
                                      sweeps=10, out=out)
        runner.run(cfg)
        t = runner.read_table(out)
        pv = ProbabilityVector(0.25, 0.25, 0.25, 0.25)
        block = np.stack([runner.trajectory_values(
            "arc", 4, pv, 11, 0, s, 10, "direct") for s in range(3)])
        assert np.allclose(t["mean"], block.mean(axis=0), atol=0)
        want_err = block.std(axis=0, ddof=1) / math.sqrt(3)
        assert np.allclose(t["stderr"], want_err, atol=0)

    def test_purify_starts_at_known_entropy(self, tmp_path):
        out = str(tmp_path / "pur.csv")
        L = 4
        cfg = runner.ExperimentConfig(kind="purify", sizes=(L,), n_samples=2,
                                      seed=7, points=((0.25,) * 4,),
                                      sweeps=5, out=out)
        runner.run(cfg)
        t = runner.read_table(out)
        assert t["index"].tolist() == list(range(6))
        assert t["mean"][0] == L * L + 1      # exact for every sample
        assert t["stderr"][0] == 0.0
        assert np.all(np.diff(t["mean"]) <= 0)  # purification is monotone

    def test_scan_rows_use_point_ordinal(self, tmp_path):
        out = str(tmp_path / "scan.csv")
        cfg = runner.ExperimentConfig(kind="tee_scan", sizes=(4,),
                                      n_samples=2, seed=5, line="edge_z",
                                      p_values=(0.1, 0.5, 0.9), sweeps=4,
                                      out=out)
        runner.run(cfg)
        t = runner.read_table(out)
        assert t["index"].tolist() == [0, 1, 2]
        assert t["p"].tolist() == [0.1, 0.5, 0.9]
        assert np.all(t["px"] == 0) and np.all(t["py"] == 0)
        assert np.allclose(t["pz"], 1 - t["p"])

    def test_default_out_honors_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv(runner.OUTDIR_ENV, str(tmp_path))
        cfg = runner.ExperimentConfig(kind="phase_cut", sizes=(4,),
                                      n_samples=1, seed=1,
                                      points=((0.25,) * 4,), sweeps=3)
        res = runner.run(cfg)
        assert res["csv"] == str(tmp_path / "phase_cut.csv")
        assert os.path.exists(res["csv"])

    def test_sidecar_metadata(self, tmp_path):
        out = str(tmp_path / "arc.csv")
        cfg = runner.ExperimentConfig(kind="arc", sizes=(4,), n_samples=2,
                                      seed=1, points=((0.25,) * 4,),
                                      sweeps=4, out=out)
        res = runner.run(cfg)
        meta = json.load(open(res["meta"]))
        assert runner.ExperimentConfig.from_dict(meta["config"]) == cfg
        assert meta["rows"] == res["rows"]
        assert meta["observable"] == "arc"
        assert "wall_seconds" in meta and "version" in meta


class TestAncillaMode:
    def test_arc_matches_direct_mode(self, tmp_path):
        a, b = str(tmp_path / "d.csv"), str(tmp_path / "a.csv")
        base = dict(kind="arc", sizes=(2,), n_samples=2, seed=9,
                    points=((0.25,) * 4,), sweeps=4)
        runner.run(runner.ExperimentConfig(**base, mode="direct", out=a))
        runner.run(runner.ExperimentConfig(**base, mode="ancilla", out=b))
        assert filecmp.cmp(a, b, shallow=False)

    def test_purify_matches_direct_mode(self, tmp_path):
        a, b = str(tmp_path / "d.csv"), str(tmp_path / "a.csv")
        base = dict(kind="purify", sizes=(2,), n_samples=2, seed=13,
                    points=((0.5, 0.5, 0.0, 0.0),), sweeps=4)
        runner.run(runner.ExperimentConfig(**base, mode="direct", out=a))
        runner.run(runner.ExperimentConfig(**base, mode="ancilla", out=b))
        assert filecmp.cmp(a, b, shallow=False)


# -- table parsing ---------------------------------------------------------------


class TestReadTable:
    def write(self, tmp_path, text):
        path = tmp_path / "t.csv"
        path.write_text(text)
        return str(path)

    def test_missing_column_named(self, tmp_path):
        path = self.write(tmp_path,
                          "L,p,px,py,pz,observable,index,mean,stderr\n")
        with pytest.raises(ValueError, match="missing column 'n_samples'"):
            runner.read_table(path)

    def test_unexpected_column_named(self, tmp_path):
        path = self.write(
            tmp_path,
            "L,p,px,py,pz,observable,index,mean,stderr,n_samples,bogus\n")
        with pytest.raises(ValueError, match="unexpected column 'bogus'"):
            runner.read_table(path)

    def test_ragged_row_rejected(self, tmp_path):
        path = self.write(
            tmp_path,
            "L,p,px,py,pz,observable,index,mean,stderr,n_samples\n1,2,3\n")
        with pytest.raises(ValueError, match="row 2"):
            runner.read_table(path)


# -- fit dispatch over stored tables ----------------------------------------------


def write_arc_csv(path, sizes, gen, stderr=0.01, n=100, point=(0.25,) * 4):
    rows = ["L,p,px,py,pz,observable,index,mean,stderr,n_samples"]
    for L in sizes:
        for l, y in gen(L):
            rows.append(f"{L},{fmt(point[0])},{fmt(point[1])},"
                        f"{fmt(point[2])},{fmt(point[3])},arc,{l},"
                        f"{fmt(y)},{fmt(stderr)},{n}")
    path.write_text("\n".join(rows) + "\n")
    return str(path)


class TestFitDispatch:
    TRUE = dict(v=0.0095 * LN2, c=0.642 * LN2, c1=0.1, a=0.3, gamma=0.5)

    def arc_gen(self, noise_rng=None):
        def gen(L):
            l = np.arange(0, L + 1)
            safe = np.clip(l, 1, L - 1)
            g = np.log((L / np.pi) * np.sin(np.pi * safe / L))
            y = (self.TRUE["v"] * analysis.vol_term(l, L)
                 + self.TRUE["c"] * L * g / 3 + self.TRUE["c1"] * g / 3
                 + self.TRUE["a"] * L - self.TRUE["gamma"])
            if noise_rng is not None:
                y = y + noise_rng.normal(0, 0.01, len(y))
            return zip(l.tolist(), y.tolist())
        return gen

    def test_page_fit_from_csv(self, tmp_path):
        rng = np.random.default_rng(1)
        path = write_arc_csv(tmp_path / "arcs.csv", (16, 24, 32),
                             self.arc_gen(rng))
        out = runner.fit_arcs_page(path)
        assert out["kind"] == "page_ansatz"
        assert out["sizes"] == [16, 24, 32]
        for name, tv in self.TRUE.items():
            got = out["coefficients"][name]
            assert abs(got["value"] - tv) < 3 * got["stderr"]
            assert got["value_over_ln2"] == pytest.approx(
                got["value"] / LN2, rel=1e-12)
        assert len(out["input_sha256"]) == 64

    def test_page_fit_size_filter(self, tmp_path):
        path = write_arc_csv(tmp_path / "arcs.csv", (16, 24, 32),
                             self.arc_gen())
        out = runner.fit_arcs_page(path, sizes=(16, 24))
        assert out["sizes"] == [16, 24]
        with pytest.raises(ValueError, match="no 'arc' rows"):
            runner.fit_arcs_page(path, sizes=(64,))

    def test_collapse_fit_from_csv(self, tmp_path):
        c_true = 0.827

        def gen(L):
            l = np.arange(0, L + 1)
            safe = np.clip(l, 1, L - 1)
            y = 0.4 * L + (c_true / 3) * L * np.log(np.sin(np.pi * safe / L))
            return zip(l.tolist(), y.tolist())

        path = write_arc_csv(tmp_path / "arc24.csv", (24,), gen)
        out = runner.fit_arc_collapse(path)
        assert out["L"] == 24
        assert out["coefficients"]["c"]["value"] == pytest.approx(c_true,
                                                                  rel=1e-10)

    def test_collapse_ambiguous_sizes_need_explicit_choice(self, tmp_path):
        path = write_arc_csv(tmp_path / "arcs.csv", (16, 24), self.arc_gen())
        with pytest.raises(ValueError, match="pick one"):
            runner.fit_arc_collapse(path)
        out = runner.fit_arc_collapse(path, L=24)
        assert out["L"] == 24

    def test_lifshitz_fit_from_csv(self, tmp_path):
        beta, lam, L0 = 3.67 * LN2, 3.8, 24

        def gen(L):
            l = np.arange(1, L)
            y = beta * analysis.lifshitz_J(l / L, lam) + 0.5 * L
            return zip(l.tolist(), y.tolist())

        path = write_arc_csv(tmp_path / "arc24.csv", (L0,), gen)
        out = runner.fit_arc_lifshitz(path)
        assert out["lam"] == pytest.approx(lam, rel=1e-4)
        assert out["beta"] == pytest.approx(beta, rel=1e-4)
        assert out["lam_over_ln2"] == pytest.approx(out["lam"] / LN2)
        # on true Lifshitz data the log-sine alternative must fit worse
        assert out["chi2"] < out["lnsine_chi2"]
        grid = out["j_grid"]
        assert len(grid["x"]) == runner.J_GRID_POINTS
        assert len(grid["j"]) == runner.J_GRID_POINTS
        j_again = analysis.lifshitz_J(np.array(grid["x"]), grid["lam"])
        assert np.allclose(grid["j"], j_again, rtol=0, atol=1e-12)

    def test_crossing_fit_from_csv(self, tmp_path):
        p = np.round(np.arange(0.60, 0.7601, 0.02), 10)
        rows = ["L,p,px,py,pz,observable,index,mean,stderr,n_samples"]
        for L in (12, 16, 20):
            y = 1.0 - 4.0 / (1.0 + np.exp(-(p - 0.683) * L))
            for i, (pi, yi) in enumerate(zip(p, y)):
                b = (1 - pi) / 3
                rows.append(f"{L},{fmt(pi)},{fmt(b)},{fmt(b)},{fmt(b)},"
                            f"tmi,{i},{fmt(yi)},{fmt(0.004)},1000")
        path = tmp_path / "tmi.csv"
        path.write_text("\n".join(rows) + "\n")
        out = runner.fit_tmi_crossing(str(path))
        assert out["p_c"] == pytest.approx(0.683, abs=2e-3)
        assert out["nu_inv"] == pytest.approx(1.0, abs=0.05)
        assert out["sizes"] == [12, 16, 20]
        assert len(out["pair_crossings"]) == 3

    def test_fit_requires_matching_rows(self, tmp_path):
        path = write_arc_csv(tmp_path / "arcs.csv", (16,), self.arc_gen())
        with pytest.raises(ValueError, match="no rows with observable 'tmi'"):
            runner.fit_tmi_crossing(path)


# -- selfcheck -------------------------------------------------------------------


class TestSelfcheck:
    def test_all_pass(self):
        results = runner.selfcheck()
        assert len(results) == 5
        for r in results:
            assert r.passed, (r.name, r.detail)
