"""Ensemble orchestration: disorder sampling, aggregation, deterministic
delimited output, fit dispatch over stored tables, and the embedded
self-check suite.

Output contract: one CSV per experiment with header
``L,p,px,py,pz,observable,index,mean,stderr,n_samples`` (floats printed
with 17 significant digits, so reruns of the same configuration are
byte-identical), plus a JSON metadata sidecar. ``index`` is the cut
position for arcs, the sweep number for purification, and the scan
ordinal for parameter scans.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import os
import time
from dataclasses import dataclass

import numpy as np

from . import analysis
from .circuit import (AncillaLayout, OpTables, ProbabilityVector,
                      measure_via_ancilla, prepare_flux_free_mixed,
                      prepare_flux_free_pure, run_sweeps, trajectory_rngs)
from .lattice import Lattice, build as build_lattice
from .observables import entropy_arc, purification_trajectory, tee, tmi
from .tableau import StabilizerState

OUTDIR_ENV = "MONIKIT_OUTDIR"

KINDS = ("arc", "tmi_scan", "tee_scan", "purify", "phase_cut")
MODES = ("direct", "ancilla")
CSV_COLUMNS = ("L", "p", "px", "py", "pz", "observable", "index",
               "mean", "stderr", "n_samples")
OBSERVABLE_OF_KIND = {"arc": "arc", "tmi_scan": "tmi", "tee_scan": "tee",
                      "purify": "purify", "phase_cut": "half_entropy"}


# -- probability lines -----------------------------------------------------------


def _line_isotropic(t: float) -> ProbabilityVector:
    """Plaquette strength t, remaining weight split equally over bonds."""
    return ProbabilityVector.isotropic(t)


def _line_edge_z(t: float) -> ProbabilityVector:
    """Plaquette strength t against z-bonds only (p_x = p_y = 0)."""
    return ProbabilityVector.plaq_z(t)


def _line_bottom_plane(t: float) -> ProbabilityVector:
    """Bond-only states: z-bond strength t, x and y sharing the rest."""
    return ProbabilityVector(0.0, (1.0 - t) / 2.0, (1.0 - t) / 2.0, t)


NAMED_LINES = {"isotropic": _line_isotropic, "edge_z": _line_edge_z,
               "bottom_plane": _line_bottom_plane}


# -- configuration ---------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    sizes: tuple
    n_samples: int
    seed: int
    line: str | None = None
    p_values: tuple = ()
    points: tuple = ()          # explicit (p, px, py, pz) rows
    sweeps: int | None = None
    mode: str = "direct"
    workers: int = 1
    out: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not self.sizes:
            raise ValueError("need at least one system size")
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        object.__setattr__(self, "sizes", tuple(int(L) for L in self.sizes))
        object.__setattr__(self, "p_values",
                           tuple(float(v) for v in self.p_values))
        object.__setattr__(self, "points",
                           tuple(tuple(float(x) for x in row)
                                 for row in self.points))
        has_line = self.line is not None
        if has_line == bool(self.points):
            raise ValueError("give either a named line with p_values "
                             "or explicit points, not both")
        if has_line:
            if self.line not in NAMED_LINES:
                raise ValueError(f"unknown line {self.line!r}; "
                                 f"choose from {sorted(NAMED_LINES)}")
            if not self.p_values:
                raise ValueError("a named line needs p_values")
        self.resolved_points()  # validate probabilities eagerly

    def resolved_points(self) -> list[ProbabilityVector]:
        if self.line is not None:
            f = NAMED_LINES[self.line]
            return [f(t) for t in self.p_values]
        return [ProbabilityVector(*row) for row in self.points]

    def resolved_sweeps(self, L: int) -> int:
        return self.sweeps if self.sweeps is not None else max(50, 4 * L)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config fields: {sorted(extra)}")
        return cls(**d)


# -- single trajectories ---------------------------------------------------------


_TABLES_CACHE: dict[int, tuple[Lattice, OpTables]] = {}


def _lattice_tables(L: int) -> tuple[Lattice, OpTables]:
    if L not in _TABLES_CACHE:
        lat = build_lattice(L)
        _TABLES_CACHE[L] = (lat, OpTables.build(lat))
    return _TABLES_CACHE[L]


class _BitTape:
    """Sequential coin source over a pre-drawn bit array, mirroring how
    the sweep kernel consumes its packed outcome words."""

    def __init__(self, bits: np.ndarray):
        self.bits = bits
        self.pos = 0

    def integers(self, low, high, size=None):
        assert low == 0 and high == 2 and size is None
        b = int(self.bits[self.pos])
        self.pos += 1
        return b


def _ancilla_plan(lat: Lattice, layout: AncillaLayout):
    """Lifted operators and their ancilla indices, indexed like the
    sweep tables: type 0 = plaquette interaction, 1/2/3 = x/y/z bonds."""
    L = lat.L
    lifted, ancs = [], []
    for ty, kind in enumerate((None, "x", "y", "z")):
        ops_t, anc_t = [], []
        for i in range(L):
            for j in range(L):
                if ty == 0:
                    ops_t.append(layout.lift(lat.plaquette_V(i, j)))
                    anc_t.append(layout.plaquette_ancilla(i, j))
                else:
                    ops_t.append(layout.lift(lat.bond_check(kind, i, j)))
                    anc_t.append(layout.bond_ancilla(kind, i, j))
        lifted.append(ops_t)
        ancs.append(anc_t)
    return lifted, ancs


def _prepare_ancilla(lat: Lattice, layout: AncillaLayout, rng_outcomes,
                     mixed: bool) -> StabilizerState:
    """Flux projection performed through the plaquette ancillas."""
    if mixed:
        state = StabilizerState(layout.n_total, mode="full")
        from .pauli import PauliOperator
        for a in range(layout.n_physical, layout.n_total):
            za = PauliOperator.from_support(layout.n_total, [a], "Z")
            state.measure(za, forced=1)
    else:
        state = StabilizerState.computational_basis_state(layout.n_total,
                                                          mode="full")
    for i in range(lat.L):
        for j in range(lat.L):
            measure_via_ancilla(state, layout.lift(lat.plaquette_W(i, j)),
                                layout.plaquette_ancilla(i, j),
                                rng=rng_outcomes)
    return state


def _run_sweeps_ancilla(state: StabilizerState, lat: Lattice,
                        lifted, ancs, probs: ProbabilityVector,
                        rng_choices, rng_outcomes, n_sweeps: int) -> list[int]:
    """Ancilla-mediated twin of run_sweeps: identical type/location
    draws, identical outcome-bit consumption, every operator read out
    through its ancilla. Returns total entropy after each sweep."""
    L2 = lat.L * lat.L
    thr = probs.thresholds()
    tape = _BitTape(rng_outcomes.integers(0, 2, size=n_sweeps * L2,
                                          dtype=np.uint8))
    entropy = []
    for _ in range(n_sweeps):
        types = rng_choices.random(L2)
        locs = rng_choices.integers(0, L2, size=L2)
        for m in range(L2):
            ty = int(np.searchsorted(thr, types[m], side="right"))
            loc = int(locs[m])
            measure_via_ancilla(state, lifted[ty][loc], ancs[ty][loc],
                                rng=tape)
        entropy.append(state.entropy_bits())
    return entropy


def trajectory_values(kind: str, L: int, probs: ProbabilityVector, seed: int,
                      point_index: int, sample_index: int,
                      sweeps: int | None, mode: str) -> np.ndarray:
    """One disorder realization; returns the observable vector
    (length L+1 for arcs, n_sweeps+1 for purification, else 1)."""
    lat, tables = _lattice_tables(L)
    rng_c, rng_o = trajectory_rngs(seed, point_index, sample_index)
    n_sweeps = sweeps if sweeps is not None else max(50, 4 * L)

    if mode == "ancilla":
        layout = AncillaLayout(L)
        lifted, ancs = _ancilla_plan(lat, layout)
        state = _prepare_ancilla(lat, layout, rng_o, mixed=(kind == "purify"))
        trace = [state.entropy_bits()]
        trace += _run_sweeps_ancilla(state, lat, lifted, ancs, probs,
                                     rng_c, rng_o, n_sweeps)
    elif kind == "purify":
        state = prepare_flux_free_mixed(lat, rng_o, mode="fast")
        trace = [state.entropy_bits()]
        curve = purification_trajectory(state, tables, probs, rng_c, rng_o,
                                        n_sweeps)
        trace += curve.bits
    else:
        state = prepare_flux_free_pure(lat, rng_o, mode="fast")
        run_sweeps(state, tables, probs, rng_c, rng_o, n_sweeps,
                   half_region=None, log_stride=0)

    if kind == "purify":
        return np.asarray(trace, float)
    if kind == "arc":
        return np.asarray(entropy_arc(state, lat).bits, float)
    if kind == "tmi_scan":
        return np.array([tmi(state, lat).i3], float)
    if kind == "tee_scan":
        return np.array([tee(state, lat).gamma], float)
    if kind == "phase_cut":
        region = lat.cylinder_region(L // 2)
        return np.array([state.subsystem_entropy_bits(region)], float)
    raise ValueError(f"unknown kind {kind!r}")


def _task(args):
    kind, L, probs4, seed, pidx, sidx, sweeps, mode = args
    return trajectory_values(kind, L, ProbabilityVector(*probs4), seed,
                             pidx, sidx, sweeps, mode)


# -- ensemble run ----------------------------------------------------------------


def _format_float(x: float) -> str:
    return format(float(x), ".17g")


def default_out_path(kind: str) -> str:
    return os.path.join(os.environ.get(OUTDIR_ENV, "."), f"{kind}.csv")


def run(config: ExperimentConfig) -> dict:
    """Execute the experiment; write CSV + JSON sidecar; return paths
    and row count. Deterministic for a fixed config, independent of
    worker count (samples are aggregated in sample-index order)."""
    t0 = time.time()
    points = config.resolved_points()
    rows4 = [(pt.p_plaq, pt.px, pt.py, pt.pz) for pt in points]

    tasks = []
    combos = []           # (L, point ordinal) in output order
    gpidx = 0
    for L in config.sizes:
        for j, row4 in enumerate(rows4):
            combos.append((L, j))
            for s in range(config.n_samples):
                tasks.append((config.kind, L, row4, config.seed, gpidx, s,
                              config.sweeps, config.mode))
            gpidx += 1

    if config.workers == 1:
        values = [_task(t) for t in tasks]
    else:
        import multiprocessing as mp
        slices = [tasks[w::config.workers] for w in range(config.workers)]
        ctx = mp.get_context("fork")
        with ctx.Pool(config.workers) as pool:
            parts = pool.map(_slice_task, slices)
        values = [None] * len(tasks)
        for w, part in enumerate(parts):
            for local, val in enumerate(part):
                values[w + local * config.workers] = val

    observable = OBSERVABLE_OF_KIND[config.kind]
    lines = [",".join(CSV_COLUMNS)]
    n = config.n_samples
    for ci, (L, j) in enumerate(combos):
        block = np.stack(values[ci * n:(ci + 1) * n])   # samples x indices
        mean = block.mean(axis=0)
        sd = block.std(axis=0, ddof=1) if n > 1 else np.zeros(block.shape[1])
        stderr = sd / math.sqrt(n)
        p, px, py, pz = rows4[j]
        for idx in range(block.shape[1]):
            row_index = idx if config.kind in ("arc", "purify") else j
            lines.append(",".join([
                str(L), _format_float(p), _format_float(px),
                _format_float(py), _format_float(pz), observable,
                str(row_index), _format_float(mean[idx]),
                _format_float(stderr[idx]), str(n)]))

    out = config.out or default_out_path(config.kind)
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    with open(out, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")

    from . import __version__
    sidecar = os.path.splitext(out)[0] + ".meta.json"
    with open(sidecar, "w") as fh:
        json.dump({"config": config.to_dict(), "version": __version__,
                   "observable": observable, "rows": len(lines) - 1,
                   "wall_seconds": round(time.time() - t0, 3)}, fh, indent=2)
        fh.write("\n")
    return {"csv": out, "meta": sidecar, "rows": len(lines) - 1}


def _slice_task(task_list):
    return [_task(t) for t in task_list]


# -- stored-table access ---------------------------------------------------------


def read_table(path: str) -> dict:
    """Parse an experiment CSV into columns; strict about the schema."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        missing = [c for c in CSV_COLUMNS if c not in header]
        if missing:
            raise ValueError(f"schema error: missing column '{missing[0]}' "
                             f"in {path}")
        extra = [c for c in header if c not in CSV_COLUMNS]
        if extra:
            raise ValueError(f"schema error: unexpected column '{extra[0]}' "
                             f"in {path}")
        pos = {c: header.index(c) for c in CSV_COLUMNS}
        cols = {c: [] for c in CSV_COLUMNS}
        for ln, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split(",")
            if len(parts) != len(header):
                raise ValueError(f"schema error: row {ln} has {len(parts)} "
                                 f"fields, expected {len(header)}")
            for c in CSV_COLUMNS:
                cols[c].append(parts[pos[c]])
    out = {
        "L": np.array(cols["L"], int),
        "p": np.array(cols["p"], float),
        "px": np.array(cols["px"], float),
        "py": np.array(cols["py"], float),
        "pz": np.array(cols["pz"], float),
        "observable": np.array(cols["observable"]),
        "index": np.array(cols["index"], int),
        "mean": np.array(cols["mean"], float),
        "stderr": np.array(cols["stderr"], float),
        "n_samples": np.array(cols["n_samples"], int),
    }
    return out


def _file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _select(table: dict, observable: str, sizes=None) -> dict:
    keep = table["observable"] == observable
    if not keep.any():
        raise ValueError(f"no rows with observable '{observable}'")
    if sizes is not None:
        keep &= np.isin(table["L"], list(sizes))
        if not keep.any():
            raise ValueError(f"no '{observable}' rows at sizes {sizes}")
    return {k: v[keep] for k, v in table.items()}


def _fit_result_dict(fit: analysis.FitResult) -> dict:
    out = {"coefficients": {}, "chi2": fit.chi2, "dof": fit.dof,
           "window": "2 <= l <= L-2"}
    for name in fit.names:
        val, err = fit[name]
        out["coefficients"][name] = {
            "value": val, "stderr": err,
            "value_over_ln2": val / analysis.LN2,
            "stderr_over_ln2": err / analysis.LN2}
    return out


def fit_arcs_page(csv_path: str, sizes=None) -> dict:
    """Joint profile-ansatz fit over the arc rows of a stored table."""
    sub = _select(read_table(csv_path), "arc", sizes)
    fit = analysis.fit_page_ansatz(sub["index"], sub["L"], sub["mean"],
                                   sub["stderr"])
    out = _fit_result_dict(fit)
    out.update(kind="page_ansatz", sizes=sorted(set(sub["L"].tolist())),
               input=csv_path, input_sha256=_file_digest(csv_path))
    return out


def _single_size(sub: dict, L: int | None) -> tuple[dict, int]:
    sizes = sorted(set(sub["L"].tolist()))
    if L is None:
        if len(sizes) != 1:
            raise ValueError(f"table holds sizes {sizes}; pick one with L=")
        L = sizes[0]
    keep = sub["L"] == L
    return {k: v[keep] for k, v in sub.items()}, int(L)


def fit_arc_collapse(csv_path: str, L: int | None = None) -> dict:
    """Midpoint-subtracted log-sine collapse of one arc."""
    sub, L = _single_size(_select(read_table(csv_path), "arc"), L)
    fit = analysis.fit_cft_collapse(sub["index"], sub["mean"], sub["stderr"],
                                    L)
    out = _fit_result_dict(fit)
    out.update(kind="collapse", L=L, input=csv_path,
               input_sha256=_file_digest(csv_path))
    return out


def _lnsine_competitor(l, y, e, L):
    """Two-parameter log-sine alternative fitted on the same window,
    for model comparison against the Lifshitz profile."""
    l = np.asarray(l, float)
    keep = analysis.profile_window(l, np.full(len(l), L))
    g = np.log((L / np.pi) * np.sin(np.pi * l[keep] / L))
    design = np.column_stack([L * g / 3.0, np.ones(int(keep.sum()))])
    sigma = np.maximum(np.asarray(e, float)[keep], 1e-3)
    aw = design / sigma[:, None]
    yw = np.asarray(y, float)[keep] / sigma
    coef, *_ = np.linalg.lstsq(aw, yw, rcond=None)
    r = yw - aw @ coef
    return float(r @ r), float(coef[0]), float(coef[1])


J_GRID_POINTS = 100


def fit_arc_lifshitz(csv_path: str, L: int | None = None) -> dict:
    """Lifshitz-profile fit of one arc, with a log-sine competitor fitted
    on the same window and a 100-point J(x) reference grid for
    downstream consumers."""
    sub, L = _single_size(_select(read_table(csv_path), "arc"), L)
    l, y, e = sub["index"], sub["mean"], sub["stderr"]
    fit = analysis.fit_lifshitz(l, y, e, L)
    ln_chi2, ln_c, ln_off = _lnsine_competitor(l, y, e, L)
    x_grid = np.linspace(0.01, 0.99, J_GRID_POINTS)
    return {
        "kind": "lifshitz", "L": L,
        "lam": fit.lam, "lam_over_ln2": fit.lam / analysis.LN2,
        "beta": fit.beta, "beta_over_ln2": fit.beta / analysis.LN2,
        "offset": fit.offset, "chi2": fit.chi2, "dof": fit.dof,
        "flat_objective": fit.flat,
        "lnsine_chi2": ln_chi2, "lnsine_c": ln_c, "lnsine_offset": ln_off,
        "window": "2 <= l <= L-2",
        "j_grid": {"lam": fit.lam, "x": x_grid.tolist(),
                   "j": [float(v) for v in analysis.lifshitz_J(x_grid,
                                                               fit.lam)]},
        "input": csv_path, "input_sha256": _file_digest(csv_path),
    }


def fit_tmi_crossing(csv_path: str) -> dict:
    """Finite-size crossing of the mutual-information scan rows."""
    sub = _select(read_table(csv_path), "tmi")
    curves = {}
    for L in sorted(set(sub["L"].tolist())):
        keep = sub["L"] == L
        curves[int(L)] = (sub["p"][keep], sub["mean"][keep],
                          sub["stderr"][keep])
    res = analysis.tmi_crossing(curves)
    return {
        "kind": "crossing",
        "p_c": res.p_c, "p_c_err": res.p_c_err, "nu_inv": res.nu_inv,
        "pair_crossings": [{"L1": a, "L2": b, "p": c, "err": d}
                           for a, b, c, d in res.pair_crossings],
        "nu_grid": res.nu_grid.tolist(),
        "nu_cost": res.nu_cost.tolist(),
        "sizes": sorted(curves), "input": csv_path,
        "input_sha256": _file_digest(csv_path),
    }


FITTERS = {"page": fit_arcs_page, "collapse": fit_arc_collapse,
           "lifshitz": fit_arc_lifshitz, "crossing": fit_tmi_crossing}


# -- self-check ------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _check_dense_lockstep(n_sequences: int = 20, max_qubits: int = 6,
                          steps: int = 12) -> CheckResult:
    from .dense import DenseState
    from .pauli import PauliOperator
    rng = np.random.default_rng(20260815)
    letters = "IXYZ"
    for s in range(n_sequences):
        n = int(rng.integers(2, max_qubits + 1))
        st = StabilizerState.computational_basis_state(n, mode="full")
        dn = DenseState(n)
        for _ in range(steps):
            word = "".join(letters[int(c)] for c in rng.integers(0, 4, n))
            if word.strip("I") == "":
                word = "X" + word[1:]
            qs = [i for i, ch in enumerate(word) if ch != "I"]
            ls = "".join(ch for ch in word if ch != "I")
            op = PauliOperator.from_support(n, qs, ls,
                                            sign=int(rng.choice((1, -1))))
            out, _ = st.measure(op, rng=rng)
            dout, _ = dn.measure(op, forced=out)
            if dout != out:
                return CheckResult("dense lockstep", False,
                                   f"outcome mismatch at sequence {s}")
            cut = int(rng.integers(1, n))
            if st.subsystem_entropy_bits(range(cut)) != round(
                    dn.subsystem_entropy_bits(range(cut))):
                return CheckResult("dense lockstep", False,
                                   f"entropy mismatch at sequence {s}")
    return CheckResult("dense lockstep", True,
                       f"{n_sequences} random sequences on <= "
                       f"{max_qubits} qubits")


def _check_modular_identities(tol: float = 1e-10) -> CheckResult:
    ts = np.logspace(math.log10(0.05), math.log10(20.0), 40)
    worst = 0.0
    for t in ts:
        worst = max(worst,
                    abs(analysis.theta3(1 / t)
                        / (math.sqrt(t) * analysis.theta3(t)) - 1),
                    abs(analysis.eta(1 / t)
                        / (math.sqrt(t) * analysis.eta(t)) - 1))
    return CheckResult("theta/eta modular identities", worst < tol,
                       f"worst relative deviation {worst:.2e}")


def _check_operator_algebra(L: int = 6) -> CheckResult:
    from .pauli import anticommutes
    lat = build_lattice(L)
    ws = lat.all_plaquette_W()
    vs = lat.all_plaquette_V()
    bonds = [op for k in "xyz" for op in lat.all_bond_checks(k)]
    for w in ws:
        for other in bonds + vs + ws:
            if anticommutes(w, other):
                return CheckResult("operator algebra", False,
                                   "flux operator fails to commute")
    for v in vs:
        frustrated = sum(anticommutes(v, b) for b in bonds)
        if frustrated != 6:
            return CheckResult("operator algebra", False,
                               f"interaction frustrates {frustrated} bonds, "
                               f"expected 6")
    return CheckResult("operator algebra", True,
                       f"L={L}: fluxes central, interactions frustrate "
                       f"exactly 6 bonds each")


def _check_frustration_graph(L: int = 6) -> CheckResult:
    lat = build_lattice(L)
    bonds = [op for k in "xyz" for op in lat.all_bond_checks(k)]
    edges = lat.frustration_graph(bonds)
    deg = np.zeros(len(bonds), int)
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    if not np.all(deg == 4):
        return CheckResult("frustration graph", False,
                           f"bond graph degrees {sorted(set(deg.tolist()))}, "
                           f"expected all 4")
    return CheckResult("frustration graph", True,
                       f"L={L}: bond-check graph is 4-regular")


def _check_stabilizer_ranks(L: int = 6) -> CheckResult:
    from .pauli import BitMatrix, rank
    lat = build_lattice(L)

    def op_matrix(ops):
        rows = np.stack([np.concatenate([op.x, op.z]) for op in ops])
        return BitMatrix(len(ops), 64 * rows.shape[1],
                         np.ascontiguousarray(rows))

    ws = lat.all_plaquette_W()
    r_w = rank(op_matrix(ws))
    both = ws + lat.all_plaquette_V()
    r_wv = rank(op_matrix(both))
    want_wv = 2 * L * L - 4 if L % 3 == 0 else 2 * L * L - 2
    ok = (r_w == L * L - 1) and (r_wv == want_wv)
    return CheckResult("stabilizer ranks", ok,
                       f"L={L}: rank(fluxes)={r_w} (want {L * L - 1}), "
                       f"rank(fluxes+interactions)={r_wv} (want {want_wv})")


def selfcheck() -> list[CheckResult]:
    """Embedded oracle suite; all checks must pass on a healthy build."""
    return [
        _check_dense_lockstep(),
        _check_modular_identities(),
        _check_operator_algebra(),
        _check_frustration_graph(),
        _check_stabilizer_ranks(),
    ]
