#!/usr/bin/env python3
"""Generate the measurement tables consumed by tests/test_acceptance.py.

Every step invokes the installed command-line interface with pinned seeds, so
the shipped tables under tests/data/acceptance/ regenerate deterministically.
Steps skip themselves when their outputs already exist; delete the outputs
(and, for chunked steps, the cache under .pilot/chunks/) to force a rerun.

Budget on one core: the default phase ("--phase 1") takes about two hours;
the scan and volume-law steps ("--phase 2") add several more.  Run phases
back to back, or pick individual steps with --only.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import subprocess
import sys
import time

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA = os.path.join(ROOT, "tests", "data", "acceptance")
PILOT = os.path.join(ROOT, ".pilot")
CHUNKS = os.path.join(PILOT, "chunks")

# Sweep multipliers for the two expensive steps, relative to the per-size
# library default of max(50, 4L) measurement sweeps.  The volume-law arcs
# use doubled sweeps because the subleading coefficients there are sensitive
# to residual equilibration drift.  The scan multiplier comes from the
# eqladder step: at the scan's low-p points the default sweep count leaves
# the mutual information visibly short of its steady value (4.7 sigma at
# L=20, p=0.62), while the x2..x8 rungs agree with each other; x4 is the
# first rung on the plateau for both ladder sizes.  Sweeps add little cost
# here because the per-sample entropy evaluations dominate the runtime.
C5_SWEEPS_MULT = 4
C8_SWEEPS_MULT = 2


def log(msg: str) -> None:
    print(f"[{time.strftime('%H:%M:%S')}] {msg}", flush=True)


def cli(*args: str) -> None:
    cmd = [sys.executable, "-m", "monikit.cli", *args]
    log("+ " + " ".join(cmd))
    subprocess.run(cmd, check=True)


def default_sweeps(L: int) -> int:
    return max(50, 4 * L)


def concat_csv(paths: list, out: str) -> None:
    pieces = []
    for i, path in enumerate(paths):
        with open(path) as fh:
            lines = fh.readlines()
        pieces.extend(lines if i == 0 else lines[1:])
    with open(out, "w") as fh:
        fh.write("".join(pieces))
    log(f"concatenated {len(paths)} chunks -> {out}")


def _chunk_is_current(chunk: str, want_sweeps: int | None) -> bool:
    """A cached chunk counts only if its recorded sweep count matches."""
    if not os.path.exists(chunk):
        return False
    meta = os.path.splitext(chunk)[0] + ".meta.json"
    try:
        with open(meta) as fh:
            recorded = json.load(fh).get("config", {}).get("sweeps")
    except (OSError, ValueError):
        return False
    return recorded == want_sweeps


def run_chunked(kind: str, sizes: tuple, line: str, p_values: tuple,
                samples: int, seed: int, out: str,
                sweeps_mult: int | None = None) -> None:
    """One cached run per (size, p) pair, concatenated sorted by (size, p).

    Chunk seeds derive from the positions in the sizes/p_values tuples, so
    extend an existing grid by APPENDING new values: that keeps every cached
    chunk's seed (and therefore the shipped rows) reproducible.
    """
    os.makedirs(CHUNKS, exist_ok=True)
    base = os.path.splitext(os.path.basename(out))[0]
    chunks = []
    for si, L in enumerate(sizes):
        want = (sweeps_mult * default_sweeps(L)
                if sweeps_mult is not None and sweeps_mult != 1 else None)
        for pi, p in enumerate(p_values):
            chunk = os.path.join(CHUNKS, f"{base}.L{L}.p{p:.4f}.csv")
            chunks.append((L, p, chunk))
            if _chunk_is_current(chunk, want):
                continue
            args = ["run", "--kind", kind, "--sizes", str(L),
                    "--line", line, "--p-values", repr(float(p)),
                    "--samples", str(samples),
                    "--seed", str(seed + 100 * si + pi),
                    "--out", chunk]
            if want is not None:
                args += ["--sweeps", str(want)]
            cli(*args)
    concat_csv([path for *_, path in sorted(chunks)], out)


def _read_tmi_curve(path: str) -> dict:
    """p -> (mean, stderr) for the single-size tmi tables."""
    curve = {}
    with open(path) as fh:
        for row in csv.DictReader(fh):
            if row["observable"] == "tmi":
                curve[float(row["p"])] = (float(row["mean"]),
                                          float(row["stderr"]))
    return curve


# -- steps ------------------------------------------------------------------------


def step_eqpilot() -> None:
    """Probe how doubled sweeps move the 16/20 mutual-information crossing."""
    for L, seed in ((16, 60951), (20, 60952)):
        out = os.path.join(PILOT, f"c5pilot_L{L}.csv")
        if not os.path.exists(out):
            cli("run", "--kind", "tmi_scan", "--sizes", str(L),
                "--line", "isotropic", "--p-values", "0.66,0.70,0.74",
                "--samples", "250", "--sweeps", str(2 * default_sweeps(L)),
                "--seed", str(seed), "--out", out)
    c16 = _read_tmi_curve(os.path.join(PILOT, "c5pilot_L16.csv"))
    c20 = _read_tmi_curve(os.path.join(PILOT, "c5pilot_L20.csv"))
    ps = sorted(set(c16) & set(c20))
    diffs = [c16[p][0] - c20[p][0] for p in ps]
    for p, d in zip(ps, diffs):
        log(f"  eqpilot 2x sweeps: p={p:.2f}  I16={c16[p][0]:+.3f}"
            f"+-{c16[p][1]:.3f}  I16-I20={d:+.3f}")
    for a, b, da, db in zip(ps, ps[1:], diffs, diffs[1:]):
        if da > 0 >= db or da >= 0 > db:
            log(f"  eqpilot: 16/20 crossing near p = "
                f"{a + (b - a) * da / (da - db):.4f}")


def _recorded_sweeps(csv_path: str) -> int | None:
    meta = os.path.splitext(csv_path)[0] + ".meta.json"
    try:
        with open(meta) as fh:
            return json.load(fh).get("config", {}).get("sweeps")
    except (OSError, ValueError):
        return None


EQLADDER_POINTS = ((16, 0.62, 60971), (20, 0.62, 60981), (20, 0.58, 60991))


def step_eqladder() -> None:
    """Sweep-count convergence ladders at the scan points most at risk of
    equilibration bias (lowest p = deepest in the slowly-relaxing liquid
    phase; larger L relaxes slower) with full production statistics."""
    for L, p, base_seed in EQLADDER_POINTS:
        for k, mult in enumerate((2, 4, 8)):
            out = os.path.join(PILOT, f"eqladder_L{L}_p{p:.4f}_x{mult}.csv")
            if not os.path.exists(out):
                cli("run", "--kind", "tmi_scan", "--sizes", str(L),
                    "--line", "isotropic", "--p-values", repr(p),
                    "--samples", "1000",
                    "--sweeps", str(mult * default_sweeps(L)),
                    "--seed", str(base_seed + k), "--out", out)
    for L, p, _ in EQLADDER_POINTS:
        rungs = []
        prod = os.path.join(CHUNKS, f"c5_tmi.L{L}.p{p:.4f}.csv")
        if os.path.exists(prod):
            sweeps = _recorded_sweeps(prod) or default_sweeps(L)
            rungs.append((sweeps, *_read_tmi_curve(prod)[p]))
        for mult in (2, 4, 8):
            path = os.path.join(PILOT, f"eqladder_L{L}_p{p:.4f}_x{mult}.csv")
            rungs.append((mult * default_sweeps(L),
                          *_read_tmi_curve(path)[p]))
        rungs.sort()
        for sweeps, mean, err in rungs:
            log(f"  eqladder L={L} p={p}: sweeps {sweeps:4d}  "
                f"I3 = {mean:+.4f} +- {err:.4f}")
        (s0, v0, e0), (s1, v1, e1) = rungs[0], rungs[-1]
        sig = (e0 ** 2 + e1 ** 2) ** 0.5
        log(f"  eqladder L={L} p={p}: {s0} vs {s1} sweeps: "
            f"shift {v1 - v0:+.4f} = {abs(v1 - v0) / sig:.1f} sigma")


def step_c4() -> None:
    color = os.path.join(DATA, "c4_color.csv")
    if not os.path.exists(color):
        cli("run", "--kind", "tmi_scan", "--sizes", "12",
            "--line", "isotropic", "--p-values", "1.0",
            "--samples", "200", "--seed", "61041", "--out", color)
    liquid = os.path.join(DATA, "c4_liquid.csv")
    if not os.path.exists(liquid):
        cli("run", "--kind", "tmi_scan", "--sizes", "12,16,20",
            "--line", "isotropic", "--p-values", "0.0",
            "--samples", "1000", "--sweeps", "640",
            "--seed", "61042", "--out", liquid)


def step_c7() -> None:
    for name, line, p, seed in (("toric", "bottom_plane", "0.8", 61071),
                                ("color", "isotropic", "0.8", 61072),
                                ("free", "isotropic", "0.0", 61073)):
        out = os.path.join(DATA, f"c7_{name}.csv")
        if not os.path.exists(out):
            cli("run", "--kind", "purify", "--sizes", "12",
                "--line", line, "--p-values", p,
                "--samples", "1000", "--sweeps", "220",
                "--seed", str(seed), "--out", out)


def step_c9() -> None:
    arc = os.path.join(DATA, "c9_arc.csv")
    if not os.path.exists(arc):
        cli("run", "--kind", "arc", "--sizes", "24",
            "--line", "isotropic", "--p-values", "0.683",
            "--samples", "2000", "--seed", "61091", "--out", arc)
    fit = os.path.join(DATA, "c9_lifshitz_fit.json")
    if not os.path.exists(fit):
        cli("fit", "lifshitz", "--csv", arc, "--size", "24", "--out", fit)


def step_c6() -> None:
    for name, line, seed in (("color", "isotropic", 61061),
                             ("toric", "bottom_plane", 61062)):
        out = os.path.join(DATA, f"c6_{name}.csv")
        if not os.path.exists(out):
            cli("run", "--kind", "tee_scan", "--sizes", "24",
                "--line", line, "--p-values", "0.8",
                "--samples", "300", "--seed", str(seed), "--out", out)


def step_c3() -> None:
    arcs = os.path.join(DATA, "c3_arcs.csv")
    if not os.path.exists(arcs):
        run_chunked("arc", (16, 24), "edge_z", (0.5,),
                    2000, 61031, arcs)
    for L in (16, 24):
        fit = os.path.join(DATA, f"c3_collapse_L{L}.json")
        if not os.path.exists(fit):
            cli("fit", "collapse", "--csv", arcs, "--size", str(L),
                "--out", fit)


def step_c5() -> None:
    scan = os.path.join(DATA, "c5_tmi.csv")
    if not os.path.exists(scan):
        # 0.58 and 0.60 were appended once the first pass showed the
        # located crossing hugging the left window edge: appending (rather
        # than prepending) preserves the cached seeds of the original grid.
        grid = tuple(round(0.62 + 0.02 * k, 2) for k in range(8))
        grid += (0.58, 0.60)
        run_chunked("tmi_scan", (12, 16, 20), "isotropic", grid,
                    1000, 61051, scan, sweeps_mult=C5_SWEEPS_MULT)
    fit = os.path.join(DATA, "c5_crossing_fit.json")
    if not os.path.exists(fit):
        cli("fit", "crossing", "--csv", scan, "--out", fit)


def step_c8() -> None:
    arcs = os.path.join(DATA, "c8_arcs.csv")
    if not os.path.exists(arcs):
        run_chunked("arc", (18, 24, 30, 36), "isotropic", (0.25,),
                    220, 61081, arcs, sweeps_mult=C8_SWEEPS_MULT)
    fit = os.path.join(DATA, "c8_page_fit.json")
    if not os.path.exists(fit):
        cli("fit", "page", "--csv", arcs, "--sizes", "18,24,30,36",
            "--out", fit)


STEPS = {"eqpilot": step_eqpilot, "eqladder": step_eqladder,
         "c4": step_c4, "c7": step_c7,
         "c9": step_c9, "c6": step_c6, "c3": step_c3,
         "c5": step_c5, "c8": step_c8}
PHASE1 = ("eqpilot", "c4", "c7", "c9", "c6", "c3")
PHASE2 = ("c5", "eqladder", "c8")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--only", nargs="+", choices=sorted(STEPS),
                    help="run just these steps, in the given order")
    ap.add_argument("--phase", type=int, choices=(1, 2),
                    help="run one of the two standard phases")
    args = ap.parse_args(argv)
    if args.only:
        names = tuple(args.only)
    elif args.phase == 2:
        names = PHASE2
    elif args.phase == 1:
        names = PHASE1
    else:
        names = PHASE1 + PHASE2
    os.makedirs(DATA, exist_ok=True)
    os.makedirs(PILOT, exist_ok=True)
    t0 = time.time()
    for name in names:
        log(f"=== step {name} ===")
        STEPS[name]()
    log(f"done ({(time.time() - t0) / 60:.1f} min)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
