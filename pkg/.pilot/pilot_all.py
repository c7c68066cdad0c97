"""Calibration pilots for the heavy acceptance criteria (not shipped)."""
import math, time, sys
import numpy as np
sys.path.insert(0, "/root/pkg/src")
from monikit import analysis, runner
from monikit.circuit import ProbabilityVector

LN2 = math.log(2)
T0 = time.time()

def stamp(msg):
    print(f"[{time.time()-T0:7.1f}s] {msg}", flush=True)

def gather(kind, L, pv, N, sweeps=None, seed=77, pbase=0):
    block = np.stack([runner.trajectory_values(kind, L, pv, seed, pbase, s, sweeps, "direct")
                      for s in range(N)])
    return block

# ---------- 1. self-dual collapse (criterion: c within 5% of 0.8270) ----------
stamp("pilot 1: self-dual arcs")
for L, N in ((16, 300), (24, 150)):
    pv = ProbabilityVector.plaq_z(0.5)
    b = gather("arc", L, pv, N, pbase=1)
    mean, sd = b.mean(0), b.std(0, ddof=1)
    fit = analysis.fit_cft_collapse(np.arange(L+1), mean, sd/np.sqrt(N), L)
    c, ce = fit["c"]
    stamp(f"  L={L} N={N}: c={c:.4f}+-{ce:.4f} (target 0.8270, 5% band [0.786,0.868]) "
          f"midpoint sd={sd[L//2]:.3f}")

# ---------- 2. centroid volume law (criterion 8) ----------
stamp("pilot 2: centroid arcs")
blocks = {}
pv = ProbabilityVector.isotropic(0.25)
for L, N in ((18, 40), (24, 40), (30, 25), (36, 20)):
    blocks[L] = gather("arc", L, pv, N, pbase=2)
    stamp(f"  L={L} N={N} done; S(L/2) mean={blocks[L].mean(0)[L//2]:.3f} sd={blocks[L].std(0, ddof=1)[L//2]:.3f}")
ls, Ls, ys, es = [], [], [], []
for L, b in blocks.items():
    N = b.shape[0]
    ls.append(np.arange(L+1)); Ls.append(np.full(L+1, L))
    ys.append(b.mean(0)); es.append(b.std(0, ddof=1)/math.sqrt(N))
fit = analysis.fit_page_ansatz(np.concatenate(ls), np.concatenate(Ls),
                               np.concatenate(ys), np.concatenate(es))
for nm in ("v", "c", "c1", "a", "gamma"):
    val, err = fit[nm]
    stamp(f"  {nm} = {val:.6f} +- {err:.6f}  ({val/LN2:.5f} ln2, {abs(val/err) if err else 0:.1f} sigma)")
stamp(f"  chi2/dof = {fit.chi2:.1f}/{fit.dof}")

# ---------- 3. TMI endpoints + crossing window ----------
stamp("pilot 3: TMI")
b = gather("tmi_scan", 12, ProbabilityVector.isotropic(1.0), 20, pbase=3)
stamp(f"  p=1 L=12: I3 values {sorted(set(b.ravel().tolist()))} (want all exactly 3)")
for L, N in ((12, 150), (16, 100), (20, 60)):
    b = gather("tmi_scan", L, ProbabilityVector.isotropic(0.0), N, pbase=4)
    stamp(f"  p=0 L={L}: I3 = {b.mean():.3f} +- {b.std(ddof=1)/math.sqrt(len(b)):.3f} (sd {b.std(ddof=1):.3f})")
for p in (0.60, 0.68, 0.76):
    row = []
    for L, N in ((12, 100), (16, 60), (20, 40)):
        b = gather("tmi_scan", L, ProbabilityVector.isotropic(p), N, pbase=5)
        row.append(f"L{L}: {b.mean():+.3f}+-{b.std(ddof=1)/math.sqrt(len(b)):.3f}")
    stamp(f"  p={p}: " + "  ".join(row))

# ---------- 4. TEE plateaus ----------
stamp("pilot 4: TEE")
for name, pv in (("color p=0.8 iso", ProbabilityVector.isotropic(0.8)),
                 ("toric (0,.1,.1,.8)", ProbabilityVector(0.0, 0.1, 0.1, 0.8))):
    b = gather("tee_scan", 24, pv, 40, pbase=6)
    stamp(f"  {name} L=24: gamma = {b.mean():.3f} +- {b.std(ddof=1)/math.sqrt(len(b)):.3f} "
          f"values {sorted(set(b.ravel().tolist()))}")

# ---------- 5. purification ----------
stamp("pilot 5: purification L=12, 250 sweeps")
for name, pv, N in (("toric", ProbabilityVector(0.0, 0.1, 0.1, 0.8), 60),
                    ("color p=0.8", ProbabilityVector.isotropic(0.8), 60),
                    ("free p=0", ProbabilityVector.isotropic(0.0), 60)):
    t1 = time.time()
    b = gather("purify", 12, pv, N, sweeps=250, pbase=7)
    mean = b.mean(0)
    win = mean[50:201]
    stamp(f"  {name}: N={N} ({(time.time()-t1)/N:.2f} s/sample) S[50..200] range "
          f"[{win.min():.3f},{win.max():.3f}]  S(250)={mean[250]:.3f}")
    if name.startswith("free"):
        t = np.arange(20, 201)
        s = mean[20:201]
        keep = s > 0
        k, b0 = np.polyfit(np.log(t[keep]), np.log(s[keep]), 1)
        stamp(f"  free-point log-log slope on t in [20,200]: {k:.3f} (want -1.0 +- 0.3)")
stamp("pilots done")
