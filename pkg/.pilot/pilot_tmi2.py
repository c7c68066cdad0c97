"""Pilot: TMI systematics — equilibration, endpoint values, purification decade."""
import sys
import time

import numpy as np

sys.path.insert(0, "/root/pkg/src")
from monikit.lattice import build
from monikit.observables import tmi, entropy_arc, purification_trajectory
from monikit.circuit import (ProbabilityVector, OpTables, trajectory_rngs,
                             prepare_flux_free_pure, prepare_flux_free_mixed,
                             run_sweeps)
from monikit.analysis import fit_cft_collapse

T0 = time.time()


def log(msg):
    print(f"[{time.time()-T0:7.1f}s] {msg}", flush=True)


def tmi_mean(L, probs, sweeps, n, seed):
    lat = build(L)
    tables = OpTables.build(lat)
    vals = []
    for s in range(n):
        rc, ro = trajectory_rngs(seed, sweeps, s)
        st = prepare_flux_free_pure(lat, ro, mode="fast")
        run_sweeps(st, tables, probs, rc, ro, sweeps)
        vals.append(tmi(st, lat).i3)
    v = np.asarray(vals)
    return v.mean(), v.std(ddof=1) / np.sqrt(len(v))


def arc_ensemble(L, probs, sweeps, n, seed):
    lat = build(L)
    tables = OpTables.build(lat)
    acc = []
    for s in range(n):
        rc, ro = trajectory_rngs(seed, sweeps, s)
        st = prepare_flux_free_pure(lat, ro, mode="fast")
        run_sweeps(st, tables, probs, rc, ro, sweeps)
        acc.append(entropy_arc(st, lat).bits)
    a = np.asarray(acc)
    mean = a.mean(axis=0)
    err = a.std(axis=0, ddof=1) / np.sqrt(len(a))
    return np.arange(L + 1), mean, err

log("JOB B: equilibration A/B tests")
sd = ProbabilityVector(0.5, 0.0, 0.0, 0.5)
for sweeps in (96, 288):
    l, m, e = arc_ensemble(24, sd, sweeps, 120, 500 + sweeps)
    fit = fit_cft_collapse(l, m, np.maximum(e, 1e-3), L=24)
    log(f"  self-dual L=24 sweeps={sweeps}: c={fit['c'][0]:.4f}+-{fit['c'][1]:.4f}"
        f"  S(12)={m[12]:.3f}")
cen = ProbabilityVector.isotropic(0.25)
for sweeps in (72, 216):
    l, m, e = arc_ensemble(18, cen, sweeps, 150, 600 + sweeps)
    log(f"  centroid L=18 sweeps={sweeps}: S(9)={m[9]:.3f}+-{e[9]:.3f} "
        f"S(4)={m[4]:.3f} S(6)={m[6]:.3f}")
crit = ProbabilityVector.isotropic(0.68)
for L in (12, 16):
    for sweeps in (4 * L, 16 * L):
        m, e = tmi_mean(L, crit, sweeps, 300, 700)
        log(f"  p=0.68 L={L} sweeps={sweeps}: I3={m:+.3f}+-{e:.3f}")

log("JOB A: liquid TMI endpoints, long equilibration")
free = ProbabilityVector.isotropic(0.0)
for L in (12, 16, 20):
    m, e = tmi_mean(L, free, 16 * L, 400, 800)
    log(f"  p=0 L={L} sweeps={16*L}: I3={m:+.4f}+-{e:.4f}")

log("JOB D: toric-point TMI quantization")
tor = ProbabilityVector(0.0, 0.1, 0.1, 0.8)
from collections import Counter
vals = []
lat12 = build(12)
tab12 = OpTables.build(lat12)
for s in range(60):
    rc, ro = trajectory_rngs(900, 0, s)
    st = prepare_flux_free_pure(lat12, ro, mode="fast")
    run_sweeps(st, tab12, tor, rc, ro, 96)
    vals.append(tmi(st, lat12).i3)
log(f"  toric point L=12: mean={np.mean(vals):+.3f} counts={dict(sorted(Counter(vals).items()))}")

log("JOB C: free-point purification mean curve")
lat = build(12)
tables = OpTables.build(lat)
curves = []
for s in range(400):
    rc, ro = trajectory_rngs(1000, 0, s)
    st = prepare_flux_free_mixed(lat, ro, mode="fast")
    c = purification_trajectory(st, tables, free, rc, ro, 250)
    curves.append(c.bits)
a = np.asarray(curves, dtype=float)
mean = a.mean(axis=0)
for t in (1, 2, 3, 4, 5, 6, 8, 10, 13, 16, 20, 25, 30, 40, 50, 65, 80, 100,
          125, 150, 200, 250):
    log(f"  free purify t={t:3d}: S={mean[t]:9.4f}")
loglocal = np.diff(np.log(mean[1:121]))/np.diff(np.log(np.arange(1, 121)))
for t in (2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96):
    log(f"  local slope near t={t:3d}: {loglocal[t-1]:+.3f}")
log("pilot_tmi2 done")
