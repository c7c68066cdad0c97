"""The competing-measurement protocol on the honeycomb torus.

One sweep is L^2 microsteps. Each microstep draws an operator type
(plaquette interaction with probability p, else an x/y/z bond check
with probabilities px/py/pz), draws a uniform location, and measures
projectively. Conserved fluxes make the dynamics block-diagonal, so
runs start from a definite-flux state.

Randomness is split into two child streams of one seed sequence so a
trajectory is reproducible regardless of how outcomes are consumed:

  choices   per sweep: L^2 type draws (uniform floats against the
            cumulative type thresholds) then L^2 location draws;
  outcomes  one pre-drawn bit per microstep, consumed sequentially
            only when a measurement is genuinely random (deterministic
            repeats consume nothing). Preparation draws its bits from
            the same stream, before the packed block.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .lattice import Lattice
from .pauli import PauliOperator
from .tableau import DETERMINISTIC, RANDOM, StabilizerState

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class ProbabilityVector:
    """Per-microstep type distribution (plaquette, x-, y-, z-bond)."""

    p_plaq: float
    px: float
    py: float
    pz: float

    def __post_init__(self):
        vals = (self.p_plaq, self.px, self.py, self.pz)
        if min(vals) < 0:
            raise ValueError(f"negative probability in {vals}")
        if abs(sum(vals) - 1.0) > _SUM_TOL:
            raise ValueError(f"probabilities sum to {sum(vals)!r}, need 1")

    @classmethod
    def isotropic(cls, p_plaq: float) -> "ProbabilityVector":
        b = (1.0 - p_plaq) / 3.0
        return cls(p_plaq, b, b, b)

    @classmethod
    def bond_only(cls, px: float, py: float, pz: float) -> "ProbabilityVector":
        return cls(0.0, px, py, pz)

    @classmethod
    def plaq_z(cls, p_plaq: float) -> "ProbabilityVector":
        """Plaquette vs z-bond competition only (px = py = 0)."""
        return cls(p_plaq, 0.0, 0.0, 1.0 - p_plaq)

    def thresholds(self) -> np.ndarray:
        c = np.cumsum([self.p_plaq, self.px, self.py])
        return np.asarray(c, np.float64)


@dataclass
class ProtocolConfig:
    """Everything one trajectory needs besides its random seed."""

    L: int
    probs: ProbabilityVector
    sweeps: int | None = None       # None: max(50, 4 L)
    mode: str = "fast"
    log_stride: int = 1             # 0 silences the half-cylinder log

    def resolved_sweeps(self) -> int:
        return self.sweeps if self.sweeps is not None else max(50, 4 * self.L)


@dataclass
class OpTables:
    """Kernel-ready operator tables: index [type, i*L + j].

    Type 0 is the plaquette interaction; 1, 2, 3 the x, y, z bond
    checks. Support rows are padded to the plaquette weight 6.
    """

    L: int
    opx: np.ndarray
    opz: np.ndarray
    supp: np.ndarray
    sx: np.ndarray
    sz: np.ndarray
    nsupp: np.ndarray

    @classmethod
    def build(cls, lat: Lattice) -> "OpTables":
        L, n = lat.L, lat.n_sites
        Wn = K.n_words(n)
        opx = np.zeros((4, L * L, Wn), np.uint64)
        opz = np.zeros((4, L * L, Wn), np.uint64)
        supp = np.zeros((4, L * L, 6), np.int64)
        sx = np.zeros((4, L * L, 6), np.uint8)
        sz = np.zeros((4, L * L, 6), np.uint8)
        families = [lat.all_plaquette_V(), lat.all_bond_checks("x"),
                    lat.all_bond_checks("y"), lat.all_bond_checks("z")]
        for ty, ops in enumerate(families):
            for loc, op in enumerate(ops):
                opx[ty, loc] = op.x
                opz[ty, loc] = op.z
                for m, q in enumerate(op.support()):
                    supp[ty, loc, m] = q
                    w, b = q >> 6, np.uint64(q & 63)
                    sx[ty, loc, m] = int(op.x[w] >> b) & 1
                    sz[ty, loc, m] = int(op.z[w] >> b) & 1
        nsupp = np.array([6, 2, 2, 2], np.int64)
        return cls(L, opx, opz, supp, sx, sz, nsupp)


def trajectory_rngs(seed: int, point_index: int, sample_index: int):
    """(choices, outcomes) generator pair for one trajectory."""
    ss = np.random.SeedSequence([int(seed), int(point_index), int(sample_index)])
    kids = ss.spawn(2)
    return (np.random.Generator(np.random.Philox(kids[0])),
            np.random.Generator(np.random.Philox(kids[1])))


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """uint8 0/1 array -> little-endian packed uint64 words."""
    nb = len(bits)
    pad = (-nb) % 64
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, np.uint8)])
    cols = bits.reshape(-1, 64).astype(np.uint64) << np.arange(64, dtype=np.uint64)
    return np.bitwise_or.reduce(cols, axis=1)


# -- initial states -----------------------------------------------------------


def _project_flux(st: StabilizerState, lat: Lattice, rng, force_plus: bool):
    if force_plus and st.mode != "full":
        raise ValueError("forcing the flux sector requires mode='full'")
    for w in lat.all_plaquette_W():
        if force_plus:
            st.measure(w, forced=1, want_outcome=False)
        else:
            st.measure(w, rng=rng, want_outcome=False)
    return st


def prepare_flux_free_pure(lat: Lattice, rng=None, mode: str = "fast",
                           force_plus: bool = False) -> StabilizerState:
    """Product state projected into a definite flux sector (pure, k = n).

    Flux outcomes are random Born draws; force_plus postselects every
    flux to +1 (full mode only), which fixes the sector exactly.
    Rank-based observables are sector-independent.
    """
    st = StabilizerState.computational_basis_state(lat.n_sites, mode=mode)
    return _project_flux(st, lat, rng, force_plus)


def prepare_flux_free_mixed(lat: Lattice, rng=None, mode: str = "fast",
                            force_plus: bool = False) -> StabilizerState:
    """Maximally mixed state with definite fluxes: entropy L^2 + 1 bits."""
    st = StabilizerState(lat.n_sites, mode=mode)
    return _project_flux(st, lat, rng, force_plus)


# -- evolution ----------------------------------------------------------------


@dataclass
class EvolveLog:
    sweeps_run: int = 0
    total_entropy: list = field(default_factory=list)   # n - k after each sweep
    half_cylinder: list = field(default_factory=list)   # (sweep, S) samples
    counts: np.ndarray = field(default_factory=lambda: np.zeros(4, np.int64))


def run_sweeps(state: StabilizerState, tables: OpTables, probs: ProbabilityVector,
               rng_choices, rng_outcomes, n_sweeps: int,
               half_region=None, log_stride: int = 1,
               log: EvolveLog | None = None) -> EvolveLog:
    """Advance n_sweeps sweeps of L^2 microsteps each."""
    log = log or EvolveLog()
    L2 = tables.L * tables.L
    thr = probs.thresholds()
    full = state.mode == "full"
    out_words = pack_bits(rng_outcomes.integers(0, 2, size=n_sweeps * L2,
                                                dtype=np.uint8))
    pos = 0
    region = None
    if half_region is not None and log_stride > 0:
        region = np.asarray(sorted(half_region), np.int64)
        gat = np.zeros((state.n_qubits, K.n_words(2 * len(region))), np.uint64)
        nb = np.empty(0, np.int64)
    for s in range(n_sweeps):
        types = rng_choices.random(L2)
        locs = rng_choices.integers(0, L2, size=L2)
        k, pos, status = K.sweep_kernel(
            state.X, state.Z, state.TX, state.TZ, state.signs, state.live,
            state.n_qubits, state.k, state.Wn, state.Rw,
            tables.opx, tables.opz, tables.supp, tables.sx, tables.sz,
            tables.nsupp, thr, types, locs, out_words, pos, full,
            state._anti, state._accx, state._accz, log.counts)
        state.k = int(k)
        if status != 0:
            raise AssertionError(f"sweep kernel reported status {status}")
        log.sweeps_run += 1
        log.total_entropy.append(state.entropy_bits())
        if region is not None and state.is_pure and \
                (s % log_stride == 0 or s == n_sweeps - 1):
            K.gather_columns(state.X[:state.k], state.Z[:state.k], state.k,
                             region, gat)
            r = int(K.rank_profile(gat, state.k, 2 * len(region), nb, nb.copy()))
            log.half_cylinder.append((log.sweeps_run, r - len(region)))
    return log


def evolve_to_steady_state(state: StabilizerState, lat: Lattice,
                           probs: ProbabilityVector, rng_choices, rng_outcomes,
                           sweeps: int | None = None, log_stride: int = 1,
                           tables: OpTables | None = None) -> EvolveLog:
    """Run max(50, 4L) sweeps (or an explicit count), logging the
    half-cylinder entropy every log_stride sweeps while the state is pure."""
    tables = tables or OpTables.build(lat)
    n_sweeps = sweeps if sweeps is not None else max(50, 4 * lat.L)
    return run_sweeps(state, tables, probs, rng_choices, rng_outcomes, n_sweeps,
                      half_region=lat.cylinder_region(lat.L // 2),
                      log_stride=log_stride)


# -- ancilla-decomposed measurement -------------------------------------------
#
# Parity readout of a Pauli onto a fresh |0> ancilla:
#
#     H(a); for each support qubit q: controlled-P_q(a -> q); then for
#     sign -1 an S^2 = Z on a; H(a); measure Z_a; X(a) on outcome -1.
#
# Controlled-X is a bare cnot; controlled-Z conjugates the target by H
# (H X H = Z) and controlled-Y by S (S X S^-1 = Y).


def _cpauli(state: StabilizerState, letter: str, anc: int, q: int):
    if letter == "X":
        state.apply_clifford("cnot", anc, q)
    elif letter == "Z":
        state.apply_clifford("hadamard", q)
        state.apply_clifford("cnot", anc, q)
        state.apply_clifford("hadamard", q)
    elif letter == "Y":
        # S X S^-1 = Y with S^-1 = S^3, so conjugate the cnot by S on q
        for _ in range(3):
            state.apply_clifford("phase", q)
        state.apply_clifford("cnot", anc, q)
        state.apply_clifford("phase", q)
    else:
        raise ValueError(f"no controlled-{letter}")


def measure_via_ancilla(state: StabilizerState, op: PauliOperator, anc: int,
                        rng=None, forced: int | None = None):
    """Measure op by parity transfer onto ancilla `anc` (must be |0>,
    disjoint from op's support) and reset the ancilla to |0> after.

    Returns (outcome, kind) exactly like StabilizerState.measure.
    Requires mode='full' (the readout is a signed Z measurement).
    """
    if state.mode != "full":
        raise ValueError("ancilla readout needs mode='full'")
    if anc in op.support():
        raise ValueError("ancilla inside the operator support")
    z_anc = PauliOperator.from_support(state.n_qubits, [anc], "Z")
    chk, kind0 = state.measure(z_anc, forced=1)  # verifies |0>; cheap
    assert (chk, kind0) == (1, DETERMINISTIC), "ancilla not in |0>"
    state.apply_clifford("hadamard", anc)
    for q in op.support():
        _cpauli(state, op.letter(q), anc, q)
    if op.sign == -1:
        state.apply_clifford("phase", anc)
        state.apply_clifford("phase", anc)
    state.apply_clifford("hadamard", anc)
    out, kind = state.measure(z_anc, rng=rng, forced=forced)
    if out == -1:  # reset: X = H Z H = H S S H
        state.apply_clifford("hadamard", anc)
        state.apply_clifford("phase", anc)
        state.apply_clifford("phase", anc)
        state.apply_clifford("hadamard", anc)
    return out, kind


@dataclass(frozen=True)
class AncillaLayout:
    """Register map for the ancilla-assisted protocol: 2 L^2 physical
    sites, then one ancilla per bond (x, y, z blocks), then one per
    plaquette; 6 L^2 qubits total."""

    L: int

    @property
    def n_physical(self) -> int:
        return 2 * self.L * self.L

    @property
    def n_total(self) -> int:
        return 6 * self.L * self.L

    def bond_ancilla(self, kind: str, i: int, j: int) -> int:
        base = {"x": 2, "y": 3, "z": 4}[kind]
        return base * self.L * self.L + (i % self.L) * self.L + (j % self.L)

    def plaquette_ancilla(self, i: int, j: int) -> int:
        return 5 * self.L * self.L + (i % self.L) * self.L + (j % self.L)

    def lift(self, op: PauliOperator) -> PauliOperator:
        """Embed a physical-register operator into the full register."""
        qs = op.support()
        return PauliOperator.from_support(self.n_total, qs,
                                          [op.letter(q) for q in qs], op.sign)
