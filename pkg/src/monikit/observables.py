"""Entanglement observables of pure stabilizer states on the torus.

Everything here reduces to GF(2) ranks of column-restricted generator
matrices: S(A) = rank_A - |A| bits. Observables that need several
nested regions reuse one elimination per qubit ordering, reading ranks
off at column prefixes, so an entropy arc costs a single elimination
and a tripartite mutual information three.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .circuit import EvolveLog, OpTables, ProbabilityVector, run_sweeps
from .lattice import Lattice
from .tableau import MixedStateError, StabilizerState


def _prefix_entropies(state: StabilizerState, order, site_bounds) -> list[int]:
    """S(prefix) for each site-count bound, one elimination total."""
    if not state.is_pure:
        raise MixedStateError("entropies of nested regions need a pure state")
    order = np.asarray(order, np.int64)
    k = state.k
    gat = np.zeros((k, K.n_words(2 * len(order))), np.uint64)
    K.gather_columns(state.X[:k], state.Z[:k], k, order, gat)
    bounds = np.asarray([2 * b for b in site_bounds], np.int64)
    ranks = np.zeros(len(bounds), np.int64)
    K.rank_profile(gat, k, 2 * len(order), bounds, ranks)
    return [int(r) - b for r, b in zip(ranks, site_bounds)]


@dataclass
class EntropyCurve:
    """Half-torus entropy profile S(l) for cylinder prefixes l = 0..L."""

    L: int
    lengths: list[int]
    bits: list[int]

    def as_arrays(self):
        return np.asarray(self.lengths, float), np.asarray(self.bits, float)


def entropy_arc(state: StabilizerState, lat: Lattice) -> EntropyCurve:
    cols = 2 * lat.L  # sites per cylinder column
    bounds = [cols * l for l in range(lat.L + 1)]
    ent = _prefix_entropies(state, np.arange(lat.n_sites), bounds)
    return EntropyCurve(lat.L, list(range(lat.L + 1)), ent)


@dataclass
class TmiResult:
    """Entropies of the four cylindrical quarters and the tripartite
    mutual information I3 = SA+SB+SC - SAB-SAC-SBC + SABC."""

    s_a: int
    s_b: int
    s_c: int
    s_ab: int
    s_ac: int
    s_bc: int
    s_abc: int

    @property
    def i3(self) -> int:
        return (self.s_a + self.s_b + self.s_c
                - self.s_ab - self.s_ac - self.s_bc + self.s_abc)


def tmi(state: StabilizerState, lat: Lattice) -> TmiResult:
    a, b, c, d = lat.tmi_regions()
    la, lb, lc = len(a), len(b), len(c)
    e1 = _prefix_entropies(state, a + b + c + d, [la, la + lb, la + lb + lc])
    e2 = _prefix_entropies(state, b + c + d + a, [lb, lb + lc])
    e3 = _prefix_entropies(state, c + a + b + d, [lc, lc + la])
    return TmiResult(s_a=e1[0], s_ab=e1[1], s_abc=e1[2],
                     s_b=e2[0], s_bc=e2[1],
                     s_c=e3[0], s_ac=e3[1])


@dataclass
class TeeResult:
    """Disk-sector entropies and the topological term
    gamma = SAB+SBC+SAC - SA-SB-SC - SABC (positive in ordered phases)."""

    s_a: int
    s_b: int
    s_c: int
    s_ab: int
    s_ac: int
    s_bc: int
    s_abc: int

    @property
    def gamma(self) -> int:
        return (self.s_ab + self.s_bc + self.s_ac
                - self.s_a - self.s_b - self.s_c - self.s_abc)


def tee(state: StabilizerState, lat: Lattice) -> TeeResult:
    a, b, c = lat.tee_regions()
    rest = sorted(set(range(lat.n_sites)) - set(a) - set(b) - set(c))
    la, lb, lc = len(a), len(b), len(c)
    e1 = _prefix_entropies(state, a + b + c + rest, [la, la + lb, la + lb + lc])
    e2 = _prefix_entropies(state, b + c + a + rest, [lb, lb + lc])
    e3 = _prefix_entropies(state, c + a + b + rest, [lc, lc + la])
    return TeeResult(s_a=e1[0], s_ab=e1[1], s_abc=e1[2],
                     s_b=e2[0], s_bc=e2[1],
                     s_c=e3[0], s_ac=e3[1])


@dataclass
class PurificationCurve:
    """Total entropy n - k after each sweep of a mixed-state run."""

    sweeps: list[int]
    bits: list[int]

    def as_arrays(self):
        return np.asarray(self.sweeps, float), np.asarray(self.bits, float)


def purification_trajectory(state: StabilizerState, tables: OpTables,
                            probs: ProbabilityVector, rng_choices, rng_outcomes,
                            n_sweeps: int) -> PurificationCurve:
    log = run_sweeps(state, tables, probs, rng_choices, rng_outcomes, n_sweeps,
                     half_region=None, log_stride=0)
    return PurificationCurve(list(range(1, n_sweeps + 1)), log.total_entropy)
