"""Stabilizer states with first-class mixed-state support.

A state on n qubits is a group of k <= n commuting, independent signed
Pauli generators; k < n is a mixed state with total entropy n - k bits.
Internally the generators sit inside a full 2n-row symplectic basis
(generators, completion pairs, destabilizer partners, see _kernels),
which makes deterministic-outcome detection O(k) word operations
instead of a rank solve.

Two modes:

  "full"  tracks signs and destabilizer partners; measurements report
          outcomes, forcing (postselection) is allowed.
  "fast"  tracks only generator masks. Outcome signs are never
          computed, which is sufficient for every rank-based
          entanglement observable and roughly halves the update cost.

A fast state visits the same generator masks as a full state fed the
same decision stream, since case classification and row updates never
depend on signs; tests pin that equivalence.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from .pauli import DimensionError, PauliOperator, multiply

RANDOM = "random"
DETERMINISTIC = "deterministic"


class MixedStateError(ValueError):
    """Operation requires a pure state (k = n)."""


class PostselectionError(ValueError):
    """A forced outcome contradicts a deterministic measurement."""


class StabilizerState:
    """n-qubit stabilizer state; starts maximally mixed (k = 0)."""

    def __init__(self, n_qubits: int, mode: str = "full"):
        if n_qubits < 1:
            raise ValueError("need at least one qubit")
        if mode not in ("full", "fast"):
            raise ValueError(f"unknown mode {mode!r}")
        self.n_qubits = n_qubits
        self.mode = mode
        n = n_qubits
        self.k = 0
        self.Wn = K.n_words(n)
        self.Rw = K.n_words(2 * n)
        self.X = np.zeros((2 * n, self.Wn), np.uint64)
        self.Z = np.zeros((2 * n, self.Wn), np.uint64)
        one = np.uint64(1)
        for j in range(n):
            self.X[j, j >> 6] |= one << np.uint64(j & 63)       # completion X_j
            self.Z[n + j, j >> 6] |= one << np.uint64(j & 63)   # completion Z_j
        self.TX = np.zeros((n, self.Rw), np.uint64)
        self.TZ = np.zeros((n, self.Rw), np.uint64)
        K.mirror_from_rows(self.X, self.Z, n, 2 * n, self.TX, self.TZ)
        self.signs = np.zeros(self.Rw, np.uint64)
        self.live = np.full(self.Rw, np.uint64(0xFFFFFFFFFFFFFFFF))
        tail = (2 * n) & 63
        if tail:
            self.live[-1] = np.uint64((1 << tail) - 1)
        self._anti = np.zeros(self.Rw, np.uint64)
        self._accx = np.zeros(self.Wn, np.uint64)
        self._accz = np.zeros(self.Wn, np.uint64)

    @classmethod
    def computational_basis_state(cls, n_qubits: int, mode: str = "full") -> "StabilizerState":
        """|0...0>: generators {+Z_j}, destabilizer partners {X_j}."""
        st = cls(n_qubits, mode=mode)
        n = n_qubits
        # swap the construction-time roles: Z rows become generators
        st.X[:n] = 0
        st.Z[:n] = 0
        st.X[n:] = 0
        st.Z[n:] = 0
        one = np.uint64(1)
        for j in range(n):
            st.Z[j, j >> 6] |= one << np.uint64(j & 63)
            st.X[n + j, j >> 6] |= one << np.uint64(j & 63)
        K.mirror_from_rows(st.X, st.Z, n, 2 * n, st.TX, st.TZ)
        st.k = n
        if mode == "fast":
            st.live[:] = 0
            for r in range(n):
                st.live[r >> 6] |= one << np.uint64(r & 63)
        return st

    # -- structure ----------------------------------------------------------

    @property
    def is_pure(self) -> bool:
        return self.k == self.n_qubits

    def entropy_bits(self) -> int:
        """Total entropy n - k of the (possibly mixed) state."""
        return self.n_qubits - self.k

    @property
    def generators(self) -> list[PauliOperator]:
        out = []
        for r in range(self.k):
            sign = -1 if (self.mode == "full" and K._get_bit(self.signs, r)) else 1
            out.append(PauliOperator(self.n_qubits, self.X[r].copy(), self.Z[r].copy(), sign))
        return out

    def copy(self) -> "StabilizerState":
        st = StabilizerState.__new__(StabilizerState)
        st.n_qubits = self.n_qubits
        st.mode = self.mode
        st.k = self.k
        st.Wn = self.Wn
        st.Rw = self.Rw
        for name in ("X", "Z", "TX", "TZ", "signs", "live", "_anti", "_accx", "_accz"):
            setattr(st, name, getattr(self, name).copy())
        return st

    # -- measurement --------------------------------------------------------

    def _op_arrays(self, op: PauliOperator):
        if op.n_qubits != self.n_qubits:
            raise DimensionError(f"operator on {op.n_qubits} qubits, state on {self.n_qubits}")
        supp = op.support()
        sx = np.zeros(max(len(supp), 1), np.uint8)
        sz = np.zeros(max(len(supp), 1), np.uint8)
        for i, q in enumerate(supp):
            w, b = q >> 6, np.uint64(q & 63)
            sx[i] = (op.x[w] >> b) & np.uint64(1)
            sz[i] = (op.z[w] >> b) & np.uint64(1)
        return np.asarray(supp if supp else [0], np.int64), sx, sz, len(supp)

    def measure(self, op: PauliOperator, rng=None, forced: int | None = None,
                want_outcome: bool = True):
        """Projectively measure a Hermitian Pauli.

        Returns (outcome, kind) with outcome in {+1, -1, None} and kind
        one of RANDOM / DETERMINISTIC. outcome is None only in fast
        mode on a deterministic measurement (signs untracked). forced
        postselects the outcome: random cases comply for free, a
        contradicting deterministic case raises PostselectionError.
        One bit of rng is consumed per random measurement, in call
        order; deterministic measurements consume nothing.
        """
        if forced not in (None, 1, -1):
            raise ValueError("forced must be +1, -1 or None")
        supp, sx, sz, nsupp = self._op_arrays(op)
        full = self.mode == "full"
        case = K.classify_kernel(self.TX, self.TZ, self.live, self.n_qubits, self.k,
                                 self.Rw, supp, sx, sz, nsupp, self._anti)
        coin = 0
        if case != 1 and forced is None:
            if rng is None:
                raise ValueError("random measurement needs an rng")
            coin = int(rng.integers(0, 2))
        fo = -1 if forced is None else (0 if forced == 1 else 1)
        opsign = 0 if op.sign == 1 else 1
        k2, case2, outbit, status = K.measure_core(
            self.X, self.Z, self.TX, self.TZ, self.signs, self.live,
            self.n_qubits, self.k, self.Wn, self.Rw,
            op.x, op.z, opsign, supp, sx, sz, nsupp,
            coin, fo, want_outcome and full, full,
            self._anti, self._accx, self._accz)
        assert case2 == case
        self.k = int(k2)
        if status == 1:
            raise PostselectionError(
                f"forced outcome {forced:+d} contradicts deterministic {1 if outbit == 0 else -1:+d}")
        if status == 2:
            raise ValueError("forcing or reading outcomes requires mode='full'")
        if status == 3:
            raise AssertionError("span witness reconstruction failed (internal)")
        kind = DETERMINISTIC if case == 1 else RANDOM
        if case == 1 and not (full and want_outcome) and forced is None:
            return None, kind
        return (1 if outbit == 0 else -1), kind

    # -- Clifford gates -----------------------------------------------------

    def apply_clifford(self, gate: str, *qubits: int):
        """gate in {'hadamard', 'phase', 'cnot'}; conjugates every row."""
        for q in qubits:
            if not 0 <= q < self.n_qubits:
                raise IndexError(f"qubit {q} out of range")
        if gate == "hadamard":
            (q,) = qubits
            K.apply_h(self.X, self.Z, self.TX, self.TZ, self.signs, self.n_qubits, self.Rw, q)
        elif gate == "phase":
            (q,) = qubits
            K.apply_s(self.X, self.Z, self.TX, self.TZ, self.signs, self.n_qubits, self.Rw, q)
        elif gate == "cnot":
            c, t = qubits
            if c == t:
                raise ValueError("cnot needs distinct qubits")
            K.apply_cnot(self.X, self.Z, self.TX, self.TZ, self.signs, self.n_qubits, self.Rw, c, t)
        else:
            raise ValueError(f"unknown gate {gate!r}")

    # -- entropies ----------------------------------------------------------

    def subsystem_entropy_bits(self, region) -> int:
        """S(A) = rank of the region-restricted generator matrix - |A|.

        Defined for pure states only; for a mixed state's total entropy
        use entropy_bits().
        """
        if not self.is_pure:
            raise MixedStateError("subsystem entropy needs a pure state; "
                                  "total entropy of a mixed state is entropy_bits()")
        order = np.asarray(sorted(set(int(q) for q in region)), np.int64)
        if len(order) and (order[0] < 0 or order[-1] >= self.n_qubits):
            raise DimensionError("region outside the register")
        m = len(order)
        if m == 0 or m == self.n_qubits:
            return 0
        out = np.zeros((self.k, K.n_words(2 * m)), np.uint64)
        K.gather_columns(self.X[:self.k], self.Z[:self.k], self.k, order, out)
        nb = np.empty(0, np.int64)
        r = int(K.rank_profile(out, self.k, 2 * m, nb, nb.copy()))
        return r - m

    # -- canonical form and dumps -------------------------------------------

    def canonical_generators(self, qubit_order=None, with_signs: bool | None = None):
        """Row-reduced echelon basis of the generator group.

        Columns are scanned qubit-major (x bit then z bit) in
        qubit_order (default 0..n-1); two states stabilize the same
        group iff these lists compare equal. Signs are included in full
        mode unless with_signs=False.
        """
        if with_signs is None:
            with_signs = self.mode == "full"
        rows = self.generators
        if not with_signs:
            rows = [PauliOperator(g.n_qubits, g.x, g.z, 1) for g in rows]
        order = list(qubit_order) if qubit_order is not None else list(range(self.n_qubits))
        cols = [(q, wh) for q in order for wh in (0, 1)]

        def bit(g, q, wh):
            arr = g.x if wh == 0 else g.z
            return int(arr[q >> 6] >> np.uint64(q & 63)) & 1

        done = 0
        for q, wh in cols:
            piv = next((i for i in range(done, len(rows)) if bit(rows[i], q, wh)), None)
            if piv is None:
                continue
            rows[done], rows[piv] = rows[piv], rows[done]
            for i in range(len(rows)):
                if i != done and bit(rows[i], q, wh):
                    rows[i] = multiply(rows[i], rows[done])
            done += 1
        return [g.to_string() for g in rows]

    def dumps(self) -> str:
        """One sign+Pauli string per generator, in storage order."""
        return "\n".join(g.to_string() for g in self.generators)

    # -- invariant checking (tests / debug) ----------------------------------

    def validate(self):
        n, k = self.n_qubits, self.k
        TX2 = np.zeros_like(self.TX)
        TZ2 = np.zeros_like(self.TZ)
        K.mirror_from_rows(self.X, self.Z, n, 2 * n, TX2, TZ2)
        live_rows = [r for r in range(2 * n) if K._get_bit(self.live, r)]
        for q in range(n):
            for wi in range(self.Rw):
                dx = int(self.TX[q, wi] ^ TX2[q, wi])
                dz = int(self.TZ[q, wi] ^ TZ2[q, wi])
                for r in live_rows:
                    if r >> 6 == wi:
                        assert not (dx >> (r & 63)) & 1, f"mirror X drift at q={q}, row {r}"
                        assert not (dz >> (r & 63)) & 1, f"mirror Z drift at q={q}, row {r}"
        for i in range(k):
            for j in range(i + 1, k):
                assert not K._anticommutes_rows(self.X[i], self.Z[i], self.X[j], self.Z[j], self.Wn), \
                    f"generators {i}, {j} anticommute"
        from .pauli import BitMatrix, rank as gf2_rank
        if k:
            # concatenated word layout spans 128*Wn bit columns (zero-padded)
            stacked = np.concatenate([self.X[:k], self.Z[:k]], axis=1)
            m = BitMatrix(k, 128 * self.Wn, np.ascontiguousarray(stacked))
            assert gf2_rank(m) == k, "generators dependent"
        if self.mode == "full":
            for i in range(2 * n):
                for j in range(i, 2 * n):
                    want = 1 if j == i + n else 0
                    got = K._anticommutes_rows(self.X[i], self.Z[i], self.X[j], self.Z[j], self.Wn)
                    assert got == want, f"pairing broken between rows {i}, {j}"
        return True


def computational_basis_state(n_qubits: int, mode: str = "full") -> StabilizerState:
    return StabilizerState.computational_basis_state(n_qubits, mode=mode)


def measure(state: StabilizerState, op: PauliOperator, rng=None, **kw):
    return state.measure(op, rng=rng, **kw)


def apply_clifford(state: StabilizerState, gate: str, *qubits: int):
    state.apply_clifford(gate, *qubits)


def subsystem_entropy_bits(state: StabilizerState, region) -> int:
    return state.subsystem_entropy_bits(region)


def entropy_bits(state: StabilizerState) -> int:
    return state.entropy_bits()
