"""Brute-force reference simulator for small registers.

Keeps an explicit statevector (pure) or density matrix (mixed) and
implements Pauli measurement, Clifford gates, and exact von Neumann
entropies by diagonalization. Exponential in qubit count; intended for
n <= ~12, as the cross-check oracle behind the stabilizer engine and
the `selfcheck` command. No packed-bit code is shared with the fast
path, so agreement between the two is meaningful.
"""

from __future__ import annotations

import numpy as np

from .pauli import PauliOperator

_TOL = 1e-9


def _pauli_phases(op: PauliOperator):
    """Vectorized action P|b> = phase[b] |b ^ xmask>, basis bit q of b
    being qubit q. Returns (xmask, phase array over all basis states)."""
    n = op.n_qubits
    x = int(op.x[0]) if n else 0
    z = int(op.z[0]) if n else 0
    for w in range(1, len(op.x)):
        x |= int(op.x[w]) << (64 * w)
        z |= int(op.z[w]) << (64 * w)
    b = np.arange(1 << n, dtype=np.uint64)
    zcount = np.bitwise_count(b & np.uint64(z))
    phase = np.where(zcount & 1, -1.0 + 0j, 1.0 + 0j)
    y_count = bin(x & z).count("1")
    phase = phase * op.sign * (1j) ** (y_count % 4)
    return x, phase


class DenseState:
    """Statevector or density-matrix register, n qubits."""

    def __init__(self, n: int, mixed: bool = False):
        self.n = n
        self.mixed = mixed
        dim = 1 << n
        if mixed:
            self.rho = np.eye(dim, dtype=complex) / dim
            self.psi = None
        else:
            self.psi = np.zeros(dim, dtype=complex)
            self.psi[0] = 1.0
            self.rho = None

    # -- Pauli application and measurement ---------------------------------

    def _apply_pauli_vec(self, vec: np.ndarray, op: PauliOperator) -> np.ndarray:
        x, phase = _pauli_phases(op)
        out = np.empty_like(vec)
        idx = np.arange(len(vec)) ^ x
        out[idx] = phase * vec
        return out

    def expectation(self, op: PauliOperator) -> float:
        if self.mixed:
            x, phase = _pauli_phases(op)
            idx = np.arange(self.rho.shape[0]) ^ x
            return float(np.real(np.sum(phase * self.rho[np.arange(len(idx)), idx])))
        return float(np.real(np.vdot(self.psi, self._apply_pauli_vec(self.psi, op))))

    def measure(self, op: PauliOperator, rng=None, forced: int | None = None):
        """Projective measurement. Returns (outcome, deterministic).

        forced postselects that outcome; impossible postselection (zero
        probability branch) raises.
        """
        ev = self.expectation(op)
        p_plus = (1 + ev) / 2
        deterministic = p_plus < _TOL or p_plus > 1 - _TOL
        if forced is not None:
            outcome = forced
        elif deterministic:
            outcome = 1 if p_plus > 0.5 else -1
        else:
            outcome = 1 if rng.random() < p_plus else -1
        p_out = p_plus if outcome == 1 else 1 - p_plus
        if p_out < _TOL:
            raise ValueError("postselected outcome has zero probability")
        if self.mixed:
            x, phase = _pauli_phases(op)
            idx = np.arange(self.rho.shape[0]) ^ x
            # (P rho)[i, j] = phase[i^x] rho[i^x, j]; (A P)[i, j] = A[i, j^x] phase[j]
            proj = (self.rho + outcome * (phase[idx][:, None] * self.rho[idx, :])) / 2
            proj = (proj + outcome * (phase[None, :] * proj[:, idx])) / 2
            self.rho = proj / np.real(np.trace(proj))
        else:
            proj = (self.psi + outcome * self._apply_pauli_vec(self.psi, op)) / 2
            self.psi = proj / np.linalg.norm(proj)
        return outcome, deterministic

    # -- Clifford gates -----------------------------------------------------

    _H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    _S = np.array([[1, 0], [0, 1j]], dtype=complex)
    _CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

    def _apply_unitary_vec(self, vec, u, qubits):
        n = self.n
        t = vec.reshape((2,) * n)
        axes = [n - 1 - q for q in qubits]
        t = np.moveaxis(t, axes, range(len(qubits)))
        shape = t.shape
        t = u @ t.reshape(1 << len(qubits), -1)
        t = np.moveaxis(t.reshape(shape), range(len(qubits)), axes)
        return t.reshape(-1)

    def apply_gate(self, name: str, *qubits: int):
        u = {"h": self._H, "s": self._S, "cnot": self._CNOT}[name]
        if self.mixed:
            dim = self.rho.shape[0]
            ufull = np.empty((dim, dim), dtype=complex)
            eye = np.eye(dim, dtype=complex)
            for c in range(dim):
                ufull[:, c] = self._apply_unitary_vec(eye[:, c], u, list(qubits))
            self.rho = ufull @ self.rho @ ufull.conj().T
        else:
            self.psi = self._apply_unitary_vec(self.psi, u, list(qubits))

    # -- entropies ----------------------------------------------------------

    def entropy_bits(self) -> int:
        if not self.mixed:
            return 0
        lam = np.linalg.eigvalsh(self.rho)
        lam = lam[lam > _TOL]
        s = -np.sum(lam * np.log2(lam))
        out = int(round(s))
        assert abs(s - out) < 1e-6, f"non-flat spectrum, S={s}"
        return out

    def subsystem_entropy_bits(self, region) -> int:
        """Exact S(region) in bits; requires a pure state."""
        if self.mixed:
            raise ValueError("subsystem entropy of a mixed register not supported here")
        region = sorted(region)
        rest = [q for q in range(self.n) if q not in region]
        t = self.psi.reshape((2,) * self.n)
        perm = [self.n - 1 - q for q in region] + [self.n - 1 - q for q in rest]
        t = np.transpose(t, perm).reshape(1 << len(region), -1)
        sv = np.linalg.svd(t, compute_uv=False)
        lam = sv**2
        lam = lam[lam > _TOL]
        s = float(-np.sum(lam * np.log2(lam)))
        out = int(round(s))
        assert abs(s - out) < 1e-6, f"non-flat Schmidt spectrum, S={s}"
        return out
