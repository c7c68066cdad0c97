"""Bit-packed Pauli operators and GF(2) linear algebra.

Masks are little-endian packed uint64 arrays: qubit q lives at word
q >> 6, bit q & 63. Y is encoded as x and z both set. Signs are +/-1;
a Pauli product whose accumulated phase is imaginary is rejected at
this boundary (the measurement protocol only ever needs Hermitian
operators), see :func:`multiply`.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as K


class DimensionError(ValueError):
    """Operands act on different qubit or column counts."""


class ImaginaryPhaseError(ValueError):
    """A Pauli product came out anti-Hermitian (phase +/-i)."""


_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_LETTER = {v: k for k, v in _LETTER_TO_BITS.items()}


class PauliOperator:
    """Signed n-qubit Pauli, stored as packed x/z masks plus a sign."""

    __slots__ = ("n_qubits", "x", "z", "sign")

    def __init__(self, n_qubits: int, x: np.ndarray, z: np.ndarray, sign: int = 1):
        if sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign}")
        self.n_qubits = n_qubits
        self.x = np.asarray(x, dtype=np.uint64)
        self.z = np.asarray(z, dtype=np.uint64)
        self.sign = sign

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliOperator":
        w = K.n_words(n_qubits)
        return cls(n_qubits, np.zeros(w, np.uint64), np.zeros(w, np.uint64))

    @classmethod
    def from_support(cls, n_qubits: int, qubits, letters, sign: int = 1) -> "PauliOperator":
        """Operator with the given letter on each listed qubit, I elsewhere."""
        op = cls.identity(n_qubits)
        op.sign = sign
        for q, let in zip(qubits, letters):
            if not 0 <= q < n_qubits:
                raise DimensionError(f"qubit {q} outside register of {n_qubits}")
            xb, zb = _LETTER_TO_BITS[let]
            w, b = divmod(q, 64)
            if xb:
                op.x[w] |= np.uint64(1) << np.uint64(b)
            if zb:
                op.z[w] |= np.uint64(1) << np.uint64(b)
        return op

    @classmethod
    def from_string(cls, s: str) -> "PauliOperator":
        """Parse e.g. '+XIZY' or '-ZZ' (leftmost letter is qubit 0)."""
        sign = 1
        if s and s[0] in "+-":
            sign = 1 if s[0] == "+" else -1
            s = s[1:]
        return cls.from_support(len(s), range(len(s)), s, sign)

    def letter(self, q: int) -> str:
        w, b = divmod(q, 64)
        xb = int(self.x[w] >> np.uint64(b)) & 1
        zb = int(self.z[w] >> np.uint64(b)) & 1
        return _BITS_TO_LETTER[(xb, zb)]

    def support(self) -> list[int]:
        m = self.x | self.z
        return [q for q in range(self.n_qubits) if (m[q >> 6] >> np.uint64(q & 63)) & np.uint64(1)]

    def weight(self) -> int:
        return len(self.support())

    def copy(self) -> "PauliOperator":
        return PauliOperator(self.n_qubits, self.x.copy(), self.z.copy(), self.sign)

    def to_string(self) -> str:
        return ("+" if self.sign > 0 else "-") + "".join(self.letter(q) for q in range(self.n_qubits))

    def __repr__(self):
        if self.n_qubits <= 64:
            return f"PauliOperator({self.to_string()!r})"
        body = ",".join(f"{q}:{self.letter(q)}" for q in self.support())
        return f"PauliOperator(n={self.n_qubits}, {{{body}}}, sign={self.sign:+d})"

    def __eq__(self, other):
        return (isinstance(other, PauliOperator)
                and self.n_qubits == other.n_qubits
                and self.sign == other.sign
                and np.array_equal(self.x, other.x)
                and np.array_equal(self.z, other.z))

    def __hash__(self):
        return hash((self.n_qubits, self.sign, self.x.tobytes(), self.z.tobytes()))

    def __mul__(self, other):
        return multiply(self, other)


def anticommutes(a: PauliOperator, b: PauliOperator) -> bool:
    """Parity of the symplectic product; True means {a, b} = 0."""
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"operators on {a.n_qubits} vs {b.n_qubits} qubits")
    return bool(K._anticommutes_rows(a.x, a.z, b.x, b.z, len(a.x)))


def phase_exponent(a: PauliOperator, b: PauliOperator) -> int:
    """Exponent e in a.b = sign_a sign_b i^e (base masks XORed), mod 4."""
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"operators on {a.n_qubits} vs {b.n_qubits} qubits")
    return int(K._phase4(a.x, a.z, b.x, b.z, len(a.x)))


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Pauli product with sign tracking.

    Raises ImaginaryPhaseError when the result is anti-Hermitian
    (exactly when a and b anticommute); the protocol never needs such
    a product, so it surfaces as its own status rather than a sign.
    """
    e = phase_exponent(a, b)
    if e & 1:
        raise ImaginaryPhaseError(f"product phase is {'+'if e == 1 else '-'}i")
    sign = a.sign * b.sign * (1 if e == 0 else -1)
    return PauliOperator(a.n_qubits, a.x ^ b.x, a.z ^ b.z, sign)


class BitMatrix:
    """Packed GF(2) matrix: data[r, w] holds bits 64w .. 64w+63 of row r."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        self.rows = rows
        self.cols = cols
        w = K.n_words(cols) if cols else 1
        if data is None:
            data = np.zeros((rows, w), np.uint64)
        if data.shape != (rows, w):
            raise DimensionError(f"data shape {data.shape} for {rows}x{cols}")
        self.data = np.ascontiguousarray(data, dtype=np.uint64)

    @classmethod
    def from_dense(cls, a) -> "BitMatrix":
        a = np.asarray(a, dtype=np.uint8) & 1
        rows, cols = a.shape
        m = cls(rows, cols)
        for r in range(rows):
            for c in np.nonzero(a[r])[0]:
                m.set(r, int(c), 1)
        return m

    def get(self, r: int, c: int) -> int:
        return int(self.data[r, c >> 6] >> np.uint64(c & 63)) & 1

    def set(self, r: int, c: int, v: int):
        m = np.uint64(1) << np.uint64(c & 63)
        if v:
            self.data[r, c >> 6] |= m
        else:
            self.data[r, c >> 6] &= ~m

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), np.uint8)
        for r in range(self.rows):
            for c in range(self.cols):
                out[r, c] = self.get(r, c)
        return out

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.data.copy())


def rank(m: BitMatrix) -> int:
    """GF(2) rank by in-place elimination on a scratch copy."""
    scratch = m.data.copy()
    bounds = np.empty(0, np.int64)
    ranks = np.empty(0, np.int64)
    return int(K.rank_profile(scratch, m.rows, m.cols, bounds, ranks))


def in_span(m: BitMatrix, v: np.ndarray | BitMatrix) -> tuple[bool, list[int]]:
    """Whether v is a GF(2) combination of m's rows; on success the
    second element lists the row indices whose XOR reproduces v."""
    if isinstance(v, BitMatrix):
        if v.rows != 1 or v.cols != m.cols:
            raise DimensionError(f"vector shape {v.rows}x{v.cols} vs {m.cols} columns")
        vec = v.data[0].copy()
    else:
        vec = np.asarray(v, dtype=np.uint64).copy()
        if vec.shape != (m.data.shape[1],):
            raise DimensionError(f"vector of {vec.shape} words, expected {m.data.shape[1]}")
    work = m.data.copy()
    combo = [1 << r for r in range(m.rows)]  # row-origin tracking
    vcombo = 0
    r = 0
    for c in range(m.cols):
        w, b = c >> 6, np.uint64(c & 63)
        mask = np.uint64(1) << b
        piv = -1
        for i in range(r, m.rows):
            if work[i, w] & mask:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            work[[r, piv]] = work[[piv, r]]
            combo[r], combo[piv] = combo[piv], combo[r]
        for i in range(m.rows):
            if i != r and work[i, w] & mask:
                work[i] ^= work[r]
                combo[i] ^= combo[r]
        if vec[w] & mask:
            vec ^= work[r]
            vcombo ^= combo[r]
        r += 1
    if np.any(vec):
        return False, []
    return True, [i for i in range(m.rows) if (vcombo >> i) & 1]
