"""Honeycomb lattice on an L x L torus of two-site unit cells.

Site indexing: cell (i, j) with 0 <= i, j < L holds sublattice sites
A = 2*(i*L + j) and B = A + 1, so n_sites = 2 L^2. Directions wrap
periodically in both i and j.

Bond checks (two-body):
    z-bond  A(i, j) -- B(i, j)        measured as Z Z
    x-bond  B(i, j) -- A(i+1, j)      measured as X X
    y-bond  B(i, j) -- A(i, j+1)      measured as Y Y

Each hexagonal plaquette (i, j) is the ordered site walk

    [A(i,j), B(i,j), A(i,j+1), B(i-1,j+1), A(i-1,j+1), B(i-1,j)]

whose opposite-edge pairs (sites 1,2), (3,4), (5,6) are a z-, x- and
y-bond respectively. Two commuting six-body operators live on it:

    W = Y X Z Y X Z   (conserved flux; commutes with every bond check)
    V = Z Z X X Y Y   (plaquette interaction; anticommutes with the six
                       bond checks crossing the hexagon's boundary)

The product of all W over the torus is the identity, so only L^2 - 1
of them are independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliOperator

W_LETTERS = "YXZYXZ"
V_LETTERS = "ZZXXYY"

BOND_LETTER = {"x": "X", "y": "Y", "z": "Z"}


def _site(L: int, i: int, j: int, s: int) -> int:
    return 2 * ((i % L) * L + (j % L)) + s


@dataclass(frozen=True)
class Lattice:
    """Geometry, measurement operators, and standard entropy regions."""

    L: int
    n_sites: int = field(init=False)

    def __post_init__(self):
        if self.L < 2:
            raise ValueError("torus needs L >= 2")
        object.__setattr__(self, "n_sites", 2 * self.L * self.L)

    # -- geometry -------------------------------------------------------------

    def site(self, i: int, j: int, s: int) -> int:
        if s not in (0, 1):
            raise ValueError("sublattice must be 0 (A) or 1 (B)")
        return _site(self.L, i, j, s)

    def cell_of(self, site: int) -> tuple[int, int, int]:
        c, s = divmod(site, 2)
        i, j = divmod(c, self.L)
        return i, j, s

    def bond_sites(self, kind: str, i: int, j: int) -> tuple[int, int]:
        L = self.L
        if kind == "z":
            return _site(L, i, j, 0), _site(L, i, j, 1)
        if kind == "x":
            return _site(L, i, j, 1), _site(L, i + 1, j, 0)
        if kind == "y":
            return _site(L, i, j, 1), _site(L, i, j + 1, 0)
        raise ValueError(f"bond kind must be x, y or z, not {kind!r}")

    def plaquette_sites(self, i: int, j: int) -> list[int]:
        L = self.L
        return [_site(L, i, j, 0), _site(L, i, j, 1),
                _site(L, i, j + 1, 0), _site(L, i - 1, j + 1, 1),
                _site(L, i - 1, j + 1, 0), _site(L, i - 1, j, 1)]

    # -- operators -------------------------------------------------------------

    def bond_check(self, kind: str, i: int, j: int) -> PauliOperator:
        a, b = self.bond_sites(kind, i, j)
        let = BOND_LETTER[kind]
        return PauliOperator.from_support(self.n_sites, [a, b], let + let)

    def plaquette_W(self, i: int, j: int) -> PauliOperator:
        return PauliOperator.from_support(self.n_sites, self.plaquette_sites(i, j),
                                          W_LETTERS)

    def plaquette_V(self, i: int, j: int) -> PauliOperator:
        return PauliOperator.from_support(self.n_sites, self.plaquette_sites(i, j),
                                          V_LETTERS)

    def all_bond_checks(self, kind: str) -> list[PauliOperator]:
        return [self.bond_check(kind, i, j)
                for i in range(self.L) for j in range(self.L)]

    def all_plaquette_W(self) -> list[PauliOperator]:
        return [self.plaquette_W(i, j)
                for i in range(self.L) for j in range(self.L)]

    def all_plaquette_V(self) -> list[PauliOperator]:
        return [self.plaquette_V(i, j)
                for i in range(self.L) for j in range(self.L)]

    # -- regions ----------------------------------------------------------------

    def cylinder_region(self, length: int) -> list[int]:
        """All sites of the first `length` columns of cells (prefix in i)."""
        if not 0 <= length <= self.L:
            raise ValueError("cylinder length must lie in [0, L]")
        return list(range(2 * self.L * length))

    def tmi_regions(self) -> tuple[list[int], list[int], list[int], list[int]]:
        """Four adjacent cylindrical quarters A, B, C, D covering the torus."""
        if self.L % 4:
            raise ValueError("tripartite mutual information needs 4 | L")
        q = self.L // 4
        cols = 2 * self.L
        return tuple(list(range(cols * q * m, cols * q * (m + 1)))
                     for m in range(4))

    def tee_regions(self) -> tuple[list[int], list[int], list[int]]:
        """Three sectors of a disk of diameter ~L/2, for the
        topological-entropy combination S_A+S_B+S_C - S_AB-S_BC-S_AC + S_ABC."""
        L = self.L
        r = L // 4
        c = (L - 1) / 2.0
        sectors: tuple[list[int], list[int], list[int]] = ([], [], [])
        for i in range(L):
            for j in range(L):
                if (i - c) ** 2 + (j - c) ** 2 <= r * r:
                    ang = np.arctan2(j - c, i - c)  # [-pi, pi)
                    s = min(int((ang + np.pi) / (2 * np.pi / 3)), 2)
                    cell = 2 * (i * L + j)
                    sectors[s].extend((cell, cell + 1))
        return sectors

    # -- structure --------------------------------------------------------------

    def frustration_graph(self, ops: list[PauliOperator]) -> list[tuple[int, int]]:
        """Edges (a, b) between anticommuting operator pairs."""
        from .pauli import anticommutes
        edges = []
        for a in range(len(ops)):
            for b in range(a + 1, len(ops)):
                if anticommutes(ops[a], ops[b]):
                    edges.append((a, b))
        return edges


def build(L: int) -> Lattice:
    return Lattice(L)
