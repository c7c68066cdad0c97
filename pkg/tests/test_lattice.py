"""Structural invariants of the honeycomb torus and its operator families.

The commutation/rank facts asserted here were established independently
with a brute-force symplectic checker before this module existed; the
expected numbers below are frozen from that run.
"""

import numpy as np
import pytest

from monikit import _kernels as K
from monikit.lattice import Lattice, build
from monikit.pauli import BitMatrix, PauliOperator, anticommutes, multiply, rank


def op_matrix(ops):
    """Symplectic (x|z) bit matrix of a list of equal-width operators."""
    rows = np.stack([np.concatenate([op.x, op.z]) for op in ops])
    return BitMatrix(len(ops), 64 * rows.shape[1], np.ascontiguousarray(rows))


class TestGeometry:
    def test_site_round_trip(self):
        lat = build(5)
        seen = set()
        for i in range(5):
            for j in range(5):
                for s in (0, 1):
                    q = lat.site(i, j, s)
                    assert lat.cell_of(q) == (i, j, s)
                    seen.add(q)
        assert seen == set(range(lat.n_sites)) and lat.n_sites == 50

    def test_wraparound(self):
        lat = build(4)
        assert lat.site(4, 0, 0) == lat.site(0, 0, 0)
        assert lat.site(-1, 2, 1) == lat.site(3, 2, 1)
        assert lat.site(1, 7, 0) == lat.site(1, 3, 0)

    def test_build_validation(self):
        with pytest.raises(ValueError):
            build(1)
        with pytest.raises(ValueError):
            Lattice(0)
        assert build(2).n_sites == 8

    def test_bond_endpoints(self):
        lat = build(3)
        assert lat.bond_sites("z", 1, 2) == (lat.site(1, 2, 0), lat.site(1, 2, 1))
        assert lat.bond_sites("x", 1, 2) == (lat.site(1, 2, 1), lat.site(2, 2, 0))
        assert lat.bond_sites("y", 1, 2) == (lat.site(1, 2, 1), lat.site(1, 3, 0))
        with pytest.raises(ValueError):
            lat.bond_sites("w", 0, 0)

    def test_each_site_has_one_bond_of_each_kind(self):
        lat = build(4)
        for kind in "xyz":
            incidence = np.zeros(lat.n_sites, int)
            for op in lat.all_bond_checks(kind):
                for q in op.support():
                    incidence[q] += 1
            assert (incidence == 1).all()

    def test_plaquette_walk_edges(self):
        lat = build(4)
        for i in range(4):
            for j in range(4):
                sites = lat.plaquette_sites(i, j)
                assert len(set(sites)) == 6
                walk = [(sites[m], sites[(m + 1) % 6]) for m in range(6)]
                all_bonds = {frozenset(lat.bond_sites(k, a, b)): k
                             for k in "xyz" for a in range(4) for b in range(4)}
                kinds = [all_bonds[frozenset(e)] for e in walk]
                # opposite-edge pairs of the hexagon carry equal bond kinds
                assert kinds[0] == kinds[3] == "z"
                assert kinds[2] == kinds[5] == "x"
                assert kinds[1] == kinds[4] == "y"

    def test_each_site_in_three_plaquettes(self):
        lat = build(5)
        count = np.zeros(lat.n_sites, int)
        for i in range(5):
            for j in range(5):
                for q in lat.plaquette_sites(i, j):
                    count[q] += 1
        assert (count == 3).all()

    def test_each_bond_borders_two_plaquettes(self):
        lat = build(4)
        border = {frozenset(lat.bond_sites(k, a, b)): 0
                  for k in "xyz" for a in range(4) for b in range(4)}
        for i in range(4):
            for j in range(4):
                s = lat.plaquette_sites(i, j)
                for m in range(6):
                    border[frozenset((s[m], s[(m + 1) % 6]))] += 1
        assert set(border.values()) == {2}


class TestOperatorAlgebra:
    @pytest.mark.parametrize("L", [3, 4])
    def test_flux_commutes_with_everything(self, L):
        lat = build(L)
        ws = lat.all_plaquette_W()
        others = (lat.all_bond_checks("x") + lat.all_bond_checks("y")
                  + lat.all_bond_checks("z") + lat.all_plaquette_V() + ws)
        for w in ws:
            for o in others:
                assert not anticommutes(w, o)

    def test_interactions_commute_with_each_other(self):
        lat = build(4)
        vs = lat.all_plaquette_V()
        for a in range(len(vs)):
            for b in range(a + 1, len(vs)):
                assert not anticommutes(vs[a], vs[b])

    @pytest.mark.parametrize("L", [3, 4])
    def test_interaction_frustrates_six_spoke_bonds(self, L):
        lat = build(L)
        bonds = (lat.all_bond_checks("x") + lat.all_bond_checks("y")
                 + lat.all_bond_checks("z"))
        for i in range(L):
            for j in range(L):
                v = lat.plaquette_V(i, j)
                hexa = set(lat.plaquette_sites(i, j))
                clashing = [b for b in bonds if anticommutes(v, b)]
                assert len(clashing) == 6
                for b in clashing:
                    assert len(hexa & set(b.support())) == 1  # spokes only

    def test_flux_letters(self):
        lat = build(3)
        w = lat.plaquette_W(0, 0)
        v = lat.plaquette_V(0, 0)
        sites = lat.plaquette_sites(0, 0)
        assert [w.letter(q) for q in sites] == list("YXZYXZ")
        assert [v.letter(q) for q in sites] == list("ZZXXYY")

    @pytest.mark.parametrize("L", [2, 3, 4])
    def test_total_flux_is_identity(self, L):
        lat = build(L)
        prod = PauliOperator.identity(lat.n_sites)
        for w in lat.all_plaquette_W():
            prod = multiply(prod, w)
        assert prod == PauliOperator.identity(lat.n_sites)

    @pytest.mark.parametrize("L,rank_w,rank_wv", [(3, 8, 14), (4, 15, 30),
                                                  (6, 35, 68)])
    def test_group_ranks(self, L, rank_w, rank_wv):
        lat = build(L)
        ws = lat.all_plaquette_W()
        assert rank(op_matrix(ws)) == rank_w == L * L - 1
        both = ws + lat.all_plaquette_V()
        assert rank(op_matrix(both)) == rank_wv
        expected = 2 * L * L - (4 if L % 3 == 0 else 2)
        assert rank_wv == expected


class TestFrustrationGraph:
    def test_bond_graph_is_four_regular(self):
        lat = build(3)
        bonds = (lat.all_bond_checks("x") + lat.all_bond_checks("y")
                 + lat.all_bond_checks("z"))
        edges = lat.frustration_graph(bonds)
        deg = np.zeros(len(bonds), int)
        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
        assert (deg == 4).all()

    def test_zbond_plus_interaction_graph_is_rings(self):
        L = 4
        lat = build(L)
        ops = lat.all_bond_checks("z") + lat.all_plaquette_V()
        edges = lat.frustration_graph(ops)
        deg = np.zeros(len(ops), int)
        parent = list(range(len(ops)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
            parent[find(a)] = find(b)
        assert (deg == 2).all()
        assert len({find(a) for a in range(len(ops))}) == L

    def test_interactions_alone_unfrustrated(self):
        lat = build(3)
        assert lat.frustration_graph(lat.all_plaquette_V()) == []


class TestRegions:
    def test_cylinder_prefixes(self):
        lat = build(6)
        assert lat.cylinder_region(0) == []
        assert lat.cylinder_region(6) == list(range(72))
        r3 = lat.cylinder_region(3)
        assert r3 == list(range(36))
        with pytest.raises(ValueError):
            lat.cylinder_region(7)
        with pytest.raises(ValueError):
            lat.cylinder_region(-1)

    def test_quarters_partition_torus(self):
        lat = build(8)
        a, b, c, d = lat.tmi_regions()
        all_sites = sorted(a + b + c + d)
        assert all_sites == list(range(lat.n_sites))
        assert len(a) == len(b) == len(c) == len(d) == lat.n_sites // 4
        # adjacency: consecutive cylindrical shells
        assert max(a) + 1 == min(b) and max(b) + 1 == min(c)

    def test_quarters_need_divisible_l(self):
        with pytest.raises(ValueError):
            build(6).tmi_regions()

    @pytest.mark.parametrize("L", [8, 12, 24])
    def test_disk_sectors(self, L):
        lat = build(L)
        a, b, c = lat.tee_regions()
        assert a and b and c
        assert not (set(a) & set(b) or set(b) & set(c) or set(a) & set(c))
        r, cc = L // 4, (L - 1) / 2.0
        for sector in (a, b, c):
            assert len(sector) % 2 == 0  # whole cells
            for q in sector:
                i, j, _ = lat.cell_of(q)
                assert (i - cc) ** 2 + (j - cc) ** 2 <= r * r
        sizes = sorted(len(s) // 2 for s in (a, b, c))
        assert sizes[-1] - sizes[0] <= max(4, L // 3)  # roughly equal thirds
        total = (len(a) + len(b) + len(c)) // 2
        assert total >= 0.6 * np.pi * r * r  # actually fills the disk
