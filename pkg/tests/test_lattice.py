import numpy as np
import pytest

from spincharge import (
    EdgeListParseError,
    LatticeError,
    SpinLattice,
    connectivity_ratio,
    from_edge_list,
    ring,
    serialize,
    torus,
)


class TestRing:
    def test_ring4_edges(self):
        lat = ring(4)
        assert set(lat.edges) == {(0, 1), (1, 2), (2, 3), (0, 3)}
        assert lat.n_couplings == 4

    def test_ring2_deduplicates_wrap_edge(self):
        lat = ring(2)
        assert lat.edges == ((0, 1),)
        assert lat.n_couplings == 1

    def test_ring6_degree_two(self):
        lat = ring(6)
        assert lat.n_couplings == 6
        assert all(lat.degree(v) == 2 for v in range(6))

    @pytest.mark.parametrize("n", range(3, 14))
    def test_ring_degree_and_count(self, n):
        lat = ring(n)
        assert lat.n_couplings == n
        assert all(lat.degree(v) == 2 for v in range(n))

    def test_too_small(self):
        with pytest.raises(LatticeError):
            ring(1)


def brute_force_torus_edges(rows, cols):
    # independent enumeration: every vertex pairs with its 4 wrap neighbours
    edges = set()
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            for dr, dc in ((0, 1), (0, -1), (1, 0), (-1, 0)):
                w = ((r + dr) % rows) * cols + (c + dc) % cols
                if w != v:
                    edges.add((min(v, w), max(v, w)))
    return edges


class TestTorus:
    def test_torus33(self):
        lat = torus(3, 3)
        assert lat.n_spins == 9
        assert lat.n_couplings == 18
        assert set(lat.edges) == brute_force_torus_edges(3, 3)

    def test_torus22_deduplicated(self):
        lat = torus(2, 2)
        assert lat.n_spins == 4
        assert lat.n_couplings == 4
        assert set(lat.edges) == brute_force_torus_edges(2, 2)

    def test_torus34(self):
        lat = torus(3, 4)
        assert lat.n_spins == 12
        assert lat.n_couplings == 2 * 3 * 4

    @pytest.mark.parametrize("rows,cols", [(3, 3), (3, 4), (4, 3), (5, 5)])
    def test_degree_four(self, rows, cols):
        lat = torus(rows, cols)
        assert lat.n_couplings == 2 * rows * cols
        assert all(lat.degree(v) == 4 for v in range(rows * cols))

    def test_degenerate_dimension_is_ring(self):
        assert set(torus(1, 5).edges) == set(ring(5).edges)

    def test_zero_dimension(self):
        with pytest.raises(LatticeError):
            torus(0, 3)


class TestEdgeList:
    def test_path_graph(self):
        lat = from_edge_list("N 3\n0 1\n1 2\n")
        assert lat.n_spins == 3
        assert lat.edges == ((0, 1), (1, 2))

    def test_self_loop_reports_line(self):
        with pytest.raises(EdgeListParseError) as err:
            from_edge_list("N 3\n0 1\n2 2\n")
        assert err.value.line_no == 3

    def test_reversed_duplicate_normalized(self):
        lat = from_edge_list("N 2\n0 1\n1 0\n")
        assert lat.edges == ((0, 1),)

    def test_comments_and_blank_lines(self):
        lat = from_edge_list("# a comment\n\nN 2\n# another\n0 1\n")
        assert lat.edges == ((0, 1),)

    def test_out_of_range(self):
        with pytest.raises(EdgeListParseError):
            from_edge_list("N 2\n0 5\n")

    def test_missing_header(self):
        with pytest.raises(EdgeListParseError):
            from_edge_list("0 1\n")

    def test_malformed_line(self):
        with pytest.raises(EdgeListParseError) as err:
            from_edge_list("N 3\n0 1 2\n")
        assert err.value.line_no == 2

    @pytest.mark.parametrize("lat", [ring(2), ring(7), torus(2, 3), torus(4, 4)])
    def test_serialize_roundtrip(self, lat):
        again = from_edge_list(serialize(lat), label=lat.label)
        assert again == lat

    def test_roundtrip_random_graphs(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(2, 12))
            pairs = {
                tuple(sorted(rng.choice(n, size=2, replace=False)))
                for _ in range(rng.integers(1, 2 * n))
            }
            lat = SpinLattice(n, tuple(sorted(pairs)))
            again = from_edge_list(serialize(lat))
            assert (again.n_spins, again.edges) == (lat.n_spins, lat.edges)


class TestConnectivityRatio:
    def test_ring(self):
        assert connectivity_ratio(ring(6)) == 1.0

    def test_torus(self):
        assert connectivity_ratio(torus(3, 3)) == 2.0

    def test_dense_graph_ratio_about_seven(self):
        # Pegasus-like connectivity: n_C / N around 7
        n = 16
        rng = np.random.default_rng(3)
        pairs = set()
        while len(pairs) < 7 * n:
            j, k = rng.choice(n, size=2, replace=False)
            pairs.add((min(j, k), max(j, k)))
        lat = SpinLattice(n, tuple(sorted(pairs)))
        assert connectivity_ratio(lat) == pytest.approx(7.0)


class TestInvariants:
    def test_rejects_self_loop(self):
        with pytest.raises(LatticeError):
            SpinLattice(3, ((1, 1),))

    def test_rejects_out_of_range(self):
        with pytest.raises(LatticeError):
            SpinLattice(3, ((0, 3),))

    def test_rejects_unordered(self):
        with pytest.raises(LatticeError):
            SpinLattice(3, ((2, 1),))
