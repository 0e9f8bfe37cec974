import json

import pytest

from capwaves import (
    ClusterGraph,
    FluidParams,
    Triad,
    build_clusters,
    clusters_to_json,
    connection_type,
    conservation_count,
    coupling_ratio_hints,
    enumerate_triads,
    export_nr_diagram,
    identification_count,
)

PAIRS_1E4 = {
    frozenset({(20, 94, 114), (24, 70, 94)}),
    frozenset({(17, 71, 88), (15, 88, 103)}),
    frozenset({(11, 83, 94), (12, 71, 83)}),
    frozenset({(10, 47, 57), (12, 35, 47)}),
}


@pytest.fixture(scope="module")
def clusters_1e3(triads_100):
    return build_clusters(triads_100, 1e-3)


def _multi_sets(clusters):
    return {frozenset(t.wavenumbers for t in c.triads) for c in clusters if c.size > 1}


class TestConnectionType:
    def test_joint_active_mode(self, triads_by_wn):
        conn = connection_type(triads_by_wn[(50, 50, 100)], triads_by_wn[(49, 51, 100)], 100)
        assert conn.kind == "AA"

    def test_active_passive(self, triads_by_wn):
        conn = connection_type(triads_by_wn[(48, 48, 96)], triads_by_wn[(28, 96, 124)], 96)
        assert conn.kind == "AP"

    def test_published_pair_is_active_passive(self, triads_by_wn):
        # 94 is the sum mode of (24,70,94) but a passive mode of (20,94,114)
        conn = connection_type(triads_by_wn[(20, 94, 114)], triads_by_wn[(24, 70, 94)], 94)
        assert conn.kind == "AP"

    def test_joint_passive_mode(self, triads_by_wn):
        conn = connection_type(triads_by_wn[(5, 9, 14)], triads_by_wn[(5, 11, 16)], 5)
        assert conn.kind == "PP"

    def test_missing_wavenumber_rejected(self, triads_by_wn):
        with pytest.raises(ValueError):
            connection_type(triads_by_wn[(5, 9, 14)], triads_by_wn[(5, 11, 16)], 9)


class TestBuildClusters:
    def test_published_table_at_1e4(self, triads_100):
        assert _multi_sets(build_clusters(triads_100, 1e-4)) == PAIRS_1E4

    def test_fine_accuracy_keeps_triads_isolated(self, triads_100):
        assert _multi_sets(build_clusters(triads_100, 1e-8)) == set()

    def test_three_star_all_active(self, clusters_1e3):
        star = {(79, 80, 159), (78, 81, 159), (77, 82, 159)}
        [cluster] = [c for c in clusters_1e3 if star <= {t.wavenumbers for t in c.triads}]
        assert {t.wavenumbers for t in cluster.triads} == star
        assert [c.kind for c in cluster.connections] == ["AA", "AA", "AA"]

    def test_four_star_connection_kinds(self, clusters_1e3):
        star = {(48, 48, 96), (47, 49, 96), (28, 96, 124), (46, 50, 96)}
        [cluster] = [c for c in clusters_1e3 if star <= {t.wavenumbers for t in c.triads}]
        assert {t.wavenumbers for t in cluster.triads} == star
        kinds = sorted(c.kind for c in cluster.connections)
        assert kinds == ["AA", "AA", "AA", "AP"]

    def test_monotone_refinement(self, triads_100):
        fine = build_clusters(triads_100, 1e-4)
        coarse_map = {}
        for i, cluster in enumerate(build_clusters(triads_100, 1e-3)):
            for t in cluster.triads:
                coarse_map[t.wavenumbers] = i
        for cluster in fine:
            owners = {coarse_map[t.wavenumbers] for t in cluster.triads}
            assert len(owners) == 1

    def test_sigma_independence(self, triads_100):
        base = _multi_sets(build_clusters(triads_100, 1e-3))
        other = enumerate_triads(100, FluidParams(7.23e-5))
        assert _multi_sets(build_clusters(other, 1e-3)) == base

    def test_spread_bound(self, clusters_1e3):
        for cluster in clusters_1e3:
            assert cluster.spread <= (cluster.size - 1) * 1e-3 + 1e-15

    def test_connection_kinds_recomputable(self, clusters_1e3):
        for cluster in clusters_1e3:
            for conn in cluster.connections:
                again = connection_type(conn.triad_a, conn.triad_b, conn.shared_k)
                assert again.kind == conn.kind

    def test_isolated_triads_reported(self, triads_100):
        clusters = build_clusters(triads_100, 1e-8)
        assert len(clusters) == len(triads_100)
        assert all(c.size == 1 and not c.connections for c in clusters)
        assert all(c.spread == 0.0 for c in clusters)

    def test_epsilon_validation(self, triads_100):
        with pytest.raises(ValueError):
            build_clusters(triads_100, 0.0)
        with pytest.raises(ValueError):
            build_clusters(triads_100, 1.0)


class TestConservationCount:
    def test_isolated_triad(self, triads_by_wn):
        [cluster] = build_clusters([triads_by_wn[(5, 9, 14)]], 1e-3)
        assert conservation_count(cluster) == 2

    def test_joint_passive_pair(self, triads_by_wn):
        [cluster] = build_clusters(
            [triads_by_wn[(5, 9, 14)], triads_by_wn[(5, 11, 16)]], 0.9
        )
        assert cluster.size == 2
        assert conservation_count(cluster) == 3

    def test_three_star_counts_identifications(self, clusters_1e3):
        star = {(79, 80, 159), (78, 81, 159), (77, 82, 159)}
        [cluster] = [c for c in clusters_1e3 if {t.wavenumbers for t in c.triads} == star]
        # one mode shared by three triads merges twice; the diagram clique
        # still shows three edges
        assert identification_count(cluster) == 2
        assert len(cluster.connections) == 3
        assert conservation_count(cluster) == 4

    def test_four_star(self, clusters_1e3):
        star = {(48, 48, 96), (47, 49, 96), (28, 96, 124), (46, 50, 96)}
        [cluster] = [c for c in clusters_1e3 if {t.wavenumbers for t in c.triads} == star]
        assert identification_count(cluster) == 3
        assert conservation_count(cluster) == 5

    def test_duplicate_connection_rejected(self, triads_by_wn):
        t1 = triads_by_wn[(5, 9, 14)]
        t2 = triads_by_wn[(5, 11, 16)]
        conn = connection_type(t1, t2, 5)
        bad = ClusterGraph(
            triads=(t1, t2),
            connections=(conn, conn),
            omega_min=t1.omega_gen,
            omega_max=t2.omega_gen,
            spread=0.1,
        )
        with pytest.raises(ValueError, match="duplicate"):
            conservation_count(bad)


class TestExport:
    def test_single_triad_diagram(self, triads_by_wn):
        [cluster] = build_clusters([triads_by_wn[(5, 9, 14)]], 1e-3)
        text = export_nr_diagram(cluster)
        assert text.count("shape=triangle") == 1
        assert "--" not in text

    def test_joint_passive_pair_diagram(self, triads_by_wn):
        [cluster] = build_clusters(
            [triads_by_wn[(5, 9, 14)], triads_by_wn[(5, 11, 16)]], 0.9
        )
        text = export_nr_diagram(cluster)
        assert text.count("shape=triangle") == 2
        assert text.count("--") == 1
        assert 'label="PP k=5"' in text

    def test_four_star_diagram(self, clusters_1e3):
        star = {(48, 48, 96), (47, 49, 96), (28, 96, 124), (46, 50, 96)}
        [cluster] = [c for c in clusters_1e3 if {t.wavenumbers for t in c.triads} == star]
        text = export_nr_diagram(cluster)
        assert text.count("shape=triangle") == 4
        assert text.count('label="AA') == 3
        assert text.count('label="AP') == 1

    def test_deterministic(self, triads_100):
        first = [export_nr_diagram(c) for c in build_clusters(triads_100, 1e-4) if c.size > 1]
        second = [export_nr_diagram(c) for c in build_clusters(triads_100, 1e-4) if c.size > 1]
        assert first == second

    def test_json_schema(self, triads_100, params_unit):
        clusters = build_clusters(triads_100, 1e-4)
        payload = clusters_to_json(clusters, 1e-4, params_unit, 100)
        assert set(payload) == {"epsilon", "sigma", "kmax", "clusters"}
        assert payload["epsilon"] == 1e-4
        assert len(payload["clusters"]) == len(clusters)
        entry = payload["clusters"][0]
        assert set(entry) == {"triads", "vorticities", "spread", "connections"}
        for conn in entry["connections"]:
            assert set(conn) == {"a", "b", "shared_k", "kind"}
            assert 0 <= conn["a"] < len(entry["triads"])
            assert 0 <= conn["b"] < len(entry["triads"])
        json.dumps(payload)  # round-trippable


def test_coupling_ratio_hints():
    # synthetic pair with a ratio exactly at a known-integrable value
    t1 = Triad(1, 2, 3, 1.0, 2.0)
    t2 = Triad(2, 5, 7, 1.0005, 1.0)
    [cluster] = build_clusters([t1, t2], 1e-2)
    assert cluster.size == 2
    hints = coupling_ratio_hints(cluster)
    assert len(hints) == 1
    assert hints[0][1] == 2.0

    t3 = Triad(2, 5, 7, 1.0005, 0.37)  # ratio far from 1, 2, 1/2
    [cluster2] = build_clusters([t1, t3], 1e-2)
    assert coupling_ratio_hints(cluster2) == []
