"""
Tests for the orbit-based code searches
"""
import pytest

from core.asym_metrics import delta
from core.code_search import (build_orbit_space, max_code_search, orbit_compatibility_graph, partition_search,
                              single_part_maximum)
from core.qudit_core import QuditString, relift


@pytest.mark.parametrize("q,n", [(3, 2), (3, 3), (4, 2), (3, 4)])
def test_compatibility_matches_pairwise_delta(q, n):
    space = build_orbit_space(q, n)
    for o in range(space.size):
        orbit_o = [QuditString(tuple(int(d) for d in w), q) for w in space.words[o]]
        for p in range(o + 1, space.size):
            orbit_p = [QuditString(tuple(int(d) for d in w), q) for w in space.words[p]]
            expected = all(delta(x, y) >= 2 for x in orbit_o for y in orbit_p)
            assert bool(space.compat[o] >> p & 1) == expected


def test_orbit_representatives_start_with_zero():
    space = build_orbit_space(3, 3)
    assert all(rep[0] == 0 for rep in space.reps)
    assert space.size + space.inadmissible == 9


def test_packing_bound():
    assert build_orbit_space(3, 3).packing_bound() == 3
    assert build_orbit_space(5, 5).ball_mass == 25


def test_compatibility_graph_labels():
    graph = orbit_compatibility_graph(3, 2)
    assert set(graph.nodes) <= {"00", "01", "02"}


class TestPartition:
    def test_ternary_cosets_found(self):
        cert = partition_search(3, 2, 3, 3)
        assert cert.outcome == "found"
        assert cert.best_size == 3
        assert len(cert.codes) == 3
        codes = [relift(3, reps) for reps in cert.codes]
        assert sum(len(c) for c in codes) == 9

    def test_ternary_length3_refuted(self):
        cert = partition_search(3, 3, 3, 9)
        assert cert.outcome == "exhausted_negative"
        assert any("tight packing" in note for note in cert.notes)

    def test_size_not_multiple_of_q(self):
        assert partition_search(3, 3, 1, 4).outcome == "exhausted_negative"

    def test_length5_quarter_partitions_refuted(self):
        assert partition_search(3, 5, 3, 81).outcome == "exhausted_negative"
        assert partition_search(5, 5, 5, 625).outcome == "exhausted_negative"

    def test_quinary_length3_refuted(self):
        assert partition_search(5, 3, 5, 25).outcome == "exhausted_negative"

    @pytest.mark.parametrize("seed", [None, 1, 2, 3])
    def test_negative_outcome_independent_of_order(self, seed):
        cert = partition_search(4, 2, 2, 8, shuffle_seed=seed)
        assert cert.outcome == "exhausted_negative"

    def test_node_cap(self):
        cert = partition_search(3, 2, 3, 3, cap=1)
        assert cert.outcome == "bound_reached"
        assert cert.codes == []


class TestMaximum:
    def test_single_part_ternary_length2(self):
        size, clique = single_part_maximum(build_orbit_space(3, 2))
        assert size == len(clique) == 1

    def test_quinary_length3_five_parts(self):
        cert = max_code_search(5, 3, 5)
        assert cert.outcome == "found"
        assert cert.best_size == 20
        assert len(cert.codes) == 5

    def test_exhaustive_small(self):
        cert = max_code_search(3, 2, 3)
        assert cert.outcome == "found"
        assert cert.best_size == 3

    def test_greedy_quinary_length5_reaches_known_code(self):
        cert = max_code_search(5, 5, 1, mode="greedy", restarts=2)
        assert cert.outcome == "found"
        assert cert.best_size >= 295
        assert "lower bound only" in cert.notes

    def test_greedy_is_reproducible(self):
        a = max_code_search(3, 4, 2, mode="greedy", seed=11, restarts=4)
        b = max_code_search(3, 4, 2, mode="greedy", seed=11, restarts=4)
        assert a.codes == b.codes

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            max_code_search(3, 2, 1, mode="annealing")

    @pytest.mark.slow
    def test_ternary_length5_three_parts(self):
        cert = max_code_search(3, 5, 3)
        assert cert.outcome == "found"
        assert cert.best_size == 33
