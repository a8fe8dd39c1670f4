import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GOLDEN, brute_longest_power
from ppath.exact import (
    BudgetExceededError,
    InvalidLabelError,
    PowerPath,
    SolveBudget,
    greedy_power_path,
    hamiltonian_path_insertion,
    longest_power_path_exact,
    pp_value,
    verify_power_path,
)
from ppath.tournament import (
    VertexSet,
    induced,
    random_tournament,
    rotational,
    transitive,
)


class TestVerify:
    def test_transitive_full_sequence(self):
        ok, v = verify_power_path(transitive(5), PowerPath(2, (0, 1, 2, 3, 4)))
        assert ok and v is None

    def test_triangle_violation_position(self):
        ok, v = verify_power_path(rotational(3, {1}), PowerPath(2, (0, 1, 2)))
        assert not ok and v == (0, 2)

    def test_single_vertex_vacuous(self):
        for k in (1, 5):
            ok, _ = verify_power_path(random_tournament(6, 1), PowerPath(k, (3,)))
            assert ok

    def test_empty_vacuous(self):
        assert verify_power_path(transitive(3), PowerPath(2, ()))[0]

    def test_duplicate_reported_first(self):
        ok, v = verify_power_path(transitive(5), PowerPath(2, (0, 1, 0)))
        assert not ok and v == (0, 2)

    def test_label_out_of_range(self):
        with pytest.raises(InvalidLabelError):
            verify_power_path(transitive(3), PowerPath(2, (0, 7)))


class TestExactSolver:
    def test_transitive_is_full_for_every_k(self):
        for n in (1, 4, 9, 12):
            for k in (1, 2, 3):
                res = longest_power_path_exact(transitive(n), k)
                assert res.optimal and len(res.path) == n

    def test_triangle_square_is_two(self):
        t = rotational(3, {1})
        res = longest_power_path_exact(t, 2)
        assert res.optimal and len(res.path) == 2
        assert brute_longest_power(t, 2) == 2

    def test_agrees_with_brute_enumeration(self):
        for seed in range(12):
            n = 4 + seed % 4  # 4..7
            t = random_tournament(n, seed)
            for k in (1, 2, 3):
                res = longest_power_path_exact(t, k)
                assert res.optimal
                assert len(res.path) == brute_longest_power(t, k), (n, seed, k)
                assert verify_power_path(t, res.path)[0]

    def test_lexicographic_witness_is_stable(self):
        t = rotational(3, {1})
        res = longest_power_path_exact(t, 2)
        assert res.path.vertices == (0, 1)

    def test_budget_exhaustion_returns_flagged_lower_bound(self):
        t = random_tournament(14, 5)
        full = longest_power_path_exact(t, 2)
        capped = longest_power_path_exact(t, 2, SolveBudget(max_states=200))
        assert not capped.optimal
        assert verify_power_path(t, capped.path)[0]
        assert len(capped.path) <= len(full.path)

    def test_wall_clock_budget_accepted(self):
        res = longest_power_path_exact(
            random_tournament(10, 1), 2, SolveBudget(max_states=10**6, max_millis=60_000)
        )
        assert res.optimal


class TestGreedy:
    def test_transitive_never_stalls(self):
        assert len(greedy_power_path(transitive(10), 2, seed=0)) == 10

    def test_single_vertex(self):
        assert len(greedy_power_path(transitive(1), 2, seed=0)) == 1

    def test_never_beats_exact_500_random(self):
        for seed in range(500):
            t = random_tournament(12, seed)
            g = greedy_power_path(t, 2, seed=seed)
            assert verify_power_path(t, g)[0]
            res = longest_power_path_exact(t, 2)
            assert len(g) <= len(res.path), seed

    def test_deterministic_per_seed(self):
        t = random_tournament(20, 9)
        assert greedy_power_path(t, 2, seed=4) == greedy_power_path(t, 2, seed=4)


class TestPpValue:
    def test_transitive(self):
        assert pp_value(transitive(7)) == 7

    def test_triangle(self):
        assert pp_value(rotational(3, {1})) == 2

    def test_quadratic_residue_regression(self):
        golden = json.loads((GOLDEN / "regression_constants.json").read_text())
        assert pp_value(rotational(7, {1, 2, 4})) == golden["pp_rotational7_qr"]

    def test_budget_propagates_with_work(self):
        t = random_tournament(14, 2)
        with pytest.raises(BudgetExceededError) as info:
            pp_value(t, SolveBudget(max_states=100))
        assert verify_power_path(t, info.value.result.path)[0]


class TestStructuralInvariants:
    @given(st.integers(min_value=2, max_value=10), st.integers(min_value=0, max_value=2**32))
    @settings(max_examples=25, deadline=None)
    def test_monotone_under_induced(self, n, seed):
        t = random_tournament(n, seed)
        full = len(longest_power_path_exact(t, 2).path)
        members = [v for v in range(n) if (seed >> v) & 1] or [0]
        sub, _ = induced(t, VertexSet.from_iterable(members, n))
        assert len(longest_power_path_exact(sub, 2).path) <= full

    @given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=2**32))
    @settings(max_examples=25, deadline=None)
    def test_reversal_preserves_length(self, n, seed):
        t = random_tournament(n, seed)
        assert (
            len(longest_power_path_exact(t, 2).path)
            == len(longest_power_path_exact(t.reverse(), 2).path)
        )

    @given(st.integers(min_value=1, max_value=10), st.integers(min_value=0, max_value=2**32))
    @settings(max_examples=25, deadline=None)
    def test_k_monotonicity(self, n, seed):
        t = random_tournament(n, seed)
        lens = [len(longest_power_path_exact(t, k).path) for k in (1, 2, 3)]
        assert lens[0] >= lens[1] >= lens[2]

    def test_hamiltonian_law_exhaustive_n4(self):
        pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
        from ppath.tournament import Tournament

        for code in range(1 << 6):
            rows = [0] * 4
            for p, (i, j) in enumerate(pairs):
                if (code >> p) & 1:
                    rows[i] |= 1 << j
                else:
                    rows[j] |= 1 << i
            t = Tournament.from_rows(rows)
            assert len(longest_power_path_exact(t, 1).path) == 4

    def test_hamiltonian_law_sampled_n16(self):
        for seed in range(25):
            t = random_tournament(16, seed)
            h = hamiltonian_path_insertion(t)
            assert len(h) == 16 and verify_power_path(t, h)[0]


class TestInsertion:
    @given(st.integers(min_value=1, max_value=40), st.integers(min_value=0, max_value=2**32))
    @settings(max_examples=40, deadline=None)
    def test_always_spans_all_vertices(self, n, seed):
        t = random_tournament(n, seed)
        h = hamiltonian_path_insertion(t)
        assert len(h) == n
        assert verify_power_path(t, h)[0]


class TestHigherOrders:
    def test_agrees_with_brute_for_k4_and_beyond(self):
        for seed in range(8):
            n = 5 + seed % 2
            t = random_tournament(n, seed)
            for k in (4, n, n + 2):
                res = longest_power_path_exact(t, k)
                assert res.optimal
                assert len(res.path) == brute_longest_power(t, k), (n, seed, k)

    def test_k_at_least_n_finds_largest_transitive_subset(self):
        # With k >= n-1 a valid sequence is exactly a transitively ordered
        # subset, so the answer matches a direct subset scan.
        from itertools import combinations

        t = random_tournament(7, 3)
        best = 1
        for size in range(2, 8):
            for subset in combinations(range(7), size):
                order = sorted(subset, key=lambda v: -(t.rows[v] & sum(1 << u for u in subset)).bit_count())
                ok = all(t.has_edge(order[i], order[j])
                         for i in range(len(order)) for j in range(i + 1, len(order)))
                if ok:
                    best = max(best, size)
        res = longest_power_path_exact(t, 7)
        assert res.optimal and len(res.path) == best
