"""
Code search and scheme sweep tests
"""
from itertools import combinations

import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st

from netdecode.core.exceptions import InstanceTooLargeError, ValidationError
from netdecode.models.builders import build_diamond
from netdecode.models.channel import Alphabet, hamming_ball_channel
from netdecode.services.adversary import AdversaryModel, ChangeSemantics, Regime, default_edges
from netdecode.services.search import (
    candidate_words,
    max_channel_code,
    max_independent_set,
    max_unambiguous,
    sweep_schemes,
)
from netdecode.services.transfer import is_unambiguous


def rows_from_edges(count, edges):
    rows = [0] * count
    for i, j in edges:
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return rows


def brute_force(count, edges):
    conflict = set(edges) | {(j, i) for i, j in edges}
    for size in range(count, 0, -1):
        for subset in combinations(range(count), size):
            if not any((i, j) in conflict for i, j in combinations(subset, 2)):
                return size
    return 0


@st.composite
def conflict_graphs(draw):
    count = draw(st.integers(min_value=1, max_value=9))
    pairs = list(combinations(range(count), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return count, edges


class TestIndependentSet:
    """Test the branch and bound search."""

    def test_path(self):
        """Test a path of three vertices."""
        chosen, timed_out, nodes = max_independent_set(rows_from_edges(3, [(0, 1), (1, 2)]))
        assert chosen == [0, 2]
        assert not timed_out
        assert nodes >= 1

    def test_empty(self):
        """Test an empty graph."""
        assert max_independent_set([]) == ([], False, 0)

    def test_floor(self):
        """Test that sets not larger than the floor are not reported."""
        chosen, _, _ = max_independent_set(rows_from_edges(3, [(0, 1), (1, 2)]), floor=2)
        assert chosen == []

    def test_stop_at(self):
        """Test early stop once the target size is reached."""
        chosen, interrupted, _ = max_independent_set([0] * 6, stop_at=3)
        assert len(chosen) >= 3
        assert interrupted

    def test_unreached_stop_is_exact(self):
        """Test that an unreached stop size leaves the search exact."""
        chosen, interrupted, _ = max_independent_set(rows_from_edges(3, [(0, 1), (1, 2)]), stop_at=3)
        assert chosen == [0, 2]
        assert not interrupted

    @given(conflict_graphs())
    @hyp_settings(max_examples=60, deadline=None)
    def test_matches_brute_force(self, graph):
        """Test optimality and independence on random graphs."""
        count, edges = graph
        chosen, _, _ = max_independent_set(rows_from_edges(count, edges))
        assert len(chosen) == brute_force(count, edges)
        assert not any((i, j) in edges or (j, i) in edges for i, j in combinations(chosen, 2))


class TestCandidates:
    """Test candidate restrictions."""

    def test_modes(self, make_diamond_query):
        """Test the three candidate modes."""
        query = make_diamond_query()
        assert len(candidate_words(query)) == 27
        assert len(candidate_words(query, "no_star")) == 8
        assert candidate_words(query, "repetition") == [(0, 0, 0), (1, 1, 1), (2, 2, 2)]
        with pytest.raises(ValidationError):
            candidate_words(query, "odd")

    def test_repetition_needs_source_edges(self, make_diamond_query):
        """Test that repetition candidates need out(S) as from-set."""
        query = make_diamond_query(from_edges=(0, 4), to_edges=(3, 4))
        with pytest.raises(ValidationError):
            candidate_words(query, "repetition")


class TestMaxUnambiguous:
    """Test exact maximum code sizes for fixed network codes."""

    @pytest.mark.parametrize("q", [2, 3, 4])
    def test_diamond_one_shot(self, make_diamond_query, q):
        """Test q - 1 on the one-shot Diamond."""
        query = make_diamond_query(q=q)
        result = max_unambiguous(query)
        assert result.size == q - 1
        assert not result.lower_bound
        assert is_unambiguous(result.code, query)

    @pytest.mark.parametrize("q", [2, 3])
    def test_mirrored_one_shot(self, make_two_level_query, q):
        """Test q on the one-shot Mirrored Diamond."""
        assert max_unambiguous(make_two_level_query(q=q)).size == q

    def test_mirrored_static(self, make_two_level_query):
        """Test q^i on the Mirrored Diamond for both change semantics."""
        for change in (ChangeSemantics.MUST, ChangeSemantics.MAY):
            query = make_two_level_query(q=2, shots=2, regime=Regime.STATIC, change=change)
            assert max_unambiguous(query).size == 4

    @pytest.mark.slow
    def test_diamond_static(self, make_diamond_query, static_must):
        """Test q^i - 1 against a static must-change adversary."""
        query = make_diamond_query(shots=2, **static_must)
        assert max_unambiguous(query, workers=2).size == 8

    @pytest.mark.slow
    def test_diamond_adaptive(self, make_diamond_query):
        """Test (q-1)^i against an adaptive adversary."""
        query = make_diamond_query(shots=2, regime=Regime.ADAPTIVE)
        assert max_unambiguous(query).size == 4

    def test_stop_at(self, make_diamond_query):
        """Test early stop at a target size."""
        result = max_unambiguous(make_diamond_query(q=4), stop_at=2)
        assert result.size >= 2
        assert result.lower_bound

    def test_stronger_adversary_never_helps(self, make_diamond_query, static_must):
        """Test that sizes shrink from static must-change to adaptive."""
        must = max_unambiguous(make_diamond_query(q=2, shots=2, **static_must)).size
        may = max_unambiguous(make_diamond_query(q=2, shots=2, regime=Regime.STATIC, change=ChangeSemantics.MAY)).size
        adaptive = max_unambiguous(make_diamond_query(q=2, shots=2, regime=Regime.ADAPTIVE)).size
        assert must >= may >= adaptive >= 1

    def test_restricted_candidates(self, make_diamond_query):
        """Test search over explicit candidates."""
        query = make_diamond_query()
        result = max_unambiguous(query, candidates=[(2, 2, 2), (0, 0, 0)])
        assert result.size == 1
        with pytest.raises(ValidationError):
            max_unambiguous(query, candidates=[])

    def test_candidate_guard(self, make_diamond_query, monkeypatch):
        """Test the candidate count guard."""
        from netdecode.core import config

        monkeypatch.setattr(config.settings, "max_candidates", 10)
        with pytest.raises(InstanceTooLargeError):
            max_unambiguous(make_diamond_query())


class TestChannelCode:
    """Test searches on bare channels."""

    def test_hamming(self):
        """Test the binary repetition code for one error in three symbols."""
        result = max_channel_code(hamming_ball_channel(Alphabet(2), 3, 1))
        assert result.size == 2


class TestSweep:
    """Test exhaustive network code sweeps."""

    def _model(self, network, regime=Regime.ONE_SHOT):
        return AdversaryModel(default_edges(network), 1, regime)

    def test_diamond_q2(self):
        """Test that no network code beats q - 1 on the one-shot Diamond."""
        network = build_diamond()
        result = sweep_schemes(network, Alphabet(2), self._model(network))
        assert result.size == 1
        assert result.schemes_total == 64
        assert result.schemes_visited == 64
        # Ties go to the lowest index
        assert result.scheme_index == 0
        assert not result.lower_bound

    def test_seed_does_not_change_result(self):
        """Test that the visiting order leaves the result unchanged."""
        network = build_diamond()
        first = sweep_schemes(network, Alphabet(2), self._model(network), seed=0)
        second = sweep_schemes(network, Alphabet(2), self._model(network), seed=7)
        assert (first.size, first.scheme_index, first.code) == (second.size, second.scheme_index, second.code)

    def test_target(self):
        """Test early stop once the target is reached."""
        network = build_diamond()
        result = sweep_schemes(network, Alphabet(2), self._model(network), target=1)
        assert result.size == 1
        assert result.schemes_visited == 1
        assert result.scheme_index == 0
        assert result.lower_bound

    def test_target_keeps_lowest_index(self):
        """Test that a target stop reports the same scheme for every seed."""
        network = build_diamond()
        results = [
            sweep_schemes(network, Alphabet(2), self._model(network), target=1, seed=seed) for seed in (0, 3, 7)
        ]
        assert {r.scheme_index for r in results} == {0}
        assert {r.code for r in results} == {results[0].code}
        assert all(r.lower_bound for r in results)

    def test_general_evaluator(self):
        """Test a sweep where attacked edges lie past the source."""
        network = build_diamond()
        model = AdversaryModel((3, 4), 1, Regime.ONE_SHOT)
        result = sweep_schemes(network, Alphabet(2), model)
        assert result.schemes_visited == 64
        assert result.size >= 1

    def test_guard(self, monkeypatch):
        """Test the scheme count guard."""
        from netdecode.core import config

        monkeypatch.setattr(config.settings, "max_scheme_tables", 10)
        network = build_diamond()
        with pytest.raises(InstanceTooLargeError):
            sweep_schemes(network, Alphabet(2), self._model(network))

    @pytest.mark.slow
    def test_diamond_q3(self):
        """Test the q = 3 converse over all 531441 network codes."""
        network = build_diamond()
        result = sweep_schemes(network, Alphabet(3), self._model(network))
        assert result.size == 2
