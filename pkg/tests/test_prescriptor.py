import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rheakit import (
    BehaviorTable,
    DomainConfig,
    InputDomainError,
    NeuralPrescriptor,
    OutcomePair,
    Rule,
    RuleSetPrescriptor,
    behavior_table,
    distill_to_nn,
    distill_to_rules,
    evaluate,
    gather_experts,
)
from rheakit.prescriptor import behavior_signature

tables = st.builds(
    lambda bits: BehaviorTable(np.array(bits, dtype=np.uint8).reshape(7, 10)),
    st.lists(st.integers(0, 1), min_size=70, max_size=70),
)


class TestRules:
    def test_empty_context_set_rejected(self):
        with pytest.raises(InputDomainError):
            Rule(frozenset(), frozenset({1}))

    def test_first_match_wins(self):
        stacked = RuleSetPrescriptor(
            (Rule({0}, {0}), Rule({0}, {1}))
        )
        assert stacked.apply(0) == {0}

    def test_unmatched_context_gets_empty_action(self, experts):
        assert experts[0].apply(2) == frozenset()

    def test_specialist_action(self, experts):
        assert experts[0].apply(0) == {0, 1}

    def test_json_round_trip(self, experts):
        for expert in experts:
            assert RuleSetPrescriptor.from_json(expert.to_json()) == expert

    def test_json_malformed(self):
        with pytest.raises(InputDomainError):
            RuleSetPrescriptor.from_json('[{"contexts": [0]}]')


class TestNeural:
    def test_distilled_specialist_hits_its_context(self, domain, experts):
        net = distill_to_nn(behavior_table(experts[0], domain))
        assert net.apply(0) == {0, 1}

    def test_distilled_specialist_silent_elsewhere(self, domain, experts):
        net = distill_to_nn(behavior_table(experts[0], domain))
        assert net.apply(1) == frozenset()

    def test_distilled_generalist(self, domain, experts):
        net = distill_to_nn(behavior_table(experts[2], domain))
        assert net.apply(5) == {6, 7, 8, 9}

    def test_expected_edge_sets(self, domain, experts):
        net = distill_to_nn(behavior_table(experts[1], domain))
        assert net.hidden_count == 1
        assert net.in_edges == {(1, 0)}
        assert net.out_edges == {(0, 2), (0, 3), (0, 4)}

    def test_generalist_edge_counts(self, domain, experts):
        net = distill_to_nn(behavior_table(experts[2], domain))
        assert net.hidden_count == 1
        assert len(net.in_edges) == 7
        assert len(net.out_edges) == 4

    def test_bad_edge_rejected(self):
        with pytest.raises(InputDomainError):
            NeuralPrescriptor(1, frozenset({(0, 3)}), frozenset())


class TestBehaviorTable:
    def test_specialist_grid(self, domain, experts):
        table = behavior_table(experts[0], domain)
        expected = np.zeros((7, 10), dtype=np.uint8)
        expected[0, [0, 1]] = 1
        assert (table.grid == expected).all()

    def test_empty_prescriptor_grid(self, domain):
        table = behavior_table(lambda c: frozenset(), domain)
        assert table.grid.sum() == 0

    def test_generalist_grid(self, domain, experts):
        table = behavior_table(experts[2], domain)
        assert (table.grid[:, 6:10] == 1).all()
        assert table.grid.sum() == 28

    def test_non_binary_rejected(self):
        with pytest.raises(InputDomainError):
            BehaviorTable(np.full((7, 10), 2))


class TestDistillation:
    def test_specialist_rules(self, domain, experts):
        table = behavior_table(experts[0], domain)
        assert distill_to_rules(table) == experts[0]

    def test_all_zero_table_distills_to_no_rules(self, domain):
        table = behavior_table(lambda c: frozenset(), domain)
        assert distill_to_rules(table) == RuleSetPrescriptor(())

    def test_generalist_rules(self, domain, experts):
        table = behavior_table(experts[2], domain)
        assert distill_to_rules(table) == experts[2]

    def test_all_zero_table_distills_to_empty_net(self, domain):
        table = behavior_table(lambda c: frozenset(), domain)
        assert distill_to_nn(table).hidden_count == 0

    @given(table=tables)
    @settings(max_examples=150)
    def test_round_trip_and_equivalence(self, table):
        domain = DomainConfig()
        rules = distill_to_rules(table)
        net = distill_to_nn(table)
        for context in range(domain.m):
            row = table.row_action(context)
            assert rules.apply(context) == row
            assert net.apply(context) == row

    @given(table=tables)
    @settings(max_examples=60)
    def test_distilled_rules_have_disjoint_contexts(self, table):
        rules = distill_to_rules(table).rules
        seen: set[int] = set()
        for rule in rules:
            assert not (rule.contexts & seen)
            seen |= rule.contexts


class TestGatherExperts:
    def test_specialist_two(self, experts):
        assert experts[1] == RuleSetPrescriptor((Rule({1}, {2, 3, 4}),))

    def test_expert_outcomes(self, domain, experts):
        outcomes = [evaluate(e, domain) for e in experts]
        assert outcomes == [OutcomePair(1, 2), OutcomePair(1, 3), OutcomePair(7, 28)]

    def test_round_trip_via_behavior(self, domain, experts):
        for expert in experts:
            reconstructed = distill_to_rules(behavior_table(expert, domain))
            assert behavior_signature(reconstructed, domain) == behavior_signature(expert, domain)
