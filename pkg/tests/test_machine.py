import pytest
from hypothesis import given, strategies as st

from fsmkit import digits
from fsmkit.errors import ConstructionError, InvalidInputError, MachineError
from fsmkit.machine import AUTOMATON, Machine, State, Transition, build_machine
from fsmkit.symbols import Digit, word

from oracles import nfa_accepts


def test_build_naf1_structure(naf1):
    assert len(naf1.states) == 4
    assert len(naf1.transitions) == 8
    # states are created in order of first appearance
    assert [st.label for st in naf1.states] == ["I", "0", "1", "2"]
    assert naf1.state("I").is_initial
    assert naf1.state("0").is_final
    assert not naf1.state("2").is_final


def test_build_machine_none_output_is_empty_word(naf1):
    t = next(tr for tr in naf1.transitions if tr.source == "I")
    assert t.output == ()


def test_build_machine_empty_rows_single_state():
    m = build_machine([], initial_labels=["a"], final_labels=["a"],
                      input_alphabet=[0, 1], kind=AUTOMATON)
    assert m.process([]).accepted
    assert not m.process([0]).accepted


def test_build_machine_rejects_foreign_letter():
    with pytest.raises(ConstructionError, match="alphabet"):
        build_machine([("a", "a", 7, None)], ["a"], ["a"], input_alphabet=[0, 1])


def test_add_state_and_transition(naf1):
    grown = naf1.add_state("3")
    assert len(grown.states) == 5
    assert len(naf1.states) == 4  # original untouched
    more = grown.add_transition("1", "3", 1, [])
    assert len(more.transitions) == len(naf1.transitions) + 1
    with pytest.raises(ConstructionError):
        grown.add_state("I")
    with pytest.raises(ConstructionError):
        grown.add_transition("1", "nowhere", 0, [])
    with pytest.raises(ConstructionError):
        grown.add_transition("1", "3", 5, [])


def test_process_binary_fourteen_rejects_midway(naf1):
    result = naf1.process(digits.binary_digits(14))
    assert result.accepted is False
    assert result.stop_state == "2"
    assert result.output == word([0, -1, 0])


def test_process_padded_binary_fourteen_accepts(naf1):
    result = naf1.process(list(digits.binary_digits(14)) + [0, 0, 0])
    assert result.accepted is True
    assert result.stop_state == "0"
    assert result.output == word([0, -1, 0, 0, 1, 0])


def test_process_empty_input(naf1, naf_completed):
    rejected = naf1.process([])
    assert (rejected.accepted, rejected.stop_state, rejected.output) == \
        (False, "I", ())
    accepted = naf_completed.process([])
    assert accepted.accepted and accepted.output == ()


def test_process_blocks_on_missing_transition(naf_acceptor):
    # the sink-free component has no transition for 1 after 1
    two_ones = naf_acceptor.coaccessible().process([1, 1])
    assert not two_ones.accepted
    assert two_ones.output == ()


def test_transduce_requires_acceptance(naf1, naf_completed):
    with pytest.raises(InvalidInputError, match="invalid input sequence"):
        naf1.transduce(digits.binary_digits(14))
    assert naf_completed.transduce(digits.binary_digits(14)) == \
        word([0, -1, 0, 0, 1])


def test_process_refuses_multiple_initial_states():
    m = build_machine([("a", "b", 0, None)], ["a", "b"], ["b"],
                      input_alphabet=[0], kind=AUTOMATON)
    with pytest.raises(MachineError):
        m.process([0])


def test_process_refuses_epsilon_transitions():
    m = build_machine([("a", "b", None, None)], ["a"], ["b"],
                      input_alphabet=[0], kind=AUTOMATON)
    with pytest.raises(MachineError):
        m.process([0])


def test_automaton_kind_forbids_output():
    with pytest.raises(ConstructionError):
        build_machine([("a", "a", 0, 1)], ["a"], ["a"],
                      input_alphabet=[0], kind=AUTOMATON)


def test_coaccessible_drops_sink(naf_acceptor):
    assert len(naf_acceptor.states) == 3
    trimmed = naf_acceptor.coaccessible()
    assert len(trimmed.states) == 2
    assert len(trimmed.coaccessible().states) == 2  # idempotent here


def test_coaccessible_identity_when_all_final(all_words_acceptor):
    assert all_words_acceptor.coaccessible() == all_words_acceptor


def test_coaccessible_empty_for_nonfinal_sink():
    m = build_machine([("s", "s", 0, None)], ["s"], [],
                      input_alphabet=[0], kind=AUTOMATON)
    assert len(m.coaccessible().states) == 0


def test_accessible_drops_unreachable(naf1):
    extra = naf1.add_state("lost").add_transition("lost", "0", 0, None)
    assert len(extra.accessible().states) == 4
    assert extra.accessible() == naf1


@pytest.mark.parametrize("builder", ["naf_acceptor", "naf_all", "machine_R"])
def test_trimming_preserves_language(builder, request):
    m = request.getfixturevalue(builder)
    trimmed = m.trim()
    from oracles import all_words
    values = [s.value for s in m.input_alphabet]
    for letters in all_words(values, 6):
        assert nfa_accepts(m, word(letters)) == nfa_accepts(trimmed, word(letters))


def test_relabeled_names_states_breadth_first():
    m = build_machine([("I", "A", 0, None), ("A", "I", 1, None)],
                      ["I"], ["A"], input_alphabet=[0, 1], kind=AUTOMATON)
    r = m.relabeled()
    assert [st.label for st in r.states] == ["0", "1"]
    assert r.state("0").is_initial
    assert r.state("1").is_final


def test_relabeled_idempotent(naf_all):
    once = naf_all.relabeled()
    assert once.relabeled() == once


def test_relabeled_T_has_nine_states(machine_T):
    assert len(machine_T.relabeled().states) == 9


def test_digraph_one_edge_per_transition(naf_all):
    g = naf_all.digraph(lambda t: 0)
    assert len(g.vertices) == 6
    assert len(g.edges) == len(naf_all.transitions)
    assert all(w == 0 for _, _, w in g.edges)


def test_digraph_loop_becomes_self_loop(identity01):
    g = identity01.digraph(lambda t: 1)
    assert all(u == v == "0" for u, v, _ in g.edges)


def test_is_deterministic_and_complete(naf1, naf_acceptor):
    assert naf1.is_deterministic()
    assert naf1.is_complete()
    assert naf_acceptor.is_complete()
    trimmed = naf_acceptor.coaccessible()
    assert trimmed.is_deterministic()
    assert not trimmed.is_complete()


def test_two_initial_states_not_deterministic():
    m = build_machine([("a", "b", 0, None)], ["a", "b"], ["b"],
                      input_alphabet=[0], kind=AUTOMATON)
    assert not m.is_deterministic()


def test_structural_equality_ignores_declaration_order():
    rows = [("a", "b", 0, None), ("b", "a", 1, None)]
    m1 = build_machine(rows, ["a"], ["b"], input_alphabet=[0, 1],
                       kind=AUTOMATON)
    m2 = build_machine(list(reversed(rows)), ["a"], ["b"],
                       input_alphabet=[0, 1], kind=AUTOMATON)
    assert m1 == m2


binary_words = st.lists(st.sampled_from([-1, 0, 1]), max_size=10)


@given(binary_words)
def test_process_is_pure(naf_all, letters):
    first = naf_all.process(letters)
    second = naf_all.process(letters)
    assert first == second


@given(binary_words, binary_words)
def test_output_concatenates_over_split_inputs(naf_all, u, v):
    # transition outputs only; final words are excluded from this law
    mid, out_u, ok_u = naf_all._run_from("I", word(u))
    assert ok_u  # complete machine never blocks
    end, out_v, ok_v = naf_all._run_from(mid, word(v))
    assert ok_v
    whole, out_uv, _ = naf_all._run_from("I", word(list(u) + list(v)))
    assert whole == end
    assert out_uv == out_u + out_v
