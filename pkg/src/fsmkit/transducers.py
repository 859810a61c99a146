"""Transducer constructions: transition-function exploration, one-state
letterwise transducers, cartesian product, composition, output projection,
final-word completion and state-merging simplification."""

from __future__ import annotations

import os
from collections import deque

from .errors import ConstructionError, MachineError, StateCapError
from .machine import (AUTOMATON, TRANSDUCER, Machine, State, Transition,
                      as_label)
from .symbols import (ABSENT, AbsentType, Digit, Pair, Symbol, digit_value,
                      symbol, word, word_key)

DEFAULT_STATE_CAP = 10_000
STATE_CAP_ENV = "FSMKIT_STATE_CAP"


def _state_cap(explicit):
    if explicit is not None:
        return explicit
    env = os.environ.get(STATE_CAP_ENV)
    return int(env) if env else DEFAULT_STATE_CAP


def _raw(s: Symbol):
    """The plain-Python value handed to user transition functions."""
    if isinstance(s, Digit):
        return s.value
    if isinstance(s, AbsentType):
        return None
    if isinstance(s, Pair):
        return (_raw(s.left), _raw(s.right))
    raise ConstructionError(f"cannot unwrap {s!r}")


def from_transition_function(fn, input_alphabet, initial_labels, final_labels,
                             state_cap=None) -> Machine:
    """Explore fn(state, letter) -> (next_state, written word) breadth-first
    from the initial labels, one transition per letter, until no new state
    appears.  Letters are passed as plain values (ints, None for the absent
    marker, nested tuples for pairs).  Exploration stops with an error when
    more than `state_cap` states show up (default 10**4, overridable via
    the FSMKIT_STATE_CAP environment variable)."""
    cap = _state_cap(state_cap)
    letters = sorted({symbol(a) for a in input_alphabet},
                     key=lambda s: s.sort_key())
    initial = list(dict.fromkeys(initial_labels))
    final = set(final_labels)

    order = list(initial)
    seen = set(initial)
    transitions = []
    queue = deque(initial)
    while queue:
        here = queue.popleft()
        for letter in letters:
            target, written = fn(here, _raw(letter))
            if target not in seen:
                if len(seen) >= cap:
                    raise StateCapError(
                        f"exploration exceeded the state cap of {cap}")
                seen.add(target)
                order.append(target)
                queue.append(target)
            transitions.append(
                Transition(as_label(here), as_label(target),
                           (letter,), word(written)))

    states = tuple(
        State(as_label(label), label in set(initial), label in final)
        for label in order)
    return Machine(TRANSDUCER, states, tuple(transitions), letters)


# ----------------------------------------------------------------------
# one-state letterwise transducers
# ----------------------------------------------------------------------

def _one_state(alphabet, write, output_alphabet=None) -> Machine:
    letters = sorted({symbol(a) for a in alphabet}, key=lambda s: s.sort_key())
    transitions = tuple(
        Transition("0", "0", (a,), word(write(a))) for a in letters)
    return Machine(TRANSDUCER, (State("0", True, True),), transitions,
                   letters, output_alphabet)


def identity_transducer(alphabet) -> Machine:
    """Writes out every letter it reads."""
    letters = [symbol(a) for a in alphabet]
    return _one_state(letters, lambda a: a, output_alphabet=letters)


def weight_transducer(alphabet) -> Machine:
    """Writes 1 for every nonzero digit and 0 otherwise, so the output sum
    is the Hamming weight of the input."""
    return _one_state(alphabet,
                      lambda a: Digit(1 if digit_value(a) != 0 else 0),
                      output_alphabet=[Digit(0), Digit(1)])


def abs_transducer(alphabet) -> Machine:
    """Writes the absolute value of every digit it reads."""
    letters = sorted({symbol(a) for a in alphabet},
                     key=lambda s: s.sort_key())
    out = sorted({Digit(abs(digit_value(a))) for a in letters},
                 key=lambda s: s.sort_key())
    return _one_state(letters, lambda a: Digit(abs(digit_value(a))),
                      output_alphabet=out)


def operator_lift(fn, alphabet) -> Machine:
    """One-state transducer applying fn letterwise; fn receives a Symbol
    and may return anything `symbol` coerces."""
    letters = sorted({symbol(a) for a in alphabet},
                     key=lambda s: s.sort_key())
    outputs = {}
    for a in letters:
        try:
            outputs[a] = symbol(fn(a))
        except Exception as exc:
            raise ConstructionError(
                f"the lifted operator failed on {a}: {exc}") from exc
    out_alphabet = sorted(set(outputs.values()), key=lambda s: s.sort_key())
    return _one_state(letters, lambda a: outputs[a],
                      output_alphabet=out_alphabet)


# ----------------------------------------------------------------------
# product and composition
# ----------------------------------------------------------------------

def _single_initial(m: Machine, role: str) -> str:
    initials = m.initial_states()
    if len(initials) != 1:
        raise MachineError(f"the {role} machine needs exactly one initial state")
    return initials[0].label


def cartesian_product(t1: Machine, t2: Machine) -> Machine:
    """Run both transducers in parallel on the same input, writing pairs.

    Requires both factors to be deterministic with exactly one output
    symbol per transition.  A product state is final when both components
    are; its final output zips the component final outputs, padding the
    shorter one with the absent marker."""
    if t1.input_alphabet != t2.input_alphabet:
        raise MachineError("cartesian product needs equal input alphabets")
    for t in t1.transitions + t2.transitions:
        if len(t.output) != 1:
            raise MachineError(
                f"cartesian product needs exactly one output symbol per "
                f"transition, offending transition: {t}")
    step1 = {(t.source, t.input[0]): t for t in t1.transitions}
    step2 = {(t.source, t.input[0]): t for t in t2.transitions}
    start = (_single_initial(t1, "left"), _single_initial(t2, "right"))

    def name(pair):
        return f"({pair[0]},{pair[1]})"

    order = [start]
    seen = {start}
    transitions = []
    queue = deque([start])
    while queue:
        here = queue.popleft()
        for letter in t1.input_alphabet:
            a = step1.get((here[0], letter))
            b = step2.get((here[1], letter))
            if a is None or b is None:
                continue
            target = (a.target, b.target)
            if target not in seen:
                seen.add(target)
                order.append(target)
                queue.append(target)
            transitions.append(
                Transition(name(here), name(target), (letter,),
                           (Pair(a.output[0], b.output[0]),)))

    def zipped_final_output(pair):
        u = t1.state(pair[0]).final_output
        v = t2.state(pair[1]).final_output
        length = max(len(u), len(v))
        return tuple(
            Pair(u[i] if i < len(u) else ABSENT,
                 v[i] if i < len(v) else ABSENT)
            for i in range(length))

    states = []
    for pair in order:
        final = t1.state(pair[0]).is_final and t2.state(pair[1]).is_final
        states.append(State(name(pair), pair == start, final,
                            zipped_final_output(pair) if final else ()))
    return Machine(TRANSDUCER, tuple(states), tuple(transitions),
                   t1.input_alphabet)


def compose(outer: Machine, inner: Machine) -> Machine:
    """Feed every output of `inner` through `outer` (run inner first).

    States are (inner state, outer state) pairs.  A pair is final when the
    inner state is final and the outer machine, after consuming the inner
    final output, stops in a final state; the composed final output is what
    the outer machine writes while consuming it, followed by the outer
    final output."""
    start = (_single_initial(inner, "inner"), _single_initial(outer, "outer"))
    if not inner.is_deterministic() or not outer.is_deterministic():
        raise MachineError("composition requires deterministic machines")
    inner_step = {(t.source, t.input[0]): t for t in inner.transitions}

    def name(pair):
        return f"({pair[0]},{pair[1]})"

    order = [start]
    seen = {start}
    transitions = []
    queue = deque([start])
    while queue:
        here = queue.popleft()
        for letter in inner.input_alphabet:
            t = inner_step.get((here[0], letter))
            if t is None:
                continue
            stop, written, complete_run = outer._run_from(here[1], t.output)
            if not complete_run:
                raise MachineError(
                    f"the outer machine blocks on the output of {t}")
            target = (t.target, stop)
            if target not in seen:
                seen.add(target)
                order.append(target)
                queue.append(target)
            transitions.append(
                Transition(name(here), name(target), (letter,), written))

    states = []
    for pair in order:
        final = False
        final_output = ()
        inner_state = inner.state(pair[0])
        if inner_state.is_final:
            stop, written, complete_run = outer._run_from(
                pair[1], inner_state.final_output)
            if complete_run and outer.state(stop).is_final:
                final = True
                final_output = written + outer.state(stop).final_output
        states.append(State(name(pair), pair == start, final, final_output))
    return Machine(TRANSDUCER, tuple(states), tuple(transitions),
                   inner.input_alphabet, outer.output_alphabet)


# ----------------------------------------------------------------------
# projection, completion, simplification
# ----------------------------------------------------------------------

def output_projection(t: Machine) -> Machine:
    """Forget inputs: the automaton over the output alphabet accepting
    exactly the outputs of accepting runs (final outputs included)."""
    if t.kind != TRANSDUCER:
        raise MachineError("output projection is defined on transducers")
    alphabet = t.output_alphabet
    if alphabet is None:
        observed = {s for tr in t.transitions for s in tr.output}
        observed.update(s for st in t.states for s in st.final_output)
        alphabet = sorted(observed, key=lambda s: s.sort_key())
        if not alphabet:
            raise MachineError(
                "cannot infer an output alphabet from a machine that never writes")

    states = {st.label: State(st.label, st.is_initial, st.is_final and
                              not st.final_output) for st in t.states}
    transitions = []
    fresh = 0

    def chain(source, target, output_word):
        """Spell output_word from source to target through fresh states."""
        nonlocal fresh
        if len(output_word) <= 1:
            transitions.append(Transition(source, target, tuple(output_word)))
            return
        here = source
        for s in output_word[:-1]:
            label = f"{source}.out{fresh}"
            fresh += 1
            states[label] = State(label)
            transitions.append(Transition(here, label, (s,)))
            here = label
        transitions.append(Transition(here, target, (output_word[-1],)))

    for tr in t.transitions:
        chain(tr.source, tr.target, tr.output)
    for st in t.states:
        if st.is_final and st.final_output:
            label = f"{st.label}.accept"
            states[label] = State(label, False, True)
            chain(st.label, label, st.final_output)

    ordered = [states[st.label] for st in t.states]
    ordered += [states[k] for k in states
                if not t.has_state(k)]
    return Machine(AUTOMATON, tuple(ordered), tuple(transitions), alphabet)


def with_final_word_out(t: Machine, letter) -> Machine:
    """Complete a deterministic transducer into a subsequential one: every
    state whose `letter`-path reaches a final state becomes final, with the
    outputs written along that path as its final output.  States whose
    path cycles without meeting a final state stay non-final."""
    letter = symbol(letter)
    if letter not in t.input_alphabet:
        raise MachineError(f"letter {letter} is not in the input alphabet")
    steps = t._deterministic_steps()

    new_states = []
    for st in t.states:
        if st.is_final:
            new_states.append(st)
            continue
        here = st.label
        collected = []
        visited = {here}
        final_state = None
        while True:
            tr = steps.get((here, letter))
            if tr is None:
                break
            collected.extend(tr.output)
            here = tr.target
            if t.state(here).is_final:
                final_state = here
                break
            if here in visited:
                break
            visited.add(here)
        if final_state is None:
            new_states.append(st)
        else:
            new_states.append(
                State(st.label, st.is_initial, True,
                      tuple(collected) + t.state(final_state).final_output))
    if not any(st.is_final for st in new_states):
        raise MachineError(
            f"no state reaches a final state by reading {letter}")
    return Machine(TRANSDUCER, tuple(new_states), t.transitions,
                   t.input_alphabet, t.output_alphabet)


def simplify(t: Machine) -> Machine:
    """Merge behaviorally equivalent states of a deterministic transducer:
    same finality and final output and, letter by letter, the same output
    word into the same block.  The result computes the same input-output
    function; it is not guaranteed to be globally minimal."""
    if not t.is_deterministic():
        raise MachineError("simplify() requires a deterministic machine")
    steps = {(tr.source, tr.input[0]): tr for tr in t.transitions}
    labels = [st.label for st in t.states]

    initial_keys = {}
    block = {}
    for st in t.states:
        key = (st.is_final, st.final_output)
        initial_keys.setdefault(key, len(initial_keys))
        block[st.label] = initial_keys[key]
    while True:
        signatures = {}
        for label in labels:
            parts = [block[label]]
            for letter in t.input_alphabet:
                tr = steps.get((label, letter))
                parts.append(None if tr is None
                             else (word_key(tr.output), block[tr.target]))
            signatures[label] = tuple(parts)
        renumber = {}
        for label in labels:
            renumber.setdefault(signatures[label], len(renumber))
        new_block = {label: renumber[signatures[label]] for label in labels}
        if new_block == block:
            break
        block = new_block

    representative = {}
    for label in labels:
        representative.setdefault(block[label], label)
    initial_block = block[t.initial_states()[0].label]
    states = tuple(
        State(str(b), b == initial_block, t.state(rep).is_final,
              t.state(rep).final_output)
        for b, rep in sorted(representative.items()))
    transitions = []
    for b, rep in sorted(representative.items()):
        for letter in t.input_alphabet:
            tr = steps.get((rep, letter))
            if tr is not None:
                transitions.append(
                    Transition(str(b), str(block[tr.target]),
                               (letter,), tr.output))
    quotient = Machine(TRANSDUCER, states, tuple(transitions),
                       t.input_alphabet, t.output_alphabet)
    return quotient.relabeled()
