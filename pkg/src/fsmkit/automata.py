"""Constructions and decision procedures on automata.

Builders (word, empty word, contains-word) and the regular operations
(concatenation, union, Kleene star) may produce nondeterministic machines
with epsilon-input transitions; determinize, complete, complement,
intersection and minimize bring them back to canonical deterministic form.
Counting uses exact big-integer transfer-matrix powering.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConstructionError, MachineError
from .machine import AUTOMATON, Machine, State, Transition, as_label
from .polynomial import charpoly
from .symbols import Symbol, symbol, word, word_key


def _require_automaton(m: Machine):
    if m.kind != AUTOMATON:
        raise MachineError("this operation is defined on automata only")


def _require_same_alphabet(a: Machine, b: Machine):
    if a.input_alphabet != b.input_alphabet:
        raise MachineError(
            f"alphabet mismatch: {list(map(str, a.input_alphabet))} vs "
            f"{list(map(str, b.input_alphabet))}")


# ----------------------------------------------------------------------
# builders
# ----------------------------------------------------------------------

def word_automaton(w, alphabet) -> Machine:
    """Automaton accepting exactly the word w: a chain of len(w)+1 states."""
    w = word(w)
    letters = {symbol(a) for a in alphabet}
    for s in w:
        if s not in letters:
            raise ConstructionError(f"word symbol {s} outside the alphabet")
    states = tuple(
        State(str(i), is_initial=(i == 0), is_final=(i == len(w)))
        for i in range(len(w) + 1))
    transitions = tuple(
        Transition(str(i), str(i + 1), (s,)) for i, s in enumerate(w))
    return Machine(AUTOMATON, states, transitions, alphabet)


def empty_word_automaton(alphabet) -> Machine:
    """Automaton accepting exactly the empty word."""
    return word_automaton((), alphabet)


def contains_word(factor, alphabet) -> Machine:
    """Automaton accepting exactly the words containing `factor` as a
    contiguous subword (prefix-matching automaton with an absorbing accept
    state)."""
    factor = word(factor)
    if not factor:
        raise ConstructionError("the factor must not be empty")
    letters = sorted({symbol(a) for a in alphabet}, key=lambda s: s.sort_key())
    for s in factor:
        if s not in letters:
            raise ConstructionError(f"factor symbol {s} outside the alphabet")
    m = len(factor)

    # border[i]: length of the longest proper border of factor[:i]
    border = [0] * (m + 1)
    k = 0
    for i in range(1, m):
        while k and factor[i] != factor[k]:
            k = border[k]
        if factor[i] == factor[k]:
            k += 1
        border[i + 1] = k

    def step(i: int, a: Symbol) -> int:
        while True:
            if i < m and factor[i] == a:
                return i + 1
            if i == 0:
                return 0
            i = border[i]

    states = tuple(
        State(str(i), is_initial=(i == 0), is_final=(i == m))
        for i in range(m + 1))
    transitions = []
    for i in range(m):
        for a in letters:
            transitions.append(Transition(str(i), str(step(i, a)), (a,)))
    for a in letters:
        transitions.append(Transition(str(m), str(m), (a,)))
    return Machine(AUTOMATON, states, tuple(transitions), alphabet)


# ----------------------------------------------------------------------
# regular operations (results may be nondeterministic, with epsilons)
# ----------------------------------------------------------------------

def _disjoint(a: Machine, b: Machine):
    """States of a and b renamed apart ("0:x" / "1:x")."""
    def rename(m, prefix):
        states = tuple(
            State(f"{prefix}:{st.label}", st.is_initial, st.is_final)
            for st in m.states)
        transitions = tuple(
            Transition(f"{prefix}:{t.source}", f"{prefix}:{t.target}", t.input)
            for t in m.transitions)
        return states, transitions

    sa, ta = rename(a, "0")
    sb, tb = rename(b, "1")
    return sa, ta, sb, tb


def union(a: Machine, b: Machine) -> Machine:
    """Disjoint union keeping both machines' initial states; determinize
    afterwards to run the result."""
    _require_automaton(a)
    _require_automaton(b)
    _require_same_alphabet(a, b)
    sa, ta, sb, tb = _disjoint(a, b)
    return Machine(AUTOMATON, sa + sb, ta + tb, a.input_alphabet)


def concat(a: Machine, b: Machine) -> Machine:
    _require_automaton(a)
    _require_automaton(b)
    _require_same_alphabet(a, b)
    sa, ta, sb, tb = _disjoint(a, b)
    states = (tuple(State(st.label, st.is_initial, False) for st in sa)
              + tuple(State(st.label, False, st.is_final) for st in sb))
    epsilons = tuple(
        Transition(fa.label, ib.label, ())
        for fa in sa if fa.is_final
        for ib in sb if ib.is_initial)
    return Machine(AUTOMATON, states, ta + tb + epsilons, a.input_alphabet)


def kleene_star(a: Machine) -> Machine:
    _require_automaton(a)
    hub = State("*", is_initial=True, is_final=True)
    states = (hub,) + tuple(
        State(f"0:{st.label}", False, False) for st in a.states)
    transitions = [
        Transition(f"0:{t.source}", f"0:{t.target}", t.input)
        for t in a.transitions]
    for st in a.states:
        if st.is_initial:
            transitions.append(Transition("*", f"0:{st.label}", ()))
        if st.is_final:
            transitions.append(Transition(f"0:{st.label}", "*", ()))
    return Machine(AUTOMATON, states, tuple(transitions), a.input_alphabet)


# ----------------------------------------------------------------------
# determinisation and boolean operations
# ----------------------------------------------------------------------

def _epsilon_closure(m: Machine, labels) -> frozenset:
    closure = set(labels)
    queue = deque(labels)
    while queue:
        here = queue.popleft()
        for t in m.transitions_from(here):
            if len(t.input) == 0 and t.target not in closure:
                closure.add(t.target)
                queue.append(t.target)
    return frozenset(closure)


def determinize(a: Machine) -> Machine:
    """Subset construction with epsilon closure; subset states are named
    by their sorted member labels, so the result is canonical."""
    _require_automaton(a)

    def name(subset: frozenset) -> str:
        return "{" + ",".join(sorted(subset)) + "}"

    start = _epsilon_closure(a, [st.label for st in a.initial_states()])
    subsets = {start: name(start)}
    order = [start]
    transitions = []
    queue = deque([start])
    while queue:
        here = queue.popleft()
        for letter in a.input_alphabet:
            move = {t.target
                    for label in here
                    for t in a.transitions_from(label)
                    if t.input == (letter,)}
            if not move:
                continue
            target = _epsilon_closure(a, move)
            if target not in subsets:
                subsets[target] = name(target)
                order.append(target)
                queue.append(target)
            transitions.append(
                Transition(subsets[here], subsets[target], (letter,)))

    final_labels = {st.label for st in a.final_states()}
    states = tuple(
        State(subsets[subset], subset == start, bool(subset & final_labels))
        for subset in order)
    return Machine(AUTOMATON, states, tuple(transitions), a.input_alphabet)


def complete(a: Machine, sink_label="sink") -> Machine:
    """Add a non-final sink so every (state, letter) has a transition."""
    if not a.is_deterministic():
        raise MachineError("complete() requires a deterministic machine")
    sink_label = as_label(sink_label)
    missing = []
    have = {(t.source, t.input[0]) for t in a.transitions}
    for st in a.states:
        for letter in a.input_alphabet:
            if (st.label, letter) not in have:
                missing.append((st.label, letter))
    if not missing:
        return a
    if a.has_state(sink_label):
        raise ConstructionError(f"sink label {sink_label!r} already in use")
    states = a.states + (State(sink_label),)
    transitions = list(a.transitions)
    for source, letter in missing:
        transitions.append(Transition(source, sink_label, (letter,)))
    for letter in a.input_alphabet:
        transitions.append(Transition(sink_label, sink_label, (letter,)))
    return Machine(a.kind, states, tuple(transitions),
                   a.input_alphabet, a.output_alphabet)


def complement(a: Machine) -> Machine:
    """Accept exactly the words the argument rejects (over the same
    alphabet); determinizes and completes internally."""
    _require_automaton(a)
    d = complete(determinize(a))
    states = tuple(
        State(st.label, st.is_initial, not st.is_final) for st in d.states)
    return Machine(AUTOMATON, states, d.transitions, d.input_alphabet)


def intersection(a: Machine, b: Machine) -> Machine:
    """Product construction on the determinized arguments."""
    _require_automaton(a)
    _require_automaton(b)
    _require_same_alphabet(a, b)
    da, db = determinize(a), determinize(b)
    ia = da.initial_states()[0].label
    ib = db.initial_states()[0].label
    stepa = {(t.source, t.input[0]): t.target for t in da.transitions}
    stepb = {(t.source, t.input[0]): t.target for t in db.transitions}

    def name(pair):
        return f"({pair[0]},{pair[1]})"

    start = (ia, ib)
    order = [start]
    seen = {start}
    transitions = []
    queue = deque([start])
    while queue:
        here = queue.popleft()
        for letter in da.input_alphabet:
            na = stepa.get((here[0], letter))
            nb = stepb.get((here[1], letter))
            if na is None or nb is None:
                continue
            target = (na, nb)
            if target not in seen:
                seen.add(target)
                order.append(target)
                queue.append(target)
            transitions.append(Transition(name(here), name(target), (letter,)))

    states = tuple(
        State(name(pair), pair == start,
              da.state(pair[0]).is_final and db.state(pair[1]).is_final)
        for pair in order)
    return Machine(AUTOMATON, states, tuple(transitions), a.input_alphabet)


def minimize(a: Machine) -> Machine:
    """The unique minimal complete deterministic automaton for the same
    language, canonically relabeled (determinizes and completes first,
    then refines partitions)."""
    _require_automaton(a)
    d = complete(determinize(a))
    step = {(t.source, t.input[0]): t.target for t in d.transitions}
    labels = [st.label for st in d.states]

    block = {st.label: (0 if st.is_final else 1) for st in d.states}
    while True:
        signatures = {
            label: (block[label],
                    tuple(block[step[(label, letter)]]
                          for letter in d.input_alphabet))
            for label in labels}
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
    initial_block = block[d.initial_states()[0].label]
    states = tuple(
        State(str(b), b == initial_block, d.state(rep).is_final)
        for b, rep in sorted(representative.items()))
    transitions = tuple(
        Transition(str(b), str(block[step[(rep, letter)]]), (letter,))
        for b, rep in sorted(representative.items())
        for letter in d.input_alphabet)
    quotient = Machine(AUTOMATON, states, transitions, d.input_alphabet)
    return quotient.relabeled()


def is_equivalent(a: Machine, b: Machine) -> bool:
    """True iff the two automata accept the same language (isomorphism of
    the canonically relabeled minimal complete machines)."""
    _require_automaton(a)
    _require_automaton(b)
    _require_same_alphabet(a, b)
    return minimize(a) == minimize(b)


# ----------------------------------------------------------------------
# enumeration and counting
# ----------------------------------------------------------------------

def language(a: Machine, max_length: int):
    """Yield every accepted word of length <= max_length exactly once, in
    shortlex order under the canonical symbol order."""
    _require_automaton(a)
    d = a if a.is_deterministic() else determinize(a)
    step = {(t.source, t.input[0]): t.target for t in d.transitions}

    # distance from each state to the nearest final state, for pruning
    rev = {st.label: [] for st in d.states}
    for t in d.transitions:
        rev[t.target].append(t.source)
    dist = {st.label: 0 for st in d.final_states()}
    queue = deque(dist)
    while queue:
        here = queue.popleft()
        for prev in rev[here]:
            if prev not in dist:
                dist[prev] = dist[here] + 1
                queue.append(prev)

    initials = d.initial_states()
    if not initials:
        return
    start = initials[0].label

    def walk(label, remaining, prefix):
        if dist.get(label, remaining + 1) > remaining:
            return
        if remaining == 0:
            if d.state(label).is_final:
                yield tuple(prefix)
            return
        for letter in d.input_alphabet:
            target = step.get((label, letter))
            if target is None:
                continue
            prefix.append(letter)
            yield from walk(target, remaining - 1, prefix)
            prefix.pop()

    for length in range(max_length + 1):
        yield from walk(start, length, [])


def _trimmed_deterministic(a: Machine) -> Machine:
    d = a if a.is_deterministic() else determinize(a)
    return d.trim()


def count_words(a: Machine, n: int) -> int:
    """Exact number of accepted words of length n (vector-matrix powering
    over big integers on the trimmed deterministic machine)."""
    _require_automaton(a)
    if n < 0:
        raise ConstructionError("the length must be nonnegative")
    d = _trimmed_deterministic(a)
    if not d.states:
        return 0
    index = {st.label: i for i, st in enumerate(d.states)}
    size = len(d.states)
    counts = [[0] * size for _ in range(size)]
    for t in d.transitions:
        counts[index[t.source]][index[t.target]] += 1
    row = [0] * size
    for st in d.initial_states():
        row[index[st.label]] = 1
    for _ in range(n):
        row = [sum(row[i] * counts[i][j] for i in range(size))
               for j in range(size)]
    return sum(row[index[st.label]] for st in d.final_states())


@dataclass(frozen=True)
class Recurrence:
    """Linear recurrence a(n) = c1*a(n-1) + ... + cd*a(n-d) with exact
    rational coefficients and the first d terms."""

    coefficients: tuple  # of Fraction, c1..cd
    initial_terms: tuple  # of int, a(0)..a(d-1)

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def term(self, n: int):
        if n < 0:
            raise ConstructionError("the index must be nonnegative")
        if n < len(self.initial_terms):
            return self.initial_terms[n]
        window = list(self.initial_terms)
        for _ in range(n - len(window) + 1):
            nxt = sum(c * window[-1 - i]
                      for i, c in enumerate(self.coefficients))
            window.append(nxt)
            window.pop(0)
        value = window[-1]
        if isinstance(value, Fraction) and value.denominator == 1:
            return int(value)
        return value


def word_count_recurrence(a: Machine) -> Recurrence:
    """Recurrence satisfied by n -> count_words(a, n): the characteristic
    polynomial of the trimmed deterministic transition-count matrix gives
    the coefficients, the first counts give the initial terms."""
    _require_automaton(a)
    d = _trimmed_deterministic(a)
    if not d.states:
        return Recurrence((Fraction(0),), (0,))
    index = {st.label: i for i, st in enumerate(d.states)}
    size = len(d.states)
    counts = [[Fraction(0)] * size for _ in range(size)]
    for t in d.transitions:
        counts[index[t.source]][index[t.target]] += 1
    coeffs = charpoly(counts, zero=Fraction(0), one=Fraction(1))
    # det(xI - M) = x^d + c1 x^(d-1) + ... + cd  =>  a(n) = -c1 a(n-1) - ...
    coefficients = tuple(-c for c in coeffs[1:])
    initial_terms = tuple(count_words(a, i) for i in range(size))
    return Recurrence(coefficients, initial_terms)
