"""Binary digit utilities and the built-in case-study machines.

The builders assemble, from the algebra modules, the non-adjacent-form
family (the NAF acceptor, the binary-to-NAF rewriters, the any-digit
rewriter), the multiply-by-three transducer, the pairing/difference chain
that rewrites a binary expansion into the 3/2-1/2 non-adjacent form (the
digitwise difference of the NAFs of 3n/2 and n/2, digits -2..2), the
Hamming-weight composition over it and the acceptor of its outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import automata, transducers
from .errors import ConstructionError
from .machine import Machine, build_machine
from .symbols import ABSENT, AbsentType, Digit, Pair, Symbol, Word, digit_value, word


def binary_digits(n: int) -> Word:
    """Standard binary digits of n >= 0, least significant first; 0 has no
    digits."""
    if n < 0:
        raise ConstructionError("binary digits are defined for n >= 0")
    digits = []
    while n:
        digits.append(Digit(n & 1))
        n >>= 1
    return tuple(digits)


@dataclass(frozen=True)
class Expansion:
    """A base-2 expansion, least significant digit first; digit i weighs
    2**(i + exponent_offset)."""

    digits: Word
    exponent_offset: int = 0

    def value(self) -> Fraction:
        total = Fraction(0)
        for i, d in enumerate(self.digits):
            total += digit_value(d) * Fraction(2) ** (i + self.exponent_offset)
        return total

    def digit_string(self) -> str:
        """Most-significant-first rendering like (1001̄0)_2, with a centered
        dot before the fractional digits and negative digits overlined."""
        values = [digit_value(d) for d in self.digits]
        if self.exponent_offset > 0:
            values = [0] * self.exponent_offset + values
            point = 0
        else:
            point = -self.exponent_offset
        while len(values) <= point:
            values.append(0)
        rendered = [_digit_char(v) for v in reversed(values)]
        if point:
            integral, fractional = rendered[:-point], rendered[-point:]
            while len(fractional) > 1 and fractional[-1] == "0":
                fractional.pop()
            body = "".join(integral) + "·" + "".join(fractional)
        else:
            body = "".join(rendered) or "0"
        return f"({body})_2"


def _digit_char(v: int) -> str:
    return str(v) if v >= 0 else str(-v) + "̄"


def eval_expansion(e: Expansion) -> Fraction:
    return e.value()


def hamming_weight(w) -> int:
    """Number of nonzero digits; pairs and the absent marker are not
    digits and raise."""
    total = 0
    for s in word(w):
        if isinstance(s, (Pair, AbsentType)):
            raise ConstructionError(f"{s} has no Hamming weight")
        if s.value != 0:
            total += 1
    return total


# ----------------------------------------------------------------------
# transition functions
# ----------------------------------------------------------------------

def _naf_transition(state, read):
    """Rewrite a binary (or signed binary) expansion into its NAF: the
    first digit is stored, afterwards the pending value 2*read + carry
    decides the written digit by its residue mod 4."""
    if state == "I":
        return read, None
    current = 2 * read + state
    if current % 2 == 0:
        write = 0
    elif current % 4 == 1:
        write = 1
    else:
        write = -1
    return (current - write) // 2, write


def _triple_transition(carry, read):
    current = 3 * read + carry
    write = current % 2
    return (current - write) // 2, write


# ----------------------------------------------------------------------
# builders
# ----------------------------------------------------------------------

def build_naf_acceptor() -> Machine:
    """Minimal complete acceptor of non-adjacent forms over {-1, 0, 1}:
    words where no two adjacent digits are both nonzero, built from
    (0 + 10 + (-1)0)* (1 + -1 + eps)."""
    alphabet = [-1, 0, 1]
    w = lambda letters: automata.word_automaton(letters, alphabet)
    block = automata.union(automata.union(w([0]), automata.concat(w([1]), w([0]))),
                           automata.concat(w([-1]), w([0])))
    tail = automata.union(automata.union(w([1]), w([-1])),
                          automata.empty_word_automaton(alphabet))
    return automata.minimize(automata.concat(automata.kleene_star(block), tail))


def build_naf1() -> Machine:
    """Binary-to-NAF rewriter given by its eight transitions; the initial
    state stores the first digit, states 0..2 the pending carry."""
    return build_machine(
        [("I", 0, 0, None), ("I", 1, 1, None),
         (0, 0, 0, 0), (0, 1, 1, 0),
         (1, 0, 0, 1), (1, 2, 1, -1),
         (2, 1, 0, 0), (2, 2, 1, 0)],
        initial_labels=["I"], final_labels=[0], input_alphabet=[0, 1])


def build_naf2() -> Machine:
    """The same rewriter from its transition function, completed with
    final outputs by reading zeros."""
    m = transducers.from_transition_function(
        _naf_transition, input_alphabet=[0, 1],
        initial_labels=["I"], final_labels=[0])
    return transducers.with_final_word_out(m, 0)


def build_naf_all() -> Machine:
    """NAF rewriter for any expansion over digits {-1, 0, 1}, completed
    with final outputs; six states."""
    m = transducers.from_transition_function(
        _naf_transition, input_alphabet=[-1, 0, 1],
        initial_labels=["I"], final_labels=[0])
    return transducers.with_final_word_out(m, 0)


def build_triple() -> Machine:
    """Multiply a binary expansion by three, completed with final outputs."""
    m = transducers.from_transition_function(
        _triple_transition, input_alphabet=[0, 1],
        initial_labels=[0], final_labels=[0])
    return transducers.with_final_word_out(m, 0)


def build_minus(components=(None, -1, 0, 1)) -> Machine:
    """Componentwise difference on pairs: writes left - right with the
    absent marker read as zero."""
    alphabet = [Pair(a, b)
                for a in map(_component, components)
                for b in map(_component, components)]
    return transducers.operator_lift(
        lambda p: Digit(digit_value(p.left) - digit_value(p.right)), alphabet)


def _component(x) -> Symbol:
    return ABSENT if x is None else Digit(x)


def build_combined_3n_n() -> Machine:
    """Pairs of the binary digits of 3n and of n, read from n in binary."""
    return transducers.cartesian_product(
        build_triple(),
        transducers.identity_transducer([0, 1])).relabeled()


def build_naf3() -> Machine:
    """NAF of 2n from n in binary (each output digit weighs half the
    matching input digit), as difference-of-digits of 3n and n."""
    return transducers.compose(build_minus(), build_combined_3n_n()).relabeled()


def build_naf3n() -> Machine:
    """NAF of 6n from n in binary (the rewriter applied behind the
    multiply-by-three transducer)."""
    return transducers.compose(build_naf3(), build_triple())


def build_T() -> Machine:
    """The 3/2-1/2 rewriter: digitwise NAF(3n/2) - NAF(n/2) with output
    digits -2..2 starting at the digit weighing 1/4."""
    combined = transducers.cartesian_product(build_naf3n(), build_naf3()).relabeled()
    return transducers.compose(build_minus(), combined).relabeled()


def build_W() -> Machine:
    """Hamming weight of the 3/2-1/2 expansion, unary in the output sum;
    simplified by merging behaviorally equivalent states."""
    raw = transducers.compose(
        transducers.weight_transducer(range(-2, 3)), build_T())
    return transducers.simplify(raw)


def build_R() -> Machine:
    """Minimal acceptor of the outputs of the 3/2-1/2 rewriter."""
    return automata.minimize(transducers.output_projection(build_T()))


# ----------------------------------------------------------------------
# convenience wrappers
# ----------------------------------------------------------------------

def naf_of(n: int) -> Expansion:
    """Non-adjacent form of n >= 0 computed by the completed rewriter."""
    completed = transducers.with_final_word_out(build_naf1(), 0)
    return Expansion(completed.transduce(binary_digits(n)), 0)


def three_half_naf_of(n: int) -> Expansion:
    """3/2-1/2 non-adjacent form of n >= 0; digits in -2..2, least
    significant digit weighing 1/4.  Leading and trailing zeros from the
    rewriter are kept."""
    return Expansion(build_T().transduce(binary_digits(n)), -2)
