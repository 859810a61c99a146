"""fsmkit: finite automata and subsequential transducers with exact
arithmetic, plus the signed-digit expansion case studies built on them."""

from .errors import (AnalysisError, ConstructionError, FsmError,
                     InvalidInputError, MachineError, NegativeCycleError,
                     StateCapError)
from .machine import (AUTOMATON, TRANSDUCER, Machine, RunResult, State,
                      Transition, WeightedDigraph, build_machine)
from .symbols import (ABSENT, Digit, Pair, Symbol, parse_word_text, symbol,
                      word)

__all__ = [
    "ABSENT", "AUTOMATON", "AnalysisError", "ConstructionError", "Digit",
    "FsmError", "InvalidInputError", "Machine", "MachineError",
    "NegativeCycleError", "Pair", "RunResult", "State", "StateCapError",
    "Symbol", "TRANSDUCER", "Transition", "WeightedDigraph", "build_machine",
    "parse_word_text", "symbol", "word",
]

__version__ = "0.1.0"
