"""Machine file format: one JSON document per machine.

Symbols are encoded as an integer (digit), the string "~" (absent marker)
or a two-element array (pair).  Words are arrays, least significant first.
Serialization is bit-exact: states are sorted by label and transitions
lexicographically, so equal machines always produce identical bytes.
"""

from __future__ import annotations

import json

from .errors import ConstructionError
from .machine import Machine, State, Transition
from .symbols import ABSENT, AbsentType, Digit, Pair, Symbol, word_key


def encode_symbol(s: Symbol):
    if isinstance(s, Digit):
        return s.value
    if isinstance(s, AbsentType):
        return "~"
    if isinstance(s, Pair):
        return [encode_symbol(s.left), encode_symbol(s.right)]
    raise ConstructionError(f"cannot encode {s!r}")


def decode_symbol(x) -> Symbol:
    if isinstance(x, bool):
        raise ConstructionError("booleans are not symbols")
    if isinstance(x, int):
        return Digit(x)
    if x == "~":
        return ABSENT
    if isinstance(x, list) and len(x) == 2:
        return Pair(decode_symbol(x[0]), decode_symbol(x[1]))
    raise ConstructionError(f"cannot decode symbol {x!r}")


def encode_word(w):
    return [encode_symbol(s) for s in w]


def decode_word(x):
    if not isinstance(x, list):
        raise ConstructionError(f"a word must be an array, got {x!r}")
    return tuple(decode_symbol(s) for s in x)


def machine_to_doc(m: Machine) -> dict:
    doc = {
        "kind": m.kind,
        "alphabet": [encode_symbol(s) for s in m.input_alphabet],
    }
    if m.output_alphabet is not None:
        doc["output_alphabet"] = [encode_symbol(s) for s in m.output_alphabet]
    doc["states"] = [
        {
            "label": st.label,
            "initial": st.is_initial,
            "final": st.is_final,
            "final_output": encode_word(st.final_output),
        }
        for st in sorted(m.states, key=lambda st: st.label)
    ]
    doc["transitions"] = [
        {
            "from": t.source,
            "to": t.target,
            "input": encode_word(t.input),
            "output": encode_word(t.output),
        }
        for t in sorted(
            m.transitions,
            key=lambda t: (t.source, t.target, word_key(t.input), word_key(t.output)),
        )
    ]
    return doc


def machine_from_doc(doc: dict) -> Machine:
    try:
        kind = doc["kind"]
        alphabet = [decode_symbol(s) for s in doc["alphabet"]]
        out_alphabet = None
        if "output_alphabet" in doc:
            out_alphabet = [decode_symbol(s) for s in doc["output_alphabet"]]
        states = tuple(
            State(
                label=row["label"],
                is_initial=bool(row["initial"]),
                is_final=bool(row["final"]),
                final_output=decode_word(row.get("final_output", [])),
            )
            for row in doc["states"]
        )
        transitions = tuple(
            Transition(
                source=row["from"],
                target=row["to"],
                input=decode_word(row["input"]),
                output=decode_word(row["output"]),
            )
            for row in doc["transitions"]
        )
    except (KeyError, TypeError) as exc:
        raise ConstructionError(f"malformed machine document: {exc}") from exc
    return Machine(kind, states, transitions, alphabet, out_alphabet)


def dumps(m: Machine) -> str:
    return json.dumps(machine_to_doc(m), indent=2) + "\n"


def loads(text: str) -> Machine:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConstructionError(f"not a machine file: {exc}") from exc
    return machine_from_doc(doc)


def save(m: Machine, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps(m))


def load(path) -> Machine:
    with open(path, "r", encoding="utf-8") as handle:
        return loads(handle.read())
