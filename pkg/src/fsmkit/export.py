"""Text export of machines: Graphviz DOT and TikZ (automata library).

Output is deterministic: states are visited in label order and transitions
in canonical order, so equal machines export to identical bytes.  TikZ
coordinates are user-supplied per state label; states without coordinates
are placed on a circle.
"""

from __future__ import annotations

import math

from .errors import MachineError
from .machine import Machine
from .symbols import AbsentType, Digit, Pair, Symbol, word_key

FORMATS = ("dot", "tikz")


def render(machine: Machine, fmt: str, coordinates=None, format_letter=None) -> str:
    if fmt == "dot":
        return _dot(machine)
    if fmt == "tikz":
        return _tikz(machine, coordinates or {}, format_letter or format_letter_plain)
    raise MachineError(f"unknown export format {fmt!r}; expected one of {FORMATS}")


# ----------------------------------------------------------------------
# DOT
# ----------------------------------------------------------------------

def _quote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', '\\"'))


def _word_text(w) -> str:
    return ",".join(str(s) for s in w) if w else "ε"


def _sorted_states(machine):
    return sorted(machine.states, key=lambda st: st.label)


def _sorted_transitions(machine):
    return sorted(machine.transitions,
                  key=lambda t: (t.source, t.target,
                                 word_key(t.input), word_key(t.output)))


def _dot(machine: Machine) -> str:
    lines = ["digraph machine {", "  rankdir=LR;", "  node [shape=circle];"]
    for i, st in enumerate(_sorted_states(machine)):
        shape = "doublecircle" if st.is_final else "circle"
        text = st.label
        if st.final_output:
            text += " / $:" + _word_text(st.final_output)
        lines.append(f"  {_quote(st.label)} [shape={shape}, label={_quote(text)}];")
        if st.is_initial:
            lines.append(f"  __initial_{i} [shape=point, style=invis];")
            lines.append(f"  __initial_{i} -> {_quote(st.label)};")
    for t in _sorted_transitions(machine):
        if machine.kind == "transducer":
            label = f"{_word_text(t.input)} | {_word_text(t.output)}"
        else:
            label = _word_text(t.input)
        lines.append(
            f"  {_quote(t.source)} -> {_quote(t.target)} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# TikZ
# ----------------------------------------------------------------------

def format_letter_plain(s: Symbol) -> str:
    if isinstance(s, Digit):
        return str(s.value)
    if isinstance(s, AbsentType):
        return r"\sim"
    if isinstance(s, Pair):
        return f"({format_letter_plain(s.left)}, {format_letter_plain(s.right)})"
    raise MachineError(f"cannot format {s!r}")


def format_letter_negative(s: Symbol) -> str:
    """Render negative digits with an overline, e.g. -1 as \\overline{1}."""
    if isinstance(s, Digit) and s.value < 0:
        return r"\overline{" + str(-s.value) + "}"
    if isinstance(s, Pair):
        return (f"({format_letter_negative(s.left)}, "
                f"{format_letter_negative(s.right)})")
    return format_letter_plain(s)


def _tex_escape(text: str) -> str:
    replacements = {"{": r"\{", "}": r"\}", "_": r"\_", "#": r"\#",
                    "%": r"\%", "&": r"\&", "$": r"\$"}
    return "".join(replacements.get(c, c) for c in text)


def _tikz_word(w, fmt) -> str:
    return r"\varepsilon" if not w else " ".join(fmt(s) for s in w)


def _tikz(machine: Machine, coordinates, fmt) -> str:
    states = _sorted_states(machine)
    n = max(len(states), 1)
    ids = {st.label: f"v{i}" for i, st in enumerate(states)}
    lines = [r"\begin{tikzpicture}[auto, initial text=, >=latex]"]
    for i, st in enumerate(states):
        if st.label in coordinates:
            x, y = coordinates[st.label]
        else:
            angle = 2.0 * math.pi * i / n
            x, y = 3.0 * math.cos(angle), 3.0 * math.sin(angle)
        options = ["state"]
        if st.is_initial:
            options.append("initial")
        if st.is_final:
            options.append("accepting")
        lines.append(
            "  \\node[%s] (%s) at (%.3f, %.3f) {$%s$};"
            % (", ".join(options), ids[st.label], float(x), float(y),
               _tex_escape(st.label)))

    # merge parallel transitions into one labeled edge
    grouped: dict = {}
    order = []
    for t in _sorted_transitions(machine):
        key = (t.source, t.target)
        if key not in grouped:
            grouped[key] = []
            order.append(key)
        if machine.kind == "transducer":
            label = (f"{_tikz_word(t.input, fmt)} \\mid "
                     f"{_tikz_word(t.output, fmt)}")
        else:
            label = _tikz_word(t.input, fmt)
        grouped[key].append(label)

    pairs = set(order)
    for source, target in order:
        label = ", ".join(grouped[(source, target)])
        if source == target:
            style = "[loop above]"
        elif (target, source) in pairs:
            style = "[bend left]"
        else:
            style = ""
        lines.append(
            f"  \\path[->] ({ids[source]}) edge{style} "
            f"node {{${label}$}} ({ids[target]});")

    for st in states:
        if st.is_final and st.final_output:
            label = r"\$ \mid " + _tikz_word(st.final_output, fmt)
            lines.append(
                f"  \\path[->] ({ids[st.label]}.45) edge "
                f"node {{${label}$}} ++(45:12mm);")

    lines.append(r"\end{tikzpicture}")
    return "\n".join(lines) + "\n"
