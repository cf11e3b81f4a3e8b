"""Deterministic transducers with monoid outputs: evaluation, reachability,
JSON serialization and DOT export.

Partiality is encoded by absence: the initial pair is optional, transitions
may be missing, and termination values may be ``None`` (the undefined ``⊥``).
A machine recognizes the partial function ``w -> init · outputs(w) · term``,
undefined as soon as any step is.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Optional

from .errors import SchemaError, UnknownLetter
from .monoid import (
    Element,
    Monoid,
    PartialValue,
    monoid_from_wire,
    mul_partial,
    render_partial,
)

#: Input words are tuples of alphabet letters; the empty tuple is the empty word.
Word = tuple  # tuple[str, ...]

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Transducer:
    """An immutable deterministic transducer.

    `termination` has one entry per state (``None`` meaning undefined) and
    `transitions` maps ``(state, letter)`` to an ``(output, target)`` pair.
    State order is declaration order and is used wherever a deterministic
    scan matters.
    """

    monoid: Monoid
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    initial: Optional[tuple[Element, str]]
    termination: dict[str, PartialValue] = field(default_factory=dict)
    transitions: dict[tuple[str, str], tuple[Element, str]] = field(default_factory=dict)

    def __post_init__(self):
        state_set = set(self.states)
        if len(state_set) != len(self.states):
            raise ValueError("duplicate state ids")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate alphabet letters")
        if self.initial is not None and self.initial[1] not in state_set:
            raise ValueError(f"initial state {self.initial[1]!r} is not declared")
        term = {s: self.termination.get(s) for s in self.states}
        for s in self.termination:
            if s not in state_set:
                raise ValueError(f"termination references unknown state {s!r}")
        for s, v in term.items():
            if v is not None and self.monoid.canonical(v) != v:
                raise ValueError(f"non-canonical termination value on {s!r}")
        object.__setattr__(self, "termination", term)
        for (s, a), (out, target) in self.transitions.items():
            if s not in state_set:
                raise ValueError(f"transition from unknown state {s!r}")
            if a not in self.alphabet:
                raise ValueError(f"transition on unknown letter {a!r}")
            if target not in state_set:
                raise ValueError(f"transition into unknown state {target!r}")
            if self.monoid.canonical(out) != out:
                raise ValueError(f"non-canonical output on {s!r} --{a}-->")
        if self.initial is not None and self.monoid.canonical(self.initial[0]) != self.initial[0]:
            raise ValueError("non-canonical initial value")

    # -- evaluation --------------------------------------------------------

    def _check_word(self, word: Word) -> None:
        for a in word:
            if a not in self.alphabet:
                raise UnknownLetter(f"letter {a!r} is not in the alphabet {list(self.alphabet)}")

    def _run(self, config: Optional[tuple[Element, str]], word: Word) -> PartialValue:
        if config is None:
            return None
        value, state = config
        for a in word:
            step = self.transitions.get((state, a))
            if step is None:
                return None
            out, state = step
            value = self.monoid.mul(value, out)
        return mul_partial(self.monoid, value, self.termination[state])

    def eval(self, word: Word) -> PartialValue:
        """Value of the recognized function on ``word`` (``None`` for ``⊥``)."""
        self._check_word(word)
        return self._run(self.initial, word)

    def state_eval(self, state: str, word: Word) -> PartialValue:
        """Value recognized from ``state`` with a unit initial value."""
        if state not in self.termination:
            raise ValueError(f"unknown state {state!r}")
        self._check_word(word)
        return self._run((self.monoid.unit(), state), word)

    # -- structure ---------------------------------------------------------

    def reachable_states(self) -> list[str]:
        """Forward closure from the initial state, in declaration order."""
        if self.initial is None:
            return []
        seen = {self.initial[1]}
        frontier = [self.initial[1]]
        while frontier:
            s = frontier.pop()
            for a in self.alphabet:
                step = self.transitions.get((s, a))
                if step is not None and step[1] not in seen:
                    seen.add(step[1])
                    frontier.append(step[1])
        return [s for s in self.states if s in seen]

    def productive_states(self) -> list[str]:
        """Backward closure from states with defined termination."""
        incoming: dict[str, set[str]] = {s: set() for s in self.states}
        for (s, _), (_, target) in self.transitions.items():
            incoming[target].add(s)
        seen = {s for s in self.states if self.termination[s] is not None}
        frontier = list(seen)
        while frontier:
            s = frontier.pop()
            for p in incoming[s]:
                if p not in seen:
                    seen.add(p)
                    frontier.append(p)
        return [s for s in self.states if s in seen]

    # -- serialization -----------------------------------------------------

    def to_doc(self) -> dict:
        m = self.monoid
        transitions = [
            {
                "from": s,
                "letter": a,
                "output": m.encode(self.transitions[(s, a)][0]),
                "to": self.transitions[(s, a)][1],
            }
            for s in self.states
            for a in self.alphabet
            if (s, a) in self.transitions
        ]
        return {
            "format_version": FORMAT_VERSION,
            "monoid": m.to_wire(),
            "alphabet": list(self.alphabet),
            "states": list(self.states),
            "initial": None
            if self.initial is None
            else {"value": m.encode(self.initial[0]), "state": self.initial[1]},
            "termination": {
                s: None if self.termination[s] is None else m.encode(self.termination[s])
                for s in self.states
            },
            "transitions": transitions,
        }

    def serialize(self) -> str:
        """Canonical JSON text; round-trips byte-identically."""
        return json.dumps(self.to_doc(), ensure_ascii=False, indent=2) + "\n"

    def to_dot(self) -> str:
        """Deterministic Graphviz digraph of the machine.

        Termination values appear in node labels (``⊥`` omitted), edges carry
        ``letter / output`` and the initial state gets an entry arrow labeled
        with the initial value.
        """
        m = self.monoid
        lines = ["digraph transducer {", "  rankdir=LR;", '  node [shape=circle];']
        for s in self.states:
            t = self.termination[s]
            label = s if t is None else f"{s} / {m.render(t)}"
            shape = "" if t is None else ", shape=doublecircle"
            lines.append(f'  "{s}" [label="{label}"{shape}];')
        if self.initial is not None:
            value, s0 = self.initial
            lines.append('  "__start__" [shape=point, label=""];')
            lines.append(f'  "__start__" -> "{s0}" [label="{m.render(value)}"];')
        for s in self.states:
            for a in self.alphabet:
                step = self.transitions.get((s, a))
                if step is not None:
                    out, target = step
                    lines.append(f'  "{s}" -> "{target}" [label="{a} / {m.render(out)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def render_value(self, value: PartialValue) -> str:
        return render_partial(self.monoid, value)

    def __repr__(self):
        return f"Transducer({len(self.states)} states, {self.monoid.kind})"


def _expect(doc: dict, key: str, kind, path: str):
    if key not in doc:
        raise SchemaError(f"{path}.{key}", "missing field")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"{path}.{key}", f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _decode_element(monoid: Monoid, value, path: str) -> Element:
    try:
        element = monoid.decode(value)
    except Exception as exc:
        raise SchemaError(path, str(exc)) from None
    if monoid.encode(element) != value:
        warnings.warn(f"{path}: non-canonical element canonicalized", stacklevel=2)
    return element


def deserialize(text: str) -> Transducer:
    """Parse and validate a machine document; raises :class:`SchemaError`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected a JSON object")
    version = _expect(doc, "format_version", int, "$")
    if version != FORMAT_VERSION:
        raise SchemaError("$.format_version", f"unsupported version {version}")
    monoid = monoid_from_wire(_expect(doc, "monoid", dict, "$"), "$.monoid")
    alphabet = _expect(doc, "alphabet", list, "$")
    states = _expect(doc, "states", list, "$")
    for i, a in enumerate(alphabet):
        if not isinstance(a, str) or not a:
            raise SchemaError(f"$.alphabet[{i}]", "letters must be non-empty strings")
    if len(set(alphabet)) != len(alphabet):
        raise SchemaError("$.alphabet", "duplicate letters")
    for i, s in enumerate(states):
        if not isinstance(s, str) or not s:
            raise SchemaError(f"$.states[{i}]", "state ids must be non-empty strings")
    if len(set(states)) != len(states):
        raise SchemaError("$.states", "duplicate state ids")
    state_set = set(states)

    raw_initial = _expect(doc, "initial", None, "$")
    initial = None
    if raw_initial is not None:
        if not isinstance(raw_initial, dict):
            raise SchemaError("$.initial", "expected null or {value, state}")
        s0 = _expect(raw_initial, "state", str, "$.initial")
        if s0 not in state_set:
            raise SchemaError("$.initial.state", f"unknown state {s0!r}")
        value = _decode_element(monoid, _expect(raw_initial, "value", None, "$.initial"), "$.initial.value")
        initial = (value, s0)

    raw_term = _expect(doc, "termination", dict, "$")
    termination: dict[str, PartialValue] = {}
    for s, v in raw_term.items():
        if s not in state_set:
            raise SchemaError(f"$.termination.{s}", f"unknown state {s!r}")
        termination[s] = None if v is None else _decode_element(monoid, v, f"$.termination.{s}")

    raw_transitions = _expect(doc, "transitions", list, "$")
    transitions: dict[tuple[str, str], tuple[Element, str]] = {}
    for i, entry in enumerate(raw_transitions):
        path = f"$.transitions[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError(path, "expected an object")
        s = _expect(entry, "from", str, path)
        a = _expect(entry, "letter", str, path)
        target = _expect(entry, "to", str, path)
        if s not in state_set:
            raise SchemaError(f"{path}.from", f"unknown state {s!r}")
        if a not in alphabet:
            raise SchemaError(f"{path}.letter", f"unknown letter {a!r}")
        if target not in state_set:
            raise SchemaError(f"{path}.to", f"unknown state {target!r}")
        if (s, a) in transitions:
            raise SchemaError(f"{path}.letter", f"duplicate transition on ({s!r}, {a!r})")
        out = _decode_element(monoid, _expect(entry, "output", None, path), f"{path}.output")
        transitions[(s, a)] = (out, target)

    return Transducer(
        monoid=monoid,
        alphabet=tuple(alphabet),
        states=tuple(states),
        initial=initial,
        termination=termination,
        transitions=transitions,
    )


def parse_word(alphabet: tuple[str, ...], text: str) -> Word:
    """Parse an input word: letters joined by ``·``, or a bare string when all
    alphabet letters are single characters.  ``e``/``ε``/empty denote the
    empty word unless they are themselves letters."""
    if text == "" or (text in ("e", "ε") and text not in alphabet):
        return ()
    if "·" in text:
        letters = text.split("·")
    elif all(len(a) == 1 for a in alphabet):
        letters = list(text)
    else:
        raise UnknownLetter("multi-character alphabet requires ·-separated words")
    word = tuple(letters)
    for a in word:
        if a not in alphabet:
            raise UnknownLetter(f"letter {a!r} is not in the alphabet {list(alphabet)}")
    return word


def render_word(word: Word) -> str:
    if not word:
        return "e"
    if all(len(a) == 1 for a in word):
        return "".join(word)
    return "·".join(word)
