"""Active learning of the minimal transducer from membership and equivalence
queries.

The learner maintains an observation table over a prefix-closed set ``Q`` and
a suffix-closed set ``T`` of input words.  For every prefix ``q`` and column
``x`` in the alphabet extended with the empty word, the raw row of target
values over ``T`` is factored as ``lambda(q, x) · r(q, x, ·)`` with
``lambda`` the row's left-gcd and ``r`` its left-coprime residual.  A table
with no closure or consistency defect assembles into a hypothesis machine,
which an equivalence oracle either accepts or refutes with a counterexample
word whose prefixes are then added to ``Q``.

Consistency defects come in three kinds, checked in a fixed order:

* ``TOT`` -- a definedness mismatch: a prefix whose row is nowhere defined
  has a defined extension, or two merged rows disagree on whether an
  extension is defined;
* ``INV`` -- a row's left-gcd fails to left-divide one of its extensions;
* ``INJ`` -- two merged rows have defined extensions that break the merge.

All scans run in deterministic order (``Q`` insertion order, alphabet order,
``T`` insertion order, closure before consistency) so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from .errors import BudgetExceeded, InternalInconsistency
from .monoid import (
    Element,
    Monoid,
    PartialValue,
    lgcd_family,
    red_row,
    rows_equal_up_to_left_invertible,
)
from .transducer import Transducer, Word

#: Answers the target function's value on a word (``None`` for undefined).
MembershipFn = Callable[[Word], PartialValue]

#: Returns ``None`` to accept a hypothesis, or an object with a ``word``
#: attribute naming a counterexample.
EquivalenceFn = Callable[[Transducer], Optional[object]]

EMPTY: Word = ()


class DefectKind(Enum):
    CLOSURE = "closure"
    TOT = "consistency-tot"
    INV = "consistency-inv"
    INJ = "consistency-inj"


@dataclass(frozen=True)
class Defect:
    """A table defect: a prefix to add to ``Q`` (closure) or a suffix to add
    to ``T`` (the three consistency kinds)."""

    kind: DefectKind
    word: Word

    def __str__(self):
        return f"{self.kind.value}({'·'.join(self.word) or 'e'})"


@dataclass
class LearnStats:
    membership_queries: int = 0
    equivalence_queries: int = 0
    q_updates: int = 0
    t_updates: int = 0
    loop_iterations: int = 0

    def to_doc(self) -> dict:
        return {
            "membership_queries": self.membership_queries,
            "equivalence_queries": self.equivalence_queries,
            "q_updates": self.q_updates,
            "t_updates": self.t_updates,
            "loop_iterations": self.loop_iterations,
        }


@dataclass
class LearnLimits:
    max_q: int = 1000
    max_iterations: int = 10_000


class ObservationTable:
    """The learner's working state: ``Q``, ``T`` and the factored tables.

    Membership answers are memoized forever; the oracle is consulted exactly
    once per distinct word, and ``queries`` counts those consultations.
    """

    def __init__(self, monoid: Monoid, alphabet: tuple[str, ...]):
        self.monoid = monoid
        self.alphabet = tuple(alphabet)
        self.prefixes: list[Word] = [EMPTY]
        self.suffixes: list[Word] = [EMPTY]
        self.values: dict[Word, PartialValue] = {}
        self.lam: dict[tuple[Word, str], PartialValue] = {}
        self.res: dict[tuple[Word, str, Word], PartialValue] = {}
        self.queries = 0

    # ``''`` stands for the empty-word column alongside the alphabet letters.
    def _columns(self) -> tuple[str, ...]:
        return ("",) + self.alphabet

    def _cell_word(self, q: Word, x: str, t: Word) -> Word:
        return q + ((x,) if x else ()) + t

    def fill(self, membership: MembershipFn) -> None:
        """Query every missing cell, then refactor all rows."""
        for q in self.prefixes:
            for x in self._columns():
                for t in self.suffixes:
                    w = self._cell_word(q, x, t)
                    if w not in self.values:
                        self.values[w] = membership(w)
                        self.queries += 1
        for q in self.prefixes:
            for x in self._columns():
                raw = tuple(self.values[self._cell_word(q, x, t)] for t in self.suffixes)
                g = lgcd_family(self.monoid, raw)
                self.lam[(q, x)] = g
                reduced = red_row(self.monoid, raw)
                for t, v in zip(self.suffixes, reduced):
                    self.res[(q, x, t)] = v

    def row(self, q: Word, x: str = "") -> tuple:
        return tuple(self.res[(q, x, t)] for t in self.suffixes)

    def raw_value(self, q: Word, x: str, t: Word) -> PartialValue:
        return self.values[self._cell_word(q, x, t)]

    def add_prefix(self, word: Word) -> int:
        """Add ``word`` and any missing prefixes to ``Q``; returns the count added."""
        added = 0
        have = set(self.prefixes)
        for k in range(1, len(word) + 1):
            p = word[:k]
            if p not in have:
                self.prefixes.append(p)
                have.add(p)
                added += 1
        return added

    def add_suffix(self, word: Word) -> int:
        """Add ``word`` and any missing suffixes to ``T``; returns the count added."""
        added = 0
        have = set(self.suffixes)
        for k in range(1, len(word) + 1):
            s = word[len(word) - k :]
            if s not in have:
                self.suffixes.append(s)
                have.add(s)
                added += 1
        return added


def _is_bottom(row: tuple) -> bool:
    return all(v is None for v in row)


def _merged_pairs(table: ObservationTable) -> dict[Word, list[tuple[Word, Element]]]:
    """For each prefix, the other prefixes whose state rows match it up to an
    invertible left factor (with the witness)."""
    m = table.monoid
    rows = {q: table.row(q) for q in table.prefixes}
    out: dict[Word, list[tuple[Word, Element]]] = {q: [] for q in table.prefixes}
    for i, q1 in enumerate(table.prefixes):
        for q2 in table.prefixes[i + 1 :]:
            chi = rows_equal_up_to_left_invertible(m, rows[q1], rows[q2])
            if chi is not None:
                out[q1].append((q2, chi))
                out[q2].append((q1, m.inverse(chi)))
    return out


def find_defect(table: ObservationTable) -> Optional[Defect]:
    """First defect in deterministic scan order, or ``None`` if a hypothesis
    can be built."""
    m = table.monoid
    state_rows = {q: table.row(q) for q in table.prefixes}

    # Closure: a letter extension whose (somewhere-defined) row matches no
    # prefix row, even up to an invertible left factor.
    for q in table.prefixes:
        for a in table.alphabet:
            row = table.row(q, a)
            if _is_bottom(row):
                continue
            if not any(
                rows_equal_up_to_left_invertible(m, row, state_rows[q2]) is not None
                for q2 in table.prefixes
            ):
                return Defect(DefectKind.CLOSURE, q + (a,))

    merged = _merged_pairs(table)

    # Definedness mismatches.
    for q in table.prefixes:
        bottom = _is_bottom(state_rows[q])
        for a in table.alphabet:
            for t in table.suffixes:
                defined = table.res[(q, a, t)] is not None
                if defined and bottom:
                    return Defect(DefectKind.TOT, (a,) + t)
                for q2, _ in merged[q]:
                    if defined != (table.res[(q2, a, t)] is not None):
                        return Defect(DefectKind.TOT, (a,) + t)

    # Row left-gcds must left-divide every defined extension value.
    for q in table.prefixes:
        g = table.lam[(q, "")]
        if g is None:
            continue
        for a in table.alphabet:
            for t in table.suffixes:
                v = table.raw_value(q, a, t)
                if v is not None and not m.divides(g, v):
                    return Defect(DefectKind.INV, (a,) + t)

    # Merged rows must keep matching after the extension.
    for q in table.prefixes:
        g = table.lam[(q, "")]
        if g is None:
            continue
        for a in table.alphabet:
            for t in table.suffixes:
                v1 = table.raw_value(q, a, t)
                if v1 is None:
                    continue
                for q2, chi in merged[q]:
                    v2 = table.raw_value(q2, a, t)
                    d1 = m.left_divide(g, v1)
                    d2 = m.left_divide(table.lam[(q2, "")], v2)
                    if d1 != m.mul(chi, d2):
                        return Defect(DefectKind.INJ, (a,) + t)
    return None


def apply_defect(table: ObservationTable, defect: Defect, membership: MembershipFn) -> int:
    """Grow the table along ``defect`` and refill; returns words added."""
    if defect.kind is DefectKind.CLOSURE:
        added = table.add_prefix(defect.word)
    else:
        added = table.add_suffix(defect.word)
    table.fill(membership)
    return added


def _state_ids(words: list[Word], alphabet: tuple[str, ...]) -> dict[Word, str]:
    single = all(len(a) == 1 for a in alphabet)
    ids: dict[Word, str] = {}
    used: set[str] = set()
    for w in words:
        base = "e" if not w else ("".join(w) if single else "·".join(w))
        while base in used:
            base = f"⟨{base}⟩"
        ids[w] = base
        used.add(base)
    return ids


def build_hypothesis(table: ObservationTable) -> Transducer:
    """Assemble the machine of a defect-free table.

    States are picked greedily from ``Q`` in insertion order: every prefix
    with a somewhere-defined row that matches no earlier pick.  Transitions
    follow the unique matching state row, with the matching witness folded
    into the output.
    """
    m = table.monoid
    states: list[Word] = []
    for q in table.prefixes:
        row = table.row(q)
        if _is_bottom(row):
            continue
        if any(
            rows_equal_up_to_left_invertible(m, row, table.row(s)) is not None for s in states
        ):
            continue
        states.append(q)

    ids = _state_ids(states, table.alphabet)
    state_rows = {s: table.row(s) for s in states}
    termination = {ids[s]: table.res[(s, "", EMPTY)] for s in states}

    transitions = {}
    for q in states:
        for a in table.alphabet:
            row = table.row(q, a)
            if _is_bottom(row):
                continue
            for target in states:
                chi = rows_equal_up_to_left_invertible(m, row, state_rows[target])
                if chi is not None:
                    try:
                        step = m.left_divide(table.lam[(q, "")], table.lam[(q, a)])
                    except Exception as exc:  # divisibility is defect-freeness
                        raise InternalInconsistency(str(exc)) from exc
                    transitions[(ids[q], a)] = (m.mul(step, chi), ids[target])
                    break
            else:
                raise InternalInconsistency(
                    f"no state row matches the ({'·'.join(q) or 'e'}, {a}) row"
                )

    initial = None
    if not _is_bottom(table.row(EMPTY)):
        initial = (table.lam[(EMPTY, "")], ids[EMPTY])
    return Transducer(
        monoid=m,
        alphabet=table.alphabet,
        states=tuple(ids[s] for s in states),
        initial=initial,
        termination=termination,
        transitions=transitions,
    )


def process_counterexample(table: ObservationTable, word: Word, membership: MembershipFn) -> int:
    """Add the counterexample and its missing prefixes to ``Q`` and refill."""
    added = table.add_prefix(word)
    if added:
        table.fill(membership)
    return added


def learn(
    monoid: Monoid,
    alphabet: tuple[str, ...],
    membership: MembershipFn,
    equivalence: EquivalenceFn,
    limits: Optional[LearnLimits] = None,
    observer: Optional[Callable[[str, object], None]] = None,
) -> tuple[Transducer, LearnStats]:
    """Run the main learning loop until the equivalence oracle accepts.

    Raises :class:`BudgetExceeded` (carrying the statistics and the table)
    when the prefix-count or iteration cap is hit.  ``observer``, when given,
    receives ``("defect", Defect)``, ``("hypothesis", Transducer)`` and
    ``("counterexample", Word)`` events as the run unfolds.
    """
    limits = limits or LearnLimits()
    stats = LearnStats()
    table = ObservationTable(monoid, alphabet)

    def notify(event: str, payload) -> None:
        if observer is not None:
            observer(event, payload)

    def check_caps() -> None:
        stats.membership_queries = table.queries
        if len(table.prefixes) > limits.max_q:
            raise BudgetExceeded(
                f"prefix set grew past the cap of {limits.max_q}", stats, table
            )
        if stats.loop_iterations > limits.max_iterations:
            raise BudgetExceeded(
                f"exceeded {limits.max_iterations} loop iterations", stats, table
            )

    table.fill(membership)
    while True:
        stats.loop_iterations += 1
        check_caps()
        defect = find_defect(table)
        if defect is not None:
            notify("defect", defect)
            added = apply_defect(table, defect, membership)
            if defect.kind is DefectKind.CLOSURE:
                stats.q_updates += added
            else:
                stats.t_updates += added
            check_caps()
            continue
        hypothesis = build_hypothesis(table)
        notify("hypothesis", hypothesis)
        stats.equivalence_queries += 1
        verdict = equivalence(hypothesis)
        if verdict is None:
            stats.membership_queries = table.queries
            return hypothesis, stats
        word = tuple(verdict.word)
        notify("counterexample", word)
        stats.q_updates += process_counterexample(table, word, membership)
        check_caps()
