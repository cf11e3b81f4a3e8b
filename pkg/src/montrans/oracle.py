"""Oracles for the learner and for cross-validation.

``membership_oracle`` and ``equivalence_oracle`` wrap a reference machine as
the two query functions the learner needs.  ``iso_check`` decides structural
equality of two minimal machines up to state renaming and invertible output
factors, ``brute_force_diff`` is the dumb word-enumeration oracle used to
validate everything else, and ``adversarial_oracle`` answers membership
queries with free-monoid representatives chosen so that a free-monoid
learning run never converges.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .errors import NotDivisible, NotMinimalInput, SearchBoundExceeded, UnknownLetter
from .minimize import check_minimal, minimize
from .monoid import Element, FreeMonoid, PartialValue, mul_partial
from .transducer import Transducer, Word


@dataclass(frozen=True)
class CounterExample:
    """A word on which two machines disagree, with both canonical values."""

    word: Word
    left_value: PartialValue
    right_value: PartialValue


#: Equivalence verdicts are ``None`` (equivalent) or a counterexample.
EquivalenceVerdict = Optional[CounterExample]


def membership_oracle(reference: Transducer) -> Callable[[Word], PartialValue]:
    """The reference machine's recognized function."""
    return reference.eval


def words_in_length_lex(alphabet: tuple[str, ...], max_len: int) -> Iterator[Word]:
    """All words of length at most ``max_len``, shortest first, then by
    alphabet order."""
    frontier: deque[Word] = deque([()])
    while frontier:
        w = frontier.popleft()
        yield w
        if len(w) < max_len:
            frontier.extend(w + (a,) for a in alphabet)


def brute_force_diff(t1: Transducer, t2: Transducer, max_len: int) -> Optional[Word]:
    """First word (length-lex order) up to ``max_len`` where evaluations
    differ, or ``None``.  Pure enumeration; kept free of shortcuts so it can
    serve as the independent oracle for the clever paths."""
    if t1.alphabet != t2.alphabet:
        raise ValueError("machines must share an input alphabet")
    for w in words_in_length_lex(t1.alphabet, max_len):
        if t1.eval(w) != t2.eval(w):
            return w
    return None


def _step(t: Transducer, config, letter):
    if config is None:
        return None
    value, state = config
    nxt = t.transitions.get((state, letter))
    if nxt is None:
        return None
    out, target = nxt
    return (t.monoid.mul(value, out), target)


def _config_key(m, c1, c2):
    # Future differences only depend on the states and on the two carried
    # values up to a common left factor (the shipped monoids are
    # left-cancellative), so equivalent configuration pairs seen on a later
    # word can be pruned.
    if c1 is None and c2 is None:
        return None
    if c1 is None:
        return ("dead-left", c2[1])
    if c2 is None:
        return ("dead-right", c1[1])
    g = m.lgcd2(c1[0], c2[0])
    return (c1[1], c2[1], m.left_divide(g, c1[0]), m.left_divide(g, c2[0]))


def _first_difference(t1: Transducer, t2: Transducer, max_len: int) -> Optional[Word]:
    """Length-lex-first word where evaluations differ, with configuration
    pruning; returns ``None`` only when the search space is exhausted."""
    m = t1.monoid
    seen = set()
    frontier: deque[tuple[Word, object, object]] = deque([((), t1.initial, t2.initial)])
    while frontier:
        w, c1, c2 = frontier.popleft()
        v1 = None if c1 is None else mul_partial(m, c1[0], t1.termination[c1[1]])
        v2 = None if c2 is None else mul_partial(m, c2[0], t2.termination[c2[1]])
        if v1 != v2:
            return w
        if len(w) >= max_len:
            continue
        for a in t1.alphabet:
            n1, n2 = _step(t1, c1, a), _step(t2, c2, a)
            if n1 is None and n2 is None:
                continue
            key = _config_key(m, n1, n2)
            if key in seen:
                continue
            seen.add(key)
            frontier.append((w + (a,), n1, n2))
    return None


def equivalence_oracle(reference: Transducer) -> Callable[[Transducer], EquivalenceVerdict]:
    """Exact equivalence with counterexample extraction.

    Each call minimizes both machines; if they are isomorphic up to
    invertibles the hypothesis is accepted, otherwise the first differing
    word in length-lex order is returned with both values.
    """

    def oracle(hypothesis: Transducer) -> EquivalenceVerdict:
        if hypothesis.monoid != reference.monoid:
            raise ValueError("hypothesis and reference use different monoids")
        if hypothesis.alphabet != reference.alphabet:
            raise ValueError("hypothesis and reference use different alphabets")
        min_ref = minimize(reference).minimal
        min_hyp = minimize(hypothesis).minimal
        if iso_check(min_ref, min_hyp) is not None:
            return None
        bound = (len(min_ref.states) + 1) * (len(min_hyp.states) + 1)
        word = _first_difference(reference, hypothesis, bound)
        if word is None:
            raise SearchBoundExceeded(
                f"non-isomorphic machines with no difference up to length {bound}"
            )
        return CounterExample(word, reference.eval(word), hypothesis.eval(word))

    return oracle


def iso_check(t1: Transducer, t2: Transducer) -> Optional[dict[str, tuple[str, Element]]]:
    """State bijection with invertible witnesses between two minimal machines.

    Returns ``{state of t1: (state of t2, χ)}`` where each paired state of
    ``t1`` recognizes ``χ ·`` its partner's function, or ``None`` when no such
    bijection exists.  Differing state counts are rejected before minimality
    is validated; equal-count non-minimal inputs raise
    :class:`NotMinimalInput`.
    """
    if t1.monoid != t2.monoid:
        raise ValueError("machines use different monoids")
    if t1.alphabet != t2.alphabet:
        raise ValueError("machines use different alphabets")
    if len(t1.states) != len(t2.states):
        return None
    if not check_minimal(t1) or not check_minimal(t2):
        raise NotMinimalInput("iso_check requires minimal machines")
    if t1.initial is None and t2.initial is None:
        return {}
    if (t1.initial is None) or (t2.initial is None):
        return None

    m = t1.monoid
    (v1, s1), (v2, s2) = t1.initial, t2.initial
    try:
        chi0 = m.left_divide(v1, v2)
    except NotDivisible:
        return None
    if not m.is_invertible(chi0):
        return None

    pairing: dict[str, tuple[str, Element]] = {s1: (s2, chi0)}
    queue = deque([(s1, s2, chi0)])
    while queue:
        a1, a2, chi = queue.popleft()
        if t1.termination[a1] != mul_partial(m, chi, t2.termination[a2]):
            return None
        for a in t1.alphabet:
            step1 = t1.transitions.get((a1, a))
            step2 = t2.transitions.get((a2, a))
            if (step1 is None) != (step2 is None):
                return None
            if step1 is None:
                continue
            (m1, n1), (m2, n2) = step1, step2
            try:
                chi2 = m.left_divide(m1, m.mul(chi, m2))
            except NotDivisible:
                return None
            if not m.is_invertible(chi2):
                return None
            if n1 in pairing:
                if pairing[n1] != (n2, chi2):
                    return None
            else:
                pairing[n1] = (n2, chi2)
                queue.append((n1, n2, chi2))
    if len(pairing) != len(t1.states):
        return None
    if len({partner for partner, _ in pairing.values()}) != len(pairing):
        return None
    return pairing


ADVERSARY_GENERATORS = ("α", "β", "γ")


def adversarial_oracle() -> Callable[[Word], PartialValue]:
    """Membership answers over the free monoid on α, β, γ for the one-letter
    input alphabet {a}: the word ``aⁿ`` is answered with ``αⁿβⁿγ``.

    The answers are chosen representatives of ``(αβ)ⁿγ`` under the commutation
    ``αβ = βα``; a free-monoid learner fed these answers keeps finding closure
    defects forever, while the trace-monoid learner converges.
    """
    monoid = FreeMonoid(ADVERSARY_GENERATORS)

    def oracle(word: Word) -> PartialValue:
        for letter in word:
            if letter != "a":
                raise UnknownLetter(f"adversary answers words over {{'a'}}, got {letter!r}")
        n = len(word)
        return monoid.canonical(("α",) * n + ("β",) * n + ("γ",))

    return oracle
