"""Shared machines, corpora and brute-force oracles for the test suite."""

from __future__ import annotations

import random
from pathlib import Path

from montrans import (
    CommutativeMonoid,
    CyclicGroup,
    FreeMonoid,
    Monoid,
    NatAddMonoid,
    TraceMonoid,
    Transducer,
    deserialize,
    lgcd_family,
    make_monoid,
)

DATA = Path(__file__).parent / "data"


def load_machine(name: str) -> Transducer:
    return deserialize((DATA / name).read_text(encoding="utf-8"))


def standard_monoids() -> dict[str, Monoid]:
    """One representative of each shipped monoid family."""
    return {
        "free": FreeMonoid(("α", "β", "γ")),
        "trace": TraceMonoid(("α", "β", "γ"), [("α", "β")]),
        "commutative": CommutativeMonoid(("α", "β")),
        "nat-add": NatAddMonoid(),
        "cyclic-group": CyclicGroup(3),
    }


def beta_loop(kind: str = "free") -> Transducer:
    """Four-state machine recognizing b^n -> β^n·α, with one unreachable and
    one unproductive state."""
    monoid = make_monoid(kind, generators=("α", "β"))
    q = monoid.parse
    return Transducer(
        monoid=monoid,
        alphabet=("a", "b"),
        states=("1", "2", "3", "4"),
        initial=(q("ε"), "1"),
        termination={"1": q("α"), "2": None, "3": q("α"), "4": q("ε")},
        transitions={
            ("1", "a"): (q("ε"), "2"),
            ("1", "b"): (q("β"), "3"),
            ("3", "b"): (q("β"), "3"),
        },
    )


def learning_target(monoid: Monoid | None = None) -> Transducer:
    """Three-state target for the worked learning run.

    Over the free monoid all three states are distinguishable; letting α and β
    commute makes states 1 and 2 recognize the same function.
    """
    monoid = monoid or FreeMonoid(("α", "β", "γ"))
    q = monoid.parse
    return Transducer(
        monoid=monoid,
        alphabet=("a", "b"),
        states=("1", "2", "3"),
        initial=(q("ε"), "1"),
        termination={"1": q("α"), "2": q("α"), "3": q("α")},
        transitions={
            ("1", "a"): (q("γ·α·β"), "2"),
            ("1", "b"): (q("α"), "3"),
            ("2", "a"): (q("γ·β·α"), "2"),
            ("2", "b"): (q("α"), "3"),
            ("3", "a"): (q("γ·α·β"), "2"),
        },
    )


def random_element(monoid: Monoid, rng: random.Random, max_rank: int = 2):
    if isinstance(monoid, (FreeMonoid, TraceMonoid)):
        n = rng.randint(0, max_rank)
        return monoid.canonical(tuple(rng.choice(monoid.generators) for _ in range(n)))
    if isinstance(monoid, CommutativeMonoid):
        n = rng.randint(0, max_rank)
        return monoid.canonical((rng.choice(monoid.generators), 1) for _ in range(n))
    if isinstance(monoid, NatAddMonoid):
        return rng.randint(0, max_rank)
    if isinstance(monoid, CyclicGroup):
        return rng.randrange(monoid.modulus)
    raise TypeError(f"no element generator for {monoid!r}")


def random_machine(
    monoid: Monoid,
    rng: random.Random,
    max_states: int = 6,
    max_letters: int = 3,
    allow_no_initial: bool = True,
    alphabet: tuple[str, ...] | None = None,
) -> Transducer:
    n = rng.randint(1, max_states)
    if alphabet is None:
        alphabet = ("a", "b", "c")[: rng.randint(1, max_letters)]
    states = tuple(f"s{i}" for i in range(n))
    transitions = {}
    for s in states:
        for a in alphabet:
            if rng.random() < 0.8:
                transitions[(s, a)] = (random_element(monoid, rng), rng.choice(states))
    termination = {s: random_element(monoid, rng) if rng.random() < 0.7 else None for s in states}
    initial = None
    if not allow_no_initial or rng.random() < 0.95:
        initial = (random_element(monoid, rng), rng.choice(states))
    return Transducer(
        monoid=monoid,
        alphabet=alphabet,
        states=states,
        initial=initial,
        termination=termination,
        transitions=transitions,
    )


def _rename(t: Transducer, rng: random.Random) -> Transducer:
    order = list(range(len(t.states)))
    rng.shuffle(order)
    names = {s: f"r{order[i]}" for i, s in enumerate(t.states)}
    return Transducer(
        monoid=t.monoid,
        alphabet=t.alphabet,
        states=tuple(names[s] for s in t.states),
        initial=None if t.initial is None else (t.initial[0], names[t.initial[1]]),
        termination={names[s]: v for s, v in t.termination.items()},
        transitions={(names[s], a): (out, names[d]) for (s, a), (out, d) in t.transitions.items()},
    )


def _split_state(t: Transducer, rng: random.Random) -> Transducer:
    """Duplicate one state and reroute a random subset of its incoming edges."""
    victim = rng.choice(t.states)
    twin = victim + "'"
    while twin in t.states:
        twin += "'"
    transitions = {}
    for (s, a), (out, target) in t.transitions.items():
        transitions[(s, a)] = (out, twin if target == victim and rng.random() < 0.5 else target)
    for a in t.alphabet:
        if (victim, a) in t.transitions:
            transitions[(twin, a)] = transitions[(victim, a)]
    initial = t.initial
    if initial is not None and initial[1] == victim and rng.random() < 0.5:
        initial = (initial[0], twin)
    termination = dict(t.termination)
    termination[twin] = termination[victim]
    return Transducer(
        monoid=t.monoid,
        alphabet=t.alphabet,
        states=t.states + (twin,),
        initial=initial,
        termination=termination,
        transitions=transitions,
    )


def _shift_outputs(t: Transducer, rng: random.Random) -> Transducer:
    """Language-preserving output shifts.

    For each chosen state, the common left factor of its termination and
    outgoing outputs is moved onto the incoming edges (for a cyclic group a
    random group element is moved instead, division being total there).
    """
    m = t.monoid
    termination = dict(t.termination)
    transitions = dict(t.transitions)
    initial = t.initial
    for s in t.states:
        if rng.random() < 0.5:
            continue
        local = [termination[s]] + [
            transitions[(s, a)][0] for a in t.alphabet if (s, a) in transitions
        ]
        if isinstance(m, CyclicGroup):
            g = rng.randrange(m.modulus)
        else:
            g = lgcd_family(m, local)
            if g is None or m.is_invertible(g):
                continue
        if termination[s] is not None:
            termination[s] = m.left_divide(g, termination[s])
        for a in t.alphabet:
            if (s, a) in transitions:
                out, target = transitions[(s, a)]
                transitions[(s, a)] = (m.left_divide(g, out), target)
        for key, (out, target) in list(transitions.items()):
            if target == s:
                transitions[key] = (m.mul(out, g), target)
        if initial is not None and initial[1] == s:
            initial = (m.mul(initial[0], g), s)
    return Transducer(
        monoid=m,
        alphabet=t.alphabet,
        states=t.states,
        initial=initial,
        termination=termination,
        transitions=transitions,
    )


def equivalent_pair(monoid: Monoid, rng: random.Random) -> tuple[Transducer, Transducer]:
    """Two structurally different machines recognizing the same function,
    built from a common seed by state splitting and output shifting."""
    seed = random_machine(monoid, rng, max_states=4, allow_no_initial=False)
    left = _rename(_shift_outputs(seed, rng), rng)
    right = seed
    for _ in range(rng.randint(1, 2)):
        right = _split_state(right, rng)
    right = _rename(_shift_outputs(right, rng), rng)
    return left, right


def trace_class(monoid: TraceMonoid, word: tuple) -> set:
    """All words equal to ``word`` in the trace monoid, by adjacent swaps."""
    seen = {word}
    frontier = [word]
    while frontier:
        w = frontier.pop()
        for i in range(len(w) - 1):
            if monoid.independent(w[i], w[i + 1]):
                swapped = w[:i] + (w[i + 1], w[i]) + w[i + 2 :]
                if swapped not in seen:
                    seen.add(swapped)
                    frontier.append(swapped)
    return seen


def brute_trace_lgcd(monoid: TraceMonoid, x: tuple, y: tuple, _cache={}):
    """Independent left-gcd oracle: enumerate every word of each equivalence
    class, collect the canonical left-divisors per length, and take the unique
    common one of maximal length."""

    def divisors(word):
        key = (monoid, word)
        if key not in _cache:
            by_len: dict[int, set] = {}
            for member in trace_class(monoid, word):
                for k in range(len(member) + 1):
                    by_len.setdefault(k, set()).add(monoid.canonical(member[:k]))
            _cache[key] = by_len
        return _cache[key]

    dx, dy = divisors(x), divisors(y)
    best = {()}
    for k in range(1, min(len(x), len(y)) + 1):
        common = dx.get(k, set()) & dy.get(k, set())
        if not common:
            break
        best = common
    assert len(best) == 1, f"expected a unique maximal common divisor, got {best}"
    return next(iter(best))
