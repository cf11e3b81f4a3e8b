"""Four-stage transducer minimization.

``minimize`` composes, in order:

1. ``reach``   -- drop states unreachable from the initial state;
2. ``total``   -- drop states that recognize the nowhere-defined function;
3. ``prefix``  -- push each state's output left-gcd towards the initial value,
   so every state recognizes a left-coprime function;
4. ``observe`` -- merge states whose functions agree up to an invertible left
   factor, rerouting incoming outputs through the merge witness.

The result is the minimal machine: all states reachable, recognizing distinct
left-coprime functions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalInconsistency, IterationBudgetExceeded
from .monoid import (
    Element,
    PartialValue,
    left_divide_partial,
    lgcd_family,
    mul_partial,
    red_row,
    rows_equal_up_to_left_invertible,
)
from .transducer import Transducer

DEFAULT_ITERATION_CAP = 10_000


@dataclass(frozen=True)
class StagedMinimization:
    """All four pipeline stages plus the merge witnesses of the last one.

    ``state_witnesses`` maps every state that entered the merge stage to its
    representative and the invertible factor relating their functions.
    """

    reach: Transducer
    total: Transducer
    prefix: Transducer
    minimal: Transducer
    state_witnesses: dict[str, tuple[str, Element]]

    def state_counts(self) -> tuple[int, int, int, int]:
        return (
            len(self.reach.states),
            len(self.total.states),
            len(self.prefix.states),
            len(self.minimal.states),
        )


def _restrict(t: Transducer, keep: list[str], drop_initial: bool) -> Transducer:
    kept = set(keep)
    return Transducer(
        monoid=t.monoid,
        alphabet=t.alphabet,
        states=tuple(keep),
        initial=None if (drop_initial or t.initial is None) else t.initial,
        termination={s: t.termination[s] for s in keep},
        transitions={
            (s, a): step
            for (s, a), step in t.transitions.items()
            if s in kept and step[1] in kept
        },
    )


def reach(t: Transducer) -> Transducer:
    """Restriction to the states reachable from the initial state."""
    keep = t.reachable_states()
    return _restrict(t, keep, drop_initial=False)


def total(t: Transducer) -> Transducer:
    """Restriction to productive states; clears the initial pair if its state
    recognizes the nowhere-defined function."""
    keep = t.productive_states()
    drop_initial = t.initial is not None and t.initial[1] not in set(keep)
    return _restrict(t, keep, drop_initial=drop_initial)


def state_lgcds(t: Transducer, iteration_cap: int = DEFAULT_ITERATION_CAP) -> dict[str, PartialValue]:
    """Left-gcd of each state's recognized function, by fixpoint iteration.

    Starting from the termination values, each round folds every state's
    termination with ``output · current(target)`` over its transitions.  The
    iteration stops once consecutive rounds differ only by an invertible
    right factor everywhere (for the trivially-invertible monoids: are
    equal).  Right-noetherianity of the shipped monoids bounds the number of
    strictly-decreasing rounds; the cap guards against misbehaving instances.

    States recognizing ``⊥`` everywhere keep the value ``None``.
    """
    m = t.monoid
    current: dict[str, PartialValue] = {s: t.termination[s] for s in t.states}
    for _ in range(iteration_cap):
        nxt: dict[str, PartialValue] = {}
        for s in t.states:
            row = [t.termination[s]]
            for a in t.alphabet:
                step = t.transitions.get((s, a))
                if step is not None:
                    out, target = step
                    row.append(mul_partial(m, out, current[target]))
            nxt[s] = lgcd_family(m, row)
        stable = True
        for s in t.states:
            old, new = current[s], nxt[s]
            if old is None and new is None:
                continue
            if (old is None) != (new is None):
                stable = False
                break
            if not (m.divides(new, old) and m.is_invertible(m.left_divide(new, old))):
                stable = False
                break
        current = nxt
        if stable:
            return current
    raise IterationBudgetExceeded(
        f"state left-gcds did not stabilize within {iteration_cap} rounds"
    )


def prefix(t: Transducer, iteration_cap: int = DEFAULT_ITERATION_CAP) -> Transducer:
    """Push every state's left-gcd as early as possible.

    Requires a trim machine (``reach`` and ``total`` applied), so each state
    has a defined left-gcd to divide out.
    """
    beta = state_lgcds(t, iteration_cap)
    if any(beta[s] is None for s in t.states):
        raise ValueError("prefix stage requires a trim machine (apply reach and total first)")
    m = t.monoid
    transitions = {}
    for (s, a), (out, target) in t.transitions.items():
        transitions[(s, a)] = (m.left_divide(beta[s], m.mul(out, beta[target])), target)
    initial = t.initial
    if initial is not None:
        value, s0 = initial
        initial = (m.mul(value, beta[s0]), s0)
    return Transducer(
        monoid=m,
        alphabet=t.alphabet,
        states=t.states,
        initial=initial,
        termination={s: left_divide_partial(m, beta[s], t.termination[s]) for s in t.states},
        transitions=transitions,
    )


def _signature_partition(t: Transducer) -> dict[str, tuple]:
    """Refine states by the canonical residuals of their behavior vectors.

    Round ``k`` keys each state by ``red`` of its value vector over all words
    of length at most ``k`` (undefined transitions contribute blocks of
    ``⊥``).  Refinement stops once both the partition and the pattern of
    somewhere-defined vectors are stable: a state whose vector is still
    nowhere defined can hide a genuine split behind a ⊥ block, so partition
    stability alone is not a fixpoint until the (monotone) supports freeze.
    """
    m = t.monoid
    vectors: dict[str, tuple] = {s: (t.termination[s],) for s in t.states}

    def snapshot(vecs):
        keyed = {s: red_row(m, vecs[s]) for s in t.states}
        ids: dict[tuple, int] = {}
        for s in t.states:
            ids.setdefault(keyed[s], len(ids))
        part = {s: ids[keyed[s]] for s in t.states}
        support = {s: any(v is not None for v in vecs[s]) for s in t.states}
        return part, support

    part, support = snapshot(vectors)
    while True:
        width = len(next(iter(vectors.values()))) if vectors else 0
        nxt_vectors = {}
        for s in t.states:
            vec = [t.termination[s]]
            for a in t.alphabet:
                step = t.transitions.get((s, a))
                if step is None:
                    vec.extend([None] * width)
                else:
                    out, target = step
                    vec.extend(mul_partial(m, out, v) for v in vectors[target])
            nxt_vectors[s] = tuple(vec)
        nxt_part, nxt_support = snapshot(nxt_vectors)
        vectors = nxt_vectors
        if nxt_part == part and nxt_support == support:
            return vectors
        part, support = nxt_part, nxt_support


def observe(t: Transducer) -> tuple[Transducer, dict[str, tuple[str, Element]]]:
    """Merge states recognizing functions equal up to invertibles on the left.

    Returns the merged machine and, for every input state, its representative
    (earliest in declaration order) together with the invertible witness
    ``χ`` such that the state's function is ``χ ·`` the representative's.
    Incoming transition and initial values are multiplied by ``χ`` on the
    right when rerouted.
    """
    m = t.monoid
    if not t.states:
        return t, {}
    vectors = _signature_partition(t)
    groups: dict[tuple, str] = {}
    witnesses: dict[str, tuple[str, Element]] = {}
    for s in t.states:
        key = red_row(m, vectors[s])
        rep = groups.setdefault(key, s)
        chi = rows_equal_up_to_left_invertible(m, vectors[s], vectors[rep])
        if chi is None:
            raise InternalInconsistency(
                f"states {s!r} and {rep!r} share a residual signature but no witness"
            )
        witnesses[s] = (rep, chi)

    def reroute(value: Element, target: str) -> tuple[Element, str]:
        rep, chi = witnesses[target]
        return (m.mul(value, chi), rep)

    keep = [s for s in t.states if witnesses[s][0] == s]
    kept = set(keep)
    transitions = {}
    for (s, a), (out, target) in t.transitions.items():
        if s in kept:
            transitions[(s, a)] = reroute(out, target)
    initial = t.initial
    if initial is not None:
        initial = reroute(initial[0], initial[1])
    merged = Transducer(
        monoid=m,
        alphabet=t.alphabet,
        states=tuple(keep),
        initial=initial,
        termination={s: t.termination[s] for s in keep},
        transitions=transitions,
    )
    return merged, witnesses


def minimize(t: Transducer, iteration_cap: int = DEFAULT_ITERATION_CAP) -> StagedMinimization:
    """Run the full pipeline and record every stage."""
    reached = reach(t)
    trimmed = total(reached)
    pushed = prefix(trimmed, iteration_cap)
    minimal, witnesses = observe(pushed)
    return StagedMinimization(
        reach=reached,
        total=trimmed,
        prefix=pushed,
        minimal=minimal,
        state_witnesses=witnesses,
    )


def check_minimal(t: Transducer, iteration_cap: int = DEFAULT_ITERATION_CAP) -> bool:
    """True iff every state is reachable and the states recognize pairwise
    distinct left-coprime functions."""
    if set(t.reachable_states()) != set(t.states):
        return False
    if not t.states:
        return True
    beta = state_lgcds(t, iteration_cap)
    m = t.monoid
    if any(beta[s] is None or not m.is_invertible(beta[s]) for s in t.states):
        return False
    vectors = _signature_partition(t)
    keys = {red_row(m, vectors[s]) for s in t.states}
    return len(keys) == len(t.states)
