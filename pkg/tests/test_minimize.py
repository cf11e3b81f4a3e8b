"""The reach/total/prefix/observe pipeline and the minimality check."""

from __future__ import annotations

import random

import pytest

from montrans import (
    Transducer,
    brute_force_diff,
    check_minimal,
    iso_check,
    minimize,
    observe,
    prefix,
    reach,
    red_row,
    state_lgcds,
    total,
)

from helpers import beta_loop, learning_target, random_machine, standard_monoids


def words_up_to(alphabet, n):
    frontier = [()]
    for w in frontier:
        yield w
        if len(w) < n:
            frontier.extend(w + (a,) for a in alphabet)


def test_reach_drops_unreachable():
    t = beta_loop("free")
    reached = reach(t)
    assert reached.states == ("1", "2", "3")
    assert reach(reached) == reached
    no_initial = Transducer(
        monoid=t.monoid,
        alphabet=t.alphabet,
        states=t.states,
        initial=None,
        termination=t.termination,
        transitions=t.transitions,
    )
    assert reach(no_initial).states == ()


def test_total_drops_unproductive():
    trimmed = total(reach(beta_loop("free")))
    assert trimmed.states == ("1", "3")
    assert ("1", "a") not in trimmed.transitions
    assert total(trimmed) == trimmed


def test_total_of_dead_machine_is_empty():
    m = standard_monoids()["free"]
    dead = Transducer(
        monoid=m,
        alphabet=("a",),
        states=("x", "y"),
        initial=(m.unit(), "x"),
        termination={"x": None, "y": None},
        transitions={("x", "a"): (m.unit(), "y")},
    )
    emptied = total(dead)
    assert emptied.states == () and emptied.initial is None


def test_state_lgcds_commutative_vs_free():
    commutative = total(reach(beta_loop("commutative")))
    betas = state_lgcds(commutative)
    assert betas == {
        "1": commutative.monoid.parse("α"),
        "3": commutative.monoid.parse("α"),
    }
    free = total(reach(beta_loop("free")))
    assert state_lgcds(free) == {"1": (), "3": ()}


def test_state_lgcds_single_state():
    m = standard_monoids()["free"]
    t = Transducer(
        monoid=m, alphabet=("a",), states=("s",), initial=(m.unit(), "s"),
        termination={"s": m.unit()},
    )
    assert state_lgcds(t) == {"s": ()}


def test_prefix_pushes_common_factor():
    trimmed = total(reach(beta_loop("commutative")))
    pushed = prefix(trimmed)
    m = pushed.monoid
    assert pushed.initial == (m.parse("α"), "1")
    assert pushed.termination == {"1": m.unit(), "3": m.unit()}
    assert pushed.transitions == {
        ("1", "b"): (m.parse("β"), "3"),
        ("3", "b"): (m.parse("β"), "3"),
    }
    # every state is left-coprime afterwards
    assert all(m.is_invertible(v) for v in state_lgcds(pushed).values())


def test_prefix_is_identity_when_already_pushed():
    trimmed = total(reach(beta_loop("free")))
    assert prefix(trimmed) == trimmed
    pushed = prefix(total(reach(beta_loop("commutative"))))
    assert prefix(pushed) == pushed


def test_prefix_requires_trim_machine():
    with pytest.raises(ValueError):
        prefix(beta_loop("free"))  # state 2 recognizes nothing


def test_observe_merges_equivalent_states():
    pushed = prefix(total(reach(beta_loop("commutative"))))
    merged, witnesses = observe(pushed)
    m = merged.monoid
    assert merged.states == ("1",)
    assert merged.initial == (m.parse("α"), "1")
    assert merged.termination == {"1": m.unit()}
    assert merged.transitions == {("1", "b"): (m.parse("β"), "1")}
    assert witnesses == {"1": ("1", m.unit()), "3": ("1", m.unit())}


def test_observe_keeps_distinguishable_states():
    target = learning_target()
    merged, witnesses = observe(target)
    assert merged == target
    assert all(rep == s for s, (rep, _) in witnesses.items())


def test_observe_merges_disconnected_twin_copies():
    # a fork leading into two identical sub-machines; the copies must merge
    # with unit witnesses (their languages agree on every word, which the
    # brute-force rows up to length 6 confirm)
    m = standard_monoids()["free"]
    p = m.parse
    t = Transducer(
        monoid=m,
        alphabet=("a", "b"),
        states=("f", "x", "y"),
        initial=(m.unit(), "f"),
        termination={"f": None, "x": p("α"), "y": p("α")},
        transitions={
            ("f", "a"): (p("β"), "x"),
            ("f", "b"): (p("β·β"), "y"),
            ("x", "a"): (p("γ"), "x"),
            ("y", "a"): (p("γ"), "y"),
        },
    )
    rows = {
        s: tuple(t.state_eval(s, w) for w in words_up_to(t.alphabet, 6)) for s in ("x", "y")
    }
    assert rows["x"] == rows["y"]
    merged, witnesses = observe(t)
    assert merged.states == ("f", "x")
    assert witnesses["y"] == ("x", m.unit())
    assert merged.transitions[("f", "b")] == (p("β·β"), "x")


def test_minimize_stage_counts_commutative():
    staged = minimize(beta_loop("commutative"))
    assert staged.state_counts() == (3, 2, 2, 1)
    minimal = staged.minimal
    m = minimal.monoid
    assert minimal.initial == (m.parse("α"), "1")
    assert minimal.termination == {"1": m.unit()}
    assert minimal.transitions == {("1", "b"): (m.parse("β"), "1")}


def test_minimize_stage_counts_free():
    # over the free monoid the trimmed machine's two states recognize the
    # same function (b^n -> β^n·α from both), so they also merge; only the
    # placement of the α differs from the commutative minimization
    staged = minimize(beta_loop("free"))
    assert staged.state_counts() == (3, 2, 2, 1)
    minimal = staged.minimal
    m = minimal.monoid
    assert minimal.initial == (m.unit(), "1")
    assert minimal.termination == {"1": m.parse("α")}
    assert minimal.transitions == {("1", "b"): (m.parse("β"), "1")}


def test_minimize_empty_language():
    m = standard_monoids()["free"]
    dead = Transducer(
        monoid=m,
        alphabet=("a",),
        states=("x",),
        initial=(m.unit(), "x"),
        termination={"x": None},
    )
    staged = minimize(dead)
    assert staged.minimal.states == ()
    assert staged.minimal.initial is None
    assert check_minimal(staged.minimal)


def test_minimize_preserves_language():
    rng = random.Random(21)
    for monoid in standard_monoids().values():
        for _ in range(12):
            t = random_machine(monoid, rng, max_states=5, max_letters=2)
            staged = minimize(t)
            for stage in (staged.reach, staged.total, staged.prefix, staged.minimal):
                for w in words_up_to(t.alphabet, 5):
                    assert stage.eval(w) == t.eval(w), (monoid.kind, stage, w)


def test_minimize_is_idempotent():
    rng = random.Random(22)
    for monoid in standard_monoids().values():
        for _ in range(8):
            t = random_machine(monoid, rng, max_states=5, max_letters=2)
            once = minimize(t).minimal
            twice = minimize(once).minimal
            assert iso_check(once, twice) is not None


def test_minimize_result_passes_check_minimal():
    rng = random.Random(23)
    for monoid in standard_monoids().values():
        for _ in range(12):
            t = random_machine(monoid, rng, max_states=5)
            assert check_minimal(minimize(t).minimal)


def test_observe_agrees_with_brute_force_rows():
    rng = random.Random(24)
    for monoid in standard_monoids().values():
        for _ in range(10):
            t = random_machine(monoid, rng, max_states=4, max_letters=2)
            pushed = prefix(total(reach(t)))
            _, witnesses = observe(pushed)
            words = list(words_up_to(pushed.alphabet, 6))
            rows = {
                s: red_row(monoid, tuple(pushed.state_eval(s, w) for w in words))
                for s in pushed.states
            }
            for s1 in pushed.states:
                for s2 in pushed.states:
                    merged = witnesses[s1][0] == witnesses[s2][0]
                    assert merged == (rows[s1] == rows[s2]), (monoid.kind, s1, s2)


def test_check_minimal_examples():
    assert check_minimal(minimize(beta_loop("commutative")).minimal)
    assert not check_minimal(beta_loop("free"))  # unreachable state
    pushed = prefix(total(reach(beta_loop("commutative"))))
    assert not check_minimal(pushed)  # states 1 and 3 are equivalent
    free_trim = total(reach(beta_loop("free")))
    assert not check_minimal(free_trim)


def test_check_minimal_flags_non_coprime_state():
    m = standard_monoids()["free"]
    p = m.parse
    t = Transducer(
        monoid=m,
        alphabet=("a",),
        states=("s",),
        initial=(m.unit(), "s"),
        termination={"s": p("α")},
        transitions={("s", "a"): (p("α"), "s")},
    )
    assert not check_minimal(t)  # lgcd of the lone state is α, not ε


def test_canonical_minimality_on_split_machines():
    from helpers import equivalent_pair

    rng = random.Random(25)
    for monoid in standard_monoids().values():
        for _ in range(8):
            left, right = equivalent_pair(monoid, rng)
            assert brute_force_diff(left, right, 5) is None
            assert iso_check(minimize(left).minimal, minimize(right).minimal) is not None
