import itertools
import random

from ptpncov.automata import (
    NFA,
    complement,
    determinize,
    intersect,
    subsequence_closure,
    union,
    word_automaton,
)

AB = ("a", "b")


def all_words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def random_nfa(rng, n_states=4, density=0.4):
    trans = []
    for s in range(n_states):
        for sym in AB:
            for d in range(n_states):
                if rng.random() < density:
                    trans.append((s, sym, d))
    finals = [s for s in range(n_states) if rng.random() < 0.4]
    return NFA(AB, [0], finals, trans, n_states=n_states)


class TestBasics:
    def test_word_automaton(self):
        a = word_automaton(AB, ("a", "b"))
        assert a.accepts(("a", "b"))
        assert not a.accepts(("a",)) and not a.accepts(("b", "a"))

    def test_subsequence_closure(self):
        a = subsequence_closure(AB, ("a", "b"))
        assert a.accepts(("b", "a", "b"))
        assert a.accepts(("a", "a", "b"))
        assert not a.accepts(("b", "a"))

    def test_empty_and_some_word(self):
        a = word_automaton(AB, ("a",))
        assert not a.is_empty()
        assert a.some_word() == ("a",)
        dead = NFA(AB, [0], [], [], n_states=1)
        assert dead.is_empty() and dead.some_word() is None

    def test_enumerate_words(self):
        a = subsequence_closure(AB, ("a",))
        words = set(a.enumerate_words(2))
        assert words == {("a",), ("a", "a"), ("a", "b"), ("b", "a")}


class TestBooleanOps:
    def test_determinize_preserves_language(self):
        rng = random.Random(5)
        for _ in range(25):
            a = random_nfa(rng)
            d = determinize(a)
            for w in all_words(AB, 4):
                assert a.accepts(w) == d.accepts(w)

    def test_complement(self):
        rng = random.Random(6)
        for _ in range(25):
            a = random_nfa(rng)
            c = complement(a)
            for w in all_words(AB, 4):
                assert a.accepts(w) != c.accepts(w)

    def test_intersection_and_union(self):
        rng = random.Random(7)
        for _ in range(25):
            a, b = random_nfa(rng), random_nfa(rng)
            i = intersect(a, b)
            u = union(a, b)
            for w in all_words(AB, 4):
                assert i.accepts(w) == (a.accepts(w) and b.accepts(w))
                assert u.accepts(w) == (a.accepts(w) or b.accepts(w))

    def test_a_and_not_a_empty(self):
        rng = random.Random(8)
        for _ in range(10):
            a = random_nfa(rng)
            assert intersect(a, complement(a)).is_empty()

    def test_union_with_empty(self):
        a = word_automaton(AB, ("a", "b"))
        empty = NFA(AB, [0], [], [], n_states=1)
        u = union(a, empty)
        for w in all_words(AB, 3):
            assert u.accepts(w) == a.accepts(w)
