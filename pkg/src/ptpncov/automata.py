"""Finite automata over finite alphabets of hashable symbols.

NFAs with explicit alphabets; determinization, product, union, complement
and emptiness are the textbook constructions.  Small alphabets and small
machines throughout, so clarity wins over cleverness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Set, Tuple

Symbol = Hashable


class NFA:
    def __init__(
        self,
        alphabet: Iterable[Symbol],
        initial: Iterable[int] = (0,),
        finals: Iterable[int] = (),
        transitions: Iterable[Tuple[int, Symbol, int]] = (),
        n_states: Optional[int] = None,
    ):
        self.alphabet: FrozenSet[Symbol] = frozenset(alphabet)
        self.initial: FrozenSet[int] = frozenset(initial)
        self.finals: Set[int] = set(finals)
        self.delta: Dict[Tuple[int, Symbol], Set[int]] = {}
        states = set(self.initial) | self.finals
        for src, sym, dst in transitions:
            if sym not in self.alphabet:
                raise ValueError(f"symbol {sym!r} outside the alphabet")
            self.delta.setdefault((src, sym), set()).add(dst)
            states.add(src)
            states.add(dst)
        self.n_states = max(states) + 1 if states else 0
        if n_states is not None:
            self.n_states = max(self.n_states, n_states)

    def add(self, src: int, sym: Symbol, dst: int) -> None:
        if sym not in self.alphabet:
            raise ValueError(f"symbol {sym!r} outside the alphabet")
        self.delta.setdefault((src, sym), set()).add(dst)
        self.n_states = max(self.n_states, src + 1, dst + 1)

    def step(self, states: FrozenSet[int], sym: Symbol) -> FrozenSet[int]:
        out: Set[int] = set()
        for s in states:
            out |= self.delta.get((s, sym), set())
        return frozenset(out)

    def accepts(self, word: Iterable[Symbol]) -> bool:
        cur = self.initial
        for sym in word:
            cur = self.step(cur, sym)
            if not cur:
                return False
        return any(s in self.finals for s in cur)

    def successors(self, state: int) -> Iterable[Tuple[Symbol, int]]:
        for (src, sym), dsts in self.delta.items():
            if src == state:
                for d in dsts:
                    yield sym, d

    def transitions(self) -> Iterable[Tuple[int, Symbol, int]]:
        for (src, sym), dsts in sorted(self.delta.items(), key=lambda kv: (kv[0][0], repr(kv[0][1]))):
            for dst in sorted(dsts):
                yield src, sym, dst

    def is_empty(self) -> bool:
        """No accepted word (reachability check)."""
        seen = set(self.initial)
        stack = list(self.initial)
        while stack:
            s = stack.pop()
            if s in self.finals:
                return False
            for _sym, d in self.successors(s):
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
        return True

    def some_word(self) -> Optional[Tuple[Symbol, ...]]:
        """A shortest accepted word, or None."""
        from collections import deque

        queue = deque((s, ()) for s in sorted(self.initial))
        seen = set(self.initial)
        while queue:
            s, word = queue.popleft()
            if s in self.finals:
                return word
            for sym, d in sorted(self.successors(s), key=lambda x: (repr(x[0]), x[1])):
                if d not in seen:
                    seen.add(d)
                    queue.append((d, word + (sym,)))
        return None

    def enumerate_words(self, max_length: int) -> Iterable[Tuple[Symbol, ...]]:
        """All accepted words up to a length bound (breadth-first)."""
        from collections import deque

        queue = deque([(self.initial, ())])
        while queue:
            states, word = queue.popleft()
            if any(s in self.finals for s in states):
                yield word
            if len(word) == max_length:
                continue
            for sym in sorted(self.alphabet, key=repr):
                nxt = self.step(states, sym)
                if nxt:
                    queue.append((nxt, word + (sym,)))


def determinize(nfa: NFA) -> NFA:
    """Subset construction; the result is complete over the same alphabet."""
    alphabet = sorted(nfa.alphabet, key=repr)
    index: Dict[FrozenSet[int], int] = {nfa.initial: 0}
    order = [nfa.initial]
    trans: List[Tuple[int, Symbol, int]] = []
    i = 0
    while i < len(order):
        cur = order[i]
        for sym in alphabet:
            nxt = nfa.step(cur, sym)
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
            trans.append((index[cur], sym, index[nxt]))
        i += 1
    finals = [index[s] for s in order if any(x in nfa.finals for x in s)]
    return NFA(nfa.alphabet, [0], finals, trans, n_states=len(order))


def complement(a: NFA) -> NFA:
    dfa = determinize(a)
    finals = set(range(dfa.n_states)) - dfa.finals
    return NFA(
        dfa.alphabet,
        dfa.initial,
        finals,
        list(dfa.transitions()),
        n_states=dfa.n_states,
    )


def intersect(a: NFA, b: NFA) -> NFA:
    if a.alphabet != b.alphabet:
        raise ValueError("alphabet mismatch")
    index: Dict[Tuple[int, int], int] = {}
    trans: List[Tuple[int, Symbol, int]] = []
    finals: List[int] = []

    def idx(pair: Tuple[int, int]) -> int:
        if pair not in index:
            index[pair] = len(index)
            if pair[0] in a.finals and pair[1] in b.finals:
                finals.append(index[pair])
        return index[pair]

    stack = []
    initial = []
    for s in sorted(a.initial):
        for t in sorted(b.initial):
            initial.append(idx((s, t)))
            stack.append((s, t))
    seen = set(stack)
    while stack:
        s, t = stack.pop()
        for sym, sd in a.successors(s):
            for (src2, sym2), dsts in b.delta.items():
                if src2 == t and sym2 == sym:
                    for td in dsts:
                        trans.append((idx((s, t)), sym, idx((sd, td))))
                        if (sd, td) not in seen:
                            seen.add((sd, td))
                            stack.append((sd, td))
    return NFA(a.alphabet, initial, finals, trans, n_states=max(len(index), 1))


def union(a: NFA, b: NFA) -> NFA:
    if a.alphabet != b.alphabet:
        raise ValueError("alphabet mismatch")
    off = a.n_states
    trans = list(a.transitions()) + [
        (s + off, sym, d + off) for s, sym, d in b.transitions()
    ]
    return NFA(
        a.alphabet,
        list(a.initial) + [s + off for s in b.initial],
        list(a.finals) + [s + off for s in b.finals],
        trans,
        n_states=a.n_states + b.n_states,
    )


def word_automaton(alphabet: Iterable[Symbol], word: Tuple[Symbol, ...]) -> NFA:
    trans = [(i, sym, i + 1) for i, sym in enumerate(word)]
    return NFA(alphabet, [0], [len(word)], trans, n_states=len(word) + 1)


def subsequence_closure(alphabet: Iterable[Symbol], word: Tuple[Symbol, ...]) -> NFA:
    """All words containing `word` as a (scattered) subsequence."""
    alphabet = frozenset(alphabet)
    trans = []
    for i, sym in enumerate(word):
        trans.append((i, sym, i + 1))
        for other in alphabet:
            trans.append((i, other, i))
    for other in alphabet:
        trans.append((len(word), other, len(word)))
    return NFA(alphabet, [0], [len(word)], trans, n_states=len(word) + 1)
