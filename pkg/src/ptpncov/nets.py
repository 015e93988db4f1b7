"""Priced timed Petri nets: syntax and exact operational semantics.

Tokens carry exact rational ages.  Arcs are labeled with integer-bounded
intervals; input arcs consume a matching token, read arcs require one but
leave it untouched, output arcs create tokens with caller-chosen ages inside
the arc interval.  Transitions are lazy: nothing is ever forced to fire.

Costs: firing a transition costs Cost(t); letting x time units pass costs
x * sum over places of |tokens on p| * Cost(p).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from .intervals import Interval, age_in
from .mset import EMPTY, Multiset

Rational = Union[int, Fraction]
Token = Tuple[str, Fraction]  # (place, age)
Arc = Tuple[str, Interval]  # (place, interval)


class NetError(Exception):
    """Ill-formed net, configuration or step."""


@dataclass(frozen=True)
class Transition:
    name: str
    src: str
    dst: str
    inn: Multiset  # of Arc
    read: Multiset  # of Arc
    out: Multiset  # of Arc
    cost: int = 0


class PTPN:
    """A priced timed Petri net with control states."""

    def __init__(
        self,
        states: Sequence[str],
        place_costs: Dict[str, int],
        transitions: Sequence[Transition],
    ):
        self.states: FrozenSet[str] = frozenset(states)
        self.place_costs: Dict[str, int] = dict(place_costs)
        self.transitions: Dict[str, Transition] = {}
        for t in transitions:
            if t.name in self.transitions:
                raise NetError(f"duplicate transition {t.name}")
            if t.src not in self.states or t.dst not in self.states:
                raise NetError(f"transition {t.name} uses unknown control state")
            for p, _iv in itertools.chain(t.inn, t.read, t.out):
                if p not in self.place_costs:
                    raise NetError(f"transition {t.name} uses unknown place {p}")
            if t.cost < 0:
                raise NetError(f"transition {t.name} has negative cost")
            self.transitions[t.name] = t
        for p, c in self.place_costs.items():
            if c < 0:
                raise NetError(f"place {p} has negative cost")

    @property
    def places(self) -> Tuple[str, ...]:
        return tuple(sorted(self.place_costs))

    @property
    def cost_places(self) -> Tuple[str, ...]:
        return tuple(p for p in self.places if self.place_costs[p] > 0)

    @property
    def free_places(self) -> Tuple[str, ...]:
        return tuple(p for p in self.places if self.place_costs[p] == 0)

    @property
    def cmax(self) -> int:
        """Maximum finite constant on any arc (0 for a net without arcs)."""
        best = 0
        for t in self.transitions.values():
            for _p, iv in itertools.chain(t.inn, t.read, t.out):
                best = max(best, iv.max_bound())
        return best

    def cost_of(self, name: str) -> int:
        if name in self.transitions:
            return self.transitions[name].cost
        if name in self.place_costs:
            return self.place_costs[name]
        raise NetError(f"unknown place or transition {name}")


def token(place: str, age: Rational) -> Token:
    age = Fraction(age)
    if age < 0:
        raise NetError("token ages are nonnegative")
    return (place, age)


def marking(tokens: Sequence[Tuple[str, Rational]]) -> Multiset:
    return Multiset(token(p, a) for p, a in tokens)


@dataclass(frozen=True)
class Configuration:
    state: str
    tokens: Multiset = EMPTY  # of Token

    def size(self) -> int:
        return len(self.tokens)

    def place_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for p, _a in self.tokens:
            counts[p] = counts.get(p, 0) + 1
        return counts

    def __str__(self) -> str:
        toks = ", ".join(f"({p},{a})" for p, a in self.tokens)
        return f"<{self.state}, [{toks}]>"


# -- match predicate -------------------------------------------------------


def match(tokens: Multiset, arcs: Multiset) -> Optional[Tuple[Tuple[Token, Arc], ...]]:
    """Find a bijection pairing each token with an arc on the same place whose
    interval contains the token's age.  Returns the pairing, or None.

    Exhaustive bipartite matching with memo on (token index, used arc set);
    fine for the handful of arcs a transition carries.
    """
    toks = list(tokens)
    arc_list = list(arcs)
    if len(toks) != len(arc_list):
        return None
    n = len(toks)
    compat = [
        [j for j, (q, iv) in enumerate(arc_list) if toks[i][0] == q and age_in(toks[i][1], iv)]
        for i in range(n)
    ]
    assignment: List[Optional[int]] = [None] * n
    dead = set()

    def assign(i: int, used: int) -> bool:
        if i == n:
            return True
        if (i, used) in dead:
            return False
        for j in compat[i]:
            if not used & (1 << j):
                assignment[i] = j
                if assign(i + 1, used | (1 << j)):
                    return True
        dead.add((i, used))
        return False

    if not assign(0, 0):
        return None
    return tuple((toks[i], arc_list[assignment[i]]) for i in range(n))


# -- transition relation ---------------------------------------------------


def timed_step(c: Configuration, x: Rational, net: PTPN) -> Tuple[Configuration, Fraction]:
    """Let x > 0 time units pass: all ages advance by x; storage costs accrue."""
    x = Fraction(x)
    if x <= 0:
        raise NetError("delays must be positive")
    new_tokens = Multiset((p, a + x) for p, a in c.tokens)
    cost = x * sum(net.place_costs[p] for p, _a in c.tokens)
    return Configuration(c.state, new_tokens), Fraction(cost)


def timed_cost(c: Configuration, x: Rational, net: PTPN) -> Fraction:
    return timed_step(c, x, net)[1]


@dataclass(frozen=True)
class Witness:
    """Token-level firing choice: consumed, read and produced token multisets."""

    inn: Multiset
    read: Multiset
    out: Multiset


def _decompositions(tokens: Multiset, arcs: Multiset):
    """All sub-multisets of `tokens` that match `arcs`, with their pairing."""
    seen = set()
    places_needed = Multiset(p for p, _iv in arcs)
    candidates = [t for t in set(tokens.support()) if places_needed.count(t[0]) > 0]
    k = len(arcs)
    for combo in itertools.combinations_with_replacement(sorted(candidates), k):
        sub = Multiset(combo)
        if sub in seen:
            continue
        seen.add(sub)
        if not sub <= tokens:
            continue
        if match(sub, arcs) is not None:
            yield sub


def enabled_discrete(c: Configuration, t: Transition) -> List[Tuple[Multiset, Multiset]]:
    """All (I, R) choices enabling t from c; empty list iff t is disabled."""
    if c.state != t.src:
        return []
    result = []
    for inn in _decompositions(c.tokens, t.inn):
        rest = c.tokens - inn
        for read in _decompositions(rest, t.read):
            result.append((inn, read))
    return result


def disablement_reasons(c: Configuration, t: Transition) -> List[str]:
    """Why t cannot fire from c: subset of {'state', 'input', 'read'}.

    Input/read failures are diagnosed on the marking alone, so a
    configuration can be flagged for a wrong control state and missing
    tokens at the same time.
    """
    reasons = []
    if c.state != t.src:
        reasons.append("state")
    inputs = list(_decompositions(c.tokens, t.inn))
    if not inputs:
        reasons.append("input")
    else:
        if not any(
            next(iter(_decompositions(c.tokens - inn, t.read)), None) is not None
            for inn in inputs
        ):
            reasons.append("read")
    return reasons


def fire_discrete(
    c: Configuration, t: Transition, witness: Witness, net: PTPN
) -> Tuple[Configuration, int]:
    """Fire t with a given token-level witness; returns successor and cost."""
    if c.state != t.src:
        raise NetError(f"{t.name}: control state {c.state} != {t.src}")
    if not witness.inn + witness.read <= c.tokens:
        raise NetError(f"{t.name}: witness tokens not present in marking")
    if match(witness.inn, t.inn) is None:
        raise NetError(f"{t.name}: input witness does not match input arcs")
    if match(witness.read, t.read) is None:
        raise NetError(f"{t.name}: read witness does not match read arcs")
    if match(witness.out, t.out) is None:
        raise NetError(f"{t.name}: output witness does not match output arcs")
    new_tokens = c.tokens - witness.inn + witness.out
    return Configuration(t.dst, new_tokens), t.cost


# -- runs -------------------------------------------------------------------


@dataclass(frozen=True)
class TimedStep:
    delay: Fraction


@dataclass(frozen=True)
class DiscreteStep:
    transition: str
    witness: Witness


Step = Union[TimedStep, DiscreteStep]


@dataclass
class Run:
    net: PTPN
    configs: List[Configuration]
    steps: List[Step] = field(default_factory=list)

    def __post_init__(self):
        if not self.configs:
            raise NetError("a run needs at least one configuration")
        if len(self.steps) != len(self.configs) - 1:
            raise NetError("step/configuration count mismatch")

    def validate(self) -> None:
        for i, step in enumerate(self.steps):
            cur, nxt = self.configs[i], self.configs[i + 1]
            if isinstance(step, TimedStep):
                succ, _ = timed_step(cur, step.delay, self.net)
            else:
                t = self.net.transitions[step.transition]
                succ, _ = fire_discrete(cur, t, step.witness, self.net)
            if succ != nxt:
                raise NetError(f"step {i} does not produce the recorded configuration")

    def cost(self) -> Fraction:
        total = Fraction(0)
        for i, step in enumerate(self.steps):
            cur = self.configs[i]
            if isinstance(step, TimedStep):
                total += timed_cost(cur, step.delay, self.net)
            else:
                total += self.net.transitions[step.transition].cost
        return total


def run_cost(r: Run) -> Fraction:
    r.validate()
    return r.cost()


def apply_step(net: PTPN, c: Configuration, step: Step) -> Configuration:
    if isinstance(step, TimedStep):
        return timed_step(c, step.delay, net)[0]
    t = net.transitions[step.transition]
    return fire_discrete(c, t, step.witness, net)[0]


def build_run(net: PTPN, start: Configuration, steps: Sequence[Step]) -> Run:
    configs = [start]
    for s in steps:
        configs.append(apply_step(net, configs[-1], s))
    return Run(net, configs, list(steps))
