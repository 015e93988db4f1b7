"""Encoding priced timed automata as priced timed Petri nets.

One zero-cost place per clock holding exactly one token whose age is the
clock value; one place per location holding at most one token.  Guards become
read arcs, resets become an input arc [0,inf) plus an output arc [0,0] on the
clock place.  Location costs move to the location places, edge costs to the
transitions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .intervals import Interval
from .mset import Multiset
from .nets import Configuration, NetError, PTPN, Transition, marking


@dataclass(frozen=True)
class PTAEdge:
    name: str
    src: str
    dst: str
    guards: Tuple[Tuple[str, Interval], ...] = ()  # (clock, interval)
    resets: Tuple[str, ...] = ()
    cost: int = 0


@dataclass
class PricedTimedAutomaton:
    locations: List[str]
    clocks: List[str]
    edges: List[PTAEdge]
    location_costs: Dict[str, int] = field(default_factory=dict)
    initial: str = ""

    def __post_init__(self):
        if not self.initial and self.locations:
            self.initial = self.locations[0]


def loc_place(loc: str) -> str:
    return f"at_{loc}"


def clock_place(clock: str) -> str:
    return f"clk_{clock}"


def encode_priced_timed_automaton(pta: PricedTimedAutomaton) -> Tuple[PTPN, Configuration]:
    """Translate a PTA into a PTPN plus the matching initial configuration."""
    states = ["run"]
    place_costs: Dict[str, int] = {}
    for loc in pta.locations:
        place_costs[loc_place(loc)] = pta.location_costs.get(loc, 0)
    for clk in pta.clocks:
        place_costs[clock_place(clk)] = 0

    anywhere = Interval(0, None, False, True)
    zero = Interval(0, 0)
    transitions = []
    for e in pta.edges:
        for clk, iv in e.guards:
            if clk not in pta.clocks:
                raise NetError(f"edge {e.name} guards unknown clock {clk}")
        inn = [(loc_place(e.src), anywhere)]
        out = [(loc_place(e.dst), zero)]
        read = []
        for clk, iv in e.guards:
            if clk in e.resets:
                # consumed below; the guard rides on the input arc instead
                continue
            read.append((clock_place(clk), iv))
        for clk in e.resets:
            guard = dict(e.guards).get(clk, anywhere)
            inn.append((clock_place(clk), guard))
            out.append((clock_place(clk), zero))
        transitions.append(
            Transition(
                e.name,
                "run",
                "run",
                Multiset(inn),
                Multiset(read),
                Multiset(out),
                e.cost,
            )
        )

    net = PTPN(states, place_costs, transitions)
    init = marking([(loc_place(pta.initial), 0)] + [(clock_place(c), 0) for c in pta.clocks])
    return net, Configuration("run", init)
