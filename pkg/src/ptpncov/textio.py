"""Text formats: net descriptions, run scripts and configurations.

Net format, one declaration per line ('#' starts a comment):

    state q1
    place p1 cost=3
    trans t1 q1 -> q2 cost=1 in p1(0,3] out p2[1,5) p3(2,inf)

Run scripts replay a computation:

    delay 7/10
    fire t1 in=p1:5/2 out=p2:13/10,p3:11/5

Configuration files:

    state q1
    token p1 31/10

All numbers are exact rationals ('a/b' or integers, decimals like 2.5 are
accepted and converted exactly).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .intervals import Interval, parse_interval
from .mset import Multiset
from .nets import (
    Configuration,
    DiscreteStep,
    NetError,
    PTPN,
    Step,
    TimedStep,
    Transition,
    Witness,
    marking,
)


class ParseError(Exception):
    def __init__(self, msg: str, line: int, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


_INTERVAL_RE = re.compile(r"([A-Za-z_][\w.-]*)([\[(][^)\]]*[)\]])")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r}") from exc


def _strip_comment(line: str) -> str:
    idx = line.find("#")
    return line if idx < 0 else line[:idx]


def _parse_arcs(tokens: List[str], lineno: int, col_hint: int) -> Multiset:
    arcs = []
    for tok in tokens:
        m = _INTERVAL_RE.fullmatch(tok)
        if not m:
            raise ParseError(f"bad arc {tok!r} (expected place[lo,hi])", lineno, col_hint)
        try:
            iv = parse_interval(m.group(2))
        except ValueError as exc:
            raise ParseError(str(exc), lineno, col_hint) from exc
        arcs.append((m.group(1), iv))
    return Multiset(arcs)


def parse_net(text: str) -> PTPN:
    states: List[str] = []
    place_costs: Dict[str, int] = {}
    transitions: List[Transition] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "state":
                if len(parts) != 2:
                    raise ParseError("expected: state NAME", lineno)
                states.append(parts[1])
            elif kind == "place":
                if len(parts) < 2:
                    raise ParseError("expected: place NAME [cost=N]", lineno)
                cost = 0
                if len(parts) == 3:
                    if not parts[2].startswith("cost="):
                        raise ParseError("expected cost=N", lineno, len(parts[1]) + 8)
                    cost = int(parts[2][5:])
                elif len(parts) > 3:
                    raise ParseError("trailing tokens after place declaration", lineno)
                place_costs[parts[1]] = cost
            elif kind == "trans":
                if len(parts) < 5 or parts[3] != "->":
                    raise ParseError("expected: trans NAME SRC -> DST [cost=N] ...", lineno)
                name, src, dst = parts[1], parts[2], parts[4]
                rest = parts[5:]
                cost = 0
                if rest and rest[0].startswith("cost="):
                    cost = int(rest[0][5:])
                    rest = rest[1:]
                sections: Dict[str, List[str]] = {"in": [], "read": [], "out": []}
                current: Optional[str] = None
                for tok in rest:
                    if tok in sections:
                        current = tok
                    elif current is None:
                        raise ParseError(f"unexpected token {tok!r} before in/read/out", lineno)
                    else:
                        sections[current].append(tok)
                transitions.append(
                    Transition(
                        name,
                        src,
                        dst,
                        _parse_arcs(sections["in"], lineno, 1),
                        _parse_arcs(sections["read"], lineno, 1),
                        _parse_arcs(sections["out"], lineno, 1),
                        cost,
                    )
                )
            else:
                raise ParseError(f"unknown declaration {kind!r}", lineno)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from exc

    try:
        return PTPN(states, place_costs, transitions)
    except NetError as exc:
        raise ParseError(str(exc), len(text.splitlines()) or 1) from exc


def format_net(net: PTPN) -> str:
    lines = [f"state {q}" for q in sorted(net.states)]
    for p in net.places:
        lines.append(f"place {p} cost={net.place_costs[p]}")
    for t in sorted(net.transitions.values(), key=lambda t: t.name):
        parts = [f"trans {t.name} {t.src} -> {t.dst} cost={t.cost}"]
        for label, arcs in (("in", t.inn), ("read", t.read), ("out", t.out)):
            if arcs:
                parts.append(label)
                parts.extend(f"{p}{iv}" for p, iv in arcs)
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def _parse_token_list(text: str, lineno: int) -> Multiset:
    if not text:
        return Multiset()
    toks = []
    for part in text.split(","):
        if ":" not in part:
            raise ParseError(f"bad token {part!r} (expected place:age)", lineno)
        place, age = part.split(":", 1)
        try:
            toks.append((place.strip(), parse_rational(age)))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from exc
    return marking(toks)


def parse_run_script(text: str) -> List[Step]:
    steps: List[Step] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "delay":
            if len(parts) != 2:
                raise ParseError("expected: delay RATIONAL", lineno)
            try:
                steps.append(TimedStep(parse_rational(parts[1])))
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from exc
        elif parts[0] == "fire":
            if len(parts) < 2:
                raise ParseError("expected: fire TRANSITION [in=...] [read=...] [out=...]", lineno)
            tname = parts[1]
            groups = {"in": Multiset(), "read": Multiset(), "out": Multiset()}
            for tok in parts[2:]:
                if "=" not in tok:
                    raise ParseError(f"bad clause {tok!r}", lineno)
                key, val = tok.split("=", 1)
                if key not in groups:
                    raise ParseError(f"unknown clause {key!r}", lineno)
                groups[key] = _parse_token_list(val, lineno)
            steps.append(DiscreteStep(tname, Witness(groups["in"], groups["read"], groups["out"])))
        else:
            raise ParseError(f"unknown step {parts[0]!r}", lineno)
    return steps


def parse_configuration(text: str) -> Configuration:
    state = None
    tokens: List[Tuple[str, Fraction]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "state":
            if len(parts) != 2:
                raise ParseError("expected: state NAME", lineno)
            state = parts[1]
        elif parts[0] == "token":
            if len(parts) != 3:
                raise ParseError("expected: token PLACE AGE", lineno)
            try:
                tokens.append((parts[1], parse_rational(parts[2])))
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from exc
        else:
            raise ParseError(f"unknown declaration {parts[0]!r}", lineno)
    if state is None:
        raise ParseError("missing state declaration", 1)
    return Configuration(state, marking(tokens))
