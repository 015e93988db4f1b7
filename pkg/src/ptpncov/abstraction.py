"""Untimed abstraction of near-integer markings.

A marking in delta-form is represented by the integer parts of its token
ages (clamped to cmax+1), organized as a triple: a sequence of multisets for
the high-fraction tokens (increasing fraction), one multiset for integer-age
tokens, and a sequence for the low-fraction tokens (increasing fraction).
Discrete firings and two families of abstract timed steps (infinitesimal
delays and delays just under one time unit) replay the concrete semantics
exactly; costs charge types 3/4 as if one full time unit had passed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .deltaform import decompose, frac, marking_in_delta_form
from .intervals import Interval, age_in, frac_match
from .mset import Multiset, msum
from .nets import Configuration, NetError, PTPN, Transition

LevelToken = Tuple[str, int]  # (place, integer level in [0..cmax+1])


class AbstractionError(NetError):
    pass


@dataclass(frozen=True)
class AbstractConfig:
    state: str
    high: Tuple[Multiset, ...]  # increasing fraction, all nonempty
    center: Multiset
    low: Tuple[Multiset, ...]  # increasing fraction, all nonempty

    def all_tokens(self) -> Multiset:
        return msum(self.high) + self.center + msum(self.low)

    def size(self) -> int:
        return len(self.all_tokens())

    def canonical(self) -> "AbstractConfig":
        return AbstractConfig(
            self.state,
            tuple(b for b in self.high if b),
            self.center,
            tuple(b for b in self.low if b),
        )

    def is_canonical(self) -> bool:
        return all(self.high) and all(self.low)


def render(a: AbstractConfig) -> str:
    """Deterministic bracket rendering: (state, (high..., center, low...))."""

    def block(b: Multiset) -> str:
        return "[" + ",".join(f"({p},{k})" for p, k in b) + "]"

    def side(seq: Tuple[Multiset, ...]) -> str:
        return " ".join(block(b) for b in seq) if seq else "eps"

    return f"({a.state}, ({side(a.high)}, {block(a.center)}, {side(a.low)}))"


def clamp_level(age_floor: int, cmax: int) -> int:
    return min(age_floor, cmax + 1)


def abstract_config(c: Configuration, delta: Fraction, cmax: int) -> AbstractConfig:
    """Abstraction map for configurations whose marking is in delta-form."""
    delta = Fraction(delta)
    if not 0 < delta <= Fraction(2, 5):
        raise AbstractionError("delta must lie in (0, 2/5]")
    if not marking_in_delta_form(c.tokens, delta):
        raise AbstractionError("marking is not in delta-form")
    dec = decompose(c.tokens)

    def level(b: Multiset) -> Multiset:
        return Multiset((p, clamp_level(a.numerator // a.denominator, cmax)) for p, a in b)

    return AbstractConfig(
        c.state,
        tuple(level(b) for b in dec.high),
        level(dec.center),
        tuple(level(b) for b in dec.low),
    )


def center_match(level: int, iv: Interval, cmax: int) -> bool:
    """Can an integer-age token at this (possibly clamped) level match iv?"""
    if level <= cmax:
        return age_in(level, iv)
    return iv.hi is None  # clamped level stands for some integer age > cmax


def shift(b: Multiset, cmax: int) -> Multiset:
    """Advance every level by one, clamping at cmax+1."""
    return Multiset((p, clamp_level(k + 1, cmax)) for p, k in b)


# -- abstract timed steps -----------------------------------------------------


def abstract_timed_steps(a: AbstractConfig, cmax: int) -> List[Tuple[int, AbstractConfig]]:
    """All timed successors with their type (1..4)."""
    if not a.is_canonical():
        raise AbstractionError("configuration not canonical")
    out: List[Tuple[int, AbstractConfig]] = []
    if a.center:
        out.append((1, AbstractConfig(a.state, a.high, Multiset(), (a.center,) + a.low)))
    else:
        # a tiny delay from an integer-free marking leaves the abstraction
        # unchanged: the degenerate type 1 step is the identity
        out.append((1, a))
    if not a.center and a.high:
        out.append(
            (2, AbstractConfig(a.state, a.high[:-1], shift(a.high[-1], cmax), a.low))
        )
    shifted_high = tuple(shift(b, cmax) for b in a.high)
    center_blocks = (a.center,) if a.center else ()
    for k in range(len(a.low) + 1):
        new_high = shifted_high + center_blocks + a.low[:k]
        new_low = tuple(shift(b, cmax) for b in a.low[k:])
        out.append((3, AbstractConfig(a.state, new_high, Multiset(), new_low)))
    for k in range(len(a.low)):
        new_high = shifted_high + center_blocks + a.low[:k]
        new_center = shift(a.low[k], cmax)
        new_low = tuple(shift(b, cmax) for b in a.low[k + 1 :])
        out.append((4, AbstractConfig(a.state, new_high, new_center, new_low)))
    seen = set()
    unique = []
    for tk in out:
        if tk not in seen:
            seen.add(tk)
            unique.append(tk)
    return unique


def storage_rate(a: AbstractConfig, net: PTPN) -> int:
    return sum(net.place_costs[p] for p, _k in a.all_tokens())


def abstract_step_cost(net: PTPN, source: AbstractConfig, kind, transition: str = "") -> int:
    """Cost of one abstract step out of `source`.

    kind is "discrete" (with the transition name) or a timed type 1..4.
    """
    if kind == "discrete":
        return net.transitions[transition].cost
    if kind in (1, 2):
        return 0
    if kind in (3, 4):
        return storage_rate(source, net)
    raise AbstractionError(f"unknown step kind {kind!r}")


# -- abstract discrete steps --------------------------------------------------


def _arc_assignments(
    arcs: Multiset,
    center: Multiset,
    sides: List[Multiset],
    cmax: int,
):
    """All ways to satisfy the arcs from the center and the side blocks.

    Yields (center_taken, taken_per_side_block): multisets of level tokens.
    Center tokens match by exact integer membership, side tokens by the
    fraction-insensitive test.
    """
    arc_list = list(arcs)

    def rec(i: int, center_left: Multiset, sides_left: List[Multiset], acc_c, acc_s):
        if i == len(arc_list):
            yield Multiset(acc_c), [Multiset(s) for s in acc_s]
            return
        p, iv = arc_list[i]
        seen_here = set()
        for tok in set(center_left.support()):
            if tok[0] == p and center_match(tok[1], iv, cmax) and tok not in seen_here:
                seen_here.add(tok)
                yield from rec(
                    i + 1, center_left - Multiset([tok]), sides_left, acc_c + [tok], acc_s
                )
        for bi, blk in enumerate(sides_left):
            for tok in set(blk.support()):
                if tok[0] == p and frac_match(tok[1], iv):
                    new_sides = list(sides_left)
                    new_sides[bi] = blk - Multiset([tok])
                    yield from rec(
                        i + 1,
                        center_left,
                        new_sides,
                        acc_c,
                        [s + ([tok] if j == bi else []) for j, s in enumerate(acc_s)],
                    )

    dedup = set()
    for taken_c, taken_s in rec(0, center, list(sides), [], [[] for _ in sides]):
        key = (taken_c, tuple(taken_s))
        if key not in dedup:
            dedup.add(key)
            yield taken_c, taken_s


def _output_choices(arcs: Multiset, cmax: int):
    """All per-arc output token choices: ('center'|'frac', (place, level))."""
    arc_list = list(arcs)
    options = []
    for p, iv in arc_list:
        opts = []
        for k in range(cmax + 2):
            if center_match(k, iv, cmax):
                opts.append(("center", (p, k)))
            if frac_match(k, iv):
                opts.append(("frac", (p, k)))
        options.append(opts)
    seen = set()
    for combo in itertools.product(*options):
        cen = Multiset(tok for zone, tok in combo if zone == "center")
        fr = Multiset(tok for zone, tok in combo if zone == "frac")
        if (cen, fr) not in seen:
            seen.add((cen, fr))
            yield cen, fr


def _distribute(tokens: Multiset, blocks: Tuple[Multiset, ...]):
    """All side sequences formed from surviving blocks plus `tokens`.

    Each token may join a surviving block or form fresh blocks inserted at
    arbitrary positions (fresh blocks are nonempty, ordered).
    """
    toks = list(tokens)
    results = set()

    def assign(i: int, into: List[List[LevelToken]], groups: List[List[LevelToken]]):
        if i == len(toks):
            base = [blocks[j] + Multiset(into[j]) for j in range(len(blocks))]
            fresh = [Multiset(g) for g in groups]
            for merged in _interleavings(base, fresh):
                results.add(tuple(merged))
            return
        tok = toks[i]
        for j in range(len(into)):
            into[j].append(tok)
            assign(i + 1, into, groups)
            into[j].pop()
        for g in groups:
            g.append(tok)
            assign(i + 1, into, groups)
            g.pop()
        groups.append([tok])
        assign(i + 1, into, groups)
        groups.pop()

    assign(0, [[] for _ in blocks], [])
    return results


def _interleavings(base: List[Multiset], fresh: List[Multiset]):
    """Merge `fresh` blocks (in any order) into `base` keeping base order."""
    if not fresh:
        yield list(base)
        return
    for perm in set(itertools.permutations(fresh)):
        n, k = len(base), len(perm)
        for positions in itertools.combinations(range(n + k), k):
            merged: List[Optional[Multiset]] = [None] * (n + k)
            for pos, blk in zip(positions, perm):
                merged[pos] = blk
            it = iter(base)
            for idx in range(n + k):
                if merged[idx] is None:
                    merged[idx] = next(it)
            yield merged


def abstract_discrete_steps(
    a: AbstractConfig, t: Transition, cmax: int
) -> List[AbstractConfig]:
    """All discrete successors of `a` under t (empty list iff disabled)."""
    if not a.is_canonical():
        raise AbstractionError("configuration not canonical")
    if a.state != t.src:
        return []
    sides = list(a.high) + list(a.low)
    n_high = len(a.high)
    successors: Set[AbstractConfig] = set()
    for in_c, in_s in _arc_assignments(t.inn, a.center, sides, cmax):
        center_rest = a.center - in_c
        side_rest = [sides[i] - in_s[i] for i in range(len(sides))]
        # reads stay in place, so only their existence matters
        if next(iter(_arc_assignments(t.read, center_rest, side_rest, cmax)), None) is not None:
            for out_c, out_f in _output_choices(t.out, cmax):
                new_center = center_rest + out_c
                surv_high = tuple(b for b in side_rest[:n_high] if b)
                surv_low = tuple(b for b in side_rest[n_high:] if b)
                for of_high, of_low in _splits(out_f):
                    for hi_seq in _distribute(of_high, surv_high):
                        for lo_seq in _distribute(of_low, surv_low):
                            successors.add(
                                AbstractConfig(
                                    t.dst, tuple(hi_seq), new_center, tuple(lo_seq)
                                )
                            )
    return sorted(successors, key=render)


def _splits(tokens: Multiset):
    """All two-way splits of a multiset (kept deterministic)."""
    from .mset import sub_multisets

    for part in sub_multisets(tokens):
        yield part, tokens - part


# -- grid concretization ------------------------------------------------------


def concretize(
    a: AbstractConfig,
    low_fracs: Sequence[Fraction],
    high_fracs: Sequence[Fraction],
) -> Configuration:
    """A concrete configuration abstracting back to `a`.

    low_fracs/high_fracs supply one strictly increasing fraction per block;
    levels become integer parts (clamped tokens get an age above cmax).
    """
    if len(low_fracs) < len(a.low) or len(high_fracs) < len(a.high):
        raise AbstractionError("not enough fractions for the block structure")
    toks: List[Tuple[str, Fraction]] = []
    for b, f in zip(a.low, low_fracs):
        if not 0 < f < Fraction(1, 2):
            raise AbstractionError("low fractions must lie in (0,1/2)")
        toks.extend((p, k + f) for p, k in b)
    for p, k in a.center:
        toks.append((p, Fraction(k)))
    for b, f in zip(a.high, high_fracs):
        if not Fraction(1, 2) <= f < 1:
            raise AbstractionError("high fractions must lie in [1/2,1)")
        toks.extend((p, k + f) for p, k in b)
    return Configuration(a.state, Multiset((p, Fraction(x)) for p, x in toks))


def grid_fracs(n: int, lo: Fraction, hi: Fraction, denominator: int = 16) -> List[Fraction]:
    """n strictly increasing grid fractions inside (lo, hi)."""
    fracs = [Fraction(i, denominator) for i in range(1, denominator)]
    inside = [f for f in fracs if lo < f < hi]
    if len(inside) < n:
        raise AbstractionError(f"grid 1/{denominator} too coarse for {n} blocks in ({lo},{hi})")
    return inside[:n]
