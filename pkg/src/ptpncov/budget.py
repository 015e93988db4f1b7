"""Budget-annotated abstract configurations and their orders.

The remaining allowed cost rides inside the control state; discrete firings
and the one-time-unit timed steps (types 3/4) deduct from it, infinitesimal
steps are free.  Three quasi-orders compare configurations with equal
(state, budget): gamma extends beta by extra tokens on free places only
(leq_f), on cost places only (leq_c), or anywhere (leq_fc), always through a
strictly monotone block injection that fixes the center.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .abstraction import (
    AbstractConfig,
    abstract_discrete_steps,
    abstract_timed_steps,
    render,
    storage_rate,
)
from .mset import Multiset
from .nets import NetError, PTPN


class BudgetError(NetError):
    pass


@dataclass(frozen=True)
class BudgetedConfig:
    state: str
    budget: int
    high: Tuple[Multiset, ...]
    center: Multiset
    low: Tuple[Multiset, ...]

    def abstract(self) -> AbstractConfig:
        return AbstractConfig(self.state, self.high, self.center, self.low)

    def size(self) -> int:
        return self.abstract().size()

    def key(self) -> Tuple[str, int]:
        return (self.state, self.budget)


def to_budgeted(a: AbstractConfig, y: int, v: int) -> BudgetedConfig:
    if not 0 <= y <= v:
        raise BudgetError(f"budget {y} outside [0, {v}]")
    return BudgetedConfig(a.state, y, a.high, a.center, a.low)


def render_budgeted(b: BudgetedConfig) -> str:
    return f"(({b.state},{b.budget}), {render(b.abstract())[len(f'({b.state}, '):-1]}"


StepLabel = Tuple  # ("discrete", transition name) or ("timed", type)


def budgeted_steps_a(b: BudgetedConfig, net: PTPN, cmax: int) -> List[Tuple[StepLabel, "BudgetedConfig"]]:
    """Monotone steps: discrete firings plus timed types 1 and 2."""
    out: List[Tuple[StepLabel, BudgetedConfig]] = []
    a = b.abstract()
    for t in net.transitions.values():
        if b.budget < t.cost:
            continue
        for succ in abstract_discrete_steps(a, t, cmax):
            out.append(
                (
                    ("discrete", t.name),
                    BudgetedConfig(succ.state, b.budget - t.cost, succ.high, succ.center, succ.low),
                )
            )
    for kind, succ in abstract_timed_steps(a, cmax):
        if kind in (1, 2):
            out.append(
                (("timed", kind), BudgetedConfig(succ.state, b.budget, succ.high, succ.center, succ.low))
            )
    return _dedup(out)


def budgeted_steps_b(b: BudgetedConfig, net: PTPN, cmax: int) -> List[Tuple[StepLabel, "BudgetedConfig"]]:
    """Full-unit timed steps (types 3 and 4); blocked when the budget is short."""
    z = storage_rate(b.abstract(), net)
    if b.budget < z:
        return []
    out = []
    for kind, succ in abstract_timed_steps(b.abstract(), cmax):
        if kind in (3, 4):
            out.append(
                (("timed", kind), BudgetedConfig(succ.state, b.budget - z, succ.high, succ.center, succ.low))
            )
    return _dedup(out)


def budgeted_steps(b: BudgetedConfig, net: PTPN, cmax: int) -> List[Tuple[StepLabel, "BudgetedConfig"]]:
    return _dedup(budgeted_steps_a(b, net, cmax) + budgeted_steps_b(b, net, cmax))


def _dedup(items):
    seen = set()
    out = []
    for it in items:
        if it not in seen:
            seen.add(it)
            out.append(it)
    return out


# -- orders -------------------------------------------------------------------


def _block_covers(small: Multiset, big: Multiset, allowed: FrozenSet[str]) -> bool:
    if not small <= big:
        return False
    return all(p in allowed for p, _k in big - small)


def _block_allowed(b: Multiset, allowed: FrozenSet[str]) -> bool:
    return all(p in allowed for p, _k in b)


def _side_embeds(
    small: Tuple[Multiset, ...], big: Tuple[Multiset, ...], allowed: FrozenSet[str]
) -> bool:
    """Order-preserving injection of small blocks into big blocks; skipped
    big blocks must live entirely on allowed places."""
    memo = {}

    def rec(i: int, j: int) -> bool:
        if i == len(small):
            return all(_block_allowed(b, allowed) for b in big[j:])
        if len(big) - j < len(small) - i:
            return False
        key = (i, j)
        if key in memo:
            return memo[key]
        ok = False
        if _block_covers(small[i], big[j], allowed):
            ok = rec(i + 1, j + 1)
        if not ok and _block_allowed(big[j], allowed):
            ok = rec(i, j + 1)
        memo[key] = ok
        return ok

    return rec(0, 0)


def config_leq(
    beta: BudgetedConfig, gamma: BudgetedConfig, allowed: FrozenSet[str]
) -> bool:
    if beta.key() != gamma.key():
        return False
    if not _block_covers(beta.center, gamma.center, allowed):
        return False
    return _side_embeds(beta.high, gamma.high, allowed) and _side_embeds(
        beta.low, gamma.low, allowed
    )


def leq_f(beta: BudgetedConfig, gamma: BudgetedConfig, net: PTPN) -> bool:
    return config_leq(beta, gamma, frozenset(net.free_places))


def leq_c(beta: BudgetedConfig, gamma: BudgetedConfig, net: PTPN) -> bool:
    return config_leq(beta, gamma, frozenset(net.cost_places))


def leq_fc(beta: BudgetedConfig, gamma: BudgetedConfig, net: PTPN) -> bool:
    return config_leq(beta, gamma, frozenset(net.places))


def minimal_basis(
    configs: Iterable, leq: Callable[[object, object], bool]
) -> List:
    """Antichain of order-minimal elements with the same upward closure.

    Smallest-first scan with pairwise domination checks; equivalent elements
    keep one deterministic representative.
    """
    items = sorted(set(configs), key=_basis_sort_key)
    kept: List = []
    for x in items:
        if any(leq(y, x) for y in kept):
            continue
        kept = [y for y in kept if not leq(x, y)]
        kept.append(x)
    return kept


def _basis_sort_key(x):
    try:
        return (x.size(), repr(x))
    except AttributeError:
        return (0, repr(x))
