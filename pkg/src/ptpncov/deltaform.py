"""Fractional-part analysis of markings and cost-preserving run retiming.

A marking decomposes uniquely into groups of equal fractional age: groups
with fraction >= 1/2 (indices -m..-1, increasing fraction), the integer-age
group (index 0) and groups with fraction in (0,1/2) (indices 1..n, increasing
fraction).  Timed steps can be normalized so that at most one group reaches
an integer age per step ("detailed").  Retiming replaces the delays and the
ages of created tokens by values arbitrarily close to integers without
raising the cost; feasibility of a fixed firing structure is a polyhedron
whose matrix has a special two-block shape and is totally unimodular, so the
cost optimum sits at an integer vertex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .intervals import Interval
from .linprog import Infeasible, lexmin_vertex
from .mset import Multiset
from .nets import (
    Configuration,
    DiscreteStep,
    NetError,
    PTPN,
    Run,
    Step,
    TimedStep,
    Witness,
    build_run,
)


def frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class FractionalDecomposition:
    """Groups of a marking keyed by fractional age; center holds fraction 0."""

    high: Tuple[Multiset, ...]  # fractions >= 1/2, increasing
    center: Multiset  # fraction 0 (may be empty)
    low: Tuple[Multiset, ...]  # fractions in (0,1/2), increasing

    def parts(self) -> Tuple[Multiset, ...]:
        return self.high + (self.center,) + self.low

    def recompose(self) -> Multiset:
        total = Multiset()
        for part in self.parts():
            total = total + part
        return total


def decompose(m: Multiset) -> FractionalDecomposition:
    groups: Dict[Fraction, List] = {}
    for p, a in m:
        groups.setdefault(frac(a), []).append((p, a))
    center = Multiset(groups.get(Fraction(0), []))
    high = tuple(
        Multiset(groups[f]) for f in sorted(g for g in groups if g >= Fraction(1, 2))
    )
    low = tuple(
        Multiset(groups[f])
        for f in sorted(g for g in groups if Fraction(0) < g < Fraction(1, 2))
    )
    return FractionalDecomposition(high, center, low)


def _epsilon_of(m: Multiset) -> Fraction:
    """Largest fractional part over the marking (0 when empty/all integer).

    1 - epsilon is the time until the first token reaches an integer age.
    """
    fracs = [frac(a) for _p, a in m]
    return max(fracs) if fracs else Fraction(0)


def is_detailed(c: Configuration, x: Fraction) -> bool:
    """A delay is detailed when at most the highest-fraction group reaches an
    integer age, and only from a marking without integer-age tokens."""
    x = Fraction(x)
    if x <= 0:
        raise NetError("delays must be positive")
    eps = _epsilon_of(c.tokens)
    if 0 < x < 1 - eps:
        return True
    center_empty = all(frac(a) != 0 for _p, a in c.tokens)
    return center_empty and x == 1 - eps


def run_is_detailed(r: Run) -> bool:
    return all(
        is_detailed(r.configs[i], step.delay)
        for i, step in enumerate(r.steps)
        if isinstance(step, TimedStep)
    )


def make_detailed(r: Run) -> Run:
    """Split every timed step at integer-crossing instants.

    Same endpoints, same discrete steps, identical total cost; output is
    detailed.  Already-detailed runs come back unchanged.
    """
    steps: List[Step] = []
    for i, step in enumerate(r.steps):
        if not isinstance(step, TimedStep):
            steps.append(step)
            continue
        cur = r.configs[i]
        rem = Fraction(step.delay)
        while rem > 0:
            if is_detailed(cur, rem):
                steps.append(TimedStep(rem))
                cur, _ = _advance(cur, rem)
                rem = Fraction(0)
                continue
            eps = _epsilon_of(cur.tokens)
            center_empty = all(frac(a) != 0 for _p, a in cur.tokens)
            if center_empty:
                d = min(rem, 1 - eps)
            else:
                d = min(rem, (1 - eps) / 2)
            steps.append(TimedStep(d))
            cur, _ = _advance(cur, d)
            rem -= d
    return build_run(r.net, r.configs[0], steps)


def _advance(c: Configuration, x: Fraction) -> Tuple[Configuration, None]:
    return Configuration(c.state, Multiset((p, a + x) for p, a in c.tokens)), None


def marking_in_delta_form(m: Multiset, delta: Fraction) -> bool:
    delta = Fraction(delta)
    return all(frac(a) < delta or frac(a) > 1 - delta for _p, a in m)


def is_delta_form(r: Run, delta: Fraction) -> bool:
    """Every discrete occurrence outputs near-integer ages and every delay
    lies in (0,delta) or (1-delta,1)."""
    delta = Fraction(delta)
    if not 0 < delta <= Fraction(1, 5):
        raise NetError("delta must lie in (0, 1/5]")
    for step in r.steps:
        if isinstance(step, TimedStep):
            x = Fraction(step.delay)
            if not (0 < x < delta or 1 - delta < x < 1):
                return False
        else:
            if not marking_in_delta_form(step.witness.out, delta):
                return False
    return True


# -- constraint systems ------------------------------------------------------


@dataclass
class ConstraintRow:
    coeffs: Tuple[int, ...]
    rhs: Fraction
    strict: bool
    label: str = ""


@dataclass
class ConstraintSystem:
    """Rows encode  coeffs . v <= rhs  (strict rows noted); variables are the
    created-token ages followed by the delays."""

    var_names: Tuple[str, ...]
    num_ages: int
    num_delays: int
    rows: List[ConstraintRow]
    objective: Tuple[Fraction, ...]  # storage-rate cost per variable
    constant_cost: Fraction  # transition-cost part of the run cost
    concrete_point: Tuple[Fraction, ...]

    def matrix(self) -> List[List[int]]:
        return [list(r.coeffs) for r in self.rows]

    def feasible(self, point: Sequence[Fraction], closed: bool = False) -> bool:
        for row in self.rows:
            lhs = sum(c * Fraction(v) for c, v in zip(row.coeffs, point))
            if row.strict and not closed:
                if not lhs < row.rhs:
                    return False
            elif not lhs <= row.rhs:
                return False
        return True

    def cost_at(self, point: Sequence[Fraction]) -> Fraction:
        return self.constant_cost + sum(
            c * Fraction(v) for c, v in zip(self.objective, point)
        )

    def tableau(self) -> str:
        """Plain-text dump: one row per line, with rhs and strictness."""
        lines = ["  ".join(f"{n:>6}" for n in self.var_names) + "     rel  rhs"]
        for row in self.rows:
            rel = "< " if row.strict else "<="
            coeffs = "  ".join(f"{c:>6}" for c in row.coeffs)
            label = f"   # {row.label}" if row.label else ""
            lines.append(f"{coeffs}     {rel}  {row.rhs}{label}")
        return "\n".join(lines) + "\n"


class SkeletonError(NetError):
    pass


def extract_constraints(r: Run) -> ConstraintSystem:
    """Build the feasibility system of a run's firing structure.

    Variables: one age y_j per token created by an output arc (ordered by
    creation), one delay x_i per timed step.  Rows: positivity of delays,
    output-interval bounds at creation, and interval bounds at every later
    use of a created token (its age there is y_j plus the block of delays
    since creation).  Tokens already present initially contribute rows over
    the delay block alone (their creation age is a constant).
    """
    delay_index: Dict[int, int] = {}
    n_delays = 0
    for i, step in enumerate(r.steps):
        if isinstance(step, TimedStep):
            delay_index[i] = n_delays
            n_delays += 1

    # Track token instances: (kind, idx) where kind 'init' freezes the age
    # and kind 'new' refers to creation event j.
    @dataclass
    class Instance:
        key: Tuple[str, int]
        place: str
        age: Fraction  # concrete age right now
        birth_step: int  # first timed step that can age it

    instances: List[Instance] = []
    for p, a in sorted(r.configs[0].tokens):
        instances.append(Instance(("init", len(instances)), p, a, 0))

    creations: List[Tuple[str, Fraction, Interval, int]] = []  # place, age, interval, birth
    uses: List[Tuple[Tuple[str, int], Interval, int, int]] = []  # key, interval, birth, used-at

    def find_instance(pool: List[Instance], p: str, a: Fraction) -> Instance:
        for inst in pool:
            if inst.place == p and inst.age == a:
                return inst
        raise SkeletonError(f"token ({p},{a}) used before created")

    live = instances
    for i, step in enumerate(r.steps):
        if isinstance(step, TimedStep):
            for inst in live:
                inst.age += Fraction(step.delay)
            continue
        t = r.net.transitions[step.transition]
        consumed: List[Instance] = []
        pool = list(live)
        for (p, a), arc in _paired(step.witness.inn, t.inn):
            inst = find_instance(pool, p, a)
            pool.remove(inst)
            uses.append((inst.key, arc[1], inst.birth_step, i))
            consumed.append(inst)
        for (p, a), arc in _paired(step.witness.read, t.read):
            inst = find_instance(pool, p, a)
            pool.remove(inst)
            uses.append((inst.key, arc[1], inst.birth_step, i))
        for inst in consumed:
            live.remove(inst)
        for (p, a), arc in _paired(step.witness.out, t.out):
            j = len(creations)
            creations.append((p, a, arc[1], i))
            live.append(Instance(("new", j), p, a, i))

    m = len(creations)
    var_names = tuple(f"y{j+1}" for j in range(m)) + tuple(
        f"x{i+1}" for i in range(n_delays)
    )
    dim = m + n_delays
    rows: List[ConstraintRow] = []

    def unit(idx: int, sign: int) -> List[int]:
        v = [0] * dim
        v[idx] = sign
        return v

    def delay_block(first_step: int, last_step: int) -> List[int]:
        cols = [0] * dim
        for s in range(first_step, last_step):
            if s in delay_index:
                cols[m + delay_index[s]] = 1
        return cols

    def add_interval_rows(cols: List[int], base: Fraction, iv: Interval, label: str):
        has_var = any(cols)
        if not has_var:
            from .intervals import age_in

            if not age_in(base, iv):
                raise SkeletonError(f"{label}: constant age {base} violates {iv}")
            return
        # lower bound: lo <= base + cols.v
        rows.append(
            ConstraintRow(
                tuple(-c for c in cols), base - iv.lo, iv.lo_open, f"{label} >= {iv.lo}"
            )
        )
        if iv.hi is not None:
            rows.append(
                ConstraintRow(tuple(cols), Fraction(iv.hi) - base, iv.hi_open, f"{label} <= {iv.hi}")
            )

    for i in sorted(delay_index):
        rows.append(
            ConstraintRow(
                tuple(unit(m + delay_index[i], -1)), Fraction(0), True, f"x{delay_index[i]+1} > 0"
            )
        )
    for j, (p, a, iv, birth) in enumerate(creations):
        add_interval_rows(unit(j, 1), Fraction(0), iv, f"y{j+1} in {iv}")
    for key, iv, birth, used_at in uses:
        cols = delay_block(birth, used_at)
        if key[0] == "new":
            j = key[1]
            base: Fraction = Fraction(0)
            cols = [c if idx != j else 1 for idx, c in enumerate(cols)]
        else:
            base = sorted(r.configs[0].tokens)[key[1]][1]
        name = f"y{key[1]+1}" if key[0] == "new" else f"init{key[1]}"
        add_interval_rows(cols, base, iv, f"{name}+delays in {iv}")

    objective = [Fraction(0)] * dim
    constant = Fraction(0)
    for i, step in enumerate(r.steps):
        if isinstance(step, TimedStep):
            rate = sum(r.net.place_costs[p] for p, _a in r.configs[i].tokens)
            objective[m + delay_index[i]] = Fraction(rate)
        else:
            constant += r.net.transitions[step.transition].cost

    concrete = [Fraction(creations[j][1]) for j in range(m)] + [
        Fraction(step.delay) for step in r.steps if isinstance(step, TimedStep)
    ]
    return ConstraintSystem(
        var_names, m, n_delays, rows, tuple(objective), constant, tuple(concrete)
    )


def _paired(tokens: Multiset, arcs: Multiset):
    from .nets import match

    pairing = match(tokens, arcs)
    if pairing is None:
        raise SkeletonError("witness does not match arcs")
    return pairing


# -- total unimodularity -----------------------------------------------------


class SizeLimitError(Exception):
    pass


def _det(mat: List[List[int]]) -> int:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    total = 0
    for j in range(n):
        if mat[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        total += (-1) ** j * mat[0][j] * _det(minor)
    return total


def is_totally_unimodular(matrix: Sequence[Sequence[int]], limit: int = 8) -> bool:
    """Brute force: every square submatrix has determinant in {-1,0,1}."""
    rows = [list(r) for r in matrix]
    if not rows:
        return True
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    if any(abs(v) > 1 for r in rows for v in r):
        return False
    max_k = min(len(rows), ncols)
    if max_k > limit:
        raise SizeLimitError(f"submatrix search beyond {limit}x{limit} not supported")
    for k in range(2, max_k + 1):
        for rsel in itertools.combinations(range(len(rows)), k):
            sub_rows = [rows[i] for i in rsel]
            for csel in itertools.combinations(range(ncols), k):
                sub = [[row[j] for j in csel] for row in sub_rows]
                if _det(sub) not in (-1, 0, 1):
                    return False
    return True


# -- retiming ----------------------------------------------------------------


def _substitute(r: Run, system: ConstraintSystem, point: Sequence[Fraction]) -> Run:
    """Rebuild the run with new creation ages and delays."""
    m = system.num_ages
    new_ages = list(point[:m])
    new_delays = list(point[m:])
    age_of: Dict[Tuple[str, Fraction, int], Fraction] = {}

    # Recreate instance tracking to substitute witnesses consistently.
    creation_counter = 0
    delay_counter = 0
    # map from (old concrete age trajectory) is implicit: replay with a
    # parallel "old" configuration to locate instances by old values.
    old_live: List[Tuple[Tuple[str, int], str, Fraction]] = []  # key, place, old age
    new_age_map: Dict[Tuple[str, int], Fraction] = {}
    for idx, (p, a) in enumerate(sorted(r.configs[0].tokens)):
        old_live.append((("init", idx), p, a))
        new_age_map[("init", idx)] = a

    steps: List[Step] = []
    for i, step in enumerate(r.steps):
        if isinstance(step, TimedStep):
            d = new_delays[delay_counter]
            delay_counter += 1
            old_live = [(k, p, a + Fraction(step.delay)) for k, p, a in old_live]
            for k in list(new_age_map):
                new_age_map[k] += d
            steps.append(TimedStep(d))
            continue
        t = r.net.transitions[step.transition]
        pool = list(old_live)

        def take(p: str, a: Fraction):
            for entry in pool:
                if entry[1] == p and entry[2] == a:
                    pool.remove(entry)
                    return entry
            raise SkeletonError("substitution lost a token instance")

        inn_new, read_new, out_new = [], [], []
        consumed_keys = []
        for (p, a) in step.witness.inn:
            key, _, _ = take(p, a)
            inn_new.append((p, new_age_map[key]))
            consumed_keys.append(key)
        for (p, a) in step.witness.read:
            key, _, _ = take(p, a)
            read_new.append((p, new_age_map[key]))
        for key in consumed_keys:
            del new_age_map[key]
            old_live = [e for e in old_live if e[0] != key]
        for (p, a) in sorted(step.witness.out):
            key = ("new", creation_counter)
            age = new_ages[creation_counter]
            creation_counter += 1
            old_live.append((key, p, a))
            new_age_map[key] = age
            out_new.append((p, age))
        steps.append(
            DiscreteStep(
                step.transition,
                Witness(Multiset(inn_new), Multiset(read_new), Multiset(out_new)),
            )
        )
    return build_run(r.net, r.configs[0], steps)


def retime_run(r: Run, delta: Fraction) -> Run:
    """Rebuild r with the same firing structure, in delta-form, cost <= cost(r).

    Minimizes the storage cost over the closed feasibility polyhedron (its
    vertices are integral), then walks a small step from the optimal vertex
    toward the original values; every strictly-tight row becomes slack while
    all values stay within delta of the vertex.
    """
    delta = Fraction(delta)
    if not 0 < delta <= Fraction(1, 5):
        raise NetError("delta must lie in (0, 1/5]")
    r.validate()
    system = extract_constraints(r)
    dim = len(system.var_names)
    if dim == 0:
        return r
    if not system.feasible(system.concrete_point):
        raise SkeletonError("recorded run violates its own constraints")

    rows = [[Fraction(c) for c in row.coeffs] for row in system.rows]
    rhs = [row.rhs for row in system.rows]
    try:
        _, vertex = lexmin_vertex(list(system.objective), rows, rhs)
    except Infeasible as exc:  # pragma: no cover - valid runs are feasible
        raise SkeletonError("infeasible skeleton") from exc

    orig = [Fraction(v) for v in system.concrete_point]
    if vertex == orig:
        return r
    max_gap = max(abs(a - b) for a, b in zip(orig, vertex))
    target = delta / (2 * (len(r.steps) + 1))
    lam = min(Fraction(1), target / max_gap)
    point = [v + lam * (o - v) for v, o in zip(vertex, orig)]
    if not system.feasible(point):  # pragma: no cover - convexity guarantees this
        raise SkeletonError("perturbed point left the polyhedron")
    return _substitute(r, system, point)
