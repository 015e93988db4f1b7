import random
from fractions import Fraction

import pytest

from ptpncov.deltaform import (
    ConstraintSystem,
    FractionalDecomposition,
    SkeletonError,
    decompose,
    extract_constraints,
    is_delta_form,
    is_detailed,
    is_totally_unimodular,
    make_detailed,
    marking_in_delta_form,
    retime_run,
    run_is_detailed,
    SizeLimitError,
)
from ptpncov.linprog import lexmin_vertex, solve_lp
from ptpncov.mset import Multiset
from ptpncov.nets import (
    Configuration,
    DiscreteStep,
    TimedStep,
    Witness,
    build_run,
    enabled_discrete,
    marking,
    run_cost,
)

from test_core import worked_example_steps


class TestDecompose:
    def test_spec_example(self):
        d = decompose(marking([("p", Fraction(3, 10)), ("p", Fraction(7, 10)), ("p", Fraction(13, 10))]))
        assert d.high == (marking([("p", Fraction(7, 10))]),)
        assert d.center == Multiset()
        assert d.low == (marking([("p", Fraction(3, 10)), ("p", Fraction(13, 10))]),)

    def test_all_integer(self):
        d = decompose(marking([("p", 1), ("q", 5)]))
        assert d.high == () and d.low == ()
        assert len(d.center) == 2

    def test_recompose_roundtrip(self):
        rng = random.Random(3)
        for _ in range(100):
            m = marking(
                [
                    ("ab"[rng.randrange(2)], Fraction(rng.randrange(40), rng.choice([1, 2, 4, 5, 8])))
                    for _ in range(rng.randrange(7))
                ]
            )
            d = decompose(m)
            assert d.recompose() == m
            fracs = []
            for part in d.high:
                ages = {a - a.numerator // a.denominator for _p, a in part}
                assert len(ages) == 1
                fracs.append(ages.pop())
            assert fracs == sorted(fracs) and all(f >= Fraction(1, 2) for f in fracs)
            for part in d.high + d.low:
                assert part  # non-center parts are nonempty


class TestDetailed:
    def test_small_delay(self):
        c = Configuration("q", marking([("p", Fraction(9, 10))]))
        assert is_detailed(c, Fraction(1, 20))

    def test_exact_crossing_with_empty_center(self):
        c = Configuration("q", marking([("p", Fraction(9, 10)), ("p", Fraction(19, 10))]))
        assert is_detailed(c, Fraction(1, 10))

    def test_exact_crossing_with_integer_tokens(self):
        c = Configuration("q", marking([("p", Fraction(9, 10)), ("p", 2)]))
        assert not is_detailed(c, Fraction(1, 10))


class TestMakeDetailed:
    def test_split_at_crossing(self, demo_net):
        c = Configuration("q1", marking([("p3", Fraction(7, 10))]))
        run = build_run(demo_net, c, [TimedStep(Fraction(9, 10))])
        out = make_detailed(run)
        assert [s.delay for s in out.steps] == [Fraction(3, 10), Fraction(3, 5)]
        assert out.configs[-1] == run.configs[-1]
        assert run_cost(out) == run_cost(run)

    def test_idempotent_on_detailed(self, demo_net):
        c = Configuration("q1", marking([("p3", Fraction(7, 10))]))
        run = build_run(demo_net, c, [TimedStep(Fraction(1, 10))])
        assert make_detailed(run).steps == run.steps

    def test_worked_example_cost_preserved(self, demo_net, demo_initial):
        run = build_run(demo_net, demo_initial, worked_example_steps())
        out = make_detailed(run)
        assert run_cost(out) == Fraction(279, 10)
        assert out.configs[-1] == run.configs[-1]
        assert run_is_detailed(out)


class TestDeltaForm:
    def test_marking_form(self, fractional_config):
        assert marking_in_delta_form(fractional_config.tokens, Fraction(1, 5))
        assert not marking_in_delta_form(marking([("p", Fraction(1, 2))]), Fraction(1, 5))

    def test_half_delay_rejected(self, demo_net):
        run = build_run(
            demo_net, Configuration("q1", marking([("p1", 0)])), [TimedStep(Fraction(1, 2))]
        )
        assert not is_delta_form(run, Fraction(1, 5))

    def test_integer_marking_all_delta(self):
        m = marking([("p", 0), ("p", 3)])
        for d in [Fraction(1, 5), Fraction(1, 100)]:
            assert marking_in_delta_form(m, d)

    def test_worked_example_run(self, demo_net, demo_initial):
        run = build_run(demo_net, demo_initial, worked_example_steps())
        # delays 0.7 and 1.3 are not close to an integer from above/below
        assert not is_delta_form(run, Fraction(1, 5))


class TestLP:
    def test_simple_min(self):
        # min x + y s.t. x >= 1, y >= 2  (as -x <= -1, -y <= -2)
        val, pt = solve_lp(
            [Fraction(1), Fraction(1)],
            [[Fraction(-1), Fraction(0)], [Fraction(0), Fraction(-1)]],
            [Fraction(-1), Fraction(-2)],
        )
        assert val == 3 and pt == [1, 2]

    def test_lexmin_breaks_ties(self):
        # min 0 s.t. x + y >= 2, x,y <= 3: lexmin picks x = 0... x >= 0 implicit
        val, pt = lexmin_vertex(
            [Fraction(0), Fraction(0)],
            [[Fraction(-1), Fraction(-1)], [Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]],
            [Fraction(-2), Fraction(3), Fraction(3)],
        )
        assert pt == [0, 2]


class TestTotallyUnimodular:
    def test_one_by_one(self):
        assert is_totally_unimodular([[1]])

    def test_two_by_two_good(self):
        assert is_totally_unimodular([[1, 1], [1, 0]])

    def test_two_by_two_bad(self):
        assert not is_totally_unimodular([[1, 1], [1, -1]])

    def test_entry_out_of_range(self):
        assert not is_totally_unimodular([[2]])

    def test_size_limit(self):
        big = [[1] * 9 for _ in range(9)]
        with pytest.raises(SizeLimitError):
            is_totally_unimodular(big)


class TestExtractConstraints:
    def test_empty_run(self, demo_net, demo_initial):
        run = build_run(demo_net, demo_initial, [])
        system = extract_constraints(run)
        assert system.rows == [] and system.var_names == ()

    def test_single_output_then_delay_use(self, demo_net):
        # create a token via t1's p2 arc [1,5), delay x, then read it at [2,2]
        start = Configuration("q1", marking([("p1", Fraction(5, 2))]))
        steps = [
            DiscreteStep(
                "t1",
                Witness(
                    marking([("p1", Fraction(5, 2))]),
                    Multiset(),
                    marking([("p2", Fraction(13, 10)), ("p3", Fraction(11, 5))]),
                ),
            ),
            TimedStep(Fraction(7, 10)),
            DiscreteStep(
                "t2",
                Witness(
                    marking([("p3", Fraction(29, 10))]),
                    marking([("p2", 2)]),
                    marking([("p1", 0)]),
                ),
            ),
        ]
        run = build_run(demo_net, start, steps)
        system = extract_constraints(run)
        assert system.num_ages == 3 and system.num_delays == 1
        assert system.feasible(system.concrete_point)
        assert system.cost_at(system.concrete_point) == run_cost(run)
        assert is_totally_unimodular(system.matrix())
        dumped = system.tableau()
        assert "rhs" in dumped and len(dumped.splitlines()) == len(system.rows) + 1

    def test_concrete_values_satisfy_own_system(self, demo_net, demo_initial):
        run = build_run(demo_net, demo_initial, worked_example_steps())
        system = extract_constraints(run)
        assert system.feasible(system.concrete_point)
        assert system.cost_at(system.concrete_point) == Fraction(279, 10)

    def test_malformed_witness_rejected(self, demo_net):
        start = Configuration("q2", marking([("p2", 2), ("p3", 2)]))
        steps = [
            DiscreteStep(
                "t2",
                Witness(marking([("p3", 2)]), marking([("p2", 2)]), marking([("p1", 7)])),
            ),
        ]
        run = build_run(demo_net, start, steps)
        run.configs[0] = Configuration("q2", marking([("p2", 2)]))  # drop the input token
        run.configs[1] = Configuration("q1", marking([("p2", 2), ("p1", 7)]))
        with pytest.raises(SkeletonError):
            extract_constraints(run)


class TestRetime:
    def test_worked_example(self, demo_net, demo_initial):
        run = build_run(demo_net, demo_initial, worked_example_steps())
        out = retime_run(run, Fraction(1, 10))
        assert len(out.steps) == len(run.steps)
        assert [c.size() for c in out.configs] == [c.size() for c in run.configs]
        assert run_cost(out) <= Fraction(279, 10)
        for s in out.steps:
            if isinstance(s, TimedStep):
                f = s.delay - s.delay.numerator // s.delay.denominator
                assert f < Fraction(1, 10) or f > Fraction(9, 10)

    def test_pure_wait_cost_drops(self, demo_net):
        c = Configuration("q1", marking([("p2", Fraction(1, 4))]))
        run = build_run(demo_net, c, [TimedStep(Fraction(1, 2))])
        out = retime_run(run, Fraction(1, 5))
        assert run_cost(out) < run_cost(run)
        assert is_delta_form(out, Fraction(1, 5))

    def test_no_variables_returned_unchanged(self, demo_net, demo_initial):
        run = build_run(demo_net, demo_initial, [])
        assert retime_run(run, Fraction(1, 5)) is run
