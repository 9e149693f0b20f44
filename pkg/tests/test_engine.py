"""Engine tests: propagation fixpoint examples, solver verdicts against
the generate-and-test oracle, trail exactness, determinism, bounds."""

import random

import pytest

from helpers import brute_force, search_space
from xcspkit.engine import (
    DomainStore,
    SearchConfig,
    enumerate_all,
    optimize,
    propagate_to_fixpoint,
    solve,
)
from xcspkit.errors import InvalidInstanceError
from xcspkit.expr import parse_expr
from xcspkit.generators import gen_dubois, gen_golomb_ruler, gen_knapsack, gen_langford, gen_magic_square
from xcspkit.model import (
    AllDifferent,
    Condition,
    Domain,
    Extension,
    Instance,
    Intension,
    Objective,
    Sum,
    Variable,
    constraint_satisfied,
    supports,
)

KNAPSACK_DATA = {
    "capacity": 10,
    "items": [
        {"weight": 2, "value": 54},
        {"weight": 2, "value": 92},
        {"weight": 1, "value": 62},
        {"weight": 2, "value": 20},
        {"weight": 2, "value": 55},
    ],
}


def make(variables, constraints, objective=None, decision=()):
    return Instance("COP" if objective else "CSP", tuple(variables), tuple(constraints), objective, decision)


class TestPropagateToFixpoint:
    def test_table_prunes_to_supported_pair(self):
        variables = (Variable("x", Domain.rng(0, 1)), Variable("y", Domain.of(1)))
        store = DomainStore(variables)
        c = Extension(("x", "y"), supports(2, [(0, 0), (1, 1)]))
        assert propagate_to_fixpoint(store, (c,)) is None
        assert store.domain_list(0) == [1]

    def test_sum_bounds(self):
        variables = (Variable("x", Domain.rng(0, 5)), Variable("y", Domain.rng(4, 5)))
        store = DomainStore(variables)
        c = Sum(("x", "y"), (1, 1), Condition("eq", 5))
        assert propagate_to_fixpoint(store, (c,)) is None
        assert store.domain_list(0) == [0, 1]

    def test_pigeonhole_conflict(self):
        variables = tuple(Variable(v, Domain.rng(1, 2)) for v in "abc")
        store = DomainStore(variables)
        c = AllDifferent(("a", "b", "c"))
        assert propagate_to_fixpoint(store, (c,)) == 0

    def test_conflict_reports_constraint_index(self):
        variables = (Variable("x", Domain.rng(0, 3)),)
        store = DomainStore(variables)
        cs = (
            Intension(parse_expr("le(x,2)")),
            Extension(("x",), supports(1, [(3,)])),
        )
        assert propagate_to_fixpoint(store, cs) in (0, 1)
        # the wipe-out is attributed to a real constraint index
        assert propagate_to_fixpoint(DomainStore(variables), cs) < len(cs)


class TestTrailExactness:
    def test_push_propagate_pop_restores_exactly(self):
        rng = random.Random(5)
        variables = tuple(Variable(f"v{i}", Domain.rng(0, 4)) for i in range(4))
        store = DomainStore(variables)
        baseline = store.snapshot()
        snapshots = [baseline]
        for _ in range(60):
            action = rng.random()
            if action < 0.45 or store.level == 0:
                store.push()
                x = rng.randrange(4)
                if store.size(x) > 1:
                    store.remove_value(x, next(iter(store.values(x))))
                snapshots.append(store.snapshot())
            else:
                store.pop()
                snapshots.pop()
                assert store.snapshot() == snapshots[-1]
        store.pop_all()
        assert store.snapshot() == baseline


class TestSolve:
    def test_dubois_unsat(self):
        for n in (3, 4):
            out = solve(gen_dubois(n))
            assert out.status == "UNSAT"

    def test_langford_sat_with_valid_witness(self):
        inst = gen_langford(3)
        out = solve(inst)
        assert out.status == "SAT"
        for c in inst.constraints:
            assert constraint_satisfied(c, out.witness)

    def test_empty_unary_conflict_is_unsat_at_root(self):
        inst = make(
            [Variable("x", Domain.rng(0, 2))],
            [Extension(("x",), Extension(("x",), supports(1, [])).table)],
        )
        out = solve(inst)
        assert out.status == "UNSAT"
        assert out.stats.nodes == 0

    def test_requires_csp(self):
        inst = make(
            [Variable("x", Domain.rng(0, 2))],
            [],
            Objective("minimize", "variable", ("x",)),
        )
        with pytest.raises(InvalidInstanceError):
            solve(inst)

    def test_decision_variables_honored(self):
        # y is functionally determined by x through propagation
        inst = Instance(
            "CSP",
            (Variable("x", Domain.rng(0, 3)), Variable("y", Domain.rng(0, 3))),
            (Intension(parse_expr("eq(y,x)")),),
            None,
            ("x",),
        )
        out = solve(inst)
        assert out.status == "SAT"
        assert out.witness["y"] == out.witness["x"]


class TestOptimize:
    def test_knapsack_paper_optimum(self):
        out = optimize(gen_knapsack(KNAPSACK_DATA))
        assert out.status == "OPTIMUM"
        assert out.bound == 283

    def test_golomb4(self):
        out = optimize(gen_golomb_ruler(4))
        assert out.status == "OPTIMUM"
        assert out.bound == 6

    def test_monotonic_improving_bounds(self):
        bounds = []
        out = optimize(gen_knapsack(KNAPSACK_DATA), on_bound=bounds.append)
        assert bounds == sorted(bounds)
        assert bounds[-1] == out.bound
        assert len(set(bounds)) == len(bounds)

    def test_unsat_cop(self):
        inst = make(
            [Variable("x", Domain.rng(0, 1)), Variable("y", Domain.rng(0, 1))],
            [Intension(parse_expr("lt(x,y)")), Intension(parse_expr("lt(y,x)"))],
            Objective("minimize", "variable", ("x",)),
        )
        assert optimize(inst).status == "UNSAT"


class TestEnumerate:
    def test_two_vars_ne(self):
        inst = make(
            [Variable("x", Domain.rng(0, 1)), Variable("y", Domain.rng(0, 1))],
            [Intension(parse_expr("ne(x,y)"))],
        )
        out = enumerate_all(inst)
        assert (out.count, out.exact) == (2, True)

    def test_dubois_zero(self):
        out = enumerate_all(gen_dubois(3))
        assert (out.count, out.exact) == (0, True)

    def test_magic_square_3_has_8_solutions(self):
        out = enumerate_all(gen_magic_square(3))
        assert (out.count, out.exact) == (8, True)

    def test_cap_truncation(self):
        inst = make([Variable("x", Domain.rng(0, 9))], [])
        out = enumerate_all(inst, cap=4)
        assert (out.count, out.exact) == (4, False)


class TestTimeouts:
    def test_solve_timeout_is_unknown(self):
        # far too little time to exhaust the tree, no solution to stumble on
        out = solve(gen_dubois(20), SearchConfig(time_limit=0.3))
        assert out.status == "UNKNOWN"
        assert out.witness is None and out.bound is None

    def test_optimize_timeout_keeps_incumbent(self):
        from xcspkit.harness import verify

        inst = gen_golomb_ruler(7)
        out = optimize(inst, SearchConfig(time_limit=2.0))
        assert out.status in ("SAT", "OPTIMUM")
        assert out.witness is not None
        assert verify(inst, out.witness, out.bound).ok


class TestVariableLengthNoOverlap:
    def test_strip_packing_solves_sat(self):
        # rotatable rectangles: lengths are variables, not constants
        from xcspkit.generators import gen_strip_packing
        from xcspkit.harness import verify

        data = {
            "container": {"width": 4, "height": 3},
            "rectangles": [{"width": 2, "height": 3}, {"width": 2, "height": 2}],
        }
        inst = gen_strip_packing(data)
        out = solve(inst, SearchConfig(time_limit=30))
        assert out.status == "SAT"
        assert verify(inst, out.witness).ok


class TestDeterminism:
    def test_same_config_same_stats(self):
        inst = gen_langford(4)
        a = solve(inst, SearchConfig(time_limit=60))
        b = solve(inst, SearchConfig(time_limit=60))
        assert a.status == b.status
        assert a.stats.nodes == b.stats.nodes
        assert a.witness == b.witness

    def test_heuristic_and_restart_configs_agree_on_verdict(self):
        inst = gen_langford(3)
        for config in (
            SearchConfig(var_heuristic="lex"),
            SearchConfig(val_heuristic="max"),
            SearchConfig(restarts=True),
        ):
            assert solve(inst, config).status == "SAT"


# ---------------------------------------------------------------------------
# Randomized oracle equivalence (the smaller, fast version; the acceptance
# suite runs the full 1000-instance spread)


def random_tiny_instance(rng: random.Random, max_vars=6, max_dom=5):
    from tiny_instances import random_instance

    return random_instance(rng, max_vars=max_vars, max_dom=max_dom)


@pytest.mark.parametrize("seed", range(40))
def test_oracle_equivalence_sample(seed):
    rng = random.Random(1000 + seed)
    inst = random_tiny_instance(rng)
    assert search_space(inst) <= 4000
    count, best, _ = brute_force(inst)
    got = enumerate_all(_as_csp(inst))
    assert (got.count, got.exact) == (count, True)
    verdict = solve(_as_csp(inst))
    assert verdict.status == ("SAT" if count else "UNSAT")
    if inst.kind == "COP":
        out = optimize(inst)
        if count == 0:
            assert out.status == "UNSAT"
        else:
            assert out.status == "OPTIMUM"
            assert out.bound == best


def _as_csp(inst):
    if inst.kind == "CSP":
        return inst
    return Instance("CSP", inst.variables, inst.constraints, None, inst.decision_variables)


def test_oracle_equivalence_sample_enumeration_csp():
    rng = random.Random(77)
    for _ in range(30):
        inst = _as_csp(random_tiny_instance(rng, max_vars=4, max_dom=4))
        count, _, _ = brute_force(inst)
        assert enumerate_all(inst).count == count
