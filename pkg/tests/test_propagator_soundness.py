"""Exhaustive no-support verification: for every propagator, at scope <= 4
and domain size <= 4, any value removed at a single-constraint fixpoint has
no satisfying tuple over the original domains, and a reported conflict
means there is no solution at all. The compact-table GAC bar is checked
separately."""

import itertools
import random

import pytest

from tiny_instances import ALL_KINDS, random_constraint, random_domains
from xcspkit.engine import DomainStore, propagate_to_fixpoint
from xcspkit.model import (
    Assignment,
    Domain,
    Extension,
    STAR,
    Table,
    Variable,
    constraint_satisfied,
    constraint_scope,
)

TRIALS_PER_KIND = 60


def _fixpoint_case(rng, kind):
    n = 4
    names = [f"v{i}" for i in range(n)]
    domains = random_domains(rng, names, 4)
    constraint = random_constraint(rng, names, domains, kind)
    scope = constraint_scope(constraint)
    variables = tuple(Variable(v, Domain(tuple(domains[v]))) for v in names if v in scope)
    store = DomainStore(variables)
    before = {v.id: list(v.domain.values) for v in variables}
    conflict = propagate_to_fixpoint(store, (constraint,))
    after = {name: list(store.values(i)) for i, name in enumerate(store.names)}
    return constraint, before, after, conflict


def _satisfying_tuples(constraint, before):
    names = list(before)
    for combo in itertools.product(*(before[v] for v in names)):
        a = Assignment(dict(zip(names, combo)))
        if constraint_satisfied(constraint, a):
            yield dict(zip(names, combo))


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_no_unsound_removals(kind):
    rng = random.Random(sum(ord(ch) for ch in kind) * 7919)
    for trial in range(TRIALS_PER_KIND):
        constraint, before, after, conflict = _fixpoint_case(rng, kind)
        supported: dict[str, set] = {v: set() for v in before}
        any_solution = False
        for tup in _satisfying_tuples(constraint, before):
            any_solution = True
            for v, value in tup.items():
                supported[v].add(value)
        if conflict is not None:
            assert not any_solution, (kind, trial, constraint)
            continue
        for v in before:
            removed = set(before[v]) - set(after[v])
            bad = removed & supported[v]
            assert not bad, (kind, trial, constraint, v, sorted(bad))


def test_extension_fixpoint_is_gac():
    """After fixpoint on a lone table constraint, every remaining value
    sits in at least one row compatible with the remaining domains."""
    rng = random.Random(424242)
    for _ in range(200):
        constraint, before, after, conflict = _fixpoint_case(rng, "extension")
        if conflict is not None:
            continue
        scope = constraint_scope(constraint)
        for v in scope:
            for value in after[v]:
                witness = False
                others = [after[u] if u != v else [value] for u in scope]
                for combo in itertools.product(*others):
                    a = Assignment(dict(zip(scope, combo)))
                    if constraint_satisfied(constraint, a):
                        witness = True
                        break
                assert witness, (constraint, v, value)


def test_gac_on_star_rows():
    variables = (Variable("a", Domain.rng(0, 2)), Variable("b", Domain.rng(0, 2)))
    table = Table(2, "supports", ((0, STAR), (STAR, 2)))
    store = DomainStore(variables)
    assert propagate_to_fixpoint(store, (Extension(("a", "b"), table),)) is None
    assert store.domain_list(0) == [0, 1, 2]
    assert store.domain_list(1) == [0, 1, 2]
