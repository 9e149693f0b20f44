"""Benchmark instance generators.

Each in-scope problem compiles a JSON payload (or scalar parameters) into a
validated :class:`~xcspkit.model.Instance`. ``build`` is the uniform entry
point used by the CLI; the ``gen_*`` functions are the direct API.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from ..errors import BadParameterError, SchemaMismatchError, UnknownVariantError
from ..model import Instance
from ._base import absent
from .academic import (
    gen_bibd,
    gen_coloured_queens,
    gen_dubois,
    gen_golomb_ruler,
    gen_graceful_graph,
    gen_langford,
    gen_low_autocorrelation,
    gen_magic_hexagon,
    gen_magic_square,
    gen_peacable_armies,
    gen_social_golfers,
    gen_sports_scheduling,
    gen_still_life,
)
from .structured import (
    gen_auction,
    gen_bacp,
    gen_car_sequencing,
    gen_graph_coloring,
    gen_knapsack,
    gen_mario,
    gen_mistery_shopper,
    gen_quadratic_assignment,
    gen_rcpsp,
    gen_strip_packing,
    gen_subgraph_isomorphism,
    gen_sum_coloring,
    gen_tsp,
)

__all__ = [
    "PROBLEMS",
    "ProblemData",
    "build",
    "gen_auction",
    "gen_bacp",
    "gen_bibd",
    "gen_car_sequencing",
    "gen_coloured_queens",
    "gen_dubois",
    "gen_golomb_ruler",
    "gen_graceful_graph",
    "gen_graph_coloring",
    "gen_knapsack",
    "gen_langford",
    "gen_low_autocorrelation",
    "gen_magic_hexagon",
    "gen_magic_square",
    "gen_mario",
    "gen_mistery_shopper",
    "gen_peacable_armies",
    "gen_quadratic_assignment",
    "gen_rcpsp",
    "gen_social_golfers",
    "gen_sports_scheduling",
    "gen_still_life",
    "gen_strip_packing",
    "gen_subgraph_isomorphism",
    "gen_sum_coloring",
    "gen_tsp",
]


@dataclass(frozen=True)
class ProblemData:
    """One instance request: problem id, optional model variant, payload."""

    problem_id: str
    payload: Any
    variant: str | None = None


def _int_param(payload, key: str, problem: str) -> int:
    if isinstance(payload, dict):
        if key not in payload:
            raise SchemaMismatchError(f"{problem}: missing parameter {key!r}")
        value = payload[key]
    else:
        value = payload
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaMismatchError(f"{problem}: parameter {key!r} must be an integer")
    return value


def _build_dubois(payload, variant, drop_tags, decision_vars):
    return gen_dubois(_int_param(payload, "n", "dubois"))


def _build_langford(payload, variant, drop_tags, decision_vars):
    return gen_langford(_int_param(payload, "n", "langford"))


def _build_golomb(payload, variant, drop_tags, decision_vars):
    return gen_golomb_ruler(_int_param(payload, "n", "golomb_ruler"), decision_vars)


def _build_low_autocorrelation(payload, variant, drop_tags, decision_vars):
    return gen_low_autocorrelation(_int_param(payload, "n", "low_autocorrelation"))


def _build_magic_hexagon(payload, variant, drop_tags, decision_vars):
    return gen_magic_hexagon(
        _int_param(payload, "n", "magic_hexagon"),
        _int_param(payload, "s", "magic_hexagon"),
        drop_tags,
    )


def _build_magic_square(payload, variant, drop_tags, decision_vars):
    clues = None
    if isinstance(payload, dict) and not absent(payload.get("clues")):
        clues = payload["clues"]
    return gen_magic_square(_int_param(payload, "n", "magic_square"), clues)


def _build_coloured_queens(payload, variant, drop_tags, decision_vars):
    return gen_coloured_queens(_int_param(payload, "n", "coloured_queens"))


def _build_social_golfers(payload, variant, drop_tags, decision_vars):
    return gen_social_golfers(
        _int_param(payload, "nGroups", "social_golfers"),
        _int_param(payload, "groupSize", "social_golfers"),
        _int_param(payload, "nWeeks", "social_golfers"),
        drop_tags,
    )


def _build_sports_scheduling(payload, variant, drop_tags, decision_vars):
    return gen_sports_scheduling(_int_param(payload, "nTeams", "sports_scheduling"), drop_tags)


def _build_still_life(payload, variant, drop_tags, decision_vars):
    return gen_still_life(_int_param(payload, "n", "still_life"), drop_tags)


def _build_graceful_graph(payload, variant, drop_tags, decision_vars):
    return gen_graceful_graph(
        _int_param(payload, "k", "graceful_graph"),
        _int_param(payload, "p", "graceful_graph"),
    )


def _build_peacable_armies(payload, variant, drop_tags, decision_vars):
    return gen_peacable_armies(_int_param(payload, "n", "peacable_armies"), variant or "m1")


def _build_bibd(payload, variant, drop_tags, decision_vars):
    if variant not in (None, "sum"):
        raise UnknownVariantError("bibd", variant)
    return gen_bibd(
        _int_param(payload, "v", "bibd"),
        _int_param(payload, "b", "bibd"),
        _int_param(payload, "r", "bibd"),
        _int_param(payload, "k", "bibd"),
        _int_param(payload, "lambda", "bibd"),
        drop_tags,
    )


def _build_auction(payload, variant, drop_tags, decision_vars):
    return gen_auction(payload, variant or "cnt")


def _build_bacp(payload, variant, drop_tags, decision_vars):
    return gen_bacp(payload, variant or "m1", decision_vars)


def _build_knapsack(payload, variant, drop_tags, decision_vars):
    return gen_knapsack(payload)


def _build_car_sequencing(payload, variant, drop_tags, decision_vars):
    return gen_car_sequencing(payload, drop_tags)


def _build_graph_coloring(payload, variant, drop_tags, decision_vars):
    return gen_graph_coloring(payload)


def _build_sum_coloring(payload, variant, drop_tags, decision_vars):
    return gen_sum_coloring(payload)


def _build_mario(payload, variant, drop_tags, decision_vars):
    return gen_mario(payload)


def _build_mistery_shopper(payload, variant, drop_tags, decision_vars):
    return gen_mistery_shopper(payload, drop_tags)


def _build_quadratic_assignment(payload, variant, drop_tags, decision_vars):
    return gen_quadratic_assignment(payload)


def _build_rcpsp(payload, variant, drop_tags, decision_vars):
    return gen_rcpsp(payload)


def _build_strip_packing(payload, variant, drop_tags, decision_vars):
    return gen_strip_packing(payload)


def _build_subgraph_isomorphism(payload, variant, drop_tags, decision_vars):
    return gen_subgraph_isomorphism(payload, drop_tags)


def _build_tsp(payload, variant, drop_tags, decision_vars):
    if isinstance(payload, dict):
        return gen_tsp(payload)
    return gen_tsp({"distances": payload})


#: problem id -> (builder, tuple of valid variants or None)
PROBLEMS = {
    "auction": (_build_auction, ("cnt", "sum")),
    "bacp": (_build_bacp, ("m1", "m2")),
    "bibd": (_build_bibd, ("sum",)),
    "car_sequencing": (_build_car_sequencing, None),
    "coloured_queens": (_build_coloured_queens, None),
    "dubois": (_build_dubois, None),
    "golomb_ruler": (_build_golomb, None),
    "graceful_graph": (_build_graceful_graph, None),
    "graph_coloring": (_build_graph_coloring, None),
    "knapsack": (_build_knapsack, None),
    "langford": (_build_langford, None),
    "low_autocorrelation": (_build_low_autocorrelation, None),
    "magic_hexagon": (_build_magic_hexagon, None),
    "magic_square": (_build_magic_square, None),
    "mario": (_build_mario, None),
    "mistery_shopper": (_build_mistery_shopper, None),
    "peacable_armies": (_build_peacable_armies, ("m1", "m2")),
    "quadratic_assignment": (_build_quadratic_assignment, None),
    "rcpsp": (_build_rcpsp, None),
    "social_golfers": (_build_social_golfers, None),
    "sports_scheduling": (_build_sports_scheduling, None),
    "still_life": (_build_still_life, None),
    "strip_packing": (_build_strip_packing, None),
    "subgraph_isomorphism": (_build_subgraph_isomorphism, None),
    "sum_coloring": (_build_sum_coloring, None),
    "travelling_salesman": (_build_tsp, None),
}

_ALIASES = {
    "tsp": "travelling_salesman",
}


def canonical_problem_id(name: str) -> str:
    key = name.replace("-", "_").lower()
    key = _ALIASES.get(key, key)
    if key not in PROBLEMS:
        raise BadParameterError(f"unknown problem {name!r}")
    return key


def build(
    data: ProblemData,
    drop_tags=(),
    decision_vars: bool = True,
) -> Instance:
    """Compile one problem request into a validated instance."""
    problem_id = canonical_problem_id(data.problem_id)
    builder, variants = PROBLEMS[problem_id]
    if data.variant is not None:
        if variants is None or data.variant not in variants:
            raise UnknownVariantError(problem_id, data.variant)
    return builder(data.payload, data.variant, frozenset(drop_tags), decision_vars)
