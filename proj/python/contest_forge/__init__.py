"""Rank-order contest design and equilibrium computation."""

from ._core import (
    ContestError,
    PrizeVector,
    breakpoints,
    c_star,
    equilibrium,
    example_obj,
    lottery_decomposition,
    optimal_contest,
    optimal_prize_count,
    participation_rate,
    poisson_limit,
    simple_contest,
    w_transform,
    winner_take_all,
    wta_approx_experiment,
    wta_threshold_cost,
)

__all__ = [
    "ContestError",
    "PrizeVector",
    "breakpoints",
    "c_star",
    "equilibrium",
    "example_obj",
    "lottery_decomposition",
    "optimal_contest",
    "optimal_prize_count",
    "participation_rate",
    "poisson_limit",
    "simple_contest",
    "w_transform",
    "winner_take_all",
    "wta_approx_experiment",
    "wta_threshold_cost",
]
