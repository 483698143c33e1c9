"""Budgets and limits for the deciders, validated with pydantic."""

import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, PositiveInt

from .errors import ContractionTooWeak


class EngelBudget(BaseModel):
    """Resource budget standing in for the radius R of the tuple graph.

    The defaults are desk-scale: the periodic witness and the common-state
    search fit comfortably inside them.
    """
    model_config = ConfigDict(frozen=True)

    max_vertices: PositiveInt = 100_000
    max_states: PositiveInt = 20_000
    max_c: PositiveInt = 64
    certified: bool = False
    radius: Optional[float] = None

    @classmethod
    def certified_bound(
        cls,
        eta: float,
        C: float,
        n: int,
        g_length: int,
        h_length: int,
        machine_states: int,
        max_vertices: int = 100_000,
        max_c: int = 64,
    ) -> "EngelBudget":
        """
        Derive a budget from contraction constants.

        Requires 2**n * eta < 1. The radius is
        R = (|g| + n|h|) 2**n C / (1 - 2**n eta); an element of length at most R
        is a state of the R-fold product automaton, so its canonical machine
        has at most machine_states**ceil(R) states.
        """
        factor = (2 ** n) * eta
        if factor >= 1:
            raise ContractionTooWeak(
                f"2^{n} * eta = {factor:g} is not below 1; no certified radius exists"
            )
        radius = (g_length + n * h_length) * (2 ** n) * C / (1 - factor)
        max_states = max(1, machine_states) ** max(1, math.ceil(radius))
        return cls(
            max_vertices=max_vertices,
            max_states=max_states,
            max_c=max_c,
            certified=True,
            radius=radius,
        )


class Limits(BaseModel):
    """Enumeration limits for quotients, balls, orders and witnesses."""
    model_config = ConfigDict(frozen=True)

    max_level_points: PositiveInt = 3 ** 10
    max_ball_radius: PositiveInt = 10
    max_ball_size: PositiveInt = 200_000
    order_budget: PositiveInt = 10_000
    witness_max_level: PositiveInt = 12
    max_survey_tuples: PositiveInt = 20_000
    growth_constant: PositiveInt = 16


DEFAULT_BUDGET = EngelBudget()
DEFAULT_LIMITS = Limits()
