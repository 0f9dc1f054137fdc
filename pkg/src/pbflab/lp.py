"""Single internal gateway to the LP solver.

All degree searches, fractional measures and minimax fits go through this
wrapper so the backend and tolerance are set in one place.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog

#: Default feasibility/optimality tolerance used in degree comparisons.
DEFAULT_TOLERANCE = 1e-7


class LPResult:
    __slots__ = ("feasible", "x", "value")

    def __init__(self, feasible: bool, x, value):
        self.feasible = feasible
        self.x = x
        self.value = value


def solve(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None, bounds=(None, None)) -> LPResult:
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=bounds,
        method="highs",
    )
    if res.status == 0:
        return LPResult(True, np.asarray(res.x), float(res.fun))
    if res.status == 2:  # infeasible
        return LPResult(False, None, None)
    raise RuntimeError(f"LP solver failed with status {res.status}: {res.message}")
