"""Exact rational simplex method.

.. module:: _simplex
    :synopsis: Dense dictionary simplex over :py:class:`fractions.Fraction`
        with Bland's rule, for problems ``max c.y s.t. A y <= b, y >= 0``
        with ``b >= 0``.

With ``b >= 0`` the slack basis is feasible, so no first phase is needed.
The optimal dual solution is read off the objective row: the dual value of
constraint ``i`` is minus the final objective coefficient of its slack
variable when that slack is nonbasic, and zero otherwise.
"""
import collections
from fractions import Fraction
from typing import List, Sequence

import daiquiri

from repobee_sepchoose import _exceptions

LOGGER = daiquiri.getLogger(__file__)

LPSolution = collections.namedtuple("LPSolution", "value primal dual pivots")


class SimplexDictionary:
    """A simplex dictionary ``x_B = b - A x_N``, ``z = z0 + c x_N``.

    Variables ``0..n-1`` are the structural ones and ``n..n+m-1`` the slacks
    of the ``m`` constraints.
    """

    def __init__(
        self,
        c: Sequence[Fraction],
        a: Sequence[Sequence[Fraction]],
        b: Sequence[Fraction],
    ):
        self.m = len(a)
        self.n = len(c)
        if any(len(row) != self.n for row in a) or len(b) != self.m:
            raise _exceptions.LPError("inconsistent LP dimensions")
        if any(Fraction(value) < 0 for value in b):
            raise _exceptions.LPError("right-hand side must be nonnegative")
        self.a = [[Fraction(value) for value in row] for row in a]
        self.b = [Fraction(value) for value in b]
        self.c = [Fraction(value) for value in c]
        self.z = Fraction(0)
        self.nonbasic = list(range(self.n))
        self.basic = list(range(self.n, self.n + self.m))

    def pivot(self, i: int, j: int) -> None:
        """Exchange the basic variable of row ``i`` with the nonbasic
        variable of column ``j``.
        """
        a, b, c = self.a, self.b, self.c
        piv = a[i][j]
        row = a[i]
        for col in range(self.n):
            row[col] = 1 / piv if col == j else row[col] / piv
        b[i] /= piv
        for k in range(self.m):
            if k == i or a[k][j] == 0:
                continue
            factor = a[k][j]
            target = a[k]
            for col in range(self.n):
                if col == j:
                    target[col] = -factor / piv
                else:
                    target[col] -= factor * row[col]
            b[k] -= factor * b[i]
        factor = c[j]
        for col in range(self.n):
            if col == j:
                c[col] = -factor / piv
            else:
                c[col] -= factor * row[col]
        self.z += factor * b[i]
        self.basic[i], self.nonbasic[j] = self.nonbasic[j], self.basic[i]

    def bland_step(self) -> str:
        """One pivot by Bland's rule: the entering variable has the smallest
        index among those with positive objective coefficient, and ratio ties
        leave by the smallest basic index.
        """
        entering = [
            (self.nonbasic[j], j) for j in range(self.n) if self.c[j] > 0
        ]
        if not entering:
            return "optimal"
        _, j = min(entering)
        leaving = [
            (self.b[i] / self.a[i][j], self.basic[i], i)
            for i in range(self.m)
            if self.a[i][j] > 0
        ]
        if not leaving:
            return "unbounded"
        _, _, i = min(leaving)
        self.pivot(i, j)
        return "continue"

    def primal(self) -> List[Fraction]:
        values = [Fraction(0)] * (self.n + self.m)
        for i, var in enumerate(self.basic):
            values[var] = self.b[i]
        return values[: self.n]

    def dual(self) -> List[Fraction]:
        values = [Fraction(0)] * self.m
        for j, var in enumerate(self.nonbasic):
            if var >= self.n:
                values[var - self.n] = -self.c[j]
        return values


def maximize(
    c: Sequence[Fraction],
    a: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
) -> LPSolution:
    """Solve ``max c.y`` subject to ``A y <= b`` and ``y >= 0`` exactly.

    Args:
        c: Objective coefficients, one per variable.
        a: Constraint matrix, one row per constraint.
        b: Nonnegative right-hand sides.
    Returns:
        The optimal value, an optimal primal ``y``, an optimal dual ``x``
        (``x >= 0``, ``A^T x >= c``, ``b.x = value``) and the pivot count.
    Raises:
        LPError: If the problem is unbounded.
    """
    dictionary = SimplexDictionary(c, a, b)
    pivots = 0
    while True:
        status = dictionary.bland_step()
        if status == "optimal":
            break
        if status == "unbounded":
            raise _exceptions.LPError("LP is unbounded")
        pivots += 1
    LOGGER.info(
        f"Simplex solved {dictionary.m}x{dictionary.n} LP in {pivots} pivots"
    )
    return LPSolution(
        value=dictionary.z,
        primal=dictionary.primal(),
        dual=dictionary.dual(),
        pivots=pivots,
    )
