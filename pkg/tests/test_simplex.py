from fractions import Fraction

import pytest

from repobee_sepchoose import _exceptions, _simplex


def _assert_certified(c, a, b, solution):
    """Primal and dual feasibility plus equal objective values."""
    y, x = solution.primal, solution.dual
    assert all(value >= 0 for value in y)
    assert all(value >= 0 for value in x)
    for row, bound in zip(a, b):
        assert sum(coef * value for coef, value in zip(row, y)) <= bound
    for j, cost in enumerate(c):
        assert sum(row[j] * x[i] for i, row in enumerate(a)) >= cost
    assert sum(cj * yj for cj, yj in zip(c, y)) == solution.value
    assert sum(bi * xi for bi, xi in zip(b, x)) == solution.value


def test_two_variable_lp():
    c, a, b = [1, 1], [[1, 2], [3, 1]], [4, 6]

    solution = _simplex.maximize(c, a, b)

    assert solution.value == Fraction(14, 5)
    assert solution.primal == [Fraction(8, 5), Fraction(6, 5)]
    assert solution.dual == [Fraction(2, 5), Fraction(1, 5)]
    _assert_certified(c, a, b, solution)


def test_fractional_clique_of_c5():
    """Packing weights on the vertices of C5 against its five maximal stable
    sets {i, i + 2}.
    """
    c = [1] * 5
    a = [
        [1 if v in (i, (i + 2) % 5) else 0 for v in range(5)]
        for i in range(5)
    ]
    b = [1] * 5

    solution = _simplex.maximize(c, a, b)

    assert solution.value == Fraction(5, 2)
    _assert_certified(c, a, b, solution)


def test_degenerate_zero_rhs():
    solution = _simplex.maximize([1, 1], [[1, 1], [1, 0]], [0, 0])

    assert solution.value == 0
    assert solution.primal == [0, 0]


def test_no_constraints_with_nonpositive_costs():
    solution = _simplex.maximize([-1, 0], [], [])

    assert solution.value == 0
    assert solution.pivots == 0


def test_unbounded_raises():
    with pytest.raises(_exceptions.LPError) as exc_info:
        _simplex.maximize([1], [[-1]], [1])

    assert "unbounded" in str(exc_info.value)


@pytest.mark.parametrize(
    "c, a, b",
    [([1], [[1]], [-1]), ([1, 1], [[1]], [1]), ([1], [[1]], [1, 2])],
    ids=["negative-rhs", "short-row", "rhs-length"],
)
def test_rejects_invalid_input(c, a, b):
    with pytest.raises(_exceptions.LPError):
        _simplex.maximize(c, a, b)


def test_pivot_swaps_variables():
    dictionary = _simplex.SimplexDictionary([1], [[2]], [4])

    dictionary.pivot(0, 0)

    assert dictionary.basic == [0]
    assert dictionary.nonbasic == [1]
    assert dictionary.b == [2]
    assert dictionary.z == 2
    assert dictionary.bland_step() == "optimal"
