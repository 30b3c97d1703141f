import math

import numpy as np
import pytest
from scipy import integrate, special

from roadwatch.verify.errors import DegenerateRatings, ShapeError
from roadwatch.verify.icc import (
    RatingMatrix,
    f_upper_tail,
    icc_oneway,
    spearman_brown,
)


def brute_force_anova(rows):
    """Independent oracle: direct double-loop sums, no vectorization."""
    n = len(rows)
    k = len(rows[0])
    row_means = []
    for row in rows:
        total = 0.0
        for v in row:
            total += v
        row_means.append(total / k)
    grand = sum(row_means) / n
    between = 0.0
    for m in row_means:
        between += (m - grand) ** 2
    bms = k * between / (n - 1)
    within = 0.0
    for i in range(n):
        for j in range(k):
            within += (rows[i][j] - row_means[i]) ** 2
    wms = within / (n * (k - 1))
    icc1 = (bms - wms) / (bms + (k - 1) * wms)
    icck = (bms - wms) / bms
    return bms, wms, icc1, icck


def test_hand_worked_example():
    result = icc_oneway([[1, 2], [3, 4], [5, 6]])
    assert result.bms == pytest.approx(8.0, abs=1e-12)
    assert result.wms == pytest.approx(0.5, abs=1e-12)
    assert result.icc_single == pytest.approx(7.5 / 8.5, abs=1e-12)
    assert result.icc_average == pytest.approx(0.9375, abs=1e-12)
    assert result.f_value == pytest.approx(16.0, abs=1e-12)
    assert result.df1 == 2 and result.df2 == 3


def test_perfect_agreement():
    result = icc_oneway([[1, 1], [2, 2], [3, 3]])
    assert result.icc_single == 1.0
    assert result.icc_average == 1.0
    assert result.p_value == 0.0
    assert math.isinf(result.f_value)


def test_matches_brute_force_oracle():
    rng = np.random.RandomState(21)
    for _ in range(200):
        n = rng.randint(2, 51)
        k = rng.randint(2, 11)
        rows = rng.uniform(1.0, 5.0, size=(n, k)).tolist()
        bms, wms, icc1, icck = brute_force_anova(rows)
        result = icc_oneway(rows)
        assert abs(result.bms - bms) <= 1e-9
        assert abs(result.wms - wms) <= 1e-9
        assert abs(result.icc_single - icc1) <= 1e-9
        assert abs(result.icc_average - icck) <= 1e-9


def test_spearman_brown_identity():
    rng = np.random.RandomState(8)
    for _ in range(100):
        rows = rng.uniform(1.0, 4.0, size=(46, 10)).tolist()
        result = icc_oneway(rows)
        assert abs(result.icc_average - spearman_brown(result.icc_single, 10)) <= 1e-9


def test_icc_single_within_theoretical_bounds():
    rng = np.random.RandomState(5)
    for _ in range(100):
        n = rng.randint(2, 30)
        k = rng.randint(2, 10)
        result = icc_oneway(rng.uniform(0, 1, size=(n, k)).tolist())
        assert -1.0 / (k - 1) - 1e-12 <= result.icc_single <= 1.0 + 1e-12
        assert result.icc_average <= 1.0 + 1e-12


def test_affine_invariance():
    rng = np.random.RandomState(3)
    base = rng.uniform(1, 4, size=(20, 6))
    ref = icc_oneway(base.tolist())
    for a, b in [(2.0, 0.0), (0.5, 3.0), (10.0, -7.0)]:
        result = icc_oneway((a * base + b).tolist())
        assert abs(result.icc_single - ref.icc_single) <= 1e-9
        assert abs(result.icc_average - ref.icc_average) <= 1e-9


def test_degenerate_and_shape_errors():
    with pytest.raises(DegenerateRatings):
        icc_oneway([[2, 2], [2, 2]])  # all identical
    with pytest.raises(DegenerateRatings):
        icc_oneway([[1, 2], [2, 1]])  # equal row means, BMS = 0
    with pytest.raises(ShapeError):
        icc_oneway([[1, 2], [3]])
    with pytest.raises(ShapeError):
        icc_oneway([[1, 2]])  # n < 2
    with pytest.raises(ShapeError):
        icc_oneway([[1], [2]])  # k < 2
    with pytest.raises(ShapeError):
        RatingMatrix(attribute="x", values=((1.0, 2.0), (3.0,)))


def test_p_value_against_quadrature_oracle():
    # integrate the F density directly as an independent check
    def f_pdf(x, d1, d2):
        c = (
            math.gamma((d1 + d2) / 2)
            / (math.gamma(d1 / 2) * math.gamma(d2 / 2))
            * (d1 / d2) ** (d1 / 2)
        )
        return c * x ** (d1 / 2 - 1) * (1 + d1 * x / d2) ** (-(d1 + d2) / 2)

    for f_value, d1, d2 in [(16.0, 2, 3), (1.5, 10, 40), (3.2, 5, 90), (0.7, 3, 12)]:
        expected, _err = integrate.quad(f_pdf, f_value, np.inf, args=(d1, d2))
        assert f_upper_tail(f_value, d1, d2) == pytest.approx(expected, rel=1e-8, abs=1e-12)


def test_p_value_monotone_in_f():
    previous = 1.1
    for f_value in [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 64.0]:
        p = f_upper_tail(f_value, 9, 90)
        assert p < previous
        previous = p


def test_rating_matrix_csv_roundtrip():
    matrix = RatingMatrix(attribute="severity", values=((1.0, 2.0), (3.0, 4.0)))
    csv = matrix.to_csv()
    lines = csv.strip().splitlines()
    assert lines[0] == "target,rating_1,rating_2"
    assert lines[1] == "0,1,2"
    assert matrix.n == 2 and matrix.k == 2
