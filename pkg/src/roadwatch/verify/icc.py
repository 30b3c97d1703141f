"""Intraclass correlation from one-way random-effects ANOVA.

For an n-target by k-rater matrix with row means m_i and grand mean m:

    BMS = k * sum_i (m_i - m)^2 / (n - 1)
    WMS = sum_ij (x_ij - m_i)^2 / (n * (k - 1))

    single-rater ICC  = (BMS - WMS) / (BMS + (k - 1) * WMS)
    average-of-k ICC  = (BMS - WMS) / BMS

Significance is the upper tail of F = BMS/WMS with (n-1, n(k-1)) degrees
of freedom, evaluated through the regularized incomplete beta function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special

from .errors import DegenerateRatings, ShapeError


@dataclass(frozen=True)
class RatingMatrix:
    """n targets by k ratings of one ordinal attribute."""

    attribute: str
    values: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if self.values:
            k = len(self.values[0])
            if any(len(row) != k for row in self.values):
                raise ShapeError(f"{self.attribute}: ragged rating matrix")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def k(self) -> int:
        return len(self.values[0]) if self.values else 0

    def to_csv(self) -> str:
        header = "target," + ",".join(f"rating_{j + 1}" for j in range(self.k))
        lines = [header]
        for i, row in enumerate(self.values):
            lines.append(f"{i}," + ",".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def flat(self) -> list[float]:
        return [v for row in self.values for v in row]


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


@dataclass(frozen=True)
class IccResult:
    icc_single: float
    icc_average: float
    f_value: float
    df1: int
    df2: int
    p_value: float
    bms: float
    wms: float

    def to_dict(self) -> dict:
        return {
            "icc_single": self.icc_single,
            "icc_average": self.icc_average,
            "F": self.f_value,
            "df1": self.df1,
            "df2": self.df2,
            "p_value": self.p_value,
            "BMS": self.bms,
            "WMS": self.wms,
        }


def f_upper_tail(f_value: float, df1: int, df2: int) -> float:
    """P(F >= f_value) for the F distribution, via the regularized
    incomplete beta function."""
    if f_value <= 0:
        return 1.0
    x = df2 / (df2 + df1 * f_value)
    return float(special.betainc(df2 / 2.0, df1 / 2.0, x))


def icc_oneway(matrix: RatingMatrix | Sequence[Sequence[float]]) -> IccResult:
    """One-way random-effects ICC for a rectangular rating matrix.

    Requires n >= 2 targets and k >= 2 ratings. A matrix with no
    between-target variance (including the all-identical case) has no
    defined ICC and raises DegenerateRatings. Perfect within-target
    agreement yields ICC 1 with p reported as 0.
    """
    rows = matrix.values if isinstance(matrix, RatingMatrix) else matrix
    try:
        x = np.asarray(rows, dtype=float)
    except ValueError:
        raise ShapeError("rating matrix is ragged") from None
    if x.ndim != 2:
        raise ShapeError("rating matrix must be two-dimensional")
    n, k = x.shape
    if n < 2 or k < 2:
        raise ShapeError(f"need at least 2 targets and 2 ratings, got {n}x{k}")

    row_means = x.mean(axis=1)
    grand = x.mean()
    bms = k * float(((row_means - grand) ** 2).sum()) / (n - 1)
    wms = float(((x - row_means[:, None]) ** 2).sum()) / (n * (k - 1))
    df1 = n - 1
    df2 = n * (k - 1)

    if bms == 0.0:
        # no between-target variance: all-identical matrices and the
        # equal-row-means corner both leave the ratio undefined
        raise DegenerateRatings("rating matrix has no between-target variance")
    if wms == 0.0:
        return IccResult(
            icc_single=1.0,
            icc_average=1.0,
            f_value=float("inf"),
            df1=df1,
            df2=df2,
            p_value=0.0,
            bms=bms,
            wms=wms,
        )

    return IccResult(
        icc_single=(bms - wms) / (bms + (k - 1) * wms),
        icc_average=(bms - wms) / bms,
        f_value=bms / wms,
        df1=df1,
        df2=df2,
        p_value=f_upper_tail(bms / wms, df1, df2),
        bms=bms,
        wms=wms,
    )


def spearman_brown(icc_single: float, k: int) -> float:
    """Average-of-k reliability implied by a single-rater reliability."""
    return k * icc_single / (1.0 + (k - 1) * icc_single)
