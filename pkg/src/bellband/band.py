"""The feasible band for the fourth correlation.

Two independent routes compute the interval of values compatible with
both CHSH inequalities given the three cosine correlations: a closed
form derived directly from the inequalities, and an exact linear
program over joint distributions on the 16 sign patterns solved by
enumeration of basic feasible solutions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import AngleTriple, require_q_plus
from .errors import DomainError, InfeasibleError
from .sampling import JointDistribution4

#: basis matrices with |det| below this are treated as rank deficient
PIVOT_TOL = 1e-10

_FEAS_TOL = 1e-9


@dataclass(frozen=True)
class Interval:
    """A closed subinterval of [-1, 1]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo <= self.hi):
            raise DomainError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol


def feasible_band(theta: AngleTriple) -> Interval:
    """Exact interval of fourth-correlation values allowed by the CHSH
    inequalities at a configuration in the positive cube."""
    require_q_plus(theta)
    c1 = -math.cos(theta.theta1)
    c2 = -math.cos(theta.theta2)
    c3 = -math.cos(theta.theta3)
    r1 = 2.0 - abs(c1 + c2)
    r2 = 2.0 - abs(c1 - c2)
    lo = max(c3 - r1, -c3 - r2, -1.0)
    hi = min(c3 + r1, -c3 + r2, 1.0)
    if lo > hi:
        # nonempty by r1 + r2 = 4 - 2*max(|c1|,|c2|) >= 2 >= 2|c3|;
        # collapse pure rounding gaps
        if lo - hi > 1e-12:
            raise DomainError(f"band unexpectedly empty at {theta}")
        lo = hi = 0.5 * (lo + hi)
    return Interval(lo, hi)


def band_map(resolution: int) -> np.ndarray:
    """Band endpoints over the uniform resolution^3 grid on the positive
    cube, as rows (theta1, theta2, theta3, lo, hi, width) in theta1-major
    order."""
    resolution = int(resolution)
    if resolution < 2:
        raise DomainError(f"resolution must be >= 2, got {resolution}")
    axis = np.linspace(0.0, math.pi, resolution)
    rows = np.empty((resolution ** 3, 6))
    k = 0
    for t1 in axis:
        for t2 in axis:
            for t3 in axis:
                band = feasible_band(AngleTriple(t1, t2, t3))
                rows[k] = (t1, t2, t3, band.lo, band.hi, band.width)
                k += 1
    return rows


# --- LP oracle over distributions on {+-1}^4 -------------------------------

_P = JointDistribution4.PATTERNS.astype(float)
_M1 = _P[:, 0] * _P[:, 1]   # E[a_oo b_oo]
_M2 = _P[:, 2] * _P[:, 1]   # E[a_bo b_oo]
_M3 = _P[:, 0] * _P[:, 3]   # E[a_oo b_ob]
_OBJ = _P[:, 2] * _P[:, 3]  # E[a_bo b_ob]
_EQ = np.vstack([np.ones(16), _M1, _M2, _M3])

_BASES = np.array(list(itertools.combinations(range(16), 4)))
_MATS = np.ascontiguousarray(_EQ[:, _BASES].transpose(1, 0, 2))
_NONSING = np.abs(np.linalg.det(_MATS)) > PIVOT_TOL
_BASES_NS = _BASES[_NONSING]
_INV = np.linalg.inv(_MATS[_NONSING])
_OBJ_NS = _OBJ[_BASES_NS]


@dataclass(frozen=True)
class LpResult:
    """Extremes of the fourth moment over all joint distributions matching
    three given moments, with attaining witness distributions."""

    min_value: float
    max_value: float
    witness_min: JointDistribution4
    witness_max: JointDistribution4


def _witness(basis: np.ndarray, sol: np.ndarray) -> JointDistribution4:
    p = np.zeros(16)
    p[basis] = np.clip(sol, 0.0, None)
    p /= p.sum()
    return JointDistribution4(p)


def lp_band(c1: float, c2: float, c3: float) -> LpResult:
    """Minimize and maximize E[a_bo * b_ob] over probability vectors on the
    16 sign patterns with E[a_oo b_oo] = c1, E[a_bo b_oo] = c2,
    E[a_oo b_ob] = c3.

    Exact at this size: every basic feasible solution of the 4x16 system
    is enumerated.
    """
    for name, v in (("c1", c1), ("c2", c2), ("c3", c3)):
        if not math.isfinite(float(v)) or abs(v) > 1.0:
            raise DomainError(f"{name} = {v} is not a correlation in [-1, 1]")
    b = np.array([1.0, c1, c2, c3])
    sols = _INV @ b
    feasible = np.all(sols >= -_FEAS_TOL, axis=1)
    if not feasible.any():
        raise InfeasibleError(f"no distribution matches moments ({c1}, {c2}, {c3})")
    objs = np.sum(sols * _OBJ_NS, axis=1)
    objs_feas = np.where(feasible, objs, np.nan)

    def pick(extreme: float) -> tuple[np.ndarray, np.ndarray]:
        # among bases attaining the extreme, prefer the least degenerate one
        near = feasible & (np.abs(objs - extreme) <= 1e-12)
        idx = np.flatnonzero(near)
        best = idx[np.argmax(np.min(sols[idx], axis=1))]
        return _BASES_NS[best], sols[best]

    min_value = float(np.nanmin(objs_feas))
    max_value = float(np.nanmax(objs_feas))
    return LpResult(
        min_value=min_value,
        max_value=max_value,
        witness_min=_witness(*pick(min_value)),
        witness_max=_witness(*pick(max_value)),
    )


def feasible_distribution(c1: float, c2: float, c3: float, f: float) -> JointDistribution4:
    """A joint distribution on the 16 sign patterns matching all four
    moments (c1, c2, c3, f), built as a convex combination of the two LP
    witnesses."""
    result = lp_band(c1, c2, c3)
    if not (result.min_value - _FEAS_TOL <= f <= result.max_value + _FEAS_TOL):
        raise InfeasibleError(
            f"fourth moment {f} lies outside the feasible band "
            f"[{result.min_value}, {result.max_value}]"
        )
    span = result.max_value - result.min_value
    if span <= _FEAS_TOL:
        return result.witness_min
    lam = (result.max_value - f) / span
    lam = min(max(lam, 0.0), 1.0)
    p = lam * result.witness_min.p + (1.0 - lam) * result.witness_max.p
    return JointDistribution4(p)
