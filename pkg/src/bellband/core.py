"""Angle conventions, the twisted Malus law, singlet outcome statistics,
and empirical correlation of +/-1 sequences.

Angles are radians as 64-bit floats.  The circle is represented by the
half-open interval [-pi, pi); the positive cube Q+ = [0, pi]^3 is the
domain of the reduced angle triples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError

TWO_PI = 2.0 * math.pi

#: absolute tolerance for probability bookkeeping (closed forms are exact
#: up to rounding)
PROB_TOL = 1e-12


def wrap_angle(x: float) -> float:
    """Reduce ``x`` modulo 2*pi into [-pi, pi)."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"angle must be finite, got {x}")
    y = math.fmod(x + math.pi, TWO_PI)
    if y < 0.0:
        y += TWO_PI
    return y - math.pi


def twisted_malus(theta: float) -> float:
    """Singlet correlation -cos(theta) at relative detector angle theta."""
    theta = float(theta)
    if not math.isfinite(theta):
        raise DomainError(f"angle must be finite, got {theta}")
    return -math.cos(theta)


@dataclass(frozen=True)
class AngleQuadruplet:
    """Detector angles (theta_a, theta_a', theta_b, theta_b'), each wrapped
    to [-pi, pi) relative to a fixed reference direction."""

    theta_a: float
    theta_a_prime: float
    theta_b: float
    theta_b_prime: float

    def __post_init__(self):
        for name in ("theta_a", "theta_a_prime", "theta_b", "theta_b_prime"):
            object.__setattr__(self, name, wrap_angle(getattr(self, name)))


@dataclass(frozen=True)
class AngleTriple:
    """Reduced coordinates (theta1, theta2, theta3) of a detector
    configuration.

    ``in_q_plus`` records whether all three components lie in [0, pi];
    operations defined only on the positive cube reject triples where it
    is False.  ``theta4`` is the dependent fourth difference.
    """

    theta1: float
    theta2: float
    theta3: float

    def __post_init__(self):
        for name in ("theta1", "theta2", "theta3"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)
        ok = all(0.0 <= t <= math.pi for t in (self.theta1, self.theta2, self.theta3))
        object.__setattr__(self, "in_q_plus", ok)

    @property
    def theta4(self) -> float:
        return self.theta1 - (self.theta2 + self.theta3)

    def as_array(self) -> np.ndarray:
        return np.array([self.theta1, self.theta2, self.theta3])


def require_q_plus(theta: AngleTriple) -> AngleTriple:
    if not theta.in_q_plus:
        raise DomainError(
            f"triple ({theta.theta1}, {theta.theta2}, {theta.theta3}) "
            "lies outside the positive cube [0, pi]^3"
        )
    return theta


def reduce_angles(q: AngleQuadruplet) -> AngleTriple:
    """Map a detector quadruplet to the reduced triple
    (theta_a - theta_b, theta_a' - theta_b, theta_a - theta_b').

    Differences are wrapped to [-pi, pi); a wrapped value of exactly -pi
    is promoted to +pi so that configurations at relative angle pi stay
    inside the positive cube.
    """
    diffs = (
        q.theta_a - q.theta_b,
        q.theta_a_prime - q.theta_b,
        q.theta_a - q.theta_b_prime,
    )
    wrapped = []
    for d in diffs:
        w = wrap_angle(d)
        if w == -math.pi:
            w = math.pi
        wrapped.append(w)
    return AngleTriple(*wrapped)


@dataclass(frozen=True)
class JointDistribution2:
    """Joint outcome distribution of one measured pair: probabilities of
    (+,+), (+,-), (-,+), (-,-).  Marginals must be uniform."""

    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float

    def __post_init__(self):
        p = self.as_array()
        if np.any(p < -PROB_TOL):
            raise DomainError(f"negative probability in {p}")
        if abs(p.sum() - 1.0) > PROB_TOL:
            raise DomainError(f"probabilities sum to {p.sum()}, not 1")
        if abs(self.p_pp + self.p_pm - 0.5) > PROB_TOL or abs(self.p_pp + self.p_mp - 0.5) > PROB_TOL:
            raise DomainError("marginals are not uniform")

    def as_array(self) -> np.ndarray:
        return np.array([self.p_pp, self.p_pm, self.p_mp, self.p_mm])

    @property
    def expected_product(self) -> float:
        return self.p_pp + self.p_mm - self.p_pm - self.p_mp


def singlet_joint(theta: float) -> JointDistribution2:
    """Joint outcome distribution of a singlet pair measured at relative
    angle theta: uniform marginals with product mean -cos(theta)."""
    theta = float(theta)
    if not math.isfinite(theta):
        raise DomainError(f"angle must be finite, got {theta}")
    c = math.cos(theta)
    same = (1.0 - c) / 4.0
    diff = (1.0 + c) / 4.0
    # rounding can leave a tiny negative lobe at the endpoints
    same = max(same, 0.0)
    diff = max(diff, 0.0)
    return JointDistribution2(p_pp=same, p_pm=diff, p_mp=diff, p_mm=same)


def as_outcomes(values) -> np.ndarray:
    """Validate a finite +/-1 sequence and return it as an int8 array."""
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ShapeError(f"expected a 1-d sequence, got shape {arr.shape}")
    if arr.size == 0:
        raise DomainError("outcome sequence must be non-empty")
    if not np.issubdtype(arr.dtype, np.number):
        raise DomainError(f"outcomes must be numeric, got dtype {arr.dtype}")
    if not np.all(np.isin(arr, (-1, 1))):
        raise DomainError("outcomes must all be +1 or -1")
    return arr.astype(np.int8)


def empirical_correlation(u, v) -> float:
    """Finite-sample correlation (1/n) sum u_i v_i of two +/-1 sequences."""
    u = as_outcomes(u)
    v = as_outcomes(v)
    if u.size != v.size:
        raise ShapeError(f"length mismatch: {u.size} vs {v.size}")
    s = int(np.sum(u.astype(np.int64) * v.astype(np.int64)))
    return s / u.size
