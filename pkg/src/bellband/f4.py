"""Candidate fourth-correlation functions and the finite-difference
machinery that probes their regularity at the origin of the positive
cube: gradient, axis derivatives, second-order quotients, quadratic
fitting, the coefficient-consistency (contradiction) report, and the
directional-jump and inequality scans.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import qmc

from .band import feasible_band
from .core import AngleTriple, require_q_plus
from .errors import DomainError, GridFormatError

_DIAG_DIR = np.full(3, 1.0 / math.sqrt(3.0))

BUILTIN_KINDS = ("locality", "product", "product-diagonal")


@dataclass(frozen=True)
class F4Candidate:
    """An evaluable candidate for the unknown fourth correlation on the
    positive cube.

    Builtins: ``locality`` is -cos(theta2 + theta3 - theta1), ``product``
    is -cos(theta1) cos(theta2) cos(theta3), and ``product-diagonal``
    equals -cos(theta) on the exact diagonal and the product value
    elsewhere.  ``grid`` candidates interpolate trilinearly between node
    values on a uniform grid over [0, pi]^3.
    """

    kind: str
    name: str
    grid_resolution: Optional[int] = None
    grid_values: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind in BUILTIN_KINDS:
            if self.grid_values is not None:
                raise GridFormatError(f"builtin candidate {self.kind!r} takes no grid")
            return
        if self.kind != "grid":
            raise GridFormatError(f"unknown candidate kind {self.kind!r}")
        r = self.grid_resolution
        if r is None or int(r) < 2:
            raise GridFormatError(f"grid resolution must be >= 2, got {r}")
        r = int(r)
        values = np.asarray(self.grid_values, dtype=float)
        if values.size != r ** 3:
            raise GridFormatError(
                f"grid needs {r ** 3} values for resolution {r}, got {values.size}"
            )
        if not np.all(np.isfinite(values)) or np.any(np.abs(values) > 1.0):
            raise GridFormatError("grid values must lie in [-1, 1]")
        values = values.reshape(r, r, r).copy()
        values.flags.writeable = False
        object.__setattr__(self, "grid_resolution", r)
        object.__setattr__(self, "grid_values", values)

    @classmethod
    def locality(cls) -> "F4Candidate":
        return cls(kind="locality", name="locality")

    @classmethod
    def product(cls) -> "F4Candidate":
        return cls(kind="product", name="product")

    @classmethod
    def product_diagonal(cls) -> "F4Candidate":
        return cls(kind="product-diagonal", name="product-diagonal")

    @classmethod
    def builtin(cls, kind: str) -> "F4Candidate":
        if kind not in BUILTIN_KINDS:
            raise GridFormatError(f"unknown builtin candidate {kind!r}")
        return cls(kind=kind, name=kind)

    @classmethod
    def from_grid(cls, resolution: int, values, name: str = "grid") -> "F4Candidate":
        return cls(kind="grid", name=name, grid_resolution=resolution, grid_values=values)

    @classmethod
    def from_json(cls, text: str, name: str = "grid") -> "F4Candidate":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GridFormatError(f"grid document is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("kind") != "grid":
            raise GridFormatError('grid document must be an object with kind:"grid"')
        try:
            resolution = doc["resolution"]
            values = doc["values"]
        except KeyError as exc:
            raise GridFormatError(f"grid document is missing field {exc}") from exc
        return cls.from_grid(resolution, values, name=str(doc.get("name", name)))

    def to_json(self) -> str:
        if self.kind != "grid":
            raise GridFormatError("only grid candidates serialize to a grid document")
        return json.dumps(
            {
                "kind": "grid",
                "name": self.name,
                "resolution": self.grid_resolution,
                "values": list(self.grid_values.ravel()),
            }
        )

    def _interpolate(self, t: np.ndarray) -> float:
        r = self.grid_resolution
        x = t / math.pi * (r - 1)
        i0 = np.clip(np.floor(x).astype(int), 0, r - 2)
        w = x - i0
        v = 0.0
        for d1 in (0, 1):
            for d2 in (0, 1):
                for d3 in (0, 1):
                    node = self.grid_values[i0[0] + d1, i0[1] + d2, i0[2] + d3]
                    weight = (
                        (w[0] if d1 else 1.0 - w[0])
                        * (w[1] if d2 else 1.0 - w[1])
                        * (w[2] if d3 else 1.0 - w[2])
                    )
                    v += weight * node
        return v

    def evaluate(self, theta: AngleTriple) -> float:
        require_q_plus(theta)
        t1, t2, t3 = theta.theta1, theta.theta2, theta.theta3
        if self.kind == "locality":
            return -math.cos(t2 + t3 - t1)
        if self.kind == "product":
            return -math.cos(t1) * math.cos(t2) * math.cos(t3)
        if self.kind == "product-diagonal":
            if t1 == t2 == t3:
                return -math.cos(t1)
            return -math.cos(t1) * math.cos(t2) * math.cos(t3)
        return self._interpolate(theta.as_array())


def builtins() -> dict[str, F4Candidate]:
    return {kind: F4Candidate.builtin(kind) for kind in BUILTIN_KINDS}


def _ev(candidate, t1: float, t2: float, t3: float) -> float:
    return candidate.evaluate(AngleTriple(t1, t2, t3))


def gradient_at_origin(candidate, h: float = 1e-6) -> np.ndarray:
    """One-sided finite-difference gradient at the corner of the positive
    cube, Richardson-extrapolated from steps h and h/2."""
    h = float(h)
    if not (0.0 < h <= 0.1):
        raise DomainError(f"step must lie in (0, 0.1], got {h}")
    f0 = _ev(candidate, 0.0, 0.0, 0.0)
    grad = np.empty(3)
    for i in range(3):
        def diff(s: float) -> float:
            point = [0.0, 0.0, 0.0]
            point[i] = s
            return (_ev(candidate, *point) - f0) / s

        grad[i] = (4.0 * diff(h / 2.0) - diff(h)) / 3.0
    return grad


def axis_derivative_check(candidate, t: float, i: int, h: float = 1e-4) -> float:
    """Absolute deviation of the central-difference partial derivative at
    t*e_i from the forced value sin(t)."""
    t = float(t)
    if i not in (1, 2, 3):
        raise DomainError(f"axis index must be 1, 2 or 3, got {i}")
    if not (h < t < math.pi - h):
        raise DomainError(f"t = {t} is too close to the boundary for step {h}")
    lo = [0.0, 0.0, 0.0]
    hi = [0.0, 0.0, 0.0]
    lo[i - 1] = t - h
    hi[i - 1] = t + h
    deriv = (_ev(candidate, *hi) - _ev(candidate, *lo)) / (2.0 * h)
    return abs(deriv - math.sin(t))


def second_quotient(candidate, direction, t: float) -> float:
    """The quotient (F(t*v) + 1) / t^2 along a direction v in the positive
    cone."""
    t = float(t)
    if not (0.0 < t <= 0.5):
        raise DomainError(f"step must lie in (0, 0.5], got {t}")
    v = np.asarray(direction, dtype=float)
    if v.shape != (3,):
        raise DomainError(f"direction must be a 3-vector, got shape {v.shape}")
    if np.any(v < 0.0):
        raise DomainError(f"direction {v} leaves the positive cone")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise DomainError("direction must be nonzero")
    v = v / norm
    return (_ev(candidate, *(t * v)) + 1.0) / (t * t)


def _cone_directions(n: int, seed: int) -> np.ndarray:
    """n quasi-random unit directions in the positive cone (Halton)."""
    engine = qmc.Halton(d=3, scramble=True, seed=seed)
    dirs = []
    while len(dirs) < n:
        for row in engine.random(2 * n):
            norm = np.linalg.norm(row)
            if norm > 1e-9:
                dirs.append(row / norm)
                if len(dirs) == n:
                    break
    return np.array(dirs)


def direction_quotients(candidate, t: float, n_directions: int, seed: int = 0) -> np.ndarray:
    """Second-order quotients over quasi-random cone directions plus the
    exact diagonal (appended last)."""
    n_directions = int(n_directions)
    if n_directions < 8:
        raise DomainError(f"need at least 8 directions, got {n_directions}")
    dirs = _cone_directions(n_directions, seed)
    quotients = [second_quotient(candidate, d, t) for d in dirs]
    quotients.append(second_quotient(candidate, _DIAG_DIR, t))
    return np.array(quotients)


def jump_measure(candidate, t: float, n_directions: int, seed: int = 0) -> float:
    """Spread (max - min) of the second-order quotient over directions; a
    large value certifies a directional jump at the origin."""
    t = float(t)
    if not (0.0 < t <= 0.1):
        raise DomainError(f"step must lie in (0, 0.1], got {t}")
    q = direction_quotients(candidate, t, n_directions, seed)
    return float(q.max() - q.min())


@dataclass(frozen=True)
class QuadraticFit:
    """Least-squares quadratic model c0 + sum c_i t_i + sum_{i<=j} c_ij
    t_i t_j near the origin."""

    c0: float
    c_lin: np.ndarray
    c_quad: np.ndarray
    residual: float

    @property
    def diagonal_coeff_sum(self) -> float:
        return float(np.trace(self.c_quad))

    @property
    def max_cross_coeff(self) -> float:
        off = self.c_quad[np.triu_indices(3, k=1)]
        return float(np.max(np.abs(off)))


def _ball_points(radius: float, count: int, seed: int) -> np.ndarray:
    engine = qmc.Halton(d=3, scramble=True, seed=seed)
    points = np.empty((0, 3))
    while points.shape[0] < count:
        batch = engine.random(4 * count) * radius
        norms = np.linalg.norm(batch, axis=1)
        keep = batch[(norms <= radius) & (norms > 0.0)]
        points = np.vstack([points, keep])
    return points[:count]


def quadratic_fit(candidate, radius: float, samples: int, seed: int = 0) -> QuadraticFit:
    """Fit a quadratic model to the candidate over quasi-random points in
    the ball of the given radius intersected with the positive cube."""
    radius = float(radius)
    if not (0.0 < radius <= 0.3):
        raise DomainError(f"radius must lie in (0, 0.3], got {radius}")
    samples = int(samples)
    if samples < 10:
        raise DomainError(f"fit is underdetermined with {samples} samples")
    pts = _ball_points(radius, samples, seed)
    t1, t2, t3 = pts[:, 0], pts[:, 1], pts[:, 2]
    design = np.column_stack(
        [np.ones(samples), t1, t2, t3, t1 * t1, t1 * t2, t1 * t3, t2 * t2, t2 * t3, t3 * t3]
    )
    values = np.array([_ev(candidate, *p) for p in pts])
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    pred = design @ coef
    residual = float(np.sqrt(np.mean((pred - values) ** 2)))
    # off-diagonal entries hold the i<j coefficients themselves
    c_quad = np.array(
        [
            [coef[4], coef[5], coef[6]],
            [coef[5], coef[7], coef[8]],
            [coef[6], coef[8], coef[9]],
        ]
    )
    return QuadraticFit(c0=float(coef[0]), c_lin=coef[1:4].copy(), c_quad=c_quad, residual=residual)


def _cross_probe(candidate, i: int, j: int, x: float = 1e-2, ks=(2, 5, 10, 50)) -> float:
    """Cross coefficient c_ij estimated along the (0, x, kx) probe
    schedule via mixed second differences, extrapolated linearly in k."""
    f0 = _ev(candidate, 0.0, 0.0, 0.0)
    estimates = []
    for k in ks:
        ti = [0.0, 0.0, 0.0]
        tj = [0.0, 0.0, 0.0]
        tij = [0.0, 0.0, 0.0]
        ti[i] = x
        tj[j] = k * x
        tij[i], tij[j] = x, k * x
        mixed = _ev(candidate, *tij) - _ev(candidate, *ti) - _ev(candidate, *tj) + f0
        estimates.append(mixed / (k * x * x))
    design = np.column_stack([np.ones(len(ks)), np.asarray(ks, dtype=float)])
    coef, *_ = np.linalg.lstsq(design, np.array(estimates), rcond=None)
    return float(coef[0])


@dataclass(frozen=True)
class ReportTolerances:
    """Thresholds used when assembling an analysis report."""

    residual_max: float = 1e-8
    coeff_tol: float = 0.05
    jump_max: float = 0.05


@dataclass(frozen=True)
class AnalysisReport:
    """Numerical regularity summary of one candidate near the origin."""

    candidate: str
    value_at_origin: float
    gradient_at_origin: np.ndarray
    axis_residuals: np.ndarray
    second_quotient_bound: float
    fit: QuadraticFit
    diagonal_sum: float
    axis_forced_sum: float
    cross_term_max: float
    contradiction: bool
    jump_spread: float
    flags: tuple = ()
    disclaimer: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "candidate": self.candidate,
            "value_at_origin": self.value_at_origin,
            "gradient_at_origin": list(self.gradient_at_origin),
            "axis_residuals": list(self.axis_residuals),
            "second_quotient_bound": self.second_quotient_bound,
            "fit": {
                "c0": self.fit.c0,
                "c_lin": list(self.fit.c_lin),
                "c_quad": [list(row) for row in self.fit.c_quad],
                "residual": self.fit.residual,
            },
            "diagonal_sum": self.diagonal_sum,
            "axis_forced_sum": self.axis_forced_sum,
            "cross_term_max": self.cross_term_max,
            "contradiction": self.contradiction,
            "jump_spread": self.jump_spread,
            "flags": list(self.flags),
            "disclaimer": self.disclaimer,
        }


def _diagonal_coeff(candidate, t: float = 1e-2) -> float:
    """Total quadratic coefficient of the candidate along the diagonal,
    from (F(t,t,t) + cos t)/t^2 with Richardson extrapolation."""

    def quotient(s: float) -> float:
        return (_ev(candidate, s, s, s) + math.cos(s)) / (s * s)

    extrapolated = (4.0 * quotient(t / 2.0) - quotient(t)) / 3.0
    return extrapolated + 0.5


def contradiction_report(
    candidate,
    tolerances: ReportTolerances = ReportTolerances(),
    seed: int = 0,
) -> AnalysisReport:
    """Assemble the full regularity report.

    The contradiction flag is raised when the fit residual certifies
    apparently smooth second-order behavior while the coefficient system
    is inconsistent: the axes force diagonal coefficients summing to 3/2
    with vanishing cross terms, yet the diagonal demands a total of 1/2.
    """
    tol = tolerances
    value_at_origin = _ev(candidate, 0.0, 0.0, 0.0)
    grad = gradient_at_origin(candidate)
    axis_residuals = np.array(
        [axis_derivative_check(candidate, math.pi / 4.0, i) for i in (1, 2, 3)]
    )
    fit_radius = 0.1
    fit = quadratic_fit(candidate, radius=fit_radius, samples=200, seed=seed)
    diagonal_sum = _diagonal_coeff(candidate)
    axis_forced_sum = fit.diagonal_coeff_sum
    probes = [_cross_probe(candidate, i, j) for i, j in ((0, 1), (0, 2), (1, 2))]
    cross_term_max = max(fit.max_cross_coeff, max(abs(p) for p in probes))
    quotients = direction_quotients(candidate, t=1e-2, n_directions=32, seed=seed)
    second_quotient_bound = float(np.max(np.abs(quotients)))
    jump_spread = float(quotients.max() - quotients.min())

    flags = []
    if abs(diagonal_sum - 0.5) > tol.coeff_tol:
        flags.append("diagonal-constraint-violated")
    if abs(axis_forced_sum - 1.5) > tol.coeff_tol:
        flags.append("axis-coefficients-off")
    if jump_spread > tol.jump_max:
        flags.append("directional-jump-detected")

    contradiction = (
        fit.residual <= tol.residual_max
        and abs(axis_forced_sum - 1.5) <= tol.coeff_tol
        and cross_term_max <= tol.coeff_tol
        and abs(diagonal_sum - 0.5) <= tol.coeff_tol
    )

    disclaimer = None
    if getattr(candidate, "kind", None) == "grid":
        spacing = math.pi / (candidate.grid_resolution - 1)
        if fit_radius < spacing:
            disclaimer = (
                f"fit radius {fit_radius} is below the grid spacing "
                f"{spacing:.6g}; the fit sees interpolation artifacts only"
            )

    return AnalysisReport(
        candidate=getattr(candidate, "name", type(candidate).__name__),
        value_at_origin=value_at_origin,
        gradient_at_origin=grad,
        axis_residuals=axis_residuals,
        second_quotient_bound=second_quotient_bound,
        fit=fit,
        diagonal_sum=diagonal_sum,
        axis_forced_sum=axis_forced_sum,
        cross_term_max=cross_term_max,
        contradiction=contradiction,
        jump_spread=jump_spread,
        flags=tuple(flags),
        disclaimer=disclaimer,
    )


@dataclass(frozen=True)
class Violation:
    """One grid point where a candidate breaks a constraint."""

    theta: tuple
    kind: str  # "band" or "diagonal"
    value: float
    lo: float
    hi: float


def inequality_scan(candidate, resolution: int, tol: float = 1e-9) -> list[Violation]:
    """Scan the uniform resolution^3 grid over the positive cube for band
    violations, and the diagonal nodes for departures from -cos(theta)."""
    resolution = int(resolution)
    if resolution < 2:
        raise DomainError(f"resolution must be >= 2, got {resolution}")
    axis = np.linspace(0.0, math.pi, resolution)
    violations = []
    for t1 in axis:
        for t2 in axis:
            for t3 in axis:
                theta = AngleTriple(t1, t2, t3)
                value = candidate.evaluate(theta)
                interval = feasible_band(theta)
                if not interval.contains(value, tol=tol):
                    violations.append(
                        Violation((t1, t2, t3), "band", value, interval.lo, interval.hi)
                    )
                if t1 == t2 == t3:
                    forced = -math.cos(t1)
                    if abs(value - forced) > tol:
                        violations.append(
                            Violation((t1, t2, t3), "diagonal", value, forced, forced)
                        )
    return violations
