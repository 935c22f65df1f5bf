"""Pointwise Riemannian calculus on coordinate charts.

Everything here is evaluated at sample points: metric algebra, the
Levi-Civita connection through the coordinate Christoffel formula,
Riemann/Ricci/scalar curvature, Lie brackets and Lie derivatives, and
extraction of components in a moving frame.

Index conventions (fixed once, asserted by the test suite):

* ``gamma[k, i, j]`` is the coefficient of ``d_k`` in the covariant
  derivative of ``d_j`` along ``d_i``; symmetric in ``(i, j)`` for the
  Levi-Civita connection.
* ``dgamma[m, k, i, j]`` is the ``m``-th partial of ``gamma[k, i, j]``.
* ``riemann[l, k, i, j]`` is the component ``l`` of ``R(d_i, d_j) d_k``
  where ``R(X, Y)Z`` is the commutator of covariant derivatives minus the
  derivative along the bracket.
* ``ricci[a, b]`` traces the curvature endomorphism over its first slot:
  ``ricci[a, b] = sum_i riemann[i, b, i, a]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .expr import Expr, eval_jet2, parse

__all__ = [
    "GeometryError",
    "SingularMetricError",
    "FrameDegenerateError",
    "ConsistencyError",
    "Chart",
    "MetricField",
    "VectorField",
    "OneFormField",
    "FrameField",
    "MetricAt",
    "MetricJets",
    "ChristoffelAt",
    "CurvatureAt",
    "metric_at",
    "metric_jets_at",
    "christoffel_at",
    "curvature_at",
    "lie_bracket_at",
    "covariant_derivative_at",
    "lie_derivative_metric_at",
    "frame_components_at",
]

# hard failure threshold for metric conditioning; sampling rejects earlier
COND_LIMIT = 1e12
FRAME_DET_TOL = 1e-10
LIE_AGREEMENT_TOL = 1e-10


class GeometryError(Exception):
    pass


class SingularMetricError(GeometryError):
    def __init__(self, cond: float):
        super().__init__(f"metric is numerically singular (condition estimate {cond:.3e})")
        self.cond = cond


class FrameDegenerateError(GeometryError):
    pass


class ConsistencyError(GeometryError):
    """Two mathematically equivalent computations disagreed; internal bug."""


@dataclass(frozen=True)
class Chart:
    """Coordinate chart: ordered coordinate names plus an optional
    exclusion expression whose zero set marks the singular locus."""

    coords: tuple[str, ...]
    exclusion: Expr | None = None

    def __post_init__(self):
        if len(self.coords) < 2:
            raise ValueError("chart dimension must be at least 2")
        if len(set(self.coords)) != len(self.coords):
            raise ValueError("coordinate names must be distinct")

    @property
    def dim(self) -> int:
        return len(self.coords)

    @classmethod
    def of(cls, coords: Sequence[str], exclusion: str | None = None) -> "Chart":
        names = tuple(coords)
        excl = parse(exclusion, names) if exclusion else None
        return cls(names, excl)


def _parse_components(chart: Chart, comps: Sequence[str]) -> tuple[Expr, ...]:
    if len(comps) != chart.dim:
        raise ValueError(f"expected {chart.dim} components, got {len(comps)}")
    return tuple(parse(c, chart.coords) for c in comps)


@dataclass(frozen=True)
class VectorField:
    """Contravariant components, one expression per coordinate."""

    chart: Chart
    comp: tuple[Expr, ...]

    @classmethod
    def from_strings(cls, chart: Chart, comps: Sequence[str]) -> "VectorField":
        return cls(chart, _parse_components(chart, comps))

    def values_at(self, p) -> np.ndarray:
        return np.array([eval_jet2(c, p).value for c in self.comp])

    def jets_at(self, p):
        """Returns (values[k], d[m, k] = m-th partial of component k)."""
        jets = [eval_jet2(c, p) for c in self.comp]
        return (np.array([j.value for j in jets]),
                np.stack([j.grad for j in jets], axis=1))


@dataclass(frozen=True)
class OneFormField:
    """Covariant components, one expression per coordinate."""

    chart: Chart
    comp: tuple[Expr, ...]

    @classmethod
    def from_strings(cls, chart: Chart, comps: Sequence[str]) -> "OneFormField":
        return cls(chart, _parse_components(chart, comps))

    @classmethod
    def zero(cls, chart: Chart) -> "OneFormField":
        return cls.from_strings(chart, ["0"] * chart.dim)

    def values_at(self, p) -> np.ndarray:
        return np.array([eval_jet2(c, p).value for c in self.comp])

    def jets_at(self, p):
        jets = [eval_jet2(c, p) for c in self.comp]
        return (np.array([j.value for j in jets]),
                np.stack([j.grad for j in jets], axis=1))


@dataclass(frozen=True)
class MetricField:
    """Symmetric metric tensor with expression-valued components.

    The component matrix is stored fully but is built from the lower
    triangle; entry (i, j) and (j, i) share the same expression object.
    """

    chart: Chart
    comp: tuple[tuple[Expr, ...], ...]

    @classmethod
    def from_lower_triangular(cls, chart: Chart,
                              entries: dict[tuple[int, int], str]) -> "MetricField":
        """Build from a sparse {(i, j): expression} dict; missing entries
        are zero. Keys may use either index order but not both."""
        n = chart.dim
        seen: dict[tuple[int, int], str] = {}
        for (i, j), text in entries.items():
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"metric index ({i}, {j}) out of range")
            key = (min(i, j), max(i, j))
            if key in seen and seen[key] != text:
                raise ValueError(
                    f"conflicting metric entries for components {key}: "
                    f"{seen[key]!r} vs {text!r}")
            seen[key] = text
        grid: list[list[Expr | None]] = [[None] * n for _ in range(n)]
        for (i, j), text in seen.items():
            e = parse(text, chart.coords)
            grid[i][j] = e
            grid[j][i] = e
        zero = parse("0", chart.coords)
        rows = tuple(tuple(e if e is not None else zero for e in row) for row in grid)
        return cls(chart, rows)

    @classmethod
    def diagonal(cls, chart: Chart, diag: Sequence[str]) -> "MetricField":
        if len(diag) != chart.dim:
            raise ValueError("one diagonal entry per coordinate required")
        return cls.from_lower_triangular(
            chart, {(i, i): d for i, d in enumerate(diag)})

    @classmethod
    def euclidean(cls, chart: Chart) -> "MetricField":
        return cls.diagonal(chart, ["1"] * chart.dim)


@dataclass(frozen=True)
class FrameField:
    """Ordered tuple of vector fields forming a pointwise basis."""

    chart: Chart
    vectors: tuple[VectorField, ...]

    def __post_init__(self):
        if len(self.vectors) != self.chart.dim:
            raise ValueError("frame must have one vector field per dimension")

    def matrix_at(self, p) -> np.ndarray:
        """Columns are the frame vectors' coordinate components."""
        return np.stack([v.values_at(p) for v in self.vectors], axis=1)


@dataclass(frozen=True)
class MetricAt:
    matrix: np.ndarray
    inverse: np.ndarray
    det: float
    cond: float


@dataclass(frozen=True)
class MetricJets:
    """Metric and inverse with first and second partials at a point.

    ``d[m, i, j]`` and ``dd[m, l, i, j]`` are first and second partials of
    ``g_ij``; ``dinv[m]`` is the first partial of the inverse, computed in
    closed form as ``-g^-1 (d_m g) g^-1``.
    """

    value: np.ndarray
    d: np.ndarray
    dd: np.ndarray
    inverse: np.ndarray
    dinv: np.ndarray
    det: float
    cond: float


def metric_jets_at(g: MetricField, p) -> MetricJets:
    n = g.chart.dim
    value = np.empty((n, n))
    d = np.empty((n, n, n))
    dd = np.empty((n, n, n, n))
    for i in range(n):
        for j in range(i, n):
            jet = eval_jet2(g.comp[i][j], p)
            value[i, j] = value[j, i] = jet.value
            d[:, i, j] = d[:, j, i] = jet.grad
            dd[:, :, i, j] = dd[:, :, j, i] = jet.hess
    cond = float(np.linalg.cond(value))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMetricError(cond)
    inverse = np.linalg.inv(value)
    dinv = -np.einsum("ka,mab,bl->mkl", inverse, d, inverse)
    return MetricJets(value, d, dd, inverse, dinv, float(np.linalg.det(value)), cond)


def metric_at(g: MetricField, p) -> MetricAt:
    """Metric matrix, inverse and determinant at a point.

    Raises :class:`SingularMetricError` when the matrix is numerically
    singular, carrying the condition estimate.
    """
    mj = metric_jets_at(g, p)
    return MetricAt(mj.value, mj.inverse, mj.det, mj.cond)


@dataclass(frozen=True)
class ChristoffelAt:
    gamma: np.ndarray   # [k, i, j]
    dgamma: np.ndarray  # [m, k, i, j]


def _christoffel_arrays(mj: MetricJets) -> tuple[np.ndarray, np.ndarray]:
    ginv, d, dd = mj.inverse, mj.d, mj.dd
    gamma = 0.5 * (np.einsum("kl,ijl->kij", ginv, d)
                   + np.einsum("kl,jil->kij", ginv, d)
                   - np.einsum("kl,lij->kij", ginv, d))
    dgamma = 0.5 * (np.einsum("mkl,ijl->mkij", mj.dinv, d)
                    + np.einsum("mkl,jil->mkij", mj.dinv, d)
                    - np.einsum("mkl,lij->mkij", mj.dinv, d)
                    + np.einsum("kl,mijl->mkij", ginv, dd)
                    + np.einsum("kl,mjil->mkij", ginv, dd)
                    - np.einsum("kl,mlij->mkij", ginv, dd))
    return gamma, dgamma


def christoffel_at(g: MetricField, p) -> ChristoffelAt:
    """Levi-Civita connection coefficients and their first partials.

    Uses the coordinate formula
    ``gamma^k_ij = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)``;
    the partials come in closed form from the metric's 2-jets.
    """
    gamma, dgamma = _christoffel_arrays(metric_jets_at(g, p))
    return ChristoffelAt(gamma, dgamma)


@dataclass(frozen=True)
class CurvatureAt:
    riemann: np.ndarray        # [l, k, i, j], component l of R(d_i, d_j) d_k
    riemann_lower: np.ndarray  # [l, k, i, j], first index lowered
    ricci: np.ndarray          # [a, b]
    scalar: float


def _curvature_arrays(gval, ginv, gamma, dgamma) -> CurvatureAt:
    riemann = (np.einsum("iljk->lkij", dgamma) - np.einsum("jlik->lkij", dgamma)
               + np.einsum("lim,mjk->lkij", gamma, gamma)
               - np.einsum("ljm,mik->lkij", gamma, gamma))
    lower = np.einsum("la,akij->lkij", gval, riemann)
    ricci = np.einsum("ibia->ab", riemann)
    scalar = float(np.einsum("ab,ab", ginv, ricci))
    return CurvatureAt(riemann, lower, ricci, scalar)


def curvature_at(g: MetricField, p) -> CurvatureAt:
    """Riemann, Ricci and scalar curvature of the Levi-Civita connection."""
    mj = metric_jets_at(g, p)
    gamma, dgamma = _christoffel_arrays(mj)
    return _curvature_arrays(mj.value, mj.inverse, gamma, dgamma)


def lie_bracket_at(x: VectorField, y: VectorField, p) -> np.ndarray:
    """Coordinate Lie bracket [X, Y]^k = X^m d_m Y^k - Y^m d_m X^k."""
    xv, xd = x.jets_at(p)
    yv, yd = y.jets_at(p)
    return np.einsum("m,mk->k", xv, yd) - np.einsum("m,mk->k", yv, xd)


def covariant_derivative_at(conn, tau: VectorField, p) -> np.ndarray:
    """Matrix D with ``D[i, k]`` the ``k``-th component of the covariant
    derivative of ``tau`` along ``d_i``.

    ``conn`` is any connection evaluated at ``p`` exposing a ``gamma``
    array in the [k, i, j] layout; torsion corrections are assumed to be
    folded into the coefficients already.
    """
    tv, td = tau.jets_at(p)
    return td + np.einsum("kij,j->ik", conn.gamma, tv)


def lie_derivative_metric_at(g: MetricField, tau: VectorField, p) -> np.ndarray:
    """Lie derivative of the metric along ``tau``, computed two ways.

    Route one pairs the metric with covariant derivatives of ``tau``;
    route two is the raw coordinate formula
    ``tau^k d_k g_ij + g_kj d_i tau^k + g_ik d_j tau^k``. Disagreement
    beyond 1e-10 raises :class:`ConsistencyError` since it can only come
    from an internal bug.
    """
    mj = metric_jets_at(g, p)
    gamma, _ = _christoffel_arrays(mj)
    tv, td = tau.jets_at(p)
    dcov = td + np.einsum("kij,j->ik", gamma, tv)
    route1 = dcov @ mj.value
    route1 = route1 + route1.T
    adv = td @ mj.value
    route2 = np.einsum("k,kij->ij", tv, mj.d) + adv + adv.T
    gap = float(np.max(np.abs(route1 - route2)))
    if gap > LIE_AGREEMENT_TOL:
        raise ConsistencyError(
            f"Lie derivative routes disagree by {gap:.3e}")
    return route1


def frame_components_at(frame: FrameField, v, p) -> np.ndarray:
    """Coefficients expressing the vector ``v`` (coordinate components at
    ``p``) in the frame; raises :class:`FrameDegenerateError` when the
    frame matrix is numerically singular."""
    mat = frame.matrix_at(p)
    if abs(np.linalg.det(mat)) < FRAME_DET_TOL:
        raise FrameDegenerateError(
            f"frame determinant below {FRAME_DET_TOL} at {np.asarray(p)}")
    return np.linalg.solve(mat, np.asarray(v, dtype=float))
