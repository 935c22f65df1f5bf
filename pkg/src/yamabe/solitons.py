"""Torse-forming vector fields and Yamabe-type soliton checks.

A nowhere-vanishing field ``tau`` is torse-forming when its covariant
derivative along every direction ``X`` is ``phi X + alpha(X) tau`` for a
scalar ``phi`` and 1-form ``alpha``. At each sample point the pair
``(phi, alpha)`` is recovered by least squares over the n^2 component
equations; the defect norm measures how far ``tau`` is from the family.

Specializations are labelled by which fitted quantities vanish:
``alpha = 0`` concircular, additionally ``phi = 1`` concurrent,
``phi = 0`` recurrent, both parallel, and ``alpha(tau) = 0`` torqued.

Soliton conditions checked, each with a closed-form constant ``lambda``
obtained by tracing the defining equation:

* conformal: ``L_tau g + [2 lambda - 2 r' - (p + 2/n)] g = 0`` where
  ``r'`` is the scalar curvature of the chosen connection and ``p`` a
  user-supplied constant;
* plain: the conformal equation with the ``p + 2/n`` term dropped;
* star: ``(1/2) L_tau g = (r* - lambda) g`` with ``r*`` the trace of the
  star-Ricci tensor built from a (1,1) structure tensor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .expr import Expr, eval_jet2, parse
from .geometry import (
    Chart,
    MetricField,
    OneFormField,
    VectorField,
    _christoffel_arrays,
    curvature_at,
    metric_jets_at,
)
from .connections import (
    LEVI_CIVITA,
    PROJECTIVE_SEMI_SYMMETRIC,
    SEMI_SYMMETRIC_METRIC,
    ConnectionSpec,
    aux_tensors_at,
    modified_curvature_at,
    modified_lie_derivative_metric_at,
)

__all__ = [
    "ZeroFieldError",
    "NotTorseFormingError",
    "TorseFit",
    "StructureTensorField",
    "StarRicciAt",
    "SolitonResidualAt",
    "StarEinsteinFit",
    "SolitonPointRow",
    "SolitonReport",
    "LABEL_ORDER",
    "fit_torse_forming_at",
    "classify",
    "lambda_closed_form",
    "specialized_lambda_formula",
    "star_ricci_at",
    "soliton_residual_at",
    "trace_identity_check",
    "fit_star_einstein_at",
    "check_soliton",
    "CONFORMAL",
    "PLAIN_YAMABE",
    "STAR",
]

CONFORMAL = "conformal"
PLAIN_YAMABE = "yamabe"
STAR = "star"
_KINDS = (CONFORMAL, PLAIN_YAMABE, STAR)

LABEL_ORDER = ("torse-forming", "concircular", "concurrent", "recurrent",
               "parallel", "torqued")

DEFAULT_CLASS_TOL = 1e-7
DEFAULT_RESIDUAL_TOL = 1e-8
VERDICT_SIGN_TOL = 1e-9
LAMBDA_SPREAD_FACTOR = 1e-6

TORQUED_NOTE = ("torqued label is based on alpha(tau) = 0 alone; the classical "
                "torqued definition additionally presumes nonvanishing phi and alpha")


class ZeroFieldError(ValueError):
    pass


class NotTorseFormingError(ValueError):
    def __init__(self, residual: float, tol: float):
        super().__init__(
            f"field is not torse-forming: fit residual {residual:.3e} exceeds {tol:.1e}")
        self.residual = residual
        self.tol = tol


@dataclass(frozen=True)
class TorseFit:
    """Pointwise least-squares fit of the torse-forming equation."""

    phi: float
    alpha: np.ndarray
    alpha_tau: float
    residual: float
    labels: tuple[str, ...]


@dataclass(frozen=True)
class StructureTensorField:
    """(1,1) structure tensor with expression-valued components
    ``comp[i][j]``, the coefficient of ``d_i`` in the image of ``d_j``."""

    chart: Chart
    comp: tuple[tuple[Expr, ...], ...]

    @classmethod
    def from_strings(cls, chart: Chart, rows: Sequence[Sequence[str]]) -> "StructureTensorField":
        n = chart.dim
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("structure tensor needs an n x n component grid")
        return cls(chart, tuple(tuple(parse(c, chart.coords) for c in row) for row in rows))

    def values_at(self, p) -> np.ndarray:
        return np.array([[eval_jet2(c, p).value for c in row] for row in self.comp])

    def almost_complex_defect_at(self, p) -> float:
        """Max-abs defect of J^2 + I; zero for an almost-complex structure."""
        j = self.values_at(p)
        return float(np.max(np.abs(j @ j + np.eye(self.chart.dim))))


def fit_torse_forming_at(g: MetricField, tau: VectorField, p,
                         tol: float = DEFAULT_CLASS_TOL) -> TorseFit:
    """Least-squares (phi, alpha) at a point, with per-point labels.

    The n^2 equations ``D[i, k] = phi delta_i^k + alpha_i tau^k`` in the
    n+1 unknowns have a unique least-squares solution whenever ``tau`` is
    nonzero and the dimension is at least 2.
    """
    n = g.chart.dim
    tv = tau.values_at(p)
    if float(np.linalg.norm(tv)) < 1e-10:
        raise ZeroFieldError(f"vector field vanishes at {np.asarray(p)}")
    mj = metric_jets_at(g, p)
    gamma, _ = _christoffel_arrays(mj)
    _, td = tau.jets_at(p)
    dcov = td + np.einsum("kij,j->ik", gamma, tau.values_at(p))
    design = np.zeros((n * n, n + 1))
    rhs = np.zeros(n * n)
    for i in range(n):
        for k in range(n):
            row = i * n + k
            design[row, 0] = 1.0 if i == k else 0.0
            design[row, 1 + i] = tv[k]
            rhs[row] = dcov[i, k]
    sol, _, _, _ = np.linalg.lstsq(design, rhs, rcond=None)
    phi = float(sol[0])
    alpha = sol[1:]
    residual = float(np.linalg.norm(design @ sol - rhs))
    alpha_tau = float(alpha @ tv)
    labels = []
    if residual <= tol:
        labels.append("torse-forming")
        alpha_norm = float(np.linalg.norm(alpha))
        if alpha_norm <= tol:
            labels.append("concircular")
            if abs(phi - 1.0) <= tol:
                labels.append("concurrent")
        if abs(phi) <= tol:
            labels.append("recurrent")
            if alpha_norm <= tol:
                labels.append("parallel")
        if abs(alpha_tau) <= tol:
            labels.append("torqued")
    order = {name: i for i, name in enumerate(LABEL_ORDER)}
    labels.sort(key=order.__getitem__)
    return TorseFit(phi, alpha, alpha_tau, residual, tuple(labels))


def classify(fits: Sequence[TorseFit], tol: float = DEFAULT_CLASS_TOL) -> tuple[str, ...]:
    """Labels that hold at every sample: the intersection of the per-point
    label sets. Raises :class:`NotTorseFormingError` if any fit residual
    exceeds ``tol``."""
    if not fits:
        raise ValueError("no fits to classify")
    worst = max(f.residual for f in fits)
    if worst > tol:
        raise NotTorseFormingError(worst, tol)
    common = set(fits[0].labels)
    for f in fits[1:]:
        common &= set(f.labels)
    return tuple(name for name in LABEL_ORDER if name in common)


def lambda_closed_form(kind: str, connection: str, *, n: int, phi: float,
                       alpha_tau: float, r: float = 0.0, r_star: float = 0.0,
                       pi_tau: float = 0.0, a: float = 0.0,
                       tr_theta: float = 0.0, tr_omega: float = 0.0,
                       p: float = 0.0) -> float:
    """Closed-form soliton constant from the traced soliton equation.

    ``r`` is always the Levi-Civita scalar curvature; the connection
    corrections enter through ``a`` (semi-symmetric metric) or the traces
    of ``theta``/``omega`` (projective). The star kind uses ``r_star``
    and the Levi-Civita connection.
    """
    if kind not in _KINDS:
        raise ValueError(f"unknown soliton kind {kind!r}")
    if kind == STAR:
        if connection != LEVI_CIVITA:
            raise ValueError("star solitons are checked with the Levi-Civita connection")
        return r_star - phi - alpha_tau / n
    lam = r - phi - alpha_tau / n
    if kind == CONFORMAL:
        lam += 0.5 * (p + 2.0 / n)
    if connection == SEMI_SYMMETRIC_METRIC:
        lam += -2.0 * (n - 1) * a - (n - 1) / n * pi_tau
    elif connection == PROJECTIVE_SEMI_SYMMETRIC:
        lam += tr_theta - (n - 1) * tr_omega - (n - 1) / n * pi_tau
    elif connection != LEVI_CIVITA:
        raise ValueError(f"unknown connection kind {connection!r}")
    return lam


def specialized_lambda_formula(kind: str, connection: str,
                               labels: Sequence[str]) -> str:
    """Human-readable lambda formula specialized to the sharpest label."""
    priority = ("parallel", "concurrent", "recurrent", "concircular",
                "torqued", "torse-forming")
    label = next((lab for lab in priority if lab in labels), "torse-forming")
    if kind == STAR:
        terms = ["r*"]
    else:
        terms = ["r"]
    if label == "concurrent":
        terms.append("- 1")
    elif label in ("concircular", "torqued", "torse-forming"):
        terms.append("- phi")
    if connection == SEMI_SYMMETRIC_METRIC:
        terms.append("- 2(n-1)a")
    elif connection == PROJECTIVE_SEMI_SYMMETRIC:
        terms.append("+ tr(theta) - (n-1)tr(omega)")
    if kind == CONFORMAL:
        terms.append("+ (p + 2/n)/2")
    if connection in (SEMI_SYMMETRIC_METRIC, PROJECTIVE_SEMI_SYMMETRIC):
        terms.append("- ((n-1)/n) pi(tau)")
    if label in ("recurrent", "torse-forming"):
        terms.append("- alpha(tau)/n")
    return "lambda = " + " ".join(terms)


@dataclass(frozen=True)
class StarRicciAt:
    s_star: np.ndarray
    r_star: float
    asymmetry: float


def star_ricci_at(g: MetricField, j: StructureTensorField, p) -> StarRicciAt:
    """Star-Ricci tensor: half the trace of ``Z -> J(R(X, J Y) Z)``,
    together with its metric trace and asymmetry norm. The tensor is not
    assumed symmetric; reports carry ``max|S* - S*^T|``."""
    mj = metric_jets_at(g, p)
    curv = curvature_at(g, p)
    jv = j.values_at(p)
    s_star = 0.5 * np.einsum("kl,lkia,aj->ij", jv, curv.riemann, jv)
    r_star = float(np.einsum("ij,ij", mj.inverse, s_star))
    asym = float(np.max(np.abs(s_star - s_star.T)))
    return StarRicciAt(s_star, r_star, asym)


@dataclass(frozen=True)
class SolitonResidualAt:
    tensor: np.ndarray
    sup: float
    trace: float


def soliton_residual_at(kind: str, spec: ConnectionSpec, g: MetricField,
                        tau: VectorField, lam: float, p_field: float, p,
                        j: StructureTensorField | None = None) -> SolitonResidualAt:
    """Componentwise left side of the soliton equation at a point."""
    if kind not in _KINDS:
        raise ValueError(f"unknown soliton kind {kind!r}")
    n = g.chart.dim
    mj = metric_jets_at(g, p)
    lie = modified_lie_derivative_metric_at(g, spec, tau, p)
    if kind == STAR:
        if j is None:
            raise ValueError("star kind requires a structure tensor")
        r_star = star_ricci_at(g, j, p).r_star
        tensor = 0.5 * lie - (r_star - lam) * mj.value
    else:
        r_conn = modified_curvature_at(g, spec, p).scalar
        shift = 2.0 * lam - 2.0 * r_conn
        if kind == CONFORMAL:
            shift -= p_field + 2.0 / n
        tensor = lie + shift * mj.value
    trace = float(np.einsum("ij,ij", mj.inverse, tensor))
    return SolitonResidualAt(tensor, float(np.max(np.abs(tensor))), trace)


def trace_identity_check(spec: ConnectionSpec, g: MetricField, tau: VectorField,
                         p, tol: float = DEFAULT_CLASS_TOL) -> float:
    """Defect of the traced Lie-derivative identity for a torse-forming
    field: ``g^{ij} (L'_tau g)_ij = 2 n phi + 2 alpha(tau) + c`` with
    ``c = 0`` for Levi-Civita and ``c = 2 (n-1) pi(tau)`` for both
    modified connections."""
    fit = fit_torse_forming_at(g, tau, p, tol)
    if fit.residual > tol:
        raise NotTorseFormingError(fit.residual, tol)
    n = g.chart.dim
    mj = metric_jets_at(g, p)
    lie = modified_lie_derivative_metric_at(g, spec, tau, p)
    trace = float(np.einsum("ij,ij", mj.inverse, lie))
    c = 0.0
    if spec.kind != LEVI_CIVITA:
        pi_tau = float(spec.pi.values_at(p) @ tau.values_at(p))
        c = 2.0 * (n - 1) * pi_tau
    return abs(trace - (2.0 * n * fit.phi + 2.0 * fit.alpha_tau + c))


@dataclass(frozen=True)
class StarEinsteinFit:
    lam: float
    nu: float
    residual: float
    ill_conditioned: bool


def fit_star_einstein_at(g: MetricField, j: StructureTensorField,
                         eta: OneFormField | None, p) -> StarEinsteinFit:
    """Least-squares fit of the symmetrized star-Ricci tensor against
    ``lam g + nu eta (x) eta`` (``nu`` forced to zero without ``eta``).

    The fit is flagged ill-conditioned when the two basis tensors are
    nearly parallel, e.g. ``eta (x) eta`` proportional to ``g``.
    """
    mj = metric_jets_at(g, p)
    target = star_ricci_at(g, j, p).s_star
    target = 0.5 * (target + target.T)
    basis = [mj.value.ravel()]
    if eta is not None:
        ev = eta.values_at(p)
        basis.append(np.outer(ev, ev).ravel())
    design = np.stack(basis, axis=1)
    gram = design.T @ design
    ill = bool(np.linalg.cond(gram) > 1e10)
    sol, _, _, _ = np.linalg.lstsq(design, target.ravel(), rcond=None)
    resid = float(np.linalg.norm(design @ sol - target.ravel()))
    lam = float(sol[0])
    nu = float(sol[1]) if eta is not None else 0.0
    return StarEinsteinFit(lam, nu, resid, ill)


@dataclass(frozen=True)
class SolitonPointRow:
    point: np.ndarray
    phi: float
    alpha_tau: float
    fit_residual: float
    lam: float
    residual_trace: float
    residual_sup: float


@dataclass(frozen=True)
class SolitonReport:
    """Aggregate soliton verdict over a batch of sample points."""

    kind: str
    connection: str
    lambda_value: float
    lambda_min: float
    lambda_max: float
    lambda_spread: float
    p_field: float
    trace_residual: float
    full_residual_sup: float
    fit_residual_max: float
    per_point: tuple[SolitonPointRow, ...]
    verdict: str
    classification: tuple[str, ...]
    lambda_formula: str
    notes: tuple[str, ...]
    star_asymmetry_max: float | None = None


def check_soliton(g: MetricField, tau: VectorField, kind: str,
                  spec: ConnectionSpec, p_field: float, points,
                  j: StructureTensorField | None = None,
                  class_tol: float = DEFAULT_CLASS_TOL,
                  resid_tol: float = DEFAULT_RESIDUAL_TOL) -> SolitonReport:
    """Run the full soliton check at each point and aggregate.

    The verdict is the sign of lambda (expanding / steady / shrinking)
    only when the field classifies as torse-forming, the full tensor
    residual stays within ``resid_tol`` and lambda is point-independent
    up to ``1e-6 (1 + |lambda|)``; otherwise ``not-a-soliton``.
    """
    if kind == STAR and j is None:
        raise ValueError("star kind requires a structure tensor")
    points = list(points)
    if not points:
        raise ValueError("need at least one sample point")
    n = g.chart.dim
    fits = []
    rows = []
    notes = []
    star_asym_max = None
    for pt in points:
        fit = fit_torse_forming_at(g, tau, pt, class_tol)
        fits.append(fit)
        r_base = curvature_at(g, pt).scalar
        kwargs = dict(n=n, phi=fit.phi, alpha_tau=fit.alpha_tau, r=r_base,
                      p=p_field)
        if spec.kind != LEVI_CIVITA:
            aux = aux_tensors_at(g, spec.pi, pt)
            kwargs.update(pi_tau=float(spec.pi.values_at(pt) @ tau.values_at(pt)),
                          a=aux.a, tr_theta=aux.tr_theta, tr_omega=aux.tr_omega)
        if kind == STAR:
            star = star_ricci_at(g, j, pt)
            kwargs.update(r_star=star.r_star)
            star_asym_max = (star.asymmetry if star_asym_max is None
                             else max(star_asym_max, star.asymmetry))
        lam = lambda_closed_form(kind, spec.kind, **kwargs)
        resid = soliton_residual_at(kind, spec, g, tau, lam, p_field, pt, j)
        rows.append(SolitonPointRow(np.asarray(pt, dtype=float), fit.phi,
                                    fit.alpha_tau, fit.residual, lam,
                                    resid.trace, resid.sup))
    if star_asym_max is not None and star_asym_max > 1e-10:
        notes.append(f"star-Ricci tensor is asymmetric (max defect "
                     f"{star_asym_max:.3e}); its metric trace is taken as-is")
    lams = np.array([row.lam for row in rows])
    lam_min, lam_max = float(lams.min()), float(lams.max())
    lam_mid = 0.5 * (lam_min + lam_max)
    spread = lam_max - lam_min
    try:
        labels = classify(fits, class_tol)
        torse_ok = True
    except NotTorseFormingError:
        labels = ()
        torse_ok = False
        notes.append("field is not torse-forming at the fit tolerance; "
                     "lambda values below use the least-squares phi and alpha")
    if "torqued" in labels:
        notes.append(TORQUED_NOTE)
    full_sup = max(row.residual_sup for row in rows)
    trace_max = max(abs(row.residual_trace) for row in rows)
    fit_max = max(row.fit_residual for row in rows)
    if (not torse_ok or full_sup > resid_tol
            or spread > LAMBDA_SPREAD_FACTOR * (1.0 + abs(lam_mid))):
        verdict = "not-a-soliton"
    elif lam_mid > VERDICT_SIGN_TOL:
        verdict = "expanding"
    elif lam_mid < -VERDICT_SIGN_TOL:
        verdict = "shrinking"
    else:
        verdict = "steady"
    formula = specialized_lambda_formula(kind, spec.kind, labels)
    return SolitonReport(kind, spec.kind, lam_mid, lam_min, lam_max, spread,
                         p_field, trace_max, full_sup, fit_max, tuple(rows),
                         verdict, labels, formula, tuple(notes), star_asym_max)
