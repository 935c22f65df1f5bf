"""Connections with torsion built from a 1-form, and their curvature.

Two modifications of the Levi-Civita connection are supported, both
classical constructions driven by a 1-form ``pi`` with metric dual
``rho`` (``pi(X) = g(X, rho)``):

* the semi-symmetric metric connection, which adds
  ``pi(Y) X - g(X, Y) rho`` to the covariant derivative and stays
  compatible with the metric;
* the projective semi-symmetric connection, which adds
  ``psi(Y) X + psi(X) Y + mu(Y) X - mu(X) Y`` with
  ``psi = (n-1)/(2(n+1)) pi`` and ``mu = pi / 2``.

Curvature is available through two independent routes: closed-form
assemblies from the auxiliary tensors below, and the general
coefficient-based curvature of an arbitrary affine connection
(:func:`direct_curvature_at`). The test suite holds the two routes to
each other componentwise.

Note on the projective closed form: text sources often quote the
assembled curvature with a bare ``theta(X, Y) Z`` term and ``omega`` in
the remaining slots. That version is valid only when ``pi`` is closed
(``theta = 0``). The assembly used here carries ``2 theta/(n+1)`` on the
``Z`` term and ``omega - theta`` in the other two, which reproduces the
coefficient-based curvature for arbitrary ``pi``; the two versions agree
whenever ``pi`` is closed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    CurvatureAt,
    MetricField,
    OneFormField,
    VectorField,
    _christoffel_arrays,
    _curvature_arrays,
    metric_jets_at,
)

__all__ = [
    "ConnectionSpec",
    "ConnectionAt",
    "AuxTensorsAt",
    "rho_from_pi",
    "nabla_pi_at",
    "aux_tensors_at",
    "connection_at",
    "direct_curvature_at",
    "modified_curvature_at",
    "modified_lie_derivative_metric_at",
    "covariant_metric_derivative_at",
]

LEVI_CIVITA = "lc"
SEMI_SYMMETRIC_METRIC = "ssm"
PROJECTIVE_SEMI_SYMMETRIC = "pss"
_KINDS = (LEVI_CIVITA, SEMI_SYMMETRIC_METRIC, PROJECTIVE_SEMI_SYMMETRIC)


@dataclass(frozen=True)
class ConnectionSpec:
    """Which connection to use; modified kinds carry their 1-form."""

    kind: str
    pi: OneFormField | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown connection kind {self.kind!r}")
        if self.kind != LEVI_CIVITA and self.pi is None:
            raise ValueError(f"connection kind {self.kind!r} requires a 1-form")

    @classmethod
    def levi_civita(cls) -> "ConnectionSpec":
        return cls(LEVI_CIVITA)

    @classmethod
    def semi_symmetric_metric(cls, pi: OneFormField) -> "ConnectionSpec":
        return cls(SEMI_SYMMETRIC_METRIC, pi)

    @classmethod
    def projective_semi_symmetric(cls, pi: OneFormField) -> "ConnectionSpec":
        return cls(PROJECTIVE_SEMI_SYMMETRIC, pi)


@dataclass(frozen=True)
class ConnectionAt:
    """Connection coefficients and their first partials at a point."""

    gamma: np.ndarray   # [k, i, j]: coefficient of d_k in derivative of d_j along d_i
    dgamma: np.ndarray  # [m, k, i, j]
    torsion_free: bool


@dataclass(frozen=True)
class AuxTensorsAt:
    """Auxiliary (0,2) tensors entering the closed-form curvature
    corrections, evaluated at a point.

    ``P[i, j] = (nabla_i pi)_j - pi_i pi_j + pi(rho) g_ij / 2`` with
    metric trace ``a``; ``L`` is ``P`` with the second slot raised, so
    ``(L d_i)^k = L[k, i]``. ``theta`` is the antisymmetrized covariant
    derivative of ``pi`` and ``omega`` its projective companion.
    """

    P: np.ndarray
    a: float
    theta: np.ndarray
    omega: np.ndarray
    tr_theta: float
    tr_omega: float
    L: np.ndarray


def rho_from_pi(g: MetricField, pi: OneFormField, p) -> np.ndarray:
    """Vector field metrically dual to ``pi``: solves g(rho, .) = pi."""
    mj = metric_jets_at(g, p)
    return np.linalg.solve(mj.value, pi.values_at(p))


def nabla_pi_at(g: MetricField, pi: OneFormField, p) -> np.ndarray:
    """Levi-Civita covariant derivative of ``pi``:
    ``out[i, j] = d_i pi_j - gamma^k_ij pi_k``."""
    mj = metric_jets_at(g, p)
    gamma, _ = _christoffel_arrays(mj)
    pv, pd = pi.jets_at(p)
    return pd - np.einsum("kij,k->ij", gamma, pv)


def _aux_arrays(mj, gamma, pv, pd, n):
    napla = pd - np.einsum("kij,k->ij", gamma, pv)
    rho = mj.inverse @ pv
    pirho = float(pv @ rho)
    P = napla - np.outer(pv, pv) + 0.5 * pirho * mj.value
    L = np.einsum("kj,ij->ki", mj.inverse, P)
    a = float(np.einsum("ij,ij", mj.inverse, P))
    theta = 0.5 * (napla.T - napla)
    omega = ((n - 1) / (2.0 * (n + 1)) * napla + 0.5 * napla.T
             - n * n / float((n + 1) ** 2) * np.outer(pv, pv))
    tr_theta = float(np.einsum("ij,ij", mj.inverse, theta))
    tr_omega = float(np.einsum("ij,ij", mj.inverse, omega))
    return AuxTensorsAt(P, a, theta, omega, tr_theta, tr_omega, L)


def aux_tensors_at(g: MetricField, pi: OneFormField, p) -> AuxTensorsAt:
    mj = metric_jets_at(g, p)
    gamma, _ = _christoffel_arrays(mj)
    pv, pd = pi.jets_at(p)
    return _aux_arrays(mj, gamma, pv, pd, g.chart.dim)


def connection_at(g: MetricField, spec: ConnectionSpec, p) -> ConnectionAt:
    """Connection coefficients at ``p`` with first partials in closed form.

    For the modified kinds the partials need the 1-jets of ``pi`` and, for
    the semi-symmetric metric kind, the derivative of ``rho = g^-1 pi``
    obtained from ``d(g^-1) = -g^-1 (dg) g^-1``; nothing is differenced
    numerically.
    """
    mj = metric_jets_at(g, p)
    gamma, dgamma = _christoffel_arrays(mj)
    if spec.kind == LEVI_CIVITA:
        return ConnectionAt(gamma, dgamma, torsion_free=True)
    n = g.chart.dim
    eye = np.eye(n)
    pv, pd = spec.pi.jets_at(p)
    if spec.kind == SEMI_SYMMETRIC_METRIC:
        rho = mj.inverse @ pv
        drho = np.einsum("mkl,l->mk", mj.dinv, pv) + np.einsum("kl,ml->mk", mj.inverse, pd)
        gam = gamma + np.einsum("ki,j->kij", eye, pv) - np.einsum("ij,k->kij", mj.value, rho)
        dgam = (dgamma + np.einsum("ki,mj->mkij", eye, pd)
                - np.einsum("mij,k->mkij", mj.d, rho)
                - np.einsum("ij,mk->mkij", mj.value, drho))
        return ConnectionAt(gam, dgam, torsion_free=False)
    # projective semi-symmetric: psi + mu = n/(n+1) pi, psi - mu = -pi/(n+1)
    u = n / (n + 1.0)
    v = -1.0 / (n + 1.0)
    gam = (gamma + u * np.einsum("ki,j->kij", eye, pv)
           + v * np.einsum("kj,i->kij", eye, pv))
    dgam = (dgamma + u * np.einsum("ki,mj->mkij", eye, pd)
            + v * np.einsum("kj,mi->mkij", eye, pd))
    return ConnectionAt(gam, dgam, torsion_free=False)


def direct_curvature_at(conn: ConnectionAt, p=None) -> np.ndarray:
    """Curvature of an arbitrary affine connection from its coefficients.

    Written with explicit loops as an independent cross-check of the
    einsum-assembled routes:
    ``R^l_kij = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik``.
    """
    gamma, dgamma = conn.gamma, conn.dgamma
    n = gamma.shape[0]
    riemann = np.zeros((n, n, n, n))
    for l in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    acc = dgamma[i, l, j, k] - dgamma[j, l, i, k]
                    for m in range(n):
                        acc += gamma[l, i, m] * gamma[m, j, k]
                        acc -= gamma[l, j, m] * gamma[m, i, k]
                    riemann[l, k, i, j] = acc
    return riemann


def modified_curvature_at(g: MetricField, spec: ConnectionSpec, p) -> CurvatureAt:
    """Riemann/Ricci/scalar curvature of the requested connection,
    assembled from the closed-form corrections.

    Semi-symmetric metric kind: base curvature corrected by ``P`` and
    ``L`` terms; Ricci drops ``(n-2) P + a g``; scalar drops ``2(n-1) a``.
    Projective kind: corrected ``theta``/``omega`` assembly (see module
    docstring); scalar gains ``tr(theta) - (n-1) tr(omega)``.
    """
    mj = metric_jets_at(g, p)
    gamma, dgamma = _christoffel_arrays(mj)
    base = _curvature_arrays(mj.value, mj.inverse, gamma, dgamma)
    if spec.kind == LEVI_CIVITA:
        return base
    n = g.chart.dim
    eye = np.eye(n)
    pv, pd = spec.pi.jets_at(p)
    aux = _aux_arrays(mj, gamma, pv, pd, n)
    if spec.kind == SEMI_SYMMETRIC_METRIC:
        riemann = (base.riemann
                   - np.einsum("jk,li->lkij", aux.P, eye)
                   + np.einsum("ik,lj->lkij", aux.P, eye)
                   - np.einsum("jk,li->lkij", mj.value, aux.L)
                   + np.einsum("ik,lj->lkij", mj.value, aux.L))
        ricci = base.ricci - (n - 2) * aux.P - aux.a * mj.value
        scalar = base.scalar - 2.0 * (n - 1) * aux.a
    else:
        om = aux.omega - aux.theta
        riemann = (base.riemann
                   + (2.0 / (n + 1)) * np.einsum("ij,lk->lkij", aux.theta, eye)
                   + np.einsum("ik,lj->lkij", om, eye)
                   - np.einsum("jk,li->lkij", om, eye))
        ricci = base.ricci - (2.0 / (n + 1)) * aux.theta - (n - 1) * om
        scalar = base.scalar + aux.tr_theta - (n - 1) * aux.tr_omega
    lower = np.einsum("la,akij->lkij", mj.value, riemann)
    return CurvatureAt(riemann, lower, ricci, float(scalar))


def modified_lie_derivative_metric_at(g: MetricField, spec: ConnectionSpec,
                                      tau: VectorField, p) -> np.ndarray:
    """Lie-derivative analogue built from the requested connection:
    ``out_ij = g(D_i tau, d_j) + g(d_i, D_j tau)``; symmetric by
    construction and equal to the true Lie derivative for the
    Levi-Civita kind."""
    conn = connection_at(g, spec, p)
    mj = metric_jets_at(g, p)
    tv, td = tau.jets_at(p)
    dcov = td + np.einsum("kij,j->ik", conn.gamma, tv)
    half = dcov @ mj.value
    return half + half.T


def covariant_metric_derivative_at(g: MetricField, spec: ConnectionSpec, p) -> np.ndarray:
    """Covariant derivative of the metric under the requested connection:
    ``out[k, i, j] = d_k g_ij - G^m_ki g_mj - G^m_kj g_im``. Vanishes for
    the Levi-Civita and semi-symmetric metric kinds."""
    conn = connection_at(g, spec, p)
    mj = metric_jets_at(g, p)
    return (mj.d - np.einsum("mki,mj->kij", conn.gamma, mj.value)
            - np.einsum("mkj,im->kij", conn.gamma, mj.value))
