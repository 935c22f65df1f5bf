"""Numerical invariant suites for every layer of the engine.

Each check returns its worst observed defect together with the tolerance
it must stay under; the CLI renders them as a summary table and the
acceptance tests assert them directly. All randomness is drawn from a
PCG64 generator seeded by the caller, so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expr import EvalDomainError, eval_jet2, parse, render
from .geometry import (
    Chart,
    MetricField,
    OneFormField,
    christoffel_at,
    covariant_derivative_at,
    curvature_at,
    frame_components_at,
    lie_derivative_metric_at,
    metric_jets_at,
)
from .connections import (
    ConnectionSpec,
    aux_tensors_at,
    connection_at,
    covariant_metric_derivative_at,
    direct_curvature_at,
    modified_curvature_at,
)
from .solitons import (
    classify,
    fit_torse_forming_at,
    lambda_closed_form,
    soliton_residual_at,
    star_ricci_at,
)
from .config import ManifoldConfig, load_zoo, sample_points
from .zoo import ZOO_NAMES

__all__ = [
    "CheckResult",
    "random_expression",
    "expr_suite",
    "geometry_suite",
    "connection_suite",
    "flat_transform_suite",
    "curvature_oracle_suite",
    "lambda_trace_suite",
    "classification_suite",
    "exact_soliton_suite",
    "worked_example_suite",
    "run_config_checks",
    "run_all_checks",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_defect: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_defect <= self.tolerance)


def _normalized(got, want, floor=1.0):
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    scale = max(float(np.max(np.abs(want))), floor)
    return float(np.max(np.abs(got - want))) / scale


# ---------------------------------------------------------------------------
# random inputs

def random_expression(rng, coords, depth=3) -> str:
    """Random expression text drawn from the full grammar.

    log/sqrt arguments and denominators are kept positive by squaring so
    that most draws are evaluable on a small box around the origin;
    callers still reject the occasional overflow.
    """
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.45:
            return f"{rng.uniform(-2.0, 2.0):.4f}"
        return coords[int(rng.integers(len(coords)))]
    a = random_expression(rng, coords, depth - 1)
    b = random_expression(rng, coords, depth - 1)
    roll = rng.random()
    if roll < 0.16:
        return f"({a} + {b})"
    if roll < 0.30:
        return f"({a} - {b})"
    if roll < 0.44:
        return f"({a})*({b})"
    if roll < 0.52:
        return f"({a})/(({b})^2 + {rng.uniform(0.5, 2.0):.4f})"
    if roll < 0.62:
        k = int(rng.integers(2, 4)) * (1 if rng.random() < 0.7 else -1)
        return f"({a})^{k}"
    if roll < 0.68:
        return f"(({a})^2 + {rng.uniform(0.5, 2.0):.4f})^{rng.choice([0.5, 1.5])}"
    if roll < 0.74:
        return f"log(({a})^2 + {rng.uniform(0.5, 2.0):.4f})"
    if roll < 0.80:
        return f"sqrt(({a})^2 + {rng.uniform(0.5, 2.0):.4f})"
    func = ["sin", "cos", "tan", "exp", "sinh", "cosh", "tanh"][int(rng.integers(7))]
    if func in ("exp", "sinh", "cosh", "tan"):
        return f"{func}(({a})/4)"
    return f"{func}({a})"


def _random_polynomial_metric(rng, chart, scale=0.2) -> MetricField:
    # L^T L with L = I + small linear entries keeps the metric SPD on the box
    n = chart.dim
    names = chart.coords
    entries = [["1" if i == j else "0" for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            coef = rng.uniform(-scale, scale)
            var = names[int(rng.integers(n))]
            entries[i][j] += f" + {coef:.6f}*{var}"
    lower = {}
    for i in range(n):
        for j in range(i + 1):
            lower[(i, j)] = " + ".join(
                f"({entries[k][i]})*({entries[k][j]})" for k in range(n))
    return MetricField.from_lower_triangular(chart, lower)


def _random_linear_oneform(rng, chart, scale=0.5) -> OneFormField:
    comps = []
    for _ in range(chart.dim):
        parts = [f"{rng.uniform(-scale, scale):.6f}"]
        parts += [f"{rng.uniform(-scale, scale):.6f}*{c}" for c in chart.coords]
        comps.append(" + ".join(parts))
    return OneFormField.from_strings(chart, comps)


# ---------------------------------------------------------------------------
# expression layer

def _fd_gradient(f, p, h=1e-5):
    out = np.empty(len(p))
    for m in range(len(p)):
        e = np.zeros(len(p))
        e[m] = h
        out[m] = (f(p + e) - f(p - e)) / (2.0 * h)
    return out


def _fd_hessian(f, p, h=1e-4):
    n = len(p)
    out = np.empty((n, n))
    f0 = f(p)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        out[i, i] = (f(p + ei) - 2.0 * f0 + f(p - ei)) / h ** 2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            out[i, j] = out[j, i] = (f(p + ei + ej) - f(p + ei - ej)
                                     - f(p - ei + ej) + f(p - ei - ej)) / (4.0 * h ** 2)
    return out


def expr_suite(seed: int, count: int = 100) -> list[CheckResult]:
    """Jet propagation against central finite differences on random
    expressions, plus exact Hessian symmetry and parse round-trips."""
    rng = np.random.default_rng(seed)
    coords = ("x", "y", "z")
    grad_defect = 0.0
    hess_defect = 0.0
    sym_defect = 0.0
    roundtrip_failures = 0.0
    done = 0
    while done < count:
        text = random_expression(rng, coords)
        expr = parse(text, coords)
        if parse(render(expr), coords) != expr:
            roundtrip_failures += 1.0
        accepted = False
        for _ in range(8):
            p = rng.uniform(-1.5, 1.5, 3)
            try:
                jet = eval_jet2(expr, p)

                def value(q):
                    return eval_jet2(expr, q).value

                fd_g = _fd_gradient(value, p)
                # Richardson pair: step halving both sharpens the stencil
                # and certifies, independently of the jets, that the fd
                # oracle has converged at this point
                fd_h1 = _fd_hessian(value, p, h=1e-3)
                fd_h2 = _fd_hessian(value, p, h=5e-4)
            except EvalDomainError:
                continue
            mags = [abs(jet.value), np.max(np.abs(jet.grad)), np.max(np.abs(jet.hess))]
            if max(mags) > 1e6:
                continue
            scale_h = (np.maximum(np.abs(jet.hess), np.abs(fd_h2))
                       + 0.1 * (1.0 + abs(jet.value)))
            if float(np.max(np.abs(fd_h1 - fd_h2) / scale_h)) > 2e-7:
                continue
            fd_h = (4.0 * fd_h2 - fd_h1) / 3.0
            # the 1e-2 floor encodes the 1e-8 absolute noise of the
            # gradient stencil at the 1e-6 relative tolerance
            scale_g = np.maximum(np.abs(jet.grad), np.abs(fd_g)) + 1e-2
            grad_defect = max(grad_defect, float(np.max(np.abs(jet.grad - fd_g) / scale_g)))
            hess_defect = max(hess_defect, float(np.max(np.abs(jet.hess - fd_h) / scale_h)))
            sym_defect = max(sym_defect, float(np.max(np.abs(jet.hess - jet.hess.T))))
            accepted = True
            break
        if accepted:
            done += 1
    return [
        CheckResult("expr/gradient-vs-fd", grad_defect, 1e-6),
        CheckResult("expr/hessian-vs-fd", hess_defect, 1e-6),
        CheckResult("expr/hessian-symmetry", sym_defect, 0.0),
        CheckResult("expr/parse-roundtrip", roundtrip_failures, 0.0),
    ]


# ---------------------------------------------------------------------------
# geometry layer

def geometry_suite(config: ManifoldConfig, points) -> list[CheckResult]:
    """Curvature symmetries, the first Bianchi identity, Ricci symmetry,
    closed-form connection partials against finite differences, and the
    two-route Lie derivative agreement, on the config's own fields."""
    g = config.metric
    tag = config.name
    antisym_last = antisym_first = pair = bianchi = ricci_sym = 0.0
    dgamma_fd = 0.0
    lie_gap = 0.0
    for p in points:
        c = curvature_at(g, p)
        low = c.riemann_lower
        antisym_last = max(antisym_last, float(np.max(np.abs(low + low.transpose(0, 1, 3, 2)))))
        antisym_first = max(antisym_first, float(np.max(np.abs(low + low.transpose(1, 0, 2, 3)))))
        pair = max(pair, float(np.max(np.abs(low - low.transpose(2, 3, 0, 1)))))
        cyc = c.riemann + c.riemann.transpose(0, 2, 3, 1) + c.riemann.transpose(0, 3, 1, 2)
        bianchi = max(bianchi, float(np.max(np.abs(cyc))))
        ricci_sym = max(ricci_sym, float(np.max(np.abs(c.ricci - c.ricci.T))))
    for p in points[: min(3, len(points))]:
        ch = christoffel_at(g, p)
        n = g.chart.dim
        fd = np.empty_like(ch.dgamma)
        h = 1e-5
        for m in range(n):
            e = np.zeros(n)
            e[m] = h
            fd[m] = (christoffel_at(g, np.asarray(p) + e).gamma
                     - christoffel_at(g, np.asarray(p) - e).gamma) / (2.0 * h)
        scale = np.maximum(np.abs(fd), np.abs(ch.dgamma)) + 1e-2
        dgamma_fd = max(dgamma_fd, float(np.max(np.abs(ch.dgamma - fd) / scale)))
        for tau in config.fields.values():
            mj = metric_jets_at(g, p)
            lie = lie_derivative_metric_at(g, tau, p)
            tv, td = tau.jets_at(p)
            adv = td @ mj.value
            coord_route = np.einsum("k,kij->ij", tv, mj.d) + adv + adv.T
            lie_gap = max(lie_gap, float(np.max(np.abs(lie - coord_route))))
    return [
        CheckResult(f"geometry/riemann-antisym-last[{tag}]", antisym_last, 1e-9),
        CheckResult(f"geometry/riemann-antisym-first[{tag}]", antisym_first, 1e-9),
        CheckResult(f"geometry/riemann-pair-symmetry[{tag}]", pair, 1e-9),
        CheckResult(f"geometry/first-bianchi[{tag}]", bianchi, 1e-9),
        CheckResult(f"geometry/ricci-symmetry[{tag}]", ricci_sym, 1e-10),
        CheckResult(f"geometry/dgamma-vs-fd[{tag}]", dgamma_fd, 1e-5),
        CheckResult(f"geometry/lie-dual-routes[{tag}]", lie_gap, 1e-10),
    ]


def flat_transform_suite(seed: int) -> list[CheckResult]:
    """Curvature of constant linear pullbacks of the flat metric."""
    rng = np.random.default_rng(seed)
    chart = Chart.of(["x", "y", "z"])
    worst = 0.0
    for _ in range(4):
        a = np.eye(3) + rng.uniform(-0.4, 0.4, (3, 3))
        gmat = a.T @ a
        entries = {(i, j): repr(float(gmat[i, j]))
                   for i in range(3) for j in range(i + 1)}
        g = MetricField.from_lower_triangular(chart, entries)
        for _ in range(3):
            c = curvature_at(g, rng.uniform(-2.0, 2.0, 3))
            worst = max(worst, float(np.max(np.abs(c.riemann))))
    return [CheckResult("geometry/flat-linear-transform", worst, 1e-9)]


# ---------------------------------------------------------------------------
# connection layer

def connection_suite(config: ManifoldConfig, points) -> list[CheckResult]:
    """Per-manifold connection checks: zero 1-form collapse, metric
    compatibility of the semi-symmetric metric kind, and the metric trace
    of theta, using the config's own 1-forms."""
    g = config.metric
    tag = config.name
    chart = config.chart
    zero = OneFormField.zero(chart)
    collapse = 0.0
    compat = 0.0
    theta_tr = 0.0
    lc = ConnectionSpec.levi_civita()
    for p in points[: min(4, len(points))]:
        base = connection_at(g, lc, p)
        base_curv = curvature_at(g, p)
        for kind in ("ssm", "pss"):
            spec = ConnectionSpec(kind, zero)
            conn = connection_at(g, spec, p)
            collapse = max(collapse, float(np.max(np.abs(conn.gamma - base.gamma))))
            collapse = max(collapse, float(np.max(np.abs(conn.dgamma - base.dgamma))))
            curv = modified_curvature_at(g, spec, p)
            collapse = max(collapse, float(np.max(np.abs(curv.riemann - base_curv.riemann))))
        for pi in config.oneforms.values():
            compat = max(compat, float(np.max(np.abs(covariant_metric_derivative_at(
                g, ConnectionSpec.semi_symmetric_metric(pi), p)))))
            theta_tr = max(theta_tr, abs(aux_tensors_at(g, pi, p).tr_theta))
    return [
        CheckResult(f"connections/zero-pi-collapse[{tag}]", collapse, 0.0),
        CheckResult(f"connections/metric-compatibility-ssm[{tag}]", compat, 1e-10),
        CheckResult(f"connections/theta-metric-trace[{tag}]", theta_tr, 1e-10),
    ]


def curvature_oracle_suite(seed: int, metrics: int = 5, oneforms: int = 3,
                           points: int = 10) -> list[CheckResult]:
    """Closed-form curvature assemblies against the coefficient-based
    curvature, plus Ricci/scalar trace consistency, on random polynomial
    metrics and random linear 1-forms."""
    rng = np.random.default_rng(seed)
    chart = Chart.of(["x", "y", "z"])
    oracle = {"ssm": 0.0, "pss": 0.0}
    trace = {"ssm": 0.0, "pss": 0.0}
    compat = 0.0
    theta_tr = 0.0
    for _ in range(metrics):
        g = _random_polynomial_metric(rng, chart)
        for _ in range(oneforms):
            pi = _random_linear_oneform(rng, chart)
            specs = {"ssm": ConnectionSpec.semi_symmetric_metric(pi),
                     "pss": ConnectionSpec.projective_semi_symmetric(pi)}
            for _ in range(points):
                p = rng.uniform(-1.0, 1.0, 3)
                mj = metric_jets_at(g, p)
                for kind, spec in specs.items():
                    direct = direct_curvature_at(connection_at(g, spec, p))
                    assembled = modified_curvature_at(g, spec, p)
                    oracle[kind] = max(oracle[kind], float(np.max(np.abs(
                        assembled.riemann - direct))))
                    got_scalar = float(np.einsum("ab,ab", mj.inverse, assembled.ricci))
                    trace[kind] = max(trace[kind], abs(got_scalar - assembled.scalar))
                compat = max(compat, float(np.max(np.abs(covariant_metric_derivative_at(
                    g, specs["ssm"], p)))))
                theta_tr = max(theta_tr, abs(aux_tensors_at(g, pi, p).tr_theta))
    return [
        CheckResult("connections/curvature-oracle-ssm", oracle["ssm"], 1e-8),
        CheckResult("connections/curvature-oracle-pss", oracle["pss"], 1e-8),
        CheckResult("connections/scalar-trace-ssm", trace["ssm"], 1e-9),
        CheckResult("connections/scalar-trace-pss", trace["pss"], 1e-9),
        CheckResult("connections/metric-compatibility-ssm", compat, 1e-10),
        CheckResult("connections/theta-metric-trace", theta_tr, 1e-10),
    ]


# ---------------------------------------------------------------------------
# soliton layer

LAMBDA_TRACE_CASES = (("euclidean3", "position"), ("euclidean3", "exp_position"),
                      ("hyperbolic2", "scaling"))
STAR_TRACE_CASES = (("flat_r2_complex", "position"), ("hyperbolic2", "scaling"),
                    ("sphere2", "position"))


def lambda_trace_suite(seed: int) -> list[CheckResult]:
    """Setting lambda by its closed form must zero the metric trace of the
    soliton residual at every sample, for every connection and for the
    star kind on every zoo manifold carrying a structure tensor."""
    results = []
    for connection in ("lc", "ssm", "pss"):
        worst = 0.0
        for zoo_name, field_name in LAMBDA_TRACE_CASES:
            config = load_zoo(zoo_name)
            pts = sample_points(config, seed=seed, count=6)
            g = config.metric
            tau = config.fields[field_name]
            pi = config.oneforms["pi"]
            spec = (ConnectionSpec.levi_civita() if connection == "lc"
                    else ConnectionSpec(connection, pi))
            n = config.chart.dim
            for p in pts:
                fit = fit_torse_forming_at(g, tau, p)
                if fit.residual > 1e-7:
                    continue  # only fields the fit blesses participate
                kwargs = dict(n=n, phi=fit.phi, alpha_tau=fit.alpha_tau,
                              r=curvature_at(g, p).scalar, p=0.25)
                if connection != "lc":
                    aux = aux_tensors_at(g, pi, p)
                    kwargs.update(pi_tau=float(pi.values_at(p) @ tau.values_at(p)),
                                  a=aux.a, tr_theta=aux.tr_theta,
                                  tr_omega=aux.tr_omega)
                lam = lambda_closed_form("conformal", connection, **kwargs)
                res = soliton_residual_at("conformal", spec, g, tau, lam, 0.25, p)
                worst = max(worst, abs(res.trace))
        results.append(CheckResult(f"solitons/lambda-trace-conformal-{connection}",
                                   worst, 1e-8))
    worst = 0.0
    for zoo_name, field_name in STAR_TRACE_CASES:
        config = load_zoo(zoo_name)
        pts = sample_points(config, seed=seed, count=6)
        g = config.metric
        tau = config.fields[field_name]
        j = config.structure
        n = config.chart.dim
        for p in pts:
            fit = fit_torse_forming_at(g, tau, p)
            if fit.residual > 1e-7:
                continue
            lam = lambda_closed_form("star", "lc", n=n, phi=fit.phi,
                                     alpha_tau=fit.alpha_tau,
                                     r_star=star_ricci_at(g, j, p).r_star)
            res = soliton_residual_at("star", ConnectionSpec.levi_civita(),
                                      g, tau, lam, 0.0, p, j=j)
            worst = max(worst, abs(res.trace))
    results.append(CheckResult("solitons/lambda-trace-star", worst, 1e-8))
    return results


def classification_suite(seed: int) -> list[CheckResult]:
    """Classification labels and closed-form fits on the flat zoo fields."""
    config = load_zoo("euclidean3")
    pts = sample_points(config, seed=seed, count=6)
    g = config.metric

    fits = [fit_torse_forming_at(g, config.fields["position"], p) for p in pts]
    pos_ok = "concurrent" in classify(fits)
    fits = [fit_torse_forming_at(g, config.fields["constant"], p) for p in pts]
    labels = classify(fits)
    const_ok = all(lab in labels for lab in
                   ("parallel", "recurrent", "concircular", "torqued"))

    tau = config.fields["exp_position"]
    leibniz = 0.0
    for p in pts:
        fit = fit_torse_forming_at(g, tau, p)
        leibniz = max(leibniz, abs(fit.phi - np.exp(p[0])),
                      float(np.max(np.abs(fit.alpha - np.array([1.0, 0.0, 0.0])))),
                      fit.residual)

    scaling = 0.0
    for c in (0.5, 2.0, 7.25):
        scaled = config.fields["position"].__class__.from_strings(
            config.chart, [f"{c}*exp(x)*x", f"{c}*exp(x)*y", f"{c}*exp(x)*z"])
        for p in pts[:5]:
            base = fit_torse_forming_at(g, tau, p)
            got = fit_torse_forming_at(g, scaled, p)
            scaling = max(scaling, abs(got.phi - c * base.phi),
                          float(np.max(np.abs(got.alpha - base.alpha))))
    return [
        CheckResult("solitons/classify-position-concurrent", 0.0 if pos_ok else 1.0, 0.0),
        CheckResult("solitons/classify-constant-parallel", 0.0 if const_ok else 1.0, 0.0),
        CheckResult("solitons/leibniz-fit", leibniz, 1e-8),
        CheckResult("solitons/scaling-equivariance", scaling, 1e-9),
    ]


def exact_soliton_suite(seed: int) -> list[CheckResult]:
    """The two closed-form soliton cases: the position field on flat
    3-space under the conformal equation, and on the flat plane with the
    rotation structure tensor under the star equation."""
    config = load_zoo("euclidean3")
    pts = sample_points(config, seed=seed, count=6)
    g = config.metric
    tau = config.fields["position"]
    lam_defect = 0.0
    resid = 0.0
    for p in pts:
        fit = fit_torse_forming_at(g, tau, p)
        lam = lambda_closed_form("conformal", "lc", n=3, phi=fit.phi,
                                 alpha_tau=fit.alpha_tau,
                                 r=curvature_at(g, p).scalar, p=0.0)
        lam_defect = max(lam_defect, abs(lam + 2.0 / 3.0))
        res = soliton_residual_at("conformal", ConnectionSpec.levi_civita(),
                                  g, tau, lam, 0.0, p)
        resid = max(resid, res.sup)
    config2 = load_zoo("flat_r2_complex")
    pts2 = sample_points(config2, seed=seed, count=6)
    g2 = config2.metric
    tau2 = config2.fields["position"]
    j2 = config2.structure
    star_lam = 0.0
    star_resid = 0.0
    for p in pts2:
        fit = fit_torse_forming_at(g2, tau2, p)
        lam = lambda_closed_form("star", "lc", n=2, phi=fit.phi,
                                 alpha_tau=fit.alpha_tau,
                                 r_star=star_ricci_at(g2, j2, p).r_star)
        star_lam = max(star_lam, abs(lam + 1.0))
        res = soliton_residual_at("star", ConnectionSpec.levi_civita(),
                                  g2, tau2, lam, 0.0, p, j=j2)
        star_resid = max(star_resid, res.sup)
    return [
        CheckResult("solitons/exact-conformal-lambda", lam_defect, 1e-12),
        CheckResult("solitons/exact-conformal-residual", resid, 1e-10),
        CheckResult("solitons/exact-star-lambda", star_lam, 1e-12),
        CheckResult("solitons/exact-star-residual", star_resid, 1e-10),
    ]


# ---------------------------------------------------------------------------
# the 3-dimensional worked example

def _sec5_expected_christoffel(z):
    two_z = 2.0 / z
    table = np.zeros((3, 3, 3))
    table[0, 0] = [0.0, 0.0, two_z]
    table[0, 2] = [-two_z, 0.0, 0.0]
    table[1, 1] = [0.0, 0.0, two_z]
    table[1, 2] = [0.0, -two_z, 0.0]
    return table


def _sec5_expected_curvature(z):
    s = 1.0 / z ** 2
    cases = {
        (0, 1, 0): [0.0, 4.0 * s, 0.0],
        (0, 1, 1): [-4.0 * s, 0.0, 0.0],
        (0, 2, 0): [0.0, 0.0, 6.0 * s],
        (0, 2, 2): [-6.0 * s, 0.0, 0.0],
        (1, 2, 1): [0.0, 0.0, 6.0 * s],
        (1, 2, 2): [0.0, -6.0 * s, 0.0],
    }
    zeros = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
    return cases, zeros


def worked_example_suite(seed: int, count: int = 20) -> list[CheckResult]:
    """Reproduce the closed-form numbers of the bundled 3-dimensional
    example on seeded samples: scalar curvature -32/z^2, the frame-diagonal
    Ricci values (-10, -10, -12)/z^2, the full frame connection table and
    the six nonzero plus three vanishing frame curvature values."""
    config = load_zoo("paper_sec5")
    pts = sample_points(config, seed=seed, count=count)
    g = config.metric
    frame = config.frame
    scalar_defect = ricci_defect = christoffel_defect = 0.0
    curvature_defect = zeros_defect = 0.0
    for p in pts:
        z = p[2]
        curv = curvature_at(g, p)
        scalar_defect = max(scalar_defect,
                            abs(curv.scalar - (-32.0 / z ** 2)) / (32.0 / z ** 2))
        e = frame.matrix_at(p)
        ricci_frame = e.T @ curv.ricci @ e
        want = np.diag([-10.0 / z ** 2, -10.0 / z ** 2, -12.0 / z ** 2])
        ricci_defect = max(ricci_defect, _normalized(ricci_frame, want))
        conn = christoffel_at(g, p)
        got_table = np.empty((3, 3, 3))
        for b, vec in enumerate(frame.vectors):
            dcov = covariant_derivative_at(conn, vec, p)
            along = e.T @ dcov  # row a: derivative of e_b along e_a
            for a in range(3):
                got_table[a, b] = frame_components_at(frame, along[a], p)
        christoffel_defect = max(christoffel_defect,
                                 _normalized(got_table, _sec5_expected_christoffel(z)))
        cases, zeros = _sec5_expected_curvature(z)
        for (a, b, c), want_vec in cases.items():
            v = np.einsum("lkij,k,i,j->l", curv.riemann, e[:, c], e[:, a], e[:, b])
            got = frame_components_at(frame, v, p)
            curvature_defect = max(curvature_defect, _normalized(got, want_vec))
        for (a, b, c) in zeros:
            v = np.einsum("lkij,k,i,j->l", curv.riemann, e[:, c], e[:, a], e[:, b])
            got = frame_components_at(frame, v, p)
            zeros_defect = max(zeros_defect, float(np.max(np.abs(got))))
    return [
        CheckResult("paper_sec5/scalar-curvature", scalar_defect, 1e-9),
        CheckResult("paper_sec5/ricci-frame-diagonal", ricci_defect, 1e-9),
        CheckResult("paper_sec5/christoffel-frame-table", christoffel_defect, 1e-9),
        CheckResult("paper_sec5/curvature-frame-values", curvature_defect, 1e-9),
        CheckResult("paper_sec5/curvature-frame-zeros", zeros_defect, 1e-10),
    ]


# ---------------------------------------------------------------------------
# assembly

def run_config_checks(config: ManifoldConfig, seed: int) -> list[CheckResult]:
    points = sample_points(config, seed=seed)
    return geometry_suite(config, points) + connection_suite(config, points)


def run_all_checks(seed: int) -> list[CheckResult]:
    """Every invariant suite over the whole zoo plus the random batteries."""
    results: list[CheckResult] = []
    results += expr_suite(seed)
    for name in ZOO_NAMES:
        config = load_zoo(name)
        results += run_config_checks(config, seed)
    results += flat_transform_suite(seed)
    results += curvature_oracle_suite(seed)
    results += lambda_trace_suite(seed)
    results += classification_suite(seed)
    results += exact_soliton_suite(seed)
    results += worked_example_suite(seed)
    return results
