"""Shared finite-difference oracles and small builders for the tests.

The finite-difference routines are deliberately independent of the
package's jet propagation: they only ever call back into plain value
evaluation.
"""

import numpy as np

from yamabe.expr import eval_jet2
from yamabe.geometry import Chart, MetricField, VectorField

GRAD_STEP = 1e-5
HESS_STEP = 1e-4


def value_at(expr, p):
    return eval_jet2(expr, p).value


def fd_gradient(f, p, h=GRAD_STEP):
    p = np.asarray(p, dtype=float)
    out = np.empty(len(p))
    for m in range(len(p)):
        e = np.zeros(len(p))
        e[m] = h
        out[m] = (f(p + e) - f(p - e)) / (2.0 * h)
    return out


def fd_hessian(f, p, h=HESS_STEP):
    p = np.asarray(p, dtype=float)
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
            out[i, j] = out[j, i] = (
                f(p + ei + ej) - f(p + ei - ej) - f(p - ei + ej) + f(p - ei - ej)
            ) / (4.0 * h ** 2)
    return out


def rel_close(got, want, rel=1e-6, abs_tol=1e-8):
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    scale = np.maximum(np.abs(got), np.abs(want))
    return bool(np.all(np.abs(got - want) <= rel * scale + abs_tol))


def euclidean(n):
    names = ["x", "y", "z", "w"][:n]
    chart = Chart.of(names)
    return chart, MetricField.euclidean(chart)


def sec5_chart():
    return Chart.of(["x", "y", "z"], exclusion="z")


def sec5_metric():
    chart = sec5_chart()
    return chart, MetricField.diagonal(chart, ["z^-4", "z^-4", "1"])


def hyperbolic2():
    chart = Chart.of(["x", "y"], exclusion="y")
    return chart, MetricField.diagonal(chart, ["1/y^2", "1/y^2"])


def sphere2():
    chart = Chart.of(["x", "y"])
    conf = "4/(1 + x^2 + y^2)^2"
    return chart, MetricField.diagonal(chart, [conf, conf])


def vf(chart, *comps):
    return VectorField.from_strings(chart, list(comps))


def random_polynomial_metric(rng, chart, scale=0.2):
    """SPD metric L^T L with L = I + small linear entries, written as
    expression strings so the parser is exercised too."""
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
            terms = " + ".join(f"({entries[k][i]})*({entries[k][j]})" for k in range(n))
            lower[(i, j)] = terms
    return MetricField.from_lower_triangular(chart, lower)


def random_linear_oneform(rng, chart, scale=0.5):
    from yamabe.geometry import OneFormField
    n = chart.dim
    comps = []
    for _ in range(n):
        parts = [f"{rng.uniform(-scale, scale):.6f}"]
        parts += [f"{rng.uniform(-scale, scale):.6f}*{name}" for name in chart.coords]
        comps.append(" + ".join(parts))
    return OneFormField.from_strings(chart, comps)
