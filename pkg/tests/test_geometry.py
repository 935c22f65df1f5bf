import numpy as np
import pytest

from yamabe.geometry import (
    Chart,
    FrameDegenerateError,
    FrameField,
    MetricField,
    SingularMetricError,
    christoffel_at,
    covariant_derivative_at,
    curvature_at,
    frame_components_at,
    lie_bracket_at,
    lie_derivative_metric_at,
    metric_at,
)

from helpers import (
    euclidean,
    fd_gradient,
    hyperbolic2,
    random_polynomial_metric,
    sec5_metric,
    sphere2,
    vf,
)

SEC5_POINTS = [np.array([0.4, 1.1, 2.0]), np.array([-1.0, 0.3, 0.7]),
               np.array([2.0, -0.5, -1.6])]


def sec5_frame(chart):
    return FrameField(chart, (vf(chart, "z^2", "0", "0"),
                              vf(chart, "0", "z^2", "0"),
                              vf(chart, "0", "0", "1")))


class TestMetricAt:
    def test_euclidean_identity(self):
        chart, g = euclidean(3)
        m = metric_at(g, [0.7, -2.0, 5.0])
        assert np.array_equal(m.matrix, np.eye(3))
        assert np.array_equal(m.inverse, np.eye(3))
        assert m.det == 1.0

    def test_sec5_at_z2(self):
        chart, g = sec5_metric()
        m = metric_at(g, [0.0, 0.0, 2.0])
        assert np.allclose(m.matrix, np.diag([1 / 16, 1 / 16, 1.0]), atol=1e-15)
        assert np.allclose(m.inverse, np.diag([16.0, 16.0, 1.0]), atol=1e-12)

    def test_inverse_quality(self):
        rng = np.random.default_rng(3)
        chart, _ = euclidean(3)
        g = random_polynomial_metric(rng, chart)
        for _ in range(5):
            p = rng.uniform(-1, 1, 3)
            m = metric_at(g, p)
            assert np.max(np.abs(m.inverse @ m.matrix - np.eye(3))) <= 1e-12

    def test_degenerate_metric_raises(self):
        chart = Chart.of(["x", "y"])
        g = MetricField.diagonal(chart, ["x", "1"])
        with pytest.raises(SingularMetricError) as exc:
            metric_at(g, [0.0, 1.0])
        assert exc.value.cond > 1e12 or not np.isfinite(exc.value.cond)

    def test_chart_validation(self):
        with pytest.raises(ValueError):
            Chart.of(["x"])
        with pytest.raises(ValueError):
            Chart.of(["x", "x"])


class TestChristoffel:
    def test_euclidean_zero(self):
        chart, g = euclidean(3)
        ch = christoffel_at(g, [1.0, 2.0, 3.0])
        assert np.array_equal(ch.gamma, np.zeros((3, 3, 3)))
        assert np.array_equal(ch.dgamma, np.zeros((3, 3, 3, 3)))

    @pytest.mark.parametrize("p", SEC5_POINTS)
    def test_sec5_closed_form(self, p):
        # hand values from the coordinate formula on diag(z^-4, z^-4, 1):
        # only dz g_xx = dz g_yy = -4 z^-5 are nonzero, giving
        # G^z_xx = G^z_yy = 2 z^-5 and G^x_xz = G^y_yz = -2/z.
        chart, g = sec5_metric()
        z = p[2]
        ch = christoffel_at(g, p)
        expected = np.zeros((3, 3, 3))
        expected[2, 0, 0] = 2.0 * z ** -5
        expected[2, 1, 1] = 2.0 * z ** -5
        expected[0, 0, 2] = expected[0, 2, 0] = -2.0 / z
        expected[1, 1, 2] = expected[1, 2, 1] = -2.0 / z
        assert np.allclose(ch.gamma, expected, rtol=1e-12, atol=1e-12)

    def test_hyperbolic_plane_closed_form(self):
        chart, g = hyperbolic2()
        p = [0.3, 1.7]
        ch = christoffel_at(g, p)
        y = p[1]
        expected = np.zeros((2, 2, 2))
        expected[0, 0, 1] = expected[0, 1, 0] = -1.0 / y
        expected[1, 0, 0] = 1.0 / y
        expected[1, 1, 1] = -1.0 / y
        assert np.allclose(ch.gamma, expected, rtol=1e-12, atol=1e-13)

    def test_gamma_symmetric_in_lower_indices(self):
        rng = np.random.default_rng(11)
        chart, _ = euclidean(3)
        g = random_polynomial_metric(rng, chart)
        for _ in range(4):
            ch = christoffel_at(g, rng.uniform(-1, 1, 3))
            assert np.allclose(ch.gamma, ch.gamma.transpose(0, 2, 1), atol=1e-13)

    def test_dgamma_matches_finite_differences(self):
        rng = np.random.default_rng(5)
        chart, _ = euclidean(3)
        for g in [sec5_metric()[1], random_polynomial_metric(rng, chart)]:
            p = np.array([0.3, -0.4, 1.2])
            ch = christoffel_at(g, p)
            fd = np.stack([
                fd_gradient(lambda q, k=k, i=i, j=j: christoffel_at(g, q).gamma[k, i, j], p)
                for k in range(3) for i in range(3) for j in range(3)
            ], axis=1).reshape(3, 3, 3, 3)
            scale = np.maximum(np.abs(fd), np.abs(ch.dgamma))
            assert np.all(np.abs(ch.dgamma - fd) <= 1e-5 * scale + 1e-7)


class TestCurvature:
    def test_euclidean_flat(self):
        chart, g = euclidean(3)
        c = curvature_at(g, [1.0, -2.0, 0.5])
        assert np.max(np.abs(c.riemann)) == 0.0
        assert np.max(np.abs(c.ricci)) == 0.0
        assert c.scalar == 0.0

    @pytest.mark.parametrize("p", SEC5_POINTS)
    def test_sec5_scalar_and_frame_ricci(self, p):
        chart, g = sec5_metric()
        z = p[2]
        c = curvature_at(g, p)
        assert c.scalar == pytest.approx(-32.0 / z ** 2, rel=1e-12)
        frame = sec5_frame(chart)
        e = frame.matrix_at(p)
        s_frame = e.T @ c.ricci @ e
        assert s_frame[0, 0] == pytest.approx(-10.0 / z ** 2, rel=1e-11)
        assert s_frame[1, 1] == pytest.approx(-10.0 / z ** 2, rel=1e-11)
        assert s_frame[2, 2] == pytest.approx(-12.0 / z ** 2, rel=1e-11)

    def test_hyperbolic_scalar(self):
        chart, g = hyperbolic2()
        for p in [[0.1, 0.8], [2.0, 3.0], [-1.0, 1.4]]:
            assert curvature_at(g, p).scalar == pytest.approx(-2.0, rel=1e-11)

    def test_sphere_scalar(self):
        chart, g = sphere2()
        for p in [[0.2, 0.4], [1.0, -0.5]]:
            assert curvature_at(g, p).scalar == pytest.approx(2.0, rel=1e-11)

    def test_symmetries_and_bianchi(self):
        rng = np.random.default_rng(17)
        chart3, _ = euclidean(3)
        metrics = [sec5_metric()[1], hyperbolic2()[1], sphere2()[1],
                   random_polynomial_metric(rng, chart3)]
        points = {2: [[0.3, 1.1], [-0.7, 2.0]], 3: [[0.4, 1.1, 2.0], [0.1, -0.2, 0.9]]}
        for g in metrics:
            for p in points[g.chart.dim]:
                c = curvature_at(g, p)
                low = c.riemann_lower
                assert np.max(np.abs(low + low.transpose(0, 1, 3, 2))) <= 1e-9
                assert np.max(np.abs(low + low.transpose(1, 0, 2, 3))) <= 1e-9
                assert np.max(np.abs(low - low.transpose(2, 3, 0, 1))) <= 1e-9
                bianchi = (c.riemann + c.riemann.transpose(0, 2, 3, 1)
                           + c.riemann.transpose(0, 3, 1, 2))
                assert np.max(np.abs(bianchi)) <= 1e-9
                assert np.max(np.abs(c.ricci - c.ricci.T)) <= 1e-10

    def test_flat_after_constant_linear_change_of_coordinates(self):
        # pull back the identity metric by x -> A x: constant entries A^T A
        rng = np.random.default_rng(23)
        chart = Chart.of(["x", "y", "z"])
        a = np.eye(3) + rng.uniform(-0.4, 0.4, (3, 3))
        gmat = a.T @ a
        entries = {(i, j): repr(float(gmat[i, j])) for i in range(3) for j in range(i + 1)}
        g = MetricField.from_lower_triangular(chart, entries)
        for _ in range(3):
            c = curvature_at(g, rng.uniform(-2, 2, 3))
            assert np.max(np.abs(c.riemann)) <= 1e-9


class TestLieBracket:
    def test_coordinate_fields_commute(self):
        chart, g = euclidean(3)
        dx = vf(chart, "1", "0", "0")
        dy = vf(chart, "0", "1", "0")
        assert np.array_equal(lie_bracket_at(dx, dy, [1.0, 2.0, 3.0]), np.zeros(3))

    def test_sec5_frame_bracket(self):
        chart, g = sec5_metric()
        e1 = vf(chart, "z^2", "0", "0")
        e3 = vf(chart, "0", "0", "1")
        for p in SEC5_POINTS:
            z = p[2]
            out = lie_bracket_at(e1, e3, p)
            # -(2/z) e1 = -2z d_x
            assert np.allclose(out, [-2.0 * z, 0.0, 0.0], atol=1e-12)

    def test_hand_computed_bracket(self):
        # X = x d_y, Y = y d_x: [X,Y]^x = x d_y(y) = x, [X,Y]^y = -y d_x(x) = -y
        chart = Chart.of(["x", "y"])
        X = vf(chart, "0", "x")
        Y = vf(chart, "y", "0")
        assert np.allclose(lie_bracket_at(X, Y, [1.0, 2.0]), [1.0, -2.0], atol=1e-13)

    def test_antisymmetry(self):
        chart, g = euclidean(3)
        X = vf(chart, "x*y", "sin(z)", "exp(x)")
        Y = vf(chart, "z^2", "x + y", "1")
        for p in [[0.3, 0.4, 0.5], [1.0, -1.0, 2.0]]:
            assert np.allclose(lie_bracket_at(X, Y, p), -lie_bracket_at(Y, X, p),
                               atol=1e-12)


class TestCovariantDerivative:
    def test_position_field_euclidean(self):
        chart, g = euclidean(3)
        conn = christoffel_at(g, [1.0, 2.0, 3.0])
        tau = vf(chart, "x", "y", "z")
        assert np.array_equal(covariant_derivative_at(conn, tau, [1.0, 2.0, 3.0]),
                              np.eye(3))

    def test_constant_field_parallel(self):
        chart, g = euclidean(3)
        conn = christoffel_at(g, [1.0, 2.0, 3.0])
        tau = vf(chart, "2", "-1", "5")
        assert np.array_equal(covariant_derivative_at(conn, tau, [1.0, 2.0, 3.0]),
                              np.zeros((3, 3)))

    @pytest.mark.parametrize("p", SEC5_POINTS)
    def test_sec5_derivatives_of_vertical_frame_vector(self, p):
        chart, g = sec5_metric()
        z = p[2]
        conn = christoffel_at(g, p)
        tau = vf(chart, "0", "0", "1")  # e3
        d = covariant_derivative_at(conn, tau, p)
        frame = sec5_frame(chart)
        e = frame.matrix_at(p)
        # rows: derivative along e_i is e_i^m D[m, :]
        along = e.T @ d
        got0 = frame_components_at(frame, along[0], p)
        assert np.allclose(got0, [-2.0 / z, 0.0, 0.0], atol=1e-12)
        got1 = frame_components_at(frame, along[1], p)
        assert np.allclose(got1, [0.0, -2.0 / z, 0.0], atol=1e-12)
        assert np.allclose(along[2], np.zeros(3), atol=1e-12)


class TestLieDerivativeMetric:
    def test_rotation_is_killing(self):
        chart, g = euclidean(2)
        rot = vf(chart, "-y", "x")
        out = lie_derivative_metric_at(g, rot, [0.7, -0.3])
        assert np.max(np.abs(out)) <= 1e-13

    def test_position_gives_twice_metric(self):
        chart, g = euclidean(3)
        pos = vf(chart, "x", "y", "z")
        out = lie_derivative_metric_at(g, pos, [1.0, 2.0, 3.0])
        assert np.allclose(out, 2.0 * np.eye(3), atol=1e-13)

    @pytest.mark.parametrize("p", SEC5_POINTS)
    def test_sec5_frame_constant_field(self, p):
        # For tau = a e1 + b e2 + c e3 with constant frame coefficients,
        # pairing the connection table with X = x1 e1 + y1 e2 + z1 e3 and
        # W likewise gives
        # (L_tau g)(X, W) = (2/z) [ -2 c (x1 x3 + y1 y3)
        #                           + z3 (x1 a + y1 b) + z1 (x3 a + y3 b) ]
        # (hand derivation from nabla_{e1} e1 = (2/z) e3,
        #  nabla_{e1} e3 = -(2/z) e1 and the metric being orthonormal).
        chart, g = sec5_metric()
        z = p[2]
        a, b, c = 1.0, 2.0, 3.0
        tau = vf(chart, f"{a}*z^2", f"{b}*z^2", f"{c}")
        lie = lie_derivative_metric_at(g, tau, p)
        frame = sec5_frame(chart)
        e = frame.matrix_at(p)
        lie_frame = e.T @ lie @ e
        x1 = np.array([1.0, 1.0, 1.0])
        x3 = np.array([7.0, 1.0, 1.0])
        got = x1 @ lie_frame @ x3
        expect = (2.0 / z) * (-2 * c * (x1[0] * x3[0] + x1[1] * x3[1])
                              + x3[2] * (x1[0] * a + x1[1] * b)
                              + x1[2] * (x3[0] * a + x3[1] * b))
        assert got == pytest.approx(expect, rel=1e-11)
        assert got == pytest.approx(-72.0 / z, rel=1e-11)

    def test_dual_route_agreement_random(self):
        rng = np.random.default_rng(29)
        chart, _ = euclidean(3)
        g = random_polynomial_metric(rng, chart)
        tau = vf(chart, "x*y", "exp(z/3)", "x - y^2")
        for _ in range(5):
            out = lie_derivative_metric_at(g, tau, rng.uniform(-1, 1, 3))
            assert np.allclose(out, out.T, atol=1e-14)


class TestFrameComponents:
    def test_standard_basis(self):
        chart, g = euclidean(3)
        frame = FrameField(chart, (vf(chart, "1", "0", "0"),
                                   vf(chart, "0", "1", "0"),
                                   vf(chart, "0", "0", "1")))
        out = frame_components_at(frame, [3.0, -1.0, 2.0], [0.0, 0.0, 0.0])
        assert np.array_equal(out, [3.0, -1.0, 2.0])

    def test_random_frame_round_trip(self):
        rng = np.random.default_rng(31)
        chart, _ = euclidean(3)
        mats = rng.uniform(-1, 1, (4, 3, 3)) + np.eye(3) * 2
        for m in mats:
            frame = FrameField(chart, tuple(
                vf(chart, *[repr(float(m[r, c])) for r in range(3)]) for c in range(3)))
            p = rng.uniform(-1, 1, 3)
            v = rng.uniform(-2, 2, 3)
            coeff = frame_components_at(frame, v, p)
            rebuilt = frame.matrix_at(p) @ coeff
            assert np.max(np.abs(rebuilt - v)) <= 1e-10

    def test_degenerate_frame(self):
        chart, _ = euclidean(2)
        frame = FrameField(chart, (vf(chart, "1", "1"), vf(chart, "2", "2")))
        with pytest.raises(FrameDegenerateError):
            frame_components_at(frame, [1.0, 0.0], [0.0, 0.0])
