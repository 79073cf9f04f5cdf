"""Connection matrices, transport, flatness and monodromy."""

import numpy as np
import pytest

from traintrack import (
    DomainError,
    F2Params,
    Hyper2F1Params,
    ModuliPoint,
    PathSpec,
    a_2f1,
    a_f2,
    ellint_K,
    gamma2_membership,
    integrate_pfaffian,
    monodromy_2f1,
    system_2f1,
    system_f2,
    tensor_system,
)
from traintrack.appell import f2_series_on_arrays
from traintrack.pfaffian import (
    flatness_residual,
    horizontality_residual_1d,
    horizontality_residual_f2,
    legendre_basis_matrix,
    restrict_to_line,
)

CONFORMAL = F2Params.conformal_case()
LEGENDRE = Hyper2F1Params(0.5, 0.5, 1.0)


def _rng():
    return np.random.Generator(np.random.Philox(4242))


class TestA2F1:
    def test_first_row_is_section_definition(self):
        z = 0.37 + 0.11j
        a = a_2f1(LEGENDRE, z)
        assert a[0, 0] == 0.0
        assert a[0, 1] == pytest.approx(1.0 / z)

    def test_horizontality_of_k(self):
        s = system_2f1(LEGENDRE)
        f = lambda z: 2.0 / np.pi * ellint_K(z)
        assert horizontality_residual_1d(s, f, 0.3, 0.1) < 1e-9

    def test_horizontality_of_second_solution(self):
        s = system_2f1(LEGENDRE)
        f = lambda z: 2j / np.pi * ellint_K(1.0 - z)
        assert horizontality_residual_1d(s, f, 0.3, 0.1) < 1e-9

    def test_horizontality_random_points(self):
        rng = _rng()
        s = system_2f1(LEGENDRE)
        f = lambda z: 2.0 / np.pi * ellint_K(z)
        for _ in range(20):
            z0 = complex(rng.uniform(0.15, 0.85), rng.uniform(-0.1, 0.1))
            r = 0.4 * min(abs(z0), abs(1 - z0))
            assert horizontality_residual_1d(s, f, z0, r) < 1e-8

    def test_singular_point_raises(self):
        with pytest.raises(DomainError):
            a_2f1(LEGENDRE, 0.0)


class TestAF2:
    def test_first_rows_are_section_definition(self):
        x, y = 0.21, -0.13
        ax, ay = a_f2(CONFORMAL, ModuliPoint(x, y))
        np.testing.assert_allclose(ax[0], [0.0, 1.0 / x, 0.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(ay[0], [0.0, 0.0, 1.0 / y, 0.0], atol=1e-15)

    def test_horizontality_of_series_section(self):
        section = lambda x, y: f2_series_on_arrays(CONFORMAL, x, y)
        r = horizontality_residual_f2(CONFORMAL, section, ModuliPoint(0.2, 0.1), 0.05)
        assert r < 1e-8

    def test_flatness_random_points(self):
        rng = _rng()
        sys2 = system_f2(CONFORMAL)
        for _ in range(10):
            x = rng.uniform(0.12, 0.45)
            y = rng.uniform(0.1, 0.3) * (-1 if rng.uniform() < 0.5 else 1)
            assert flatness_residual(sys2, x, y, radius=0.03) < 1e-8

    def test_flatness_generic_parameters(self):
        sys2 = system_f2(F2Params(0.6, 0.35, 0.55, 1.3, 0.9))
        assert flatness_residual(sys2, 0.25, -0.2, radius=0.05) < 1e-8

    def test_singular_locus_raises(self):
        with pytest.raises(DomainError):
            a_f2(CONFORMAL, ModuliPoint(0.0, 0.2))


class TestTensorSystem:
    def test_degenerate_factor(self):
        s1 = system_2f1(LEGENDRE)
        zero = type(s1)(2, lambda z: np.zeros((2, 2), dtype=complex), ())
        ts = tensor_system(s1, zero)
        u, v = 0.3, 0.4
        np.testing.assert_allclose(
            ts.coefficient_x(u, v), np.kron(a_2f1(LEGENDRE, u), np.eye(2))
        )
        np.testing.assert_allclose(ts.coefficient_y(u, v), np.zeros((4, 4)))

    def test_product_section_horizontal(self):
        # section kron((f, u f'), (g, v g')) with f = (2/pi)K(u), g = (2/pi)K(v)
        from traintrack.quadrature import cauchy_derivs_1d

        s1 = system_2f1(LEGENDRE)
        ts = tensor_system(s1, s1)
        u0, v0 = 0.2, 0.3

        def section_of_u(u):
            return np.kron(
                legendre_basis_matrix(u)[:, 0], legendre_basis_matrix(v0)[:, 0]
            )

        vecs = [
            cauchy_derivs_1d(lambda u, i=i: section_of_u(u)[i], u0, 0.05, max_order=1)
            for i in range(4)
        ]
        vec = np.array([v[0] for v in vecs])
        dvec = np.array([v[1] for v in vecs])
        resid = dvec - ts.coefficient_x(u0, v0) @ vec
        assert np.max(np.abs(resid)) < 1e-9

    def test_tensor_monodromy_factorizes(self):
        s1 = system_2f1(LEGENDRE)
        ts = tensor_system(s1, s1)
        v0 = 0.3
        line = restrict_to_line(ts, v0, "x", singular_points=(0.0, 1.0))
        u0 = 0.35 + 0.01j
        phi = np.kron(legendre_basis_matrix(u0), legendre_basis_matrix(v0))
        loop = PathSpec.circle(0.0, abs(u0), 1.0, float(np.angle(u0)))
        psi = integrate_pfaffian(line, loop, phi)
        m = np.linalg.solve(phi, psi)
        m0 = monodromy_2f1(s1, 0.0)
        assert np.max(np.abs(m - np.kron(m0, np.eye(2)))) < 1e-9

    def test_dimension_mismatch(self):
        s1 = system_2f1(LEGENDRE)
        s3 = type(s1)(3, lambda z: np.zeros((3, 3), dtype=complex), ())
        with pytest.raises(ValueError):
            tensor_system(s1, s3)


class TestTransport:
    def test_zero_length_path(self):
        s = system_2f1(LEGENDRE)
        init = legendre_basis_matrix(0.3)
        out = integrate_pfaffian(s, PathSpec.polyline([0.3, 0.3]), init)
        np.testing.assert_array_equal(out, init)

    def test_contractible_loop(self):
        s = system_2f1(LEGENDRE)
        init = legendre_basis_matrix(0.3)
        loop = PathSpec.circle(0.3, 0.05)
        out = integrate_pfaffian(s, loop, init)
        assert np.max(np.abs(out - init)) < 1e-10

    def test_transport_matches_direct_evaluation(self):
        s = system_2f1(LEGENDRE)
        out = integrate_pfaffian(
            s, PathSpec.polyline([0.2, 0.4]), legendre_basis_matrix(0.2)
        )
        assert np.max(np.abs(out - legendre_basis_matrix(0.4))) < 1e-9

    def test_multiplicativity(self):
        s = system_2f1(LEGENDRE)
        init = legendre_basis_matrix(0.2)
        mid = integrate_pfaffian(s, PathSpec.polyline([0.2, 0.3 + 0.2j]), init)
        end_two = integrate_pfaffian(s, PathSpec.polyline([0.3 + 0.2j, 0.45]), mid)
        end_one = integrate_pfaffian(
            s, PathSpec.polyline([0.2, 0.3 + 0.2j, 0.45]), init
        )
        assert np.max(np.abs(end_one - end_two)) < 1e-10

    def test_clearance_violation(self):
        s = system_2f1(LEGENDRE)
        with pytest.raises(DomainError):
            integrate_pfaffian(
                s, PathSpec.polyline([0.2, 1e-5]), legendre_basis_matrix(0.2)
            )


class TestMonodromy:
    def test_loop_around_zero(self):
        s = system_2f1(LEGENDRE)
        m = monodromy_2f1(s, 0.0)
        r = np.round(m.real)
        assert np.max(np.abs(m - r)) < 1e-8
        assert abs(r[0, 1]) == 2 or abs(r[1, 0]) == 2
        assert np.allclose(np.linalg.eigvals(r), 1.0)
        assert gamma2_membership(m)

    def test_loop_around_one(self):
        s = system_2f1(LEGENDRE)
        m = monodromy_2f1(s, 1.0)
        r = np.round(m.real)
        assert np.max(np.abs(m - r)) < 1e-8
        assert abs(r[0, 1]) == 2 or abs(r[1, 0]) == 2
        assert np.allclose(np.linalg.eigvals(r), 1.0)
        assert gamma2_membership(m)

    def test_product_not_elliptic(self):
        s = system_2f1(LEGENDRE)
        m0 = np.round(monodromy_2f1(s, 0.0).real)
        m1 = np.round(monodromy_2f1(s, 1.0).real)
        assert abs(np.trace(m0 @ m1)) >= 2


class TestGamma2Membership:
    def test_identity(self):
        assert gamma2_membership(np.eye(2))

    def test_standard_generator(self):
        assert gamma2_membership(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_odd_translation_rejected(self):
        assert not gamma2_membership(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_non_integral_raises(self):
        with pytest.raises(ValueError):
            gamma2_membership(np.array([[1.0, 0.5], [0.0, 1.0]]))
