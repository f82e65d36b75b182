#include <cmath>

#include <catch_amalgamated.hpp>

#include "larmor/core/matrices.hpp"
#include "larmor/core/quadrature.hpp"
#include "test_support.hpp"

using namespace larmor;
using larmor_test::max_abs_diff;
using larmor_test::Sampler;

TEST_CASE("cross_matrix reproduces the cross product")
{
    Mat3 expected;
    expected << 0, -2.5, 0, 2.5, 0, 0, 0, 0, 0;
    REQUIRE(cross_matrix(Vec3(0, 0, 2.5)) == expected);
    REQUIRE(cross_matrix(Vec3::Zero()) == Mat3::Zero());

    const Vec3 product = cross_matrix(Vec3(1, 2, 3)) * Vec3(4, 5, 6);
    REQUIRE(product == Vec3(-3, 6, -3));

    Sampler rng(11);
    for (int i = 0; i < 100; ++i) {
        const Vec3 b = rng.vec3(-5, 5);
        const Vec3 x = rng.vec3(-5, 5);
        const Mat3 omega = cross_matrix(b);
        // Entries are placed, not computed: antisymmetry and trace are exact.
        REQUIRE(omega.transpose() == -omega);
        REQUIRE(omega.trace() == 0.0);
        REQUIRE(max_abs_diff(omega * x, b.cross(x)) <= 1e-14);
    }
}

TEST_CASE("rotation_about_z is a proper rotation")
{
    REQUIRE(rotation_about_z(0.0) == Mat3::Identity());

    Mat3 quarter;
    quarter << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    REQUIRE(max_abs_diff(rotation_about_z(kPi / 2), quarter) <= 1e-16);

    Sampler rng(12);
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(-10, 10);
        const double b = rng.uniform(-10, 10);
        const Mat3 r = rotation_about_z(a);
        REQUIRE(max_abs_diff(r.transpose() * r, Mat3::Identity()) <= 1e-14);
        REQUIRE(std::abs(r.determinant() - 1.0) <= 1e-14);
        REQUIRE(max_abs_diff(r * Vec3::UnitZ(), Vec3::UnitZ()) == 0.0);
        REQUIRE(max_abs_diff(rotation_about_z(a) * rotation_about_z(b), rotation_about_z(a + b)) <= 1e-13);
    }
}

TEST_CASE("rotation_about_z equals the exponential of the field generator")
{
    // The matrix with +sin in both off-diagonal slots is not orthogonal; the
    // exponential of the antisymmetric generator is.
    const double w = 1.7;
    const double t = 0.4;
    Mat3 printed;
    printed << std::cos(w * t), std::sin(w * t), 0, std::sin(w * t), std::cos(w * t), 0, 0, 0, 1;
    REQUIRE(max_abs_diff(printed.transpose() * printed, Mat3::Identity()) > 0.1);

    const Mat3 generator = cross_matrix(Vec3(0, 0, w));
    REQUIRE(max_abs_diff(antisymmetric_exp(generator, t), rotation_about_z(w * t)) <= 1e-14);
}

TEST_CASE("antisymmetric_exp matches a truncated Taylor series")
{
    Sampler rng(13);
    for (int i = 0; i < 20; ++i) {
        const Mat3 w = cross_matrix(rng.vec3(-1, 1));
        const double t = rng.uniform(-2, 2);
        Mat3 series = Mat3::Identity();
        Mat3 term = Mat3::Identity();
        for (int k = 1; k < 40; ++k) {
            term = term * (t * w) / static_cast<double>(k);
            series += term;
        }
        REQUIRE(max_abs_diff(antisymmetric_exp(w, t), series) <= 1e-13);
    }
    REQUIRE(antisymmetric_exp(Mat3::Zero(), 3.0) == Mat3::Identity());
}

TEST_CASE("propagator_2x2 closed form")
{
    REQUIRE(propagator_2x2(OscParams(1, 1), 0.0) == Mat2::Identity());

    Mat2 minus_identity = -Mat2::Identity();
    REQUIRE(max_abs_diff(propagator_2x2(OscParams(1, 2), kPi / 2), minus_identity) <= 1e-15);

    Mat2 free;
    free << 1, 0.7 / 2.5, 0, 1;
    REQUIRE(propagator_2x2(OscParams(2.5, 0.0), 0.7) == free);
}

TEST_CASE("propagator_2x2 solves the oscillator flow")
{
    // Independent check: d/dt U = G U by central differences.
    const OscParams params(1.8, 1.3);
    const Mat2 g = flow_generator_2x2(params);
    const double h = 1e-5;
    for (const double t : {0.0, 0.4, 2.2, 7.5}) {
        const Mat2 derivative = (propagator_2x2(params, t + h) - propagator_2x2(params, t - h)) / (2 * h);
        REQUIRE(max_abs_diff(derivative, g * propagator_2x2(params, t)) <= 1e-8);
    }
}

TEST_CASE("propagator invariants hold for sampled parameters")
{
    Sampler rng(14);
    for (int i = 0; i < 200; ++i) {
        const OscParams params(rng.uniform(0.2, 3), rng.uniform(0, 3));
        const double t = rng.uniform(-10, 10);
        const Mat2 u = propagator_2x2(params, t);
        REQUIRE(std::abs(u.determinant() - 1.0) <= 1e-12);

        // Energy conservation in matrix form.
        const Mat2 e = energy_matrix_2x2(params);
        REQUIRE(max_abs_diff(u.transpose() * e * u, e) <= 1e-12 * (1 + e.cwiseAbs().maxCoeff()));

        // U is generated by G, so it commutes with it.
        const Mat2 g = flow_generator_2x2(params);
        REQUIRE(max_abs_diff(u.inverse() * g * u, g) <= 1e-12 * (1 + g.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("congruence with the flow generator holds only at unit frequency")
{
    // U^T G U = G read with G = [[0, 1], [-w^2, 0]] fails for w != 1 (m = 1);
    // the conserved quadratic form is the energy matrix.
    const OscParams unit(1.0, 1.0);
    const Mat2 gu = flow_generator_2x2(unit);
    const Mat2 uu = propagator_2x2(unit, 0.7);
    REQUIRE(max_abs_diff(uu.transpose() * gu * uu, gu) <= 1e-15);

    const OscParams params(1.0, 1.3);
    const Mat2 g = flow_generator_2x2(params);
    const Mat2 u = propagator_2x2(params, 0.7);
    REQUIRE(max_abs_diff(u.transpose() * g * u, g) > 1e-2);
    const Mat2 e = energy_matrix_2x2(params);
    REQUIRE(max_abs_diff(u.transpose() * e * u, e) <= 1e-12);
    // G = J E.
    Mat2 j;
    j << 0, 1, -1, 0;
    REQUIRE(max_abs_diff(j * e, g) == 0.0);
}

TEST_CASE("propagator_2x2 is continuous as omega goes to zero")
{
    for (const double t : {0.3, 1.0, 4.0}) {
        for (const double m : {0.5, 1.0, 2.0}) {
            const Mat2 small = propagator_2x2(OscParams(m, 1e-6), t);
            const Mat2 free = propagator_2x2(OscParams(m, 0.0), t);
            REQUIRE(max_abs_diff(small, free) <= 1e-5);
        }
    }
}

TEST_CASE("block_propagator layout and semigroup")
{
    const OscParams params(1.0, 0.8);
    REQUIRE(block_propagator(params, 0.0) == Mat6::Identity());

    Vec6 axial = Vec6::Zero();
    axial(4) = 0.3;
    axial(5) = -1.2;
    const double t = 2.7;
    const Vec6 moved = block_propagator(params, t) * axial;
    REQUIRE(moved(4) == Catch::Approx(0.3 - 1.2 * t).epsilon(1e-15));
    REQUIRE(moved(5) == -1.2);
    REQUIRE(moved.head<4>().isZero(0.0));

    Sampler rng(15);
    for (int i = 0; i < 100; ++i) {
        const OscParams p(rng.uniform(0.3, 3), rng.uniform(0, 3));
        const double a = rng.uniform(-5, 5);
        const double b = rng.uniform(-5, 5);
        const Mat6 lhs = block_propagator(p, a + b);
        const Mat6 rhs = block_propagator(p, a) * block_propagator(p, b);
        REQUIRE(max_abs_diff(lhs, rhs) <= 1e-12 * (1 + lhs.cwiseAbs().maxCoeff()));
        const Eigen::MatrixXd u = block_propagator(p, a);
        REQUIRE(symplectic_defect(u) <= 1e-12 * (1 + u.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("OscParams validation")
{
    REQUIRE_THROWS_AS(OscParams(0.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(OscParams(1.0, -1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(OscParams(1.0, std::nan("")), std::invalid_argument);
    REQUIRE_NOTHROW(OscParams(1.0, 0.0));
}

TEST_CASE("composite Simpson is exact for cubics")
{
    const double integral = simpson([](double x) { return x * x * x - 2 * x + 1; }, -1.0, 2.0, 2);
    REQUIRE(integral == Catch::Approx(3.75).epsilon(1e-14));
    REQUIRE_THROWS(simpson([](double x) { return x; }, 0.0, 1.0, 3));

    const QuadratureSpec quad{};
    REQUIRE(quad.panels_for(1.0) == 10000);
    REQUIRE(quad.panels_for(1e-9) == 2);
    REQUIRE(quad.panels_for(0.00015) % 2 == 0);
}
