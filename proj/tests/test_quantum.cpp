#include <cmath>

#include <catch_amalgamated.hpp>

#include "larmor/quantum/eigenstates.hpp"
#include "larmor/quantum/evolution.hpp"
#include "test_support.hpp"

using namespace larmor;
using larmor_test::Sampler;

namespace {

// Explicit sum H_n(x) = n! sum_m (-1)^m (2x)^{n-2m} / (m! (n-2m)!), in long double.
long double hermite_explicit(int n, long double x) {
    long double s = 0.0L;
    for (int m = 0; 2 * m <= n; ++m) {
        long double term = (m % 2 == 0) ? 1.0L : -1.0L;
        term *= std::pow(2.0L * x, static_cast<long double>(n - 2 * m));
        term *= std::tgamma(static_cast<long double>(n + 1)) /
                (std::tgamma(static_cast<long double>(m + 1)) * std::tgamma(static_cast<long double>(n - 2 * m + 1)));
        s += term;
    }
    return s;
}

double grid_inner(const Grid& g, const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * g.spacing();
}

std::vector<double> sample_eigenfunction(const Grid& g, int n, const OscParams& p, double hbar) {
    std::vector<double> v(g.points());
    for (int j = 0; j < g.points(); ++j) v[j] = eigenfunction(n, p, hbar, g.coordinate(j));
    return v;
}

WaveFunction coherent_state(const Grid& g, const OscParams& p, double hbar, Eigen::Vector2d q0, Eigen::Vector2d p0) {
    return WaveFunction::sample(g, hbar, [&](double x, double y) {
        const double amp = eigenfunction(0, p, hbar, x - q0.x()) *
                           (g.dims() == 2 ? eigenfunction(0, p, hbar, y - q0.y()) : 1.0);
        const double phase = (p0.x() * x + (g.dims() == 2 ? p0.y() * y : 0.0)) / hbar;
        return std::polar(amp, phase);
    });
}

Eigen::Vector2d mean_position(const WaveFunction& psi) {
    const Grid& g = psi.grid();
    Eigen::Vector2d m = Eigen::Vector2d::Zero();
    const int n = g.points();
    double total = 0.0;
    for (long idx = 0; idx < g.size(); ++idx) {
        const int ix = g.dims() == 1 ? static_cast<int>(idx) : static_cast<int>(idx / n);
        const int iy = g.dims() == 1 ? 0 : static_cast<int>(idx % n);
        const double w = std::norm(psi.amplitudes()(idx));
        m.x() += w * g.coordinate(ix);
        if (g.dims() == 2) m.y() += w * g.coordinate(iy);
        total += w;
    }
    return m / total;
}

}  // namespace

TEST_CASE("hermite polynomial values")
{
    REQUIRE(hermite(0, 0.3) == 1.0);
    REQUIRE(hermite(0, -7.0) == 1.0);
    REQUIRE(hermite(2, 1.5) == Catch::Approx(7.0).epsilon(1e-15));
    REQUIRE(hermite(3, 0.5) == Catch::Approx(8 * 0.125 - 12 * 0.5).epsilon(1e-15));
    REQUIRE_THROWS_AS(hermite(-1, 0.0), std::invalid_argument);

    for (int n = 0; n <= 20; ++n) {
        for (double x = -5.0; x <= 5.0; x += 0.25) {
            const long double exact = hermite_explicit(n, x);
            const double scale = std::max(1.0L, std::abs(exact));
            REQUIRE(std::abs(hermite(n, x) - exact) / scale <= 1e-9);
        }
    }
}

TEST_CASE("oscillator eigenfunctions are normalized and orthogonal on the grid")
{
    const Grid g(1, 256, 8.0);
    const OscParams p(1.0, 1.0);
    const auto phi0 = sample_eigenfunction(g, 0, p, 1.0);
    REQUIRE(std::abs(grid_inner(g, phi0, phi0) - 1.0) <= 1e-6);
    for (int j = 0; j < g.points(); ++j) {
        const double x = g.coordinate(j);
        REQUIRE(std::abs(phi0[j] - std::pow(kPi, -0.25) * std::exp(-0.5 * x * x)) <= 1e-15);
    }
    REQUIRE(std::abs(grid_inner(g, sample_eigenfunction(g, 2, p, 1.0), sample_eigenfunction(g, 5, p, 1.0))) <= 1e-8);

    const OscParams heavy(2.0, 1.5);
    for (int n = 0; n <= 8; ++n) {
        const auto a = sample_eigenfunction(g, n, heavy, 0.7);
        REQUIRE(std::abs(grid_inner(g, a, a) - 1.0) <= 1e-6);
    }

    for (const double x : {0.1, 0.77, 2.5}) REQUIRE(eigenfunction(1, p, 1.0, -x) == -eigenfunction(1, p, 1.0, x));
}

TEST_CASE("the printed eigenfunction scaling is not normalized when m != 1")
{
    // alpha = (m^{3/2} w / hbar)^{1/2} with Gaussian exp(-x^2/2).
    const Grid g(1, 256, 8.0);
    const double m = 2.0;
    const double alpha = std::sqrt(std::pow(m, 1.5));
    std::vector<double> printed(g.points());
    for (int j = 0; j < g.points(); ++j) {
        const double x = g.coordinate(j);
        printed[j] = std::sqrt(alpha / std::sqrt(kPi)) * std::exp(-0.5 * x * x);
    }
    REQUIRE(std::abs(grid_inner(g, printed, printed) - 1.0) > 0.1);
}

TEST_CASE("energy levels")
{
    const OscParams p(1.3, 0.8);
    const double hbar = 0.9;
    REQUIRE(energy(EigenLabel(0, 0), p, hbar) == Catch::Approx(hbar * 0.8).epsilon(1e-15));
    const double k = 1.7;
    REQUIRE(energy(EigenLabel(1, 2, k), p, hbar) ==
            Catch::Approx(4 * hbar * 0.8 + hbar * hbar * k * k / (2 * 1.3)).epsilon(1e-15));
    for (int level = 0; level <= 6; ++level) {
        for (int n1 = 0; n1 <= level; ++n1) {
            REQUIRE(energy(EigenLabel(n1, level - n1, k), p, hbar) == energy(EigenLabel(0, level, k), p, hbar));
        }
    }
    REQUIRE_THROWS_AS(EigenLabel(-1, 0), std::invalid_argument);
}

TEST_CASE("grid expectation of H3 reproduces the spectrum")
{
    const Grid g(2, 128, 8.0);
    const OscParams p(1.0, 1.0);
    SpectralEngine engine(g);
    const GridHamiltonian h = GridHamiltonian::h3(p);
    for (const auto& [n1, n2] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{1, 2}}) {
        const WaveFunction psi = eigenstate_on_grid(g, n1, n2, p, 1.0);
        const double e = expectation(engine, h, psi, 0.0);
        REQUIRE(std::abs(e / energy(EigenLabel(n1, n2), p, 1.0) - 1.0) <= 1e-3);
        // Eigenstate: H psi - E psi vanishes on the grid.
        const Eigen::VectorXcd residual = apply_hamiltonian(engine, h, psi, 0.0) - e * psi.amplitudes();
        REQUIRE(residual.norm() * g.spacing() <= 1e-8);
    }
}

TEST_CASE("hermite_shift_expand examples")
{
    const auto c0 = hermite_shift_expand(0, 0.7);
    REQUIRE(c0.values.size() == 1);
    REQUIRE(c0.at(0) == 1.0);

    const double v = 0.4;
    const auto c1 = hermite_shift_expand(1, v);
    REQUIRE(c1.at(1) == 1.0);
    REQUIRE(c1.at(0) == 2 * v);

    const auto c2 = hermite_shift_expand(2, 1.0);
    REQUIRE(c2.at(2) == 1.0);
    REQUIRE(c2.at(1) == 4.0);
    REQUIRE(c2.at(0) == 4.0);
}

TEST_CASE("hermite_shift_expand is a polynomial identity")
{
    Sampler rng(41);
    for (int n = 0; n <= 10; ++n) {
        const double v = rng.uniform(-1.5, 1.5);
        const auto c = hermite_shift_expand(n, v);
        std::vector<double> us;
        double scale = 0.0;
        for (int i = 0; i < 50; ++i) {
            us.push_back(rng.uniform(-3, 3));
            scale = std::max(scale, std::abs(hermite(n, us.back() + v)));
        }
        for (const double u : us) {
            double sum = 0.0;
            for (const auto& [k, ck] : c.values) sum += ck * hermite(k, u);
            REQUIRE(std::abs(sum - hermite(n, u + v)) <= 1e-9 * std::max(scale, 1.0));
        }
    }

    // The binomial sum without the factor 2 misses already at n = 1.
    const double u = 0.3;
    const double v = 0.5;
    REQUIRE(std::abs(hermite(1, u) + v * hermite(0, u) - hermite(1, u + v)) > 0.4);
}

TEST_CASE("shifted eigenfunction expansion")
{
    const OscParams p(1.4, 0.9);
    const double hbar = 1.1;
    Sampler rng(42);
    for (int n = 0; n <= 8; ++n) {
        const double v = rng.uniform(-1, 1);
        const auto a = shifted_eigenfunction_coeffs(n, v, p, hbar);
        for (int i = 0; i < 20; ++i) {
            const double x = rng.uniform(-3, 3);
            double sum = 0.0;
            for (const auto& [k, ak] : a.values) sum += ak * eigenfunction(k, p, hbar, x);
            sum *= shifted_prefactor(x, v, p, hbar);
            REQUIRE(std::abs(sum - eigenfunction(n, p, hbar, x + v)) <= 1e-10);
        }
    }
}

TEST_CASE("gauss_hermite integrates polynomials against exp(-u^2)")
{
    const GaussHermiteRule rule = gauss_hermite(6);
    double m0 = 0.0;
    double m4 = 0.0;
    double m10 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = rule.nodes[i];
        m0 += rule.weights[i];
        m4 += rule.weights[i] * std::pow(u, 4);
        m10 += rule.weights[i] * std::pow(u, 10);
    }
    REQUIRE(std::abs(m0 - std::sqrt(kPi)) <= 1e-13);
    REQUIRE(std::abs(m4 - 0.75 * std::sqrt(kPi)) <= 1e-13);
    REQUIRE(std::abs(m10 - 945.0 / 32.0 * std::sqrt(kPi)) <= 1e-11);
}

TEST_CASE("rotate_product_expand examples")
{
    const OscParams p(1.0, 1.0);
    const auto id = rotate_product_expand(2, 1, 0.0, p, 1.0);
    for (const auto& [key, c] : id.values) REQUIRE(std::abs(c - (key == std::pair{2, 1} ? 1.0 : 0.0)) <= 1e-12);

    Sampler rng(43);
    for (int i = 0; i < 20; ++i) {
        const double theta = rng.uniform(-kPi, kPi);
        const auto c = rotate_product_expand(1, 0, theta, p, 1.0);
        // phi_1((R x)_1) = cos(theta) phi_1(x1) - sin(theta) phi_1(x2) for R counter-clockwise.
        REQUIRE(std::abs(c.at({1, 0}) - std::cos(theta)) <= 1e-10);
        REQUIRE(std::abs(c.at({0, 1}) + std::sin(theta)) <= 1e-10);
        REQUIRE(c.leakage <= 1e-10);
    }

    const auto quarter = rotate_product_expand(2, 0, 0.5 * kPi, p, 1.0);
    REQUIRE(std::abs(std::abs(quarter.at({0, 2})) - 1.0) <= 1e-12);
    REQUIRE(std::abs(quarter.at({2, 0})) <= 1e-12);
    REQUIRE(std::abs(quarter.at({1, 1})) <= 1e-12);

    REQUIRE_THROWS_AS(rotate_product_expand(4, 3, 0.7, p, 1.0, 2), std::runtime_error);
}

TEST_CASE("rotate_product_expand is orthogonal on every level")
{
    const OscParams p(1.0, 1.0);
    Sampler rng(44);
    for (int level = 0; level <= 6; ++level) {
        const double theta = rng.uniform(-kPi, kPi);
        Eigen::MatrixXd m(level + 1, level + 1);
        for (int k1 = 0; k1 <= level; ++k1) {
            const auto c = rotate_product_expand(k1, level - k1, theta, p, 1.0);
            for (int m1 = 0; m1 <= level; ++m1) m(k1, m1) = c.at({m1, level - m1});
        }
        REQUIRE((m.transpose() * m - Eigen::MatrixXd::Identity(level + 1, level + 1)).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("rotate_product_expand agrees with direct grid projection")
{
    const Grid g(2, 128, 8.0);
    const OscParams p(1.3, 0.8);
    const double hbar = 0.9;
    const double theta = 0.83;
    const int k1 = 2;
    const int k2 = 1;
    const auto c = rotate_product_expand(k1, k2, theta, p, hbar);
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    const WaveFunction rotated = WaveFunction::sample(g, hbar, [&](double x, double y) {
        return Complex(eigenfunction(k1, p, hbar, cs * x - sn * y) * eigenfunction(k2, p, hbar, sn * x + cs * y));
    });
    for (int m1 = 0; m1 <= 3; ++m1) {
        const WaveFunction target = eigenstate_on_grid(g, m1, 3 - m1, p, hbar);
        REQUIRE(std::abs(overlap(target, rotated).real() - c.at({m1, 3 - m1})) <= 1e-10);
    }
}

TEST_CASE("spectral shift is exact and unitary")
{
    const Grid g(2, 128, 10.0);
    SpectralEngine engine(g);
    const OscParams p(1.0, 1.0);
    const WaveFunction psi = coherent_state(g, p, 1.0, {0.5, -0.3}, {0.4, 0.1});
    const Eigen::Vector2d v(1.1, 0.7);
    const WaveFunction moved = spectral_shift(engine, psi, v);
    const WaveFunction expected = coherent_state(g, p, 1.0, {1.6, 0.4}, {0.4, 0.1});
    // Moving the envelope leaves the plane wave's phase reference behind: psi(x - v).
    const WaveFunction reference = WaveFunction::sample(g, 1.0, [&](double x, double y) {
        return std::polar(eigenfunction(0, p, 1.0, x - 1.6) * eigenfunction(0, p, 1.0, y - 0.4),
                          0.4 * (x - 1.1) + 0.1 * (y - 0.7));
    });
    REQUIRE(l2_distance(moved, reference) <= 1e-12);
    REQUIRE(std::abs(moved.norm() - psi.norm()) <= 1e-13);
    REQUIRE((mean_position(moved) - mean_position(expected)).cwiseAbs().maxCoeff() <= 1e-10);
    REQUIRE(spectral_shift(engine, psi, Eigen::Vector2d::Zero()).amplitudes() == psi.amplitudes());
    REQUIRE_THROWS_AS(spectral_shift(engine, psi, Eigen::Vector2d(8.0, 0.0)), GridSupportError);
}

TEST_CASE("spectral rotation")
{
    const Grid g(2, 256, 10.0);
    SpectralEngine engine(g);
    const OscParams p(1.0, 1.0);
    const WaveFunction round = eigenstate_on_grid(g, 0, 0, p, 1.0);
    REQUIRE(spectral_rotate(engine, round, 0.0).amplitudes() == round.amplitudes());
    REQUIRE(l2_distance(spectral_rotate(engine, round, 1.1), round) <= 1e-8);

    const Eigen::Vector2d c(2.0, -1.0);
    const WaveFunction offset = coherent_state(g, p, 1.0, c, {0.3, 0.2});
    for (const double theta : {0.4, -1.3, 2.5, -3.0, kPi}) {
        const WaveFunction turned = spectral_rotate(engine, offset, theta);
        // psi(R x) is centred at R^{-1} c and carries momentum R^{-1} p.
        const Eigen::Rotation2Dd inv(-theta);
        const WaveFunction expected = coherent_state(g, p, 1.0, inv * c, inv * Eigen::Vector2d(0.3, 0.2));
        REQUIRE(l2_distance(turned, expected) <= 1e-10);
        REQUIRE(std::abs(turned.norm() - offset.norm()) <= 1e-4);
    }
    const WaveFunction ab = spectral_rotate(engine, spectral_rotate(engine, offset, 0.7), 0.5);
    REQUIRE(l2_distance(ab, spectral_rotate(engine, offset, 1.2)) <= 1e-9);

    const WaveFunction far = coherent_state(g, p, 1.0, {8.0, 8.0}, {0.0, 0.0});
    REQUIRE_THROWS_AS(spectral_rotate(engine, far, 0.3), GridSupportError);
}

TEST_CASE("qt1 rotates by the Larmor angle")
{
    const Grid g(2, 128, 8.0);
    SpectralEngine engine(g);
    const OscParams p(1.0, 0.6);
    const WaveFunction phi = coherent_state(g, p, 1.0, {1.5, 0.0}, {0.0, 0.0});
    REQUIRE(unitary_qt1(engine, phi, 0.0, p).amplitudes() == phi.amplitudes());
    const double t = 1.7;
    const WaveFunction psi = unitary_qt1(engine, phi, t, p);
    const Eigen::Rotation2Dd inv(-0.6 * t);
    REQUIRE((mean_position(psi) - inv * Eigen::Vector2d(1.5, 0.0)).cwiseAbs().maxCoeff() <= 1e-9);
    // Negative charge turns the other way.
    const StaticField negative = StaticField::axial(1.2, Vec3::Zero(), -1.0, 1.0);
    const WaveFunction back = unitary_qt1(engine, phi, t, negative);
    REQUIRE((mean_position(back) - Eigen::Rotation2Dd(0.6 * t) * Eigen::Vector2d(1.5, 0.0)).cwiseAbs().maxCoeff() <=
            1e-9);
    REQUIRE_THROWS_AS(unitary_qt1(engine, WaveFunction::sample(Grid(1, 64, 8.0), 1.0, [](double, double) {
                                      return Complex(0.0);
                                  }),
                                  t, p),
                      std::invalid_argument);
}

TEST_CASE("qt2 shifts by the moving origin and adds the action to the ledger")
{
    const Grid g(2, 128, 8.0);
    SpectralEngine engine(g);
    const OscParams p(1.0, 0.9);
    const WaveFunction varphi = coherent_state(g, p, 1.0, {0.3, -0.2}, {0.1, 0.2});

    const CanonicalMap none = ct2(p, Drive::none(), 3.0);
    const WaveFunction same = unitary_qt2(engine, varphi, 2.0, none);
    REQUIRE(same.amplitudes() == varphi.amplitudes());
    REQUIRE(same.total_phase() == 0.0);

    const Drive drive = Drive::sinusoids({{Vec3(0.4, -0.3, 0.2), 0.5, 0.1}});
    const CanonicalMap shift = ct2(p, drive, 3.0);
    const double t = 2.4;
    const WaveFunction phi = unitary_qt2(engine, varphi, t, shift);
    const Vec6 o = shift.moving_origin(t);
    REQUIRE(std::abs(phi.norm() - varphi.norm()) <= 1e-12);
    REQUIRE((mean_position(phi) - mean_position(varphi) - Eigen::Vector2d(o(0), o(2))).cwiseAbs().maxCoeff() <= 1e-9);
    REQUIRE(phi.phase("action") == Catch::Approx((shift.phase_by_axis(t)(0) + shift.phase_by_axis(t)(1))).epsilon(1e-14));

    // (Q - Q_nh) qt2(varphi) = qt2(xi varphi), pointwise.
    const WaveFunction xi_varphi = WaveFunction::sample(g, 1.0, [&](double x, double y) {
        return x * varphi.amplitudes()(g.index(static_cast<int>(std::lround((x + 8.0) / g.spacing())),
                                                static_cast<int>(std::lround((y + 8.0) / g.spacing()))));
    });
    const Eigen::VectorXcd rhs = unitary_qt2(engine, xi_varphi, t, shift).amplitudes();
    Eigen::VectorXcd lhs = phi.amplitudes();
    for (int ix = 0; ix < g.points(); ++ix) {
        for (int iy = 0; iy < g.points(); ++iy) lhs(g.index(ix, iy)) *= g.coordinate(ix) - o(0);
    }
    REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("free Gaussian spreads by the analytic width law")
{
    const Grid g(1, 256, 16.0);
    const double sigma = 1.0;
    const double m = 1.0;
    const double hbar = 1.0;
    const WaveFunction psi0 = WaveFunction::sample(g, hbar, [&](double x, double) {
        return Complex(std::pow(2 * kPi * sigma * sigma, -0.25) * std::exp(-x * x / (4 * sigma * sigma)));
    });
    const double t = 2.0;
    const WaveFunction psi = split_step_evolve(psi0, GridHamiltonian::h3(OscParams(m, 0.0)), t, 1e-3);
    double x2 = 0.0;
    for (int j = 0; j < g.points(); ++j) x2 += std::norm(psi.amplitudes()(j)) * std::pow(g.coordinate(j), 2);
    x2 *= g.spacing();
    const double expected = sigma * sigma * (1.0 + std::pow(hbar * t / (2 * m * sigma * sigma), 2));
    REQUIRE(std::abs(x2 - expected) <= 1e-5);
    REQUIRE(std::abs(psi.norm() - psi0.norm()) <= 1e-12);
}

TEST_CASE("coherent state follows the classical orbit")
{
    const Grid g(1, 256, 10.0);
    const OscParams p(1.2, 0.9);
    const double q0 = 1.5;
    const double p0 = -0.4;
    const WaveFunction psi0 = coherent_state(g, p, 1.0, {q0, 0.0}, {p0, 0.0});
    SplitStepEvolver evolver(g, GridHamiltonian::h3(p), 1.0, 1e-3);
    WaveFunction psi = psi0;
    for (int k = 1; k <= 3; ++k) {
        psi = evolver.evolve(psi, 1.0, k - 1.0);
        const double t = k;
        const double expected = q0 * std::cos(0.9 * t) + p0 / (1.2 * 0.9) * std::sin(0.9 * t);
        REQUIRE(std::abs(mean_position(psi).x() - expected) <= 1e-5);
    }
}

TEST_CASE("eigenstates evolve by a pure phase")
{
    const Grid g(2, 128, 8.0);
    const OscParams p(1.0, 1.0);
    const WaveFunction psi0 = eigenstate_on_grid(g, 1, 2, p, 1.0);
    const double t = 1.5;
    const WaveFunction psi = split_step_evolve(psi0, GridHamiltonian::h3(p), t, 1e-3);
    const Complex ov = overlap(psi0, psi);
    REQUIRE(std::abs(std::abs(ov) - 1.0) <= 1e-6);
    REQUIRE(std::abs(std::arg(ov * std::polar(1.0, 4.0 * t))) <= 1e-5);
}

TEST_CASE("split-step input validation")
{
    const Grid g(1, 64, 8.0);
    const WaveFunction psi = eigenstate_on_grid(g, 0, 0, OscParams(1, 1), 1.0);
    REQUIRE_THROWS_AS(split_step_evolve(psi, GridHamiltonian::h3(OscParams(1, 1)), 1.0, 0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(split_step_evolve(psi, GridHamiltonian::h1_planar(StaticField::axial(1, Vec3::Zero())), 1.0, 1e-3),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(Grid(2, 24, 8.0), std::invalid_argument);
    REQUIRE_THROWS_AS(Grid(2, 8, 8.0), std::invalid_argument);
}

TEST_CASE("apply_hamiltonian is hermitian")
{
    const Grid g(2, 64, 8.0);
    SpectralEngine engine(g);
    const GridHamiltonian h = GridHamiltonian::h1_planar(StaticField::axial(1.3, Vec3(0.2, -0.1, 0), 1.0, 1.0));
    const OscParams p(1.0, 1.0);
    const WaveFunction a = coherent_state(g, p, 1.0, {0.5, 0.2}, {0.3, -0.1});
    const WaveFunction b = coherent_state(g, p, 1.0, {-0.4, 0.6}, {-0.2, 0.5});
    const Complex ab = a.amplitudes().dot(apply_hamiltonian(engine, h, b, 0.0));
    const Complex ba = b.amplitudes().dot(apply_hamiltonian(engine, h, a, 0.0));
    REQUIRE(std::abs(ab - std::conj(ba)) <= 1e-10 * std::abs(ab));
}

TEST_CASE("quantum pipeline links H3, H2 and H1 evolutions")
{
    const Grid g(2, 128, 8.0);
    SpectralEngine engine(g);
    const StaticField field = StaticField::axial(1.2, Vec3(0.3, -0.2, 0.1), 1.0, 1.0);
    const double t = 1.0;
    const double dt = 2e-3;
    const QuantumPipeline pipeline(field, t, 1.0);
    const OscParams osc = pipeline.oscillator();
    const WaveFunction start = coherent_state(g, osc, 1.0, {0.8, -0.5}, {0.3, 0.2});

    const WaveFunction via_h3 = unitary_qt2(engine, split_step_evolve(start, GridHamiltonian::h3(osc), t, dt), t,
                                            pipeline.shift);
    const WaveFunction via_h2 = split_step_evolve(start, GridHamiltonian::h2(osc, pipeline.larmor_drive()), t, dt);
    REQUIRE(l2_distance(via_h3, via_h2) <= 1e-4);

    const WaveFunction via_h1 = split_step_evolve(start, GridHamiltonian::h1_planar(field), t, dt);
    REQUIRE(l2_distance(unitary_qt1(engine, via_h2, t, field), via_h1) <= 1e-4);
}

TEST_CASE("transformed eigenstate without an electric field carries only the dynamical phase")
{
    const Grid g(2, 128, 10.0);
    SpectralEngine engine(g);
    const StaticField field = StaticField::axial(1.4, Vec3::Zero(), 1.0, 1.0);
    const QuantumPipeline pipeline(field, 5.0, 1.0);
    const EigenLabel label(1, 0, 0.6);
    const double t = 3.3;
    const TransformedEigenstate out = transformed_eigenstate(engine, label, t, pipeline, g);
    const double e_planar = pipeline.oscillator().omega() * 2.0;
    REQUIRE(out.planar.total_phase() == -e_planar * t);
    REQUIRE(out.planar.phase("action") == 0.0);
    REQUIRE(out.axial.wavenumber == 0.6);
    REQUIRE(out.axial.offset == 0.0);
    REQUIRE(out.axial.total_phase() == -0.36 * t / 2.0);

    // The profile is the eigenstate turned by the Larmor angle.
    const double angle = field.larmor_rate() * t;
    const OscParams osc = pipeline.oscillator();
    const WaveFunction expected = WaveFunction::sample(g, 1.0, [&](double x, double y) {
        const double rx = std::cos(angle) * x - std::sin(angle) * y;
        const double ry = std::sin(angle) * x + std::cos(angle) * y;
        return Complex(eigenfunction(1, osc, 1.0, rx) * eigenfunction(0, osc, 1.0, ry));
    });
    REQUIRE((out.planar.amplitudes() - expected.amplitudes()).cwiseAbs().maxCoeff() <= 1e-9);

    const TransformedEigenstate ground = transformed_eigenstate(engine, EigenLabel(0, 0), t, pipeline, g);
    REQUIRE(l2_distance(ground.planar.with_phase("undo", -ground.planar.total_phase()),
                        eigenstate_on_grid(g, 0, 0, osc, 1.0)) <= 1e-8);
}

TEST_CASE("transformed eigenstate solves the planar H1 Schrodinger equation")
{
    const Grid g(2, 128, 8.0);
    SpectralEngine engine(g);
    const StaticField field = StaticField::axial(1.2, Vec3(0.25, -0.15, 0.1), 1.0, 1.0);
    const QuantumPipeline pipeline(field, 4.0, 1.0);
    const GridHamiltonian h1 = GridHamiltonian::h1_planar(field);
    const EigenLabel label(1, 1, 0.3);
    const double t = 2.0;
    const double h = 1e-3;
    auto state = [&](double s) { return transformed_eigenstate(engine, label, s, pipeline, g).planar; };
    const WaveFunction now = state(t);
    const Eigen::VectorXcd dpsi = (state(t + h).resolved() - state(t - h).resolved()) / (2 * h);
    const Eigen::VectorXcd h_psi = apply_hamiltonian(engine, h1, WaveFunction(g, now.resolved(), 1.0), t);
    const Eigen::VectorXcd residual = Complex(0.0, 1.0) * dpsi - h_psi;
    REQUIRE(residual.norm() / now.resolved().norm() <= 5e-3);

    // Axial plane wave picks up the drift momentum and offset of the moving origin.
    const TransformedEigenstate out = transformed_eigenstate(engine, label, t, pipeline, g);
    const Vec6 o = pipeline.shift.moving_origin(t);
    REQUIRE(out.axial.wavenumber == Catch::Approx(0.3 + o(5)).epsilon(1e-14));
    REQUIRE(out.axial.offset == o(4));
    REQUIRE(std::abs(o(5) - 0.1 * t) <= 1e-12);
}
