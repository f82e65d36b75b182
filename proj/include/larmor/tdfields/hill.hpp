#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "larmor/core/matrices.hpp"

namespace larmor {

/// x'' + w^2(t) x = k(t), with w^2 periodic of period T.
struct HillSystem {
    std::function<double(double)> omega_sq;
    double period = 0.0;
    /// Optional force per unit mass; the monodromy ignores it.
    std::function<double(double)> drive;

    HillSystem(std::function<double(double)> w2, double t_period, std::function<double(double)> k = {})
        : omega_sq(std::move(w2)), period(t_period), drive(std::move(k)) {
        require(static_cast<bool>(omega_sq), "HillSystem: omega_sq is required");
        require(std::isfinite(period) && period > 0.0, "HillSystem: period must be positive");
    }

    static HillSystem constant(double w2, double t_period) {
        return HillSystem([w2](double) { return w2; }, t_period);
    }

    /// w^2(t) = a + 2 q cos(2t), period pi.
    static HillSystem mathieu(double a, double q) {
        return HillSystem([a, q](double t) { return a + 2.0 * q * std::cos(2.0 * t); }, kPi);
    }
};

enum class Stability { Stable, Unstable, Marginal };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        default: return "marginal";
    }
}

struct MonodromyReport {
    Mat2 monodromy = Mat2::Identity();
    double trace = 2.0;
    double determinant = 1.0;
    Stability classification = Stability::Marginal;
    /// log(eigenvalue) / T for both Floquet multipliers.
    std::complex<double> floquet_exponents[2] = {{0.0, 0.0}, {0.0, 0.0}};
    bool blew_up = false;
    double blow_up_time = 0.0;
};

inline Stability classify_trace(double trace, double marginal_tolerance) {
    const double margin = std::abs(trace) - 2.0;
    if (std::abs(margin) <= marginal_tolerance) return Stability::Marginal;
    return margin < 0.0 ? Stability::Stable : Stability::Unstable;
}

/// Number of RK4 steps when dt must divide the period.
inline long steps_for_period(double period, double dt) {
    require(std::isfinite(dt) && dt > 0.0, "hill_monodromy: dt must be positive");
    const double ratio = period / dt;
    const long steps = std::llround(ratio);
    require(steps >= 1 && std::abs(ratio - steps) <= 1e-9 * std::max(1.0, ratio),
            "hill_monodromy: dt must divide the period");
    return steps;
}

/// One-period fundamental matrix of x' = v, v' = -w^2(t) x by RK4 on both columns.
///
/// Non-finite growth is reported as unstable with the blow-up time.
inline MonodromyReport hill_monodromy(const HillSystem& sys, double dt, double marginal_tolerance = 1e-8) {
    const long steps = steps_for_period(sys.period, dt);
    const double h = sys.period / static_cast<double>(steps);
    Mat2 y = Mat2::Identity();
    auto f = [&](double t, const Mat2& m) {
        Mat2 g;
        g << 0.0, 1.0, -sys.omega_sq(t), 0.0;
        return Mat2(g * m);
    };
    MonodromyReport r;
    for (long s = 0; s < steps; ++s) {
        const double t = s * h;
        const Mat2 k1 = f(t, y);
        const Mat2 k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
        const Mat2 k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
        const Mat2 k4 = f(t + h, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!y.allFinite()) {
            r.blew_up = true;
            r.blow_up_time = t + h;
            r.classification = Stability::Unstable;
            r.trace = std::numeric_limits<double>::infinity();
            r.determinant = std::numeric_limits<double>::quiet_NaN();
            r.monodromy = y;
            return r;
        }
    }
    r.monodromy = y;
    r.trace = y.trace();
    r.determinant = y.determinant();
    r.classification = classify_trace(r.trace, marginal_tolerance);
    // Multipliers solve l^2 - tr l + det = 0.
    const std::complex<double> disc = std::sqrt(std::complex<double>(r.trace * r.trace - 4.0 * r.determinant));
    const std::complex<double> l1 = 0.5 * (r.trace + disc);
    const std::complex<double> l2 = 0.5 * (r.trace - disc);
    r.floquet_exponents[0] = std::log(l1) / sys.period;
    r.floquet_exponents[1] = std::log(l2) / sys.period;
    return r;
}

/// hill_monodromy with dt = T / steps.
inline MonodromyReport hill_monodromy_steps(const HillSystem& sys, long steps, double marginal_tolerance = 1e-8) {
    require(steps >= 1, "hill_monodromy: need at least one step");
    return hill_monodromy(sys, sys.period / static_cast<double>(steps), marginal_tolerance);
}

/// Monodromy as a product of exact propagators with w^2 frozen at each piece's midpoint.
/// Second order in T / pieces; an integrator independent of RK4 for cross-checks.
inline Mat2 piecewise_monodromy(const HillSystem& sys, long pieces) {
    require(pieces >= 1, "piecewise_monodromy: need at least one piece");
    const double h = sys.period / static_cast<double>(pieces);
    Mat2 y = Mat2::Identity();
    for (long i = 0; i < pieces; ++i) {
        const double w2 = sys.omega_sq((static_cast<double>(i) + 0.5) * h);
        Mat2 u;
        if (w2 > 0.0) {
            const double w = std::sqrt(w2);
            u << std::cos(w * h), std::sin(w * h) / w, -w * std::sin(w * h), std::cos(w * h);
        } else if (w2 < 0.0) {
            const double g = std::sqrt(-w2);
            u << std::cosh(g * h), std::sinh(g * h) / g, g * std::sinh(g * h), std::cosh(g * h);
        } else {
            u << 1.0, h, 0.0, 1.0;
        }
        y = u * y;
    }
    return y;
}

/// Bisection for a sign change of f on [lo, hi]; stops when hi - lo <= tol.
inline double bisect_sign_change(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double f_lo = f(lo);
    const double f_hi = f(hi);
    require(f_lo * f_hi < 0.0, "locate_stability_boundary: bracket ends have the same stability");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Bisection on the sign of |trace| - 2 for a one-parameter family, starting from a
/// bracket [lo, hi] whose ends have opposite stability.
inline double locate_stability_boundary(const std::function<HillSystem(double)>& family, double lo, double hi,
                                        double tol, long steps = 4096) {
    return bisect_sign_change(
        [&](double p) { return std::abs(hill_monodromy_steps(family(p), steps).trace) - 2.0; }, lo, hi, tol);
}

/// Same boundary located with piecewise_monodromy.
inline double locate_stability_boundary_piecewise(const std::function<HillSystem(double)>& family, double lo,
                                                  double hi, double tol, long pieces = 4000) {
    return bisect_sign_change(
        [&](double p) { return std::abs(piecewise_monodromy(family(p), pieces).trace()) - 2.0; }, lo, hi, tol);
}

struct StabilityRow {
    double param1 = 0.0;
    double param2 = 0.0;
    double trace = 0.0;
    double determinant = 1.0;
    Stability classification = Stability::Marginal;
};

/// Classification over a parameter grid, rows in (param1, param2) order.
/// Rows are computed by `threads` workers; the output order does not depend on the thread count.
inline std::vector<StabilityRow> stability_map(const std::function<HillSystem(double, double)>& family,
                                               const std::vector<double>& param1, const std::vector<double>& param2,
                                               long steps = 4096, int threads = 1,
                                               double marginal_tolerance = 1e-8) {
    require(threads >= 1, "stability_map: threads must be positive");
    std::vector<StabilityRow> rows(param1.size() * param2.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            const double p1 = param1[i / param2.size()];
            const double p2 = param2[i % param2.size()];
            const MonodromyReport r = hill_monodromy_steps(family(p1, p2), steps, marginal_tolerance);
            rows[i] = {p1, p2, r.trace, r.determinant, r.classification};
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

/// Linear periodic system x'' = -K(t) x / m + k(t) / m, K symmetric, in phase-space form.
struct VectorHillSystem {
    double mass = 1.0;
    double period = 0.0;
    std::function<Mat3(double)> stiffness;
    std::function<Vec3(double)> drive = [](double) { return Vec3::Zero(); };

    /// Generator A(t) of dz/dt = A z on the interleaved layout (x1, p1, x2, p2, x3, p3).
    Mat6 generator(double t) const {
        const Mat3 k = stiffness(t);
        Mat6 a = Mat6::Zero();
        for (int i = 0; i < 3; ++i) {
            a(2 * i, 2 * i + 1) = 1.0 / mass;
            for (int j = 0; j < 3; ++j) a(2 * i + 1, 2 * j) = -k(i, j);
        }
        return a;
    }

    /// Diagonal projection w^2(t) = <n, K(t) n> / m along a unit direction. Exact as a
    /// decoupled mode only when n stays an eigenvector of K(t).
    HillSystem mode(const Vec3& direction) const {
        const Vec3 n = direction.normalized();
        const auto k = stiffness;
        const double m = mass;
        return HillSystem([k, n, m](double t) { return n.dot(k(t) * n) / m; }, period);
    }
};

/// One-period 6x6 fundamental matrix by RK4, interleaved layout.
inline Mat6 vector_monodromy(const VectorHillSystem& sys, double dt) {
    require(static_cast<bool>(sys.stiffness), "vector_monodromy: stiffness is required");
    const long steps = steps_for_period(sys.period, dt);
    const double h = sys.period / static_cast<double>(steps);
    Mat6 y = Mat6::Identity();
    for (long s = 0; s < steps; ++s) {
        const double t = s * h;
        const Mat6 k1 = sys.generator(t) * y;
        const Mat6 k2 = sys.generator(t + 0.5 * h) * (y + 0.5 * h * k1);
        const Mat6 k3 = sys.generator(t + 0.5 * h) * (y + 0.5 * h * k2);
        const Mat6 k4 = sys.generator(t + h) * (y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

}  // namespace larmor
