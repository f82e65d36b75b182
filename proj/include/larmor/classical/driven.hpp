#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "larmor/classical/drive.hpp"
#include "larmor/classical/phase_state.hpp"
#include "larmor/core/matrices.hpp"
#include "larmor/core/quadrature.hpp"

namespace larmor {

/// Solution of the driven oscillator split into the undriven orbit U(t) z0 and
/// the particular solution with zero initial data.
struct DrivenSolution {
    PhaseState homogeneous;
    PhaseState particular;

    PhaseState total() const { return PhaseState(homogeneous.vector() + particular.vector()); }
};

/// Force vector K(s) in the interleaved layout: the force enters the momentum slots.
inline Vec6 force_vector(const Vec3& k) {
    Vec6 v = Vec6::Zero();
    v(1) = k.x();
    v(3) = k.y();
    v(5) = k.z();
    return v;
}

/// Z(t) = U(t) z0 + int_0^t U(t - s) K(s) ds with composite Simpson quadrature.
///
/// Two degrees of freedom layouts are accepted: one (axis-1 drive component) or three.
inline DrivenSolution solve_driven(const OscParams& params, const Drive& drive, const PhaseState& z0,
                                   double t, const QuadratureSpec& quad = {}) {
    require(std::isfinite(t) && t >= 0.0, "solve_driven: time must be non-negative");
    drive.require_covers(0.0, t);
    const int panels = quad.panels_for(t);
    if (z0.dof() == 1) {
        const Eigen::Vector2d zh = propagator_2x2(params, t) * Eigen::Vector2d(z0.vector());
        Eigen::Vector2d znh = Eigen::Vector2d::Zero();
        if (t > 0.0) {
            znh = simpson(
                [&](double s) -> Eigen::Vector2d {
                    return propagator_2x2(params, t - s) * Eigen::Vector2d(0.0, drive(s).x());
                },
                0.0, t, panels);
        }
        return {PhaseState(Eigen::VectorXd(zh)), PhaseState(Eigen::VectorXd(znh))};
    }
    require_dof(z0, 3, "solve_driven");
    const Vec6 zh = block_propagator(params, t) * z0.as_vec6();
    Vec6 znh = Vec6::Zero();
    if (t > 0.0) {
        znh = simpson(
            [&](double s) -> Vec6 { return block_propagator(params, t - s) * force_vector(drive(s)); }, 0.0,
            t, panels);
    }
    return {PhaseState(zh), PhaseState(znh)};
}

/// Per-axis Lagrangian P^2/2m - m w_i^2 Q^2 / 2 + Q k_i of the driven oscillator
/// (axial frequency zero) evaluated along a phase-space point z.
inline Vec3 lagrangian_by_axis(const OscParams& params, const Vec6& z, const Vec3& force) {
    const double m = params.mass();
    const double w2 = params.omega() * params.omega();
    Vec3 l;
    for (int i = 0; i < 3; ++i) {
        const double q = z(2 * i);
        const double p = z(2 * i + 1);
        const double wi2 = (i < 2) ? w2 : 0.0;
        l(i) = p * p / (2.0 * m) - 0.5 * m * wi2 * q * q + q * force(i);
    }
    return l;
}

/// Tabulated particular solution Z_nh(t) and its action A(t) on [0, horizon].
///
/// Uses Z_nh(t) = U(t) int_0^t U(-s) K(s) ds, so one cumulative quadrature pass
/// serves every query time. Queries between nodes integrate the remainder panel.
class MovingOrigin {
public:
    MovingOrigin(OscParams params, Drive drive, double horizon, const QuadratureSpec& quad = {})
        : params_(params), drive_(std::move(drive)), horizon_(horizon) {
        require(std::isfinite(horizon) && horizon > 0.0, "MovingOrigin: horizon must be positive");
        drive_.require_covers(0.0, horizon_);
        nodes_ = quad.panels_for(horizon_);
        h_ = horizon_ / nodes_;

        integrand_.resize(nodes_ + 1);
        for (int j = 0; j <= nodes_; ++j) integrand_[j] = integrand(j * h_);
        cumulative_ = cumulate(integrand_);

        lagrangian_.resize(nodes_ + 1);
        for (int j = 0; j <= nodes_; ++j) {
            const double s = j * h_;
            lagrangian_[j] = lagrangian_by_axis(params_, block_propagator(params_, s) * cumulative_[j], drive_(s));
        }
        action_ = cumulate(lagrangian_);
    }

    double horizon() const { return horizon_; }
    const OscParams& params() const { return params_; }
    const Drive& drive() const { return drive_; }

    /// Z_nh(t), interleaved layout. P_nh = m dQ_nh/dt.
    Vec6 state(double t) const {
        const auto [j, r] = locate(t);
        return block_propagator(params_, t) * (cumulative_[j] + remainder_integral(j, r));
    }

    Vec3 action_by_axis(double t) const {
        const auto [j, r] = locate(t);
        if (r == 0.0) return action_[j];
        const double s = j * h_;
        const Vec3 mid = lagrangian_at(s + 0.5 * r);
        const Vec3 end = lagrangian_at(t);
        return action_[j] + (r / 6.0) * (lagrangian_[j] + 4.0 * mid + end);
    }

    double action(double t) const { return action_by_axis(t).sum(); }

    Vec3 lagrangian_at(double t) const { return lagrangian_by_axis(params_, state(t), drive_(t)); }

private:
    Vec6 integrand(double s) const { return block_propagator(params_, -s) * force_vector(drive_(s)); }

    std::pair<int, double> locate(double t) const {
        if (!(t >= 0.0) || t > horizon_ * (1.0 + 1e-12)) {
            throw std::out_of_range("MovingOrigin: time " + std::to_string(t) + " outside [0, " +
                                    std::to_string(horizon_) + "]");
        }
        int j = static_cast<int>(std::floor(t / h_));
        j = std::clamp(j, 0, nodes_);
        return {j, t - j * h_};
    }

    Vec6 remainder_integral(int j, double r) const {
        if (r == 0.0) return Vec6::Zero();
        const double s = j * h_;
        return (r / 6.0) * (integrand_[j] + 4.0 * integrand(s + 0.5 * r) + integrand(s + r));
    }

    template <typename V>
    std::vector<V> cumulate(const std::vector<V>& y) const {
        const int n = static_cast<int>(y.size()) - 1;
        std::vector<V> c(y.size());
        c[0] = V::Zero();
        for (int j = 1; j <= n; ++j) {
            if (j % 2 == 0) {
                c[j] = c[j - 2] + (h_ / 3.0) * (y[j - 2] + 4.0 * y[j - 1] + y[j]);
            } else if (j + 1 <= n) {
                c[j] = c[j - 1] + (h_ / 12.0) * (5.0 * y[j - 1] + 8.0 * y[j] - y[j + 1]);
            } else {
                c[j] = c[j - 1] + (h_ / 12.0) * (-y[j - 2] + 8.0 * y[j - 1] + 5.0 * y[j]);
            }
        }
        return c;
    }

    OscParams params_;
    Drive drive_;
    double horizon_;
    int nodes_ = 0;
    double h_ = 0.0;
    std::vector<Vec6> integrand_;
    std::vector<Vec6> cumulative_;
    std::vector<Vec3> lagrangian_;
    std::vector<Vec3> action_;
};

}  // namespace larmor
