#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "larmor/core/matrices.hpp"
#include "larmor/quantum/hermite.hpp"

namespace larmor {

/// Sparse coefficient table keyed by target label.
template <typename Key>
struct ExpansionCoeffs {
    std::map<Key, double> values;
    /// Largest coefficient found outside the admissible support (projection expansions only).
    double leakage = 0.0;

    double at(const Key& key) const {
        const auto it = values.find(key);
        return it == values.end() ? 0.0 : it->second;
    }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& [k, c] : values) s += c * c;
        return s;
    }
};

inline double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

/// c_k with H_n(u + v) = sum_k c_k H_k(u): c_k = C(n, k) (2v)^{n-k}.
inline ExpansionCoeffs<int> hermite_shift_expand(int n, double v) {
    require(n >= 0, "hermite_shift_expand: degree must be non-negative");
    ExpansionCoeffs<int> out;
    for (int k = 0; k <= n; ++k) out.values[k] = binomial(n, k) * std::pow(2.0 * v, n - k);
    return out;
}

/// Coefficients a_k of the shifted eigenfunction
///   phi_n(x + v) = shifted_prefactor(x, v) * sum_k a_k phi_k(x),
/// a_k = sqrt(2^k k! / (2^n n!)) C(n, k) (2 alpha v)^{n-k}.
inline ExpansionCoeffs<int> shifted_eigenfunction_coeffs(int n, double v, const OscParams& params, double hbar) {
    const double alpha = oscillator_alpha(params, hbar);
    ExpansionCoeffs<int> out = hermite_shift_expand(n, alpha * v);
    for (auto& [k, c] : out.values) {
        // 2^k k! / (2^n n!) = 1 / prod_{j=k+1}^{n} 2j
        double ratio = 1.0;
        for (int j = k + 1; j <= n; ++j) ratio /= 2.0 * j;
        c *= std::sqrt(ratio);
    }
    return out;
}

/// exp(-alpha^2 (x v + v^2 / 2)), the Gaussian mismatch left over by the shift.
inline double shifted_prefactor(double x, double v, const OscParams& params, double hbar) {
    const double alpha = oscillator_alpha(params, hbar);
    return std::exp(-alpha * alpha * (x * v + 0.5 * v * v));
}

struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Hermite rule for weight exp(-u^2) by Golub-Welsch.
inline GaussHermiteRule gauss_hermite(int order) {
    require(order >= 1, "gauss_hermite: order must be positive");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(std::max(order - 1, 0));
    for (int k = 1; k < order; ++k) sub(k - 1) = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    GaussHermiteRule rule;
    for (int i = 0; i < order; ++i) {
        rule.nodes.push_back(solver.eigenvalues()(i));
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights.push_back(std::sqrt(kPi) * v0 * v0);
    }
    return rule;
}

/// Expansion of the rotated product
///   phi_k1((R(theta) x)_1) phi_k2((R(theta) x)_2) = sum c_{m1,m2} phi_m1(x_1) phi_m2(x_2)
/// by Gauss-Hermite projection in the scaled variable u = alpha x.
///
/// Only m1 + m2 = k1 + k2 is kept. Coefficients of the neighbouring levels are
/// computed as well and their largest magnitude is reported as `leakage`; more than
/// 1e-6 of leakage or of norm defect means the quadrature order is too small.
/// The result does not depend on m, w or hbar, which only set the length scale.
/// Quadrature order 0 selects k1 + k2 + 8.
inline ExpansionCoeffs<std::pair<int, int>> rotate_product_expand(int k1, int k2, double theta,
                                                                  const OscParams& params, double hbar,
                                                                  int order = 0) {
    require(k1 >= 0 && k2 >= 0, "rotate_product_expand: levels must be non-negative");
    oscillator_alpha(params, hbar);
    const int level = k1 + k2;
    const int probe = level + 2;
    if (order == 0) order = level + 8;
    const GaussHermiteRule rule = gauss_hermite(order);
    const double c = std::cos(theta);
    const double s = std::sin(theta);

    std::vector<std::vector<double>> polys;
    for (const double u : rule.nodes) polys.push_back(hermite_function_polys(probe, u));

    // The Gaussians of the four factors combine to exp(-|u|^2), the rule's weight.
    Eigen::MatrixXd c_table = Eigen::MatrixXd::Zero(probe + 1, probe + 1);
    for (int i = 0; i < order; ++i) {
        for (int j = 0; j < order; ++j) {
            const double u1 = rule.nodes[i];
            const double u2 = rule.nodes[j];
            const double r1 = c * u1 - s * u2;
            const double r2 = s * u1 + c * u2;
            const double source = hermite_function_polys(k1, r1)[k1] * hermite_function_polys(k2, r2)[k2];
            const double w = rule.weights[i] * rule.weights[j] * source;
            for (int m1 = 0; m1 <= probe; ++m1) {
                for (int m2 = 0; m1 + m2 <= probe; ++m2) c_table(m1, m2) += w * polys[i][m1] * polys[j][m2];
            }
        }
    }

    ExpansionCoeffs<std::pair<int, int>> out;
    for (int m1 = 0; m1 <= probe; ++m1) {
        for (int m2 = 0; m1 + m2 <= probe; ++m2) {
            if (m1 + m2 == level) {
                out.values[{m1, m2}] = c_table(m1, m2);
            } else {
                out.leakage = std::max(out.leakage, std::abs(c_table(m1, m2)));
            }
        }
    }
    const double defect = std::abs(out.norm_squared() - 1.0);
    if (out.leakage > 1e-6 || defect > 1e-6) {
        throw std::runtime_error("rotate_product_expand: quadrature order " + std::to_string(order) +
                                 " too small (leakage " + std::to_string(out.leakage) + ", norm defect " +
                                 std::to_string(defect) + ")");
    }
    return out;
}

}  // namespace larmor
