#pragma once

#include <cmath>

#include "larmor/core/types.hpp"

namespace larmor {

/// Cross-product matrix of b: cross_matrix(b) * x == b.cross(x).
inline Mat3 cross_matrix(const Vec3& b) {
    Mat3 m;
    m << 0.0, -b.z(), b.y(),
         b.z(), 0.0, -b.x(),
        -b.y(), b.x(), 0.0;
    return m;
}

/// Proper rotation by `angle` about the z axis (counter-clockwise seen from +z).
inline Mat3 rotation_about_z(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Mat3 r;
    r << c, -s, 0.0,
         s, c, 0.0,
         0.0, 0.0, 1.0;
    return r;
}

/// exp(t * W) for an antisymmetric generator W (Rodrigues' formula).
inline Mat3 antisymmetric_exp(const Mat3& generator, double t) {
    const Vec3 axis(generator(2, 1), generator(0, 2), generator(1, 0));
    const double speed = axis.norm();
    const Mat3 w = t * generator;
    if (speed * std::abs(t) < 1e-300) return Mat3::Identity() + w;
    const double angle = speed * t;
    const Mat3 unit = generator / speed;
    return Mat3::Identity() + std::sin(angle) * unit + (1.0 - std::cos(angle)) * unit * unit;
}

/// Phase-space propagator of one oscillator degree of freedom, acting on (Q, P).
///
/// Solves dQ/dt = P/m, dP/dt = -m omega^2 Q. For omega == 0 the analytic free
/// block [[1, t/m], [0, 1]] is returned instead of evaluating sin(wt)/w.
inline Mat2 propagator_2x2(const OscParams& params, double t) {
    const double m = params.mass();
    const double w = params.omega();
    Mat2 u;
    if (w == 0.0) {
        u << 1.0, t / m,
             0.0, 1.0;
        return u;
    }
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    u << c, s / (m * w),
         -m * w * s, c;
    return u;
}

/// Generator of propagator_2x2: d/dt (Q, P) = G (Q, P).
inline Mat2 flow_generator_2x2(const OscParams& params) {
    const double m = params.mass();
    const double w = params.omega();
    Mat2 g;
    g << 0.0, 1.0 / m,
         -m * w * w, 0.0;
    return g;
}

/// Symmetric matrix of the oscillator energy: H = 1/2 <Z, E Z> with E = diag(m w^2, 1/m).
///
/// The flow generator factors as G = J E with J = [[0, 1], [-1, 0]], so the
/// congruence U^T E U = E is the matrix form of energy conservation.
inline Mat2 energy_matrix_2x2(const OscParams& params) {
    const double m = params.mass();
    const double w = params.omega();
    Mat2 e;
    e << m * w * w, 0.0,
         0.0, 1.0 / m;
    return e;
}

/// 6x6 propagator on the interleaved layout (Q1, P1, Q2, P2, Q3, P3): oscillator
/// blocks on the planar degrees of freedom and a free block on the axial one.
inline Mat6 block_propagator(const OscParams& params, double t) {
    Mat6 u = Mat6::Zero();
    const Mat2 planar = propagator_2x2(params, t);
    const Mat2 axial = propagator_2x2(OscParams(params.mass(), 0.0), t);
    u.block<2, 2>(0, 0) = planar;
    u.block<2, 2>(2, 2) = planar;
    u.block<2, 2>(4, 4) = axial;
    return u;
}

/// Standard symplectic form for `dof` degrees of freedom in the interleaved layout.
inline Eigen::MatrixXd symplectic_form(int dof) {
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2 * dof, 2 * dof);
    for (int i = 0; i < dof; ++i) {
        sigma(2 * i, 2 * i + 1) = 1.0;
        sigma(2 * i + 1, 2 * i) = -1.0;
    }
    return sigma;
}

/// max |J^T Sigma J - Sigma| over all entries.
inline double symplectic_defect(const Eigen::MatrixXd& jacobian) {
    const Eigen::MatrixXd sigma = symplectic_form(static_cast<int>(jacobian.rows() / 2));
    return (jacobian.transpose() * sigma * jacobian - sigma).cwiseAbs().maxCoeff();
}

}  // namespace larmor
