#pragma once

#include <memory>

#include "larmor/classical/canonical_map.hpp"
#include "larmor/classical/driven.hpp"
#include "larmor/classical/hamiltonians.hpp"

namespace larmor {

namespace detail {

inline PhaseState rotate_planar(const PhaseState& z, double angle) {
    const Mat3 r = rotation_about_z(angle);
    if (z.dof() == 1) return z;
    return PhaseState::from_qp(r * z.position(), r * z.momentum());
}

}  // namespace detail

/// Rotation into the Larmor frame, generated by F(x, P, t) = <R(theta t) xbar, Pbar> + x3 P3
/// with theta the signed Larmor rate qB3 / 2mc:
///   Qbar = R(theta t) xbar, Pbar = R(theta t) pbar, Q3 = x3, P3 = p3.
/// Pulls H1 back to H2 with oscillator field.oscillator() and drive ct1_drive(field).
/// The generating function carries no pure time phase.
inline CanonicalMap ct1(const StaticField& field) {
    if (!field.is_axial()) throw std::invalid_argument("ct1: magnetic field must be along z");
    const double rate = field.larmor_rate();
    CanonicalMap map;
    map.forward = [rate](double t, const PhaseState& z) {
        require_dof(z, 3, "ct1");
        return detail::rotate_planar(z, rate * t);
    };
    map.inverse = [rate](double t, const PhaseState& z) {
        require_dof(z, 3, "ct1");
        return detail::rotate_planar(z, -rate * t);
    };
    return map;
}

/// Drive k(t) = q R(theta t) E felt in the Larmor frame.
inline Drive ct1_drive(const StaticField& field) {
    return rotating_force(field.charge(), field.electric(), field.larmor_rate());
}

/// dF/dt of the ct1 generating function at fixed (x, P): theta <G R xbar, Pbar>.
inline double ct1_time_derivative(const StaticField& field, double t, const Vec3& x, const Vec3& big_p) {
    const double rate = field.larmor_rate();
    const Mat3 g = cross_matrix(Vec3(0.0, 0.0, 1.0));
    return rate * (g * rotation_about_z(rate * t) * x).dot(big_p);
}

/// Shift to the moving origin of the driven oscillator, generated by
/// F(Q, eta, t) = <Q - Q_nh(t), eta + m dQ_nh/dt> + A(t):
///   xi = Q - Q_nh(t), eta = P - P_nh(t), A(t) = int_0^t L(Q_nh, dQ_nh/ds) ds.
/// Pulls H2 back to H3. Valid on [0, horizon].
inline CanonicalMap ct2(const OscParams& params, const Drive& drive, double horizon,
                        const QuadratureSpec& quad = {}) {
    auto origin = std::make_shared<const MovingOrigin>(params, drive, horizon, quad);
    auto shift = [origin](double t, const PhaseState& z, double sign) {
        const Vec6 o = origin->state(t);
        if (z.dof() == 1) {
            return PhaseState(Eigen::VectorXd(z.vector() + sign * o.head<2>()));
        }
        require_dof(z, 3, "ct2");
        return PhaseState(Vec6(z.as_vec6() + sign * o));
    };
    CanonicalMap map;
    map.forward = [shift](double t, const PhaseState& z) { return shift(t, z, -1.0); };
    map.inverse = [shift](double t, const PhaseState& z) { return shift(t, z, 1.0); };
    map.phase_by_axis = [origin](double t) { return origin->action_by_axis(t); };
    map.moving_origin = [origin](double t) { return origin->state(t); };
    return map;
}

/// The generating-phase ODE residual dA/dt - m/2 |dQ_nh|^2 + m w^2/2 |Qbar_nh|^2 - <Q_nh, k(t)>,
/// using finite differences of A. Zero up to quadrature and differencing error.
inline double action_ode_residual(const CanonicalMap& map, const OscParams& params, const Drive& drive,
                                  double t, double dt = 1e-4) {
    const double derivative = (map.phase(t + dt) - map.phase(t - dt)) / (2.0 * dt);
    const Vec6 o = map.moving_origin(t);
    const double m = params.mass();
    const double w2 = params.omega() * params.omega();
    const Vec3 q(o(0), o(2), o(4));
    const Vec3 qdot = Vec3(o(1), o(3), o(5)) / m;
    return derivative - 0.5 * m * qdot.squaredNorm() + 0.5 * m * w2 * (q.x() * q.x() + q.y() * q.y()) -
           q.dot(drive(t));
}

}  // namespace larmor
