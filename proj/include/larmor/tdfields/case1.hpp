#pragma once

#include "larmor/classical/canonical_map.hpp"
#include "larmor/classical/oracle.hpp"
#include "larmor/core/quadrature.hpp"
#include "larmor/tdfields/fields.hpp"
#include "larmor/tdfields/hill.hpp"

namespace larmor {

/// A(t) = int_0^t q B3(s) / mc ds by composite Simpson.
inline double case1_angle(const std::function<double(double)>& b3, double charge, double mass, double t,
                          const QuadratureSpec& quad = {}) {
    require(mass > 0.0, "case1: mass must be positive");
    if (t == 0.0) return 0.0;
    const double scale = charge / (mass * kSpeedOfLight);
    const double integral = simpson([&](double s) { return b3(s); }, 0.0, std::abs(t), quad.panels_for(std::abs(t)));
    return scale * (t < 0.0 ? -integral : integral);
}

/// R(t) = rotation about z by A(t) = int_0^t w(s) ds, w = q B3 / mc; solves dR/dt = Omega(t) R, R(0) = 1.
inline Mat3 rotation_case1(const std::function<double(double)>& b3, double charge, double mass, double t,
                           const QuadratureSpec& quad = {}) {
    return rotation_about_z(case1_angle(b3, charge, mass, t, quad));
}

/// RK4 integration of dR/dt = Omega(t) R from R(0) = 1, as an independent check of the closed form.
inline Mat3 rotation_case1_ode(const std::function<double(double)>& b3, double charge, double mass, double t,
                               double dt, const std::function<void(double, const Mat3&)>& observe = {}) {
    require(dt > 0.0, "rotation_case1_ode: dt must be positive");
    const long steps = std::max(1L, static_cast<long>(std::ceil(std::abs(t) / dt - 1e-9)));
    const double h = t / static_cast<double>(steps);
    const double scale = charge / (mass * kSpeedOfLight);
    auto omega = [&](double s) { return cross_matrix(Vec3(0.0, 0.0, scale * b3(s))); };
    Mat3 r = Mat3::Identity();
    for (long k = 0; k < steps; ++k) {
        const double s = k * h;
        const Mat3 k1 = omega(s) * r;
        const Mat3 k2 = omega(s + 0.5 * h) * (r + 0.5 * h * k1);
        const Mat3 k3 = omega(s + 0.5 * h) * (r + 0.5 * h * k2);
        const Mat3 k4 = omega(s + h) * (r + h * k3);
        r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (observe) observe((k + 1) * h, r);
    }
    return r;
}

/// H(x, p, t) = |p - A(x, t)|^2 / 2m - q <x, E0(t)> for any homogeneous field (Case I and Case II).
inline double eval_H4(const TimeVaryingField& field, const PhaseState& z, double t) {
    require_dof(z, 3, "eval_H4");
    const Vec3 x = z.position();
    const Vec3 kinetic = z.momentum() - field.vector_potential(x, t);
    return kinetic.squaredNorm() / (2.0 * field.mass()) - field.charge() * x.dot(field.electric(t));
}

/// A(t) as a function of time; the default evaluates case1_angle by Simpson.
using AngleFn = std::function<double(double)>;

inline AngleFn case1_angle_fn(const TimeVaryingField& field, const QuadratureSpec& quad = {}) {
    const auto b3 = field.fixed_params().b3;
    const double q = field.charge();
    const double m = field.mass();
    return [b3, q, m, quad](double t) { return case1_angle(b3, q, m, t, quad); };
}

/// Larmor frame of a fixed-axis field: Qbar = R_z(A(t)/2) xbar, Pbar = R_z(A(t)/2) pbar.
/// The planar motion becomes an oscillator with w^2(t) = (q B3(t) / 2mc)^2 driven by
/// q R_z(A(t)/2) E0(t).
inline CanonicalMap case1_larmor_map(const AngleFn& angle) {
    CanonicalMap map;
    map.forward = [angle](double t, const PhaseState& z) {
        require_dof(z, 3, "case1_larmor_map");
        const Mat3 r = rotation_about_z(0.5 * angle(t));
        return PhaseState::from_qp(r * z.position(), r * z.momentum());
    };
    map.inverse = [angle](double t, const PhaseState& z) {
        require_dof(z, 3, "case1_larmor_map");
        const Mat3 r = rotation_about_z(-0.5 * angle(t));
        return PhaseState::from_qp(r * z.position(), r * z.momentum());
    };
    return map;
}

inline CanonicalMap case1_larmor_map(const TimeVaryingField& field, const QuadratureSpec& quad = {}) {
    return case1_larmor_map(case1_angle_fn(field, quad));
}

/// Hill reduction of Case I: w^2(t) = (q B3(t) / 2mc)^2 on each planar axis.
/// The drive is the x component of q R_z(A(t)/2) E0(t) / m.
inline HillSystem case1_hill_system(const TimeVaryingField& field, double period, const AngleFn& angle) {
    const auto b3 = field.fixed_params().b3;
    const double q = field.charge();
    const double m = field.mass();
    const auto e0 = field.electric_fn();
    auto w2 = [b3, q, m](double t) {
        const double w = q * b3(t) / (2.0 * m * kSpeedOfLight);
        return w * w;
    };
    auto drive = [angle, q, m, e0](double t) { return (q * (rotation_about_z(0.5 * angle(t)) * e0(t))).x() / m; };
    return HillSystem(w2, period, drive);
}

inline HillSystem case1_hill_system(const TimeVaryingField& field, double period, const QuadratureSpec& quad = {}) {
    return case1_hill_system(field, period, case1_angle_fn(field, quad));
}

/// Larmor-frame Hamiltonian of Case I: |P|^2/2m + m w^2(t) |Qbar|^2 / 2 - q <Q, R_z(A/2) E0(t)>.
inline double eval_case1_reduced(const TimeVaryingField& field, const PhaseState& z, double t, const AngleFn& angle) {
    require_dof(z, 3, "eval_case1_reduced");
    const double q = field.charge();
    const double m = field.mass();
    const double w = q * field.fixed_params().b3(t) / (2.0 * m * kSpeedOfLight);
    const Vec3 x = z.position();
    const Vec3 k = q * (rotation_about_z(0.5 * angle(t)) * field.electric(t));
    return z.momentum().squaredNorm() / (2.0 * m) + 0.5 * m * w * w * (x.x() * x.x() + x.y() * x.y()) - x.dot(k);
}

inline double eval_case1_reduced(const TimeVaryingField& field, const PhaseState& z, double t,
                                 const QuadratureSpec& quad = {}) {
    return eval_case1_reduced(field, z, t, case1_angle_fn(field, quad));
}

}  // namespace larmor
