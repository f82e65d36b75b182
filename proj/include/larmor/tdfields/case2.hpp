#pragma once

#include "larmor/classical/canonical_map.hpp"
#include "larmor/tdfields/case1.hpp"

namespace larmor {

/// Omega_1(t) = cross_matrix(q B(t) / mc) for the rotating field, antisymmetric with
/// uniform cyclotron scaling w_i = q B_i / mc. Satisfies R(t)^T Omega_1(t) R(t) = Omega_1(0)
/// with R(t) = R_z(alpha t).
inline Mat3 omega1(const TimeVaryingField& field, double t) {
    field.rotating_params();
    return field.omega_matrix(t);
}

/// Data of the rotating-frame Hamiltonian
///   H5 = |P|^2/2m - <P, M Q> + (m/8) <Q, S Q> - q <Q, E1(t)>,
/// M = Omega_1(0)/2 + Lambda, S = Omega_1(0)^T Omega_1(0), E1(t) = R_z(-alpha t) E0(t).
struct H5Data {
    double mass = 1.0;
    double charge = 1.0;
    double alpha = 0.0;
    Mat3 omega1_0 = Mat3::Zero();
    Mat3 lambda = Mat3::Zero();
    Mat3 m = Mat3::Zero();
    Mat3 s = Mat3::Zero();
    /// exp(t M) is a rotation about `axis` at angular speed `speed`.
    Vec3 axis = Vec3::UnitZ();
    double speed = 0.0;
    std::function<Vec3(double)> e0;

    Vec3 e1(double t) const { return rotation_about_z(-alpha * t) * e0(t); }
    Mat3 rotation(double t) const { return antisymmetric_exp(m, t); }
};

inline H5Data ct3_reduce(const TimeVaryingField& field) {
    const RotatingField& r = field.rotating_params();
    H5Data h;
    h.mass = field.mass();
    h.charge = field.charge();
    h.alpha = r.alpha;
    h.omega1_0 = omega1(field, 0.0);
    h.lambda = cross_matrix(Vec3(0.0, 0.0, r.alpha));
    h.m = 0.5 * h.omega1_0 + h.lambda;
    h.s = h.omega1_0.transpose() * h.omega1_0;
    const Vec3 w = field.cyclotron_vector(0.0);
    const Vec3 generator(0.5 * w.x(), 0.0, r.alpha + 0.5 * w.z());
    h.speed = generator.norm();
    if (h.speed > 0.0) h.axis = generator / h.speed;
    h.e0 = field.electric_fn();
    return h;
}

/// Rotating frame of the field: Q = R_z(-alpha t) x, P = R_z(-alpha t) p.
inline CanonicalMap ct3_map(const TimeVaryingField& field) {
    const double alpha = field.rotating_params().alpha;
    CanonicalMap map;
    map.forward = [alpha](double t, const PhaseState& z) {
        require_dof(z, 3, "ct3");
        const Mat3 r = rotation_about_z(-alpha * t);
        return PhaseState::from_qp(r * z.position(), r * z.momentum());
    };
    map.inverse = [alpha](double t, const PhaseState& z) {
        require_dof(z, 3, "ct3");
        const Mat3 r = rotation_about_z(alpha * t);
        return PhaseState::from_qp(r * z.position(), r * z.momentum());
    };
    return map;
}

/// dF/dt of F(x, P, t) = <R_z(-alpha t) x, P> at fixed (x, P).
inline double ct3_time_derivative(const H5Data& h, double t, const Vec3& x, const Vec3& big_p) {
    return (-h.lambda * rotation_about_z(-h.alpha * t) * x).dot(big_p);
}

inline double eval_H5(const H5Data& h, const PhaseState& z, double t) {
    require_dof(z, 3, "eval_H5");
    const Vec3 q = z.position();
    const Vec3 p = z.momentum();
    return p.squaredNorm() / (2.0 * h.mass) - p.dot(h.m * q) + (h.mass / 8.0) * q.dot(h.s * q) -
           h.charge * q.dot(h.e1(t));
}

/// Removes <P, M Q>: x' = exp(t M) Q, p' = exp(t M) P.
inline CanonicalMap ct4_map(const H5Data& h) {
    const Mat3 m = h.m;
    CanonicalMap map;
    map.forward = [m](double t, const PhaseState& z) {
        require_dof(z, 3, "ct4");
        const Mat3 g = antisymmetric_exp(m, t);
        return PhaseState::from_qp(g * z.position(), g * z.momentum());
    };
    map.inverse = [m](double t, const PhaseState& z) {
        require_dof(z, 3, "ct4");
        const Mat3 g = antisymmetric_exp(m, -t);
        return PhaseState::from_qp(g * z.position(), g * z.momentum());
    };
    return map;
}

/// dF/dt of F(Q, p', t) = <exp(t M) Q, p'> at fixed (Q, p').
inline double ct4_time_derivative(const H5Data& h, double t, const Vec3& q, const Vec3& p_new) {
    return (h.m * h.rotation(t) * q).dot(p_new);
}

/// Oscillator with periodic stiffness K(t) = (m/4) exp(tM) S exp(-tM) and force q exp(tM) E1(t),
/// period 2 pi / speed. With M = 0 the period is undefined and 1 is used.
inline VectorHillSystem ct4_reduce(const H5Data& h) {
    VectorHillSystem sys;
    sys.mass = h.mass;
    sys.period = h.speed > 0.0 ? 2.0 * kPi / h.speed : 1.0;
    const H5Data copy = h;
    sys.stiffness = [copy](double t) {
        const Mat3 g = copy.rotation(t);
        return Mat3(0.25 * copy.mass * g * copy.s * g.transpose());
    };
    sys.drive = [copy](double t) { return Vec3(copy.charge * (copy.rotation(t) * copy.e1(t))); };
    return sys;
}

/// H = |p|^2/2m + <x, K(t) x>/2 - <x, k(t)>.
inline double eval_vector_hill(const VectorHillSystem& sys, const PhaseState& z, double t) {
    require_dof(z, 3, "eval_vector_hill");
    const Vec3 x = z.position();
    return z.momentum().squaredNorm() / (2.0 * sys.mass) + 0.5 * x.dot(sys.stiffness(t) * x) - x.dot(sys.drive(t));
}

/// Generator of the autonomous homogeneous H5 flow on the interleaved layout:
/// dQ/dt = P/m - M Q, dP/dt = -M P - (m/4) S Q (M is antisymmetric).
inline Mat6 h5_generator(const H5Data& h) {
    Mat6 a = Mat6::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            a(2 * i, 2 * j) = -h.m(i, j);
            a(2 * i + 1, 2 * j + 1) = -h.m(i, j);
            a(2 * i + 1, 2 * j) = -0.25 * h.mass * h.s(i, j);
        }
        a(2 * i, 2 * i + 1) += 1.0 / h.mass;
    }
    return a;
}

}  // namespace larmor
