#pragma once

#include <cmath>

#include "larmor/classical/drive.hpp"
#include "larmor/classical/phase_state.hpp"
#include "larmor/core/matrices.hpp"

namespace larmor {

/// Static, spatially uniform magnetic field B and electric field E acting on a
/// particle of charge q and mass m. Vector potential A(x) = (q / 2c) B x x.
class StaticField {
public:
    StaticField(const Vec3& magnetic, const Vec3& electric, double charge, double mass)
        : b_(magnetic), e_(electric), q_(charge), m_(mass) {
        require(b_.allFinite() && e_.allFinite() && std::isfinite(q_), "StaticField: non-finite input");
        require(std::isfinite(m_) && m_ > 0.0, "StaticField: mass must be positive");
    }

    /// Field along z with magnitude b3, the configuration of the static problem.
    static StaticField axial(double b3, const Vec3& electric, double charge = 1.0, double mass = 1.0) {
        return StaticField(Vec3(0.0, 0.0, b3), electric, charge, mass);
    }

    const Vec3& magnetic() const { return b_; }
    const Vec3& electric() const { return e_; }
    double charge() const { return q_; }
    double mass() const { return m_; }

    bool is_axial() const { return b_.x() == 0.0 && b_.y() == 0.0; }

    /// Signed cyclotron frequency q B3 / (m c).
    double cyclotron_frequency() const { return q_ * b_.z() / (m_ * kSpeedOfLight); }

    /// Signed rotation rate of the frame that removes the magnetic term, half the cyclotron frequency.
    double larmor_rate() const { return 0.5 * cyclotron_frequency(); }

    /// Oscillator seen in the Larmor frame: frequency |q B3| / (2 m c).
    OscParams oscillator() const { return OscParams(m_, std::abs(larmor_rate())); }

    Vec3 vector_potential(const Vec3& x) const {
        return (q_ / (2.0 * kSpeedOfLight)) * b_.cross(x);
    }

private:
    Vec3 b_;
    Vec3 e_;
    double q_;
    double m_;
};

/// H1 = |p - A(x)|^2 / 2m - q <x, E>.
inline double eval_H1(const StaticField& field, const PhaseState& z) {
    require_dof(z, 3, "eval_H1");
    const Vec3 x = z.position();
    const Vec3 kinetic = z.momentum() - field.vector_potential(x);
    return kinetic.squaredNorm() / (2.0 * field.mass()) - field.charge() * x.dot(field.electric());
}

/// H2 = |P|^2 / 2m + m w^2 |Qbar|^2 / 2 - <Q, k(t)>, with k = qE(t) the drive force.
///
/// For a single degree of freedom the first drive component is used.
inline double eval_H2(const OscParams& params, const Drive& drive, const PhaseState& z, double t) {
    const double m = params.mass();
    const double w2 = params.omega() * params.omega();
    const Vec3 k = drive(t);
    if (z.dof() == 1) {
        return z.p(0) * z.p(0) / (2.0 * m) + 0.5 * m * w2 * z.q(0) * z.q(0) - z.q(0) * k.x();
    }
    require_dof(z, 3, "eval_H2");
    const Vec3 q = z.position();
    const Vec3 p = z.momentum();
    return p.squaredNorm() / (2.0 * m) + 0.5 * m * w2 * (q.x() * q.x() + q.y() * q.y()) - q.dot(k);
}

/// H3 = |eta|^2 / 2m + m w^2 |xibar|^2 / 2.
inline double eval_H3(const OscParams& params, const PhaseState& z) {
    return eval_H2(params, Drive::none(), z, 0.0);
}

}  // namespace larmor
