#pragma once

#include <functional>
#include <variant>

#include "larmor/core/matrices.hpp"

namespace larmor {

/// Case I: B = (0, 0, B3(t)).
struct FixedAxisField {
    std::function<double(double)> b3;
};

/// Case II: B(t) = R_z(alpha t) (B1, 0, B3).
struct RotatingField {
    double b1 = 0.0;
    double b3 = 0.0;
    double alpha = 0.0;
};

/// Homogeneous time-dependent magnetic field with a homogeneous electric field E0(t).
///
/// The vector potential is A = (q/2c) B(t) x x, so the Faraday field -dA/dt is part of
/// the Hamiltonian through A itself.
class TimeVaryingField {
public:
    using Kind = std::variant<FixedAxisField, RotatingField>;

    TimeVaryingField(Kind kind, std::function<Vec3(double)> e0, double charge, double mass)
        : kind_(std::move(kind)), e0_(std::move(e0)), q_(charge), m_(mass) {
        require(std::isfinite(q_), "TimeVaryingField: charge must be finite");
        require(std::isfinite(m_) && m_ > 0.0, "TimeVaryingField: mass must be positive");
        if (!e0_) e0_ = [](double) { return Vec3::Zero(); };
        if (const auto* f = std::get_if<FixedAxisField>(&kind_)) {
            require(static_cast<bool>(f->b3), "TimeVaryingField: fixed-axis field needs B3(t)");
        }
    }

    static TimeVaryingField fixed_axis(std::function<double(double)> b3, std::function<Vec3(double)> e0 = {},
                                       double charge = 1.0, double mass = 1.0) {
        return TimeVaryingField(FixedAxisField{std::move(b3)}, std::move(e0), charge, mass);
    }

    static TimeVaryingField rotating(double b1, double b3, double alpha, std::function<Vec3(double)> e0 = {},
                                     double charge = 1.0, double mass = 1.0) {
        return TimeVaryingField(RotatingField{b1, b3, alpha}, std::move(e0), charge, mass);
    }

    bool is_rotating() const { return std::holds_alternative<RotatingField>(kind_); }
    const RotatingField& rotating_params() const {
        require(is_rotating(), "TimeVaryingField: not a rotating field");
        return std::get<RotatingField>(kind_);
    }
    const FixedAxisField& fixed_params() const {
        require(!is_rotating(), "TimeVaryingField: not a fixed-axis field");
        return std::get<FixedAxisField>(kind_);
    }

    double charge() const { return q_; }
    double mass() const { return m_; }
    Vec3 electric(double t) const { return e0_(t); }
    const std::function<Vec3(double)>& electric_fn() const { return e0_; }

    Vec3 magnetic(double t) const {
        if (const auto* r = std::get_if<RotatingField>(&kind_)) {
            return rotation_about_z(r->alpha * t) * Vec3(r->b1, 0.0, r->b3);
        }
        return Vec3(0.0, 0.0, std::get<FixedAxisField>(kind_).b3(t));
    }

    /// Cyclotron vector q B(t) / (m c).
    Vec3 cyclotron_vector(double t) const { return (q_ / (m_ * kSpeedOfLight)) * magnetic(t); }

    /// Omega(t) = cross_matrix(q B(t) / mc); A(x, t) = (m/2) Omega(t) x.
    Mat3 omega_matrix(double t) const { return cross_matrix(cyclotron_vector(t)); }

    Vec3 vector_potential(const Vec3& x, double t) const { return 0.5 * m_ * (omega_matrix(t) * x); }

private:
    Kind kind_;
    std::function<Vec3(double)> e0_;
    double q_;
    double m_;
};

}  // namespace larmor
