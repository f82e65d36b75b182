#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace larmor {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Gaussian units with c = 1. The cyclotron frequency is qB/(mc); keeping the
// symbol makes the scaling explicit at every call site that uses it.
inline constexpr double kSpeedOfLight = 1.0;

inline constexpr double kPi = 3.14159265358979323846;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

inline void require(bool condition, const char* message) {
    if (!condition) throw std::invalid_argument(message);
}

inline void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

/// Mass and angular frequency of a one-dimensional oscillator degree of freedom.
///
/// omega == 0 is allowed and denotes a free particle.
class OscParams {
public:
    OscParams(double mass, double omega) : mass_(mass), omega_(omega) {
        require(std::isfinite(mass) && mass > 0.0, "OscParams: mass must be positive");
        require(std::isfinite(omega) && omega >= 0.0, "OscParams: omega must be non-negative");
    }

    double mass() const { return mass_; }
    double omega() const { return omega_; }

private:
    double mass_;
    double omega_;
};

}  // namespace larmor
