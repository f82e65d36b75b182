#pragma once

#include <string>
#include <utility>

#include "larmor/core/types.hpp"

namespace larmor {

/// Phase-space coordinates with inline storage for up to 3 degrees of freedom.
using StateVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 6, 1>;

/// A point of 2n-dimensional phase space, n in {1, 3}, stored interleaved as
/// (Q1, P1, Q2, P2, Q3, P3).
class PhaseState {
public:
    template <typename Derived>
    explicit PhaseState(const Eigen::MatrixBase<Derived>& z) : z_(z) {
        require(z_.size() == 2 || z_.size() == 6, "PhaseState: dimension must be 2 or 6");
        require(z_.allFinite(), "PhaseState: components must be finite");
    }

    static PhaseState zero(int dof) { return PhaseState(StateVector::Zero(2 * dof)); }

    static PhaseState from_qp(const Vec3& q, const Vec3& p) {
        Vec6 z;
        z << q.x(), p.x(), q.y(), p.y(), q.z(), p.z();
        return PhaseState(z);
    }

    int dof() const { return static_cast<int>(z_.size() / 2); }
    const StateVector& vector() const { return z_; }
    double q(int i) const { return z_(2 * i); }
    double p(int i) const { return z_(2 * i + 1); }

    Vec6 as_vec6() const {
        require(dof() == 3, "PhaseState: expected 3 degrees of freedom");
        return Vec6(z_);
    }
    Vec3 position() const { return as_vec6()(Eigen::seqN(0, 3, 2)); }
    Vec3 momentum() const { return as_vec6()(Eigen::seqN(1, 3, 2)); }

private:
    StateVector z_;
};

inline void require_dof(const PhaseState& z, int dof, const char* where) {
    if (z.dof() != dof) {
        throw std::invalid_argument(std::string(where) + ": dimension mismatch, expected " +
                                    std::to_string(2 * dof) + " components, got " +
                                    std::to_string(2 * z.dof()));
    }
}

}  // namespace larmor
