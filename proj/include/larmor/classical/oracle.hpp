#pragma once

#include <cmath>
#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>

#include "larmor/classical/phase_state.hpp"
#include "larmor/core/matrices.hpp"

namespace larmor {

/// Any Hamiltonian H(z, t) on the interleaved layout.
using HamiltonianFn = std::function<double(const PhaseState&, double)>;

/// Phase-space map z -> F(t, z).
using PhaseMapFn = std::function<PhaseState(double, const PhaseState&)>;

/// Raised when an integration produces non-finite values.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

/// Relative step for every central difference in this header: h = 1e-5 (1 + |z|_inf).
inline double fd_step(const StateVector& z) { return 1e-5 * (1.0 + z.cwiseAbs().maxCoeff()); }

/// Sigma grad H by central differences; dQ/dt = dH/dP, dP/dt = -dH/dQ.
inline StateVector hamiltonian_vector_field(const HamiltonianFn& hamiltonian, const StateVector& z,
                                                double t) {
    const double h = fd_step(z);
    const Eigen::Index n = z.size();
    StateVector grad(n);
    StateVector probe = z;
    for (Eigen::Index i = 0; i < n; ++i) {
        probe(i) = z(i) + h;
        const double up = hamiltonian(PhaseState(probe), t);
        probe(i) = z(i) - h;
        const double down = hamiltonian(PhaseState(probe), t);
        probe(i) = z(i);
        grad(i) = (up - down) / (2.0 * h);
    }
    StateVector field(n);
    for (Eigen::Index i = 0; i < n / 2; ++i) {
        field(2 * i) = grad(2 * i + 1);
        field(2 * i + 1) = -grad(2 * i);
    }
    return field;
}

/// Classic RK4 for dz/dt = Sigma grad H from t0 to t0 + duration.
///
/// The step is shrunk so that an integer number of steps lands on the end time.
/// The observer, if given, sees (step index, time, state) after every step and at step 0.
inline PhaseState rk4_trajectory(const HamiltonianFn& hamiltonian, const PhaseState& z0, double duration,
                                 double dt,
                                 const std::function<void(long, double, const PhaseState&)>& observer = {},
                                 double t0 = 0.0) {
    require(dt > 0.0 && std::isfinite(dt), "rk4_oracle: dt must be positive");
    require(duration >= 0.0 && std::isfinite(duration), "rk4_oracle: duration must be non-negative");
    const long steps = std::max(1L, static_cast<long>(std::ceil(duration / dt - 1e-9)));
    const double h = duration / static_cast<double>(steps);
    StateVector z = z0.vector();
    if (observer) observer(0, t0, z0);
    for (long s = 0; s < steps; ++s) {
        const double t = t0 + static_cast<double>(s) * h;
        auto slope = [&](const StateVector& at, double tt) {
            if (!at.allFinite()) {
                throw BlowUpError("rk4_oracle: non-finite state at t = " + std::to_string(tt), tt);
            }
            return hamiltonian_vector_field(hamiltonian, at, tt);
        };
        const StateVector k1 = slope(z, t);
        const StateVector k2 = slope(z + 0.5 * h * k1, t + 0.5 * h);
        const StateVector k3 = slope(z + 0.5 * h * k2, t + 0.5 * h);
        const StateVector k4 = slope(z + h * k3, t + h);
        z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!z.allFinite()) {
            throw BlowUpError("rk4_oracle: non-finite state at t = " + std::to_string(t + h), t + h);
        }
        if (observer) observer(s + 1, t0 + static_cast<double>(s + 1) * h, PhaseState(z));
    }
    return PhaseState(z);
}

inline PhaseState rk4_oracle(const HamiltonianFn& hamiltonian, const PhaseState& z0, double t, double dt) {
    return rk4_trajectory(hamiltonian, z0, t, dt);
}

/// Jacobian of z -> map(t, z) by central differences with the fd_step rule.
inline Eigen::MatrixXd fd_jacobian(const PhaseMapFn& map, double t, const PhaseState& z) {
    const double h = fd_step(z.vector());
    const Eigen::Index n = z.vector().size();
    Eigen::MatrixXd jac(n, n);
    StateVector probe = z.vector();
    for (Eigen::Index i = 0; i < n; ++i) {
        probe(i) = z.vector()(i) + h;
        const StateVector up = map(t, PhaseState(probe)).vector();
        probe(i) = z.vector()(i) - h;
        const StateVector down = map(t, PhaseState(probe)).vector();
        probe(i) = z.vector()(i);
        jac.col(i) = (up - down) / (2.0 * h);
    }
    return jac;
}

/// max |J^T Sigma J - Sigma| for the finite-difference Jacobian of a map at (t, z).
inline double map_symplectic_defect(const PhaseMapFn& map, double t, const PhaseState& z) {
    return symplectic_defect(fd_jacobian(map, t, z));
}

}  // namespace larmor
