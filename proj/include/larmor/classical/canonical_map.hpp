#pragma once

#include <functional>

#include "larmor/classical/phase_state.hpp"

namespace larmor {

/// Time-indexed phase-space diffeomorphism generated by a type-2 generating
/// function, together with the generating function's pure time phase A(t).
///
/// Every closure captures immutable data only, so maps can be shared across threads.
struct CanonicalMap {
    std::function<PhaseState(double, const PhaseState&)> forward;
    std::function<PhaseState(double, const PhaseState&)> inverse;
    /// A(t) split by degree of freedom; the total phase is the sum.
    std::function<Vec3(double)> phase_by_axis = [](double) { return Vec3::Zero(); };
    /// Moving origin (Q_nh, P_nh) in the interleaved layout; zero for maps without one.
    std::function<Vec6(double)> moving_origin = [](double) { return Vec6::Zero(); };

    double phase(double t) const { return phase_by_axis(t).sum(); }

    /// Composition: apply `first`, then `second`.
    static CanonicalMap compose(CanonicalMap first, CanonicalMap second) {
        CanonicalMap out;
        out.forward = [first, second](double t, const PhaseState& z) {
            return second.forward(t, first.forward(t, z));
        };
        out.inverse = [first, second](double t, const PhaseState& z) {
            return first.inverse(t, second.inverse(t, z));
        };
        out.phase_by_axis = [first, second](double t) {
            return Vec3(first.phase_by_axis(t) + second.phase_by_axis(t));
        };
        out.moving_origin = second.moving_origin;
        return out;
    }
};

}  // namespace larmor
