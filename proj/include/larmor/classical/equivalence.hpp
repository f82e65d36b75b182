#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "larmor/classical/hamiltonians.hpp"
#include "larmor/classical/oracle.hpp"
#include "larmor/classical/transforms.hpp"

namespace larmor {

struct EquivalenceOptions {
    double dt = 1e-4;
    /// Compare against the closed form every this many oracle steps.
    long sample_every = 100;
    QuadratureSpec quad{};
};

struct TrajectorySample {
    double t = 0.0;
    Vec6 lab = Vec6::Zero();       // H1 oracle state (x, p)
    Vec6 mapped = Vec6::Zero();    // after ct1 then ct2
    Vec6 reference = Vec6::Zero(); // H3 closed form
    double phase = 0.0;            // A(t) of ct2
};

struct EquivalenceReport {
    double max_deviation = 0.0;
    double symplectic_defect_ct1 = 0.0;
    double symplectic_defect_ct2 = 0.0;
    double max_abs_phase = 0.0;
    /// Drift of <Z_h, E Z_h> along the closed-form H3 orbit.
    double homogeneous_energy_drift = 0.0;
    std::vector<TrajectorySample> samples;
};

/// Integrates H1 with the RK4 oracle, pushes every sample through ct1 and ct2,
/// and compares with the closed-form H3 orbit block_propagator(t) z0.
inline EquivalenceReport equivalence_report(const StaticField& field, const PhaseState& z0, double horizon,
                                            const EquivalenceOptions& options = {}) {
    require_dof(z0, 3, "equivalence_report");
    require(horizon > 0.0, "equivalence_report: horizon must be positive");
    const OscParams osc = field.oscillator();
    const CanonicalMap larmor = ct1(field);
    const Drive drive = ct1_drive(field);
    const CanonicalMap shift = ct2(osc, drive, horizon, options.quad);

    const Mat2 energy = energy_matrix_2x2(osc);
    auto homogeneous_energy = [&](const Vec6& z) {
        double e = 0.0;
        for (int i = 0; i < 2; ++i) {
            const Eigen::Vector2d zi = z.segment<2>(2 * i);
            e += zi.dot(energy * zi);
        }
        const Eigen::Vector2d z3 = z.segment<2>(4);
        return e + z3(1) * z3(1) / osc.mass();
    };
    const double e0 = homogeneous_energy(z0.as_vec6());

    EquivalenceReport report;
    const HamiltonianFn h1 = [&field](const PhaseState& z, double) { return eval_H1(field, z); };
    rk4_trajectory(h1, z0, horizon, options.dt, [&](long step, double t, const PhaseState& z) {
        if (step % options.sample_every != 0) return;
        TrajectorySample s;
        s.t = t;
        s.lab = z.as_vec6();
        s.mapped = shift.forward(t, larmor.forward(t, z)).as_vec6();
        s.reference = block_propagator(osc, t) * z0.as_vec6();
        s.phase = shift.phase(t);
        report.max_deviation = std::max(report.max_deviation, (s.mapped - s.reference).cwiseAbs().maxCoeff());
        report.max_abs_phase = std::max(report.max_abs_phase, std::abs(s.phase));
        report.homogeneous_energy_drift =
            std::max(report.homogeneous_energy_drift, std::abs(homogeneous_energy(s.reference) - e0));
        report.samples.push_back(s);
    });

    for (const double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double t = frac * horizon;
        report.symplectic_defect_ct1 =
            std::max(report.symplectic_defect_ct1, map_symplectic_defect(larmor.forward, t, z0));
        report.symplectic_defect_ct2 =
            std::max(report.symplectic_defect_ct2, map_symplectic_defect(shift.forward, t, z0));
    }
    return report;
}

}  // namespace larmor
