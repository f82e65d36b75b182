#pragma once

#include <string>
#include <vector>

#include "larmor/classical/transforms.hpp"
#include "larmor/quantum/expansion.hpp"
#include "larmor/quantum/hermite.hpp"
#include "larmor/quantum/unitary.hpp"

namespace larmor {

/// phi_n1(x) phi_n2(y) sampled on the grid (phi_n1(x) in one dimension).
inline WaveFunction eigenstate_on_grid(const Grid& grid, int n1, int n2, const OscParams& params, double hbar) {
    const int n = grid.points();
    std::vector<double> fx(n);
    std::vector<double> fy(n);
    for (int j = 0; j < n; ++j) {
        fx[j] = eigenfunction(n1, params, hbar, grid.coordinate(j));
        fy[j] = eigenfunction(n2, params, hbar, grid.coordinate(j));
    }
    ComplexVector a(grid.size());
    if (grid.dims() == 1) {
        for (int j = 0; j < n; ++j) a(j) = fx[j];
    } else {
        for (int ix = 0; ix < n; ++ix) {
            for (int iy = 0; iy < n; ++iy) a(grid.index(ix, iy)) = fx[ix] * fy[iy];
        }
    }
    return WaveFunction(grid, std::move(a), hbar);
}

/// Static-field problem prepared for the quantum maps: the Larmor rotation (qt1) and
/// the moving-origin shift (qt2) built from the classical ct2 on [0, horizon].
struct QuantumPipeline {
    StaticField field;
    double hbar;
    CanonicalMap shift;

    QuantumPipeline(const StaticField& f, double horizon, double h, const QuadratureSpec& quad = {})
        : field(f), hbar(h), shift(ct2(f.oscillator(), ct1_drive(f), horizon, quad)) {
        require(std::isfinite(h) && h > 0.0, "QuantumPipeline: hbar must be positive");
    }

    OscParams oscillator() const { return field.oscillator(); }
    Drive larmor_drive() const { return ct1_drive(field); }
};

/// Plane wave exp(i wavenumber (x3 - offset)) times exp(i * sum of ledger), carried symbolically.
struct AxialFactor {
    double wavenumber = 0.0;
    double offset = 0.0;
    std::vector<PhaseEntry> ledger;

    double total_phase() const {
        double s = 0.0;
        for (const auto& e : ledger) s += e.radians;
        return s;
    }

    Complex operator()(double x3) const { return std::polar(1.0, wavenumber * (x3 - offset) + total_phase()); }
};

struct TransformedEigenstate {
    WaveFunction planar;
    AxialFactor axial;
};

struct PipelineStages {
    bool qt2 = true;
    bool qt1 = true;
};

/// Eigenstate phi_{n,k} of H3 at time t pushed through qt2 and then qt1.
///
/// The planar profile lives on the grid. The dynamical phase -E t / hbar is split into
/// "dynamical" (planar) and "dynamical_axial" (hbar k^2 t / 2m); the generating phases go to
/// "action" (planar) and "action_axial". The axial momentum shift P3_nh enters the plane
/// wave's wavenumber and Q3_nh its offset.
inline TransformedEigenstate transformed_eigenstate(SpectralEngine& engine, const EigenLabel& label, double t,
                                                    const QuantumPipeline& pipeline, const Grid& grid,
                                                    PipelineStages stages = {}, const SupportPolicy& policy = {}) {
    require(grid.dims() == 2, "transformed_eigenstate: needs a planar (2D) grid");
    const OscParams osc = pipeline.oscillator();
    const double hbar = pipeline.hbar;
    const double planar_energy = hbar * osc.omega() * (label.n1 + label.n2 + 1.0);
    const double axial_energy = hbar * hbar * label.k * label.k / (2.0 * osc.mass());

    WaveFunction psi = eigenstate_on_grid(grid, label.n1, label.n2, osc, hbar)
                           .with_phase("dynamical", -planar_energy * t / hbar);
    AxialFactor axial{label.k, 0.0, {{"dynamical_axial", -axial_energy * t / hbar}}};

    if (stages.qt2) {
        psi = unitary_qt2(engine, psi, t, pipeline.shift, policy);
        const Vec6 origin = pipeline.shift.moving_origin(t);
        axial.wavenumber += origin(5) / hbar;
        axial.offset = origin(4);
        axial.ledger.push_back({"action_axial", pipeline.shift.phase_by_axis(t)(2) / hbar});
    }
    if (stages.qt1) psi = unitary_qt1(engine, psi, t, pipeline.field, policy);
    return {psi, axial};
}

}  // namespace larmor
