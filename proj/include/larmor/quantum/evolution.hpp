#pragma once

#include <cmath>
#include <memory>
#include <optional>

#include "larmor/classical/drive.hpp"
#include "larmor/classical/hamiltonians.hpp"
#include "larmor/quantum/spectral_maps.hpp"

namespace larmor {

enum class HamiltonianKind { H3, H2, H1Planar };

/// Quadratic grid Hamiltonians on the planar (or single-axis) grid:
///   H3 = -hbar^2/2m Lap + m w^2 |x|^2 / 2
///   H2 = H3 - <x, k(t)>
///   H1 (planar part) = -hbar^2/2m Lap - theta L_z + m theta^2 |x|^2 / 2 - q <x, E>,
/// theta the signed Larmor rate and L_z = -i hbar (x d/dy - y d/dx).
struct GridHamiltonian {
    HamiltonianKind kind = HamiltonianKind::H3;
    OscParams params{1.0, 1.0};
    Drive drive = Drive::none();
    double rotation_rate = 0.0;
    Vec3 force = Vec3::Zero();

    static GridHamiltonian h3(const OscParams& p) { return {HamiltonianKind::H3, p, Drive::none(), 0.0, Vec3::Zero()}; }
    static GridHamiltonian h2(const OscParams& p, const Drive& k) { return {HamiltonianKind::H2, p, k, 0.0, Vec3::Zero()}; }
    static GridHamiltonian h1_planar(const StaticField& field) {
        require(field.is_axial(), "h1_planar: magnetic field must be along z");
        return {HamiltonianKind::H1Planar, field.oscillator(), Drive::none(), field.larmor_rate(),
                Vec3(field.charge() * field.electric())};
    }

    /// Linear force term at time t (the potential contains -<x, force>).
    Vec3 force_at(double t) const {
        if (kind == HamiltonianKind::H2) return drive(t);
        if (kind == HamiltonianKind::H1Planar) return force;
        return Vec3::Zero();
    }

    /// Fastest time scale for the step-size check.
    double max_rate() const {
        double r = std::max(params.omega(), std::abs(rotation_rate));
        if (kind == HamiltonianKind::H2) r = std::max(r, drive.max_angular_frequency());
        return r;
    }
};

/// Strang split-step propagator: half potential kick at the midpoint time, exact
/// kinetic step in Fourier space, exact rotation for the L_z term, half kick.
/// Kinetic and rotation factors commute, so the scheme is second order and every
/// factor is unitary on the grid.
class SplitStepEvolver {
public:
    SplitStepEvolver(const Grid& grid, GridHamiltonian hamiltonian, double hbar, double dt)
        : grid_(grid), h_(std::move(hamiltonian)), hbar_(hbar), dt_(dt), engine_(grid) {
        require(std::isfinite(dt) && dt > 0.0, "split_step_evolve: dt must be positive");
        require(std::isfinite(hbar) && hbar > 0.0, "split_step_evolve: hbar must be positive");
        require(h_.kind != HamiltonianKind::H1Planar || grid.dims() == 2,
                "split_step_evolve: the H1 planar Hamiltonian needs a 2D grid");
        if (dt * h_.max_rate() > 0.1) {
            throw std::invalid_argument("split_step_evolve: dt " + std::to_string(dt) +
                                        " too coarse for the fastest rate " + std::to_string(h_.max_rate()) +
                                        " (need dt * rate <= 0.1)");
        }
        const int n = grid.points();
        const double m = h_.params.mass();
        const double w2 = h_.params.omega() * h_.params.omega();
        kinetic_.resize(grid.size());
        harmonic_half_.resize(grid.size());
        for (long idx = 0; idx < grid.size(); ++idx) {
            const int ix = grid.dims() == 1 ? static_cast<int>(idx) : static_cast<int>(idx / n);
            const int iy = grid.dims() == 1 ? 0 : static_cast<int>(idx % n);
            const double kx = grid.wavenumber(ix);
            const double ky = grid.dims() == 2 ? grid.wavenumber(iy) : 0.0;
            const double x = grid.coordinate(ix);
            const double y = grid.dims() == 2 ? grid.coordinate(iy) : 0.0;
            kinetic_(idx) = std::polar(1.0, -hbar * (kx * kx + ky * ky) * dt / (2.0 * m));
            harmonic_half_(idx) = std::polar(1.0, -0.5 * m * w2 * (x * x + y * y) * dt / (2.0 * hbar));
        }
        if (h_.kind == HamiltonianKind::H1Planar && h_.rotation_rate != 0.0) {
            rotation_.emplace(grid, h_.rotation_rate * dt);
        }
    }

    double dt() const { return dt_; }

    /// One step from t to t + dt, in place.
    void step(Eigen::VectorXcd& a, double t) {
        const Vec3 k = h_.force_at(t + 0.5 * dt_);
        kick(a, k);
        engine_.forward(a);
        a.array() *= kinetic_.array();
        engine_.backward(a);
        if (rotation_) rotation_->apply(engine_, a);
        kick(a, k);
    }

    /// Evolves psi over `duration` (a whole number of steps) starting at t0.
    WaveFunction evolve(const WaveFunction& psi, double duration, double t0 = 0.0) {
        require(psi.grid() == grid_, "split_step_evolve: grid mismatch");
        require(duration >= 0.0, "split_step_evolve: duration must be non-negative");
        const long steps = static_cast<long>(std::llround(duration / dt_));
        require(std::abs(steps * dt_ - duration) <= 1e-9 * std::max(1.0, duration),
                "split_step_evolve: duration must be a whole number of steps");
        Eigen::VectorXcd a = psi.amplitudes();
        for (long s = 0; s < steps; ++s) step(a, t0 + s * dt_);
        return psi.with_amplitudes(std::move(a));
    }

private:
    void kick(Eigen::VectorXcd& a, const Vec3& k) const {
        const int n = grid_.points();
        if (k.x() == 0.0 && (grid_.dims() == 1 || k.y() == 0.0)) {
            a.array() *= harmonic_half_.array();
            return;
        }
        // exp(+i <x, k> dt / 2 hbar) factorizes over the axes.
        Eigen::VectorXcd fx(n);
        Eigen::VectorXcd fy = Eigen::VectorXcd::Ones(n);
        for (int j = 0; j < n; ++j) {
            fx(j) = std::polar(1.0, grid_.coordinate(j) * k.x() * dt_ / (2.0 * hbar_));
            if (grid_.dims() == 2) fy(j) = std::polar(1.0, grid_.coordinate(j) * k.y() * dt_ / (2.0 * hbar_));
        }
        if (grid_.dims() == 1) {
            a.array() *= harmonic_half_.array() * fx.array();
            return;
        }
        for (int ix = 0; ix < n; ++ix) {
            for (int iy = 0; iy < n; ++iy) {
                const long idx = grid_.index(ix, iy);
                a(idx) *= harmonic_half_(idx) * fx(ix) * fy(iy);
            }
        }
    }

    Grid grid_;
    GridHamiltonian h_;
    double hbar_;
    double dt_;
    SpectralEngine engine_;
    Eigen::VectorXcd kinetic_;
    Eigen::VectorXcd harmonic_half_;
    std::optional<RotationPlan> rotation_;
};

/// Evolves psi0 by the grid Hamiltonian from t0 to t0 + t with step dt.
inline WaveFunction split_step_evolve(const WaveFunction& psi0, const GridHamiltonian& hamiltonian, double t,
                                      double dt, double t0 = 0.0) {
    SplitStepEvolver evolver(psi0.grid(), hamiltonian, psi0.hbar(), dt);
    return evolver.evolve(psi0, t, t0);
}

/// H psi on the grid with spectral derivatives (raw amplitudes, ledger ignored).
inline Eigen::VectorXcd apply_hamiltonian(SpectralEngine& engine, const GridHamiltonian& h,
                                          const WaveFunction& psi, double t) {
    const Grid& g = psi.grid();
    const int n = g.points();
    const double hbar = psi.hbar();
    const double m = h.params.mass();
    const double w2 = h.params.omega() * h.params.omega();
    const Vec3 k = h.force_at(t);
    const Eigen::VectorXcd& a = psi.amplitudes();

    Eigen::VectorXcd spec = a;
    engine.forward(spec);
    Eigen::VectorXcd lap = spec;
    Eigen::VectorXcd dx = spec;
    Eigen::VectorXcd dy = spec;
    const Complex i_unit(0.0, 1.0);
    for (long idx = 0; idx < g.size(); ++idx) {
        const int ix = g.dims() == 1 ? static_cast<int>(idx) : static_cast<int>(idx / n);
        const int iy = g.dims() == 1 ? 0 : static_cast<int>(idx % n);
        const double kx = g.wavenumber(ix);
        const double ky = g.dims() == 2 ? g.wavenumber(iy) : 0.0;
        lap(idx) *= -(kx * kx + ky * ky);
        dx(idx) *= i_unit * kx;
        dy(idx) *= i_unit * ky;
    }
    engine.backward(lap);
    Eigen::VectorXcd out = (-hbar * hbar / (2.0 * m)) * lap;
    const bool rotating = h.kind == HamiltonianKind::H1Planar && h.rotation_rate != 0.0;
    if (rotating) {
        engine.backward(dx);
        engine.backward(dy);
    }
    for (long idx = 0; idx < g.size(); ++idx) {
        const int ix = g.dims() == 1 ? static_cast<int>(idx) : static_cast<int>(idx / n);
        const int iy = g.dims() == 1 ? 0 : static_cast<int>(idx % n);
        const double x = g.coordinate(ix);
        const double y = g.dims() == 2 ? g.coordinate(iy) : 0.0;
        const double v = 0.5 * m * w2 * (x * x + y * y) - x * k.x() - y * k.y();
        out(idx) += v * a(idx);
        if (rotating) {
            const Complex lz = -i_unit * hbar * (x * dy(idx) - y * dx(idx));
            out(idx) -= h.rotation_rate * lz;
        }
    }
    return out;
}

/// <psi|H|psi> / <psi|psi>.
inline double expectation(SpectralEngine& engine, const GridHamiltonian& h, const WaveFunction& psi, double t) {
    const Eigen::VectorXcd hp = apply_hamiltonian(engine, h, psi, t);
    return psi.amplitudes().dot(hp).real() / psi.amplitudes().squaredNorm();
}

}  // namespace larmor
