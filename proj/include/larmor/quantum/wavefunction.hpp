#pragma once

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "larmor/quantum/grid.hpp"

namespace larmor {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

/// A named global phase, in radians. Kept apart from the amplitudes so that
/// transition-rate style bookkeeping can see every contribution.
struct PhaseEntry {
    std::string name;
    double radians = 0.0;
};

/// Grid wavefunction with a global-phase ledger.
///
/// The physical state is exp(i * sum of ledger) * amplitudes. The norm is computed at construction.
class WaveFunction {
public:
    WaveFunction(Grid grid, ComplexVector amplitudes, double hbar, std::vector<PhaseEntry> ledger = {})
        : grid_(grid), amp_(std::move(amplitudes)), hbar_(hbar), ledger_(std::move(ledger)) {
        require(amp_.size() == grid_.size(), "WaveFunction: amplitude count does not match the grid");
        require(std::isfinite(hbar_) && hbar_ > 0.0, "WaveFunction: hbar must be positive");
        norm_ = std::sqrt(amp_.squaredNorm() * grid_.cell_volume());
        require(std::isfinite(norm_), "WaveFunction: non-finite norm");
    }

    /// Samples f(x, y) at every grid point (y = 0 in one dimension).
    static WaveFunction sample(const Grid& grid, double hbar, const std::function<Complex(double, double)>& f) {
        ComplexVector a(grid.size());
        const int n = grid.points();
        if (grid.dims() == 1) {
            for (int i = 0; i < n; ++i) a(i) = f(grid.coordinate(i), 0.0);
        } else {
            for (int ix = 0; ix < n; ++ix) {
                for (int iy = 0; iy < n; ++iy) a(grid.index(ix, iy)) = f(grid.coordinate(ix), grid.coordinate(iy));
            }
        }
        return WaveFunction(grid, std::move(a), hbar);
    }

    const Grid& grid() const { return grid_; }
    const ComplexVector& amplitudes() const { return amp_; }
    double hbar() const { return hbar_; }
    double norm() const { return norm_; }
    const std::vector<PhaseEntry>& ledger() const { return ledger_; }

    double total_phase() const {
        double s = 0.0;
        for (const auto& e : ledger_) s += e.radians;
        return s;
    }

    /// Ledger value for `name`, zero when absent.
    double phase(const std::string& name) const {
        double s = 0.0;
        for (const auto& e : ledger_) {
            if (e.name == name) s += e.radians;
        }
        return s;
    }

    /// Amplitudes with the ledger applied.
    ComplexVector resolved() const { return amp_ * std::polar(1.0, total_phase()); }

    WaveFunction with_amplitudes(ComplexVector a) const { return WaveFunction(grid_, std::move(a), hbar_, ledger_); }

    WaveFunction with_phase(const std::string& name, double radians) const {
        std::vector<PhaseEntry> l = ledger_;
        l.push_back({name, radians});
        return WaveFunction(grid_, amp_, hbar_, std::move(l));
    }

    WaveFunction normalized() const { return WaveFunction(grid_, amp_ / norm_, hbar_, ledger_); }

private:
    Grid grid_;
    ComplexVector amp_;
    double hbar_;
    std::vector<PhaseEntry> ledger_;
    double norm_ = 0.0;
};

/// <a, b> on the grid using the resolved amplitudes.
inline Complex overlap(const WaveFunction& a, const WaveFunction& b) {
    require(a.grid() == b.grid(), "overlap: grids differ");
    return a.resolved().dot(b.resolved()) * a.grid().cell_volume();
}

/// Grid L2 distance between the resolved states.
inline double l2_distance(const WaveFunction& a, const WaveFunction& b) {
    require(a.grid() == b.grid(), "l2_distance: grids differ");
    return std::sqrt((a.resolved() - b.resolved()).squaredNorm() * a.grid().cell_volume());
}

}  // namespace larmor
