#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "larmor/quantum/fft.hpp"
#include "larmor/quantum/wavefunction.hpp"

namespace larmor {

/// Raised when a map would carry probability across the periodic grid boundary.
class GridSupportError : public std::range_error {
public:
    GridSupportError(const std::string& what, double mass) : std::range_error(what), mass_(mass) {}
    double mass() const { return mass_; }

private:
    double mass_;
};

/// Support guard: points farther than (1 - band) X from the origin count as boundary.
struct SupportPolicy {
    double band = 1.0 / 16.0;
    /// Largest boundary mass, relative to the squared norm, accepted by a map.
    double tolerance = 1e-6;
};

/// Relative mass of psi at points where `outside(x, y)` holds.
template <typename Pred>
double mass_where(const WaveFunction& psi, Pred outside) {
    const Grid& g = psi.grid();
    const auto& a = psi.amplitudes();
    double m = 0.0;
    const int n = g.points();
    if (g.dims() == 1) {
        for (int i = 0; i < n; ++i) {
            if (outside(g.coordinate(i), 0.0)) m += std::norm(a(i));
        }
    } else {
        for (int ix = 0; ix < n; ++ix) {
            for (int iy = 0; iy < n; ++iy) {
                if (outside(g.coordinate(ix), g.coordinate(iy))) m += std::norm(a(g.index(ix, iy)));
            }
        }
    }
    const double total = a.squaredNorm();
    return total > 0.0 ? m / total : 0.0;
}

/// Relative mass in the outer band max(|x|, |y|) > (1 - band) X.
inline double edge_mass(const WaveFunction& psi, double band = 1.0 / 16.0) {
    const double inner = (1.0 - band) * psi.grid().half_width();
    return mass_where(psi, [inner](double x, double y) { return std::abs(x) > inner || std::abs(y) > inner; });
}

/// psi'(x) = psi(x - v), exact Fourier shift (unitary on the grid).
/// `v` uses components (x, y); y is ignored in one dimension.
inline WaveFunction spectral_shift(SpectralEngine& engine, const WaveFunction& psi, const Eigen::Vector2d& v,
                                   const SupportPolicy& policy = {}) {
    const Grid& g = psi.grid();
    require(engine.grid() == g, "spectral_shift: engine built for another grid");
    const double vy = g.dims() == 2 ? v.y() : 0.0;
    if (v.x() == 0.0 && vy == 0.0) return psi;
    const double inner = (1.0 - policy.band) * g.half_width();
    const double crossing = mass_where(psi, [&](double x, double y) {
        return std::abs(x + v.x()) > inner || (g.dims() == 2 && std::abs(y + vy) > inner);
    });
    if (crossing > policy.tolerance) {
        throw GridSupportError("spectral_shift: shift carries mass " + std::to_string(crossing) +
                                   " into the boundary band",
                               crossing);
    }
    const int n = g.points();
    Eigen::VectorXcd fx(n);
    Eigen::VectorXcd fy(n);
    for (int j = 0; j < n; ++j) {
        fx(j) = std::polar(1.0, -g.wavenumber(j) * v.x());
        fy(j) = std::polar(1.0, -g.wavenumber(j) * vy);
    }
    Eigen::VectorXcd a = psi.amplitudes();
    engine.forward(a);
    if (g.dims() == 1) {
        a = a.cwiseProduct(fx);
    } else {
        for (int ix = 0; ix < n; ++ix) {
            for (int iy = 0; iy < n; ++iy) a(g.index(ix, iy)) *= fx(ix) * fy(iy);
        }
    }
    engine.backward(a);
    return psi.with_amplitudes(std::move(a));
}

/// Precomputed pullback psi'(x) = psi(R(theta) x) on a 2D grid, R counter-clockwise.
///
/// Exact quarter turns (index permutations) bring the remaining angle r into
/// [-pi/4, pi/4]; r is done by three Fourier shears R = Sx(a) Sy(b) Sx(a),
/// a = -tan(r/2), b = sin(r). Larger shears stretch the intermediate states toward
/// the periodic boundary. Every factor is unitary on the grid.
class RotationPlan {
public:
    RotationPlan(const Grid& grid, double theta) : grid_(grid), theta_(theta) {
        require(grid.dims() == 2, "RotationPlan: rotation needs a 2D grid");
        require(std::isfinite(theta), "RotationPlan: angle must be finite");
        const double quarter = 0.5 * kPi;
        const double q = std::nearbyint(std::remainder(theta, 2.0 * kPi) / quarter);
        double r = std::remainder(theta, 2.0 * kPi) - q * quarter;
        quarter_turns_ = (static_cast<int>(q) % 4 + 4) % 4;
        residual_ = r;
        if (residual_ == 0.0) return;
        const double a = -std::tan(0.5 * residual_);
        const double b = std::sin(residual_);
        const int n = grid.points();
        shear_x_.resize(grid.size());
        shear_y_.resize(grid.size());
        for (int ix = 0; ix < n; ++ix) {
            for (int iy = 0; iy < n; ++iy) {
                // Sx pullback: psi(x + a y, y) is a shift by -a y along x.
                shear_x_(grid.index(ix, iy)) = std::polar(1.0, grid.wavenumber(ix) * a * grid.coordinate(iy));
                shear_y_(grid.index(ix, iy)) = std::polar(1.0, grid.wavenumber(iy) * b * grid.coordinate(ix));
            }
        }
    }

    double angle() const { return theta_; }

    void apply(SpectralEngine& engine, Eigen::VectorXcd& a) const {
        require(engine.grid() == grid_, "RotationPlan: engine built for another grid");
        const int n = grid_.points();
        for (int k = 0; k < quarter_turns_; ++k) {
            // psi(R(pi/2) (x, y)) = psi(-y, x); -x_j sits at index (n - j) mod n.
            Eigen::VectorXcd turned(a.size());
            for (int ix = 0; ix < n; ++ix) {
                for (int iy = 0; iy < n; ++iy) turned(grid_.index(ix, iy)) = a(grid_.index((n - iy) % n, ix));
            }
            a.swap(turned);
        }
        if (residual_ == 0.0) return;
        shear(engine, a, 0, shear_x_);
        shear(engine, a, 1, shear_y_);
        shear(engine, a, 0, shear_x_);
    }

private:
    static void shear(SpectralEngine& engine, Eigen::VectorXcd& a, int axis, const Eigen::VectorXcd& table) {
        engine.forward_axis(a, axis);
        a.array() *= table.array();
        engine.backward_axis(a, axis);
    }

    Grid grid_;
    double theta_;
    int quarter_turns_ = 0;
    double residual_ = 0.0;
    Eigen::VectorXcd shear_x_;
    Eigen::VectorXcd shear_y_;
};

/// psi'(x) = psi(R(theta) x). The inscribed disk of radius (1 - band) X is mapped onto
/// itself, so mass outside it is what the rotation could wrap around the boundary.
inline WaveFunction spectral_rotate(SpectralEngine& engine, const WaveFunction& psi, double theta,
                                    const SupportPolicy& policy = {}) {
    const Grid& g = psi.grid();
    if (theta == 0.0) return psi;
    const double radius = (1.0 - policy.band) * g.half_width();
    const double outside = mass_where(psi, [radius](double x, double y) { return x * x + y * y > radius * radius; });
    if (outside > policy.tolerance) {
        throw GridSupportError("spectral_rotate: mass " + std::to_string(outside) +
                                   " lies outside the disk the rotation keeps on the grid",
                               outside);
    }
    Eigen::VectorXcd a = psi.amplitudes();
    RotationPlan(g, theta).apply(engine, a);
    return psi.with_amplitudes(std::move(a));
}

}  // namespace larmor
