#pragma once

#include <cmath>

#include "larmor/core/types.hpp"

namespace larmor {

/// Uniform periodic grid on [-X, X)^dims with N points per axis.
///
/// Points are x_j = -X + j dx, dx = 2X / N. In two dimensions the flat index is
/// ix * N + iy, so the y axis is contiguous.
class Grid {
public:
    Grid(int dims, int points, double half_width) : dims_(dims), n_(points), x_(half_width) {
        require(dims == 1 || dims == 2, "Grid: dims must be 1 or 2");
        require(points >= 16 && (points & (points - 1)) == 0, "Grid: points per axis must be a power of two >= 16");
        require(std::isfinite(half_width) && half_width > 0.0, "Grid: half-width must be positive");
    }

    int dims() const { return dims_; }
    int points() const { return n_; }
    double half_width() const { return x_; }
    double spacing() const { return 2.0 * x_ / n_; }
    long size() const { return dims_ == 1 ? n_ : static_cast<long>(n_) * n_; }
    double cell_volume() const { return dims_ == 1 ? spacing() : spacing() * spacing(); }

    double coordinate(int j) const { return -x_ + j * spacing(); }

    /// Angular wavenumber of FFT bin j (standard FFT ordering).
    double wavenumber(int j) const {
        const int signed_index = (j < n_ / 2) ? j : j - n_;
        return kPi * signed_index / x_;
    }

    long index(int ix, int iy) const { return static_cast<long>(ix) * n_ + iy; }

    bool operator==(const Grid& o) const { return dims_ == o.dims_ && n_ == o.n_ && x_ == o.x_; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    int dims_;
    int n_;
    double x_;
};

}  // namespace larmor
